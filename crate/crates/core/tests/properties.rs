//! Cross-module invariants, checked on random inputs.

use std::collections::BTreeSet;

use braidlab::homs::{permutation_of, psi_map, theta_hat, theta_hat_map, theta_preimage, Permutation};
use braidlab::presentations::{build_presentation, expand_big_t, expand_small_t, expand_to_generators, LHSampler};
use braidlab::reduced_free::{
    artin_act, artin_images_free, braid_is_trivial_disk, lh_trivial_disk, magnus_expand, MultilinearSeries,
};
use braidlab::surface::{abelianization, dehn_reduce, is_trivial_pi1, Pi1Element, Pi1Tuple, SurfaceRelator};
use braidlab::verdict::Verdict;
use braidlab::word::{Family, Generator, GroupContext, Letter, Word};
use proptest::prelude::*;

fn word_over(ctx: GroupContext, alphabet: Vec<Generator>, max_len: usize) -> impl Strategy<Value = Word> {
    let k = alphabet.len();
    prop::collection::vec((0..k, any::<bool>()), 0..=max_len).prop_map(move |picks| {
        let letters = picks.into_iter().map(|(i, inv)| Letter::signed(alphabet[i], inv)).collect();
        Word::new(ctx, letters).unwrap().free_reduce()
    })
}

fn arb_in(ctx: GroupContext, max_len: usize) -> impl Strategy<Value = Word> {
    word_over(ctx, ctx.generators(), max_len)
}

fn arb_symbols(ctx: GroupContext, max_len: usize) -> impl Strategy<Value = Word> {
    word_over(ctx, ctx.symbols(), max_len)
}

fn pi1_word(g: u32, max_len: usize) -> impl Strategy<Value = Word> {
    arb_in(GroupContext::pi1(g).unwrap(), max_len)
}

/// Hand-rolled conjugate of the surface relator, used as a positive sample.
fn relator_conjugate(g: u32, u: &Word, inverse: bool) -> Word {
    let r = SurfaceRelator::new(g).unwrap().word().clone();
    let r = if inverse { r.invert() } else { r };
    r.conjugate_by(u).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn relators_expand_to_ambient_generators(n in 1u32..=4, g in 0u32..=2, fam in 0usize..4, seed in any::<u64>()) {
        let family = [Family::Bn, Family::PBn, Family::HatBn, Family::HatPBn][fam];
        let p = build_presentation(family, n, g).unwrap();
        let ctx = p.context();
        let gens: BTreeSet<Generator> = ctx.generators().into_iter().collect();
        for r in p.relators(&LHSampler::new(3, 4, seed)) {
            let e = expand_to_generators(&r.word);
            prop_assert!(e.letters().iter().all(|l| gens.contains(&l.gen)), "{} {:?}: {}", r.tag, r.indices, e);
            prop_assert!(Word::new(ctx, e.letters().to_vec()).is_ok());
        }
    }

    #[test]
    fn relator_streams_are_deterministic(n in 1u32..=4, g in 1u32..=2, seed in any::<u64>()) {
        let lh = LHSampler::new(4, 8, seed);
        for family in [Family::HatBn, Family::HatPBn] {
            let p = build_presentation(family, n, g).unwrap();
            let a: Vec<_> = p.relators(&lh).collect();
            let b: Vec<_> = p.relators(&lh).collect();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn theta_hat_is_a_homomorphism(
        u in arb_symbols(GroupContext::hat_pure(3, 2).unwrap(), 16),
        v in arb_symbols(GroupContext::hat_pure(3, 2).unwrap(), 16),
    ) {
        let map = theta_hat_map(3, 2).unwrap();
        let uv = map.apply(&u.concat(&v).unwrap()).unwrap();
        let split = map.apply(&u).unwrap().concat(&map.apply(&v).unwrap()).unwrap();
        prop_assert_eq!(uv, split);
    }

    #[test]
    fn psi_is_a_homomorphism(
        u in arb_symbols(GroupContext::hat_braid(4, 1).unwrap(), 12),
        v in arb_symbols(GroupContext::hat_braid(4, 1).unwrap(), 12),
    ) {
        let map = psi_map(4, 1).unwrap();
        let uv = map.apply(&u.concat(&v).unwrap()).unwrap();
        let split = map.apply(&u).unwrap().concat(&map.apply(&v).unwrap()).unwrap();
        prop_assert_eq!(uv, split);
        prop_assert_eq!(permutation_of(&map.apply(&u).unwrap()), permutation_of(&u));
    }

    #[test]
    fn permutation_is_a_homomorphism(u in arb_in(GroupContext::braid(5, 1).unwrap(), 20), v in arb_in(GroupContext::braid(5, 1).unwrap(), 20)) {
        let uv = u.concat(&v).unwrap();
        prop_assert_eq!(permutation_of(&uv), permutation_of(&u).compose(&permutation_of(&v)));
    }

    #[test]
    fn pure_words_have_trivial_permutation(w in arb_symbols(GroupContext::pure(4, 2).unwrap(), 20)) {
        prop_assert!(permutation_of(&w).is_identity());
    }

    #[test]
    fn theta_preimage_is_a_section(
        a in pi1_word(2, 12), b in pi1_word(2, 12), c in pi1_word(2, 12),
    ) {
        let t = Pi1Tuple::new(2, vec![a, b, c]).unwrap();
        let back = theta_hat(&theta_preimage(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn dehn_accepts_normal_closure_members(
        parts in prop::collection::vec((pi1_word(2, 3), any::<bool>()), 1..=3),
    ) {
        let ctx = GroupContext::pi1(2).unwrap();
        let factors: Vec<Word> = parts.iter().map(|(u, inv)| relator_conjugate(2, u, *inv)).collect();
        let w = Word::product(ctx, &factors).unwrap();
        prop_assert_eq!(is_trivial_pi1(&Pi1Element::new(&w).unwrap()), Verdict::Trivial, "{}", w);
    }

    #[test]
    fn dehn_never_lengthens_and_respects_abelianization(w in pi1_word(2, 30)) {
        let el = Pi1Element::new(&w).unwrap();
        let out = dehn_reduce(&el).unwrap();
        prop_assert!(out.len() <= el.word().len());
        prop_assert_eq!(abelianization(&out), abelianization(el.word()));
        if is_trivial_pi1(&el).is_trivial() {
            prop_assert!(abelianization(&w).iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn magnus_is_a_homomorphism(u in arb_in(GroupContext::free(4), 16), v in arb_in(GroupContext::free(4), 16)) {
        let eu = magnus_expand(&u).unwrap();
        let ev = magnus_expand(&v).unwrap();
        prop_assert_eq!(magnus_expand(&u.concat(&v).unwrap()).unwrap(), eu.mul(&ev));
        prop_assert!(magnus_expand(&u.invert()).unwrap().mul(&eu).is_one());
        prop_assert!(eu.degree() <= 4);
    }

    #[test]
    fn series_action_agrees_with_free_group_action(w in arb_symbols(GroupContext::braid(4, 0).unwrap(), 6)) {
        let endo = artin_act(&w).unwrap();
        for (k, img) in artin_images_free(&w).unwrap().iter().enumerate() {
            prop_assert_eq!(endo.image(k as u32 + 1), &magnus_expand(img).unwrap());
        }
    }

    #[test]
    fn disk_braid_relations_are_trivial(i in 1u32..=4, j in 1u32..=4) {
        let ctx = GroupContext::braid(5, 0).unwrap();
        let rel = if i.abs_diff(j) >= 2 {
            format!("[s{i}, s{j}]")
        } else {
            let k = i.min(j);
            format!("s{k} s{} s{k} s{}^-1 s{k}^-1 s{}^-1", k + 1, k + 1, k + 1)
        };
        if i.abs_diff(j) >= 2 || i.min(j) < 4 {
            prop_assert_eq!(braid_is_trivial_disk(&Word::parse(&rel, ctx).unwrap()).unwrap(), Verdict::Trivial);
        }
    }
}

/// Series over `k` letters can only hold monomials of pairwise distinct indices.
#[test]
fn series_size_is_bounded() {
    let k = 6u32;
    let mut s = MultilinearSeries::one(k);
    for i in 1..=k {
        s = s.mul(&MultilinearSeries::one(k).add(&MultilinearSeries::variable(k, i)));
    }
    // (1 + X1)...(1 + X6) holds one increasing monomial per subset
    assert_eq!(s.len(), 64);
    let bound: usize = (0..=k as usize).map(|d| (k as usize - d + 1..=k as usize).product::<usize>()).sum();
    assert_eq!(bound, 1957);
    let ctx = GroupContext::free(k);
    let w = Word::parse("[x1 x2 x3, x4 x5 x6] [x6 x1, x3 x5 x2] x4", ctx).unwrap();
    let e = magnus_expand(&w).unwrap();
    assert!(e.len() <= bound && e.degree() <= k as usize);
}

#[test]
fn every_small_permutation_is_a_short_sigma_word() {
    for n in 1..=4u32 {
        let ctx = GroupContext::braid(n, 0).unwrap();
        let mut seen = BTreeSet::from([Permutation::identity(n).images().to_vec()]);
        let mut frontier = vec![Word::empty(ctx)];
        for _ in 0..6 {
            let mut next = Vec::new();
            for w in &frontier {
                for i in 1..n {
                    let v = w.concat(&Word::parse(&format!("s{i}"), ctx).unwrap()).unwrap();
                    if seen.insert(permutation_of(&v).images().to_vec()) {
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        let factorial: usize = (1..=n as usize).product();
        assert_eq!(seen.len(), factorial, "n = {n}");
    }
}

#[test]
fn pure_generators_are_not_link_homotopically_trivial() {
    for n in 2..=4 {
        let ctx = GroupContext::pure(n, 0).unwrap();
        for gen in ctx.generators() {
            let w = Word::from_gens(ctx, [gen]).unwrap();
            assert_eq!(lh_trivial_disk(&w).unwrap(), Verdict::Nontrivial, "{w}");
        }
    }
}

/// `t_{1,j}` is `s_{j-1}^2` conjugated by `s_1 ... s_{j-2}`, and in the disk
/// `T_{1,j} = t_{1,j} t_{1,j-1} ... t_{1,2}`. `T_{1,j}` itself is not a
/// conjugate of `s_{j-1}^2` once `j >= 3`: its exponent sum is `2(j - 1)`.
#[test]
fn small_and_big_t_relations() {
    for n in 2..=5u32 {
        let ctx = GroupContext::braid(n, 0).unwrap();
        for j in 2..=n {
            let prefix = Word::product(ctx, &(1..j - 1).map(|k| Word::parse(&format!("s{k}"), ctx).unwrap()).collect::<Vec<_>>()).unwrap();
            let square = Word::parse(&format!("s{}^2", j - 1), ctx).unwrap();
            assert_eq!(expand_small_t(1, j, ctx).unwrap(), square.conjugate_by(&prefix).unwrap());

            let big = expand_big_t(1, j, ctx).unwrap();
            let smalls: Vec<Word> = (2..=j).rev().map(|k| expand_small_t(1, k, ctx).unwrap()).collect();
            let product = Word::product(ctx, &smalls).unwrap();
            let quotient = big.concat(&product.invert()).unwrap();
            assert_eq!(braid_is_trivial_disk(&quotient).unwrap(), Verdict::Trivial, "T1.{j}");
            let sum: i64 = big.exponent_sums().values().sum();
            assert_eq!(sum, 2 * (j as i64 - 1));
            assert!(permutation_of(&big).is_identity());
        }
    }
}

/// The disk relations of the pure braid presentation hold in the Artin
/// braid group itself, not only up to link-homotopy.
#[test]
fn disk_pure_relations_hold_in_the_braid_group() {
    for n in 2..=5 {
        let p = build_presentation(Family::PBn, n, 0).unwrap();
        let braid = GroupContext::braid(n, 0).unwrap();
        for r in p.relators(&LHSampler::default()) {
            let expanded = expand_to_generators(&r.word);
            let as_sigmas = Word::product(
                braid,
                &expanded
                    .letters()
                    .iter()
                    .map(|l| {
                        let Generator::BigT(i, j) = l.gen else { panic!("{l}") };
                        let t = expand_big_t(i, j, braid).unwrap();
                        if l.inverse { t.invert() } else { t }
                    })
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            assert_eq!(braid_is_trivial_disk(&as_sigmas).unwrap(), Verdict::Trivial, "{} {:?}", r.tag, r.indices);
        }
    }
}
