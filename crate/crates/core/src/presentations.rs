//! Finite presentations of `B_n(M)`, `PB_n(M)` and their link-homotopy
//! quotients, the derived words `T_{i,j}`, `t_{i,j}`, `A_{j,s}`, and bounded
//! enumeration of every relator family.
//!
//! Relators are single words `LHS * RHS^-1`. They may contain derived symbols
//! (`T`, `t`, `A`) that are admitted by the context; [`expand_to_generators`]
//! rewrites them over the presentation's generating set.
//!
//! Conventions that the defining formulas leave open:
//! * `T_{i,i}` is the empty word.
//! * The link-homotopy conjugators `h` for strand `i` are drawn from the free
//!   group on `a_{i,1..2g}` and `t_{i,i+1..n}` (rank `2g + n - i`).

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::rng::rng_for;
use crate::word::{push_reduced, Family, FnImages, Generator, GroupContext, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("no presentation for {0}")]
    Unsupported(String),
    #[error("index violation: {0}")]
    Index(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Which displayed relation a family instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tag {
    PR1,
    PR2,
    PR3,
    PR4,
    PR5,
    PR6,
    PR7,
    PR8,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    LH1,
    LH,
}

impl Tag {
    pub fn is_link_homotopy(self) -> bool {
        matches!(self, Tag::LH1 | Tag::LH)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn sa(i: u32, r: u32) -> Letter {
    Letter::new(Generator::SurfA(i, r))
}

fn sigma(i: u32) -> Letter {
    Letter::new(Generator::Sigma(i))
}

/// Small builder that keeps its letters freely reduced.
#[derive(Default)]
struct Acc(Vec<Letter>);

impl Acc {
    fn push(&mut self, l: Letter) -> &mut Self {
        push_reduced(&mut self.0, l);
        self
    }

    fn extend(&mut self, ls: impl IntoIterator<Item = Letter>) -> &mut Self {
        for l in ls {
            self.push(l);
        }
        self
    }

    fn extend_inv(&mut self, ls: &[Letter]) -> &mut Self {
        for &l in ls.iter().rev() {
            self.push(l.inv());
        }
        self
    }

    /// `T_{i,j}` as a symbol; empty when `i == j`.
    fn big_t(&mut self, i: u32, j: u32, inverse: bool) -> &mut Self {
        if i != j {
            self.push(Letter::signed(Generator::BigT(i, j), inverse));
        }
        self
    }

    fn take(&mut self) -> Vec<Letter> {
        std::mem::take(&mut self.0)
    }
}

fn commutator_letters(u: &[Letter], v: &[Letter]) -> Vec<Letter> {
    let mut acc = Acc::default();
    acc.extend(u.iter().copied()).extend(v.iter().copied()).extend_inv(u).extend_inv(v);
    acc.take()
}

fn braid_ctx(ctx: GroupContext) -> Result<GroupContext, WordError> {
    ctx.with_family(Family::Bn)
}

/// `s_i s_{i+1} ... s_{j-2} s_{j-1}^2 s_{j-2} ... s_i`, empty when `i == j`.
fn big_t_sigma_letters(i: u32, j: u32) -> Vec<Letter> {
    if i == j {
        return Vec::new();
    }
    let mut out: Vec<Letter> = (i..j - 1).map(sigma).collect();
    out.push(sigma(j - 1));
    out.push(sigma(j - 1));
    out.extend((i..j - 1).rev().map(sigma));
    out
}

/// `s_i ... s_{j-2} s_{j-1}^2 s_{j-2}^-1 ... s_i^-1`.
fn small_t_sigma_letters(i: u32, j: u32) -> Vec<Letter> {
    let mut out: Vec<Letter> = (i..j - 1).map(sigma).collect();
    out.push(sigma(j - 1));
    out.push(sigma(j - 1));
    out.extend((i..j - 1).rev().map(|k| sigma(k).inv()));
    out
}

/// `a_{j,1} ... a_{j,s-1} a_{j,s+1}^-1 ... a_{j,2g}^-1`.
fn cap_a_surface_letters(j: u32, s: u32, g: u32) -> Vec<Letter> {
    (1..s).map(|r| sa(j, r)).chain((s + 1..=2 * g).map(|r| sa(j, r).inv())).collect()
}

fn check_pair(i: u32, j: u32, ctx: GroupContext) -> Result<(), PresentationError> {
    if 1 <= i && i < j && j <= ctx.n() {
        Ok(())
    } else {
        Err(PresentationError::Index(format!("need 1 <= i < j <= n, got i={i} j={j} n={}", ctx.n())))
    }
}

/// The braid word of `T_{i,j}` in `B_n` over the same surface.
pub fn expand_big_t(i: u32, j: u32, ctx: GroupContext) -> Result<Word, PresentationError> {
    check_pair(i, j, ctx)?;
    Ok(Word::from_raw(braid_ctx(ctx)?, big_t_sigma_letters(i, j)))
}

/// The braid word of `t_{i,j}`; `t_{1,j}` is the generator used by `B^_n(M)`.
pub fn expand_small_t(i: u32, j: u32, ctx: GroupContext) -> Result<Word, PresentationError> {
    check_pair(i, j, ctx)?;
    Ok(Word::from_raw(braid_ctx(ctx)?, small_t_sigma_letters(i, j)))
}

/// `A_{j,s}`. In braid contexts (`Bn`, `HatBn`) only `j = 2` exists and it is
/// the `s_1^-1`-conjugated variant built from strand-1 generators.
pub fn expand_cap_a(j: u32, s: u32, ctx: GroupContext) -> Result<Word, PresentationError> {
    let g = ctx.g();
    if g == 0 || !(1..=2 * g).contains(&s) {
        return Err(PresentationError::Index(format!("A_{{{j},{s}}} needs 1 <= s <= 2g with g >= 1")));
    }
    match ctx.family() {
        Family::Bn | Family::HatBn => {
            if j != 2 || ctx.n() < 2 {
                return Err(PresentationError::Index(format!("braid contexts only define A_{{2,s}}, got j={j}")));
            }
            let mut acc = Acc::default();
            acc.push(sigma(1).inv()).extend(cap_a_surface_letters(1, s, g)).push(sigma(1).inv());
            Ok(Word::from_raw(ctx, acc.take()))
        }
        Family::PBn | Family::HatPBn | Family::Pi1Power => {
            if !(1..=ctx.n()).contains(&j) {
                return Err(PresentationError::Index(format!("strand {j} out of range 1..={}", ctx.n())));
            }
            Ok(Word::from_raw(ctx, cap_a_surface_letters(j, s, g)))
        }
        other => Err(PresentationError::Unsupported(format!("A_{{j,s}} in {}", other.name()))),
    }
}

/// Generator-level word for one symbol of `ctx` (identity on generators).
fn symbol_expansion(ctx: GroupContext, gen: Generator) -> Option<Vec<Letter>> {
    use Generator::*;
    if !ctx.admits(gen) {
        return None;
    }
    let g = ctx.g();
    Some(match (ctx.family(), gen) {
        (Family::Bn | Family::HatBn, BigT(i, j)) => big_t_sigma_letters(i, j),
        (Family::Bn | Family::HatBn, SmallT(i, j)) => small_t_sigma_letters(i, j),
        (Family::Bn | Family::HatBn, CapA(_, s)) => {
            let mut acc = Acc::default();
            acc.push(sigma(1).inv()).extend(cap_a_surface_letters(1, s, g)).push(sigma(1).inv());
            acc.take()
        }
        (Family::PBn, SmallT(i, j)) => {
            let mut acc = Acc::default();
            acc.big_t(i, j, false).big_t(i, j - 1, true);
            acc.take()
        }
        (Family::HatPBn, BigT(i, j)) => (i + 1..=j).rev().map(|k| Letter::new(SmallT(i, k))).collect(),
        (Family::PBn | Family::HatPBn, CapA(j, s)) => cap_a_surface_letters(j, s, g),
        _ => vec![Letter::new(gen)],
    })
}

/// Rewrites every derived symbol (`T`, `t`, `A` where they are not generators)
/// over the generating set of the word's own group. The result is reduced.
pub fn expand_to_generators(w: &Word) -> Word {
    let ctx = w.context();
    let images = FnImages::new(ctx, |gen| symbol_expansion(ctx, gen).map(|ls| Word::from_raw(ctx, ls)));
    w.substitute(&images).expect("every admitted symbol has an expansion")
}

/// One relator instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relator {
    pub tag: Tag,
    pub indices: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<Word>,
    pub word: Word,
}

/// A displayed relation together with its admissible index tuples.
#[derive(Debug, Clone)]
pub struct RelatorFamily {
    tag: Tag,
    ctx: GroupContext,
    tuples: Vec<Vec<u32>>,
}

impl RelatorFamily {
    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn index_tuples(&self) -> &[Vec<u32>] {
        &self.tuples
    }

    pub fn is_vacuous(&self) -> bool {
        self.tuples.is_empty()
    }

    /// The relator for one index tuple. Link-homotopy families need `h`.
    pub fn emit(&self, idx: &[u32], h: Option<&Word>) -> Word {
        let ctx = self.ctx;
        let (n, g) = (ctx.n(), ctx.g());
        let a_run = |i: u32, r: u32| (1..=r).map(move |q| sa(i, q)).collect::<Vec<_>>();
        let mut acc = Acc::default();
        match self.tag {
            Tag::PR1 => {
                acc.extend((1..=2 * g).map(|r| sa(n, r).inv())).extend((1..=2 * g).map(|r| sa(n, r)));
                // (prod_i T_{i,n-1}^-1 T_{i,n})^-1
                for i in (1..n).rev() {
                    acc.big_t(i, n, true).big_t(i, n - 1, false);
                }
            }
            Tag::PR2 => {
                let [i, j, r, s] = [idx[0], idx[1], idx[2], idx[3]];
                return self.word(commutator_letters(&[sa(i, r)], &cap_a(j, s)));
            }
            Tag::PR3 => {
                let [i, j, r] = [idx[0], idx[1], idx[2]];
                let run = a_run(i, r);
                let a = cap_a(j, r);
                acc.extend(run.iter().copied()).extend(a.iter().copied()).extend_inv(&run).extend_inv(&a);
                acc.big_t(i, j - 1, false).big_t(i, j, true);
            }
            Tag::PR4 => {
                let [i, j, k, l] = [idx[0], idx[1], idx[2], idx[3]];
                return self.word(commutator_letters(&[big_t(i, j)], &[big_t(k, l)]));
            }
            Tag::PR5 => {
                let [i, j, k, l] = [idx[0], idx[1], idx[2], idx[3]];
                acc.big_t(k, l, false).big_t(i, j, false).big_t(k, l, true);
                // inverse of T_{i,k-1} T_{i,k}^-1 T_{i,j} T_{i,l}^-1 T_{i,k} T_{i,k-1}^-1 T_{i,l}
                acc.big_t(i, l, true)
                    .big_t(i, k - 1, false)
                    .big_t(i, k, true)
                    .big_t(i, l, false)
                    .big_t(i, j, true)
                    .big_t(i, k, false)
                    .big_t(i, k - 1, true);
            }
            Tag::PR6 => {
                let [i, j, k, r] = [idx[0], idx[1], idx[2], idx[3]];
                return self.word(commutator_letters(&[sa(i, r)], &[big_t(j, k)]));
            }
            Tag::PR7 => {
                let [i, j, k, r] = [idx[0], idx[1], idx[2], idx[3]];
                let mut c = Acc::default();
                c.extend((1..=2 * g).rev().map(|q| sa(j, q).inv()))
                    .big_t(j, k, false)
                    .extend((1..=2 * g).rev().map(|q| sa(j, q)));
                return self.word(commutator_letters(&[sa(i, r)], &c.take()));
            }
            Tag::PR8 => {
                let j = idx[0];
                let mut rhs = Acc::default();
                for i in 1..j {
                    rhs.extend((1..=2 * g).rev().map(|q| sa(i, q).inv()))
                        .big_t(i, j - 1, false)
                        .big_t(i, j, true)
                        .extend((1..=2 * g).map(|q| sa(i, q)));
                }
                rhs.extend((1..=2 * g).map(|q| sa(j, q))).extend((1..=2 * g).map(|q| sa(j, q).inv()));
                acc.big_t(j, n, false).extend_inv(&rhs.take());
            }
            Tag::LH1 | Tag::LH => {
                let (i, j) = if self.tag == Tag::LH { (1, idx[0]) } else { (idx[0], idx[1]) };
                let t = Letter::new(Generator::SmallT(i, j));
                let h = h.map(|w| w.letters().to_vec()).unwrap_or_default();
                let mut conj = Acc::default();
                conj.extend(h.iter().copied()).push(t).extend_inv(&h);
                return self.word(commutator_letters(&[t], &conj.take()));
            }
            Tag::R1 => return self.word(commutator_letters(&[sigma(idx[0])], &[sigma(idx[1])])),
            Tag::R2 => {
                let i = idx[0];
                acc.extend([sigma(i), sigma(i + 1), sigma(i), sigma(i + 1).inv(), sigma(i).inv(), sigma(i + 1).inv()]);
            }
            Tag::R3 => {
                acc.extend((1..=2 * g).map(|r| sa(1, r))).extend((1..=2 * g).map(|r| sa(1, r).inv()));
                acc.big_t(1, n, true);
            }
            Tag::R4 => {
                let [r, s] = [idx[0], idx[1]];
                return self.word(commutator_letters(&[sa(1, r)], &[cap_a2(s)]));
            }
            Tag::R5 => {
                let r = idx[0];
                let run = a_run(1, r);
                // (a run) A (a run)^-1 A^-1 s1^-2
                acc.extend(run.iter().copied()).push(cap_a2(r)).extend_inv(&run).push(cap_a2(r).inv());
                acc.push(sigma(1).inv()).push(sigma(1).inv());
            }
            Tag::R6 => {
                let [r, i] = [idx[0], idx[1]];
                return self.word(commutator_letters(&[sa(1, r)], &[sigma(i)]));
            }
        }
        self.word(acc.take())
    }

    fn word(&self, letters: Vec<Letter>) -> Word {
        let mut reduced = Vec::with_capacity(letters.len());
        for l in letters {
            push_reduced(&mut reduced, l);
        }
        Word::from_raw(self.ctx, reduced)
    }
}

fn big_t(i: u32, j: u32) -> Letter {
    Letter::new(Generator::BigT(i, j))
}

fn cap_a(j: u32, s: u32) -> Vec<Letter> {
    vec![Letter::new(Generator::CapA(j, s))]
}

fn cap_a2(s: u32) -> Letter {
    Letter::new(Generator::CapA(2, s))
}

/// Bounded deterministic sampler for the conjugators `h` of the infinite
/// link-homotopy family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LHSampler {
    pub max_h_length: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for LHSampler {
    fn default() -> Self {
        Self { max_h_length: 4, samples: 64, seed: 0 }
    }
}

impl LHSampler {
    pub fn new(max_h_length: usize, samples: usize, seed: u64) -> Self {
        Self { max_h_length, samples, seed }
    }

    /// The free basis `a_{i,1..2g}, t_{i,i+1..n}` used for strand `i`.
    pub fn alphabet(ctx: GroupContext, i: u32) -> Vec<Generator> {
        (1..=2 * ctx.g())
            .map(|r| Generator::SurfA(i, r))
            .chain((i + 1..=ctx.n()).map(|k| Generator::SmallT(i, k)))
            .collect()
    }

    /// Distinct freely reduced conjugators for the pair `(i, j)` whose
    /// commutator relator does not freely cancel. Fewer than `samples` are
    /// returned only when the alphabet cannot supply them.
    pub fn conjugators(&self, ctx: GroupContext, i: u32, j: u32) -> Vec<Word> {
        let alphabet = Self::alphabet(ctx, i);
        let mut out = Vec::new();
        if alphabet.is_empty() || self.max_h_length == 0 {
            return out;
        }
        let t = Generator::SmallT(i, j);
        let mut seen = BTreeSet::new();
        let mut rng = rng_for(self.seed, &[0x4c48, i as u64, j as u64, ctx.n() as u64, ctx.g() as u64]);
        let mut attempts = 0;
        while out.len() < self.samples && attempts < self.samples * 32 {
            attempts += 1;
            let len = rng.random_range(1..=self.max_h_length);
            let h = crate::rng::random_reduced_word(&mut rng, ctx, &alphabet, len);
            // h a power of t gives a freely trivial commutator.
            if h.letters().iter().all(|l| l.gen == t) || !seen.insert(h.clone()) {
                continue;
            }
            out.push(h);
        }
        out
    }
}

/// Generators plus relator families for one of the four groups.
#[derive(Debug, Clone)]
pub struct Presentation {
    ctx: GroupContext,
    generators: Vec<Generator>,
    families: Vec<RelatorFamily>,
}

fn pairs(n: u32) -> impl Iterator<Item = (u32, u32)> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

fn quads(n: u32) -> impl Iterator<Item = [u32; 4]> {
    let r = move || 1..=n;
    r().flat_map(move |a| r().flat_map(move |b| r().flat_map(move |c| r().map(move |d| [a, b, c, d]))))
}

/// Builds the presentation of `family` on `n` strands over the genus-`g`
/// surface; `g = 0` gives the disk version (only the relations that do not
/// involve surface generators).
pub fn build_presentation(family: Family, n: u32, g: u32) -> Result<Presentation, PresentationError> {
    if !family.is_surface_braid() {
        return Err(PresentationError::Unsupported(family.name()));
    }
    let ctx = GroupContext::new(family, n, g)?;
    let hat = matches!(family, Family::HatBn | Family::HatPBn);
    let h2 = 2 * g;
    // the link-homotopy presentations cap s (and r in PR3/R5) at 2g - 1
    let s_max = if hat { h2.saturating_sub(1) } else { h2 };
    let mut fams: Vec<(Tag, Vec<Vec<u32>>)> = Vec::new();
    match family {
        Family::PBn | Family::HatPBn => {
            if hat {
                fams.push((Tag::LH1, pairs(n).map(|(i, j)| vec![i, j]).collect()));
            }
            let surface = g >= 1;
            if surface {
                fams.push((Tag::PR1, vec![vec![]]));
                let mut pr2 = Vec::new();
                for (i, j) in pairs(n) {
                    for r in 1..=h2 {
                        for s in (1..=s_max).filter(|&s| s != r) {
                            pr2.push(vec![i, j, r, s]);
                        }
                    }
                }
                fams.push((Tag::PR2, pr2));
                let pr3 = pairs(n).flat_map(|(i, j)| (1..=s_max).map(move |r| vec![i, j, r])).collect();
                fams.push((Tag::PR3, pr3));
            }
            let pr4 = quads(n)
                .filter(|&[i, j, k, l]| (i < j && j < k && k < l) || (i < k && k < l && l <= j))
                .map(|q| q.to_vec())
                .collect();
            fams.push((Tag::PR4, pr4));
            let pr5 = quads(n)
                .filter(|&[i, j, k, l]| i < k && k <= j && j < l)
                .map(|q| q.to_vec())
                .collect();
            fams.push((Tag::PR5, pr5));
            if surface {
                let mut pr6 = Vec::new();
                let mut pr7 = Vec::new();
                for [i, j, k, _] in quads(n).filter(|q| q[3] == 1) {
                    if (i < j && j < k) || (j < k && k < i) {
                        pr6.extend((1..=h2).map(|r| vec![i, j, k, r]));
                    }
                    if j < i && i <= k {
                        pr7.extend((1..=h2).map(|r| vec![i, j, k, r]));
                    }
                }
                fams.push((Tag::PR6, pr6));
                fams.push((Tag::PR7, pr7));
                fams.push((Tag::PR8, (1..n).map(|j| vec![j]).collect()));
            }
        }
        Family::Bn | Family::HatBn => {
            if hat {
                fams.push((Tag::LH, (2..=n).map(|j| vec![j]).collect()));
            }
            let r1 = pairs(n.saturating_sub(1)).filter(|(i, j)| j - i >= 2).map(|(i, j)| vec![i, j]).collect();
            fams.push((Tag::R1, r1));
            fams.push((Tag::R2, (1..=n.saturating_sub(2)).map(|i| vec![i]).collect()));
            if g >= 1 {
                fams.push((Tag::R3, vec![vec![]]));
                let mut r4 = Vec::new();
                let mut r5 = Vec::new();
                if n >= 2 {
                    for r in 1..=h2 {
                        r4.extend((1..=s_max).filter(|&s| s != r).map(|s| vec![r, s]));
                    }
                    r5.extend((1..=s_max).map(|r| vec![r]));
                }
                fams.push((Tag::R4, r4));
                fams.push((Tag::R5, r5));
                let r6 = (1..=h2).flat_map(|r| (2..n).map(move |i| vec![r, i])).collect();
                fams.push((Tag::R6, r6));
            }
        }
        _ => unreachable!("checked above"),
    }
    let families = fams.into_iter().map(|(tag, tuples)| RelatorFamily { tag, ctx, tuples }).collect();
    Ok(Presentation { ctx, generators: ctx.generators(), families })
}

impl Presentation {
    pub fn context(&self) -> GroupContext {
        self.ctx
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn families(&self) -> &[RelatorFamily] {
        &self.families
    }

    pub fn family(&self, tag: Tag) -> Option<&RelatorFamily> {
        self.families.iter().find(|f| f.tag == tag)
    }

    pub fn has_link_homotopy_family(&self) -> bool {
        self.families.iter().any(|f| f.tag.is_link_homotopy())
    }

    /// Deterministic stream of relators. Finite families are emitted once per
    /// index tuple; link-homotopy families once per sampled conjugator.
    pub fn relators<'a>(&'a self, lh: &'a LHSampler) -> impl Iterator<Item = Relator> + 'a {
        self.families.iter().flat_map(move |fam| {
            fam.tuples.iter().flat_map(move |idx| {
                let hs: Vec<Option<Word>> = if fam.tag.is_link_homotopy() {
                    let (i, j) = if fam.tag == Tag::LH { (1, idx[0]) } else { (idx[0], idx[1]) };
                    lh.conjugators(self.ctx, i, j).into_iter().map(Some).collect()
                } else {
                    vec![None]
                };
                hs.into_iter().map(move |h| Relator {
                    tag: fam.tag,
                    indices: idx.clone(),
                    word: fam.emit(idx, h.as_ref()),
                    h,
                })
            })
        })
    }

    pub fn catalogue(&self, lh: &LHSampler) -> Catalogue {
        Catalogue {
            context: self.ctx.to_string(),
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            relators: self.relators(lh).collect(),
        }
    }
}

/// Free-function form of [`Presentation::relators`].
pub fn enumerate_relators<'a>(p: &'a Presentation, lh: &'a LHSampler) -> impl Iterator<Item = Relator> + 'a {
    p.relators(lh)
}

/// JSON catalogue of a presentation.
#[derive(Debug, Clone, Serialize)]
pub struct Catalogue {
    pub context: String,
    pub generators: Vec<String>,
    pub relators: Vec<Relator>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid(n: u32) -> GroupContext {
        GroupContext::braid(n, 1).unwrap()
    }

    #[test]
    fn big_t_formula() {
        assert_eq!(expand_big_t(1, 2, braid(2)).unwrap().to_string(), "s1 s1");
        assert_eq!(expand_big_t(1, 3, braid(3)).unwrap().to_string(), "s1 s2 s2 s1");
        assert_eq!(expand_big_t(2, 4, braid(4)).unwrap().to_string(), "s2 s3 s3 s2");
        assert!(expand_big_t(2, 2, braid(3)).is_err());
        assert!(expand_big_t(1, 4, braid(3)).is_err());
    }

    #[test]
    fn small_t_formula() {
        assert_eq!(expand_small_t(1, 2, braid(4)).unwrap().to_string(), "s1 s1");
        assert_eq!(expand_small_t(1, 3, braid(4)).unwrap().to_string(), "s1 s2 s2 s1^-1");
        assert_eq!(expand_small_t(1, 4, braid(4)).unwrap().to_string(), "s1 s2 s3 s3 s2^-1 s1^-1");
    }

    #[test]
    fn cap_a_formula() {
        let p1 = GroupContext::pure(2, 1).unwrap();
        assert_eq!(expand_cap_a(2, 1, p1).unwrap().to_string(), "a2.2^-1");
        let p2 = GroupContext::pure(2, 2).unwrap();
        assert_eq!(expand_cap_a(2, 2, p2).unwrap().to_string(), "a2.1 a2.3^-1 a2.4^-1");
        let hb = GroupContext::hat_braid(2, 1).unwrap();
        assert_eq!(expand_cap_a(2, 1, hb).unwrap().to_string(), "s1^-1 a1.2^-1 s1^-1");
        assert!(expand_cap_a(3, 1, GroupContext::hat_braid(3, 1).unwrap()).is_err());
        assert!(expand_cap_a(2, 3, p1).is_err());
    }

    #[test]
    fn big_t_in_hat_pure_is_a_product_of_small_t() {
        let ctx = GroupContext::hat_pure(4, 1).unwrap();
        let w = Word::parse("T1.4", ctx).unwrap();
        assert_eq!(expand_to_generators(&w).to_string(), "t1.4 t1.3 t1.2");
        let w = Word::parse("A1.2", ctx).unwrap();
        assert_eq!(expand_to_generators(&w).to_string(), "a1.1");
    }

    #[test]
    fn small_hat_braid_presentation() {
        let p = build_presentation(Family::HatBn, 2, 1).unwrap();
        assert_eq!(p.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["s1", "a1.1", "a1.2"]);
        let sizes: Vec<(Tag, usize)> = p.families().iter().map(|f| (f.tag(), f.index_tuples().len())).collect();
        assert_eq!(
            sizes,
            [(Tag::LH, 1), (Tag::R1, 0), (Tag::R2, 0), (Tag::R3, 1), (Tag::R4, 1), (Tag::R5, 1), (Tag::R6, 0)]
        );
    }

    #[test]
    fn one_strand_pure_is_the_surface_group() {
        let p = build_presentation(Family::PBn, 1, 1).unwrap();
        let live: Vec<Tag> = p.families().iter().filter(|f| !f.is_vacuous()).map(|f| f.tag()).collect();
        assert_eq!(live, [Tag::PR1]);
        let rels: Vec<Relator> = p.relators(&LHSampler::default()).collect();
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].word.to_string(), "a1.1^-1 a1.2^-1 a1.1 a1.2");
    }

    #[test]
    fn three_strand_braid_counts() {
        let p = build_presentation(Family::Bn, 3, 1).unwrap();
        assert!(p.family(Tag::R1).unwrap().is_vacuous());
        assert_eq!(p.family(Tag::R2).unwrap().index_tuples().len(), 1);
    }

    #[test]
    fn pr1_for_two_strands() {
        let p = build_presentation(Family::PBn, 2, 1).unwrap();
        let r = p.relators(&LHSampler::default()).find(|r| r.tag == Tag::PR1).unwrap();
        assert_eq!(r.word.to_string(), "a2.1^-1 a2.2^-1 a2.1 a2.2 T1.2^-1");
    }

    #[test]
    fn lh1_with_surface_conjugator() {
        let p = build_presentation(Family::HatPBn, 2, 1).unwrap();
        let h = Word::parse("a1.1", p.context()).unwrap();
        let w = p.family(Tag::LH1).unwrap().emit(&[1, 2], Some(&h));
        assert_eq!(w.len(), 8);
        assert_eq!(w.to_string(), "t1.2 a1.1 t1.2 a1.1^-1 t1.2^-1 a1.1 t1.2^-1 a1.1^-1");
    }

    #[test]
    fn sampler_is_deterministic_and_bounded() {
        let ctx = GroupContext::hat_pure(3, 1).unwrap();
        let lh = LHSampler::new(4, 64, 11);
        let a = lh.conjugators(ctx, 1, 2);
        assert_eq!(a, lh.conjugators(ctx, 1, 2));
        assert_eq!(a.len(), 64);
        let basis = LHSampler::alphabet(ctx, 1);
        assert_eq!(basis.len(), 2 + 3 - 1);
        for h in &a {
            assert!(h.is_reduced() && !h.is_empty() && h.len() <= 4);
            assert!(h.letters().iter().all(|l| basis.contains(&l.gen)));
        }
        assert_ne!(a, LHSampler::new(4, 64, 12).conjugators(ctx, 1, 2));
    }

    #[test]
    fn disk_presentations_drop_surface_relations() {
        let p = build_presentation(Family::PBn, 4, 0).unwrap();
        let tags: Vec<Tag> = p.families().iter().map(|f| f.tag()).collect();
        assert_eq!(tags, [Tag::PR4, Tag::PR5]);
        let p = build_presentation(Family::HatBn, 4, 0).unwrap();
        let tags: Vec<Tag> = p.families().iter().map(|f| f.tag()).collect();
        assert_eq!(tags, [Tag::LH, Tag::R1, Tag::R2]);
        assert!(build_presentation(Family::Free(2), 2, 0).is_err());
    }

    #[test]
    fn relators_are_reduced_and_nonempty() {
        for fam in [Family::Bn, Family::PBn, Family::HatBn, Family::HatPBn] {
            for n in 1..=4 {
                for g in 0..=2 {
                    let p = build_presentation(fam, n, g).unwrap();
                    for r in p.relators(&LHSampler::new(3, 8, 1)) {
                        assert!(r.word.is_reduced(), "{:?} {:?}", r.tag, r.indices);
                        assert!(!r.word.is_empty(), "{fam:?} n={n} g={g} {:?} {:?}", r.tag, r.indices);
                    }
                }
            }
        }
    }
}
