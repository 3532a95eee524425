//! Homomorphisms given by generator images, target triviality oracles, and the
//! maps of the exact sequences: `f_n`, `f^_n`, `p_1`, `p_2`, `theta_n`,
//! `theta^_n`, the projection `p: B_n(M) -> B^_n(M)` and the permutation map
//! `psi: B^_n(M) -> S_n`.

use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use crate::permutation::{permutation_of, Permutation};
use crate::presentations::{build_presentation, expand_to_generators, LHSampler, Presentation, PresentationError, Relator, Tag};
use crate::reduced_free::{braid_is_trivial_disk, lh_trivial_disk};
use crate::surface::{tuple_is_trivial, Pi1Tuple, SurfaceError};
use crate::verdict::Verdict;
use crate::word::{push_reduced, Family, Generator, GroupContext, ImageTable, Images, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("word lives in {found}, map expects {expected}")]
    Context { expected: GroupContext, found: GroupContext },
    #[error("no image for generator {0}")]
    Missing(Generator),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Decides (or semi-decides) whether a word of the target group is trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrivialityOracle {
    /// `pi1(M)^n`: componentwise Dehn or abelianization, exact.
    Pi1Power,
    /// `S_n`: the induced permutation, exact.
    Symmetric,
    /// Disk braid groups: faithful Artin action, exact.
    DiskBraid,
    /// Link-homotopy disk groups: permutation plus reduced Artin action, exact.
    DiskLinkHomotopy,
    /// Anything else: trivial when the word freely reduces to nothing,
    /// otherwise unknown.
    FreeReduction,
}

impl TrivialityOracle {
    pub fn for_context(ctx: GroupContext) -> Self {
        match ctx.family() {
            Family::Pi1Power => Self::Pi1Power,
            Family::Symmetric => Self::Symmetric,
            Family::Bn | Family::PBn if ctx.is_disk() => Self::DiskBraid,
            Family::HatBn | Family::HatPBn if ctx.is_disk() => Self::DiskLinkHomotopy,
            _ => Self::FreeReduction,
        }
    }

    pub fn is_exact(self) -> bool {
        self != Self::FreeReduction
    }

    pub fn decide(self, w: &Word) -> Verdict {
        let reduced = w.free_reduce();
        if reduced.is_empty() {
            return Verdict::Trivial;
        }
        match self {
            Self::Pi1Power => match Pi1Tuple::from_power_word(&reduced) {
                Ok(t) => tuple_is_trivial(&t),
                Err(_) => Verdict::Unknown,
            },
            Self::Symmetric => Verdict::from_bool(permutation_of(&reduced).is_identity()),
            Self::DiskBraid => braid_is_trivial_disk(&reduced).unwrap_or(Verdict::Unknown),
            Self::DiskLinkHomotopy => {
                if !permutation_of(&reduced).is_identity() {
                    Verdict::Nontrivial
                } else {
                    lh_trivial_disk(&reduced).unwrap_or(Verdict::Unknown)
                }
            }
            Self::FreeReduction => Verdict::Unknown,
        }
    }
}

/// A homomorphism candidate from a presented group, given by the images of
/// its symbols. Symbols without a table entry are first rewritten over the
/// domain generators.
#[derive(Debug, Clone)]
pub struct GeneratorMap {
    name: String,
    domain: Presentation,
    target: GroupContext,
    oracle: TrivialityOracle,
    images: ImageTable,
}

impl GeneratorMap {
    /// Fails unless every domain generator has an image.
    pub fn new(name: impl Into<String>, domain: Presentation, images: ImageTable) -> Result<Self, HomError> {
        let target = images.target();
        if let Some(&missing) = domain.generators().iter().find(|&&g| images.get(g).is_none()) {
            return Err(HomError::Missing(missing));
        }
        Ok(Self { name: name.into(), domain, target, oracle: TrivialityOracle::for_context(target), images })
    }

    pub fn with_oracle(mut self, oracle: TrivialityOracle) -> Self {
        self.oracle = oracle;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Presentation {
        &self.domain
    }

    pub fn target(&self) -> GroupContext {
        self.target
    }

    pub fn oracle(&self) -> TrivialityOracle {
        self.oracle
    }

    pub fn table(&self) -> &ImageTable {
        &self.images
    }

    /// Image of a domain word, freely reduced in the target.
    pub fn apply(&self, w: &Word) -> Result<Word, HomError> {
        let expected = self.domain.context();
        if w.context() != expected {
            return Err(HomError::Context { expected, found: w.context() });
        }
        Ok(w.substitute(self)?)
    }

    /// Checks that every enumerated relator of the domain dies in the target.
    pub fn verify_well_defined(&self, lh: &LHSampler) -> Report {
        let relators: Vec<Relator> = self.domain.relators(lh).collect();
        let check = |r: Relator| -> (Relator, Word, Verdict) {
            let image = self.apply(&r.word).expect("relators live in the domain");
            let verdict = self.oracle.decide(&image);
            (r, image, verdict)
        };
        #[cfg(feature = "parallel")]
        let results: Vec<_> = relators.into_par_iter().map(check).collect();
        #[cfg(not(feature = "parallel"))]
        let results: Vec<_> = relators.into_iter().map(check).collect();

        let mut report = Report {
            map: self.name.clone(),
            domain: self.domain.context().to_string(),
            target: self.target.to_string(),
            oracle: self.oracle,
            checked: results.len(),
            passed: 0,
            failed: Vec::new(),
            unknown: Vec::new(),
        };
        for (r, image, verdict) in results {
            let witness = || Witness { tag: r.tag, indices: r.indices.clone(), h: r.h.clone(), relator: r.word.clone(), image: image.clone() };
            match verdict {
                Verdict::Trivial => report.passed += 1,
                Verdict::Nontrivial => report.failed.push(witness()),
                Verdict::Unknown => report.unknown.push(witness()),
            }
        }
        report
    }
}

impl Images for GeneratorMap {
    fn target(&self) -> GroupContext {
        self.target
    }

    fn image(&self, gen: Generator) -> Option<Word> {
        if let Some(w) = self.images.get(gen) {
            return Some(w.clone());
        }
        let ctx = self.domain.context();
        if !ctx.admits(gen) {
            return None;
        }
        let expanded = expand_to_generators(&Word::letter(ctx, Letter::new(gen)).ok()?);
        if expanded.letters() == [Letter::new(gen)] {
            return None;
        }
        expanded.substitute(&self.images).ok()
    }
}

impl fmt::Display for GeneratorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.domain.context(), self.target)
    }
}

/// One relator that did not (or could not be shown to) die in the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub tag: Tag,
    pub indices: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<Word>,
    pub relator: Word,
    pub image: Word,
}

/// Result of [`GeneratorMap::verify_well_defined`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub map: String,
    pub domain: String,
    pub target: String,
    pub oracle: TrivialityOracle,
    pub checked: usize,
    pub passed: usize,
    pub failed: Vec<Witness>,
    pub unknown: Vec<Witness>,
}

impl Report {
    pub fn is_pass(&self) -> bool {
        self.failed.is_empty() && self.unknown.is_empty()
    }

    pub fn verdict(&self) -> Verdict {
        if !self.failed.is_empty() {
            Verdict::Nontrivial
        } else if !self.unknown.is_empty() {
            Verdict::Unknown
        } else {
            Verdict::Trivial
        }
    }
}

fn single(ctx: GroupContext, gen: Generator) -> Result<Word, HomError> {
    Ok(Word::letter(ctx, Letter::new(gen))?)
}

/// Table sending every symbol shared by both contexts to itself.
fn identity_table(domain: GroupContext, target: GroupContext) -> Result<ImageTable, HomError> {
    let mut table = ImageTable::new(target);
    for gen in domain.symbols().into_iter().filter(|&g| target.admits(g)) {
        table.insert(gen, single(target, gen)?)?;
    }
    Ok(table)
}

fn identity_map(name: &str, from: (Family, u32), to: (Family, u32), n: u32) -> Result<GeneratorMap, HomError> {
    let domain = build_presentation(from.0, n, from.1)?;
    let target = GroupContext::new(to.0, n, to.1)?;
    let table = identity_table(domain.context(), target)?;
    GeneratorMap::new(name, domain, table)
}

/// Strand projection table: `a_{i,r}` goes to `a_r` on strand `i`, disk
/// symbols to the identity.
fn projection_table(domain: GroupContext) -> Result<ImageTable, HomError> {
    let target = GroupContext::pi1_power(domain.n(), domain.g())?;
    let mut table = ImageTable::new(target);
    for gen in domain.symbols() {
        match gen {
            Generator::SurfA(..) => table.insert(gen, single(target, gen)?)?,
            Generator::BigT(..) | Generator::SmallT(..) => table.insert(gen, Word::empty(target))?,
            _ => {}
        }
    }
    Ok(table)
}

/// `theta^_n: PB^_n(M) -> pi1(M)^n`.
pub fn theta_hat_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    let domain = build_presentation(Family::HatPBn, n, g)?;
    let table = projection_table(domain.context())?;
    GeneratorMap::new("theta_hat", domain, table)
}

/// `theta_n: PB_n(M) -> pi1(M)^n`.
pub fn theta_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    let domain = build_presentation(Family::PBn, n, g)?;
    let table = projection_table(domain.context())?;
    GeneratorMap::new("theta", domain, table)
}

/// `psi: B^_n(M) -> S_n`, `s_i` to the transposition, `a_{1,r}` to 1.
pub fn psi_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    let domain = build_presentation(Family::HatBn, n, g)?;
    let target = GroupContext::symmetric(n)?;
    let mut table = ImageTable::new(target);
    for gen in domain.generators() {
        let image = match *gen {
            Generator::Sigma(_) => single(target, *gen)?,
            _ => Word::empty(target),
        };
        table.insert(*gen, image)?;
    }
    GeneratorMap::new("psi", domain, table)
}

/// Quotient projection `p: B_n(M) -> B^_n(M)`.
pub fn p_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    identity_map("p", (Family::Bn, g), (Family::HatBn, g), n)
}

/// Disk inclusion `f_n: PB_n(D) -> PB_n(M)`.
pub fn f_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    identity_map("f", (Family::PBn, 0), (Family::PBn, g), n)
}

/// Induced `f^_n: PB^_n(D) -> PB^_n(M)`.
pub fn f_hat_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    identity_map("f_hat", (Family::HatPBn, 0), (Family::HatPBn, g), n)
}

/// Quotient projection `p_1: PB_n(D) -> PB^_n(D)`.
pub fn p1_map(n: u32) -> Result<GeneratorMap, HomError> {
    identity_map("p1", (Family::PBn, 0), (Family::HatPBn, 0), n)
}

/// Quotient projection `p_2: PB_n(M) -> PB^_n(M)`.
pub fn p2_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    identity_map("p2", (Family::PBn, g), (Family::HatPBn, g), n)
}

/// `theta^_n` with `a_{1,1}` sent to `a_2` on strand 1. Still abelian-consistent
/// at genus 1, so it is only caught from genus 2 on.
pub fn corrupted_theta_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    let good = theta_hat_map(n, g)?;
    let mut table = good.images.clone();
    table.insert(Generator::SurfA(1, 1), single(good.target, Generator::SurfA(1, 2))?)?;
    GeneratorMap::new("theta_hat_corrupted", good.domain, table)
}

/// `psi` with `a_{1,1}` sent to `s_1`; the commutation with `s_2` then fails,
/// so it needs `n >= 3`.
pub fn corrupted_psi_map(n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    if n < 2 {
        return Err(HomError::Unsupported("the corrupted psi fixture needs n >= 2".into()));
    }
    let good = psi_map(n, g)?;
    let mut table = good.images.clone();
    table.insert(Generator::SurfA(1, 1), single(good.target, Generator::Sigma(1))?)?;
    GeneratorMap::new("psi_corrupted", good.domain, table)
}

/// `theta^_n` (or `theta_n`) on a pure word, as a tuple of loops.
pub fn theta_hat(w: &Word) -> Result<Pi1Tuple, HomError> {
    let ctx = w.context();
    let map = match ctx.family() {
        Family::HatPBn if !ctx.is_disk() => theta_hat_map(ctx.n(), ctx.g())?,
        Family::PBn if !ctx.is_disk() => theta_map(ctx.n(), ctx.g())?,
        _ => return Err(HomError::Unsupported(format!("strand projection is defined on pure surface groups, not {ctx}"))),
    };
    Ok(Pi1Tuple::from_power_word(&map.apply(w)?)?)
}

/// Canonical preimage: strand `i`'s loop spelled in `a_{i,*}`, strands in order.
pub fn theta_preimage(t: &Pi1Tuple) -> Result<Word, HomError> {
    let ctx = GroupContext::hat_pure(t.arity() as u32, t.genus())?;
    let mut letters = Vec::new();
    for (k, c) in t.components().iter().enumerate() {
        for l in c.letters() {
            let Generator::Loop(r) = l.gen else { unreachable!("pi1 words only hold loops") };
            push_reduced(&mut letters, Letter::signed(Generator::SurfA(k as u32 + 1, r), l.inverse));
        }
    }
    Ok(Word::new(ctx, letters)?)
}

/// Every named map at `(n, g)`, for the command line.
pub fn named_map(name: &str, n: u32, g: u32) -> Result<GeneratorMap, HomError> {
    match name {
        "theta" => theta_map(n, g),
        "theta_hat" | "theta-hat" => theta_hat_map(n, g),
        "psi" => psi_map(n, g),
        "p" => p_map(n, g),
        "f" => f_map(n, g),
        "f_hat" | "f-hat" => f_hat_map(n, g),
        "p1" => p1_map(n),
        "p2" => p2_map(n, g),
        "theta_hat_corrupted" | "theta-corrupted" => corrupted_theta_map(n, g),
        "psi_corrupted" | "psi-corrupted" => corrupted_psi_map(n, g),
        other => Err(HomError::Unsupported(format!("unknown map {other:?}; expected one of {}", MAP_NAMES.join(", ")))),
    }
}

pub const MAP_NAMES: [&str; 10] =
    ["theta", "theta_hat", "psi", "p", "f", "f_hat", "p1", "p2", "theta_hat_corrupted", "psi_corrupted"];

#[cfg(test)]
mod tests {
    use super::*;

    fn word(text: &str, ctx: GroupContext) -> Word {
        Word::parse(text, ctx).unwrap()
    }

    #[test]
    fn theta_hat_examples() {
        let ctx = GroupContext::hat_pure(3, 2).unwrap();
        assert_eq!(theta_hat(&word("a2.3", ctx)).unwrap().to_string(), "(1, a3, 1)");
        assert_eq!(theta_hat(&word("T1.2", ctx)).unwrap().to_string(), "(1, 1, 1)");
        assert_eq!(theta_hat(&word("a1.1 a2.2 a1.1^-1", ctx)).unwrap().to_string(), "(1, a2, 1)");
        assert!(theta_hat(&word("", GroupContext::hat_pure(2, 0).unwrap())).is_err());
    }

    #[test]
    fn preimage_examples() {
        let t = Pi1Tuple::parse(1, &["a1", "a2"]).unwrap();
        assert_eq!(theta_preimage(&t).unwrap().to_string(), "a1.1 a2.2");
        assert!(theta_preimage(&Pi1Tuple::identity(3, 1).unwrap()).unwrap().is_empty());
        let t = Pi1Tuple::parse(1, &["a1 a2^-1", "", "a1"]).unwrap();
        let w = theta_preimage(&t).unwrap();
        assert_eq!(w.to_string(), "a1.1 a1.2^-1 a3.1");
        assert_eq!(theta_hat(&w).unwrap(), t);
    }

    #[test]
    fn identity_maps_keep_letters() {
        let w = word("T1.2 T1.3^-1", GroupContext::pure(3, 0).unwrap());
        let p1w = p1_map(3).unwrap().apply(&w).unwrap();
        let fhat = f_hat_map(3, 1).unwrap().apply(&p1w).unwrap();
        let p2f = p2_map(3, 1).unwrap().apply(&f_map(3, 1).unwrap().apply(&w).unwrap()).unwrap();
        assert_eq!(fhat, p2f);
        assert_eq!(fhat.to_string(), "T1.2 T1.3^-1");
        assert_eq!(fhat.context(), GroupContext::hat_pure(3, 1).unwrap());
        let bad = word("a1.1", GroupContext::pure(3, 1).unwrap());
        assert!(matches!(p1_map(3).unwrap().apply(&bad), Err(HomError::Context { .. })));
    }

    #[test]
    fn derived_symbols_expand_through_the_table() {
        // A_{2,1} = a_{2,2}^-1 at genus 1 projects to (1, a2^-1)
        let w = word("A2.1", GroupContext::hat_pure(2, 1).unwrap());
        assert_eq!(theta_hat(&w).unwrap().to_string(), "(1, a2^-1)");
        // t_{1,3} = s1 s2 s2 s1^-1 has the permutation of s1 s1^-1
        let psi = psi_map(3, 1).unwrap();
        let img = psi.apply(&word("t1.3 s1", GroupContext::hat_braid(3, 1).unwrap())).unwrap();
        assert_eq!(permutation_of(&img), Permutation::transposition(3, 1));
    }

    #[test]
    fn theta_and_psi_are_well_defined() {
        let lh = LHSampler::new(4, 16, 3);
        let r = theta_hat_map(2, 2).unwrap().verify_well_defined(&lh);
        assert!(r.is_pass(), "{r:?}");
        assert!(r.checked > 0);
        let r = psi_map(3, 1).unwrap().verify_well_defined(&lh);
        assert!(r.is_pass(), "{r:?}");
        let r = theta_map(3, 1).unwrap().verify_well_defined(&lh);
        assert!(r.is_pass(), "{r:?}");
    }

    #[test]
    fn disk_projections_are_well_defined() {
        let lh = LHSampler::new(3, 8, 1);
        for n in 2..=4 {
            let r = p1_map(n).unwrap().verify_well_defined(&lh);
            assert_eq!(r.oracle, TrivialityOracle::DiskLinkHomotopy);
            assert!(r.is_pass(), "{r:?}");
        }
    }

    #[test]
    fn corrupted_fixtures_fail() {
        let lh = LHSampler::new(2, 4, 0);
        let r = corrupted_theta_map(1, 2).unwrap().verify_well_defined(&lh);
        assert!(!r.failed.is_empty());
        assert!(r.failed.iter().any(|w| w.tag == Tag::PR1));
        // abelian target at genus 1 hides the corruption
        assert!(corrupted_theta_map(2, 1).unwrap().verify_well_defined(&lh).is_pass());
        let r = corrupted_psi_map(3, 1).unwrap().verify_well_defined(&lh);
        assert!(r.failed.iter().any(|w| w.tag == Tag::R6));
    }

    #[test]
    fn oracle_selection() {
        use TrivialityOracle::*;
        assert_eq!(TrivialityOracle::for_context(GroupContext::pi1_power(2, 1).unwrap()), Pi1Power);
        assert_eq!(TrivialityOracle::for_context(GroupContext::pure(2, 0).unwrap()), DiskBraid);
        assert_eq!(TrivialityOracle::for_context(GroupContext::hat_braid(2, 0).unwrap()), DiskLinkHomotopy);
        assert_eq!(TrivialityOracle::for_context(GroupContext::hat_braid(2, 1).unwrap()), FreeReduction);
        let ctx = GroupContext::hat_braid(2, 0).unwrap();
        assert_eq!(DiskLinkHomotopy.decide(&word("s1", ctx)), Verdict::Nontrivial);
        assert_eq!(FreeReduction.decide(&word("s1 s1^-1", GroupContext::braid(2, 1).unwrap())), Verdict::Trivial);
    }

    #[test]
    fn maps_need_total_tables() {
        let domain = build_presentation(Family::HatPBn, 2, 1).unwrap();
        let table = ImageTable::new(GroupContext::pi1_power(2, 1).unwrap());
        assert!(matches!(GeneratorMap::new("empty", domain, table), Err(HomError::Missing(_))));
        assert!(named_map("nope", 2, 1).is_err());
        for name in MAP_NAMES {
            assert!(named_map(name, 3, 2).is_ok(), "{name}");
        }
    }
}
