//! Randomized checks of the exact sequences over a grid of `(n, g)` cells:
//! commutativity of the projection square, `Im f^_n` inside `ker theta^_n`
//! (conjugated, so normal-closure stability is exercised too), surjectivity
//! of `theta^_n`, the disk sequence through `H_n(D)`, and well-definedness of
//! `theta^_n` and `psi` on enumerated relators.
//!
//! Every sample is drawn from an RNG seeded by `(seed, check, n, g)`, so a
//! witness is replayable from the config alone.

use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::homs::{
    corrupted_theta_map, f_hat_map, f_map, p1_map, p2_map, p_map, permutation_of, psi_map, theta_hat, theta_hat_map,
    theta_map, theta_preimage, HomError, Report,
};
use crate::presentations::LHSampler;
use crate::reduced_free::{lh_trivial_disk, sample_hn_element};
use crate::rng::{derive_seed, random_word_min_half, rng_for};
use crate::surface::{tuple_is_trivial, Pi1Tuple};
use crate::verdict::Verdict;
use crate::word::{Generator, GroupContext, Word};

/// What the suite does not (and cannot) check.
pub const EXCLUDED: &str = "ker(theta_hat) inside the normal closure of Im(f_hat): \
needs a word problem for the surface link-homotopy pure braid group, which is not available";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub n_max: u32,
    pub g_max: u32,
    /// Word-length bound `L`; samples keep at least `L / 2` letters.
    pub len: usize,
    /// Samples per check and cell.
    pub samples: usize,
    pub seed: u64,
    pub lh: LHSampler,
    /// Swap in the corrupted `theta^_n` table (the suite should then fail).
    pub corrupt_theta: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { n_max: 3, g_max: 2, len: 12, samples: 200, seed: 0, lh: LHSampler::default(), corrupt_theta: false }
    }
}

impl SuiteConfig {
    /// Surface cells `1 <= n <= n_max`, `1 <= g <= g_max`.
    pub fn cells(&self) -> Vec<(u32, u32)> {
        (1..=self.n_max).flat_map(|n| (1..=self.g_max).map(move |g| (n, g))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedWord {
    pub role: &'static str,
    pub word: String,
}

/// A failing (or undecided) sample with the words needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabWitness {
    pub n: u32,
    pub g: u32,
    pub what: String,
    pub words: Vec<NamedWord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<LabWitness>,
    pub unknown: Vec<LabWitness>,
    pub wall_ms: u128,
}

impl CheckReport {
    pub fn is_pass(&self) -> bool {
        self.failures.is_empty() && self.unknown.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
    pub excluded: &'static str,
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Per-cell tally, merged in cell order.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<LabWitness>,
    unknown: Vec<LabWitness>,
}

impl Tally {
    fn record(&mut self, verdict: Verdict, witness: impl FnOnce() -> LabWitness) {
        self.checked += 1;
        match verdict {
            Verdict::Trivial => {}
            Verdict::Nontrivial => self.failures.push(witness()),
            Verdict::Unknown => self.unknown.push(witness()),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.unknown.extend(other.unknown);
        self
    }
}

fn run_cells<F>(name: &'static str, cells: Vec<(u32, u32)>, f: F) -> CheckReport
where
    F: Fn(u32, u32) -> Tally + Sync + Send,
{
    let start = Instant::now();
    #[cfg(feature = "parallel")]
    let tallies: Vec<Tally> = cells.into_par_iter().map(|(n, g)| f(n, g)).collect();
    #[cfg(not(feature = "parallel"))]
    let tallies: Vec<Tally> = cells.into_iter().map(|(n, g)| f(n, g)).collect();
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);
    CheckReport {
        name,
        checked: total.checked,
        failures: total.failures,
        unknown: total.unknown,
        wall_ms: start.elapsed().as_millis(),
    }
}

fn named(role: &'static str, w: &impl ToString) -> NamedWord {
    NamedWord { role, word: w.to_string() }
}

fn witness(n: u32, g: u32, what: &str, words: Vec<NamedWord>) -> LabWitness {
    LabWitness { n, g, what: what.to_string(), words }
}

fn error_witness(n: u32, g: u32, err: HomError) -> LabWitness {
    witness(n, g, &format!("error: {err}"), Vec::new())
}

fn sample(rng: &mut rand_chacha::ChaCha8Rng, ctx: GroupContext, len: usize) -> Word {
    let alphabet: Vec<Generator> = ctx.generators();
    random_word_min_half(rng, ctx, &alphabet, len)
}

const DIAGRAM: u64 = 1;
const IM_IN_KER: u64 = 2;
const SURJECTIVE: u64 = 3;
const HN: u64 = 4;

/// `f^_n . p_1 = p_2 . f_n` letterwise on disk words and
/// `theta^_n . p_2 = theta_n` on surface words.
pub fn check_diagram_commutes(cfg: &SuiteConfig) -> CheckReport {
    let cfg = *cfg;
    run_cells("diagram_commutes", cfg.cells(), move |n, g| {
        let mut tally = Tally::default();
        let maps = (|| Ok::<_, HomError>((f_map(n, g)?, p1_map(n)?, f_hat_map(n, g)?, p2_map(n, g)?, theta_map(n, g)?)))();
        let (f, p1, fh, p2, theta) = match maps {
            Ok(m) => m,
            Err(e) => {
                tally.record(Verdict::Unknown, || error_witness(n, g, e));
                return tally;
            }
        };
        let mut rng = rng_for(cfg.seed, &[DIAGRAM, n as u64, g as u64]);
        let disk = f.domain().context();
        for _ in 0..cfg.samples {
            let w = sample(&mut rng, disk, cfg.len);
            let left = p1.apply(&w).and_then(|x| fh.apply(&x));
            let right = f.apply(&w).and_then(|x| p2.apply(&x));
            match (left, right) {
                (Ok(l), Ok(r)) => tally.record(Verdict::from_bool(l == r), || {
                    witness(n, g, "f_hat(p1(w)) != p2(f(w))", vec![named("w", &w), named("f_hat(p1(w))", &l), named("p2(f(w))", &r)])
                }),
                (Err(e), _) | (_, Err(e)) => tally.record(Verdict::Unknown, || error_witness(n, g, e)),
            }
        }
        let surface = theta.domain().context();
        for _ in 0..cfg.samples {
            let v = sample(&mut rng, surface, cfg.len);
            let routes = (|| {
                let via_hat = theta_hat(&p2.apply(&v)?)?;
                let direct = Pi1Tuple::from_power_word(&theta.apply(&v)?)?;
                Ok::<_, HomError>((via_hat, direct))
            })();
            match routes {
                Ok((a, b)) => {
                    let verdict = match a.difference(&b) {
                        Ok(d) => tuple_is_trivial(&d).and(Verdict::from_bool(a == b)),
                        Err(_) => Verdict::Nontrivial,
                    };
                    tally.record(verdict, || {
                        witness(n, g, "theta_hat(p2(v)) != theta(v)", vec![named("v", &v), named("theta_hat(p2(v))", &a), named("theta(v)", &b)])
                    });
                }
                Err(e) => tally.record(Verdict::Unknown, || error_witness(n, g, e)),
            }
        }
        tally
    })
}

/// `theta^_n(c f^_n(u) c^-1)` is trivial for disk words `u` and surface
/// conjugators `c`.
pub fn check_im_in_ker(cfg: &SuiteConfig) -> CheckReport {
    let cfg = *cfg;
    run_cells("im_in_ker", cfg.cells(), move |n, g| {
        let mut tally = Tally::default();
        let fh = match f_hat_map(n, g) {
            Ok(m) => m,
            Err(e) => {
                tally.record(Verdict::Unknown, || error_witness(n, g, e));
                return tally;
            }
        };
        let mut rng = rng_for(cfg.seed, &[IM_IN_KER, n as u64, g as u64]);
        let disk = fh.domain().context();
        let surface = fh.target();
        for _ in 0..cfg.samples {
            let u = sample(&mut rng, disk, cfg.len);
            let c = sample(&mut rng, surface, cfg.len);
            let outcome = (|| {
                let image = fh.apply(&u)?.conjugate_by(&c)?;
                let tuple = theta_hat(&image)?;
                Ok::<_, HomError>((image, tuple))
            })();
            match outcome {
                Ok((image, tuple)) => tally.record(tuple_is_trivial(&tuple), || {
                    witness(n, g, "theta_hat(c f_hat(u) c^-1) is nontrivial", vec![
                        named("u", &u),
                        named("c", &c),
                        named("c f_hat(u) c^-1", &image),
                        named("theta_hat", &tuple),
                    ])
                }),
                Err(e) => tally.record(Verdict::Unknown, || error_witness(n, g, e)),
            }
        }
        tally
    })
}

/// `theta^_n(theta_preimage(t)) = t` exactly for random tuples.
pub fn check_surjectivity(cfg: &SuiteConfig) -> CheckReport {
    let cfg = *cfg;
    run_cells("surjectivity", cfg.cells(), move |n, g| {
        let mut tally = Tally::default();
        let mut rng = rng_for(cfg.seed, &[SURJECTIVE, n as u64, g as u64]);
        let pi1 = GroupContext::pi1(g).expect("g >= 1");
        for _ in 0..cfg.samples {
            let components = (0..n).map(|_| sample(&mut rng, pi1, cfg.len)).collect();
            let t = Pi1Tuple::new(g, components).expect("pi1 words");
            let outcome = theta_preimage(&t).and_then(|w| Ok((theta_hat(&w)?, w)));
            match outcome {
                Ok((back, w)) => {
                    let diff_trivial = back.difference(&t).map(|d| tuple_is_trivial(&d)).unwrap_or(Verdict::Nontrivial);
                    tally.record(Verdict::from_bool(back == t).and(diff_trivial), || {
                        witness(n, g, "theta_hat(theta_preimage(t)) != t", vec![named("t", &t), named("preimage", &w), named("back", &back)])
                    });
                }
                Err(e) => tally.record(Verdict::Unknown, || error_witness(n, g, e)),
            }
        }
        tally
    })
}

/// Disk sequence `1 -> H_n(D) -> B_n(D) -> B^_n(D)`: sampled `H_n` members are
/// link-homotopically trivial, pure generators are not; on every surface cell
/// `psi . p` agrees with the permutation of the word.
pub fn check_hn_sequence(cfg: &SuiteConfig) -> CheckReport {
    let cfg = *cfg;
    let mut cells: Vec<(u32, u32)> = (2..=cfg.n_max).map(|n| (n, 0)).collect();
    cells.extend(cfg.cells());
    run_cells("hn_sequence", cells, move |n, g| {
        let mut tally = Tally::default();
        if g == 0 {
            for k in 0..cfg.samples {
                let size = 1 + k % 3;
                let seed = derive_seed(cfg.seed, &[HN, n as u64, k as u64]);
                match sample_hn_element(n, seed, size) {
                    Ok(w) => {
                        let verdict = lh_trivial_disk(&w).unwrap_or(Verdict::Unknown);
                        tally.record(verdict, || witness(n, g, "sampled H_n element is not link-homotopically trivial", vec![named("w", &w)]));
                    }
                    Err(e) => tally.record(Verdict::Unknown, || witness(n, g, &format!("error: {e}"), Vec::new())),
                }
            }
            let ctx = GroupContext::pure(n, 0).expect("disk context");
            for i in 1..n {
                for j in i + 1..=n {
                    let t = Word::from_gens(ctx, [Generator::BigT(i, j)]).expect("admitted");
                    let verdict = match lh_trivial_disk(&t) {
                        Ok(Verdict::Nontrivial) => Verdict::Trivial,
                        Ok(_) => Verdict::Nontrivial,
                        Err(_) => Verdict::Unknown,
                    };
                    tally.record(verdict, || witness(n, g, "pure generator reported link-homotopically trivial", vec![named("T", &t)]));
                }
            }
            return tally;
        }
        let maps = p_map(n, g).and_then(|p| Ok((p, psi_map(n, g)?)));
        let (p, psi) = match maps {
            Ok(m) => m,
            Err(e) => {
                tally.record(Verdict::Unknown, || error_witness(n, g, e));
                return tally;
            }
        };
        let mut rng = rng_for(cfg.seed, &[HN, n as u64, g as u64]);
        for _ in 0..cfg.samples {
            let w = sample(&mut rng, p.domain().context(), cfg.len);
            match p.apply(&w).and_then(|x| psi.apply(&x)) {
                Ok(image) => {
                    let (a, b) = (permutation_of(&image), permutation_of(&w));
                    tally.record(Verdict::from_bool(a == b), || {
                        witness(n, g, "psi(p(w)) disagrees with the permutation of w", vec![named("w", &w), named("psi(p(w))", &image)])
                    });
                }
                Err(e) => tally.record(Verdict::Unknown, || error_witness(n, g, e)),
            }
        }
        tally
    })
}

fn report_tally(n: u32, g: u32, report: Report) -> Tally {
    let convert = |w: crate::homs::Witness, what: &str| {
        let mut words = vec![named("relator", &w.relator), named("image", &w.image)];
        if let Some(h) = &w.h {
            words.push(named("h", h));
        }
        witness(n, g, &format!("{} {} {:?}: {what}", report.map, w.tag, w.indices), words)
    };
    Tally {
        checked: report.checked,
        failures: report.failed.iter().cloned().map(|w| convert(w, "relator image is nontrivial")).collect(),
        unknown: report.unknown.iter().cloned().map(|w| convert(w, "relator image undecided")).collect(),
    }
}

/// `theta^_n` and `psi` kill every enumerated relator of their domains.
pub fn check_well_defined(cfg: &SuiteConfig) -> CheckReport {
    let cfg = *cfg;
    run_cells("well_defined", cfg.cells(), move |n, g| {
        let theta = if cfg.corrupt_theta { corrupted_theta_map(n, g) } else { theta_hat_map(n, g) };
        let mut tally = Tally::default();
        for map in [theta, psi_map(n, g)] {
            match map {
                Ok(m) => tally = tally.merge(report_tally(n, g, m.verify_well_defined(&cfg.lh))),
                Err(e) => tally.record(Verdict::Unknown, || error_witness(n, g, e)),
            }
        }
        tally
    })
}

/// Runs every check. An empty grid or `samples = 0` passes trivially.
pub fn run_all(cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let checks: [fn(&SuiteConfig) -> CheckReport; 5] =
        [check_diagram_commutes, check_im_in_ker, check_surjectivity, check_hn_sequence, check_well_defined];
    #[cfg(feature = "parallel")]
    let checks: Vec<CheckReport> = checks.par_iter().map(|f| f(cfg)).collect();
    #[cfg(not(feature = "parallel"))]
    let checks: Vec<CheckReport> = checks.iter().map(|f| f(cfg)).collect();
    SuiteReport {
        config: *cfg,
        pass: checks.iter().all(CheckReport::is_pass),
        checks,
        excluded: EXCLUDED,
        wall_ms: start.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(samples: usize) -> SuiteConfig {
        SuiteConfig { n_max: 2, g_max: 2, len: 8, samples, seed: 11, lh: LHSampler::new(3, 4, 0), corrupt_theta: false }
    }

    #[test]
    fn small_grid_passes() {
        let report = run_all(&small(20));
        for c in &report.checks {
            assert!(c.is_pass(), "{c:?}");
            assert!(c.checked > 0, "{}", c.name);
        }
        assert!(report.pass);
    }

    #[test]
    fn empty_grid_is_an_empty_pass() {
        let mut cfg = small(0);
        cfg.n_max = 0;
        let report = run_all(&cfg);
        assert!(report.pass);
        assert!(report.checks.iter().all(|c| c.checked == 0));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = check_im_in_ker(&small(10));
        let b = check_im_in_ker(&small(10));
        assert_eq!((a.checked, a.failures), (b.checked, b.failures));
    }

    #[test]
    fn corrupted_theta_is_caught_with_a_witness() {
        let mut cfg = small(1);
        cfg.corrupt_theta = true;
        let report = run_all(&cfg);
        assert!(!report.pass);
        let wd = report.check("well_defined").unwrap();
        let w = &wd.failures[0];
        assert_eq!(w.g, 2);
        assert!(w.words.iter().any(|nw| nw.role == "relator"));
    }
}
