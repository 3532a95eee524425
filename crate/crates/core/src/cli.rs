//! Command line front end. Exit codes: 0 pass or trivial, 1 fail or
//! nontrivial, 2 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::homs::{named_map, permutation_of, theta_hat, TrivialityOracle, MAP_NAMES};
use crate::lab::{run_all, SuiteConfig};
use crate::presentations::{build_presentation, expand_to_generators, LHSampler};
use crate::surface::{dehn_reduce, Pi1Element};
use crate::verdict::Verdict;
use crate::word::{Family, Generator, GroupContext, Word};

const GRAMMAR: &str = "\
Word grammar (UTF-8 text, whitespace-separated tokens):
  token := gen exp? ; gen := \"s\"INT | \"a\"INT\".\"INT | \"t\"INT\".\"INT | \"T\"INT\".\"INT | \"A\"INT\".\"INT | \"x\"INT ; exp := \"^\" SIGNED_INT ;
  sugar := \"[\" word \",\" word \"]\" (commutator u v u⁻¹ v⁻¹).
Round-trip format is the same grammar with `^-1` for inverses and no sugar.

In surface groups (pi1) the loops are written \"a\"INT. Exponents satisfy |k| <= 1000000.
When --n or --g is omitted it is inferred from the indices used in the word.

Exit codes: 0 pass/trivial, 1 fail/nontrivial, 2 usage error.
The environment variable BRAIDLAB_SEED supplies the default for every --seed.";

#[derive(Debug, Parser)]
#[command(name = "braidlab", version, about = "Surface braid groups and link-homotopy string links", after_help = GRAMMAR)]
struct Cli {
    /// Structured output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Freely (and optionally cyclically) reduce a word.
    Reduce {
        #[command(flatten)]
        word: WordArgs,
        /// Also split off the cyclic conjugator.
        #[arg(long)]
        cyclic: bool,
        /// Rewrite derived symbols (T, t, A) over the presentation generators.
        #[arg(long)]
        expand: bool,
    },
    /// Strand permutation of a braid word.
    Perm {
        #[command(flatten)]
        word: WordArgs,
    },
    /// Strand projection of a pure surface braid to pi1(M)^n.
    Theta {
        #[command(flatten)]
        word: WordArgs,
    },
    /// Word problem in pi1 of the closed genus-g surface.
    Pi1 {
        #[command(subcommand)]
        action: TrivialityAction,
    },
    /// Link-homotopy triviality of disk braids.
    Lh {
        #[command(subcommand)]
        action: TrivialityAction,
    },
    /// Presentations of Bn(M), PBn(M) and their link-homotopy quotients.
    Presentation {
        #[command(subcommand)]
        action: PresentationAction,
    },
    /// Homomorphisms between the presented groups.
    Hom {
        #[command(subcommand)]
        action: HomAction,
    },
    /// Randomized exact-sequence suite.
    Lab {
        #[command(subcommand)]
        action: LabAction,
    },
}

#[derive(Debug, Subcommand)]
enum TrivialityAction {
    /// Decide whether the word is the identity.
    IsTrivial {
        #[command(flatten)]
        word: WordArgs,
    },
}

#[derive(Debug, Subcommand)]
enum PresentationAction {
    /// Generators and enumerated relators.
    Dump {
        #[arg(long, value_enum)]
        family: PresentedFamily,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        g: u32,
        #[command(flatten)]
        lh: LhArgs,
        /// Rewrite derived symbols over the generators.
        #[arg(long)]
        expand: bool,
    },
}

#[derive(Debug, Subcommand)]
enum HomAction {
    /// Check that every enumerated relator dies in the target.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(MAP_NAMES))]
        map: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        g: u32,
        #[command(flatten)]
        lh: LhArgs,
    },
    /// Image of a word.
    Apply {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(MAP_NAMES))]
        map: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        g: u32,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
}

#[derive(Debug, Subcommand)]
enum LabAction {
    /// Run every check over the (n, g) grid.
    Run {
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long, default_value_t = 2)]
        g_max: u32,
        #[arg(long, default_value_t = 12)]
        len: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, env = "BRAIDLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        lh_len: usize,
        #[arg(long, default_value_t = 64)]
        lh_samples: usize,
        /// Use the corrupted theta table (the run should fail).
        #[arg(long)]
        corrupt_theta: bool,
    },
}

#[derive(Debug, Args)]
struct WordArgs {
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    /// Group the word lives in.
    #[arg(long, value_enum)]
    group: Option<GroupArg>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    g: Option<u32>,
}

#[derive(Debug, Args)]
struct LhArgs {
    /// Longest sampled link-homotopy conjugator.
    #[arg(long, default_value_t = 4)]
    lh_len: usize,
    /// Conjugators sampled per index pair.
    #[arg(long, default_value_t = 64)]
    lh_samples: usize,
    #[arg(long, env = "BRAIDLAB_SEED", default_value_t = 0)]
    seed: u64,
}

impl LhArgs {
    fn sampler(&self) -> LHSampler {
        LHSampler::new(self.lh_len, self.lh_samples, self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Free,
    Bn,
    Pbn,
    Hatbn,
    Hatpbn,
    Pi1,
    Pi1n,
    Sym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PresentedFamily {
    Bn,
    Pbn,
    Hatbn,
    Hatpbn,
}

impl PresentedFamily {
    fn family(self) -> Family {
        match self {
            Self::Bn => Family::Bn,
            Self::Pbn => Family::PBn,
            Self::Hatbn => Family::HatBn,
            Self::Hatpbn => Family::HatPBn,
        }
    }
}

/// Failure that maps to exit code 2.
struct UsageError(String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<(i32, String), UsageError>;

const PROBE: u32 = 1 << 16;

/// Parses `text`, filling missing `n` / `g` with the smallest values the
/// word's indices allow.
/// Group implied by the letters alone: `x` letters are free, bare `a` loops
/// live in pi1, anything else is a braid word.
fn guess_group(text: &str) -> GroupArg {
    let bytes = text.as_bytes();
    let mut loops = false;
    for (k, &b) in bytes.iter().enumerate() {
        let starts = k == 0 || !bytes[k - 1].is_ascii_alphanumeric() && bytes[k - 1] != b'.';
        if !starts {
            continue;
        }
        match b {
            b'x' => return GroupArg::Free,
            b's' | b't' | b'T' | b'A' => return GroupArg::Bn,
            b'a' => {
                let rest = &bytes[k + 1..];
                let digits = rest.iter().take_while(|c| c.is_ascii_digit()).count();
                if rest.get(digits) == Some(&b'.') {
                    return GroupArg::Bn;
                }
                loops = true;
            }
            _ => {}
        }
    }
    if loops {
        GroupArg::Pi1
    } else {
        GroupArg::Free
    }
}

fn parse_in(group: GroupArg, text: &str, n: Option<u32>, g: Option<u32>) -> Result<Word, UsageError> {
    let family = |rank: u32| match group {
        GroupArg::Free => Family::Free(rank),
        GroupArg::Bn => Family::Bn,
        GroupArg::Pbn => Family::PBn,
        GroupArg::Hatbn => Family::HatBn,
        GroupArg::Hatpbn => Family::HatPBn,
        GroupArg::Pi1 => Family::Pi1Surface,
        GroupArg::Pi1n => Family::Pi1Power,
        GroupArg::Sym => Family::Symmetric,
    };
    let surface = matches!(group, GroupArg::Pi1 | GroupArg::Pi1n);
    let genus_free = matches!(group, GroupArg::Free | GroupArg::Sym);
    let ctx_for = |n: u32, g: u32| -> Result<GroupContext, UsageError> {
        Ok(match group {
            GroupArg::Free => GroupContext::free(n),
            GroupArg::Pi1 => GroupContext::pi1(g)?,
            _ => GroupContext::new(family(n), n, if genus_free { 0 } else { g })?,
        })
    };
    if let (Some(n), Some(g)) = (n, g) {
        return Ok(Word::parse(text, ctx_for(n, g)?)?);
    }
    let probe = Word::parse(text, ctx_for(n.unwrap_or(PROBE), g.unwrap_or(PROBE))?)?;
    let (mut need_n, mut need_r) = (1, 0);
    for l in probe.letters() {
        use Generator::*;
        let (strand, handle) = match l.gen {
            Sigma(i) => (i + 1, 0),
            SurfA(i, r) => (i, r),
            SmallT(_, j) | BigT(_, j) => (j, 0),
            CapA(j, s) => (j, s),
            FreeX(i) => (i, 0),
            Loop(r) => (1, r),
        };
        need_n = need_n.max(strand);
        need_r = need_r.max(handle);
    }
    let min_g = need_r.div_ceil(2).max(u32::from(surface));
    let ctx = ctx_for(n.unwrap_or(need_n), g.unwrap_or(min_g))?;
    Ok(Word::parse(text, ctx)?)
}

fn json_line(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn reduce(json: bool, args: &WordArgs, cyclic: bool, expand: bool) -> Outcome {
    let group = args.group.unwrap_or_else(|| guess_group(&args.word));
    let w = parse_in(group, &args.word, args.n, args.g)?;
    let reduced = if expand { expand_to_generators(&w) } else { w.free_reduce() };
    let (core, conj) = reduced.cyclic_reduce();
    let text = if json {
        let mut v = json!({
            "context": w.context().to_string(),
            "input": args.word,
            "reduced": reduced.to_string(),
            "length": reduced.len(),
        });
        if cyclic {
            v["core"] = json!(core.to_string());
            v["conjugator"] = json!(conj.to_string());
        }
        json_line(&v)
    } else if cyclic {
        format!("{reduced}\ncore: {core}\nconjugator: {conj}")
    } else {
        reduced.to_string()
    };
    Ok((0, text))
}

fn perm(json: bool, args: &WordArgs) -> Outcome {
    let w = parse_in(args.group.unwrap_or(GroupArg::Bn), &args.word, args.n, args.g)?;
    let p = permutation_of(&w);
    let text = if json {
        json_line(&json!({
            "n": p.degree(),
            "images": p.images(),
            "permutation": p.to_string(),
            "pure": p.is_identity(),
        }))
    } else {
        p.to_string()
    };
    Ok((0, text))
}

fn theta(json: bool, args: &WordArgs) -> Outcome {
    let group = args.group.unwrap_or(GroupArg::Hatpbn);
    let mut w = parse_in(group, &args.word, args.n, args.g)?;
    if w.context().is_disk() && args.g.is_none() {
        w = parse_in(group, &args.word, Some(w.context().n()), Some(1))?;
    }
    let t = theta_hat(&w)?;
    let text = if json {
        json_line(&json!({
            "context": w.context().to_string(),
            "components": t.components().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "tuple": t.to_string(),
        }))
    } else {
        t.to_string()
    };
    Ok((0, text))
}

fn verdict_output(json: bool, verdict: Verdict, extra: serde_json::Value) -> (i32, String) {
    let text = if json {
        let mut v = extra;
        v["verdict"] = json!(verdict);
        json_line(&v)
    } else {
        verdict.to_string()
    };
    (verdict.exit_code(), text)
}

fn pi1_is_trivial(json: bool, args: &WordArgs) -> Outcome {
    let w = parse_in(GroupArg::Pi1, &args.word, None, args.g)?;
    let el = Pi1Element::new(&w)?;
    let verdict = el.verdict();
    let mut extra = json!({ "g": w.context().g(), "word": el.word().to_string() });
    extra["method"] = if w.context().g() == 1 {
        json!("abelianization")
    } else {
        extra["dehn_reduced"] = json!(dehn_reduce(&el)?.to_string());
        json!("dehn")
    };
    Ok(verdict_output(json, verdict, extra))
}

fn lh_is_trivial(json: bool, args: &WordArgs) -> Outcome {
    let group = args.group.unwrap_or(GroupArg::Pbn);
    if !matches!(group, GroupArg::Bn | GroupArg::Pbn | GroupArg::Hatbn | GroupArg::Hatpbn) {
        return Err(UsageError(format!("lh is-trivial needs a braid group, not {group:?}")));
    }
    if args.g.is_some_and(|g| g != 0) {
        return Err(UsageError("link-homotopy triviality is only decided on the disk (g = 0)".into()));
    }
    let w = parse_in(group, &args.word, args.n, Some(0))?;
    let pure = permutation_of(&w).is_identity();
    let verdict = TrivialityOracle::DiskLinkHomotopy.decide(&w);
    Ok(verdict_output(json, verdict, json!({ "n": w.context().n(), "word": w.to_string(), "pure": pure })))
}

fn presentation_dump(json: bool, family: PresentedFamily, n: u32, g: u32, lh: &LhArgs, expand: bool) -> Outcome {
    let p = build_presentation(family.family(), n, g)?;
    let mut cat = p.catalogue(&lh.sampler());
    if expand {
        for r in &mut cat.relators {
            r.word = expand_to_generators(&r.word);
        }
    }
    let text = if json {
        json_line(&cat)
    } else {
        let mut lines = vec![format!("{}  generators: {}", cat.context, cat.generators.join(" "))];
        for r in &cat.relators {
            let h = r.h.as_ref().map(|h| format!(" h={h}")).unwrap_or_default();
            lines.push(format!("{} {:?}{h}: {}", r.tag, r.indices, r.word));
        }
        lines.join("\n")
    };
    Ok((0, text))
}

fn hom_verify(json: bool, map: &str, n: u32, g: u32, lh: &LhArgs) -> Outcome {
    let report = named_map(map, n, g)?.verify_well_defined(&lh.sampler());
    let code = if report.is_pass() { 0 } else { 1 };
    let text = if json {
        json_line(&report)
    } else {
        let mut lines = vec![format!(
            "{}: {} -> {}: {} checked, {} passed, {} failed, {} unknown",
            report.map,
            report.domain,
            report.target,
            report.checked,
            report.passed,
            report.failed.len(),
            report.unknown.len()
        )];
        for (kind, list) in [("FAIL", &report.failed), ("UNKNOWN", &report.unknown)] {
            for w in list {
                lines.push(format!("{kind} {} {:?}: {} -> {}", w.tag, w.indices, w.relator, w.image));
            }
        }
        lines.join("\n")
    };
    Ok((code, text))
}

fn hom_apply(json: bool, map: &str, n: u32, g: u32, word: &str) -> Outcome {
    let m = named_map(map, n, g)?;
    let w = Word::parse(word, m.domain().context())?;
    let image = m.apply(&w)?;
    let text = if json {
        json_line(&json!({
            "map": m.name(),
            "domain": m.domain().context().to_string(),
            "target": m.target().to_string(),
            "word": w.to_string(),
            "image": image.to_string(),
        }))
    } else {
        image.to_string()
    };
    Ok((0, text))
}

fn lab_run(json: bool, cfg: SuiteConfig) -> Outcome {
    let report = run_all(&cfg);
    let code = if report.pass { 0 } else { 1 };
    let text = if json {
        json_line(&report)
    } else {
        let mut lines = Vec::new();
        for c in &report.checks {
            let status = if c.is_pass() { "PASS" } else { "FAIL" };
            lines.push(format!(
                "{status} {:<18} checked {:>7}  failures {}  unknown {}  {} ms",
                c.name,
                c.checked,
                c.failures.len(),
                c.unknown.len(),
                c.wall_ms
            ));
            for w in c.failures.iter().chain(&c.unknown).take(5) {
                let words: Vec<String> = w.words.iter().map(|nw| format!("{}={}", nw.role, nw.word)).collect();
                lines.push(format!("  n={} g={}: {}  {}", w.n, w.g, w.what, words.join("  ")));
            }
        }
        lines.push(format!("not checked: {}", report.excluded));
        lines.push(if report.pass { "pass".into() } else { "FAIL".into() });
        lines.join("\n")
    };
    Ok((code, text))
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Reduce { word, cyclic, expand } => reduce(json, word, *cyclic, *expand),
        Command::Perm { word } => perm(json, word),
        Command::Theta { word } => theta(json, word),
        Command::Pi1 { action: TrivialityAction::IsTrivial { word } } => pi1_is_trivial(json, word),
        Command::Lh { action: TrivialityAction::IsTrivial { word } } => lh_is_trivial(json, word),
        Command::Presentation { action: PresentationAction::Dump { family, n, g, lh, expand } } => {
            presentation_dump(json, *family, *n, *g, lh, *expand)
        }
        Command::Hom { action: HomAction::Verify { map, n, g, lh } } => hom_verify(json, map, *n, *g, lh),
        Command::Hom { action: HomAction::Apply { map, n, g, word } } => hom_apply(json, map, *n, *g, word),
        Command::Lab {
            action: LabAction::Run { n_max, g_max, len, samples, seed, lh_len, lh_samples, corrupt_theta },
        } => lab_run(
            json,
            SuiteConfig {
                n_max: *n_max,
                g_max: *g_max,
                len: *len,
                samples: *samples,
                seed: *seed,
                lh: LHSampler::new(*lh_len, *lh_samples, *seed),
                corrupt_theta: *corrupt_theta,
            },
        ),
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                2
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    match run(&cli) {
        Ok((code, text)) => {
            let _ = writeln!(out, "{text}");
            code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
