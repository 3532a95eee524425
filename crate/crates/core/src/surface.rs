//! Word problem in `pi1(M)` and `pi1(M)^n` for the closed orientable surface of
//! genus `g >= 1`.
//!
//! The relator is `a1^-1 a2^-1 ... a2g^-1 a1 a2 ... a2g`. For `g >= 2` every
//! piece of its symmetrized closure has length one against a relator of length
//! `4g >= 8`, so Dehn's algorithm decides the word problem. The torus group is
//! free abelian of rank two and is decided by exponent sums.

use std::sync::OnceLock;

use thiserror::Error;

use crate::verdict::Verdict;
use crate::word::{Family, Generator, GroupContext, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("Dehn's algorithm needs genus >= 2, got {0}")]
    GenusTooSmall(u32),
    #[error("expected a word in pi1 of genus {expected}, got context {found}")]
    WrongContext { expected: u32, found: GroupContext },
    #[error("tuple has {found} components, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// The surface relator of genus `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceRelator {
    g: u32,
    word: Word,
}

impl SurfaceRelator {
    pub fn new(g: u32) -> Result<Self, SurfaceError> {
        let ctx = GroupContext::pi1(g)?;
        let loops = |inverse| (1..=2 * g).map(move |r| Letter::signed(Generator::Loop(r), inverse));
        let word = Word::new(ctx, loops(true).chain(loops(false)).collect())?;
        Ok(Self { g, word })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn word(&self) -> &Word {
        &self.word
    }
}

fn code(l: Letter) -> i32 {
    match l.gen {
        Generator::Loop(r) => {
            if l.inverse {
                -(r as i32)
            } else {
                r as i32
            }
        }
        other => unreachable!("non-loop generator {other} in pi1 word"),
    }
}

fn letter(c: i32) -> Letter {
    Letter::signed(Generator::Loop(c.unsigned_abs()), c < 0)
}

fn free_reduce_codes(codes: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for c in codes {
        if out.last() == Some(&-c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

/// Dehn reduction against the precomputed cyclic shifts of `R` and `R^-1`.
#[derive(Debug, Clone)]
pub struct DehnReducer {
    g: u32,
    shifts: Vec<Vec<i32>>,
}

impl DehnReducer {
    pub fn new(g: u32) -> Result<Self, SurfaceError> {
        if g < 2 {
            return Err(SurfaceError::GenusTooSmall(g));
        }
        let relator: Vec<i32> = SurfaceRelator::new(g)?.word.letters().iter().map(|&l| code(l)).collect();
        let inverse: Vec<i32> = relator.iter().rev().map(|c| -c).collect();
        let len = relator.len();
        let mut shifts = Vec::with_capacity(2 * len);
        for base in [&relator, &inverse] {
            for k in 0..len {
                shifts.push(base[k..].iter().chain(&base[..k]).copied().collect());
            }
        }
        Ok(Self { g, shifts })
    }

    /// Shared reducer for genus `g` (built once per genus up to 16).
    pub fn cached(g: u32) -> Result<&'static DehnReducer, SurfaceError> {
        static CACHE: [OnceLock<DehnReducer>; 17] = [const { OnceLock::new() }; 17];
        if g < 2 {
            return Err(SurfaceError::GenusTooSmall(g));
        }
        match CACHE.get(g as usize) {
            Some(cell) => Ok(cell.get_or_init(|| DehnReducer::new(g).expect("genus checked"))),
            None => Ok(Box::leak(Box::new(DehnReducer::new(g)?))),
        }
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    fn relator_len(&self) -> usize {
        4 * self.g as usize
    }

    /// First position with a subword longer than half a relator.
    fn find_long_piece(&self, w: &[i32]) -> Option<(usize, usize, usize)> {
        let len = self.relator_len();
        for pos in 0..w.len() {
            for (s, shift) in self.shifts.iter().enumerate() {
                if shift[0] != w[pos] {
                    continue;
                }
                let m = shift.iter().zip(&w[pos..]).take_while(|(a, b)| a == b).count();
                if 2 * m > len {
                    return Some((pos, s, m));
                }
            }
        }
        None
    }

    fn reduce_codes(&self, input: &[i32]) -> Vec<i32> {
        let mut cur = free_reduce_codes(input.iter().copied());
        loop {
            if let Some((pos, s, m)) = self.find_long_piece(&cur) {
                // u v = 1 with u = cur[pos..pos+m]; replace u by v^-1, which is shorter
                let shift = &self.shifts[s];
                let replacement = shift[m..].iter().rev().map(|c| -c);
                let next: Vec<i32> =
                    cur[..pos].iter().copied().chain(replacement).chain(cur[pos + m..].iter().copied()).collect();
                debug_assert!(next.len() < cur.len());
                cur = free_reduce_codes(next);
                continue;
            }
            let mut lo = 0;
            let mut hi = cur.len();
            while hi - lo >= 2 && cur[lo] == -cur[hi - 1] {
                lo += 1;
                hi -= 1;
            }
            if lo == 0 {
                return cur;
            }
            cur = cur[lo..hi].to_vec();
        }
    }

    /// Terminal word of Dehn's algorithm applied to the cyclic word of `w`.
    pub fn reduce(&self, w: &Word) -> Result<Word, SurfaceError> {
        check_context(w, self.g)?;
        let codes: Vec<i32> = w.letters().iter().map(|&l| code(l)).collect();
        let out = self.reduce_codes(&codes).into_iter().map(letter).collect();
        Ok(Word::new(w.context(), out)?)
    }
}

fn check_context(w: &Word, g: u32) -> Result<(), SurfaceError> {
    let ctx = w.context();
    if ctx.family() == Family::Pi1Surface && ctx.g() == g {
        Ok(())
    } else {
        Err(SurfaceError::WrongContext { expected: g, found: ctx })
    }
}

/// Runs Dehn's algorithm (genus `>= 2`). The word is trivial iff the result is empty.
pub fn dehn_reduce(w: &Pi1Element) -> Result<Word, SurfaceError> {
    DehnReducer::cached(w.genus())?.reduce(w.word())
}

/// Exponent sum of each `a_r`, `r = 1..2g`.
pub fn abelianization(w: &Word) -> Vec<i64> {
    let g = w.context().g();
    let mut sums = vec![0; 2 * g as usize];
    for l in w.letters() {
        if let Generator::Loop(r) = l.gen {
            sums[r as usize - 1] += l.sign();
        }
    }
    sums
}

/// A freely reduced element of `pi1(M)` with a memoized verdict.
#[derive(Debug, Clone)]
pub struct Pi1Element {
    word: Word,
    verdict: OnceLock<Verdict>,
}

impl Pi1Element {
    pub fn new(word: &Word) -> Result<Self, SurfaceError> {
        let ctx = word.context();
        if ctx.family() != Family::Pi1Surface {
            return Err(SurfaceError::WrongContext { expected: ctx.g(), found: ctx });
        }
        Ok(Self { word: word.free_reduce(), verdict: OnceLock::new() })
    }

    pub fn parse(text: &str, g: u32) -> Result<Self, SurfaceError> {
        Self::new(&Word::parse(text, GroupContext::pi1(g)?)?)
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn genus(&self) -> u32 {
        self.word.context().g()
    }

    pub fn verdict(&self) -> Verdict {
        *self.verdict.get_or_init(|| decide(&self.word))
    }
}

impl PartialEq for Pi1Element {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
    }
}

fn decide(w: &Word) -> Verdict {
    let g = w.context().g();
    if g == 1 {
        return Verdict::from_bool(abelianization(w).iter().all(|&s| s == 0));
    }
    let reducer = DehnReducer::cached(g).expect("genus >= 2");
    let codes: Vec<i32> = w.letters().iter().map(|&l| code(l)).collect();
    Verdict::from_bool(reducer.reduce_codes(&codes).is_empty())
}

/// Exact triviality in `pi1(M)`; never `Unknown`.
pub fn is_trivial_pi1(w: &Pi1Element) -> Verdict {
    w.verdict()
}

/// An element of `pi1(M)^n`, one freely reduced word per strand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1Tuple {
    g: u32,
    components: Vec<Word>,
}

impl Pi1Tuple {
    pub fn identity(n: u32, g: u32) -> Result<Self, SurfaceError> {
        let ctx = GroupContext::pi1(g)?;
        Ok(Self { g, components: vec![Word::empty(ctx); n as usize] })
    }

    pub fn new(g: u32, components: Vec<Word>) -> Result<Self, SurfaceError> {
        for c in &components {
            check_context(c, g)?;
        }
        Ok(Self { g, components: components.iter().map(Word::free_reduce).collect() })
    }

    pub fn parse(g: u32, components: &[&str]) -> Result<Self, SurfaceError> {
        let ctx = GroupContext::pi1(g)?;
        let words = components.iter().map(|c| Word::parse(c, ctx)).collect::<Result<Vec<_>, _>>()?;
        Self::new(g, words)
    }

    /// Splits a `Pi1Power` word into its factors.
    pub fn from_power_word(w: &Word) -> Result<Self, SurfaceError> {
        let ctx = w.context();
        if ctx.family() != Family::Pi1Power {
            return Err(SurfaceError::WrongContext { expected: ctx.g(), found: ctx });
        }
        let pi1 = GroupContext::pi1(ctx.g())?;
        let mut parts: Vec<Vec<Letter>> = vec![Vec::new(); ctx.n() as usize];
        for l in w.letters() {
            if let Generator::SurfA(i, r) = l.gen {
                crate::word::push_reduced(&mut parts[i as usize - 1], Letter::signed(Generator::Loop(r), l.inverse));
            }
        }
        let components = parts.into_iter().map(|p| Word::new(pi1, p)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { g: ctx.g(), components })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Word] {
        &self.components
    }

    /// Componentwise `self * other^-1`.
    pub fn difference(&self, other: &Pi1Tuple) -> Result<Pi1Tuple, SurfaceError> {
        if self.arity() != other.arity() {
            return Err(SurfaceError::Arity { expected: self.arity(), found: other.arity() });
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.concat(&b.invert()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { g: self.g, components })
    }
}

impl std::fmt::Display for Pi1Tuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            if c.is_empty() {
                f.write_str("1")?;
            } else {
                write!(f, "{c}")?;
            }
        }
        f.write_str(")")
    }
}

/// Trivial iff every component is trivial in `pi1(M)`.
pub fn tuple_is_trivial(t: &Pi1Tuple) -> Verdict {
    t.components.iter().fold(Verdict::Trivial, |acc, c| acc.and(decide(c)))
}
