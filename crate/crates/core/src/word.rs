//! Letters, group contexts and the word calculus shared by every other module.
//!
//! A [`Word`] is a finite sequence of signed [`Letter`]s tied to a
//! [`GroupContext`]. Words are values: every operation returns a new word.
//! Words coming out of [`Word::parse`] keep the literal letter sequence;
//! [`Word::concat`], [`Word::substitute`] and [`Word::free_reduce`] always
//! return freely reduced words.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest absolute exponent accepted by the `^k` sugar.
pub const MAX_EXPONENT: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("exponent {exponent} at byte {pos} exceeds the limit of {MAX_EXPONENT}")]
    ExponentTooLarge { pos: usize, exponent: i64 },
    #[error("letter {letter} is not valid in {context}")]
    OutOfRange { letter: String, context: GroupContext },
    #[error("context mismatch: {left} vs {right}")]
    ContextMismatch { left: GroupContext, right: GroupContext },
    #[error("no image given for generator {0}")]
    MissingImage(String),
    #[error("invalid group context: {0}")]
    InvalidContext(String),
}

/// The group a word lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Braid group `B_n(M)`; `g = 0` is the Artin braid group of the disk.
    Bn,
    /// Pure braid group `PB_n(M)`.
    PBn,
    /// Generalized string links up to link-homotopy.
    HatBn,
    /// Homotopy string links.
    HatPBn,
    /// Free group of the given rank on `x1..xk`.
    Free(u32),
    /// Fundamental group of the closed genus-`g` surface on `a1..a2g`.
    Pi1Surface,
    /// The direct power `pi1(M)^n`; letter `a_{i,r}` is `a_r` in factor `i`.
    Pi1Power,
    /// Symmetric group on `n` points generated by adjacent transpositions.
    Symmetric,
}

impl Family {
    pub fn is_surface_braid(self) -> bool {
        matches!(self, Family::Bn | Family::PBn | Family::HatBn | Family::HatPBn)
    }

    pub fn name(self) -> String {
        match self {
            Family::Bn => "Bn".into(),
            Family::PBn => "PBn".into(),
            Family::HatBn => "HatBn".into(),
            Family::HatPBn => "HatPBn".into(),
            Family::Free(k) => format!("F{k}"),
            Family::Pi1Surface => "Pi1".into(),
            Family::Pi1Power => "Pi1Power".into(),
            Family::Symmetric => "Sym".into(),
        }
    }
}

/// Strand count, genus and family. Genus 0 stands for the disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupContext {
    n: u32,
    g: u32,
    family: Family,
}

impl GroupContext {
    pub fn new(family: Family, n: u32, g: u32) -> Result<Self, WordError> {
        let bad = |msg: &str| Err(WordError::InvalidContext(format!("{msg} ({} n={n} g={g})", family.name())));
        match family {
            Family::Bn | Family::PBn | Family::HatBn | Family::HatPBn if n == 0 => bad("need at least one strand"),
            Family::Pi1Surface | Family::Pi1Power if g == 0 => bad("surface groups need genus >= 1"),
            Family::Pi1Power if n == 0 => bad("need at least one factor"),
            Family::Free(_) | Family::Symmetric if g != 0 => bad("genus must be 0"),
            Family::Symmetric if n == 0 => bad("need at least one point"),
            _ => Ok(Self { n, g, family }),
        }
    }

    pub fn braid(n: u32, g: u32) -> Result<Self, WordError> {
        Self::new(Family::Bn, n, g)
    }

    pub fn pure(n: u32, g: u32) -> Result<Self, WordError> {
        Self::new(Family::PBn, n, g)
    }

    pub fn hat_braid(n: u32, g: u32) -> Result<Self, WordError> {
        Self::new(Family::HatBn, n, g)
    }

    pub fn hat_pure(n: u32, g: u32) -> Result<Self, WordError> {
        Self::new(Family::HatPBn, n, g)
    }

    pub fn free(rank: u32) -> Self {
        Self { n: 1, g: 0, family: Family::Free(rank) }
    }

    pub fn pi1(g: u32) -> Result<Self, WordError> {
        Self::new(Family::Pi1Surface, 1, g)
    }

    pub fn pi1_power(n: u32, g: u32) -> Result<Self, WordError> {
        Self::new(Family::Pi1Power, n, g)
    }

    pub fn symmetric(n: u32) -> Result<Self, WordError> {
        Self::new(Family::Symmetric, n, 0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_disk(&self) -> bool {
        self.family.is_surface_braid() && self.g == 0
    }

    /// Same strands and genus, different family.
    pub fn with_family(&self, family: Family) -> Result<Self, WordError> {
        Self::new(family, self.n, self.g)
    }

    /// Same family and strands over a different surface.
    pub fn with_genus(&self, g: u32) -> Result<Self, WordError> {
        Self::new(self.family, self.n, g)
    }

    /// Whether `gen` names a generator or a derived symbol of this group.
    pub fn admits(&self, gen: Generator) -> bool {
        use Generator::*;
        let (n, g) = (self.n, self.g);
        let pair = |i: u32, j: u32| 1 <= i && i < j && j <= n;
        let handle = |r: u32| 1 <= r && r <= 2 * g;
        match self.family {
            Family::Bn | Family::HatBn => match gen {
                Sigma(i) => 1 <= i && i < n,
                SurfA(i, r) => i == 1 && handle(r),
                BigT(i, j) | SmallT(i, j) => pair(i, j),
                CapA(j, s) => n >= 2 && j == 2 && handle(s),
                _ => false,
            },
            Family::PBn | Family::HatPBn => match gen {
                SurfA(i, r) | CapA(i, r) => 1 <= i && i <= n && handle(r),
                BigT(i, j) | SmallT(i, j) => pair(i, j),
                _ => false,
            },
            Family::Free(k) => matches!(gen, FreeX(i) if 1 <= i && i <= k),
            Family::Pi1Surface => matches!(gen, Loop(r) if handle(r)),
            Family::Pi1Power => matches!(gen, SurfA(i, r) if 1 <= i && i <= n && handle(r)),
            Family::Symmetric => matches!(gen, Sigma(i) if 1 <= i && i < n),
        }
    }

    /// The generating set of the group's presentation (no derived symbols).
    pub fn generators(&self) -> Vec<Generator> {
        use Generator::*;
        let (n, g) = (self.n, self.g);
        let handles = |i: u32| (1..=2 * g).map(move |r| SurfA(i, r));
        let pairs = || (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)));
        match self.family {
            Family::Bn | Family::HatBn => (1..n).map(Sigma).chain(handles(1)).collect(),
            Family::PBn => (1..=n).flat_map(handles).chain(pairs().map(|(i, j)| BigT(i, j))).collect(),
            Family::HatPBn => (1..=n).flat_map(handles).chain(pairs().map(|(i, j)| SmallT(i, j))).collect(),
            Family::Free(k) => (1..=k).map(FreeX).collect(),
            Family::Pi1Surface => (1..=2 * g).map(Loop).collect(),
            Family::Pi1Power => (1..=n).flat_map(handles).collect(),
            Family::Symmetric => (1..n).map(Sigma).collect(),
        }
    }

    /// Every symbol the context admits: generators plus derived symbols.
    pub fn symbols(&self) -> Vec<Generator> {
        use Generator::*;
        let (n, g) = (self.n, self.g);
        let top = n.max(2 * g).max(match self.family {
            Family::Free(k) => k,
            _ => 0,
        });
        let mut out = Vec::new();
        for i in 1..=top {
            out.extend([Sigma(i), FreeX(i), Loop(i)]);
            for j in 1..=top {
                out.extend([SurfA(i, j), SmallT(i, j), BigT(i, j), CapA(i, j)]);
            }
        }
        out.retain(|&gen| self.admits(gen));
        out.sort();
        out
    }

    pub fn validate(&self, letter: Letter) -> Result<(), WordError> {
        if self.admits(letter.gen) {
            Ok(())
        } else {
            Err(WordError::OutOfRange { letter: letter.to_string(), context: *self })
        }
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Free(k) => write!(f, "F{k}"),
            Family::Pi1Surface => write!(f, "Pi1(g={})", self.g),
            Family::Symmetric => write!(f, "Sym({})", self.n),
            fam => write!(f, "{}(n={}, g={})", fam.name(), self.n, self.g),
        }
    }
}

/// A generator symbol. All indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Artin generator `s_i`.
    Sigma(u32),
    /// Surface generator `a_{i,r}` of strand `i`.
    SurfA(u32, u32),
    /// Homotopy string link generator `t_{i,j}`.
    SmallT(u32, u32),
    /// Pure braid generator `T_{i,j}`.
    BigT(u32, u32),
    /// Derived symbol `A_{j,s}`.
    CapA(u32, u32),
    /// Free generator `x_i`.
    FreeX(u32),
    /// Surface loop `a_r` in `pi1(M)`.
    Loop(u32),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Sigma(i) => write!(f, "s{i}"),
            Generator::SurfA(i, r) => write!(f, "a{i}.{r}"),
            Generator::SmallT(i, j) => write!(f, "t{i}.{j}"),
            Generator::BigT(i, j) => write!(f, "T{i}.{j}"),
            Generator::CapA(j, s) => write!(f, "A{j}.{s}"),
            Generator::FreeX(i) => write!(f, "x{i}"),
            Generator::Loop(r) => write!(f, "a{r}"),
        }
    }
}

/// One signed occurrence of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(gen: Generator) -> Self {
        Self { gen, inverse: false }
    }

    pub const fn inv(self) -> Self {
        Self { gen: self.gen, inverse: !self.inverse }
    }

    pub const fn signed(gen: Generator, inverse: bool) -> Self {
        Self { gen, inverse }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl From<Generator> for Letter {
    fn from(gen: Generator) -> Self {
        Letter::new(gen)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen)?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// Appends `letter`, cancelling against the last letter when possible.
pub(crate) fn push_reduced(buf: &mut Vec<Letter>, letter: Letter) {
    match buf.last() {
        Some(&last) if last.cancels(letter) => {
            buf.pop();
        }
        _ => buf.push(letter),
    }
}

pub(crate) fn reduce_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut buf = Vec::new();
    for l in letters {
        push_reduced(&mut buf, l);
    }
    buf
}

/// A finite sequence of letters in a fixed context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    ctx: GroupContext,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(ctx: GroupContext) -> Self {
        Self { ctx, letters: Vec::new() }
    }

    /// Builds a word from a literal sequence, validating every letter. No reduction.
    pub fn new(ctx: GroupContext, letters: Vec<Letter>) -> Result<Self, WordError> {
        for &l in &letters {
            ctx.validate(l)?;
        }
        Ok(Self { ctx, letters })
    }

    pub fn from_gens(ctx: GroupContext, gens: impl IntoIterator<Item = Generator>) -> Result<Self, WordError> {
        Self::new(ctx, gens.into_iter().map(Letter::new).collect())
    }

    pub fn letter(ctx: GroupContext, letter: Letter) -> Result<Self, WordError> {
        Self::new(ctx, vec![letter])
    }

    /// Caller guarantees every letter is admitted by `ctx`.
    pub(crate) fn from_raw(ctx: GroupContext, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|l| ctx.admits(l.gen)), "invalid letter for {ctx}");
        Self { ctx, letters }
    }

    pub fn context(&self) -> GroupContext {
        self.ctx
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&a), Some(&b)) if self.letters.len() > 1 => !a.cancels(b),
                _ => true,
            }
    }

    pub fn free_reduce(&self) -> Word {
        Word { ctx: self.ctx, letters: reduce_letters(self.letters.iter().copied()) }
    }

    /// Reverse order, flip every sign.
    pub fn invert(&self) -> Word {
        Word { ctx: self.ctx, letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Product `self * other`, freely reduced.
    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        self.same_context(other)?;
        let letters = reduce_letters(self.letters.iter().chain(&other.letters).copied());
        Ok(Word { ctx: self.ctx, letters })
    }

    /// Product of a sequence of words in the same context, freely reduced.
    pub fn product<'a>(ctx: GroupContext, words: impl IntoIterator<Item = &'a Word>) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for w in words {
            if w.ctx != ctx {
                return Err(WordError::ContextMismatch { left: ctx, right: w.ctx });
            }
            for &l in &w.letters {
                push_reduced(&mut letters, l);
            }
        }
        Ok(Word { ctx, letters })
    }

    /// `u v u^-1 v^-1`, freely reduced.
    pub fn commutator(u: &Word, v: &Word) -> Result<Word, WordError> {
        u.same_context(v)?;
        Word::product(u.ctx, [u, v, &u.invert(), &v.invert()])
    }

    /// `h w h^-1`, freely reduced.
    pub fn conjugate_by(&self, h: &Word) -> Result<Word, WordError> {
        self.same_context(h)?;
        Word::product(self.ctx, [h, self, &h.invert()])
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut letters = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut letters, l);
            }
        }
        Word { ctx: self.ctx, letters }
    }

    /// Splits a freely reduced word as `u c u^-1` with `c` cyclically reduced.
    /// Returns `(c, u)`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let reduced = self.free_reduce();
        let letters = &reduced.letters;
        let mut lo = 0;
        let mut hi = letters.len();
        while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let core = Word { ctx: self.ctx, letters: letters[lo..hi].to_vec() };
        let conj = Word { ctx: self.ctx, letters: letters[..lo].to_vec() };
        (core, conj)
    }

    /// Re-validates the same letter sequence in another context.
    pub fn recontext(&self, ctx: GroupContext) -> Result<Word, WordError> {
        Word::new(ctx, self.letters.clone())
    }

    /// Homomorphic image, freely reduced in the target context.
    pub fn substitute<I: Images + ?Sized>(&self, images: &I) -> Result<Word, WordError> {
        let target = images.target();
        let mut letters = Vec::new();
        for &l in &self.letters {
            let img = images.image(l.gen).ok_or_else(|| WordError::MissingImage(l.gen.to_string()))?;
            if img.ctx != target {
                return Err(WordError::ContextMismatch { left: target, right: img.ctx });
            }
            if l.inverse {
                for &m in img.letters.iter().rev() {
                    push_reduced(&mut letters, m.inv());
                }
            } else {
                for &m in &img.letters {
                    push_reduced(&mut letters, m);
                }
            }
        }
        Ok(Word { ctx: target, letters })
    }

    /// Exponent sum of every generator occurring in the word.
    pub fn exponent_sums(&self) -> BTreeMap<Generator, i64> {
        let mut sums = BTreeMap::new();
        for l in &self.letters {
            *sums.entry(l.gen).or_insert(0) += l.sign();
        }
        sums.retain(|_, v| *v != 0);
        sums
    }

    pub fn parse(text: &str, ctx: GroupContext) -> Result<Word, WordError> {
        let letters = Parser::new(text).parse_all()?;
        let mut checked = Vec::with_capacity(letters.len());
        for (pos, l) in letters {
            if !ctx.admits(l.gen) {
                return Err(WordError::OutOfRange { letter: format!("{l} (byte {pos})"), context: ctx });
            }
            checked.push(l);
        }
        Ok(Word { ctx, letters: checked })
    }

    fn same_context(&self, other: &Word) -> Result<(), WordError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(WordError::ContextMismatch { left: self.ctx, right: other.ctx })
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn parse_word(text: &str, ctx: GroupContext) -> Result<Word, WordError> {
    Word::parse(text, ctx)
}

pub fn format_word(w: &Word) -> String {
    w.to_string()
}

/// Generator images for [`Word::substitute`].
pub trait Images {
    fn target(&self) -> GroupContext;
    fn image(&self, gen: Generator) -> Option<Word>;
}

/// Finite table of generator images.
#[derive(Debug, Clone)]
pub struct ImageTable {
    target: GroupContext,
    table: BTreeMap<Generator, Word>,
}

impl ImageTable {
    pub fn new(target: GroupContext) -> Self {
        Self { target, table: BTreeMap::new() }
    }

    pub fn insert(&mut self, gen: Generator, image: Word) -> Result<(), WordError> {
        if image.ctx != self.target {
            return Err(WordError::ContextMismatch { left: self.target, right: image.ctx });
        }
        self.table.insert(gen, image);
        Ok(())
    }

    pub fn get(&self, gen: Generator) -> Option<&Word> {
        self.table.get(&gen)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Generator, &Word)> {
        self.table.iter()
    }
}

impl Images for ImageTable {
    fn target(&self) -> GroupContext {
        self.target
    }

    fn image(&self, gen: Generator) -> Option<Word> {
        self.table.get(&gen).cloned()
    }
}

/// Images computed on demand by a closure.
pub struct FnImages<F> {
    target: GroupContext,
    f: F,
}

impl<F: Fn(Generator) -> Option<Word>> FnImages<F> {
    pub fn new(target: GroupContext, f: F) -> Self {
        Self { target, f }
    }
}

impl<F: Fn(Generator) -> Option<Word>> Images for FnImages<F> {
    fn target(&self) -> GroupContext {
        self.target
    }

    fn image(&self, gen: Generator) -> Option<Word> {
        (self.f)(gen)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self { src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, WordError> {
        Err(WordError::Syntax { pos: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Vec<(usize, Letter)>, WordError> {
        let out = self.parse_seq(false)?;
        self.skip_ws();
        match self.peek() {
            None => Ok(out),
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
        }
    }

    /// Parses items until end of input, or until `,`/`]` when nested.
    fn parse_seq(&mut self, nested: bool) -> Result<Vec<(usize, Letter)>, WordError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(b',') | Some(b']') if nested => return Ok(out),
                Some(b'[') => {
                    let start = self.pos;
                    self.pos += 1;
                    let u = self.parse_seq(true)?;
                    self.skip_ws();
                    if self.peek() != Some(b',') {
                        return self.err("expected ',' in commutator");
                    }
                    self.pos += 1;
                    let v = self.parse_seq(true)?;
                    self.skip_ws();
                    if self.peek() != Some(b']') {
                        return self.err("expected ']' to close commutator");
                    }
                    self.pos += 1;
                    let inv = |s: &[(usize, Letter)]| s.iter().rev().map(|&(_, l)| (start, l.inv())).collect::<Vec<_>>();
                    let (ui, vi) = (inv(&u), inv(&v));
                    out.extend(u);
                    out.extend(v);
                    out.extend(ui);
                    out.extend(vi);
                }
                Some(_) => {
                    let start = self.pos;
                    let gen = self.parse_gen()?;
                    let exp = self.parse_exp()?;
                    let letter = Letter::signed(gen, exp < 0);
                    out.extend(std::iter::repeat_n((start, letter), exp.unsigned_abs() as usize));
                }
            }
        }
    }

    fn parse_int(&mut self) -> Result<u32, WordError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an index");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match digits.parse::<u32>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(WordError::Syntax { pos: start, message: format!("index {digits} must be a positive integer") }),
        }
    }

    fn parse_pair(&mut self) -> Result<(u32, u32), WordError> {
        let i = self.parse_int()?;
        if self.peek() != Some(b'.') {
            return self.err("expected '.' between indices");
        }
        self.pos += 1;
        Ok((i, self.parse_int()?))
    }

    fn parse_gen(&mut self) -> Result<Generator, WordError> {
        let c = self.peek().expect("caller checked for input");
        self.pos += 1;
        Ok(match c {
            b's' => Generator::Sigma(self.parse_int()?),
            b'x' => Generator::FreeX(self.parse_int()?),
            b'a' => {
                let i = self.parse_int()?;
                if self.peek() == Some(b'.') {
                    self.pos += 1;
                    Generator::SurfA(i, self.parse_int()?)
                } else {
                    Generator::Loop(i)
                }
            }
            b't' => {
                let (i, j) = self.parse_pair()?;
                Generator::SmallT(i, j)
            }
            b'T' => {
                let (i, j) = self.parse_pair()?;
                Generator::BigT(i, j)
            }
            b'A' => {
                let (j, s) = self.parse_pair()?;
                Generator::CapA(j, s)
            }
            other => {
                self.pos -= 1;
                return self.err(format!("unknown generator '{}'", other as char));
            }
        })
    }

    fn parse_exp(&mut self) -> Result<i64, WordError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        let start = self.pos;
        self.pos += 1;
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return self.err("expected an exponent after '^'");
        }
        let digits = std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ascii digits");
        let magnitude: i64 = digits
            .parse()
            .map_err(|_| WordError::ExponentTooLarge { pos: start, exponent: i64::MAX })?;
        let exponent = if negative { -magnitude } else { magnitude };
        if magnitude > MAX_EXPONENT {
            return Err(WordError::ExponentTooLarge { pos: start, exponent });
        }
        Ok(exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn free(text: &str) -> Word {
        Word::parse(text, GroupContext::free(4)).unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        assert_eq!(free("x1 x1^-1 x2").free_reduce(), free("x2"));
        assert_eq!(free("").free_reduce(), free(""));
        assert_eq!(free("x1 x2 x2^-1 x1").free_reduce(), free("x1 x1"));
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(free("x1 x2").invert(), free("x2^-1 x1^-1"));
        assert!(free("").invert().is_empty());
        let b = GroupContext::braid(3, 1).unwrap();
        let w = Word::parse("s1 s2^2", b).unwrap();
        assert_eq!(w.invert(), Word::parse("s2^-1 s2^-1 s1^-1", b).unwrap());
    }

    #[test]
    fn concat_examples() {
        assert!(free("x1").concat(&free("x1^-1")).unwrap().is_empty());
        let b = GroupContext::braid(3, 1).unwrap();
        let s1 = Word::parse("s1", b).unwrap();
        let s2 = Word::parse("s2", b).unwrap();
        assert_eq!(s1.concat(&s2).unwrap().to_string(), "s1 s2");
        let p = GroupContext::pure(2, 1).unwrap();
        let a = Word::parse("a1.1", p).unwrap();
        assert_eq!(a.concat(&Word::empty(p)).unwrap(), a);
    }

    #[test]
    fn concat_rejects_mixed_contexts() {
        let b = GroupContext::braid(3, 1).unwrap();
        let err = free("x1").concat(&Word::empty(b)).unwrap_err();
        assert!(matches!(err, WordError::ContextMismatch { .. }));
    }

    #[test]
    fn cyclic_reduction_examples() {
        let (core, u) = free("x1 x2 x1^-1").cyclic_reduce();
        assert_eq!((core, u), (free("x2"), free("x1")));
        let (core, u) = free("x1 x2").cyclic_reduce();
        assert_eq!((core, u), (free("x1 x2"), free("")));
        let (core, u) = free("x1^-1 x2 x2 x1").cyclic_reduce();
        assert_eq!((core, u), (free("x2 x2"), free("x1^-1")));
    }

    #[test]
    fn substitution_examples() {
        let b = GroupContext::braid(3, 1).unwrap();
        let table = ImageTable::new(GroupContext::free(4));
        assert!(Word::parse("s1 s1^-1", b).unwrap().free_reduce().substitute(&table).unwrap().is_empty());

        let mut table = ImageTable::new(GroupContext::free(4));
        let (u, v) = (free("x3 x1"), free("x1^-1 x4"));
        table.insert(Generator::FreeX(1), u.clone()).unwrap();
        table.insert(Generator::FreeX(2), v.clone()).unwrap();
        assert_eq!(free("x1 x2").substitute(&table).unwrap(), u.concat(&v).unwrap());
        assert_eq!(
            free("x1 x3").substitute(&table).unwrap_err(),
            WordError::MissingImage("x3".into())
        );
    }

    #[test]
    fn parse_examples() {
        let b = GroupContext::braid(3, 1).unwrap();
        let w = Word::parse("s1 s2^-1", b).unwrap();
        assert_eq!(w.letters(), &[Letter::new(Generator::Sigma(1)), Letter::new(Generator::Sigma(2)).inv()]);

        let p = GroupContext::pure(2, 1).unwrap();
        let w = Word::parse("a1.2^3", p).unwrap();
        assert_eq!(w.letters(), &[Letter::new(Generator::SurfA(1, 2)); 3]);

        assert_eq!(free("[x1,x2]"), free("x1 x2 x1^-1 x2^-1"));
        assert_eq!(free("[x1 x2 , x3]").to_string(), "x1 x2 x3 x2^-1 x1^-1 x3^-1");
        assert_eq!(free("[[x1,x2],x3]").len(), 10);
        assert_eq!(free("x2^0 x1^+2"), free("x1 x1"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let ctx = GroupContext::free(4);
        assert!(matches!(Word::parse("x1 y2", ctx), Err(WordError::Syntax { pos: 3, .. })));
        assert!(matches!(Word::parse("x1 x0", ctx), Err(WordError::Syntax { pos: 4, .. })));
        assert!(matches!(Word::parse("[x1, x2", ctx), Err(WordError::Syntax { .. })));
        assert!(matches!(Word::parse("x1^", ctx), Err(WordError::Syntax { .. })));
        assert!(matches!(Word::parse("x1^1000001", ctx), Err(WordError::ExponentTooLarge { .. })));
        assert!(matches!(Word::parse("x5", ctx), Err(WordError::OutOfRange { .. })));
        let b = GroupContext::braid(3, 1).unwrap();
        assert!(matches!(Word::parse("s3", b), Err(WordError::OutOfRange { .. })));
        assert!(matches!(Word::parse("a2.1", b), Err(WordError::OutOfRange { .. })));
        assert!(matches!(Word::parse("T2.1", b), Err(WordError::OutOfRange { .. })));
    }

    #[test]
    fn context_invariants() {
        assert!(GroupContext::pi1(0).is_err());
        assert!(GroupContext::braid(0, 1).is_err());
        assert!(GroupContext::new(Family::Symmetric, 3, 1).is_err());
        assert!(GroupContext::pure(3, 0).unwrap().is_disk());
        let disk = GroupContext::pure(3, 0).unwrap();
        assert!(!disk.admits(Generator::SurfA(1, 1)));
        assert_eq!(disk.generators().len(), 3);
        let hp = GroupContext::hat_pure(3, 2).unwrap();
        assert_eq!(hp.generators().len(), 3 * 4 + 3);
        assert!(hp.symbols().contains(&Generator::CapA(3, 4)));
    }

    fn arb_word(rank: u32, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((1..=rank, any::<bool>()), 0..max_len).prop_map(move |v| {
            let letters = v.into_iter().map(|(i, inv)| Letter::signed(Generator::FreeX(i), inv)).collect();
            Word::new(GroupContext::free(rank), letters).unwrap()
        })
    }

    fn arb_surface_word() -> impl Strategy<Value = Word> {
        let ctx = GroupContext::hat_pure(4, 2).unwrap();
        let symbols = ctx.symbols();
        prop::collection::vec((prop::sample::select(symbols), any::<bool>()), 0..24)
            .prop_map(move |v| Word::new(ctx, v.into_iter().map(|(g, inv)| Letter::signed(g, inv)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent_and_shortening(w in arb_word(3, 40)) {
            let r = w.free_reduce();
            prop_assert!(r.is_reduced());
            prop_assert!(r.len() <= w.len());
            prop_assert_eq!(r.free_reduce(), r);
        }

        #[test]
        fn group_laws(u in arb_word(3, 20), v in arb_word(3, 20), w in arb_word(3, 20)) {
            prop_assert!(u.concat(&u.invert()).unwrap().is_empty());
            let left = u.concat(&v).unwrap().concat(&w).unwrap();
            let right = u.concat(&v.concat(&w).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn cyclic_reduction_recomposes(w in arb_word(3, 30)) {
            let (core, u) = w.cyclic_reduce();
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(core.conjugate_by(&u).unwrap(), w.free_reduce());
        }

        #[test]
        fn substitution_is_a_homomorphism(
            u in arb_word(3, 15),
            v in arb_word(3, 15),
            imgs in prop::collection::vec(arb_word(2, 6), 3),
        ) {
            let mut table = ImageTable::new(GroupContext::free(2));
            for (i, img) in imgs.into_iter().enumerate() {
                table.insert(Generator::FreeX(i as u32 + 1), img).unwrap();
            }
            let whole = u.concat(&v).unwrap().substitute(&table).unwrap();
            let parts = u.substitute(&table).unwrap().concat(&v.substitute(&table).unwrap()).unwrap();
            prop_assert_eq!(whole, parts);
            prop_assert_eq!(u.invert().substitute(&table).unwrap(), u.substitute(&table).unwrap().invert());
        }

        #[test]
        fn format_parse_round_trip(w in arb_surface_word()) {
            let text = w.to_string();
            prop_assert_eq!(Word::parse(&text, w.context()).unwrap(), w);
        }
    }
}
