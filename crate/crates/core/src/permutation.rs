//! Strand permutations induced by braid words.

use std::fmt;

use serde::Serialize;

use crate::word::{Generator, Word};

/// A bijection of `{1..n}`; `images[p - 1]` is the image of `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: u32) -> Self {
        Self { images: (1..=n).collect() }
    }

    /// Returns `None` unless `images` is a bijection of `{1..n}`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            let k = (p as usize).checked_sub(1).filter(|&k| k < n)?;
            if std::mem::replace(&mut seen[k], true) {
                return None;
            }
        }
        Some(Self { images })
    }

    pub fn transposition(n: u32, i: u32) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i as usize - 1, i as usize);
        p
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply(&self, p: u32) -> u32 {
        self.images[p as usize - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &p)| p as usize == k + 1)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Self { images: other.images.iter().map(|&p| self.apply(p)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (k, &p) in self.images.iter().enumerate() {
            images[p as usize - 1] = k as u32 + 1;
        }
        Self { images }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}→{}", k + 1, p)?;
        }
        Ok(())
    }
}

/// Permutation of a word: `w = l1 l2 ... lm` maps to `τ(l1) ∘ τ(l2) ∘ ... ∘ τ(lm)`,
/// where `s_i^{±1}` gives the transposition `(i i+1)` and every other symbol
/// (surface, `t`, `T`, `A` generators, all pure) gives the identity. Equivalently
/// the result sends the final position of a strand to its starting position.
pub fn permutation_of(w: &Word) -> Permutation {
    let n = w.context().n();
    let mut images: Vec<u32> = (1..=n).collect();
    // right-multiplying by a transposition swaps the images of i and i+1
    for l in w.letters() {
        if let Generator::Sigma(i) = l.gen {
            images.swap(i as usize - 1, i as usize);
        }
    }
    Permutation { images }
}
