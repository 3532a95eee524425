//! Seed derivation and random word generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::{push_reduced, Generator, GroupContext, Letter, Word};

/// Mixes a base seed with a path of integers into an independent stream seed.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    let mut state = splitmix(seed ^ 0x6a09_e667_f3bc_c908);
    for &p in path {
        state = splitmix(state ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    state
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, path))
}

/// Uniform random letters over `alphabet` (both signs), freely reduced as they
/// are appended, until the word reaches `len` letters.
pub fn random_reduced_word<R: Rng>(rng: &mut R, ctx: GroupContext, alphabet: &[Generator], len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    if alphabet.is_empty() {
        return Word::from_raw(ctx, letters);
    }
    while letters.len() < len {
        let gen = alphabet[rng.random_range(0..alphabet.len())];
        let letter = Letter::signed(gen, rng.random_bool(0.5));
        if letters.last().is_some_and(|l| l.cancels(letter)) {
            continue;
        }
        letters.push(letter);
    }
    Word::from_raw(ctx, letters)
}

/// `len` uniform letters over `alphabet`, then free reduction; retried until the
/// reduced word has at least `len / 2` letters (bounded number of attempts).
pub fn random_word_min_half<R: Rng>(rng: &mut R, ctx: GroupContext, alphabet: &[Generator], len: usize) -> Word {
    let mut best = Word::empty(ctx);
    if alphabet.is_empty() {
        return best;
    }
    for _ in 0..256 {
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let gen = alphabet[rng.random_range(0..alphabet.len())];
            push_reduced(&mut letters, Letter::signed(gen, rng.random_bool(0.5)));
        }
        let w = Word::from_raw(ctx, letters);
        if 2 * w.len() >= len {
            return w;
        }
        if w.len() > best.len() {
            best = w;
        }
    }
    best
}
