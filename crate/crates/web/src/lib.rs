//! wasm-bindgen surface for the static page in `www/`. Every function returns
//! a JSON string; errors come back as `{"error": ...}` so the page never has
//! to catch exceptions.

use braidlab::permutation::permutation_of;
use braidlab::presentations::{build_presentation, LHSampler};
use braidlab::reduced_free::lh_trivial_disk;
use braidlab::surface::{dehn_reduce, is_trivial_pi1, Pi1Element};
use braidlab::word::{Family, GroupContext, Word};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn finish(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn family(name: &str) -> Result<Family, String> {
    Ok(match name {
        "Bn" => Family::Bn,
        "PBn" => Family::PBn,
        "HatBn" => Family::HatBn,
        "HatPBn" => Family::HatPBn,
        other => return Err(format!("unknown family {other}")),
    })
}

/// Relator catalogue of a presentation. Link-homotopy families are sampled
/// with `lh_samples` conjugators per index tuple.
#[wasm_bindgen]
pub fn presentation(name: &str, n: u32, g: u32, lh_samples: u32) -> String {
    finish((|| {
        let p = build_presentation(family(name)?, n, g).map_err(|e| e.to_string())?;
        let lh = LHSampler::new(3, lh_samples as usize, 0);
        serde_json::to_value(p.catalogue(&lh)).map_err(|e| e.to_string())
    })())
}

/// Triviality in the surface group of genus `g`, with the Dehn-reduced form.
#[wasm_bindgen]
pub fn pi1_is_trivial(word: &str, g: u32) -> String {
    finish((|| {
        let w = Pi1Element::parse(word, g).map_err(|e| e.to_string())?;
        let reduced = dehn_reduce(&w).map_err(|e| e.to_string())?;
        Ok(json!({ "verdict": is_trivial_pi1(&w).to_string(), "reduced": reduced.to_string() }))
    })())
}

/// Permutation of a disk braid on `n` strands and, when it is pure, whether it
/// is trivial up to link homotopy.
#[wasm_bindgen]
pub fn lh_is_trivial(word: &str, n: u32) -> String {
    finish((|| {
        let ctx = GroupContext::hat_braid(n, 0).map_err(|e| e.to_string())?;
        let w = Word::parse(word, ctx).map_err(|e| e.to_string())?;
        let perm = permutation_of(&w);
        let verdict = if perm.is_identity() {
            lh_trivial_disk(&w).map_err(|e| e.to_string())?.to_string()
        } else {
            "nontrivial".to_string()
        };
        Ok(json!({ "permutation": perm.to_string(), "verdict": verdict }))
    })())
}
