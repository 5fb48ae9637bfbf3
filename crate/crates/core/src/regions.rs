//! Vertex classification relative to `D(N, M) = tᴺA·{1, t⁻¹, …, t⁻ᴹ}`.
//!
//! Everything here is computed from levels and coset membership alone; balls
//! are only used to test it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnn::{in_coset_tNA, level, HnnPresentation, Truth};
use crate::word::Word;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    InD,
    SpecialK0,
    OtherComponent,
    Unknown,
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionLabel::InD => "InD",
            RegionLabel::SpecialK0 => "SpecialK0",
            RegionLabel::OtherComponent => "OtherComponent",
            RegionLabel::Unknown => "Unknown",
        })
    }
}

/// The data a label is computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub label: RegionLabel,
    pub level: i64,
    /// `v·t^(N − level) ∈ tᴺA`, or `None` when the level alone decided.
    pub coset: Option<Truth>,
    /// The level window `[N − M, N]`.
    pub window: (i64, i64),
}

fn window(n: usize, m: usize) -> (i64, i64) {
    (n as i64 - m as i64, n as i64)
}

#[allow(non_snake_case)]
pub fn in_D(v: &Word, n: usize, m: usize, p: &HnnPresentation) -> Truth {
    let (lo, hi) = window(n, m);
    let lv = level(v, p.stable());
    if lv < lo || lv > hi {
        return Truth::False;
    }
    in_coset_tNA(v, n as i64, p)
}

pub fn classify_with_evidence(v: &Word, n: usize, m: usize, p: &HnnPresentation) -> Classification {
    let (lo, hi) = window(n, m);
    let lv = level(v, p.stable());
    if lv > hi {
        return Classification { label: RegionLabel::SpecialK0, level: lv, coset: None, window: (lo, hi) };
    }
    let coset = in_coset_tNA(v, n as i64, p);
    let label = match (lv >= lo, coset) {
        (_, Truth::Unknown) => RegionLabel::Unknown,
        (true, Truth::True) => RegionLabel::InD,
        (true, Truth::False) => RegionLabel::SpecialK0,
        (false, Truth::True) => RegionLabel::OtherComponent,
        (false, Truth::False) => RegionLabel::SpecialK0,
    };
    Classification { label, level: lv, coset: Some(coset), window: (lo, hi) }
}

pub fn classify(v: &Word, n: usize, m: usize, p: &HnnPresentation) -> RegionLabel {
    classify_with_evidence(v, n, m, p).label
}

/// Checks that `v·tⁿ·u` avoids `D(N, M)` for `n ≤ n_max` and every base word
/// `u` of length at most 3. Requires `v` to be classified SpecialK0.
pub fn check_up_lemma(v: &Word, big_n: usize, big_m: usize, n_max: usize, p: &HnnPresentation) -> Result<bool> {
    let label = classify(v, big_n, big_m, p);
    if label != RegionLabel::SpecialK0 {
        return Err(Error::Contract(format!("`{v}` is {label}, not SpecialK0")));
    }
    let suffixes = p.alphabet().reduced_words_up_to(3);
    for k in 0..=n_max {
        let base = v.mul(&p.t_pow(k as i64));
        for u in &suffixes {
            if in_D(&base.mul(u), big_n, big_m, p) != Truth::False {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The `n ≥ 0` with `w·tⁿ ∈ vA`, i.e. `wA` lies `n` levels directly below `vA`.
/// The only candidate is the level difference, and it must not exceed `cap`.
pub fn coset_geometry(v: &Word, w: &Word, cap: usize, p: &HnnPresentation) -> Option<usize> {
    let diff = level(v, p.stable()) - level(w, p.stable());
    if diff < 0 || diff as usize > cap {
        return None;
    }
    let x = v.inverse().mul(w).mul(&p.t_pow(diff));
    (in_coset_tNA(&x, 0, p) == Truth::True).then_some(diff as usize)
}

/// Whether two OtherComponent vertices lie in the same component of the
/// complement of `D(N, M)`: their lifts to level `N − M − 1` share an `A`-coset.
pub fn same_other_component(v1: &Word, v2: &Word, big_n: usize, big_m: usize, p: &HnnPresentation) -> Result<Truth> {
    for v in [v1, v2] {
        let label = classify(v, big_n, big_m, p);
        if label != RegionLabel::OtherComponent {
            return Err(Error::Contract(format!("`{v}` is {label}, not OtherComponent")));
        }
    }
    let top = big_n as i64 - big_m as i64 - 1;
    let lift = |v: &Word| v.mul(&p.t_pow(top - level(v, p.stable())));
    let x = lift(v1).inverse().mul(&lift(v2));
    Ok(in_coset_tNA(&x, 0, p))
}
