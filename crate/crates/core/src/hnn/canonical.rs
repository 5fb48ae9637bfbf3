use std::fmt;

use serde::{Deserialize, Serialize};

use super::{HnnPresentation, PinchCapability};
use crate::error::{Error, Result};
use crate::oracle::Verdict;
use crate::word::Word;

/// Exponent sum of the stable letter.
pub fn level(w: &Word, stable: char) -> i64 {
    w.exponent_sum(stable)
}

/// Three-valued answer for questions a semi oracle may leave open.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Truth::True
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "True",
            Truth::False => "False",
            Truth::Unknown => "Unknown",
        })
    }
}

/// `tⁿ·w·t⁻ᵐ` with `w` over the base alphabet.
///
/// When `exact` is set, `n` and `m` are minimal: either one of them is zero or
/// `w` is not a `φ`-image in the base group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub w: Word,
    pub m: usize,
    pub exact: bool,
}

impl CanonicalForm {
    pub fn identity() -> CanonicalForm {
        CanonicalForm { n: 0, w: Word::empty(), m: 0, exact: true }
    }

    pub fn level(&self) -> i64 {
        self.n as i64 - self.m as i64
    }

    pub fn to_word(&self, stable: char) -> Word {
        Word::power(stable, self.n as i64).mul(&self.w).mul(&Word::power(stable, -(self.m as i64)))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n, if self.w.is_empty() { "1".to_string() } else { self.w.to_string() }, self.m)?;
        if !self.exact {
            f.write_str(" best-effort")?;
        }
        Ok(())
    }
}

enum Pinch {
    Preimage(Word),
    NotInImage,
    Undecided,
}

impl HnnPresentation {
    /// Pinch attempts that never consult the oracle.
    fn cheap_pinch(&self, w: &Word) -> Option<Word> {
        if let Some(u) = self.image_graph().preimage(w) {
            return Some(u);
        }
        self.section().map(|psi| psi.image(w))
    }

    fn pinch(&self, w: &Word) -> Pinch {
        if let Some(u) = self.cheap_pinch(w) {
            return Pinch::Preimage(u);
        }
        match self.pinch_capability() {
            PinchCapability::Exact => Pinch::NotInImage,
            PinchCapability::Surjective => unreachable!("section always yields a preimage"),
            PinchCapability::Partial => {
                if self.base_identity(w).value == Verdict::Trivial {
                    Pinch::Preimage(Word::empty())
                } else {
                    Pinch::Undecided
                }
            }
        }
    }

    /// Britton canonical form; the word must be over `𝒜 ∪ {t}`.
    pub fn canonical_form(&self, word: &Word) -> CanonicalForm {
        let t = self.stable();
        let (mut n, mut w, mut m) = (0usize, Word::empty(), 0usize);
        for &l in word.letters() {
            if l.generator() == t {
                if l.is_inverse() {
                    m += 1;
                } else if m > 0 {
                    m -= 1;
                } else {
                    n += 1;
                    w = self.phi().image(&w);
                }
            } else {
                let x = Word::letter(l);
                w = w.mul(&self.phi().image_k(&x, m));
            }
            while n > 0 && m > 0 {
                match self.cheap_pinch(&w) {
                    Some(u) => {
                        w = u;
                        n -= 1;
                        m -= 1;
                    }
                    None => break,
                }
            }
        }
        let mut exact = true;
        while n > 0 && m > 0 {
            match self.pinch(&w) {
                Pinch::Preimage(u) => {
                    w = u;
                    n -= 1;
                    m -= 1;
                }
                Pinch::NotInImage => break,
                Pinch::Undecided => {
                    exact = false;
                    break;
                }
            }
        }
        CanonicalForm { n, w, m, exact }
    }

    /// Whether two exact forms denote the same element.
    pub fn forms_equal(&self, a: &CanonicalForm, b: &CanonicalForm) -> Truth {
        if a.level() != b.level() {
            return Truth::False;
        }
        if a.n == b.n && a.m == b.m && a.w == b.w {
            return Truth::True;
        }
        equal_in_G(&a.to_word(self.stable()), &b.to_word(self.stable()), self)
    }
}

/// Free function form of [`HnnPresentation::canonical_form`] with an alphabet check.
pub fn canonical_form(w: &Word, p: &HnnPresentation) -> Result<CanonicalForm> {
    p.check_word(w)?;
    Ok(p.canonical_form(w))
}

/// Decides `u = v` in the extension.
///
/// The canonical form of `u·v⁻¹` has level zero, so it is `tⁿ·w·t⁻ⁿ`, which is
/// trivial exactly when `w` is trivial in the base group. The answer is therefore
/// definite whenever the base oracle's answer is.
#[allow(non_snake_case)]
pub fn equal_in_G(u: &Word, v: &Word, p: &HnnPresentation) -> Truth {
    let g = u.mul(&v.inverse());
    if level(&g, p.stable()) != 0 {
        return Truth::False;
    }
    let f = p.canonical_form(&g);
    if f.w.is_empty() {
        return Truth::True;
    }
    if f.exact && f.n > 0 {
        // w is not a φ-image, so in particular w ≠ 1.
        return Truth::False;
    }
    match p.base_identity(&f.w).value {
        Verdict::Trivial => Truth::True,
        Verdict::Nontrivial => Truth::False,
        Verdict::Unknown => Truth::Unknown,
    }
}

/// Decides `t⁻ᴺ·v·t^(N − level(v)) ∈ A`.
#[allow(non_snake_case)]
pub fn in_coset_tNA(v: &Word, big_n: i64, p: &HnnPresentation) -> Truth {
    let lv = level(v, p.stable());
    let x = p.t_pow(-big_n).mul(v).mul(&p.t_pow(big_n - lv));
    let f = p.canonical_form(&x);
    if f.n == 0 {
        Truth::True
    } else if f.exact {
        Truth::False
    } else {
        Truth::Unknown
    }
}

/// `N(C)`, `M(C)` and the per-vertex `M(v, C)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub n: usize,
    pub m: usize,
    pub table: Vec<(Word, usize)>,
}

pub fn envelope(c: &[Word], p: &HnnPresentation) -> Result<Envelope> {
    let mut forms = Vec::with_capacity(c.len());
    for v in c {
        p.check_word(v)?;
        let f = p.canonical_form(v);
        if !f.exact {
            return Err(Error::UnknownEnvelope(v.to_string()));
        }
        forms.push(f);
    }
    let big_n = forms.iter().map(|f| f.n).max().unwrap_or(0);
    let mut table = Vec::with_capacity(c.len());
    for (v, f) in c.iter().zip(&forms) {
        let mv = big_n - f.n + f.m;
        let shifted = v.mul(&p.t_pow(mv as i64));
        if in_coset_tNA(&shifted, big_n as i64, p) != Truth::True {
            return Err(Error::Verification(format!("`{v}`·t^{mv} is not in t^{big_n}A")));
        }
        table.push((v.clone(), mv));
    }
    let big_m = table.iter().map(|(_, m)| *m).max().unwrap_or(0);
    Ok(Envelope { n: big_n, m: big_m, table })
}
