use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

/// One factor `u · r^e · u⁻¹` of a product of conjugates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub conjugator: Word,
    pub relator: Word,
    pub exponent: i8,
}

impl Factor {
    pub fn value(&self) -> Word {
        let core = if self.exponent < 0 { self.relator.inverse() } else { self.relator.clone() };
        core.conjugate_by(&self.conjugator)
    }
}

/// Evidence that a word lies in the normal closure of a relator set: the word
/// equals the free product of the listed factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub factors: Vec<Factor>,
}

impl Certificate {
    pub fn product(&self) -> Word {
        self.factors.iter().fold(Word::empty(), |acc, f| acc.mul(&f.value()))
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_conjugator_len(&self) -> usize {
        self.factors.iter().map(|f| f.conjugator.len()).max().unwrap_or(0)
    }

    /// Re-checks the certificate by free reduction alone: every factor uses a
    /// relator from `allowed` (up to cyclic reduction) with exponent ±1, and the
    /// product reduces to `target`.
    pub fn verify(&self, target: &Word, allowed: &[Word]) -> Result<()> {
        let allowed: Vec<Word> = allowed.iter().map(Word::cyclic_reduce).collect();
        for (i, f) in self.factors.iter().enumerate() {
            if f.exponent.abs() != 1 {
                return Err(Error::Verification(format!("factor {i} has exponent {}", f.exponent)));
            }
            if !allowed.contains(&f.relator.cyclic_reduce()) {
                return Err(Error::Verification(format!("factor {i} uses `{}`, not an allowed relator", f.relator)));
            }
        }
        let p = self.product();
        if &p != target {
            return Err(Error::Verification(format!("certificate multiplies out to `{p}`, not `{target}`")));
        }
        Ok(())
    }
}
