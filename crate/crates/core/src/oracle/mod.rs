//! Word-problem deciders for base groups.
//!
//! Every oracle answers `is_identity` for words over its alphabet. Exact oracles
//! always answer Trivial or Nontrivial; semi oracles may answer Unknown but never
//! give a wrong definite answer.

mod bounded;
mod bs;
pub mod certificate;
mod grigorchuk;
pub mod rewrite;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use bounded::{bounded_depth_oracle, BoundedDepthOracle};
pub use bs::{bs_oracle, BsOracle};
pub use certificate::{Certificate, Factor};
pub use grigorchuk::{grigorchuk_oracle, GrigorchukOracle};
pub use rewrite::{SearchBudget, SearchStats};

use crate::endo::{Endomorphism, RelatorSet};
use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Trivial,
    Nontrivial,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Trivial => "Trivial",
            Verdict::Nontrivial => "Nontrivial",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub value: Verdict,
    pub evidence: Option<String>,
    /// Present when a Trivial answer comes with a product of conjugates.
    pub certificate: Option<Certificate>,
}

impl OracleVerdict {
    pub fn trivial(evidence: impl Into<String>) -> Self {
        OracleVerdict { value: Verdict::Trivial, evidence: Some(evidence.into()), certificate: None }
    }

    pub fn nontrivial(evidence: impl Into<String>) -> Self {
        OracleVerdict { value: Verdict::Nontrivial, evidence: Some(evidence.into()), certificate: None }
    }

    pub fn unknown(evidence: impl Into<String>) -> Self {
        OracleVerdict { value: Verdict::Unknown, evidence: Some(evidence.into()), certificate: None }
    }

    pub fn with_certificate(mut self, c: Certificate) -> Self {
        self.certificate = Some(c);
        self
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capability {
    pub exact: bool,
    pub semi: bool,
}

impl Capability {
    pub const EXACT: Capability = Capability { exact: true, semi: true };
    pub const SEMI: Capability = Capability { exact: false, semi: true };
}

pub trait BaseOracle: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn alphabet(&self) -> &Alphabet;
    fn capability(&self) -> Capability;
    /// Relators that certificates produced by this oracle are built from.
    fn certificate_relators(&self) -> Vec<Word> {
        Vec::new()
    }
    /// Decides `w = 1`. The word must be over [`BaseOracle::alphabet`].
    fn is_identity(&self, w: &Word) -> OracleVerdict;

    /// [`BaseOracle::is_identity`] after an alphabet check.
    fn check(&self, w: &Word) -> Result<OracleVerdict> {
        self.alphabet().check(w, None)?;
        Ok(self.is_identity(w))
    }
}

/// Exact oracle for a free group.
#[derive(Clone, Debug)]
pub struct FreeOracle {
    alphabet: Alphabet,
}

pub fn free_oracle(alphabet: &Alphabet) -> FreeOracle {
    FreeOracle { alphabet: alphabet.clone() }
}

impl BaseOracle for FreeOracle {
    fn name(&self) -> String {
        "free".into()
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn capability(&self) -> Capability {
        Capability::EXACT
    }

    fn is_identity(&self, w: &Word) -> OracleVerdict {
        if w.is_empty() {
            OracleVerdict::trivial("freely reduces to the empty word")
        } else {
            OracleVerdict::nontrivial(format!("freely reduced form `{w}` is nonempty"))
        }
    }
}

/// Oracle selector as written in presentations and on the command line.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum OracleSpec {
    Free,
    Bs { m: u32, n: u32 },
    Grigorchuk,
    Bounded { k: usize },
}

impl FromStr for OracleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<OracleSpec> {
        let s = s.trim();
        let bad = || Error::IllFormed(format!("unknown base oracle `{s}` (expected free, bs:m,n, grigorchuk or bounded:k)"));
        match s {
            "free" => return Ok(OracleSpec::Free),
            "grigorchuk" => return Ok(OracleSpec::Grigorchuk),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("bs:") {
            let (m, n) = rest.split_once(',').ok_or_else(bad)?;
            let m: u32 = m.trim().parse().map_err(|_| bad())?;
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            if m == 0 || n == 0 {
                return Err(Error::IllFormed("bs:m,n needs m, n >= 1".into()));
            }
            return Ok(OracleSpec::Bs { m, n });
        }
        if let Some(rest) = s.strip_prefix("bounded:") {
            let k = rest.trim().parse().map_err(|_| bad())?;
            return Ok(OracleSpec::Bounded { k });
        }
        Err(bad())
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleSpec::Free => f.write_str("free"),
            OracleSpec::Bs { m, n } => write!(f, "bs:{m},{n}"),
            OracleSpec::Grigorchuk => f.write_str("grigorchuk"),
            OracleSpec::Bounded { k } => write!(f, "bounded:{k}"),
        }
    }
}

impl OracleSpec {
    /// Instantiates the oracle for a base alphabet, relator set and endomorphism.
    /// Fixed-presentation oracles check that the alphabet matches.
    pub fn instantiate(
        &self,
        alphabet: &Alphabet,
        relators: &RelatorSet,
        phi: &Endomorphism,
        budget: SearchBudget,
    ) -> Result<Arc<dyn BaseOracle>> {
        let need = |letters: &str| -> Result<()> {
            let want = Alphabet::from_letters(letters)?;
            if alphabet != &want {
                return Err(Error::IllFormed(format!("oracle `{self}` needs generators {want}, got {alphabet}")));
            }
            Ok(())
        };
        Ok(match *self {
            OracleSpec::Free => Arc::new(free_oracle(alphabet)),
            OracleSpec::Bs { m, n } => {
                need("ab")?;
                Arc::new(bs_oracle(m, n))
            }
            OracleSpec::Grigorchuk => {
                need("acd")?;
                Arc::new(grigorchuk_oracle())
            }
            OracleSpec::Bounded { k } => Arc::new(bounded_depth_oracle(relators, phi, k, budget)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_examples() {
        let o = free_oracle(&Alphabet::from_letters("ab").unwrap());
        assert_eq!(o.check(&Word::parse("aA").unwrap()).unwrap().value, Verdict::Trivial);
        assert_eq!(o.check(&Word::parse("a").unwrap()).unwrap().value, Verdict::Nontrivial);
        assert_eq!(o.check(&Word::parse("abAB").unwrap()).unwrap().value, Verdict::Nontrivial);
        assert!(o.check(&Word::parse("t").unwrap()).is_err());
    }

    #[test]
    fn spec_names_round_trip() {
        for s in ["free", "bs:2,3", "grigorchuk", "bounded:4"] {
            assert_eq!(s.parse::<OracleSpec>().unwrap().to_string(), s);
        }
        for s in ["bs:0,3", "bs:2", "bounded:x", "other"] {
            assert!(s.parse::<OracleSpec>().is_err(), "{s}");
        }
    }
}
