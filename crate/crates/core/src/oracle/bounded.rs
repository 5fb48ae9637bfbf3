//! Semi-decision for `w = 1` in `F / N∞(R, φ)`: look for `φᵏ(w)` in the normal
//! closure of the iterates `φⁱ(R)`, `i ≤ i_max`.

use super::rewrite::{RelatorSearch, SearchBudget};
use super::{BaseOracle, Capability, OracleVerdict};
use crate::endo::{iterate_relators_ordered, Endomorphism, RelatorSet};
use crate::word::{Alphabet, Word};

#[derive(Clone, Debug)]
pub struct BoundedDepthOracle {
    phi: Endomorphism,
    k: usize,
    budget: SearchBudget,
    search: RelatorSearch,
}

pub fn bounded_depth_oracle(relators: &RelatorSet, phi: &Endomorphism, k: usize, budget: SearchBudget) -> BoundedDepthOracle {
    let iterates = iterate_relators_ordered(relators, phi, budget.i_max);
    BoundedDepthOracle { phi: phi.clone(), k, budget, search: RelatorSearch::new(iterates) }
}

impl BoundedDepthOracle {
    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }

    pub fn depth(&self) -> usize {
        self.k
    }

    /// The word the certificate multiplies out to.
    pub fn target(&self, w: &Word) -> Word {
        self.phi.image_k(w, self.k)
    }
}

impl BaseOracle for BoundedDepthOracle {
    fn name(&self) -> String {
        format!("bounded:{}", self.k)
    }

    fn alphabet(&self) -> &Alphabet {
        self.phi.alphabet()
    }

    fn capability(&self) -> Capability {
        Capability::SEMI
    }

    fn certificate_relators(&self) -> Vec<Word> {
        self.search.relators().to_vec()
    }

    fn is_identity(&self, w: &Word) -> OracleVerdict {
        let target = self.target(w);
        match self.search.certify(&target, &self.budget) {
            Ok(cert) => OracleVerdict::trivial(format!(
                "phi^{}(w) = `{target}` is a product of {} conjugates of relator iterates",
                self.k,
                cert.len()
            ))
            .with_certificate(cert),
            Err(stats) => OracleVerdict::unknown(stats.to_string()),
        }
    }
}
