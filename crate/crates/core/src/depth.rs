//! The kernel chain `Nᵢ = φ⁻ⁱ(N₀)`: depth witnesses, chain-relation probes and scans.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::endo::{iterate_relators_ordered, Endomorphism, RelatorSet};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hnn::{HnnPresentation, OracleScope};
use crate::oracle::{bounded_depth_oracle, BaseOracle, OracleSpec, OracleVerdict, SearchBudget, Verdict};
use crate::word::{Alphabet, Word};

/// A root presentation `A₀ = ⟨𝒜 | ℛ⟩` with an exact oracle for it, together with
/// `φ`. Construction checks once that `φ` maps every relator to a trivial word.
#[derive(Clone, Debug)]
pub struct DepthSetting {
    relators: RelatorSet,
    phi: Endomorphism,
    oracle: Arc<dyn BaseOracle>,
    depth_bound: Option<usize>,
}

impl DepthSetting {
    pub fn new(relators: RelatorSet, phi: Endomorphism, oracle: Arc<dyn BaseOracle>) -> Result<DepthSetting> {
        if !oracle.capability().exact {
            return Err(Error::UnsupportedPresentation(format!(
                "depth witnesses need an exact oracle for the root group, `{}` is not exact",
                oracle.name()
            )));
        }
        if oracle.alphabet() != phi.alphabet() {
            return Err(Error::IllFormed("oracle and endomorphism use different alphabets".into()));
        }
        for r in relators.words() {
            let img = phi.image(r);
            match oracle.is_identity(&img).value {
                Verdict::Trivial => {}
                Verdict::Nontrivial => {
                    return Err(Error::PresentationIncompatible(format!(
                        "commuting square fails: phi(`{r}`) = `{img}` is nontrivial"
                    )))
                }
                Verdict::Unknown => unreachable!("exact oracle"),
            }
        }
        Ok(DepthSetting { relators, phi, oracle, depth_bound: None })
    }

    /// The root setting of a presentation whose oracle decides `⟨𝒜 | ℛ⟩`.
    pub fn from_presentation(p: &HnnPresentation) -> Result<DepthSetting> {
        let decides_root = p.scope() == OracleScope::RootClosure || p.oracle_spec() == OracleSpec::Free;
        if !decides_root {
            return Err(Error::UnsupportedPresentation(format!(
                "oracle `{}` does not decide the root group ⟨generators | relators⟩",
                p.oracle_spec()
            )));
        }
        let mut s = DepthSetting::new(p.relators().clone(), p.phi().clone(), p.oracle().clone())?;
        s.depth_bound = p.depth_bound();
        Ok(s)
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.phi.alphabet()
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn relators(&self) -> &RelatorSet {
        &self.relators
    }

    pub fn oracle(&self) -> &Arc<dyn BaseOracle> {
        &self.oracle
    }
}

/// `w ∈ Nₙ \ Nₙ₋₁`, with the two oracle verdicts that show it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthWitness {
    pub word: Word,
    pub n: usize,
    /// Verdict on `φⁿ⁻¹(w)`: Nontrivial.
    pub nontrivial_leg: OracleVerdict,
    /// Verdict on `φⁿ(w)`: Trivial, with a certificate when the oracle produces one.
    pub trivial_leg: OracleVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessCheck {
    Accepted(DepthWitness),
    Rejected(String),
    Indeterminate(String),
}

impl WitnessCheck {
    pub fn accepted(&self) -> Option<&DepthWitness> {
        match self {
            WitnessCheck::Accepted(w) => Some(w),
            _ => None,
        }
    }
}

pub fn depth_witness_check(w: &Word, n: usize, setting: &DepthSetting) -> Result<WitnessCheck> {
    if n == 0 {
        return Err(Error::Contract("witness level must be at least 1".into()));
    }
    setting.alphabet().check(w, None)?;
    let lower = setting.phi.image_k(w, n - 1);
    let upper = setting.phi.image(&lower);
    let nontrivial_leg = setting.oracle.is_identity(&lower);
    match nontrivial_leg.value {
        Verdict::Trivial => return Ok(WitnessCheck::Rejected(format!("phi^{}(w) is already trivial", n - 1))),
        Verdict::Unknown => return Ok(WitnessCheck::Indeterminate(format!("phi^{}(w) undecided", n - 1))),
        Verdict::Nontrivial => {}
    }
    let trivial_leg = setting.oracle.is_identity(&upper);
    match trivial_leg.value {
        Verdict::Nontrivial => return Ok(WitnessCheck::Rejected(format!("phi^{n}(w) is nontrivial"))),
        Verdict::Unknown => return Ok(WitnessCheck::Indeterminate(format!("phi^{n}(w) undecided"))),
        Verdict::Trivial => {}
    }
    if let Some(cert) = &trivial_leg.certificate {
        cert.verify(&upper, &setting.oracle.certificate_relators())?;
    }
    Ok(WitnessCheck::Accepted(DepthWitness { word: w.clone(), n, nontrivial_leg, trivial_leg }))
}

/// Re-checks a stored witness from scratch, including its certificate.
pub fn verify_witness(wit: &DepthWitness, setting: &DepthSetting) -> Result<()> {
    match depth_witness_check(&wit.word, wit.n, setting)? {
        WitnessCheck::Accepted(_) => {}
        other => return Err(Error::Verification(format!("witness `{}` at level {} fails: {other:?}", wit.word, wit.n))),
    }
    if let Some(cert) = &wit.trivial_leg.certificate {
        cert.verify(&setting.phi.image_k(&wit.word, wit.n), &setting.oracle.certificate_relators())?;
    }
    Ok(())
}

/// Every word of length at most `len_max` that is a depth witness at some level
/// `n ≤ n_max`, in (length, lexicographic) order.
pub fn depth_scan(setting: &DepthSetting, len_max: usize, n_max: usize, exec: Execution) -> Result<Vec<DepthWitness>> {
    let words: Vec<Word> = setting.alphabet().reduced_words_up_to(len_max).into_iter().filter(|w| !w.is_empty()).collect();
    let found: Vec<Result<Option<DepthWitness>>> = exec.map(&words, |w| {
        let mut lower = w.clone();
        for n in 1..=n_max {
            if setting.oracle.is_identity(&lower).value == Verdict::Trivial {
                return Ok(None);
            }
            let upper = setting.phi.image(&lower);
            if setting.oracle.is_identity(&upper).value == Verdict::Trivial {
                return Ok(depth_witness_check(w, n, setting)?.accepted().cloned());
            }
            lower = upper;
        }
        Ok(None)
    });
    let mut out = Vec::new();
    for r in found {
        if let Some(wit) = r? {
            if let Some(b) = setting.depth_bound {
                if wit.n > b {
                    return Err(Error::Verification(format!(
                        "witness `{}` at level {} contradicts the declared depth bound {b}; the oracle is inconsistent",
                        wit.word, wit.n
                    )));
                }
            }
            out.push(wit);
        }
    }
    Ok(out)
}

/// Parameters for [`chain_inclusion_probe`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub samples: usize,
    pub seed: u64,
    pub max_factors: usize,
    pub max_conjugator: usize,
    /// Iterates `φʲ(r)` with `j ≤ max_iterate` are used in the constructed members.
    pub max_iterate: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { samples: 50, seed: 0x5eed, max_factors: 3, max_conjugator: 3, max_iterate: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeOutcome {
    Confirmed { factors: usize },
    Unknown(String),
    Refuted(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub word: Word,
    pub image: Word,
    pub outcome: ProbeOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub samples: Vec<ProbeSample>,
    pub confirmed: usize,
    pub unknown: usize,
    pub refuted: usize,
}

impl ProbeReport {
    pub fn unknown_rate(&self) -> f64 {
        if self.samples.is_empty() {
            0.0
        } else {
            self.unknown as f64 / self.samples.len() as f64
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize) -> Word {
    let letters = alphabet.letters();
    let len = rng.gen_range(0..=max_len);
    Word::reduce((0..len).map(|_| *letters.choose(rng).expect("nonempty alphabet")))
}

/// Builds products of conjugates of relator iterates (members of `N₀` by
/// construction) and checks that `φ` of each is certified back into `N₀`.
pub fn chain_inclusion_probe(p: &HnnPresentation, config: &ProbeConfig, budget: SearchBudget, exec: Execution) -> ProbeReport {
    if p.relators().is_empty() {
        return ProbeReport::default();
    }
    let pool = iterate_relators_ordered(p.relators(), p.phi(), config.max_iterate);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let words: Vec<Word> = (0..config.samples)
        .map(|_| {
            let factors = rng.gen_range(1..=config.max_factors.max(1));
            let mut w = Word::empty();
            for _ in 0..factors {
                let r = pool.choose(&mut rng).expect("nonempty pool");
                let r = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() };
                let u = random_word(&mut rng, p.alphabet(), config.max_conjugator);
                w = w.mul(&r.conjugate_by(&u));
            }
            w
        })
        .collect();
    let searcher = bounded_depth_oracle(p.relators(), p.phi(), 1, budget);
    let exact_root = DepthSetting::from_presentation(p).ok();
    let samples: Vec<ProbeSample> = exec.map(&words, |w| {
        let image = p.phi().image(w);
        let outcome = if image.is_empty() {
            ProbeOutcome::Confirmed { factors: 0 }
        } else {
            let v = searcher.is_identity(w);
            match v.value {
                Verdict::Trivial => {
                    let cert = v.certificate.expect("search verdicts carry certificates");
                    match cert.verify(&image, &searcher.certificate_relators()) {
                        Ok(()) => ProbeOutcome::Confirmed { factors: cert.len() },
                        Err(e) => ProbeOutcome::Refuted(format!("certificate does not re-check: {e}")),
                    }
                }
                _ => match &exact_root {
                    Some(root) if root.oracle.is_identity(&image).value == Verdict::Nontrivial => {
                        ProbeOutcome::Refuted(format!("phi(w) = `{image}` is nontrivial in the root group"))
                    }
                    _ => ProbeOutcome::Unknown(v.evidence.unwrap_or_default()),
                },
            }
        };
        ProbeSample { word: w.clone(), image, outcome }
    });
    let mut report = ProbeReport { samples, ..ProbeReport::default() };
    for s in &report.samples {
        match s.outcome {
            ProbeOutcome::Confirmed { .. } => report.confirmed += 1,
            ProbeOutcome::Unknown(_) => report.unknown += 1,
            ProbeOutcome::Refuted(_) => report.refuted += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::bs_oracle;

    pub(crate) fn bs_setting() -> DepthSetting {
        let ab = Alphabet::from_letters("ab").unwrap();
        let r = RelatorSet::parse(&ab, &["BaabAAA"]).unwrap();
        let phi = Endomorphism::from_pairs(&ab, [('a', "aa"), ('b', "b")]).unwrap();
        DepthSetting::new(r, phi, Arc::new(bs_oracle(2, 3))).unwrap()
    }

    fn witness(n: usize) -> Word {
        let b = Word::power('b', n as i64);
        Word::commutator(&Word::power('a', 1).conjugate_by(&b.inverse()), &Word::power('a', 1))
    }

    #[test]
    fn listed_witnesses() {
        let s = bs_setting();
        assert_eq!(witness(1).to_string(), "BabaBAbA");
        for n in 1..=2 {
            assert!(depth_witness_check(&witness(n), n, &s).unwrap().accepted().is_some(), "n = {n}");
        }
        let rel = Word::parse("BaabAAA").unwrap();
        assert!(matches!(depth_witness_check(&rel, 1, &s).unwrap(), WitnessCheck::Rejected(_)));
    }

    #[test]
    fn commuting_square_is_checked() {
        let ab = Alphabet::from_letters("ab").unwrap();
        let r = RelatorSet::parse(&ab, &["BaabAAA"]).unwrap();
        let phi = Endomorphism::from_pairs(&ab, [('a', "b"), ('b', "a")]).unwrap();
        assert!(matches!(DepthSetting::new(r, phi, Arc::new(bs_oracle(2, 3))), Err(Error::PresentationIncompatible(_))));
    }

    #[test]
    fn scan_finds_the_commutator() {
        let s = bs_setting();
        assert!(depth_scan(&s, 0, 3, Execution::Sequential).unwrap().is_empty());
        let found = depth_scan(&s, 8, 1, Execution::Parallel).unwrap();
        assert!(found.iter().any(|w| w.word == witness(1)));
        assert!(found.iter().all(|w| w.n == 1));
    }
}
