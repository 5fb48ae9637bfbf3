//! Ascending HNN extensions `⟨t, 𝒜 | ℛ, t⁻¹at = φ(a)⟩`.

mod canonical;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use canonical::{canonical_form, envelope, equal_in_G, in_coset_tNA, level, CanonicalForm, Envelope, Truth};

use crate::endo::{Endomorphism, RelatorSet};
use crate::error::{Error, Result};
use crate::oracle::{BaseOracle, OracleSpec, OracleVerdict, SearchBudget, Verdict};
use crate::stallings::ImageGraph;
use crate::word::{Alphabet, Letter, Word};

/// The JSON form of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub generators: Vec<String>,
    pub stable: String,
    #[serde(default)]
    pub relators: Vec<String>,
    pub phi: BTreeMap<String, String>,
    pub base_oracle: String,
    #[serde(default)]
    pub depth_bound: Option<usize>,
    /// Optional right inverse `ψ` of `φ` on the base group (`φ(ψ(x)) = x` in `A`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_section: Option<BTreeMap<String, String>>,
}

/// What the bound oracle's Trivial answers mean for the base group `A`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleScope {
    /// The oracle decides the word problem of `A` itself.
    BaseGroup,
    /// The oracle decides `⟨𝒜 | ℛ⟩`; `w = 1` in `A` iff `φᵏ(w)` is trivial there for some `k`.
    RootClosure,
}

/// How the pinch question `w ∈ φ(A)` is answered.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PinchCapability {
    /// Free base with injective `φ`: Stallings membership decides it.
    Exact,
    /// A verified section of `φ` exists, so every base element is a `φ`-image.
    Surjective,
    /// Literal membership in `φ(F)` is sound; a negative answer is undecided.
    Partial,
}

#[derive(Clone)]
pub struct HnnPresentation {
    alphabet: Alphabet,
    stable: char,
    relators: RelatorSet,
    phi: Endomorphism,
    oracle_spec: OracleSpec,
    oracle: Arc<dyn BaseOracle>,
    scope: OracleScope,
    depth_bound: Option<usize>,
    section: Option<Endomorphism>,
    image: Arc<ImageGraph>,
    budget: SearchBudget,
}

impl fmt::Debug for HnnPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HnnPresentation")
            .field("generators", &self.alphabet.to_string())
            .field("stable", &self.stable)
            .field("relators", &self.relators.words())
            .field("phi", &self.phi)
            .field("base_oracle", &self.oracle_spec.to_string())
            .field("depth_bound", &self.depth_bound)
            .finish()
    }
}

fn single_char(s: &str, what: &str) -> Result<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) if c.is_ascii_lowercase() => Ok(c),
        _ => Err(Error::IllFormed(format!("{what} must be a single lowercase letter, got `{s}`"))),
    }
}

fn parse_table(alphabet: &Alphabet, table: &BTreeMap<String, String>, what: &str) -> Result<Endomorphism> {
    let mut pairs = Vec::new();
    for (k, v) in table {
        let g = single_char(k, &format!("{what} key"))?;
        if !alphabet.contains(g) {
            return Err(Error::IllFormed(format!("{what} maps `{g}`, which is not a generator")));
        }
        pairs.push((g, v.as_str()));
    }
    Endomorphism::from_pairs(alphabet, pairs).map_err(|e| match e {
        Error::UnknownGenerator(c) => Error::IllFormed(format!("{what} image uses `{c}`, which is not a generator")),
        e => e,
    })
}

impl HnnPresentation {
    /// Validates and builds a presentation. All consistency checks happen here,
    /// before any computation is done with it.
    pub fn new(
        alphabet: Alphabet,
        stable: char,
        relators: RelatorSet,
        phi: Endomorphism,
        oracle_spec: OracleSpec,
        depth_bound: Option<usize>,
    ) -> Result<HnnPresentation> {
        if alphabet.contains(stable) {
            return Err(Error::IllFormed(format!("stable letter `{stable}` is also a base generator")));
        }
        if phi.alphabet() != &alphabet {
            return Err(Error::IllFormed("endomorphism is defined over a different alphabet".into()));
        }
        for r in relators.words() {
            alphabet.check(r, None)?;
        }
        let budget = SearchBudget::default();
        let oracle = oracle_spec.instantiate(&alphabet, &relators, &phi, budget)?;
        let scope = match oracle_spec {
            OracleSpec::Bs { .. } => OracleScope::RootClosure,
            _ => OracleScope::BaseGroup,
        };
        let image = Arc::new(ImageGraph::new(&phi));
        let p = HnnPresentation {
            alphabet,
            stable,
            relators,
            phi,
            oracle_spec,
            oracle,
            scope,
            depth_bound,
            section: None,
            image,
            budget,
        };
        p.check_oracle_compatibility()?;
        Ok(p)
    }

    fn check_oracle_compatibility(&self) -> Result<()> {
        match self.oracle_spec {
            OracleSpec::Free => {
                if !self.relators.is_empty() {
                    return Err(Error::PresentationIncompatible(
                        "the free oracle needs an empty relator set; use bounded:k or an exact oracle for the group".into(),
                    ));
                }
                if self.image.graph().rank() != self.alphabet.len() {
                    return Err(Error::PresentationIncompatible(format!(
                        "phi is not injective on the free group (image rank {} < {}); monomorphize it first",
                        self.image.graph().rank(),
                        self.alphabet.len()
                    )));
                }
            }
            OracleSpec::Bs { .. } => {
                let r = self.oracle.certificate_relators().remove(0);
                let present = self
                    .relators
                    .words()
                    .iter()
                    .any(|x| (0..x.len()).any(|k| x.rotate(k) == r || x.rotate(k) == r.inverse()));
                if !present {
                    return Err(Error::PresentationIncompatible(format!("relators must include the defining relator `{r}`")));
                }
                self.check_relators_and_descent(&[])?;
            }
            OracleSpec::Grigorchuk => {
                let roots: Vec<Word> =
                    ["aa", "cc", "dd", "(ad)^4", "(adacac)^4"].iter().map(|s| Word::parse_expr(s).unwrap()).collect();
                self.check_relators_and_descent(&roots)?;
            }
            OracleSpec::Bounded { .. } => {}
        }
        Ok(())
    }

    /// Every relator is trivial in the oracle's group and `φ` maps relators (and
    /// `extra`, with two further `φ`-iterates) to trivial elements.
    fn check_relators_and_descent(&self, extra: &[Word]) -> Result<()> {
        for r in self.relators.words() {
            if self.oracle.is_identity(r).value != Verdict::Trivial {
                return Err(Error::PresentationIncompatible(format!("relator `{r}` is not trivial for `{}`", self.oracle_spec)));
            }
        }
        let mut probes: Vec<Word> = self.relators.words().to_vec();
        for e in extra {
            probes.extend((0..=2).map(|k| self.phi.image_k(e, k)));
        }
        for r in probes {
            let img = self.phi.image(&r);
            if self.oracle.is_identity(&img).value != Verdict::Trivial {
                return Err(Error::PresentationIncompatible(format!(
                    "phi does not descend to the base group: phi(`{r}`) = `{img}` is not trivial"
                )));
            }
        }
        Ok(())
    }

    /// Attaches a section `ψ` of `φ`, verified generator by generator through the oracle.
    pub fn with_section(mut self, psi: Endomorphism) -> Result<HnnPresentation> {
        if psi.alphabet() != &self.alphabet {
            return Err(Error::IllFormed("phi_section is defined over a different alphabet".into()));
        }
        for &g in self.alphabet.generators() {
            let x = Word::letter(Letter::new(g, false));
            let back = self.phi.image(&psi.image(&x)).mul(&x.inverse());
            if self.base_identity(&back).value != Verdict::Trivial {
                return Err(Error::PresentationIncompatible(format!(
                    "phi_section is not a section: phi(psi({g})) = `{}` is not `{g}`",
                    self.phi.image(&psi.image(&x))
                )));
            }
        }
        self.section = Some(psi);
        Ok(self)
    }

    /// Replaces the search budget (used by semi oracles and relator searches).
    pub fn with_budget(mut self, budget: SearchBudget) -> Result<HnnPresentation> {
        self.oracle = self.oracle_spec.instantiate(&self.alphabet, &self.relators, &self.phi, budget)?;
        self.budget = budget;
        Ok(self)
    }

    pub fn from_spec(spec: &PresentationSpec) -> Result<HnnPresentation> {
        let mut gens = Vec::new();
        for g in &spec.generators {
            gens.push(single_char(g, "generator")?);
        }
        let alphabet = Alphabet::new(gens)?;
        let stable = single_char(&spec.stable, "stable letter")?;
        if alphabet.contains(stable) {
            return Err(Error::IllFormed(format!("stable letter `{stable}` is also a base generator")));
        }
        let mut rels = Vec::new();
        for r in &spec.relators {
            let w = Word::parse_expr(r)?;
            if w.contains_generator(stable) {
                return Err(Error::IllFormed(format!("relator `{r}` contains the stable letter")));
            }
            alphabet.check(&w, None)?;
            rels.push(w);
        }
        let phi = parse_table(&alphabet, &spec.phi, "phi")?;
        let oracle: OracleSpec = spec.base_oracle.parse()?;
        let p = HnnPresentation::new(alphabet, stable, RelatorSet::new(rels), phi, oracle, spec.depth_bound)?;
        match &spec.phi_section {
            Some(t) => {
                let psi = parse_table(&p.alphabet, t, "phi_section")?;
                p.with_section(psi)
            }
            None => Ok(p),
        }
    }

    pub fn from_json(s: &str) -> Result<HnnPresentation> {
        let spec: PresentationSpec =
            serde_json::from_str(s).map_err(|e| Error::IllFormed(format!("presentation JSON: {e}")))?;
        HnnPresentation::from_spec(&spec)
    }

    pub fn to_spec(&self) -> PresentationSpec {
        let table = |e: &Endomorphism| {
            self.alphabet
                .generators()
                .iter()
                .zip(e.images())
                .map(|(g, w)| (g.to_string(), w.to_string()))
                .collect::<BTreeMap<_, _>>()
        };
        PresentationSpec {
            generators: self.alphabet.generators().iter().map(|g| g.to_string()).collect(),
            stable: self.stable.to_string(),
            relators: self.relators.words().iter().map(Word::to_string).collect(),
            phi: table(&self.phi),
            base_oracle: self.oracle_spec.to_string(),
            depth_bound: self.depth_bound,
            phi_section: self.section.as_ref().map(table),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("spec serializes")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Base generators followed by the stable letter.
    pub fn full_alphabet(&self) -> Alphabet {
        self.alphabet.with(self.stable).expect("stable letter is fresh")
    }

    pub fn stable(&self) -> char {
        self.stable
    }

    pub fn t(&self) -> Word {
        Word::letter(Letter::new(self.stable, false))
    }

    /// `tᵉ`.
    pub fn t_pow(&self, e: i64) -> Word {
        Word::power(self.stable, e)
    }

    pub fn relators(&self) -> &RelatorSet {
        &self.relators
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn section(&self) -> Option<&Endomorphism> {
        self.section.as_ref()
    }

    pub fn oracle(&self) -> &Arc<dyn BaseOracle> {
        &self.oracle
    }

    pub fn oracle_spec(&self) -> OracleSpec {
        self.oracle_spec
    }

    pub fn scope(&self) -> OracleScope {
        self.scope
    }

    pub fn depth_bound(&self) -> Option<usize> {
        self.depth_bound
    }

    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }

    pub fn image_graph(&self) -> &ImageGraph {
        &self.image
    }

    pub fn is_free(&self) -> bool {
        self.oracle_spec == OracleSpec::Free
    }

    pub fn pinch_capability(&self) -> PinchCapability {
        if self.is_free() {
            PinchCapability::Exact
        } else if self.section.is_some() {
            PinchCapability::Surjective
        } else {
            PinchCapability::Partial
        }
    }

    /// Parses a word over `𝒜 ∪ {t}` in expression syntax.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let w = Word::parse_expr(s)?;
        self.alphabet.check(&w, Some(self.stable))?;
        Ok(w)
    }

    /// Parses a word over `𝒜`.
    pub fn parse_base_word(&self, s: &str) -> Result<Word> {
        let w = Word::parse_expr(s)?;
        self.alphabet.check(&w, None)?;
        Ok(w)
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        self.alphabet.check(w, Some(self.stable))
    }

    /// Boundary `x·t·φ(x)⁻¹·t⁻¹` of the conjugation cell for generator `x`.
    pub fn conjugation_relator(&self, x: char) -> Word {
        let gx = Word::letter(Letter::new(x, false));
        let img = self.phi.image(&gx);
        gx.mul(&self.t()).mul(&img.inverse()).mul(&self.t().inverse())
    }

    /// The relators of the whole presentation: `ℛ` followed by the conjugation relators.
    pub fn all_relators(&self) -> Vec<Word> {
        let mut out = self.relators.words().to_vec();
        out.extend(self.alphabet.generators().iter().map(|&g| self.conjugation_relator(g)));
        out
    }

    /// Decides `w = 1` in the base group `A`, honouring the oracle's scope.
    pub fn base_identity(&self, w: &Word) -> OracleVerdict {
        if w.is_empty() {
            return OracleVerdict::trivial("empty word");
        }
        match (self.scope, self.depth_bound) {
            (OracleScope::BaseGroup, _) => self.oracle.is_identity(w),
            (OracleScope::RootClosure, Some(b)) => {
                let img = self.phi.image_k(w, b);
                let mut v = self.oracle.is_identity(&img);
                v.evidence = Some(format!("phi^{b}(w) tested under declared depth bound: {}", v.evidence.unwrap_or_default()));
                v
            }
            (OracleScope::RootClosure, None) => {
                for k in 0..=self.budget.i_max {
                    let img = self.phi.image_k(w, k);
                    let v = self.oracle.is_identity(&img);
                    if v.value == Verdict::Trivial {
                        let mut v = v;
                        v.evidence = Some(format!("phi^{k}(w) is trivial in the root group"));
                        return v;
                    }
                }
                OracleVerdict::unknown(format!(
                    "phi^k(w) nontrivial in the root group for k <= {} and no depth bound is declared",
                    self.budget.i_max
                ))
            }
        }
    }
}
