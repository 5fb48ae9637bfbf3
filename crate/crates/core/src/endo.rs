//! Substitution endomorphisms of free groups and finite relator sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// A homomorphism `F(A) -> F(A)` given by the image of each generator.
///
/// Letters outside the alphabet (such as a stable letter) are fixed by
/// [`Endomorphism::image`]; use [`apply_endo`] for an alphabet-checked call.
#[derive(Clone, PartialEq, Eq)]
pub struct Endomorphism {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Endomorphism> {
        if images.len() != alphabet.len() {
            return Err(Error::IllFormed(format!(
                "endomorphism needs {} images, got {}",
                alphabet.len(),
                images.len()
            )));
        }
        for w in &images {
            alphabet.check(w, None)?;
        }
        Ok(Endomorphism { alphabet, images })
    }

    /// Builds from `(generator, image)` pairs; every generator must appear exactly once.
    pub fn from_pairs<'a>(alphabet: &Alphabet, pairs: impl IntoIterator<Item = (char, &'a str)>) -> Result<Endomorphism> {
        let mut images: Vec<Option<Word>> = vec![None; alphabet.len()];
        for (g, s) in pairs {
            let i = alphabet.index_of(g).ok_or(Error::UnknownGenerator(g))?;
            if images[i].is_some() {
                return Err(Error::IllFormed(format!("generator `{g}` has two images")));
            }
            images[i] = Some(Word::parse_in(s, alphabet, None)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| Error::IllFormed(format!("no image for `{}`", alphabet.generators()[i]))))
            .collect::<Result<Vec<_>>>()?;
        Endomorphism::new(alphabet.clone(), images)
    }

    pub fn identity(alphabet: &Alphabet) -> Endomorphism {
        let images = alphabet.generators().iter().map(|&g| Word::letter(Letter::new(g, false))).collect();
        Endomorphism { alphabet: alphabet.clone(), images }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image_of_generator(&self, g: char) -> Option<&Word> {
        self.alphabet.index_of(g).map(|i| &self.images[i])
    }

    fn push_letter_image(&self, out: &mut Word, l: Letter) {
        match self.alphabet.index_of(l.generator()) {
            Some(i) if l.is_inverse() => {
                for &x in self.images[i].letters().iter().rev() {
                    out.push(x.inverse());
                }
            }
            Some(i) => {
                for &x in self.images[i].letters() {
                    out.push(x);
                }
            }
            None => out.push(l),
        }
    }

    /// `φ(w)`, freely reduced.
    pub fn image(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for &l in w.letters() {
            self.push_letter_image(&mut out, l);
        }
        out
    }

    /// `φᵏ(w)`.
    pub fn image_k(&self, w: &Word, k: usize) -> Word {
        let mut cur = w.clone();
        for _ in 0..k {
            cur = self.image(&cur);
        }
        cur
    }

    pub fn longest_image(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        // (self ∘ other)(a) = self(other(a))
        let images = other.images.iter().map(|w| self.image(w)).collect();
        Endomorphism { alphabet: self.alphabet.clone(), images }
    }
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (g, w) in self.alphabet.generators().iter().zip(&self.images) {
            m.entry(g, &w.to_string());
        }
        m.finish()
    }
}

/// `φᵏ(w)` after checking `w` against the endomorphism's alphabet.
pub fn apply_endo(phi: &Endomorphism, w: &Word, k: usize) -> Result<Word> {
    phi.alphabet().check(w, None)?;
    Ok(phi.image_k(w, k))
}

/// Finite set of cyclically reduced, nonempty relators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelatorSet {
    relators: Vec<Word>,
}

impl RelatorSet {
    /// Cyclically reduces every relator, drops empty ones and duplicates (order preserved).
    pub fn new(words: impl IntoIterator<Item = Word>) -> RelatorSet {
        let mut relators: Vec<Word> = Vec::new();
        for w in words {
            let w = w.cyclic_reduce();
            if !w.is_empty() && !relators.contains(&w) {
                relators.push(w);
            }
        }
        RelatorSet { relators }
    }

    pub fn parse(alphabet: &Alphabet, words: &[&str]) -> Result<RelatorSet> {
        let ws = words.iter().map(|s| Word::parse_in(s, alphabet, None)).collect::<Result<Vec<_>>>()?;
        Ok(RelatorSet::new(ws))
    }

    pub fn words(&self) -> &[Word] {
        &self.relators
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }
}

/// `{φⁱ(r) : r ∈ R, 0 ≤ i ≤ k}`, cyclically reduced, without duplicates.
pub fn iterate_relators(relators: &RelatorSet, phi: &Endomorphism, k: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for r in relators.words() {
        let mut cur = r.clone();
        for i in 0..=k {
            if i > 0 {
                cur = phi.image(&cur);
            }
            let c = cur.cyclic_reduce();
            if !c.is_empty() {
                out.insert(c);
            }
        }
    }
    out
}

/// Same as [`iterate_relators`] but in (iteration, input order) sequence, which is
/// the order the relator searches try them in.
pub(crate) fn iterate_relators_ordered(relators: &RelatorSet, phi: &Endomorphism, k: usize) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut layer: Vec<Word> = relators.words().to_vec();
    for i in 0..=k {
        if i > 0 {
            layer = layer.iter().map(|r| phi.image(r)).collect();
        }
        for r in &layer {
            let c = r.cyclic_reduce();
            if !c.is_empty() && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}
