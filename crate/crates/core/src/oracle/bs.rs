//! Baumslag-Solitar groups `⟨a, b | b⁻¹aᵐb = aⁿ⟩` by Britton reduction over `b`.

use super::certificate::{Certificate, Factor};
use super::{BaseOracle, Capability, OracleVerdict};
use crate::word::{Alphabet, Letter, Word};

#[derive(Clone, Debug)]
pub struct BsOracle {
    m: i64,
    n: i64,
    alphabet: Alphabet,
    relator: Word,
}

pub fn bs_oracle(m: u32, n: u32) -> BsOracle {
    assert!(m >= 1 && n >= 1, "bs_oracle needs m, n >= 1");
    let (m, n) = (i64::from(m), i64::from(n));
    let relator = Word::power('b', -1).mul(&Word::power('a', m)).mul(&Word::power('b', 1)).mul(&Word::power('a', -n));
    BsOracle { m, n, alphabet: Alphabet::from_letters("ab").unwrap(), relator }
}

/// Result of full Britton reduction together with the factors peeled off.
#[derive(Clone, Debug)]
pub struct BrittonReduction {
    pub reduced: Word,
    pub certificate: Certificate,
    pub pinches: usize,
}

impl BsOracle {
    pub fn relator(&self) -> &Word {
        &self.relator
    }

    fn a_pow(&self, e: i64) -> Word {
        Word::power('a', e)
    }

    /// Finds the leftmost pinch: positions `(i, j)` of consecutive `b`-letters of
    /// opposite sign with `a^e` between them and `e` in the relevant subgroup.
    fn find_pinch(&self, w: &Word) -> Option<(usize, usize, i64)> {
        let ls = w.letters();
        let bs: Vec<usize> = (0..ls.len()).filter(|&i| ls[i].generator() == 'b').collect();
        for pair in bs.windows(2) {
            let (i, j) = (pair[0], pair[1]);
            if ls[i] != ls[j].inverse() {
                continue;
            }
            let e: i64 = ls[i + 1..j].iter().map(|l| l.sign()).sum();
            let modulus = if ls[i].is_inverse() { self.m } else { self.n };
            if e % modulus == 0 {
                return Some((i, j, e));
            }
        }
        None
    }

    /// Removes pinches until none is left. The word is trivial iff the result is empty.
    pub fn britton_reduce(&self, w: &Word) -> BrittonReduction {
        let r = &self.relator;
        let mut cur = w.clone();
        let mut factors = Vec::new();
        let mut pinches = 0;
        let b = Word::letter(Letter::new('b', false));
        while let Some((i, j, e)) = self.find_pinch(&cur) {
            let x = cur.prefix(i);
            let lower = cur.letters()[i].is_inverse();
            let (replacement, k) = if lower { (self.a_pow(self.n * e / self.m), e / self.m) } else { (self.a_pow(self.m * e / self.n), e / self.n) };
            let push = |factors: &mut Vec<Factor>, conj: Word, exponent: i8| {
                factors.push(Factor { conjugator: conj, relator: r.clone(), exponent });
            };
            match (lower, k > 0) {
                (true, true) => {
                    for jj in 0..k {
                        push(&mut factors, x.mul(&self.a_pow(self.n * jj)), 1);
                    }
                }
                (true, false) => {
                    let kk = -k;
                    for jj in (0..kk).rev() {
                        push(&mut factors, x.mul(&self.a_pow(self.n * (jj - kk))), -1);
                    }
                }
                (false, true) => {
                    for jj in (0..k).rev() {
                        push(&mut factors, x.mul(&b).mul(&self.a_pow(self.n * jj)), -1);
                    }
                }
                (false, false) => {
                    let kk = -k;
                    for jj in 0..kk {
                        push(&mut factors, x.mul(&b).mul(&self.a_pow(self.n * (jj - kk))), 1);
                    }
                }
            }
            cur = x.mul(&replacement).mul(&cur.slice(j + 1, cur.len()));
            pinches += 1;
        }
        BrittonReduction { reduced: cur, certificate: Certificate { factors }, pinches }
    }
}

impl BaseOracle for BsOracle {
    fn name(&self) -> String {
        format!("bs:{},{}", self.m, self.n)
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn capability(&self) -> Capability {
        Capability::EXACT
    }

    fn certificate_relators(&self) -> Vec<Word> {
        vec![self.relator.clone()]
    }

    fn is_identity(&self, w: &Word) -> OracleVerdict {
        let red = self.britton_reduce(w);
        if red.reduced.is_empty() {
            OracleVerdict::trivial(format!("Britton reduction removes {} pinches", red.pinches)).with_certificate(red.certificate)
        } else {
            OracleVerdict::nontrivial(format!("Britton-reduced form `{}` is nonempty", red.reduced))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Verdict;
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn bs23_examples() {
        let o = bs_oracle(2, 3);
        assert_eq!(o.is_identity(&w("BaabAAA")).value, Verdict::Trivial);
        assert_eq!(o.is_identity(&w("BabaBAbA")).value, Verdict::Nontrivial);
        assert_eq!(o.is_identity(&w("aA")).value, Verdict::Trivial);
    }

    #[test]
    fn certificates_cover_all_pinch_shapes() {
        let o = bs_oracle(2, 3);
        let cases = [
            "BaaaabAAAAAA",
            "BAAAAbaaaaaa",
            "baaaaaaBAAAA",
            "bAAAAAABaaaa",
            "abaaaBAAABaabAAA",
        ];
        for c in cases {
            let word = w(c);
            let v = o.is_identity(&word);
            assert_eq!(v.value, Verdict::Trivial, "{c}");
            v.certificate.unwrap().verify(&word, &[o.relator().clone()]).unwrap();
        }
    }

    #[test]
    fn other_parameters() {
        let o = bs_oracle(1, 2);
        assert_eq!(o.is_identity(&w("BabAA")).value, Verdict::Trivial);
        assert_eq!(o.is_identity(&w("BabA")).value, Verdict::Nontrivial);
    }
}
