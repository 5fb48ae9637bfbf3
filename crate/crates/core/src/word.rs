//! Free-group words over single-character generators.
//!
//! A generator is an ASCII lowercase letter; its inverse is written with the
//! corresponding uppercase letter, so `"BabaBAbA"` is b⁻¹ab·a·b⁻¹a⁻¹b·a⁻¹.
//! Every [`Word`] is kept freely reduced.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A signed generator, stored as its ASCII spelling.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: char, inverse: bool) -> Letter {
        assert!(generator.is_ascii_lowercase(), "generator must be a lowercase ASCII letter");
        let b = generator as u8;
        Letter(if inverse { b.to_ascii_uppercase() } else { b })
    }

    pub fn from_char(c: char) -> Option<Letter> {
        c.is_ascii_alphabetic().then_some(Letter(c as u8))
    }

    #[inline]
    pub fn generator(self) -> char {
        self.0.to_ascii_lowercase() as char
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0.is_ascii_uppercase()
    }

    #[inline]
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 0x20)
    }

    #[inline]
    pub fn as_char(self) -> char {
        self.0 as char
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Ordered set of base generators. The stable letter is kept out of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    generators: Vec<char>,
}

impl Alphabet {
    pub fn new(generators: impl IntoIterator<Item = char>) -> Result<Alphabet> {
        let generators: Vec<char> = generators.into_iter().collect();
        if generators.is_empty() {
            return Err(Error::IllFormed("alphabet must be nonempty".into()));
        }
        for (i, &g) in generators.iter().enumerate() {
            if !g.is_ascii_lowercase() {
                return Err(Error::IllFormed(format!("generator `{g}` is not a lowercase letter")));
            }
            if generators[..i].contains(&g) {
                return Err(Error::IllFormed(format!("duplicate generator `{g}`")));
            }
        }
        Ok(Alphabet { generators })
    }

    /// Parses a compact spelling such as `"abc"`.
    pub fn from_letters(s: &str) -> Result<Alphabet> {
        Alphabet::new(s.chars())
    }

    pub fn generators(&self) -> &[char] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, g: char) -> bool {
        self.generators.contains(&g)
    }

    pub fn index_of(&self, g: char) -> Option<usize> {
        self.generators.iter().position(|&x| x == g)
    }

    /// All signed letters in enumeration order: a, A, b, B, ...
    pub fn letters(&self) -> Vec<Letter> {
        self.generators
            .iter()
            .flat_map(|&g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    /// Same alphabet with one more generator appended.
    pub fn with(&self, g: char) -> Result<Alphabet> {
        let mut gens = self.generators.clone();
        gens.push(g);
        Alphabet::new(gens)
    }

    /// Checks that every letter of `w` comes from this alphabet, or is `extra`.
    pub fn check(&self, w: &Word, extra: Option<char>) -> Result<()> {
        for l in w.letters() {
            let g = l.generator();
            if !self.contains(g) && Some(g) != extra {
                return Err(Error::UnknownGenerator(g));
            }
        }
        Ok(())
    }

    /// Every freely reduced word of length exactly `len`, in (a < A < b < B ...) lexicographic order.
    pub fn reduced_words_of_length(&self, len: usize) -> Vec<Word> {
        let letters = self.letters();
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * letters.len());
            for w in &out {
                for &l in &letters {
                    if w.last() != Some(l.inverse()) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Every freely reduced word of length at most `max_len`, ordered by (length, lexicographic).
    pub fn reduced_words_up_to(&self, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|n| self.reduced_words_of_length(n)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// `g^e` for a single generator.
    pub fn power(g: char, e: i64) -> Word {
        let l = Letter::new(g, e < 0);
        Word(vec![l; e.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        let mut skip = 0;
        while skip < other.0.len() && out.last() == Some(&other.0[skip].inverse()) {
            out.pop();
            skip += 1;
        }
        out.extend_from_slice(&other.0[skip..]);
        Word(out)
    }

    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Commutator `u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.mul(self).mul(&u.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() < 2 || f != l.inverse(),
            _ => true,
        }
    }

    pub fn cyclic_reduce(&self) -> Word {
        let mut lo = 0;
        let mut hi = self.0.len();
        while hi - lo >= 2 && self.0[lo] == self.0[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word(self.0[lo..hi].to_vec())
    }

    /// Rotation moving the first `k` letters to the back.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.len();
        if n == 0 {
            return Word::empty();
        }
        let k = k % n;
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word::reduce(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: char) -> i64 {
        self.0.iter().filter(|l| l.generator() == g).map(|l| l.sign()).sum()
    }

    pub fn contains_generator(&self, g: char) -> bool {
        self.0.iter().any(|l| l.generator() == g)
    }

    /// Parses the plain syntax: letters only, uppercase for inverses.
    pub fn parse(s: &str) -> Result<Word> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match Letter::from_char(c) {
                Some(l) => letters.push(l),
                None => return Err(Error::IllFormed(format!("invalid token `{c}` in word `{s}`"))),
            }
        }
        Ok(Word::reduce(letters))
    }

    /// Parses the plain syntax and checks every generator against `alphabet`
    /// (the stable letter `stable`, when given, is also accepted).
    pub fn parse_in(s: &str, alphabet: &Alphabet, stable: Option<char>) -> Result<Word> {
        let w = Word::parse(s)?;
        alphabet.check(&w, stable)?;
        Ok(w)
    }

    /// Parses an expression: letters, whitespace, `x^n` powers, `( ... )` grouping and
    /// commutators `[u, v]` = u v u⁻¹ v⁻¹. The plain syntax is a subset.
    pub fn parse_expr(s: &str) -> Result<Word> {
        let mut p = ExprParser { src: s, chars: s.char_indices().peekable() };
        let w = p.product(None)?;
        if let Some((_, c)) = p.chars.next() {
            return Err(Error::IllFormed(format!("unexpected `{c}` in `{s}`")));
        }
        Ok(w)
    }
}

struct ExprParser<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::IllFormed(format!("{what} in expression `{}`", self.src))
    }

    fn product(&mut self, stop: Option<&[char]>) -> Result<Word> {
        let mut acc = Word::empty();
        loop {
            self.skip_ws();
            match self.chars.peek() {
                None => return Ok(acc),
                Some(&(_, c)) if stop.is_some_and(|s| s.contains(&c)) => return Ok(acc),
                Some(_) => {
                    let atom = self.atom()?;
                    let atom = self.power(atom)?;
                    acc = acc.mul(&atom);
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Word> {
        let (_, c) = self.chars.next().ok_or_else(|| self.err("unexpected end"))?;
        match c {
            '(' => {
                let w = self.product(Some(&[')']))?;
                self.expect(')')?;
                Ok(w)
            }
            '[' => {
                let u = self.product(Some(&[',']))?;
                self.expect(',')?;
                let v = self.product(Some(&[']']))?;
                self.expect(']')?;
                Ok(Word::commutator(&u, &v))
            }
            c if c.is_ascii_alphabetic() => Ok(Word::letter(Letter(c as u8))),
            c => Err(self.err(&format!("invalid token `{c}`"))),
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.chars.next() {
            Some((_, c)) if c == want => Ok(()),
            _ => Err(self.err(&format!("expected `{want}`"))),
        }
    }

    fn power(&mut self, base: Word) -> Result<Word> {
        self.skip_ws();
        if !matches!(self.chars.peek(), Some((_, '^'))) {
            return Ok(base);
        }
        self.chars.next();
        self.skip_ws();
        let mut digits = String::new();
        if matches!(self.chars.peek(), Some((_, '-' | '+'))) {
            digits.push(self.chars.next().unwrap().1);
        }
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        let e: i64 = digits.parse().map_err(|_| self.err("bad exponent"))?;
        Ok(base.pow(e))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}
