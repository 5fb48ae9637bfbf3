//! The first Grigorchuk group on generators `a, c, d`, via its action on the
//! rooted binary tree.
//!
//! `a` swaps the two subtrees and `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.
//! All generators are involutions, so an inverse letter is read as the letter
//! itself, and `b` only appears internally as `c·d`.

use super::{BaseOracle, Capability, OracleVerdict};
use crate::word::{Alphabet, Word};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Sym {
    A,
    B,
    C,
    D,
}

impl Sym {
    fn sections(self) -> (Option<Sym>, Option<Sym>) {
        match self {
            Sym::A => (None, None),
            Sym::B => (Some(Sym::A), Some(Sym::C)),
            Sym::C => (Some(Sym::A), Some(Sym::D)),
            Sym::D => (None, Some(Sym::B)),
        }
    }

    /// Product inside the Klein group `{1, b, c, d}`.
    fn klein(x: Sym, y: Sym) -> Option<Sym> {
        use Sym::*;
        match (x, y) {
            _ if x == y => None,
            (B, C) | (C, B) => Some(D),
            (B, D) | (D, B) => Some(C),
            (C, D) | (D, C) => Some(B),
            _ => unreachable!("klein product with a"),
        }
    }
}

fn push(out: &mut Vec<Sym>, s: Sym) {
    match out.last().copied() {
        Some(t) if t == s => {
            out.pop();
        }
        Some(t) if t != Sym::A && s != Sym::A => {
            out.pop();
            if let Some(p) = Sym::klein(t, s) {
                out.push(p);
            }
        }
        _ => out.push(s),
    }
}

fn reduce(syms: impl IntoIterator<Item = Sym>) -> Vec<Sym> {
    let mut out = Vec::new();
    for s in syms {
        push(&mut out, s);
    }
    out
}

fn is_trivial(w: &[Sym]) -> bool {
    let w = reduce(w.iter().copied());
    if w.is_empty() {
        return true;
    }
    if w.len() == 1 || w.iter().filter(|&&s| s == Sym::A).count() % 2 == 1 {
        return false;
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut swapped = false;
    for &s in &w {
        if s == Sym::A {
            swapped = !swapped;
            continue;
        }
        let (s0, s1) = s.sections();
        let (to_left, to_right) = if swapped { (s1, s0) } else { (s0, s1) };
        left.extend(to_left);
        right.extend(to_right);
    }
    is_trivial(&left) && is_trivial(&right)
}

#[derive(Clone, Debug)]
pub struct GrigorchukOracle {
    alphabet: Alphabet,
}

pub fn grigorchuk_oracle() -> GrigorchukOracle {
    GrigorchukOracle { alphabet: Alphabet::from_letters("acd").unwrap() }
}

impl BaseOracle for GrigorchukOracle {
    fn name(&self) -> String {
        "grigorchuk".into()
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn capability(&self) -> Capability {
        Capability::EXACT
    }

    fn is_identity(&self, w: &Word) -> OracleVerdict {
        let syms: Vec<Sym> = w
            .letters()
            .iter()
            .map(|l| match l.generator() {
                'a' => Sym::A,
                'c' => Sym::C,
                'd' => Sym::D,
                g => panic!("letter `{g}` outside the Grigorchuk alphabet"),
            })
            .collect();
        if is_trivial(&syms) {
            OracleVerdict::trivial("acts trivially on the rooted binary tree")
        } else {
            OracleVerdict::nontrivial("moves some vertex of the rooted binary tree")
        }
    }
}
