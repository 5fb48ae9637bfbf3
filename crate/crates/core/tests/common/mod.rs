//! Independent models shared by the integration tests.
//!
//! Nothing here calls into the library's normal forms or oracles: the
//! doubling group is modelled by affine maps of the dyadic rationals and the
//! Grigorchuk group by its action on finite levels of the binary tree.

#![allow(dead_code)]

use ascending_hnn::hnn::HnnPresentation;
use ascending_hnn::word::Word;

pub const DOUBLING: &str =
    r#"{"generators":["a"],"stable":"t","relators":[],"phi":{"a":"aa"},"base_oracle":"free","depth_bound":0}"#;

pub const BS23: &str = r#"{"generators":["a","b"],"stable":"t","relators":["BaabAAA"],"phi":{"a":"aa","b":"b"},
    "base_oracle":"bs:2,3","depth_bound":null,"phi_section":{"a":"BabA","b":"b"}}"#;

pub const GRIGORCHUK: &str = r#"{"generators":["a","c","d"],"stable":"t","relators":["aa","cc","dd","(ad)^4","(adacac)^4"],
    "phi":{"a":"aca","c":"cd","d":"c"},"base_oracle":"grigorchuk","depth_bound":0}"#;

pub fn doubling() -> HnnPresentation {
    HnnPresentation::from_json(DOUBLING).unwrap()
}

pub fn bs23() -> HnnPresentation {
    HnnPresentation::from_json(BS23).unwrap()
}

pub fn grigorchuk() -> HnnPresentation {
    HnnPresentation::from_json(GRIGORCHUK).unwrap()
}

const SCALE: u32 = 48;

/// The map `x ↦ 2^e·x + s` of the dyadic rationals, with `s` stored as `s·2^48`.
///
/// Acting on the right, `a` is `x ↦ x + 1` and `t` is `x ↦ 2x`, so
/// `t⁻¹·a·t` is `x ↦ x + 2`, which is `a²`. This is a faithful model of
/// `⟨t, a | t⁻¹at = a²⟩`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub e: i32,
    pub s: i128,
}

impl Affine {
    pub const ID: Affine = Affine { e: 0, s: 0 };

    fn scale(x: i128, e: i32) -> i128 {
        if e >= 0 {
            x << e
        } else {
            assert_eq!(x % (1i128 << -e), 0, "dyadic precision exceeded");
            x >> -e
        }
    }

    /// `self` followed by `other`.
    pub fn then(self, other: Affine) -> Affine {
        Affine { e: self.e + other.e, s: Self::scale(self.s, other.e) + other.s }
    }

    pub fn of_char(c: char) -> Affine {
        match c {
            'a' => Affine { e: 0, s: 1 << SCALE },
            'A' => Affine { e: 0, s: -(1 << SCALE) },
            't' => Affine { e: 1, s: 0 },
            'T' => Affine { e: -1, s: 0 },
            _ => panic!("not a doubling-group letter: {c}"),
        }
    }

    pub fn of_word(w: &Word) -> Affine {
        w.to_string().chars().fold(Affine::ID, |acc, c| acc.then(Affine::of_char(c)))
    }
}

/// Action of a word over `a, c, d` on the binary strings of length `depth`.
pub fn tree_action(word: &str, depth: usize) -> Vec<u32> {
    (0..1u32 << depth).map(|x| word.chars().fold(x, |x, g| act(g.to_ascii_lowercase(), x, depth))).collect()
}

fn act(g: char, x: u32, depth: usize) -> u32 {
    if depth == 0 {
        return x;
    }
    let top = 1u32 << (depth - 1);
    let (bit, rest) = (x & top, x & (top - 1));
    let sub = |h: Option<char>| h.map_or(rest, |h| act(h, rest, depth - 1));
    match g {
        'a' => x ^ top,
        'b' => bit | if bit == 0 { sub(Some('a')) } else { sub(Some('c')) },
        'c' => bit | if bit == 0 { sub(Some('a')) } else { sub(Some('d')) },
        'd' => bit | if bit == 0 { sub(None) } else { sub(Some('b')) },
        _ => panic!("not a Grigorchuk generator: {g}"),
    }
}

pub fn acts_trivially(word: &str, depth: usize) -> bool {
    tree_action(word, depth).iter().enumerate().all(|(i, &y)| i as u32 == y)
}
