use ascending_hnn::endo::Endomorphism;
use ascending_hnn::word::{Alphabet, Letter, Word};
use proptest::prelude::*;

fn letters(alpha: &'static str) -> impl Strategy<Value = Vec<Letter>> {
    let ls: Vec<Letter> = alpha.chars().flat_map(|c| [Letter::new(c, false), Letter::new(c, true)]).collect();
    prop::collection::vec(prop::sample::select(ls), 0..24)
}

fn word(alpha: &'static str) -> impl Strategy<Value = Word> {
    letters(alpha).prop_map(Word::reduce)
}

fn is_reduced(w: &Word) -> bool {
    w.letters().windows(2).all(|p| p[0] != p[1].inverse())
}

proptest! {
    #[test]
    fn reduction_is_idempotent(ls in letters("ab")) {
        let w = Word::reduce(ls.clone());
        prop_assert!(is_reduced(&w));
        prop_assert_eq!(Word::reduce(w.letters().to_vec()), w.clone());
        prop_assert!(w.len() <= ls.len());
        prop_assert_eq!(w.len() % 2, ls.len() % 2);
    }

    #[test]
    fn group_laws(u in word("ab"), v in word("ab"), x in word("ab")) {
        prop_assert_eq!(u.mul(&v).mul(&x), u.mul(&v.mul(&x)));
        prop_assert!(u.mul(&u.inverse()).is_empty());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
        prop_assert_eq!(u.inverse().inverse(), u.clone());
    }

    #[test]
    fn display_parse_round_trip(u in word("abt")) {
        prop_assert_eq!(Word::parse(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn cyclic_reduction_is_a_conjugate(u in word("ab")) {
        let c = u.cyclic_reduce();
        prop_assert!(c.is_cyclically_reduced());
        let k = (u.len() - c.len()) / 2;
        prop_assert_eq!(c.conjugate_by(&u.prefix(k)), u.clone());
    }

    #[test]
    fn exponent_sums_are_additive(u in word("at"), v in word("at")) {
        prop_assert_eq!(u.mul(&v).exponent_sum('t'), u.exponent_sum('t') + v.exponent_sum('t'));
    }

    #[test]
    fn endomorphisms_are_homomorphisms(u in word("ab"), v in word("ab"), k in 0usize..3) {
        let alphabet = Alphabet::from_letters("ab").unwrap();
        let phi = Endomorphism::from_pairs(&alphabet, [('a', "aab"), ('b', "Ba")]).unwrap();
        prop_assert_eq!(phi.image(&u.mul(&v)), phi.image(&u).mul(&phi.image(&v)));
        prop_assert_eq!(phi.image(&u.inverse()), phi.image(&u).inverse());
        prop_assert_eq!(phi.image_k(&u, k + 1), phi.image(&phi.image_k(&u, k)));
        prop_assert_eq!(phi.compose(&phi).image(&u), phi.image_k(&u, 2));
    }
}

#[test]
fn enumeration_order() {
    let a = Alphabet::from_letters("ab").unwrap();
    let words: Vec<String> = a.reduced_words_of_length(1).iter().map(|w| w.to_string()).collect();
    assert_eq!(words, ["a", "A", "b", "B"]);
    for n in 0..6 {
        let expect = if n == 0 { 1 } else { 4 * 3usize.pow(n as u32 - 1) };
        assert_eq!(a.reduced_words_of_length(n).len(), expect);
    }
}

#[test]
fn expression_syntax() {
    assert_eq!(Word::parse_expr("[b^-1 a b, a]").unwrap().to_string(), "BabaBAbA");
    assert_eq!(Word::parse_expr("(ad)^4").unwrap().to_string(), "adadadad");
    assert!(Word::parse_expr("a^").is_err());
}
