use std::collections::HashSet;

use ascending_hnn::endo::Endomorphism;
use ascending_hnn::stallings::{build_subgroup_graph, image_rank_sequence, monomorphize, ImageGraph};
use ascending_hnn::word::{Alphabet, Word};

fn phi(pairs: [(char, &str); 2]) -> Endomorphism {
    Endomorphism::from_pairs(&Alphabet::from_letters("ab").unwrap(), pairs).unwrap()
}

fn cases() -> Vec<(&'static str, Endomorphism)> {
    vec![
        ("a->aa b->b", phi([('a', "aa"), ('b', "b")])),
        ("a->a b->a", phi([('a', "a"), ('b', "a")])),
        ("a->b b->b", phi([('a', "b"), ('b', "b")])),
    ]
}

/// Images of words of length at most 6 cover every image word of length at most
/// 6 here: the first map never shortens a reduced word, the other two have cyclic image.
#[test]
fn membership_matches_enumeration() {
    let alphabet = Alphabet::from_letters("ab").unwrap();
    let all = alphabet.reduced_words_up_to(6);
    for (name, phi) in cases() {
        let images: HashSet<Word> = all.iter().map(|u| phi.image(u)).collect();
        let graph = ImageGraph::new(&phi);
        for w in &all {
            let (member, pre) = graph.member(w);
            assert_eq!(member, images.contains(w), "{name}: membership of `{w}`");
            if let Some(u) = pre {
                assert_eq!(&phi.image(&u), w, "{name}: preimage of `{w}`");
            }
        }
    }
}

#[test]
fn rank_sequences() {
    let expected = [vec![2, 2, 2, 2], vec![2, 1, 1, 1], vec![2, 1, 1, 1]];
    let stable = [Some(0), Some(1), Some(1)];
    for ((name, phi), (ranks, m)) in cases().into_iter().zip(expected.iter().zip(stable)) {
        let (got, got_m) = image_rank_sequence(&phi, 3);
        assert_eq!(&got, ranks, "{name}");
        assert_eq!(got_m, m, "{name}");
    }
}

#[test]
fn monomorphizations_are_injective_and_compatible() {
    let alphabet = Alphabet::from_letters("ab").unwrap();
    for (name, phi) in cases() {
        let mono = monomorphize(&phi, 4).unwrap();
        assert!(mono.phi_prime_is_injective(), "{name}");
        assert_eq!(build_subgroup_graph(&mono.basis_words).rank(), mono.basis_alphabet.len(), "{name}");
        for (i, &g) in alphabet.generators().iter().enumerate() {
            let x = Word::parse(&g.to_string()).unwrap();
            // ρ′ intertwines φ and φ′: ρ′(φ(x)) = φ′(ρ′(x)).
            let lhs = mono.express(&phi.image_k(&x, mono.m + 1)).expect("image lies in the stabilized subgroup");
            let rhs = mono.phi_prime.image(&mono.rho_prime[i]);
            assert_eq!(lhs, rhs, "{name}: generator {g}");
            // Evaluating ρ′(x) in the basis gives back φᵐ(x).
            let back = mono.rho_prime[i]
                .letters()
                .iter()
                .fold(Word::empty(), |acc, l| {
                    let j = mono.basis_alphabet.index_of(l.generator()).unwrap();
                    let b = &mono.basis_words[j];
                    acc.mul(&if l.is_inverse() { b.inverse() } else { b.clone() })
                });
            assert_eq!(back, phi.image_k(&x, mono.m), "{name}: generator {g}");
        }
    }
}

#[test]
fn subgroup_of_squares() {
    let g = build_subgroup_graph(&[Word::parse("aa").unwrap()]);
    assert_eq!(g.rank(), 1);
    assert_eq!(g.vertex_count(), 2);
    for k in -4i64..=4 {
        assert_eq!(g.accepts(&Word::power('a', k)), k % 2 == 0);
    }
}
