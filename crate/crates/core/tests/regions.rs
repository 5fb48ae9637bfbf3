mod common;

use ascending_hnn::ball::{build_ball, components_minus};
use ascending_hnn::exec::Execution;
use ascending_hnn::hnn::{level, Truth};
use ascending_hnn::regions::{check_up_lemma, classify, in_D, same_other_component, RegionLabel};
use ascending_hnn::word::Word;
use common::{doubling, Affine};

/// `g ∈ tᴺA·{1, t⁻¹, …, t⁻ᴹ}` in the affine model: `g·t^(N − level)` is `x ↦ 2ᴺx + k` with `k ∈ ℤ`.
fn in_d_model(w: &Word, n: i64, m: i64) -> bool {
    let lv = level(w, 't');
    if lv < n - m || lv > n {
        return false;
    }
    let g = Affine::of_word(&w.mul(&Word::power('t', n - lv)));
    g.e == n as i32 && g.s % (1i128 << 48) == 0
}

#[test]
fn in_d_matches_affine_model() {
    let p = doubling();
    let ball = build_ball(&p, 6, Execution::Parallel).unwrap();
    for n in 0..3 {
        for m in 0..3 {
            for v in &ball.vertices {
                let want = Truth::from_bool(in_d_model(&v.word, n, m));
                assert_eq!(in_D(&v.word, n as usize, m as usize, &p), want, "{} for N={n} M={m}", v.word);
            }
        }
    }
}

#[test]
fn labels_agree_with_components_in_the_interior() {
    let p = doubling();
    let ball = build_ball(&p, 6, Execution::Parallel).unwrap();
    for n in 0..2usize {
        for m in 0..2usize {
            let labels: Vec<RegionLabel> = ball.vertices.iter().map(|v| classify(&v.word, n, m, &p)).collect();
            let comps = components_minus(&ball, |v| labels[v.id] == RegionLabel::InD);
            let k0 = ball.find(&p, &p.t_pow(n as i64 + 1)).unwrap();
            for v in ball.vertices.iter().filter(|v| v.distance <= 3) {
                match labels[v.id] {
                    RegionLabel::SpecialK0 => assert!(comps.same(v.id, k0), "{} N={n} M={m}", v.word),
                    RegionLabel::OtherComponent => assert!(!comps.same(v.id, k0), "{} N={n} M={m}", v.word),
                    RegionLabel::InD => assert!(in_d_model(&v.word, n as i64, m as i64)),
                    RegionLabel::Unknown => panic!("free base gives exact labels"),
                }
            }
        }
    }
}

#[test]
fn special_vertices_avoid_d_going_up() {
    let p = doubling();
    let ball = build_ball(&p, 5, Execution::Parallel).unwrap();
    let special: Vec<&Word> = ball
        .vertices
        .iter()
        .filter(|v| classify(&v.word, 0, 1, &p) == RegionLabel::SpecialK0)
        .map(|v| &v.word)
        .take(40)
        .collect();
    assert!(special.len() >= 20);
    for v in special {
        assert!(check_up_lemma(v, 0, 1, 4, &p).unwrap(), "{v}");
    }
}

#[test]
fn other_component_fingerprint() {
    let p = doubling();
    let ball = build_ball(&p, 6, Execution::Parallel).unwrap();
    let (n, m) = (0usize, 0usize);
    let labels: Vec<RegionLabel> = ball.vertices.iter().map(|v| classify(&v.word, n, m, &p)).collect();
    let comps = components_minus(&ball, |v| labels[v.id] == RegionLabel::InD);
    let others: Vec<usize> = ball
        .vertices
        .iter()
        .filter(|v| v.distance <= 3 && labels[v.id] == RegionLabel::OtherComponent)
        .map(|v| v.id)
        .collect();
    for &a in &others {
        for &b in &others {
            let fp = same_other_component(&ball.vertices[a].word, &ball.vertices[b].word, n, m, &p).unwrap();
            // Joined inside the ball implies joined in the complex; the converse
            // can fail only through truncation, which the interior margin avoids.
            assert_eq!(fp == Truth::True, comps.same(a, b), "{} {}", ball.vertices[a].word, ball.vertices[b].word);
        }
    }
}
