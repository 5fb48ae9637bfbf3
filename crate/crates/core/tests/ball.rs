mod common;

use std::collections::{HashMap, VecDeque};

use ascending_hnn::ball::{build_ball, components_minus, Ball, CellKind};
use ascending_hnn::exec::Execution;
use ascending_hnn::hnn::{equal_in_G, Truth};
use ascending_hnn::word::Word;
use common::{bs23, doubling, grigorchuk, Affine};

/// Sphere sizes of the doubling group, by breadth-first search over affine maps.
fn affine_spheres(radius: usize) -> Vec<usize> {
    let mut dist: HashMap<Affine, usize> = HashMap::from([(Affine::ID, 0)]);
    let mut queue = VecDeque::from([Affine::ID]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        if d == radius {
            continue;
        }
        for c in ['a', 'A', 't', 'T'] {
            let h = g.then(Affine::of_char(c));
            dist.entry(h).or_insert_with(|| {
                queue.push_back(h);
                d + 1
            });
        }
    }
    let mut spheres = vec![0; radius + 1];
    for d in dist.values() {
        spheres[*d] += 1;
    }
    spheres
}

fn spheres(ball: &Ball) -> Vec<usize> {
    let mut s = vec![0; ball.radius + 1];
    for v in &ball.vertices {
        s[v.distance] += 1;
    }
    s
}

#[test]
fn sphere_sizes_match_affine_bfs() {
    let p = doubling();
    let ball = build_ball(&p, 6, Execution::Parallel).unwrap();
    assert_eq!(spheres(&ball), affine_spheres(6));
    assert_eq!(build_ball(&p, 3, Execution::Sequential).unwrap().vertex_count(), 43);
}

/// A second, slower count using nothing but pairwise equality tests.
#[test]
fn radius_three_by_pairwise_equality() {
    let p = doubling();
    let letters = p.full_alphabet().letters();
    let mut reps: Vec<Word> = vec![Word::empty()];
    let mut frontier = reps.clone();
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                let x = w.mul(&Word::letter(l));
                if !reps.iter().any(|r| equal_in_G(r, &x, &p) == Truth::True) {
                    reps.push(x.clone());
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    assert_eq!(reps.len(), 43);
}

#[test]
fn vertices_are_distinct_group_elements() {
    let p = doubling();
    let ball = build_ball(&p, 5, Execution::Parallel).unwrap();
    let mut seen = HashMap::new();
    for v in &ball.vertices {
        assert!(seen.insert(Affine::of_word(&v.word), v.id).is_none(), "duplicate vertex {}", v.word);
        assert_eq!(v.word.len(), v.distance);
    }
    for e in &ball.edges {
        let s = Affine::of_word(&ball.vertices[e.source].word);
        let t = Affine::of_word(&ball.vertices[e.target].word);
        assert_eq!(s.then(Affine::of_char(e.label)), t);
    }
}

#[test]
fn cells_close_up() {
    let p = doubling();
    let ball = build_ball(&p, 4, Execution::Parallel).unwrap();
    assert!(!ball.cells.is_empty());
    for c in &ball.cells {
        assert!(matches!(c.kind, CellKind::Conjugation { generator: 'a' }));
        let start = Affine::of_word(&ball.vertices[c.vertices[0]].word);
        assert_eq!(start.then(Affine::of_word(&c.label)), start);
        assert_eq!(c.vertices.len(), c.label.len());
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let p = doubling();
    let a = build_ball(&p, 5, Execution::Parallel).unwrap();
    let b = build_ball(&p, 5, Execution::Sequential).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let g = grigorchuk();
    let a = build_ball(&g, 3, Execution::Parallel).unwrap();
    let b = build_ball(&g, 3, Execution::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn json_round_trip_is_byte_identical() {
    let ball = build_ball(&doubling(), 4, Execution::Parallel).unwrap();
    let json = ball.to_json();
    let back = Ball::from_json(&json).unwrap();
    assert_eq!(back, ball);
    assert_eq!(back.to_json(), json);
}

#[test]
fn components_of_a_line() {
    let p = doubling();
    let ball = build_ball(&p, 3, Execution::Parallel).unwrap();
    let all = components_minus(&ball, |_| false);
    assert_eq!(all.len(), 1);
    let cut = components_minus(&ball, |v| v.level == 0);
    let above = ball.find(&p, &p.parse_word("t").unwrap()).unwrap();
    let below = ball.find(&p, &p.parse_word("T").unwrap()).unwrap();
    assert!(!cut.same(above, below));
}

#[test]
fn inexact_equality_is_refused() {
    assert!(build_ball(&bs23(), 2, Execution::Sequential).is_err());
}
