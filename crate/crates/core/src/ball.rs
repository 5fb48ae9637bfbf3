//! Finite balls in the Cayley 2-complex of an ascending HNN presentation.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hnn::{equal_in_G, level, CanonicalForm, HnnPresentation, Truth};
use crate::word::{Letter, Word};

pub const BALL_SCHEMA: &str = "ahnn-ball/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallVertex {
    pub id: usize,
    /// A geodesic word reaching the vertex from the identity.
    pub word: Word,
    pub form: CanonicalForm,
    pub distance: usize,
    pub level: i64,
}

/// An edge `source --label--> target` with a positive generator label.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallEdge {
    pub source: usize,
    pub label: char,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CellKind {
    Relator { index: usize },
    Conjugation { generator: char },
}

/// A 2-cell: the closed path read from `vertices[0]` along `label`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallCell {
    pub kind: CellKind,
    pub label: Word,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub schema: String,
    pub radius: usize,
    pub generators: Vec<char>,
    pub stable: char,
    pub vertices: Vec<BallVertex>,
    pub edges: Vec<BallEdge>,
    pub cells: Vec<BallCell>,
}

/// Vertex identification: exact canonical-form keys for a free base, oracle
/// equality within a level otherwise.
struct Index<'a> {
    p: &'a HnnPresentation,
    exact_keys: HashMap<(usize, Word, usize), usize>,
    by_level: HashMap<i64, Vec<usize>>,
}

impl<'a> Index<'a> {
    fn new(p: &'a HnnPresentation) -> Self {
        Index { p, exact_keys: HashMap::new(), by_level: HashMap::new() }
    }

    fn find(&self, vertices: &[BallVertex], word: &Word, form: &CanonicalForm) -> Option<usize> {
        if let Some(&id) = self.exact_keys.get(&(form.n, form.w.clone(), form.m)) {
            return Some(id);
        }
        if self.p.is_free() {
            return None;
        }
        let lv = form.level();
        self.by_level.get(&lv)?.iter().copied().find(|&id| equal_in_G(&vertices[id].word, word, self.p) == Truth::True)
    }

    fn insert(&mut self, v: &BallVertex) {
        self.exact_keys.insert((v.form.n, v.form.w.clone(), v.form.m), v.id);
        self.by_level.entry(v.level).or_default().push(v.id);
    }
}

impl HnnPresentation {
    /// Whether `equal_in_G` never answers Unknown.
    pub fn has_exact_equality(&self) -> bool {
        use crate::hnn::OracleScope;
        self.oracle().capability().exact && (self.scope() == OracleScope::BaseGroup || self.depth_bound().is_some())
    }
}

fn step_letters(p: &HnnPresentation) -> Vec<Letter> {
    p.full_alphabet().letters()
}

pub fn build_ball(p: &HnnPresentation, radius: usize, exec: Execution) -> Result<Ball> {
    if !p.has_exact_equality() {
        return Err(Error::UnsupportedPresentation(format!(
            "oracle `{}` does not give exact equality here; declare a depth bound or use an exact base",
            p.oracle_spec()
        )));
    }
    let letters = step_letters(p);
    let mut vertices = vec![BallVertex { id: 0, word: Word::empty(), form: CanonicalForm::identity(), distance: 0, level: 0 }];
    let mut index = Index::new(p);
    index.insert(&vertices[0]);
    let mut frontier = vec![0usize];
    for d in 1..=radius {
        let candidates: Vec<(Word, CanonicalForm)> = exec
            .map(&frontier, |&id| {
                letters
                    .iter()
                    .map(|&l| {
                        let w = vertices[id].word.mul(&Word::letter(l));
                        let f = p.canonical_form(&w);
                        (w, f)
                    })
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect();
        let mut next = Vec::new();
        for (word, form) in candidates {
            if index.find(&vertices, &word, &form).is_some() {
                continue;
            }
            if !form.exact && p.is_free() {
                return Err(Error::Verification(format!("free-base form of `{word}` is not exact")));
            }
            let v = BallVertex { id: vertices.len(), level: level(&word, p.stable()), word, form, distance: d };
            index.insert(&v);
            next.push(v.id);
            vertices.push(v);
        }
        frontier = next;
    }

    let lookup = |word: &Word| -> Option<usize> {
        let f = p.canonical_form(word);
        index.find(&vertices, word, &f)
    };

    let gens: Vec<char> = p.alphabet().generators().iter().copied().chain(std::iter::once(p.stable())).collect();
    let targets: Vec<Vec<Option<usize>>> = exec.map(&vertices, |v| {
        gens.iter().map(|&g| lookup(&v.word.mul(&Word::letter(Letter::new(g, false))))).collect()
    });
    let mut edges = Vec::new();
    for (v, ts) in vertices.iter().zip(&targets) {
        for (&g, t) in gens.iter().zip(ts) {
            if let Some(t) = *t {
                edges.push(BallEdge { source: v.id, label: g, target: t });
            }
        }
    }

    let mut cell_words: Vec<(CellKind, Word)> =
        p.relators().words().iter().enumerate().map(|(i, r)| (CellKind::Relator { index: i }, r.clone())).collect();
    for &g in p.alphabet().generators() {
        cell_words.push((CellKind::Conjugation { generator: g }, p.conjugation_relator(g)));
    }
    let succ: Vec<HashMap<Letter, usize>> = {
        let mut s: Vec<HashMap<Letter, usize>> = vec![HashMap::new(); vertices.len()];
        for e in &edges {
            let l = Letter::new(e.label, false);
            s[e.source].insert(l, e.target);
            s[e.target].insert(l.inverse(), e.source);
        }
        s
    };
    let cells_per_vertex: Vec<Vec<BallCell>> = exec.map_range(vertices.len(), |vid| {
        let mut out = Vec::new();
        'cells: for (kind, label) in &cell_words {
            let mut path = vec![vid];
            let mut cur = vid;
            for l in label.letters() {
                match succ[cur].get(l) {
                    Some(&nx) => {
                        cur = nx;
                        path.push(nx);
                    }
                    None => continue 'cells,
                }
            }
            debug_assert_eq!(cur, vid, "relator path must close");
            path.pop();
            out.push(BallCell { kind: kind.clone(), label: label.clone(), vertices: path });
        }
        out
    });
    let cells = cells_per_vertex.into_iter().flatten().collect();

    Ok(Ball {
        schema: BALL_SCHEMA.into(),
        radius,
        generators: p.alphabet().generators().to_vec(),
        stable: p.stable(),
        vertices,
        edges,
        cells,
    })
}

/// Connected components of the 1-skeleton after removing some vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Components {
    /// Component id per vertex, `None` for removed vertices.
    pub component_of: Vec<Option<usize>>,
    /// Members of each component in BFS order of the ball.
    pub members: Vec<Vec<usize>>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn same(&self, u: usize, v: usize) -> bool {
        matches!((self.component_of[u], self.component_of[v]), (Some(a), Some(b)) if a == b)
    }
}

impl Ball {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.source].push(e.target);
            if e.source != e.target {
                adj[e.target].push(e.source);
            }
        }
        adj
    }

    /// Finds the vertex representing `w`, if it lies in the ball.
    pub fn find(&self, p: &HnnPresentation, w: &Word) -> Option<usize> {
        let f = p.canonical_form(w);
        if let Some(v) = self.vertices.iter().find(|v| v.form.n == f.n && v.form.m == f.m && v.form.w == f.w) {
            return Some(v.id);
        }
        if p.is_free() {
            return None;
        }
        self.vertices
            .iter()
            .filter(|v| v.level == f.level())
            .find(|v| equal_in_G(&v.word, w, p) == Truth::True)
            .map(|v| v.id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ball serializes")
    }

    pub fn from_json(s: &str) -> Result<Ball> {
        let b: Ball = serde_json::from_str(s)?;
        if b.schema != BALL_SCHEMA {
            return Err(Error::IllFormed(format!("unsupported ball schema `{}`", b.schema)));
        }
        Ok(b)
    }

    /// Graphviz rendering; `annotations` adds a per-vertex note such as a region label.
    pub fn to_dot(&self, annotations: Option<&[String]>) -> String {
        let mut s = String::from("digraph ball {\n  node [shape=circle];\n");
        for v in &self.vertices {
            let name = if v.word.is_empty() { "1".to_string() } else { v.word.to_string() };
            let mut label = format!("{name}\\nP={}", v.level);
            if let Some(a) = annotations.and_then(|a| a.get(v.id)) {
                let _ = write!(label, "\\n{a}");
            }
            let _ = writeln!(s, "  v{} [label=\"{label}\", level={}];", v.id, v.level);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", e.source, e.target, e.label);
        }
        s.push_str("}\n");
        s
    }
}

pub fn components_minus(ball: &Ball, removed: impl Fn(&BallVertex) -> bool) -> Components {
    let n = ball.vertices.len();
    let gone: Vec<bool> = ball.vertices.iter().map(removed).collect();
    let adj = ball.adjacency();
    let mut component_of = vec![None; n];
    let mut members = Vec::new();
    for start in 0..n {
        if gone[start] || component_of[start].is_some() {
            continue;
        }
        let id = members.len();
        let mut comp = vec![start];
        component_of[start] = Some(id);
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &x in &adj[u] {
                if !gone[x] && component_of[x].is_none() {
                    component_of[x] = Some(id);
                    comp.push(x);
                }
            }
        }
        comp.sort_unstable();
        members.push(comp);
    }
    Components { component_of, members }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling() -> HnnPresentation {
        HnnPresentation::from_json(
            r#"{"generators":["a"],"stable":"t","relators":[],"phi":{"a":"aa"},"base_oracle":"free","depth_bound":0}"#,
        )
        .unwrap()
    }

    #[test]
    fn small_balls() {
        let p = doubling();
        let b0 = build_ball(&p, 0, Execution::Sequential).unwrap();
        assert_eq!((b0.vertex_count(), b0.edges.len()), (1, 0));
        assert_eq!(b0.to_dot(None).matches("[label=").count(), 1);
        let b1 = build_ball(&p, 1, Execution::Sequential).unwrap();
        assert_eq!(b1.vertex_count(), 5);
        let mut levels: Vec<i64> = b1.vertices.iter().map(|v| v.level).collect();
        levels.sort();
        assert_eq!(levels, vec![-1, 0, 0, 0, 1]);
    }

    #[test]
    fn json_round_trip_and_modes_agree() {
        let p = doubling();
        let a = build_ball(&p, 3, Execution::Sequential).unwrap();
        let b = build_ball(&p, 3, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let j = a.to_json();
        assert_eq!(Ball::from_json(&j).unwrap().to_json(), j);
    }

    #[test]
    fn cells_and_levels() {
        let p = doubling();
        let b = build_ball(&p, 4, Execution::Sequential).unwrap();
        assert!(!b.cells.is_empty());
        for e in &b.edges {
            let d = b.vertices[e.target].level - b.vertices[e.source].level;
            assert_eq!(d, if e.label == 't' { 1 } else { 0 });
        }
        for c in &b.cells {
            let base = b.vertices[c.vertices[0]].level;
            assert!(c.vertices.iter().all(|&v| b.vertices[v].level == base || b.vertices[v].level == base + 1));
        }
    }

    #[test]
    fn components_basics() {
        let p = doubling();
        let b = build_ball(&p, 3, Execution::Sequential).unwrap();
        assert_eq!(components_minus(&b, |_| false).len(), 1);
        assert!(components_minus(&b, |_| true).is_empty());
    }

    #[test]
    fn non_exact_presentation_is_rejected() {
        let p = HnnPresentation::from_json(
            r#"{"generators":["a","b"],"stable":"t","relators":["BaabAAA"],"phi":{"a":"aa","b":"b"},
            "base_oracle":"bs:2,3","depth_bound":null,"phi_section":{"a":"BabA","b":"b"}}"#,
        )
        .unwrap();
        assert!(matches!(build_ball(&p, 1, Execution::Sequential), Err(Error::UnsupportedPresentation(_))));
    }
}
