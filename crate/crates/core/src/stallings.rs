//! Folded subgroup graphs (Stallings foldings) for finitely generated subgroups
//! of free groups.
//!
//! Every edge carries a provenance word over the subgroup's generators, so a
//! closed path read at the base vertex yields not only "accepted" but also an
//! explicit expression of the input in terms of the generators. Folding two
//! edges adjusts provenance on the merged vertex so path products are preserved.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// Reduced word over abstract generators `x₁, x₂, ...`; entry `±i` is `xᵢ^{±1}` (1-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenWord(Vec<i32>);

impl GenWord {
    pub fn empty() -> GenWord {
        GenWord(Vec::new())
    }

    pub fn generator(i: usize, inverse: bool) -> GenWord {
        let i = i as i32 + 1;
        GenWord(vec![if inverse { -i } else { i }])
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push(&mut self, x: i32) {
        if self.0.last() == Some(&-x) {
            self.0.pop();
        } else {
            self.0.push(x);
        }
    }

    pub fn mul(&self, other: &GenWord) -> GenWord {
        let mut out = self.clone();
        for &x in &other.0 {
            out.push(x);
        }
        out
    }

    pub fn inverse(&self) -> GenWord {
        GenWord(self.0.iter().rev().map(|x| -x).collect())
    }

    /// Substitutes `xᵢ ↦ images[i-1]`.
    pub fn evaluate(&self, images: &[Word]) -> Word {
        let mut out = Word::empty();
        for &x in &self.0 {
            let w = &images[(x.unsigned_abs() - 1) as usize];
            out = if x < 0 { out.mul(&w.inverse()) } else { out.mul(w) };
        }
        out
    }

    /// Spells the word in a letter alphabet, with `xᵢ` named by `names[i-1]`.
    pub fn spell(&self, names: &[char]) -> Word {
        Word::reduce(self.0.iter().map(|&x| Letter::new(names[(x.unsigned_abs() - 1) as usize], x < 0)))
    }
}

#[derive(Clone, Debug)]
struct RawEdge {
    src: usize,
    dst: usize,
    label: char,
    pre: GenWord,
    alive: bool,
}

/// A folded, trimmed, base-pointed graph whose closed paths at the base spell
/// exactly the elements of a subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    vertex_count: usize,
    /// `(src, label, dst, provenance)`, sorted by `(src, label, dst)`.
    edges: Vec<(usize, char, usize, GenWord)>,
    /// Outgoing traversal table per vertex: signed letter -> (target, edge index).
    next: Vec<BTreeMap<Letter, (usize, usize)>>,
    generator_count: usize,
}

const BASE: usize = 0;

/// Folds the bouquet of `gens` into a core graph.
pub fn build_subgroup_graph(gens: &[Word]) -> SubgroupGraph {
    Folder::new(gens).fold()
}

/// `(edge, far vertex, generator-word label read towards the far vertex)`.
type EdgeEnd = (usize, usize, GenWord);

struct Folder {
    edges: Vec<RawEdge>,
    incident: Vec<Vec<usize>>,
    alive: Vec<bool>,
    generator_count: usize,
}

impl Folder {
    fn new(gens: &[Word]) -> Folder {
        let mut f = Folder { edges: Vec::new(), incident: vec![Vec::new()], alive: vec![true], generator_count: gens.len() };
        for (gi, g) in gens.iter().enumerate() {
            let n = g.len();
            if n == 0 {
                continue;
            }
            let mut prev = BASE;
            for (j, &l) in g.letters().iter().enumerate() {
                let next = if j + 1 == n { BASE } else { f.add_vertex() };
                let pre = if j == 0 { GenWord::generator(gi, false) } else { GenWord::empty() };
                if l.is_inverse() {
                    f.add_edge(next, prev, l.generator(), pre.inverse());
                } else {
                    f.add_edge(prev, next, l.generator(), pre);
                }
                prev = next;
            }
        }
        f
    }

    fn add_vertex(&mut self) -> usize {
        self.incident.push(Vec::new());
        self.alive.push(true);
        self.alive.len() - 1
    }

    fn add_edge(&mut self, src: usize, dst: usize, label: char, pre: GenWord) {
        let id = self.edges.len();
        self.edges.push(RawEdge { src, dst, label, pre, alive: true });
        self.incident[src].push(id);
        if dst != src {
            self.incident[dst].push(id);
        }
    }

    /// Signed letter, far end and provenance of traversing edge `e` away from `u`.
    fn ends_at(&self, u: usize, e: usize) -> Vec<(Letter, usize, GenWord)> {
        let ed = &self.edges[e];
        let mut out = Vec::with_capacity(2);
        if ed.src == u {
            out.push((Letter::new(ed.label, false), ed.dst, ed.pre.clone()));
        }
        if ed.dst == u {
            out.push((Letter::new(ed.label, true), ed.src, ed.pre.inverse()));
        }
        out
    }

    fn find_fold(&mut self, u: usize) -> Option<(EdgeEnd, EdgeEnd)> {
        self.incident[u].retain(|&e| self.edges[e].alive);
        let mut seen: BTreeMap<Letter, EdgeEnd> = BTreeMap::new();
        for &e in &self.incident[u] {
            for (l, far, pre) in self.ends_at(u, e) {
                if let Some(first) = seen.get(&l) {
                    if first.0 != e {
                        return Some((first.clone(), (e, far, pre)));
                    }
                } else {
                    seen.insert(l, (e, far, pre));
                }
            }
        }
        None
    }

    fn fold(mut self) -> SubgroupGraph {
        let mut work: VecDeque<usize> = (0..self.alive.len()).collect();
        while let Some(u) = work.pop_front() {
            if !self.alive[u] {
                continue;
            }
            let Some(((e1, mut v1, mut p1), (e2, mut v2, mut p2))) = self.find_fold(u) else {
                continue;
            };
            let (mut keep, mut drop) = (e1, e2);
            if v1 == v2 {
                self.edges[e2].alive = false;
                work.push_back(u);
                continue;
            }
            if v2 == BASE {
                std::mem::swap(&mut v1, &mut v2);
                std::mem::swap(&mut p1, &mut p2);
                std::mem::swap(&mut keep, &mut drop);
            }
            // Merge v2 into v1; arriving at v2 multiplies by s⁻¹, leaving by s.
            let s = p1.inverse().mul(&p2);
            let inc = std::mem::take(&mut self.incident[v2]);
            for &e in &inc {
                let ed = &mut self.edges[e];
                if !ed.alive {
                    continue;
                }
                if ed.src == v2 {
                    ed.pre = s.mul(&ed.pre);
                    ed.src = v1;
                }
                if ed.dst == v2 {
                    ed.pre = ed.pre.mul(&s.inverse());
                    ed.dst = v1;
                }
            }
            self.edges[drop].alive = false;
            for e in inc {
                if self.edges[e].alive && !self.incident[v1].contains(&e) {
                    self.incident[v1].push(e);
                }
            }
            self.alive[v2] = false;
            work.push_back(v1);
            if self.alive[u] {
                work.push_back(u);
            }
        }
        self.trim();
        self.compact()
    }

    fn degree(&self, v: usize) -> usize {
        self.incident[v]
            .iter()
            .filter(|&&e| self.edges[e].alive)
            .map(|&e| if self.edges[e].src == self.edges[e].dst { 2 } else { 1 })
            .sum()
    }

    fn trim(&mut self) {
        let mut work: Vec<usize> = (0..self.alive.len()).filter(|&v| v != BASE && self.alive[v]).collect();
        while let Some(v) = work.pop() {
            if !self.alive[v] || v == BASE {
                continue;
            }
            match self.degree(v) {
                0 => self.alive[v] = false,
                1 => {
                    let e = *self.incident[v].iter().find(|&&e| self.edges[e].alive).unwrap();
                    self.edges[e].alive = false;
                    self.alive[v] = false;
                    let other = if self.edges[e].src == v { self.edges[e].dst } else { self.edges[e].src };
                    work.push(other);
                }
                _ => {}
            }
        }
    }

    fn compact(self) -> SubgroupGraph {
        // Canonical numbering: BFS from the base, exploring signed letters in order.
        let n = self.alive.len();
        let mut adj: Vec<BTreeMap<Letter, (usize, usize)>> = vec![BTreeMap::new(); n];
        for (id, e) in self.edges.iter().enumerate() {
            if e.alive {
                adj[e.src].insert(Letter::new(e.label, false), (e.dst, id));
                adj[e.dst].insert(Letter::new(e.label, true), (e.src, id));
            }
        }
        let mut order = vec![usize::MAX; n];
        let mut queue = VecDeque::from([BASE]);
        order[BASE] = 0;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in adj[u].values() {
                if order[v] == usize::MAX {
                    order[v] = count;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        let mut edges: Vec<(usize, char, usize, GenWord)> = self
            .edges
            .iter()
            .filter(|e| e.alive)
            .map(|e| (order[e.src], e.label, order[e.dst], e.pre.clone()))
            .collect();
        edges.sort_by_key(|e| (e.0, e.1, e.2));
        let mut next = vec![BTreeMap::new(); count];
        for (i, (s, l, d, _)) in edges.iter().enumerate() {
            next[*s].insert(Letter::new(*l, false), (*d, i));
            next[*d].insert(Letter::new(*l, true), (*s, i));
        }
        SubgroupGraph { vertex_count: count, edges, next, generator_count: self.generator_count }
    }
}

impl SubgroupGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of generators the graph was built from (the provenance alphabet).
    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    /// Rank of the subgroup, `E − V + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    /// Structure with provenance stripped; equal signatures mean isomorphic graphs.
    pub fn signature(&self) -> (usize, Vec<(usize, char, usize)>) {
        (self.vertex_count, self.edges.iter().map(|(s, l, d, _)| (*s, *l, *d)).collect())
    }

    fn walk(&self, w: &Word) -> Option<(usize, Vec<(usize, bool)>)> {
        let mut v = BASE;
        let mut trail = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let &(t, e) = self.next[v].get(&l)?;
            trail.push((e, l.is_inverse()));
            v = t;
        }
        Some((v, trail))
    }

    pub fn accepts(&self, w: &Word) -> bool {
        matches!(self.walk(w), Some((BASE, _)))
    }

    /// Membership with an expression of `w` in the generators the graph was built from.
    pub fn member(&self, w: &Word) -> (bool, Option<GenWord>) {
        match self.walk(w) {
            Some((BASE, trail)) => {
                let mut pre = GenWord::empty();
                for (e, backwards) in trail {
                    let p = &self.edges[e].3;
                    pre = if backwards { pre.mul(&p.inverse()) } else { pre.mul(p) };
                }
                (true, Some(pre))
            }
            _ => (false, None),
        }
    }

    fn spanning_tree(&self) -> (Vec<Word>, Vec<bool>) {
        let mut path: Vec<Option<Word>> = vec![None; self.vertex_count];
        let mut in_tree = vec![false; self.edges.len()];
        path[BASE] = Some(Word::empty());
        let mut queue = VecDeque::from([BASE]);
        while let Some(u) = queue.pop_front() {
            let pu = path[u].clone().unwrap();
            for (&l, &(v, e)) in &self.next[u] {
                if path[v].is_none() {
                    let mut pv = pu.clone();
                    pv.push(l);
                    path[v] = Some(pv);
                    in_tree[e] = true;
                    queue.push_back(v);
                }
            }
        }
        (path.into_iter().map(Option::unwrap).collect(), in_tree)
    }

    /// Free basis read off a spanning tree: one element per non-tree edge.
    pub fn basis(&self) -> Vec<Word> {
        let (path, in_tree) = self.spanning_tree();
        self.edges
            .iter()
            .zip(&in_tree)
            .filter(|(_, &t)| !t)
            .map(|((s, l, d, _), _)| path[*s].mul(&Word::letter(Letter::new(*l, false))).mul(&path[*d].inverse()))
            .collect()
    }

    /// Expresses `w` in the basis returned by [`SubgroupGraph::basis`], if `w` is in the subgroup.
    pub fn express_in_basis(&self, w: &Word) -> Option<GenWord> {
        let (_, in_tree) = self.spanning_tree();
        let mut index = vec![usize::MAX; self.edges.len()];
        let mut k = 0;
        for (i, t) in in_tree.iter().enumerate() {
            if !t {
                index[i] = k;
                k += 1;
            }
        }
        let (end, trail) = self.walk(w)?;
        if end != BASE {
            return None;
        }
        let mut out = GenWord::empty();
        for (e, backwards) in trail {
            if index[e] != usize::MAX {
                out = out.mul(&GenWord::generator(index[e], backwards));
            }
        }
        Some(out)
    }

    /// Graphviz rendering; the base vertex is double-circled.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph subgroup {\n  rankdir=LR;\n");
        for v in 0..self.vertex_count {
            let shape = if v == BASE { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  v{v} [label=\"{v}\", shape={shape}];");
        }
        for (src, l, dst, _) in &self.edges {
            let _ = writeln!(s, "  v{src} -> v{dst} [label=\"{l}\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// Folded graph of `φ(F(A))` built from the generator images, with preimage tracking.
#[derive(Clone, Debug)]
pub struct ImageGraph {
    alphabet: Alphabet,
    graph: SubgroupGraph,
}

impl ImageGraph {
    pub fn new(phi: &Endomorphism) -> ImageGraph {
        ImageGraph { alphabet: phi.alphabet().clone(), graph: build_subgroup_graph(phi.images()) }
    }

    pub fn graph(&self) -> &SubgroupGraph {
        &self.graph
    }

    /// `(true, Some(u))` with `φ(u) = w` when `w ∈ φ(F)`.
    pub fn member(&self, w: &Word) -> (bool, Option<Word>) {
        match self.graph.member(w) {
            (true, Some(pre)) => (true, Some(pre.spell(self.alphabet.generators()))),
            _ => (false, None),
        }
    }

    pub fn preimage(&self, w: &Word) -> Option<Word> {
        self.member(w).1
    }
}

/// Rank of `φⁱ(F(A))` for `0 ≤ i ≤ i_max`, and the first index where it stops dropping.
pub fn image_rank_sequence(phi: &Endomorphism, i_max: usize) -> (Vec<usize>, Option<usize>) {
    let mut ranks = vec![phi.alphabet().len()];
    let mut images: Vec<Word> = phi.alphabet().letters().into_iter().step_by(2).map(Word::letter).collect();
    for _ in 1..=i_max {
        images = images.iter().map(|w| phi.image(w)).collect();
        ranks.push(build_subgroup_graph(&images).rank());
    }
    let m = ranks.windows(2).position(|p| p[0] == p[1]);
    (ranks, m)
}

/// A monomorphism replacing `φ`, as produced by [`monomorphize`].
#[derive(Clone, Debug)]
pub struct Monomorphization {
    /// Stabilization index: `φ` is injective on `φᵐ(F)`.
    pub m: usize,
    /// Names of the new generators.
    pub basis_alphabet: Alphabet,
    /// Each new generator as a word over the original alphabet (a free basis of `φᵐ(F)`).
    pub basis_words: Vec<Word>,
    /// `φ` restricted to `φᵐ(F)`, written in the new basis.
    pub phi_prime: Endomorphism,
    /// `ρ′(a) = φᵐ(a)` in the new basis, for each original generator; `ρ′(t) = t`.
    pub rho_prime: Vec<Word>,
    graph: SubgroupGraph,
}

const BASIS_NAMES: &str = "xyzuvwpqrsnmlkjihgfedcba";

impl Monomorphization {
    /// Writes a word of `φᵐ(F)` in the new basis.
    pub fn express(&self, w: &Word) -> Option<Word> {
        if self.m == 0 {
            return Some(w.clone());
        }
        self.graph.express_in_basis(w).map(|g| g.spell(self.basis_alphabet.generators()))
    }

    /// `ρ′` on a word over the original alphabet plus stable letter `stable`.
    pub fn rho(&self, w: &Word, alphabet: &Alphabet, stable: char) -> Word {
        let mut out = Word::empty();
        for &l in w.letters() {
            let img = if l.generator() == stable {
                Word::letter(l)
            } else {
                let i = alphabet.index_of(l.generator()).expect("letter outside alphabet");
                if l.is_inverse() {
                    self.rho_prime[i].inverse()
                } else {
                    self.rho_prime[i].clone()
                }
            };
            out = out.mul(&img);
        }
        out
    }

    /// True when the images of the new basis under `φ′` are themselves a free basis.
    pub fn phi_prime_is_injective(&self) -> bool {
        build_subgroup_graph(self.phi_prime.images()).rank() == self.basis_alphabet.len()
    }
}

/// Replaces a possibly non-injective `φ` by a monomorphism of a free factor image.
pub fn monomorphize(phi: &Endomorphism, bound: usize) -> Result<Monomorphization> {
    let (_, m) = image_rank_sequence(phi, bound);
    let m = m.ok_or(Error::StabilizationNotFound { bound })?;
    let alphabet = phi.alphabet();
    if m == 0 {
        return Ok(Monomorphization {
            m,
            basis_alphabet: alphabet.clone(),
            basis_words: alphabet.letters().into_iter().step_by(2).map(Word::letter).collect(),
            phi_prime: phi.clone(),
            rho_prime: alphabet.letters().into_iter().step_by(2).map(Word::letter).collect(),
            graph: build_subgroup_graph(&[]),
        });
    }
    let generators: Vec<Word> = alphabet.letters().into_iter().step_by(2).map(|l| phi.image_k(&Word::letter(l), m)).collect();
    let graph = build_subgroup_graph(&generators);
    let basis_words = graph.basis();
    if basis_words.len() > BASIS_NAMES.len() {
        return Err(Error::IllFormed("image rank too large to name its basis".into()));
    }
    let names: Vec<char> = BASIS_NAMES.chars().take(basis_words.len()).collect();
    let basis_alphabet = Alphabet::new(names.iter().copied())?;
    let express = |w: &Word| -> Result<Word> {
        graph
            .express_in_basis(w)
            .map(|g| g.spell(&names))
            .ok_or_else(|| Error::Verification(format!("`{w}` is not in the stabilized image")))
    };
    let phi_images = basis_words.iter().map(|b| express(&phi.image(b))).collect::<Result<Vec<_>>>()?;
    let phi_prime = Endomorphism::new(basis_alphabet.clone(), phi_images)?;
    let rho_prime = generators.iter().map(express).collect::<Result<Vec<_>>>()?;
    Ok(Monomorphization { m, basis_alphabet, basis_words, phi_prime, rho_prime, graph })
}
