//! Bounded search for products of conjugates by relator application.
//!
//! A move picks a position in the current word and a rotation `ρ' = p·s` of a
//! relator (or its inverse) whose prefix `p` matches there, and replaces `p` by
//! `s⁻¹`. Writing the word as `x·p·y`, this peels off the factor `x·ρ'·x⁻¹`.
//! The search is iterative deepening on the number of moves, with moves tried
//! shortest-result first and a length-based lower bound for pruning, so a
//! fixed budget always yields the same certificate.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Factor};
use crate::word::{Letter, Word};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Iterates `φⁱ(R)` for `i ≤ i_max` are available as relators (bounded oracle only).
    pub i_max: usize,
    pub max_factors: usize,
    pub conj_len: usize,
    pub max_word_len: usize,
    pub max_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { i_max: 2, max_factors: 8, conj_len: 64, max_word_len: 96, max_nodes: 20_000 }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: usize,
    pub deepest_bound: usize,
    pub exhausted: bool,
}

impl std::fmt::Display for SearchStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "searched {} nodes up to {} factors{}",
            self.nodes,
            self.deepest_bound,
            if self.exhausted { " (node budget exhausted)" } else { "" }
        )
    }
}

/// One relator application.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Application {
    pub pos: usize,
    pub relator: usize,
    pub inverse: bool,
    pub rotation: usize,
    pub piece_len: usize,
}

#[derive(Clone, Debug)]
struct Cell {
    relator: usize,
    inverse: bool,
    rotation: usize,
    word: Word,
}

#[derive(Clone, Debug)]
pub struct RelatorSearch {
    relators: Vec<Word>,
    cells: Vec<Cell>,
    by_first: HashMap<Letter, Vec<usize>>,
    longest: usize,
}

impl RelatorSearch {
    pub fn new(relators: Vec<Word>) -> RelatorSearch {
        let relators: Vec<Word> = relators.into_iter().map(|r| r.cyclic_reduce()).filter(|r| !r.is_empty()).collect();
        let mut cells = Vec::new();
        for (i, r) in relators.iter().enumerate() {
            for inverse in [false, true] {
                let base = if inverse { r.inverse() } else { r.clone() };
                for rotation in 0..base.len() {
                    cells.push(Cell { relator: i, inverse, rotation, word: base.rotate(rotation) });
                }
            }
        }
        let mut by_first: HashMap<Letter, Vec<usize>> = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            by_first.entry(c.word.letters()[0]).or_default().push(i);
        }
        let longest = relators.iter().map(Word::len).max().unwrap_or(0);
        RelatorSearch { relators, cells, by_first, longest }
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    fn cell(&self, app: &Application) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.relator == app.relator && c.inverse == app.inverse && c.rotation == app.rotation)
    }

    /// Applies a move, checking that the piece matches. Returns the new word and the factor peeled off.
    pub fn apply(&self, w: &Word, app: &Application) -> Option<(Word, Factor)> {
        let cell = self.cell(app)?;
        let end = app.pos.checked_add(app.piece_len)?;
        if app.piece_len == 0 || app.piece_len > cell.word.len() || end > w.len() {
            return None;
        }
        if w.letters()[app.pos..end] != cell.word.letters()[..app.piece_len] {
            return None;
        }
        Some((self.rewrite(w, cell, app.pos, app.piece_len), self.factor(w, app)))
    }

    fn rewrite(&self, w: &Word, cell: &Cell, pos: usize, piece_len: usize) -> Word {
        let rest = cell.word.slice(piece_len, cell.word.len()).inverse();
        w.prefix(pos).mul(&rest).mul(&w.slice(pos + piece_len, w.len()))
    }

    fn factor(&self, w: &Word, app: &Application) -> Factor {
        let r = &self.relators[app.relator];
        let base = if app.inverse { r.inverse() } else { r.clone() };
        Factor {
            conjugator: w.prefix(app.pos).mul(&base.prefix(app.rotation).inverse()),
            relator: r.clone(),
            exponent: if app.inverse { -1 } else { 1 },
        }
    }

    /// Moves whose result could still reach the empty word in `left - 1` further moves.
    fn moves(&self, w: &Word, left: usize, budget: &SearchBudget) -> Vec<(Word, Application)> {
        let letters = w.letters();
        let mut out: Vec<(Word, Application)> = Vec::new();
        for pos in 0..letters.len() {
            let Some(candidates) = self.by_first.get(&letters[pos]) else { continue };
            for &ci in candidates {
                let cell = &self.cells[ci];
                let max = letters[pos..].iter().zip(cell.word.letters()).take_while(|(a, b)| a == b).count();
                for piece_len in 1..=max {
                    let app = Application {
                        pos,
                        relator: cell.relator,
                        inverse: cell.inverse,
                        rotation: cell.rotation,
                        piece_len,
                    };
                    if pos + cell.rotation > budget.conj_len && self.factor(w, &app).conjugator.len() > budget.conj_len {
                        continue;
                    }
                    let next = self.rewrite(w, cell, pos, piece_len);
                    if next.len() > budget.max_word_len || self.lower_bound(&next) > left - 1 {
                        continue;
                    }
                    out.push((next, app));
                }
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.1).cmp(&(b.0.len(), &b.1)));
        let mut seen = HashSet::new();
        out.retain(|m| seen.insert(m.0.clone()));
        out
    }

    fn lower_bound(&self, w: &Word) -> usize {
        if w.is_empty() {
            0
        } else if self.longest == 0 {
            usize::MAX
        } else {
            w.len().div_ceil(self.longest)
        }
    }

    /// Finds moves reducing `target` to the empty word, or reports what was searched.
    pub fn search(&self, target: &Word, budget: &SearchBudget) -> Result<Vec<(Application, Factor)>, SearchStats> {
        let mut stats = SearchStats::default();
        if target.is_empty() {
            return Ok(Vec::new());
        }
        for bound in 1..=budget.max_factors {
            stats.deepest_bound = bound;
            if self.lower_bound(target) > bound {
                continue;
            }
            let mut seen: HashMap<Word, usize> = HashMap::new();
            let mut path = Vec::new();
            if self.dfs(target, bound, budget, &mut stats, &mut seen, &mut path) {
                return Ok(path);
            }
            if stats.exhausted {
                break;
            }
        }
        Err(stats)
    }

    fn dfs(
        &self,
        w: &Word,
        left: usize,
        budget: &SearchBudget,
        stats: &mut SearchStats,
        seen: &mut HashMap<Word, usize>,
        path: &mut Vec<(Application, Factor)>,
    ) -> bool {
        if w.is_empty() {
            return true;
        }
        if left == 0 || self.lower_bound(w) > left {
            return false;
        }
        if seen.get(w).is_some_and(|&l| l >= left) {
            return false;
        }
        seen.insert(w.clone(), left);
        if stats.nodes >= budget.max_nodes {
            stats.exhausted = true;
            return false;
        }
        stats.nodes += 1;
        for (next, app) in self.moves(w, left, budget) {
            path.push((app, self.factor(w, &app)));
            if self.dfs(&next, left - 1, budget, stats, seen, path) {
                return true;
            }
            path.pop();
            if stats.exhausted {
                return false;
            }
        }
        false
    }

    /// Convenience: a certificate for `target`, if one is found within budget.
    pub fn certify(&self, target: &Word, budget: &SearchBudget) -> Result<Certificate, SearchStats> {
        self.search(target, budget).map(|moves| Certificate { factors: moves.into_iter().map(|(_, f)| f).collect() })
    }
}
