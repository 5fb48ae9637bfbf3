//! Van Kampen style null-homotopies recorded as move lists.
//!
//! A diagram certificate starts from a loop label read at a base vertex and
//! lists elementary moves that shrink it to the empty loop. Each move fills
//! 2-cells: a relator cell, or a run of conjugation cells sliding a base
//! subword one level up or down. [`replay`] re-checks every move and every
//! vertex of every intermediate loop against the level cap and, when asked,
//! against `D(N, M)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnn::{level, HnnPresentation, Truth};
use crate::oracle::rewrite::RelatorSearch;
use crate::oracle::{SearchBudget, Verdict};
use crate::regions::{classify, in_D, RegionLabel};
use crate::word::{Letter, Word};

pub const DIAGRAM_SCHEMA: &str = "ahnn-diagram/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum MoveOp {
    /// Replace the piece `ρ'[..piece_len]` at `pos` by the inverse of the rest of `ρ'`,
    /// where `ρ'` is rotation `rotation` of relator `relator` (inverted if asked).
    /// Relators are indexed as in [`HnnPresentation::all_relators`].
    RelatorCell { pos: usize, relator: usize, rotation: usize, inverse: bool, piece_len: usize },
    /// Replace the base subword `u` at `pos` by `t·φ(u)·t⁻¹`.
    SlideUp { pos: usize, len: usize },
    /// Replace the base subword `φ(preimage)` at `pos` by `t⁻¹·preimage·t`.
    SlideDown { pos: usize, len: usize, preimage: Word },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    #[serde(flatten)]
    pub op: MoveOp,
    /// Level of the vertex at `pos`.
    pub level: i64,
    pub cells: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Avoid {
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramCertificate {
    pub schema: String,
    pub base: Word,
    #[serde(rename = "loop")]
    pub loop_word: Word,
    pub level_cap: Option<i64>,
    pub avoid: Option<Avoid>,
    pub moves: Vec<Move>,
}

impl DiagramCertificate {
    pub fn total_cells(&self) -> usize {
        self.moves.iter().map(|m| m.cells).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<DiagramCertificate> {
        let c: DiagramCertificate = serde_json::from_str(s)?;
        if c.schema != DIAGRAM_SCHEMA {
            return Err(Error::IllFormed(format!("unsupported diagram schema `{}`", c.schema)));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub moves: usize,
    pub cells: usize,
    pub vertices_checked: usize,
    pub min_level: i64,
    pub max_level: i64,
}

struct Rules<'a> {
    p: &'a HnnPresentation,
    base: Word,
    cap: i64,
    avoid: Option<Avoid>,
    relators: Vec<Word>,
}

impl<'a> Rules<'a> {
    fn new(p: &'a HnnPresentation, base: &Word, cap: Option<i64>, avoid: Option<Avoid>) -> Rules<'a> {
        Rules {
            p,
            base: base.clone(),
            cap: cap.unwrap_or(i64::MAX),
            avoid,
            relators: p.all_relators().iter().map(Word::cyclic_reduce).collect(),
        }
    }

    fn is_base(&self, ls: &[Letter]) -> bool {
        ls.iter().all(|l| self.p.alphabet().contains(l.generator()))
    }

    /// Checks every vertex of the (possibly unreduced) path `ls` read from the base.
    fn check_path(&self, ls: &[Letter], report: &mut ReplayReport) -> std::result::Result<(), String> {
        let mut vx = self.base.clone();
        for i in 0..=ls.len() {
            let lv = level(&vx, self.p.stable());
            if lv > self.cap {
                return Err(format!("vertex `{vx}` at level {lv} exceeds the cap {}", self.cap));
            }
            if let Some(a) = self.avoid {
                match in_D(&vx, a.n, a.m, self.p) {
                    Truth::False => {}
                    Truth::True => return Err(format!("vertex `{vx}` lies in D({}, {})", a.n, a.m)),
                    Truth::Unknown => return Err(format!("could not decide whether `{vx}` lies in D({}, {})", a.n, a.m)),
                }
            }
            report.vertices_checked += 1;
            report.min_level = report.min_level.min(lv);
            report.max_level = report.max_level.max(lv);
            if i < ls.len() {
                vx.push(ls[i]);
            }
        }
        Ok(())
    }

    /// Applies one move to `w`, returning the new reduced loop label.
    fn step(&self, w: &Word, mv: &Move, report: &mut ReplayReport) -> std::result::Result<Word, String> {
        let ls = w.letters();
        let (pos, len, replacement, cells) = match &mv.op {
            MoveOp::RelatorCell { pos, relator, rotation, inverse, piece_len } => {
                let r = self.relators.get(*relator).ok_or_else(|| format!("no relator {relator}"))?;
                if r.is_empty() || *rotation >= r.len() {
                    return Err(format!("bad rotation {rotation} of relator {relator}"));
                }
                let cell = if *inverse { r.inverse() } else { r.clone() }.rotate(*rotation);
                if *piece_len == 0 || *piece_len > cell.len() {
                    return Err(format!("bad piece length {piece_len}"));
                }
                let end = pos.checked_add(*piece_len).filter(|&e| e <= ls.len()).ok_or("piece runs past the loop")?;
                if ls[*pos..end] != cell.letters()[..*piece_len] {
                    return Err(format!("piece of relator {relator} does not match the loop at {pos}"));
                }
                (*pos, *piece_len, cell.slice(*piece_len, cell.len()).inverse(), 1)
            }
            MoveOp::SlideUp { pos, len } => {
                let end = pos.checked_add(*len).filter(|&e| e <= ls.len() && *len > 0).ok_or("bad slide range")?;
                if !self.is_base(&ls[*pos..end]) {
                    return Err("slide-up subword is not a base word".into());
                }
                let u = w.slice(*pos, end);
                (*pos, *len, self.p.t().mul(&self.p.phi().image(&u)).mul(&self.p.t().inverse()), *len)
            }
            MoveOp::SlideDown { pos, len, preimage } => {
                let end = pos.checked_add(*len).filter(|&e| e <= ls.len() && *len > 0).ok_or("bad slide range")?;
                if !self.is_base(&ls[*pos..end]) || !self.is_base(preimage.letters()) || preimage.is_empty() {
                    return Err("slide-down words are not base words".into());
                }
                if self.p.phi().image(preimage) != w.slice(*pos, end) {
                    return Err(format!("phi(`{preimage}`) does not spell the subword at {pos}"));
                }
                (*pos, *len, self.p.t().inverse().mul(preimage).mul(&self.p.t()), preimage.len())
            }
        };
        let at = level(&self.base, self.p.stable()) + level(&w.prefix(pos), self.p.stable());
        if at != mv.level {
            return Err(format!("level annotation {} but the move acts at level {at}", mv.level));
        }
        if cells != mv.cells {
            return Err(format!("cell count {} but the move fills {cells} cells", mv.cells));
        }
        let mut raw: Vec<Letter> = ls[..pos].to_vec();
        raw.extend_from_slice(replacement.letters());
        raw.extend_from_slice(&ls[pos + len..]);
        self.check_path(&raw, report)?;
        report.moves += 1;
        report.cells += cells;
        Ok(Word::reduce(raw))
    }
}

/// Replays a certificate from scratch.
pub fn replay(cert: &DiagramCertificate, p: &HnnPresentation) -> Result<ReplayReport> {
    if cert.schema != DIAGRAM_SCHEMA {
        return Err(Error::Verification(format!("unsupported diagram schema `{}`", cert.schema)));
    }
    p.check_word(&cert.base)?;
    p.check_word(&cert.loop_word)?;
    let rules = Rules::new(p, &cert.base, cert.level_cap, cert.avoid);
    let lv = level(&cert.base, p.stable());
    let mut report = ReplayReport { min_level: lv, max_level: lv, ..Default::default() };
    rules
        .check_path(cert.loop_word.letters(), &mut report)
        .map_err(|e| Error::Verification(format!("initial loop: {e}")))?;
    let mut w = cert.loop_word.clone();
    for (i, mv) in cert.moves.iter().enumerate() {
        w = rules.step(&w, mv, &mut report).map_err(|e| Error::Verification(format!("move {i}: {e}")))?;
    }
    if !w.is_empty() {
        return Err(Error::Verification(format!("moves end at the nonempty loop `{w}`")));
    }
    Ok(report)
}

/// Result of a trivialization attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trivialization {
    Certified(DiagramCertificate, ReplayReport),
    /// The loop does not close up in the group, so no diagram exists.
    Nontrivial(String),
    Unknown(String),
}

impl Trivialization {
    pub fn certificate(&self) -> Option<&DiagramCertificate> {
        match self {
            Trivialization::Certified(c, _) => Some(c),
            _ => None,
        }
    }
}

struct Builder<'a> {
    rules: Rules<'a>,
    w: Word,
    moves: Vec<Move>,
    report: ReplayReport,
    max_len: usize,
}

impl<'a> Builder<'a> {
    fn level_at(&self, pos: usize) -> i64 {
        level(&self.rules.base, self.rules.p.stable()) + level(&self.w.prefix(pos), self.rules.p.stable())
    }

    fn try_move(&mut self, op: MoveOp, cells: usize, pos: usize) -> std::result::Result<(), String> {
        let mv = Move { op, level: self.level_at(pos), cells };
        let next = self.rules.step(&self.w, &mv, &mut self.report)?;
        if next.len() > self.max_len {
            return Err(format!("loop grew past {} letters", self.max_len));
        }
        self.w = next;
        self.moves.push(mv);
        Ok(())
    }

    /// The first maximal base run sitting below `target`, as `(pos, len)`.
    fn low_run(&self, target: i64) -> Option<(usize, usize)> {
        let ls = self.w.letters();
        let t = self.rules.p.stable();
        let mut lv = level(&self.rules.base, t);
        let mut i = 0;
        while i < ls.len() {
            if ls[i].generator() == t {
                lv += ls[i].sign();
                i += 1;
                continue;
            }
            let start = i;
            while i < ls.len() && ls[i].generator() != t {
                i += 1;
            }
            if lv < target {
                return Some((start, i - start));
            }
        }
        None
    }

    /// Splits the loop as `t^j·w·t^-j` for some `j` of either sign; returns `|j|` and `w`.
    fn split(&self) -> Option<(usize, Word)> {
        let ls = self.w.letters();
        let t = self.rules.p.stable();
        let Some(first) = ls.first() else { return Some((0, Word::empty())) };
        let lead = if first.generator() == t { *first } else { return self.rules.is_base(ls).then(|| (0, self.w.clone())) };
        let j = ls.iter().take_while(|&&l| l == lead).count();
        let k = ls.iter().rev().take_while(|&&l| l == lead.inverse()).count();
        if j != k || j + k > ls.len() {
            return None;
        }
        let mid = self.w.slice(j, ls.len() - k);
        self.rules.is_base(mid.letters()).then_some((j, mid))
    }

    fn finish(self, loop_word: &Word) -> Result<Trivialization> {
        let cert = DiagramCertificate {
            schema: DIAGRAM_SCHEMA.into(),
            base: self.rules.base.clone(),
            loop_word: loop_word.clone(),
            level_cap: (self.rules.cap != i64::MAX).then_some(self.rules.cap),
            avoid: self.rules.avoid,
            moves: self.moves,
        };
        let report = replay(&cert, self.rules.p)?;
        Ok(Trivialization::Certified(cert, report))
    }
}

fn trivialize_core(
    base: &Word,
    loop_word: &Word,
    cap: Option<i64>,
    avoid: Option<Avoid>,
    target: Option<i64>,
    budget: &SearchBudget,
    p: &HnnPresentation,
) -> Result<Trivialization> {
    p.check_word(base)?;
    p.check_word(loop_word)?;
    if level(loop_word, p.stable()) != 0 {
        return Err(Error::Contract(format!("loop `{loop_word}` does not return to its level")));
    }
    let rules = Rules::new(p, base, cap, avoid);
    let lv0 = level(base, p.stable());
    let mut report = ReplayReport { min_level: lv0, max_level: lv0, ..Default::default() };
    rules.check_path(loop_word.letters(), &mut report).map_err(|e| Error::Contract(format!("loop violates the constraints: {e}")))?;
    let top = report.max_level.max(target.unwrap_or(i64::MIN));
    let mut b = Builder { rules, w: loop_word.clone(), moves: Vec::new(), report, max_len: budget.max_word_len.saturating_mul(4) };

    while let Some((pos, len)) = b.low_run(top) {
        if let Err(e) = b.try_move(MoveOp::SlideUp { pos, len }, len, pos) {
            return Ok(Trivialization::Unknown(format!("sliding to level {top} failed: {e}")));
        }
    }
    let Some((mut j, mut w)) = b.split() else {
        return Ok(Trivialization::Unknown(format!("loop `{}` did not settle at level {top}", b.w)));
    };
    if w.is_empty() {
        return b.finish(loop_word);
    }
    let verdict = p.base_identity(&w);
    if verdict.value == Verdict::Nontrivial && p.oracle().capability().exact {
        return Ok(Trivialization::Nontrivial(format!(
            "the loop is homotopic to a conjugate of `{w}`, which is nontrivial in the base group"
        )));
    }

    // Descend while the current base word is a literal image.
    let mut descents = 0;
    while let Some(u) = p.image_graph().preimage(&w) {
        let len = w.len();
        let snapshot = (b.w.clone(), b.moves.len(), b.report.clone());
        match b.try_move(MoveOp::SlideDown { pos: j, len, preimage: u.clone() }, u.len(), j) {
            Ok(()) => match b.split() {
                Some((j2, w2)) => {
                    j = j2;
                    w = w2;
                    descents += 1;
                }
                None => {
                    (b.w, b.report) = (snapshot.0, snapshot.2);
                    b.moves.truncate(snapshot.1);
                    break;
                }
            },
            Err(_) => break,
        }
    }

    let mut cells_idx = Vec::new();
    let mut cells = Vec::new();
    for (i, r) in p.relators().words().iter().enumerate() {
        let c = r.cyclic_reduce();
        if !c.is_empty() {
            cells_idx.push(i);
            cells.push(c);
        }
    }
    let search = RelatorSearch::new(cells);
    let mut last = String::new();
    for _ in 0..=descents + budget.i_max {
        match search.search(&w, budget) {
            Ok(apps) => {
                for (app, _) in apps {
                    let op = MoveOp::RelatorCell {
                        pos: j + app.pos,
                        relator: cells_idx[app.relator],
                        rotation: app.rotation,
                        inverse: app.inverse,
                        piece_len: app.piece_len,
                    };
                    if let Err(e) = b.try_move(op, 1, j + app.pos) {
                        return Ok(Trivialization::Unknown(format!("relator cell rejected: {e}")));
                    }
                }
                return b.finish(loop_word);
            }
            Err(stats) => last = format!("no filling of `{w}` at level {}: {stats}", b.level_at(j)),
        }
        let len = w.len();
        if let Err(e) = b.try_move(MoveOp::SlideUp { pos: j, len }, len, j) {
            return Ok(Trivialization::Unknown(format!("{last}; cannot ascend: {e}")));
        }
        match b.split() {
            Some((j2, w2)) => {
                j = j2;
                w = w2;
            }
            None => return Ok(Trivialization::Unknown(last)),
        }
        if w.is_empty() {
            return b.finish(loop_word);
        }
    }
    Ok(Trivialization::Unknown(last))
}

/// Null-homotopy of `loop_word` read at `base`, never passing above `level_cap`.
pub fn trivialize_bounded(
    base: &Word,
    loop_word: &Word,
    level_cap: i64,
    budget: &SearchBudget,
    p: &HnnPresentation,
) -> Result<Trivialization> {
    trivialize_core(base, loop_word, Some(level_cap), None, None, budget, p)
}

/// Null-homotopy of a loop avoiding `D(N, M)` inside the complement of `D(N, M)`.
///
/// Loops in other components are slid up to level `N − M − 1` before filling;
/// loops in the special component are slid to their own top level.
pub fn fp_complement_trivialize(
    base: &Word,
    loop_word: &Word,
    big_n: usize,
    big_m: usize,
    budget: &SearchBudget,
    p: &HnnPresentation,
) -> Result<Trivialization> {
    p.check_word(base)?;
    p.check_word(loop_word)?;
    let mut vx = base.clone();
    let mut labels = Vec::with_capacity(loop_word.len() + 1);
    for i in 0..=loop_word.len() {
        labels.push(classify(&vx, big_n, big_m, p));
        if i < loop_word.len() {
            vx.push(loop_word.letters()[i]);
        }
    }
    if let Some(i) = labels.iter().position(|&l| l == RegionLabel::InD) {
        return Err(Error::Contract(format!("loop vertex {i} lies in D({big_n}, {big_m})")));
    }
    if labels.contains(&RegionLabel::Unknown) {
        return Ok(Trivialization::Unknown("a loop vertex could not be classified".into()));
    }
    let avoid = Some(Avoid { n: big_n, m: big_m });
    match labels[0] {
        RegionLabel::OtherComponent => {
            let top = big_n as i64 - big_m as i64 - 1;
            trivialize_core(base, loop_word, Some(top), avoid, Some(top), budget, p)
        }
        _ => trivialize_core(base, loop_word, None, avoid, None, budget, p),
    }
}
