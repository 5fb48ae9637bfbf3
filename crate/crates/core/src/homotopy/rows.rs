//! Row-structured homotopies built from conjugation cells.
//!
//! Row `k` is an edge path at level `base + k` starting at `v·tᵏ`; the cells
//! between rows `k` and `k + 1` are one conjugation cell per letter of row `k`,
//! so row `k + 1` is `φ(row k)` after folding backtracks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnn::{equal_in_G, level, HnnPresentation, Truth};
use crate::word::{Letter, Word};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomotopyKind {
    Push,
    String,
    Corner,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Conjugation,
    /// Cell for a letter with empty `φ`-image: boundary `y·t·t⁻¹`.
    Bigon,
}

/// A conjugation cell hanging off letter `edge` of a row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HCell {
    pub kind: CellKind,
    /// Start vertex of the row edge.
    pub anchor: Word,
    /// The row edge, a single base letter.
    pub edge: Word,
    /// Boundary read from the anchor, `y·t·φ(y)⁻¹·t⁻¹`, without free reduction.
    pub boundary: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub base: Word,
    pub label: Word,
    /// Cells between this row and the next; empty for the last row.
    pub cells: Vec<HCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellularHomotopy {
    pub kind: HomotopyKind,
    pub rows: Vec<Row>,
    pub left_rail: Word,
    pub right_rail: Word,
    pub top: Word,
    pub bottom: Word,
    /// Corner homotopies: the slides bringing every base edge up to the top level.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stage1: Vec<CellularHomotopy>,
}

impl CellularHomotopy {
    pub fn cell_counts(&self) -> Vec<usize> {
        self.rows.iter().take(self.rows.len().saturating_sub(1)).map(|r| r.cells.len()).collect()
    }

    pub fn row_labels(&self) -> Vec<Word> {
        self.rows.iter().map(|r| r.label.clone()).collect()
    }

    /// Every vertex of every cell and row, stage-1 slides included.
    pub fn vertices(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for row in &self.rows {
            let mut vx = row.base.clone();
            out.push(vx.clone());
            for &l in row.label.letters() {
                vx.push(l);
                out.push(vx.clone());
            }
            for cell in &row.cells {
                let mut vx = cell.anchor.clone();
                for l in cell.boundary.chars().filter_map(Letter::from_char) {
                    vx.push(l);
                    out.push(vx.clone());
                }
            }
        }
        for h in &self.stage1 {
            out.extend(h.vertices());
        }
        out
    }

    pub fn total_cells(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).sum::<usize>() + self.stage1.iter().map(|h| h.total_cells()).sum::<usize>()
    }
}

fn letters_to_string(ls: impl IntoIterator<Item = Letter>) -> String {
    ls.into_iter().map(Letter::as_char).collect()
}

fn cell_for(p: &HnnPresentation, anchor: Word, y: Letter) -> HCell {
    let img = p.phi().image(&Word::letter(y));
    let t = Letter::new(p.stable(), false);
    let mut path = vec![y, t];
    path.extend(img.inverse().letters().iter().copied());
    path.push(t.inverse());
    HCell {
        kind: if img.is_empty() { CellKind::Bigon } else { CellKind::Conjugation },
        anchor,
        edge: Word::letter(y),
        boundary: letters_to_string(path),
    }
}

fn build_rows(v: &Word, label: &Word, k: usize, p: &HnnPresentation, kind: HomotopyKind) -> CellularHomotopy {
    let mut rows = Vec::with_capacity(k + 1);
    let mut cur = label.clone();
    for i in 0..=k {
        let base = v.mul(&p.t_pow(i as i64));
        let cells = if i < k {
            cur.letters()
                .iter()
                .enumerate()
                .map(|(j, &y)| cell_for(p, base.mul(&cur.prefix(j)), y))
                .collect()
        } else {
            Vec::new()
        };
        let next = p.phi().image(&cur);
        rows.push(Row { base, label: cur, cells });
        cur = next;
    }
    CellularHomotopy {
        kind,
        left_rail: p.t_pow(k as i64),
        right_rail: p.t_pow(k as i64),
        top: label.clone(),
        bottom: rows.last().map(|r| r.label.clone()).unwrap_or_default(),
        rows,
        stage1: Vec::new(),
    }
}

fn check_base_path(s: &Word, p: &HnnPresentation) -> Result<()> {
    if let Some(l) = s.letters().iter().find(|l| !p.alphabet().contains(l.generator())) {
        return Err(Error::Contract(format!("edge `{}` is not labelled by a base generator", l.as_char())));
    }
    Ok(())
}

/// Pushes the edge `a` at `v` up through `k` rows of conjugation cells.
pub fn build_push(v: &Word, a: Letter, k: usize, p: &HnnPresentation) -> Result<CellularHomotopy> {
    p.check_word(v)?;
    if k == 0 {
        return Err(Error::Contract("a push needs at least one row".into()));
    }
    let edge = Word::letter(a);
    check_base_path(&edge, p)?;
    Ok(build_rows(v, &edge, k, p, HomotopyKind::Push))
}

/// Side-by-side pushes of every edge of the base path `s` starting at `v`.
pub fn build_string(v: &Word, s: &Word, k: usize, p: &HnnPresentation) -> Result<CellularHomotopy> {
    p.check_word(v)?;
    if s.is_empty() {
        return Err(Error::Contract("string homotopy needs a nonempty path".into()));
    }
    if k == 0 {
        return Err(Error::Contract("a string homotopy needs at least one row".into()));
    }
    check_base_path(s, p)?;
    Ok(build_rows(v, s, k, p, HomotopyKind::String))
}

/// Slides every base edge of `s` (a path from `v` whose levels stay in
/// `interval`) up to the interval's top, then pushes the result `k` rows.
pub fn build_corner(v: &Word, s: &Word, interval: (i64, i64), k: usize, p: &HnnPresentation) -> Result<CellularHomotopy> {
    p.check_word(v)?;
    p.check_word(s)?;
    let (lo, hi) = interval;
    let t = p.stable();
    let mut lv = level(v, t);
    let mut vertex = v.clone();
    let check = |l: i64, at: &Word| -> Result<()> {
        if l < lo || l > hi {
            return Err(Error::Contract(format!("path leaves the level interval [{lo}, {hi}] at `{at}` (level {l})")));
        }
        Ok(())
    };
    check(lv, &vertex)?;
    let mut stage1 = Vec::new();
    let mut slid = Word::empty();
    for &l in s.letters() {
        if l.generator() == t {
            lv += l.sign();
        } else {
            let rise = (hi - lv) as usize;
            if rise > 0 {
                stage1.push(build_rows(&vertex, &Word::letter(l), rise, p, HomotopyKind::Push));
            }
            slid = slid.mul(&p.phi().image_k(&Word::letter(l), rise));
        }
        vertex = vertex.mul(&Word::letter(l));
        check(lv, &vertex)?;
    }
    let top_start = v.mul(&p.t_pow(hi - level(v, t)));
    let mut h = if slid.is_empty() {
        CellularHomotopy {
            kind: HomotopyKind::Corner,
            rows: vec![Row { base: top_start, label: Word::empty(), cells: Vec::new() }],
            left_rail: Word::empty(),
            right_rail: Word::empty(),
            top: Word::empty(),
            bottom: Word::empty(),
            stage1: Vec::new(),
        }
    } else {
        build_rows(&top_start, &slid, k, p, HomotopyKind::Corner)
    };
    h.stage1 = stage1;
    Ok(h)
}

/// Verified level bounds of a homotopy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCertificate {
    pub base_level: i64,
    /// `[lo_k, hi_k]` for the cells between rows `k` and `k + 1`.
    pub rows: Vec<(i64, i64)>,
    pub cells_checked: usize,
    pub properness: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stage1: Vec<LevelCertificate>,
}

fn fail(msg: String) -> Error {
    Error::Verification(msg)
}

/// Recomputes every level from the vertex words and checks the row structure.
pub fn verify_levels(h: &CellularHomotopy, p: &HnnPresentation) -> Result<LevelCertificate> {
    let t = p.stable();
    let tw = p.t();
    let first = h.rows.first().ok_or_else(|| fail("homotopy has no rows".into()))?;
    let base_level = level(&first.base, t);
    let mut intervals = Vec::new();
    let mut cells_checked = 0;
    for (k, row) in h.rows.iter().enumerate() {
        let want = base_level + k as i64;
        if level(&row.base, t) != want {
            return Err(fail(format!("row {k}: base vertex `{}` has level {}, expected {want}", row.base, level(&row.base, t))));
        }
        if row.label.letters().iter().any(|l| l.generator() == t) {
            return Err(fail(format!("row {k}: label `{}` contains a t-edge", row.label)));
        }
        if k > 0 {
            let prev = &h.rows[k - 1];
            if row.base != prev.base.mul(&tw) {
                return Err(fail(format!("left rail broken between rows {} and {k}", k - 1)));
            }
            if h.kind != HomotopyKind::Corner || !h.rows[k - 1].cells.is_empty() {
                let expect = p.phi().image(&prev.label);
                if row.label != expect {
                    return Err(fail(format!("row {k}: label `{}` is not phi(row {}) = `{expect}`", row.label, k - 1)));
                }
            }
            let prev_end = prev.base.mul(&prev.label).mul(&tw);
            let end = row.base.mul(&row.label);
            if equal_in_G(&prev_end, &end, p) != Truth::True {
                return Err(fail(format!("right rail broken between rows {} and {k}", k - 1)));
            }
        }
        let last = k + 1 == h.rows.len();
        if last {
            if !row.cells.is_empty() {
                return Err(fail(format!("row {k}: last row carries cells")));
            }
            continue;
        }
        if row.cells.len() != row.label.len() {
            return Err(fail(format!("row {k}: {} cells for a label of length {}", row.cells.len(), row.label.len())));
        }
        let (lo, hi) = (want, want + 1);
        for (j, cell) in row.cells.iter().enumerate() {
            let name = format!("row {k} cell {j}");
            let y = row.label.letters()[j];
            if cell.edge != Word::letter(y) {
                return Err(fail(format!("{name}: edge `{}` does not match row letter `{}`", cell.edge, y.as_char())));
            }
            let expected_anchor = row.base.mul(&row.label.prefix(j));
            if cell.anchor != expected_anchor {
                return Err(fail(format!("{name}: anchor `{}` is not on row {k}", cell.anchor)));
            }
            let expected = cell_for(p, expected_anchor, y);
            if cell.boundary != expected.boundary || cell.kind != expected.kind {
                return Err(fail(format!("{name}: boundary `{}` is not a conjugation cell", cell.boundary)));
            }
            let mut vx = cell.anchor.clone();
            let mut min_level = level(&vx, t);
            for c in cell.boundary.chars() {
                let l = Letter::from_char(c).ok_or_else(|| fail(format!("{name}: bad letter `{c}`")))?;
                let lv = level(&vx, t);
                if lv < lo || lv > hi {
                    return Err(fail(format!("{name}: vertex `{vx}` at level {lv} outside [{lo}, {hi}]")));
                }
                min_level = min_level.min(lv);
                vx = vx.mul(&Word::letter(l));
            }
            if min_level != lo {
                return Err(fail(format!("{name}: lowest vertex at level {min_level}, expected {lo}")));
            }
            cells_checked += 1;
        }
        intervals.push((lo, hi));
    }
    let stage1 = h.stage1.iter().map(|s| verify_levels(s, p)).collect::<Result<Vec<_>>>()?;
    let rows_n = intervals.len();
    let properness = format!(
        "for every L in 0..={rows_n}, every cell meeting a level <= {base_level} + L lies in rows 0..=L"
    );
    Ok(LevelCertificate { base_level, rows: intervals, cells_checked, properness, stage1 })
}
