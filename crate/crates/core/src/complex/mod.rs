//! Cellular chain complexes of the Bruhat decompositions and their homology.

pub mod golden;
pub mod homology;
pub mod rp;
pub mod snf;

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::covering::signed_covers;
use crate::incidence::{IncidenceError, IncidenceRecord};
use crate::involutions::{enumerate_cells, CellId, Sign, SignedInvolution};

pub use homology::{homology, Coefficients, HomologyGroup, HomologyResult};
pub use snf::{invariant_factors, rank_mod2, smith_normal_form, IntMatrix, SnfInteger};

/// Which space the complex models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `G_k(ℝⁿ)`.
    Plain,
    /// `G_k^or(ℝⁿ)`, cells `w̃^±`.
    Oriented,
    /// `G_k(ℝ^{2k})` modulo `V ↦ V^⊥` (experimental).
    Projective,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Plain, Variant::Oriented, Variant::Projective];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Oriented => "oriented",
            Variant::Projective => "projective",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown variant '{}'", s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("projective variant needs n = 2k, got n = {n}, k = {k}")]
    BadVariant { n: usize, k: usize },
    #[error("k = {k} exceeds n = {n}")]
    BadRank { n: usize, k: usize },
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error("boundary squares to a nonzero map ({0} nonzero entries)")]
    ComplexInvalid(usize),
}

/// Integer chain complex. `boundary(d)` has columns indexed by the `d`-cells and
/// rows by the `(d−1)`-cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex {
    pub variant: Variant,
    pub n: usize,
    pub k: usize,
    cells: Vec<Vec<CellId>>,
    boundaries: Vec<IntMatrix>,
    index: HashMap<CellId, (usize, usize)>,
}

impl ChainComplex {
    fn assemble(variant: Variant, n: usize, k: usize, cells: Vec<Vec<CellId>>, rows: &[(CellId, CellId, i64)]) -> Self {
        let index: HashMap<CellId, (usize, usize)> = cells
            .iter()
            .enumerate()
            .flat_map(|(d, list)| list.iter().enumerate().map(move |(i, c)| (c.clone(), (d, i))))
            .collect();
        let mut boundaries: Vec<IntMatrix> = (0..cells.len())
            .map(|d| {
                let below = if d == 0 { 0 } else { cells[d - 1].len() };
                IntMatrix::zeros(below, cells[d].len())
            })
            .collect();
        for (src, dst, coef) in rows {
            let (d, col) = index[src];
            let (d2, row) = index[dst];
            assert_eq!(d2 + 1, d, "boundary term {} -> {} changes dimension by more than one", src, dst);
            boundaries[d][(row, col)] += coef;
        }
        ChainComplex { variant, n, k, cells, boundaries, index }
    }

    /// Highest dimension with cells, or `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn cells(&self, d: usize) -> &[CellId] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn all_cells(&self) -> impl Iterator<Item = &CellId> {
        self.cells.iter().flatten()
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// `∂_d: C_d → C_{d−1}`; an empty matrix outside the range of dimensions.
    pub fn boundary(&self, d: usize) -> IntMatrix {
        match self.boundaries.get(d) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.cells(d.saturating_sub(1)).len(), self.cells(d).len()),
        }
    }

    /// Dimension and position of a cell.
    pub fn position(&self, cell: &CellId) -> Option<(usize, usize)> {
        self.index.get(cell).copied()
    }

    /// Nonzero terms of `∂(cell)`, in cell order.
    pub fn boundary_of(&self, cell: &CellId) -> Vec<(i64, CellId)> {
        let Some((d, col)) = self.position(cell) else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let m = &self.boundaries[d];
        (0..m.nrows())
            .filter(|&r| m[(r, col)] != 0)
            .map(|r| (m[(r, col)], self.cells[d - 1][r].clone()))
            .collect()
    }

    /// Copy with one boundary entry replaced; used for fault injection.
    pub fn with_boundary_entry(&self, d: usize, row: usize, col: usize, value: i64) -> Self {
        let mut c = self.clone();
        c.boundaries[d][(row, col)] = value;
        c
    }
}

fn oriented_cells(list: &[SignedInvolution]) -> Vec<CellId> {
    list.iter()
        .flat_map(|w| [Sign::Plus, Sign::Minus].map(|o| CellId::oriented(w.clone(), o)))
        .collect()
}

fn group_by_dim(mut cells: Vec<CellId>) -> Vec<Vec<CellId>> {
    cells.sort();
    let mut out: Vec<Vec<CellId>> = Vec::new();
    for c in cells {
        let d = c.dim();
        while out.len() <= d {
            out.push(Vec::new());
        }
        out[d].push(c);
    }
    out
}

/// Orbit representative under complement: the one with the smaller cycle notation.
pub fn projective_rep(w: &SignedInvolution) -> SignedInvolution {
    let c = w.complement();
    if c.to_string() < w.to_string() {
        c
    } else {
        w.clone()
    }
}

/// Incidence records of every covering pair in `G_k(ℝⁿ)`.
pub fn incidence_records(n: usize, k: usize) -> Result<Vec<IncidenceRecord>, IncidenceError> {
    let cells = enumerate_cells(n, k);
    let covers: Vec<_> = cells.iter().flat_map(signed_covers).collect();
    let workers = std::thread::available_parallelism().map_or(1, |p| p.get()).min(8);
    let chunk = covers.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = covers
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(IncidenceRecord::new).collect::<Result<Vec<_>, _>>()))
            .collect();
        let mut out = Vec::with_capacity(covers.len());
        for h in handles {
            out.extend(h.join().expect("incidence worker panicked")?);
        }
        Ok(out)
    })
}

/// Builds the cellular chain complex.
pub fn build_complex(n: usize, k: usize, variant: Variant) -> Result<ChainComplex, ComplexError> {
    if k > n {
        return Err(ComplexError::BadRank { n, k });
    }
    if variant == Variant::Projective && n != 2 * k {
        return Err(ComplexError::BadVariant { n, k });
    }
    let invols = enumerate_cells(n, k);
    let records = incidence_records(n, k)?;
    let (cells, terms): (Vec<CellId>, Vec<(CellId, CellId, i64)>) = match variant {
        Variant::Oriented => {
            let terms = records
                .iter()
                .flat_map(|r| {
                    [Sign::Plus, Sign::Minus].map(|e| {
                        let o = if r.orid < 0 { -e } else { e };
                        (
                            CellId::oriented(r.cover.upper.clone(), e),
                            CellId::oriented(r.cover.lower.clone(), o),
                            r.incidence as i64,
                        )
                    })
                })
                .collect();
            (oriented_cells(&invols), terms)
        }
        Variant::Plain => {
            let terms = records
                .iter()
                .map(|r| {
                    (
                        CellId::plain(r.cover.upper.clone()),
                        CellId::plain(r.cover.lower.clone()),
                        r.incidence as i64,
                    )
                })
                .collect();
            (invols.into_iter().map(CellId::plain).collect(), terms)
        }
        Variant::Projective => {
            let terms = records
                .iter()
                .filter(|r| projective_rep(&r.cover.upper) == r.cover.upper)
                .map(|r| {
                    (
                        CellId::plain(r.cover.upper.clone()),
                        CellId::plain(projective_rep(&r.cover.lower)),
                        r.incidence as i64,
                    )
                })
                .collect();
            let reps = invols
                .into_iter()
                .filter(|w| projective_rep(w) == *w)
                .map(CellId::plain)
                .collect();
            (reps, terms)
        }
    };
    Ok(ChainComplex::assemble(variant, n, k, group_by_dim(cells), &terms))
}

/// One nonzero entry of `∂_{d−1} ∂_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DSquaredViolation {
    pub dim: usize,
    pub source: String,
    pub target: String,
    pub value: i64,
}

/// Nonzero entries of `∂∘∂`; empty when the complex is valid.
pub fn verify_d_squared(c: &ChainComplex) -> Vec<DSquaredViolation> {
    let mut out = Vec::new();
    let Some(top) = c.top_dim() else {
        return out;
    };
    for d in 2..=top {
        let prod = c.boundary(d - 1) * c.boundary(d);
        for col in 0..prod.ncols() {
            for r in 0..prod.nrows() {
                let value = prod[(r, col)];
                if value != 0 {
                    out.push(DSquaredViolation {
                        dim: d,
                        source: c.cells(d)[col].to_string(),
                        target: c.cells(d - 2)[r].to_string(),
                        value,
                    });
                }
            }
        }
    }
    out
}

/// Alternating sum of cell counts.
pub fn euler_characteristic(c: &ChainComplex) -> i64 {
    c.cell_counts()
        .iter()
        .enumerate()
        .map(|(d, &m)| if d % 2 == 0 { m as i64 } else { -(m as i64) })
        .sum()
}

fn term_text(coef: i64, cell: &CellId) -> String {
    match coef {
        1 => format!("+{}", cell),
        -1 => format!("-{}", cell),
        c if c > 0 => format!("+{}{}", c, cell),
        c => format!("{}{}", c, cell),
    }
}

/// Rows `cell -> signed sum`, dimension descending. Rows with zero boundary read `0`.
pub fn format_tables(c: &ChainComplex) -> String {
    let mut out = format!("# {} complex of G_{}(R^{})\n", c.variant, c.k, c.n);
    let Some(top) = c.top_dim() else {
        return out;
    };
    for d in (1..=top).rev() {
        let _ = writeln!(out, "\ndim {}", d);
        for cell in c.cells(d) {
            let terms: Vec<String> = c.boundary_of(cell).iter().map(|(k, t)| term_text(*k, t)).collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" ") };
            let _ = writeln!(out, "{} -> {}", cell, rhs);
        }
    }
    out
}

#[derive(Serialize)]
struct JsonCell {
    cycles: String,
    signs: Vec<i32>,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    orientation: Option<i32>,
}

#[derive(Serialize)]
struct JsonTerm {
    coef: i64,
    target: String,
}

#[derive(Serialize)]
struct JsonRow {
    cell: String,
    terms: Vec<JsonTerm>,
}

#[derive(Serialize)]
struct JsonBoundary {
    dim: usize,
    rows: Vec<JsonRow>,
}

#[derive(Serialize)]
struct JsonComplex {
    variant: Variant,
    n: usize,
    k: usize,
    cells: Vec<JsonCell>,
    boundaries: Vec<JsonBoundary>,
}

/// JSON array entry for one cell: `{cycles, signs, dim}` plus the orientation if any.
pub fn cell_json(cell: &CellId) -> serde_json::Value {
    serde_json::to_value(json_cell(cell)).expect("cell serializes")
}

fn json_cell(cell: &CellId) -> JsonCell {
    JsonCell {
        cycles: cell.involution.to_string(),
        signs: cell.involution.signs().iter().map(|s| s.to_i32()).collect(),
        dim: cell.dim(),
        orientation: cell.orientation.map(Sign::to_i32),
    }
}

/// The complex as JSON bytes.
pub fn export_json(c: &ChainComplex) -> Vec<u8> {
    let top = c.top_dim().unwrap_or(0);
    let doc = JsonComplex {
        variant: c.variant,
        n: c.n,
        k: c.k,
        cells: c.all_cells().map(json_cell).collect(),
        boundaries: (1..=top)
            .rev()
            .filter(|&d| d < c.cells.len())
            .map(|d| JsonBoundary {
                dim: d,
                rows: c
                    .cells(d)
                    .iter()
                    .map(|cell| JsonRow {
                        cell: cell.to_string(),
                        terms: c
                            .boundary_of(cell)
                            .into_iter()
                            .map(|(coef, t)| JsonTerm { coef, target: t.to_string() })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_vec_pretty(&doc).expect("complex serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rp4_top_row() {
        let c = build_complex(5, 1, Variant::Plain).unwrap();
        let src = CellId::parse("(15)", 5).unwrap();
        let got: Vec<String> = c.boundary_of(&src).iter().map(|(k, t)| term_text(*k, t)).collect();
        let mut want = vec!["-(14)", "-(~14)", "+(25)", "+(~25)"];
        let mut got_sorted = got.clone();
        got_sorted.sort();
        want.sort();
        assert_eq!(got_sorted, want);
    }

    #[test]
    fn g2r4_oriented_entry() {
        let c = build_complex(4, 2, Variant::Oriented).unwrap();
        let src = CellId::parse("(14)(23)^+", 4).unwrap();
        let dst = CellId::parse("(14)(~3)^-", 4).unwrap();
        let terms = c.boundary_of(&src);
        assert!(terms.contains(&(1, dst)), "{:?}", terms);
    }

    #[test]
    fn point_complex() {
        let c = build_complex(1, 0, Variant::Plain).unwrap();
        assert_eq!(c.cell_counts(), vec![1]);
        assert!(verify_d_squared(&c).is_empty());
        assert_eq!(euler_characteristic(&c), 1);
    }

    #[test]
    fn empty_complex_prints_header_only() {
        let c = build_complex(0, 0, Variant::Plain).unwrap();
        assert_eq!(format_tables(&c), "# plain complex of G_0(R^0)\n");
    }

    #[test]
    fn bad_variant() {
        assert_eq!(build_complex(5, 2, Variant::Projective), Err(ComplexError::BadVariant { n: 5, k: 2 }));
        assert_eq!(build_complex(2, 3, Variant::Plain), Err(ComplexError::BadRank { n: 2, k: 3 }));
    }

    #[test]
    fn fault_injection_is_flagged() {
        let c = build_complex(3, 1, Variant::Plain).unwrap();
        assert!(verify_d_squared(&c).is_empty());
        let col = 0;
        let m = c.boundary(2);
        let row = (0..m.nrows()).find(|&r| m[(r, col)] != 0).unwrap();
        let bad = c.with_boundary_entry(2, row, col, -m[(row, col)]);
        assert!(!verify_d_squared(&bad).is_empty());
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&build_complex(5, 1, Variant::Plain).unwrap()), 1);
        assert_eq!(euler_characteristic(&build_complex(4, 2, Variant::Plain).unwrap()), 2);
        assert_eq!(euler_characteristic(&build_complex(4, 1, Variant::Plain).unwrap()), 0);
    }

    #[test]
    fn json_shape() {
        let c = build_complex(2, 1, Variant::Oriented).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&export_json(&c)).unwrap();
        assert_eq!(v["variant"], "oriented");
        assert_eq!(v["cells"].as_array().unwrap().len(), 8);
        assert_eq!(v["boundaries"][0]["dim"], 1);
        assert!(v["cells"][0]["signs"].is_array());
    }
}
