//! Comparison of a complex against transcribed differential tables.
//!
//! A table is a list of rows `src -> ±t₁ ±t₂ …` in cycle notation. Only the
//! listed rows are compared. When the signs disagree, the comparison looks for
//! one vector of per-cell flips `f` with `f(src) f(t) = table/computed` for
//! every listed term.

use std::collections::HashMap;

use serde::Serialize;

use super::ChainComplex;
use crate::involutions::{CellId, ParseError};

/// Oriented `G_1(ℝ⁵)` table.
pub const RP4_ORIENTED: &str = include_str!("../../fixtures/rp4_oriented.txt");
/// Oriented `G_2(ℝ⁴)` table.
pub const G2R4_ORIENTED: &str = include_str!("../../fixtures/g2r4_oriented.txt");

/// Bundled table for `(n, k)`, if any.
pub fn bundled(n: usize, k: usize) -> Option<&'static str> {
    match (n, k) {
        (5, 1) => Some(RP4_ORIENTED),
        (4, 2) => Some(G2R4_ORIENTED),
        _ => None,
    }
}

pub type GoldenRow = (CellId, Vec<(i64, CellId)>);

/// Parses a table; blank lines, `#` comments and `dim d` headers are skipped.
pub fn parse_table(text: &str, n: usize) -> Result<Vec<GoldenRow>, ParseError> {
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') || line.starts_with("dim ") {
            continue;
        }
        let (src, rhs) = line.split_once("->").ok_or(ParseError { pos: 0, msg: format!("missing '->' in '{}'", line) })?;
        let src = CellId::parse(src.trim(), n)?;
        let mut terms = Vec::new();
        for tok in rhs.split_whitespace() {
            if tok == "0" {
                continue;
            }
            let (sign, rest) = match tok.as_bytes()[0] {
                b'+' => (1, &tok[1..]),
                b'-' => (-1, &tok[1..]),
                _ => (1, tok),
            };
            let digits = rest.find('(').unwrap_or(0);
            let mag: i64 = if digits == 0 { 1 } else { rest[..digits].parse().map_err(|_| ParseError { pos: 0, msg: format!("bad coefficient '{}'", tok) })? };
            terms.push((sign * mag, CellId::parse(&rest[digits..], n)?));
        }
        rows.push((src, terms));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenReport {
    pub rows: usize,
    /// Rows whose set of targets or coefficient magnitudes differ.
    pub support_mismatches: Vec<String>,
    /// Sign relations that no flip vector can satisfy.
    pub conflicts: usize,
    /// Cells negated by the reconciling flip vector.
    pub flipped: Vec<String>,
    /// True when the table matched without flips.
    pub exact: bool,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.support_mismatches.is_empty() && self.conflicts == 0
    }
}

/// Every row of a complex, in the table representation.
pub fn rows_of(c: &ChainComplex) -> Vec<GoldenRow> {
    c.all_cells().filter(|x| x.dim() > 0).map(|x| (x.clone(), c.boundary_of(x))).collect()
}

/// Compares the listed rows of a table against the computed boundary.
pub fn compare(c: &ChainComplex, table: &[GoldenRow]) -> GoldenReport {
    compare_rows(&rows_of(c), table)
}

/// Compares the listed rows of a table against computed rows; a source
/// missing from `computed` counts as having zero boundary.
pub fn compare_rows(computed: &[GoldenRow], table: &[GoldenRow]) -> GoldenReport {
    let lookup: HashMap<&CellId, &Vec<(i64, CellId)>> = computed.iter().map(|(s, t)| (s, t)).collect();
    let mut support_mismatches = Vec::new();
    let mut relations: Vec<(CellId, CellId, i64)> = Vec::new();
    for (src, terms) in table {
        let mine: HashMap<CellId, i64> = lookup
            .get(src)
            .map(|row| row.iter().map(|(k, t)| (t.clone(), *k)).collect())
            .unwrap_or_default();
        let theirs: HashMap<&CellId, i64> = terms.iter().map(|(k, t)| (t, *k)).collect();
        let same_support = mine.len() == theirs.len()
            && theirs.iter().all(|(t, k)| mine.get(*t).is_some_and(|m| m.abs() == k.abs()));
        if !same_support {
            support_mismatches.push(src.to_string());
            continue;
        }
        for (t, k) in theirs {
            relations.push((src.clone(), t.clone(), k.signum() * mine[t].signum()));
        }
    }
    let exact = support_mismatches.is_empty() && relations.iter().all(|r| r.2 == 1);

    let mut adj: HashMap<&CellId, Vec<(&CellId, i64)>> = HashMap::new();
    for (a, b, r) in &relations {
        adj.entry(a).or_default().push((b, *r));
        adj.entry(b).or_default().push((a, *r));
    }
    let mut nodes: Vec<&CellId> = adj.keys().copied().collect();
    nodes.sort();
    let mut flip: HashMap<&CellId, i64> = HashMap::new();
    let mut conflicts = 0;
    for start in nodes {
        if flip.contains_key(start) {
            continue;
        }
        flip.insert(start, 1);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(y, r) in &adj[x] {
                let want = flip[x] * r;
                match flip.get(y) {
                    None => {
                        flip.insert(y, want);
                        stack.push(y);
                    }
                    Some(&f) if f != want => conflicts += 1,
                    _ => {}
                }
            }
        }
    }
    // Each inconsistent relation is seen from both ends.
    conflicts /= 2;
    let mut flipped: Vec<&CellId> = flip.iter().filter(|(_, &f)| f < 0).map(|(c, _)| *c).collect();
    flipped.sort();
    GoldenReport {
        rows: table.len(),
        support_mismatches,
        conflicts,
        flipped: if exact { Vec::new() } else { flipped.into_iter().map(ToString::to_string).collect() },
        exact,
    }
}
