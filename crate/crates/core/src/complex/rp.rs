//! The `k = 1` complexes: closed-form differential and the ad-hoc coproduct.
//!
//! A `k = 1` cell is a 2-cycle `(pq)`, or `(p̲q̲)` when its sign is negative, of
//! dimension `q − p`; the 0-cells are the negative fixed points `(p̲)`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::homology::Coefficients;
use super::ChainComplex;
use crate::involutions::{CellId, Sign, SignedInvolution, SignedPermutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RpError {
    #[error("{0} is not a cell of a k = 1 complex")]
    NotRank1Cell(String),
}

/// `(p, q, underlined)` with `p ≤ q` 0-based; `p = q` for 0-cells.
pub fn rank1_parts(cell: &CellId) -> Option<(usize, usize, bool)> {
    let w = &cell.involution;
    if w.k() != 1 {
        return None;
    }
    for i in 0..w.n() {
        let j = w.image(i);
        if j > i {
            return Some((i, j, w.sign(i).is_minus()));
        }
    }
    (0..w.n()).find(|&i| w.sign(i).is_minus()).map(|i| (i, i, true))
}

/// The cell `(pq)`, `(p̲q̲)` or `(p̲)` in ambient dimension `n`.
pub fn rank1_cell(n: usize, p: usize, q: usize, under: bool, orientation: Option<Sign>) -> CellId {
    let mut images: Vec<usize> = (0..n).collect();
    let mut signs = vec![Sign::Plus; n];
    images[p] = q;
    images[q] = p;
    if under {
        signs[p] = Sign::Minus;
        signs[q] = Sign::Minus;
    }
    let w = SignedInvolution::from_permutation(SignedPermutation::new(images, signs)).expect("valid k = 1 cell");
    CellId { involution: w, orientation }
}

/// A formal sum of cells.
pub type Chain = BTreeMap<CellId, i64>;

fn add(chain: &mut Chain, cell: CellId, coef: i64) {
    let e = chain.entry(cell).or_insert(0);
    *e += coef;
}

fn prune(mut c: Chain) -> Chain {
    c.retain(|_, v| *v != 0);
    c
}

/// Differential of a 1-dimensional or higher oriented cell as given by the closed formula,
/// with the stated special case for 1-cells `(p, p+1)`.
fn closed_form_row(n: usize, p: usize, q: usize, under: bool, e: Sign) -> Chain {
    let mut t = Chain::new();
    let cell = |a: usize, b: usize, u: bool, o: Sign| rank1_cell(n, a, b, u, Some(o));
    if q == p + 1 {
        if under {
            add(&mut t, cell(q, q, true, -e), -1);
            add(&mut t, cell(p, p, true, e), 1);
        } else {
            add(&mut t, cell(q, q, true, -e), 1);
            add(&mut t, cell(p, p, true, e), -1);
        }
    } else if under {
        add(&mut t, cell(p + 1, q, false, -e), 1);
        add(&mut t, cell(p + 1, q, true, e), 1);
        add(&mut t, cell(p, q - 1, false, e), 1);
        add(&mut t, cell(p, q - 1, true, e), 1);
    } else {
        add(&mut t, cell(p + 1, q, false, e), 1);
        add(&mut t, cell(p + 1, q, true, -e), 1);
        add(&mut t, cell(p, q - 1, false, e), -1);
        add(&mut t, cell(p, q - 1, true, e), -1);
    }
    prune(t)
}

/// Closed-form differential of the oriented `k = 1` complex, keyed by source cell.
pub fn rp_closed_form(n: usize) -> BTreeMap<CellId, Chain> {
    let mut out = BTreeMap::new();
    for p in 0..n {
        for q in (p + 1)..n {
            for under in [false, true] {
                for e in [Sign::Plus, Sign::Minus] {
                    out.insert(rank1_cell(n, p, q, under, Some(e)), closed_form_row(n, p, q, under, e));
                }
            }
        }
    }
    out
}

/// The closed form with orientations dropped (taken from the `^+` rows).
pub fn rp_closed_form_plain(n: usize) -> BTreeMap<CellId, Chain> {
    rp_closed_form(n)
        .into_iter()
        .filter(|(src, _)| src.orientation == Some(Sign::Plus))
        .map(|(src, row)| {
            let mut plain = Chain::new();
            for (t, c) in row {
                add(&mut plain, CellId::plain(t.involution), c);
            }
            (CellId::plain(src.involution), prune(plain))
        })
        .collect()
}

/// Source cells whose computed boundary differs from the closed formula.
/// Only plain and oriented `k = 1` complexes are compared.
pub fn closed_form_mismatches(c: &ChainComplex) -> Vec<CellId> {
    use super::Variant;
    let reference = match c.variant {
        Variant::Plain => rp_closed_form_plain(c.n),
        Variant::Oriented => rp_closed_form(c.n),
        Variant::Projective => return Vec::new(),
    };
    reference
        .into_iter()
        .filter(|(src, row)| {
            let mine: Chain = c.boundary_of(src).into_iter().map(|(k, t)| (t, k)).collect();
            &mine != row
        })
        .map(|(src, _)| src)
        .collect()
}

/// `Δ` of a `k = 1` cell as a list of tensor pairs (each with coefficient 1).
pub fn rp_coproduct(cell: &CellId) -> Result<Vec<(CellId, CellId)>, RpError> {
    let (p, q, under) = rank1_parts(cell).ok_or_else(|| RpError::NotRank1Cell(cell.to_string()))?;
    if p == q {
        return Err(RpError::NotRank1Cell(cell.to_string()));
    }
    let n = cell.involution.n();
    let o = cell.orientation;
    let c = |a, b, u| rank1_cell(n, a, b, u, o);
    Ok(((p + 1)..q)
        .flat_map(|r| {
            if under {
                [(c(p, r, true), c(r, q, false)), (c(p, r, false), c(r, q, true))]
            } else {
                [(c(p, r, false), c(r, q, false)), (c(p, r, true), c(r, q, true))]
            }
        })
        .collect())
}

type Tensor = BTreeMap<(CellId, CellId), i64>;

/// Cells `x` of dimension at least one with `(∂⊗1 + 1⊗∂)Δx ≠ Δ∂x`.
///
/// With `drop_vertices`, terms of `∂` landing on 0-cells are discarded first. With
/// [`Coefficients::Mod2`] both sides are compared modulo 2, and the sign rule
/// for `1⊗∂` is irrelevant; over the integers no Koszul sign is applied.
pub fn comultiplicativity_defects(c: &ChainComplex, coefficients: Coefficients, drop_vertices: bool) -> Vec<CellId> {
    let d = |x: &CellId| -> Vec<(i64, CellId)> {
        c.boundary_of(x)
            .into_iter()
            .filter(|(_, t)| !(drop_vertices && t.dim() == 0))
            .collect()
    };
    let reduce = |t: Tensor| -> Tensor {
        t.into_iter()
            .map(|(k, v)| (k, if coefficients == Coefficients::Mod2 { v.rem_euclid(2) } else { v }))
            .filter(|(_, v)| *v != 0)
            .collect()
    };
    let mut bad = Vec::new();
    for x in c.all_cells().filter(|x| x.dim() >= 1) {
        let Ok(pairs) = rp_coproduct(x) else {
            continue;
        };
        let mut lhs = Tensor::new();
        for (a, b) in &pairs {
            for (k, t) in d(a) {
                *lhs.entry((t, b.clone())).or_insert(0) += k;
            }
            for (k, t) in d(b) {
                *lhs.entry((a.clone(), t)).or_insert(0) += k;
            }
        }
        let mut rhs = Tensor::new();
        for (k, t) in d(x) {
            if let Ok(tp) = rp_coproduct(&t) {
                for pair in tp {
                    *rhs.entry(pair).or_insert(0) += k;
                }
            }
        }
        if reduce(lhs) != reduce(rhs) {
            bad.push(x.clone());
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, verify_d_squared, Variant};

    fn cell(s: &str, n: usize) -> CellId {
        CellId::parse(s, n).unwrap()
    }

    #[test]
    fn coproduct_examples() {
        let d = rp_coproduct(&cell("(13)^+", 3)).unwrap();
        assert_eq!(
            d,
            vec![
                (cell("(12)^+", 3), cell("(23)^+", 3)),
                (cell("(~12)^+", 3), cell("(~23)^+", 3)),
            ]
        );
        assert!(rp_coproduct(&cell("(12)^+", 3)).unwrap().is_empty());
        let d = rp_coproduct(&cell("(~13)^+", 3)).unwrap();
        assert_eq!(
            d,
            vec![
                (cell("(~12)^+", 3), cell("(23)^+", 3)),
                (cell("(12)^+", 3), cell("(~23)^+", 3)),
            ]
        );
        assert!(rp_coproduct(&cell("(12)(34)", 4)).is_err());
        assert!(rp_coproduct(&cell("(~2)", 3)).is_err());
    }

    #[test]
    fn closed_form_low_dimensions() {
        for n in 2..=3 {
            let c = build_complex(n, 1, Variant::Plain).unwrap();
            assert!(closed_form_mismatches(&c).is_empty(), "n = {}", n);
        }
    }

    #[test]
    fn closed_form_square_is_nonzero_from_rp3() {
        // The literal closed formula is not a differential once n ≥ 4.
        let n = 4;
        let f = rp_closed_form_plain(n);
        let apply = |chain: &Chain| {
            let mut out = Chain::new();
            for (x, k) in chain {
                for (y, m) in f.get(x).into_iter().flatten() {
                    add(&mut out, y.clone(), k * m);
                }
            }
            prune(out)
        };
        assert!(f.values().any(|row| !apply(row).is_empty()));
        let c = build_complex(n, 1, Variant::Plain).unwrap();
        assert!(verify_d_squared(&c).is_empty());
    }
}
