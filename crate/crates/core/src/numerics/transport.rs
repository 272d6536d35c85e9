//! Orientation transport along the cover paths.
//!
//! Tangent vectors at `g` are symmetric matrices `Y` with `gY + Yg = 0`,
//! stored as column-major vectors of length `n²`.

use nalgebra::{DMatrix, DVector};

use super::paths::path_matrix;
use super::{involution_matrix, lit, right_singular_pairs, to_f64, NumericsError, Real, Tolerances};
use crate::covering::SignedCover;
use crate::involutions::SignedInvolution;

pub(crate) fn unvec<T: Real>(v: &DVector<T>, n: usize) -> DMatrix<T> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

/// Strict upper part plus half the diagonal.
fn upper_half<T: Real>(c: &DMatrix<T>) -> DMatrix<T> {
    let half = lit::<T>(0.5);
    DMatrix::from_fn(c.nrows(), c.ncols(), |r, k| match r.cmp(&k) {
        std::cmp::Ordering::Less => c[(r, k)],
        std::cmp::Ordering::Equal => c[(r, k)] * half,
        std::cmp::Ordering::Greater => T::zero(),
    })
}

/// Canonical oriented frame of the cell of `w̃` at its centre, one column per
/// inversion class in canonical order: `R w̃ − w̃ R` with `R` the upper half of
/// `C = S_{a,b} + ε_a ε_b S_{w(a),w(b)}`.
pub fn canonical_frame<T: Real>(w: &SignedInvolution) -> DMatrix<T> {
    let n = w.n();
    let g: DMatrix<T> = involution_matrix(w);
    let basis = w.qinversions();
    let mut out = DMatrix::<T>::zeros(n * n, basis.len());
    for (col, class) in basis.classes().iter().enumerate() {
        let (a, b) = class.rep;
        let mut c = DMatrix::<T>::zeros(n, n);
        c[(a, b)] += T::one();
        c[(b, a)] += T::one();
        let s = lit::<T>((w.eps(a) * w.eps(b)) as f64);
        let (wa, wb) = (w.image(a), w.image(b));
        c[(wa, wb)] += s;
        c[(wb, wa)] += s;
        let r = upper_half(&c);
        let y = &r * &g - &g * &r;
        out.column_mut(col).copy_from_slice(y.as_slice());
    }
    out
}

/// Columns `e_i − w̃ e_i` spanning the (−1)-eigenspace, in index order.
pub fn eminus_basis<T: Real>(w: &SignedInvolution) -> DMatrix<T> {
    let n = w.n();
    let idx = w.eminus_indices();
    let mut out = DMatrix::<T>::zeros(n, idx.len());
    for (col, &i) in idx.iter().enumerate() {
        out[(i, col)] += T::one();
        out[(w.image(i), col)] -= lit::<T>(w.eps(i) as f64);
    }
    out
}

/// Differential at `g` of the projection `π`, applied to `Y`.
fn dpi<T: Real>(g: &DMatrix<T>, y: &DMatrix<T>) -> DMatrix<T> {
    let k = (y.transpose() * g + g * y) * lit::<T>(0.5);
    let u = upper_half(&k);
    y + &u * g - g * &u
}

/// Orthonormal basis (`n² × m`) of the tangent space at `g`, from the images of
/// the upper-triangular generators under `dπ`.
pub fn tangent_basis<T: Real>(g: &DMatrix<T>, m: usize) -> DMatrix<T> {
    let n = g.nrows();
    let gens: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let mut mat = DMatrix::<T>::zeros(n * n, gens.len());
    for (col, &(a, b)) in gens.iter().enumerate() {
        let mut x = DMatrix::<T>::zeros(n, n);
        x[(a, b)] = T::one();
        let y = dpi(g, &(&x * g - g * &x));
        mat.column_mut(col).copy_from_slice(y.as_slice());
    }
    let mut out = DMatrix::<T>::zeros(n * n, m);
    for (col, (_, v)) in right_singular_pairs(&mat).iter().take(m).enumerate() {
        out.set_column(col, &(&mat * v));
    }
    orthonormalize(out)
}

/// Gram–Schmidt via QR, with column signs fixed so that `R` has positive diagonal.
pub fn orthonormalize<T: Real>(f: DMatrix<T>) -> DMatrix<T> {
    if f.ncols() == 0 {
        return f;
    }
    let qr = f.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..q.ncols() {
        if r[(c, c)] < T::zero() {
            let mut col = q.column_mut(c);
            col.neg_mut();
        }
    }
    q
}

fn det_or_one<T: Real>(m: DMatrix<T>) -> T {
    if m.nrows() == 0 {
        T::one()
    } else {
        m.determinant()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    pub steps: usize,
    /// The transport stops at path parameter `u = end`, just short of `ṽ`.
    pub end: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions { steps: 1000, end: 1.0 - 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportResult {
    pub incidence: i32,
    pub orid: i32,
    /// Smallest determinant magnitude behind the two decisions.
    pub margin: f64,
}

/// Numeric incidence and orientation sign of a cover.
///
/// The canonical frame of the upper cell and the orientation of its
/// (−1)-eigenspace are carried along the path `u ↦ g_{sin(uπ/2)}`. Near `ṽ` the
/// frame is compared with the outward direction followed by the canonical
/// frame of the lower cell; the eigenspace with the canonical basis at `ṽ`.
pub fn transport_orientation<T: Real>(
    cover: &SignedCover,
    tol: &Tolerances,
    opts: &TransportOptions,
) -> Result<TransportResult, NumericsError> {
    let (v, w) = (&cover.lower, &cover.upper);
    let n = w.n();
    let m = w.cell_dim();
    let at = |u: f64| path_matrix::<T>(cover, lit::<T>((u * std::f64::consts::FRAC_PI_2).sin()));
    let mut frame = orthonormalize(canonical_frame::<T>(w));
    let mut eminus = orthonormalize(eminus_basis::<T>(w));
    let id = DMatrix::<T>::identity(n, n);
    let half = lit::<T>(0.5);
    for step in 1..=opts.steps {
        let u = opts.end * step as f64 / opts.steps as f64;
        let g = at(u)?;
        let t = tangent_basis(&g, m);
        frame = orthonormalize(&t * (t.transpose() * &frame));
        eminus = orthonormalize((&id - &g) * half * &eminus);
    }
    let g_end = at(opts.end)?;
    let g_v: DMatrix<T> = involution_matrix(v);
    let outward = DVector::from_column_slice((&g_v - &g_end).as_slice());
    let norm = outward.norm();
    if to_f64(norm) == 0.0 {
        return Err(NumericsError::DegenerateFrame(0.0));
    }
    let lower = canonical_frame::<T>(v);
    let mut b = DMatrix::<T>::zeros(n * n, lower.ncols() + 1);
    b.set_column(0, &(outward / norm));
    for c in 0..lower.ncols() {
        b.set_column(c + 1, &lower.column(c));
    }
    let b = orthonormalize(b);
    let inc = to_f64(det_or_one(b.transpose() * &frame));
    let ev = orthonormalize(eminus_basis::<T>(v));
    let ori = to_f64(det_or_one(ev.transpose() * &eminus));
    let margin = inc.abs().min(ori.abs());
    if margin.is_nan() || margin <= tol.margin {
        return Err(NumericsError::DegenerateFrame(margin));
    }
    Ok(TransportResult {
        incidence: if inc < 0.0 { -1 } else { 1 },
        orid: if ori < 0.0 { -1 } else { 1 },
        margin,
    })
}
