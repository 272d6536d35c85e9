//! Explicit paths from `w̃` to `ṽ` through the cell of `w̃`, and the circles
//! they lie on.
//!
//! All local matrices act on the support `D` of the cover in increasing order;
//! off `D` the path agrees with `w̃`.

use nalgebra::DMatrix;

use super::transport::{canonical_frame, tangent_basis, unvec};
use super::{involution_matrix, lit, project_pi, NumericsError, OrthogonalInvolution, Real, Tolerances};
use crate::covering::{RiseType, SignedCover};
use crate::involutions::Sign;

/// A point on a path together with a tangent frame there.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPoint<T: Real> {
    pub t: T,
    pub g: OrthogonalInvolution<T>,
    /// The canonical frame of the upper cell, orthogonally projected onto the
    /// tangent space at `g`. Each entry `Y` is symmetric with `gY = −Yg`.
    pub frame: Vec<DMatrix<T>>,
}

fn sgn<T: Real>(s: Sign) -> T {
    lit(s.to_i32() as f64)
}

fn embed<T: Real>(base: &DMatrix<T>, d: &[usize], local: &DMatrix<T>) -> DMatrix<T> {
    let mut m = base.clone();
    for (x, &r) in d.iter().enumerate() {
        for (y, &c) in d.iter().enumerate() {
            m[(r, c)] = local[(x, y)];
        }
    }
    m
}

/// Scalars `(a, b, θ)` of the λ-path, read from `σ̃ = ṽ w̃`.
fn lambda_params(cover: &SignedCover) -> (f64, f64, f64) {
    let v = &cover.lower;
    let (i, j) = (cover.i, cover.j);
    let (vi, vj) = (v.image(i), v.image(j));
    let sigma = cover.sigma();
    let s = |r: usize, c: usize| sigma.entry(r, c) as f64;
    match cover.rise_type {
        RiseType::FF => (s(j, i), 1.0, 1.0),
        RiseType::FE => (1.0, s(i, vj), (v.eps(i) * v.eps(j)) as f64),
        RiseType::EF => (s(j, i), s(vi, j), 1.0),
        RiseType::EENC => (s(i, j), s(vi, vj), -1.0),
        RiseType::ED => (s(j, i), s(vj, vi), 1.0),
        RiseType::EEC => (1.0, 1.0, 1.0),
    }
}

/// The local `λ_t` on the support; `None` for crossing covers, whose path is
/// given directly by [`crossing_matrix`].
pub fn lambda_matrix<T: Real>(cover: &SignedCover, t: T) -> Option<DMatrix<T>> {
    let (a, b, th) = lambda_params(cover);
    let (a, b): (T, T) = (lit(a), lit(b));
    let one = T::one();
    let zero = T::zero();
    let s = (one - t * t).max(zero).sqrt();
    let c = lit::<T>(th) * t;
    let rows: Vec<T> = match cover.rise_type {
        RiseType::FF => vec![one, -a * c, zero, s],
        RiseType::FE => vec![one, -c * b, c * c * a * b, zero, s, -s * c, zero, zero, s],
        RiseType::EF => vec![one, c * a * b, zero, zero, one, c * b, zero, zero, s],
        RiseType::EENC => vec![
            one, -c * a, zero, zero, zero, s, zero, zero, zero, zero, one, -c * b, zero, zero, zero, s,
        ],
        RiseType::ED => vec![
            one, zero, zero, -a * c, zero, one, -c * b, zero, zero, zero, s, zero, zero, zero, zero, s,
        ],
        RiseType::EEC => return None,
    };
    let d = cover.support.len();
    Some(DMatrix::from_row_slice(d, d, &rows))
}

/// The 4×4 curve matrix of a crossing cover in coordinates `(i, v(i), j, v(j))`.
pub fn crossing_matrix<T: Real>(e: T, f: T, g: T, eps: T, delta: T) -> DMatrix<T> {
    let z = T::zero();
    let t = T::one() - e * e;
    DMatrix::from_row_slice(
        4,
        4,
        &[
            z, e, f, g,
            e, delta * t, -delta * e * f, -eps * f,
            f, -delta * e * f, -delta * t, eps * e,
            g, -eps * f, eps * e, z,
        ],
    )
}

/// Point of the crossing path at parameter `t ∈ [0, 1]`.
fn crossing_point<T: Real>(cover: &SignedCover, t: T) -> DMatrix<T> {
    let v = &cover.lower;
    let w = &cover.upper;
    let (i, j) = (cover.i, cover.j);
    let e_sign: T = sgn(v.sign(i));
    let eps: T = sgn(v.sign(i) * v.sign(j));
    let delta: T = sgn(w.sign(v.image(i)));
    let g_sign: T = sgn(w.sign(i));
    let one = T::one();
    let e = e_sign * t;
    let g = g_sign * ((one - t * t) / (one + t * t)).max(T::zero()).sqrt();
    let f = eps * delta * e * g;
    crossing_matrix(e, f, g, eps, delta)
}

/// The raw path matrix `g_t` (before projection). At `t = 1` this is `ṽ`.
pub fn path_matrix<T: Real>(cover: &SignedCover, t: T) -> Result<DMatrix<T>, NumericsError> {
    let wm: DMatrix<T> = involution_matrix(&cover.upper);
    if t >= T::one() {
        return Ok(involution_matrix(&cover.lower));
    }
    let d = &cover.support;
    match lambda_matrix(cover, t) {
        Some(lam) => {
            let n = cover.lower.n();
            let big = embed(&DMatrix::identity(n, n), d, &lam);
            let inv = big
                .clone()
                .try_inverse()
                .ok_or_else(|| NumericsError::BadCover(format!("λ is singular at t = {}", super::to_f64(t))))?;
            Ok(big * wm * inv)
        }
        None => Ok(embed(&wm, d, &crossing_point(cover, t))),
    }
}

/// The path point at `t`, projected by `π`, with the upper cell's canonical
/// frame projected onto its tangent space.
pub fn lambda_path<T: Real>(cover: &SignedCover, t: T, tol: &Tolerances) -> Result<PathPoint<T>, NumericsError> {
    if t < T::zero() || t > T::one() {
        return Err(NumericsError::BadCover("t outside [0, 1]".into()));
    }
    let g = project_pi(&path_matrix(cover, t)?, tol)?;
    let n = g.n();
    let m = cover.upper.cell_dim();
    let basis = tangent_basis(g.matrix(), m);
    let canon = canonical_frame::<T>(&cover.upper);
    let proj = &basis * (basis.transpose() * canon);
    let frame = (0..m).map(|c| unvec(&proj.column(c).clone_owned(), n)).collect();
    Ok(PathPoint { t, g, frame })
}

/// A parameter of a Richardson curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RichardsonParam<T> {
    /// A point `(s, c)` of the unit circle.
    Circle { s: T, c: T },
    /// A point of the crossing curve with `f = εδeg`, `g² = (1−e²)/(1+e²)`.
    Crossing { e: T, f: T, g: T, eps: Sign, delta: Sign },
}

/// Base circle matrix for the type, with the one free sign of the family.
fn circle_matrix<T: Real>(ty: RiseType, s: T, c: T, flavor: T) -> Option<DMatrix<T>> {
    let z = T::zero();
    let m = match ty {
        RiseType::FF => DMatrix::from_row_slice(2, 2, &[c, s, s, -c]),
        RiseType::FE => DMatrix::from_row_slice(3, 3, &[c * c, s * c, s, s * c, s * s, -c, s, -c, z]) * flavor,
        RiseType::EF => DMatrix::from_row_slice(3, 3, &[z, -c, s, -c, s * s, s * c, s, s * c, c * c]) * flavor,
        RiseType::EENC => DMatrix::from_row_slice(4, 4, &[z, z, s, c, z, z, c, -s, s, c, z, z, c, -s, z, z]),
        RiseType::ED => DMatrix::from_row_slice(
            4,
            4,
            &[z, c, s, z, c, z, z, -flavor * s, s, z, z, flavor * c, z, -flavor * s, flavor * c, z],
        ),
        RiseType::EEC => return None,
    };
    Some(m)
}

const SPECIAL: [(f64, f64); 4] = [(0.0, 1.0), (0.0, -1.0), (1.0, 0.0), (-1.0, 0.0)];

/// Diagonal gauge and family sign placing `ṽ` and `w̃` among the special points.
fn gauge(cover: &SignedCover) -> Option<(Vec<f64>, f64)> {
    let d = &cover.support;
    let restrict = |m: DMatrix<f64>| DMatrix::from_fn(d.len(), d.len(), |x, y| m[(d[x], d[y])]);
    let v: DMatrix<f64> = restrict(involution_matrix(&cover.lower));
    let w: DMatrix<f64> = restrict(involution_matrix(&cover.upper));
    for flavor in [1.0, -1.0] {
        for mask in 0u32..(1 << (d.len() - 1)) {
            let signs: Vec<f64> = (0..d.len())
                .map(|x| if x > 0 && mask & (1 << (x - 1)) != 0 { -1.0 } else { 1.0 })
                .collect();
            let pts: Vec<DMatrix<f64>> = SPECIAL
                .iter()
                .filter_map(|&(s, c)| circle_matrix(cover.rise_type, s, c, flavor))
                .map(|q| DMatrix::from_fn(q.nrows(), q.ncols(), |x, y| q[(x, y)] * signs[x] * signs[y]))
                .collect();
            let hits = |target: &DMatrix<f64>| pts.iter().any(|p| (p - target).amax() < 1e-12);
            if hits(&v) && hits(&w) {
                return Some((signs, flavor));
            }
        }
    }
    None
}

/// A point of the Richardson curve through `ṽ` and `w̃`.
///
/// Circle types use the circle matrices conjugated by the first diagonal sign
/// gauge (and family sign) for which the special parameters `(0, ±1)`, `(±1, 0)`
/// include `ṽ` and `w̃`. Crossing covers take the curve parameters directly.
pub fn richardson_curve<T: Real>(
    cover: &SignedCover,
    param: RichardsonParam<T>,
    tol: &Tolerances,
) -> Result<OrthogonalInvolution<T>, NumericsError> {
    let wm: DMatrix<T> = involution_matrix(&cover.upper);
    let d = &cover.support;
    let local = match (cover.rise_type, param) {
        (RiseType::EEC, RichardsonParam::Crossing { e, f, g, eps, delta }) => {
            let (eps, delta): (T, T) = (sgn(eps), sgn(delta));
            let one = T::one();
            let off_f = (f - eps * delta * e * g).abs();
            let off_g = (g * g - (one - e * e) / (one + e * e)).abs();
            let off = super::to_f64(off_f.max(off_g));
            if off > 1e-8 {
                return Err(NumericsError::OffCurve(off));
            }
            crossing_matrix(e, f, g, eps, delta)
        }
        (RiseType::EEC, RichardsonParam::Circle { .. }) | (_, RichardsonParam::Crossing { .. }) => {
            return Err(NumericsError::BadCover("parameter kind does not match the rise type".into()));
        }
        (ty, RichardsonParam::Circle { s, c }) => {
            let off = super::to_f64((s * s + c * c - T::one()).abs());
            if off > 1e-8 {
                return Err(NumericsError::OffCurve(off));
            }
            let (signs, flavor) = gauge(cover).ok_or_else(|| NumericsError::BadCover(format!("{} -> {}", cover.upper, cover.lower)))?;
            let q = circle_matrix(ty, s, c, lit(flavor)).expect("circle type");
            DMatrix::from_fn(q.nrows(), q.ncols(), |x, y| q[(x, y)] * lit(signs[x] * signs[y]))
        }
    };
    OrthogonalInvolution::new(embed(&wm, d, &local), tol.orthogonal.max(1e-12))
}

/// The four special parameters of the cover's curve.
pub fn richardson_special_points(cover: &SignedCover) -> Vec<RichardsonParam<f64>> {
    if cover.rise_type == RiseType::EEC {
        let v = &cover.lower;
        let eps = v.sign(cover.i) * v.sign(cover.j);
        let delta = cover.upper.sign(v.image(cover.i));
        [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
            .into_iter()
            .map(|(e, g)| RichardsonParam::Crossing { e, f: 0.0, g, eps, delta })
            .collect()
    } else {
        SPECIAL.iter().map(|&(s, c)| RichardsonParam::Circle { s, c }).collect()
    }
}
