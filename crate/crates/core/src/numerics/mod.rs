//! Floating-point model of the cells: orthogonal involutions, the Cholesky
//! projection `π`, cell membership, normal forms, and orientation transport
//! along explicit paths.
//!
//! Everything is generic over [`Real`]; `f64` is the reference precision.

pub mod paths;
pub mod transport;

use nalgebra::{Cholesky, DMatrix, DVector, RealField};
use rand::Rng;
use thiserror::Error;

use crate::involutions::{Sign, SignedInvolution, SignedPermutation};

pub use paths::{lambda_matrix, lambda_path, path_matrix, richardson_curve, richardson_special_points, PathPoint, RichardsonParam};
pub use transport::{transport_orientation, TransportOptions, TransportResult};

/// Scalar type of the numeric oracle.
pub trait Real: RealField + Copy {}

impl<T: RealField + Copy> Real for T {}

pub(crate) fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    nalgebra::try_convert(x).unwrap_or(f64::NAN)
}

/// Right singular pairs `(σ², v)` of `m`, largest first, from the eigen
/// decomposition of `mᵀm`. nalgebra's SVD can stall on the rank-deficient
/// matrices met here and return factors that do not recompose.
pub(crate) fn right_singular_pairs<T: Real>(m: &DMatrix<T>) -> Vec<(T, DVector<T>)> {
    let eig = (m.transpose() * m).symmetric_eigen();
    let mut pairs: Vec<(T, DVector<T>)> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .map(|(&l, v)| (l, v.clone_owned()))
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    pairs
}

/// Numeric thresholds, all absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative threshold for treating an entry as zero during rank decisions.
    pub rank: f64,
    /// Allowed `‖Z² − I‖_max` for inputs of `π`.
    pub involution: f64,
    /// Smallest determinant magnitude accepted from orientation transport.
    pub margin: f64,
    /// Allowed deviation in the invariants of [`OrthogonalInvolution`].
    pub orthogonal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: 1e-7,
            involution: 1e-8,
            margin: 1e-6,
            orthogonal: 1e-9,
        }
    }
}

impl Tolerances {
    /// Looser thresholds suited to single precision.
    pub fn single_precision() -> Self {
        Tolerances {
            rank: 1e-4,
            involution: 1e-4,
            margin: 1e-3,
            orthogonal: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("matrix is not an involution (residual {0:e})")]
    NotInvolution(f64),
    #[error("matrix is not an orthogonal involution (residual {0:e})")]
    NotOrthogonalInvolution(f64),
    #[error("Cholesky factorization failed")]
    CholeskyFailure,
    #[error("rank decision in column {column} is within a factor 10 of the tolerance")]
    RankAmbiguous { column: usize },
    #[error("pivot pattern is not a signed involution")]
    NotInCell,
    #[error("point lies in cell {found}, expected {expected}")]
    WrongCell { expected: String, found: String },
    #[error("vectors are antipodal or not unit length")]
    AntipodalInput,
    #[error("parameter is off the curve by {0:e}")]
    OffCurve(f64),
    #[error("no path or curve exists for this cover: {0}")]
    BadCover(String),
    #[error("transport decision margin {0:e} is below threshold")]
    DegenerateFrame(f64),
    #[error("dimension mismatch")]
    Dimension,
}

fn max_abs<T: Real>(m: &DMatrix<T>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(to_f64(x.abs())))
}

/// An orthogonal symmetric involution `g`, i.e. a point of a Grassmannian.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalInvolution<T: Real> {
    m: DMatrix<T>,
}

impl<T: Real> OrthogonalInvolution<T> {
    /// Checks `ggᵀ = I`, `g² = I` and `g = gᵀ` within `tol`.
    pub fn new(m: DMatrix<T>, tol: f64) -> Result<Self, NumericsError> {
        if !m.is_square() {
            return Err(NumericsError::Dimension);
        }
        let id = DMatrix::<T>::identity(m.nrows(), m.ncols());
        let residual = max_abs(&(&m * m.transpose() - &id))
            .max(max_abs(&(&m * &m - &id)))
            .max(max_abs(&(&m - m.transpose())));
        if residual.is_nan() || residual >= tol {
            return Err(NumericsError::NotOrthogonalInvolution(residual));
        }
        Ok(OrthogonalInvolution { m })
    }

    /// The centre of a cell.
    pub fn from_signed(w: &SignedInvolution) -> Self {
        OrthogonalInvolution { m: involution_matrix(w) }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.m
    }

    /// `n − 2·trace` halved: the dimension of the (−1)-eigenspace.
    pub fn k(&self) -> usize {
        let tr = to_f64(self.m.trace());
        ((self.n() as f64 - tr) / 2.0).round() as usize
    }
}

/// Matrix of a signed permutation.
pub fn permutation_matrix<T: Real>(p: &SignedPermutation) -> DMatrix<T> {
    let n = p.n();
    let mut m = DMatrix::zeros(n, n);
    for c in 0..n {
        m[(p.image(c), c)] = lit(p.sign(c).to_i32() as f64);
    }
    m
}

/// Matrix of a signed involution.
pub fn involution_matrix<T: Real>(w: &SignedInvolution) -> DMatrix<T> {
    permutation_matrix(w.as_permutation())
}

/// `π(Z) = θ Z θ⁻¹`, where `θ` is the upper Cholesky factor of `I + ZᵀZ`.
pub fn project_pi<T: Real>(z: &DMatrix<T>, tol: &Tolerances) -> Result<OrthogonalInvolution<T>, NumericsError> {
    if !z.is_square() {
        return Err(NumericsError::Dimension);
    }
    let n = z.nrows();
    let id = DMatrix::<T>::identity(n, n);
    let residual = max_abs(&(z * z - &id));
    if residual.is_nan() || residual >= tol.involution {
        return Err(NumericsError::NotInvolution(residual));
    }
    let a = &id + z.transpose() * z;
    let chol = Cholesky::new(a).ok_or(NumericsError::CholeskyFailure)?;
    let l = chol.l();
    let theta = l.transpose();
    // X θ = θ Z  ⇔  L Xᵀ = (θ Z)ᵀ.
    let rhs = (&theta * z).transpose();
    let xt = l.solve_lower_triangular(&rhs).ok_or(NumericsError::CholeskyFailure)?;
    let x = xt.transpose();
    let sym = (&x + x.transpose()) * lit::<T>(0.5);
    OrthogonalInvolution::new(sym, tol.orthogonal)
}

/// The signed involution `w̃` with `g ∈ B⁺ w̃ B⁺`.
///
/// Column by column, the pivot is the lowest unused row with a nonzero entry;
/// entries above the pivot and to its right are then cleared. Entries below
/// `rank·‖g‖/10` count as zero, entries above `10·rank·‖g‖` as nonzero.
pub fn cell_of<T: Real>(g: &OrthogonalInvolution<T>, tol: &Tolerances) -> Result<SignedInvolution, NumericsError> {
    let mut m = g.matrix().clone();
    let n = m.nrows();
    let scale = max_abs(&m).max(1.0) * tol.rank;
    let (zero, nonzero) = (scale / 10.0, scale * 10.0);
    let mut used = vec![false; n];
    let mut images = vec![0; n];
    let mut signs = vec![Sign::Plus; n];
    for j in 0..n {
        let mut pivot = None;
        for i in (0..n).rev().filter(|&i| !used[i]) {
            let x = to_f64(m[(i, j)].abs());
            if x > nonzero {
                pivot = Some(i);
                break;
            }
            if x >= zero {
                return Err(NumericsError::RankAmbiguous { column: j });
            }
        }
        let p = pivot.ok_or(NumericsError::RankAmbiguous { column: j })?;
        used[p] = true;
        images[j] = p;
        let pv = m[(p, j)];
        signs[j] = if pv < T::zero() { Sign::Minus } else { Sign::Plus };
        let prow = m.row(p).clone_owned();
        for i in 0..p {
            let f = m[(i, j)] / pv;
            if f != T::zero() {
                let mut row = m.row_mut(i);
                row -= &prow * f;
            }
        }
        let pcol = m.column(j).clone_owned();
        for jj in (j + 1)..n {
            let f = m[(p, jj)] / pv;
            if f != T::zero() {
                let mut col = m.column_mut(jj);
                col -= &pcol * f;
            }
        }
    }
    SignedInvolution::from_permutation(SignedPermutation::new(images, signs)).map_err(|_| NumericsError::NotInCell)
}

/// Dimension of `{β upper triangular : β w̃ = w̃ β}`.
fn centralizer_dim(w: &SignedInvolution) -> usize {
    let n = w.n();
    (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            let (wa, wb) = (w.image(a), w.image(b));
            if wa > wb {
                return false;
            }
            let partner = (wa, wb);
            if partner == (a, b) {
                w.eps(a) * w.eps(b) == 1
            } else {
                (a, b) < partner
            }
        })
        .count()
}

/// Upper-triangular `α` with `g α = α w̃` and positive diagonal.
fn conjugator<T: Real>(g: &DMatrix<T>, w: &SignedInvolution) -> Result<DMatrix<T>, NumericsError> {
    let n = w.n();
    let wm: DMatrix<T> = involution_matrix(w);
    let unknowns: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let mut lin = DMatrix::<T>::zeros(n * n, unknowns.len());
    for (col, &(a, b)) in unknowns.iter().enumerate() {
        let mut e = DMatrix::<T>::zeros(n, n);
        e[(a, b)] = T::one();
        let img = g * &e - &e * &wm;
        lin.column_mut(col).copy_from_slice(img.as_slice());
    }
    let mut pairs = right_singular_pairs(&lin);
    pairs.reverse();
    let null_dim = centralizer_dim(w);
    if null_dim > pairs.len() {
        return Err(NumericsError::Dimension);
    }
    for attempt in 0..8 {
        let mut coeffs = DVector::<T>::zeros(unknowns.len());
        for (k, (_, v)) in pairs.iter().take(null_dim).enumerate() {
            let c = lit::<T>(0.5 + ((k + 3 * attempt) as f64 * 0.754_877_666_246_692_8).fract());
            coeffs += v * c;
        }
        let mut alpha = DMatrix::<T>::zeros(n, n);
        for (x, &(a, b)) in unknowns.iter().enumerate() {
            alpha[(a, b)] = coeffs[x];
        }
        let diag_min = (0..n).map(|i| to_f64(alpha[(i, i)].abs())).fold(f64::INFINITY, f64::min);
        if diag_min < 1e-6 * max_abs(&alpha) {
            continue;
        }
        for i in 0..n {
            if alpha[(i, i)] < T::zero() {
                let mut col = alpha.column_mut(i);
                col.neg_mut();
            }
        }
        return Ok(alpha);
    }
    Err(NumericsError::CholeskyFailure)
}

/// The normal form `A` of a point `g` of the cell `w̃`: symmetric positive
/// definite, `w̃`-invariant, unit diagonal, and zero on the rises of `w`.
pub fn normal_form<T: Real>(g: &OrthogonalInvolution<T>, w: &SignedInvolution, tol: &Tolerances) -> Result<DMatrix<T>, NumericsError> {
    let found = cell_of(g, tol)?;
    if &found != w {
        return Err(NumericsError::WrongCell {
            expected: w.to_string(),
            found: found.to_string(),
        });
    }
    let n = w.n();
    let alpha = conjugator(g.matrix(), w)?;
    let mut a = alpha.transpose() * &alpha;
    for k in 0..n {
        let wk = w.image(k);
        if wk < k {
            continue;
        }
        let r: Vec<usize> = (0..k).filter(|&j| w.image(j) < wk).collect();
        if !r.is_empty() {
            let b = DMatrix::from_fn(r.len(), r.len(), |x, y| a[(r[x], r[y])]);
            let e = DVector::from_fn(r.len(), |x, _| a[(k, r[x])]);
            let c = b.cholesky().ok_or(NumericsError::CholeskyFailure)?.solve(&e);
            let mut beta = DMatrix::<T>::identity(n, n);
            for (x, &i) in r.iter().enumerate() {
                beta[(i, k)] -= c[x];
                if wk != k {
                    let s = lit::<T>((w.eps(i) * w.eps(k)) as f64);
                    beta[(w.image(i), wk)] -= s * c[x];
                }
            }
            a = beta.transpose() * &a * &beta;
        }
        let s = T::one() / a[(k, k)].sqrt();
        let mut scale = DVector::<T>::from_element(n, T::one());
        scale[k] = s;
        scale[wk] = s;
        a = DMatrix::from_fn(n, n, |x, y| a[(x, y)] * scale[x] * scale[y]);
    }
    Ok((&a + a.transpose()) * lit::<T>(0.5))
}

/// Inverse of [`normal_form`]: `g = α w̃ α⁻¹` with `A = αᵀα`, `α` upper triangular.
pub fn reconstruct<T: Real>(a: &DMatrix<T>, w: &SignedInvolution, tol: &Tolerances) -> Result<OrthogonalInvolution<T>, NumericsError> {
    if a.nrows() != w.n() {
        return Err(NumericsError::Dimension);
    }
    let chol = Cholesky::new(a.clone()).ok_or(NumericsError::CholeskyFailure)?;
    let l = chol.l();
    let alpha = l.transpose();
    let wm: DMatrix<T> = involution_matrix(w);
    // g α = α w̃  ⇔  αᵀ gᵀ = (α w̃)ᵀ; g is symmetric.
    let rhs = (&alpha * &wm).transpose();
    let g = l.solve_lower_triangular(&rhs).ok_or(NumericsError::CholeskyFailure)?;
    let sym = (&g + g.transpose()) * lit::<T>(0.5);
    OrthogonalInvolution::new(sym, tol.orthogonal.max(1e-7))
}

/// The rotation in the plane of `u` and `v` taking `u` to `v`:
/// `T(x) = x − ⟨u+v, x⟩/(1+⟨u,v⟩)·(u+v) + 2⟨u, x⟩ v`.
pub fn rotation_t<T: Real>(u: &DVector<T>, v: &DVector<T>) -> Result<DMatrix<T>, NumericsError> {
    if u.len() != v.len() {
        return Err(NumericsError::Dimension);
    }
    let unit = |x: &DVector<T>| (to_f64(x.norm()) - 1.0).abs() < 1e-8;
    let denom = T::one() + u.dot(v);
    if !unit(u) || !unit(v) || to_f64(denom) <= 1e-8 {
        return Err(NumericsError::AntipodalInput);
    }
    let n = u.len();
    let s = u + v;
    Ok(DMatrix::identity(n, n) - (&s * s.transpose()) / denom + (v * u.transpose()) * lit::<T>(2.0))
}

/// `b w̃ b⁻¹` for a random upper-triangular `b`: off-diagonal entries uniform in
/// `[−1, 1]`, diagonal entries uniform in `[0.5, 1.5]`.
pub fn random_conjugate<T: Real, R: Rng + ?Sized>(w: &SignedInvolution, rng: &mut R) -> DMatrix<T> {
    let n = w.n();
    let b = DMatrix::<T>::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Less => lit(rng.random_range(-1.0..=1.0)),
        std::cmp::Ordering::Equal => lit(rng.random_range(0.5..=1.5)),
        std::cmp::Ordering::Greater => T::zero(),
    });
    let wm: DMatrix<T> = involution_matrix(w);
    let binv = b.clone().try_inverse().expect("triangular with positive diagonal");
    b * wm * binv
}

/// Type aliases for double and single precision.
pub type OrthogonalInvolution64 = OrthogonalInvolution<f64>;
pub type OrthogonalInvolution32 = OrthogonalInvolution<f32>;
pub type PathPoint64 = PathPoint<f64>;
