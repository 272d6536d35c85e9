//! Incidence numbers and orientation signs of covering pairs.
//!
//! Both are computed from the restricted model pair `x̃ ◁ ũ` on the support
//! `D` and then corrected by the signs of the block shuffles relating the
//! canonical tangent bases (for the incidence) and the canonical bases of the
//! (−1)-eigenspaces (for the orientation sign).

use serde::Serialize;
use thiserror::Error;

use crate::covering::{rise_of, CoveringError, RiseType, SignParams, SignedCover};
use crate::involutions::{Sign, SignedInvolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error("tangent bases of {lower} and {upper} have mismatched mixed blocks")]
    BlockMismatch { lower: String, upper: String },
    #[error("mixed-block transition matrix of {lower} ◁ {upper} is singular")]
    Singular { lower: String, upper: String },
}

/// Incidence of the model pair, read off the sign pattern.
pub fn model_incidence(ty: RiseType, p: SignParams) -> i32 {
    let a = p.alpha.to_i32();
    let b = p.beta.map_or(1, Sign::to_i32);
    match ty {
        RiseType::FF | RiseType::EF | RiseType::ED => -a,
        RiseType::FE | RiseType::EEC => 1,
        RiseType::EENC => a * b,
    }
}

/// Orientation sign of the model pair; `eps_i`, `eps_j` are the signs of the
/// lower involution at `i` and `j`.
pub fn model_orid(ty: RiseType, p: SignParams, eps_i: Sign, eps_j: Sign) -> i32 {
    let a = p.alpha;
    let b = p.beta.unwrap_or(Sign::Plus);
    let g = p.gamma.unwrap_or(Sign::Plus);
    let flip = match ty {
        RiseType::FF => eps_i == Sign::Plus && a == Sign::Minus,
        RiseType::FE => eps_i == Sign::Plus && b == Sign::Minus,
        RiseType::EF => eps_j == Sign::Minus && b == Sign::Plus,
        RiseType::EENC => false,
        RiseType::EEC => a * b == Sign::Minus && g * eps_i == Sign::Minus,
        RiseType::ED => b == Sign::Minus,
    };
    if flip {
        -1
    } else {
        1
    }
}

/// Sign of the permutation sorting `seq`.
fn sort_sign<T: Ord>(seq: &[T]) -> i32 {
    let mut s = 1;
    for a in 0..seq.len() {
        for b in (a + 1)..seq.len() {
            if seq[a] > seq[b] {
                s = -s;
            }
        }
    }
    s
}

fn block(pair: (usize, usize), d: &[usize]) -> u8 {
    match (d.contains(&pair.0), d.contains(&pair.1)) {
        (true, true) => 0,
        (false, false) => 1,
        _ => 2,
    }
}

/// Sign of the shuffle taking the canonical inversion-class order of `w` to the
/// blocked order: classes inside `D`, then classes outside `D`, then mixed ones.
pub fn shuffle_sign_sigma(w: &SignedInvolution, d: &[usize]) -> i32 {
    let basis = w.qinversions();
    let mut keyed: Vec<(u8, usize)> = basis
        .classes()
        .iter()
        .enumerate()
        .map(|(pos, c)| (block(c.rep, d), pos))
        .collect();
    keyed.sort_unstable();
    let order: Vec<usize> = keyed.into_iter().map(|(_, pos)| pos).collect();
    sort_sign(&order)
}

/// Sign of the shuffle of the (−1)-eigenbasis indices of `w` into those inside
/// `D` followed by those outside.
pub fn shuffle_sign_rho(w: &SignedInvolution, d: &[usize]) -> i32 {
    let mut idx = w.eminus_indices();
    idx.sort_by_key(|&i| (!d.contains(&i), i));
    sort_sign(&idx)
}

/// Exact determinant by fraction-free elimination.
fn bareiss_det(mut m: Vec<Vec<i64>>) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i64;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(r) = ((k + 1)..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Determinant sign of the transition between the mixed blocks of the tangent
/// bases of `w̃` and `ṽ`.
pub fn xi_sign(cover: &SignedCover) -> Result<i32, IncidenceError> {
    let (v, w, d) = (&cover.lower, &cover.upper, cover.support.as_slice());
    let err = |single: bool| {
        let (lower, upper) = (v.to_string(), w.to_string());
        if single {
            IncidenceError::Singular { lower, upper }
        } else {
            IncidenceError::BlockMismatch { lower, upper }
        }
    };
    let vb = v.qinversions();
    let wb = w.qinversions();
    let v_mixed: Vec<usize> = (0..vb.len()).filter(|&k| block(vb.classes()[k].rep, d) == 2).collect();
    let w_mixed: Vec<(usize, usize)> = wb
        .classes()
        .iter()
        .map(|c| c.rep)
        .filter(|&r| block(r, d) == 2)
        .collect();
    if v_mixed.len() != w_mixed.len() {
        return Err(err(false));
    }
    let m = w_mixed.len();
    let mut mat = vec![vec![0i64; m]; m];
    for (col, &(a, b)) in w_mixed.iter().enumerate() {
        let (i, j) = if d.contains(&a) { (a, b) } else { (b, a) };
        let terms = [
            (v.image(i), w.image(j), w.eps(j) * v.eps(i)),
            (w.image(i), w.image(j), w.eps(i) * w.eps(j)),
        ];
        for (x, y, cf) in terms {
            if let Some((cls, s)) = vb.locate(v, x, y) {
                let row = v_mixed.iter().position(|&k| k == cls).ok_or_else(|| err(false))?;
                mat[row][col] += (cf * s) as i64;
            }
        }
    }
    match bareiss_det(mat).signum() {
        0 => Err(err(true)),
        s => Ok(s as i32),
    }
}

/// Full sign data of one covering pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceRecord {
    pub cover: SignedCover,
    pub incidence: i32,
    pub orid: i32,
    pub model_incidence: i32,
    pub model_orid: i32,
    pub sigma_lower: i32,
    pub sigma_upper: i32,
    pub xi: i32,
    pub rho_lower: i32,
    pub rho_upper: i32,
}

impl IncidenceRecord {
    pub fn new(cover: &SignedCover) -> Result<Self, IncidenceError> {
        let d = cover.support.as_slice();
        let mi = model_incidence(cover.rise_type, cover.params);
        let mo = model_orid(
            cover.rise_type,
            cover.params,
            cover.lower.sign(cover.i),
            cover.lower.sign(cover.j),
        );
        let sigma_lower = shuffle_sign_sigma(&cover.lower, d);
        let sigma_upper = shuffle_sign_sigma(&cover.upper, d);
        let xi = xi_sign(cover)?;
        let rho_lower = shuffle_sign_rho(&cover.lower, d);
        let rho_upper = shuffle_sign_rho(&cover.upper, d);
        Ok(IncidenceRecord {
            cover: cover.clone(),
            incidence: mi * sigma_lower * sigma_upper * xi,
            orid: mo * rho_lower * rho_upper,
            model_incidence: mi,
            model_orid: mo,
            sigma_lower,
            sigma_upper,
            xi,
            rho_lower,
            rho_upper,
        })
    }
}

/// `[w̃ : ṽ]` for a covering pair `ṽ ◁ w̃`.
pub fn incidence(v: &SignedInvolution, w: &SignedInvolution) -> Result<i32, IncidenceError> {
    Ok(IncidenceRecord::new(&rise_of(v, w)?)?.incidence)
}

/// Orientation sign for a covering pair `ṽ ◁ w̃`.
pub fn orid(v: &SignedInvolution, w: &SignedInvolution) -> Result<i32, IncidenceError> {
    Ok(IncidenceRecord::new(&rise_of(v, w)?)?.orid)
}
