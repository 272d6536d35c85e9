//! Covering relations of the signed Bruhat order on involutions.
//!
//! A cover `ṽ ◁ w̃` comes from a suitable free rise `(i, j)` of `v`. The
//! underlying involution is `w = v ∘ co`, and the signs of `w̃` are fixed by the
//! sign pattern of `σ̃ = ṽ w̃` on the support `D = {i, j, v(i), v(j)}`.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::involutions::{enumerate_cells, Sign, SignedInvolution, SignedPermutation};

/// Letter attached to an index of an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WType {
    /// `w(i) < i`.
    Deficiency,
    /// `w(i) > i`.
    Excedance,
    /// `w(i) = i`.
    Fixed,
}

impl WType {
    pub fn letter(self) -> char {
        match self {
            WType::Deficiency => 'd',
            WType::Excedance => 'e',
            WType::Fixed => 'f',
        }
    }
}

pub fn wtype(w: &SignedInvolution, i: usize) -> WType {
    let j = w.image(i);
    match j.cmp(&i) {
        std::cmp::Ordering::Less => WType::Deficiency,
        std::cmp::Ordering::Equal => WType::Fixed,
        std::cmp::Ordering::Greater => WType::Excedance,
    }
}

/// Type of a suitable rise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RiseType {
    FF,
    FE,
    EF,
    /// `ee`, non-crossing: `v(i) > j`.
    EENC,
    /// `ee`, crossing: `v(i) < j`.
    EEC,
    ED,
}

impl RiseType {
    pub const ALL: [RiseType; 6] = [
        RiseType::FF,
        RiseType::FE,
        RiseType::EF,
        RiseType::EENC,
        RiseType::EEC,
        RiseType::ED,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RiseType::FF => "FF",
            RiseType::FE => "FE",
            RiseType::EF => "EF",
            RiseType::EENC => "EENC",
            RiseType::EEC => "EEC",
            RiseType::ED => "ED",
        }
    }

    /// Number of free signs in the pattern of `σ̃`.
    pub fn sign_params(self) -> usize {
        match self {
            RiseType::FF => 1,
            RiseType::EEC => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for RiseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for RiseType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("({i}, {j}) is not a rise")]
    NotARise { i: usize, j: usize },
    #[error("rise ({i}, {j}) is not free")]
    NotFree { i: usize, j: usize },
    #[error("rise ({i}, {j}) has type {letters}, which has no covering operation")]
    Unsuitable { i: usize, j: usize, letters: String },
    #[error("{lower} and {upper} are not a covering pair")]
    NotCovering { lower: String, upper: String },
    #[error("sign parameters do not match the rise type")]
    BadParams,
}

/// Classifies the rise `(i, j)` of `v`.
pub fn classify_rise(v: &SignedInvolution, i: usize, j: usize) -> Result<RiseType, CoveringError> {
    if !(i < j && j < v.n() && v.image(i) < v.image(j)) {
        return Err(CoveringError::NotARise { i, j });
    }
    let (vi, vj) = (v.image(i), v.image(j));
    if ((i + 1)..j).any(|k| vi < v.image(k) && v.image(k) < vj) {
        return Err(CoveringError::NotFree { i, j });
    }
    use WType::*;
    match (wtype(v, i), wtype(v, j)) {
        (Fixed, Fixed) => Ok(RiseType::FF),
        (Fixed, Excedance) => Ok(RiseType::FE),
        (Excedance, Fixed) => Ok(RiseType::EF),
        (Excedance, Excedance) if vi < j => Ok(RiseType::EEC),
        (Excedance, Excedance) => Ok(RiseType::EENC),
        (Excedance, Deficiency) => Ok(RiseType::ED),
        (a, b) => Err(CoveringError::Unsuitable {
            i,
            j,
            letters: format!("{}{}", a.letter(), b.letter()),
        }),
    }
}

/// Permutation images of `co`, with the cycles
/// FF `(i j)`, FE `(i j v(j))`, EF `(i j v(i))`, EENC and ED `(i j)(v(i) v(j))`,
/// EEC `(i j v(j) v(i))`.
pub fn covering_operation(v: &SignedInvolution, i: usize, j: usize, ty: RiseType) -> Vec<usize> {
    let (vi, vj) = (v.image(i), v.image(j));
    let mut p: Vec<usize> = (0..v.n()).collect();
    let mut cycle = |seq: &[usize]| {
        for (k, &x) in seq.iter().enumerate() {
            p[x] = seq[(k + 1) % seq.len()];
        }
    };
    match ty {
        RiseType::FF => cycle(&[i, j]),
        RiseType::FE => cycle(&[i, j, vj]),
        RiseType::EF => cycle(&[i, j, vi]),
        RiseType::EENC | RiseType::ED => {
            cycle(&[i, j]);
            cycle(&[vi, vj]);
        }
        RiseType::EEC => cycle(&[i, j, vj, vi]),
    }
    p
}

/// Sorted support `{i, j, v(i), v(j)}`.
pub fn support(v: &SignedInvolution, i: usize, j: usize) -> Vec<usize> {
    let mut d = vec![i, j, v.image(i), v.image(j)];
    d.sort_unstable();
    d.dedup();
    d
}

/// Free signs of a cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SignParams {
    pub alpha: Sign,
    pub beta: Option<Sign>,
    pub gamma: Option<Sign>,
}

impl SignParams {
    /// All parameter choices for a rise type.
    pub fn all(ty: RiseType) -> Vec<SignParams> {
        let both = [Sign::Plus, Sign::Minus];
        let mut out = Vec::new();
        for &alpha in &both {
            match ty.sign_params() {
                1 => out.push(SignParams { alpha, beta: None, gamma: None }),
                2 => out.extend(both.iter().map(|&b| SignParams { alpha, beta: Some(b), gamma: None })),
                _ => {
                    for &b in &both {
                        out.extend(both.iter().map(|&g| SignParams { alpha, beta: Some(b), gamma: Some(g) }));
                    }
                }
            }
        }
        out
    }

    fn fits(&self, ty: RiseType) -> bool {
        let want = ty.sign_params();
        self.beta.is_some() == (want >= 2) && self.gamma.is_some() == (want == 3)
    }
}

/// Nonzero entries `(row, col, value)` of `σ̃ = ṽ w̃` on the support.
pub fn sign_pattern(
    v: &SignedInvolution,
    i: usize,
    j: usize,
    ty: RiseType,
    p: SignParams,
) -> Result<Vec<(usize, usize, Sign)>, CoveringError> {
    if !p.fits(ty) {
        return Err(CoveringError::BadParams);
    }
    let (vi, vj) = (v.image(i), v.image(j));
    let a = p.alpha;
    let b = p.beta.unwrap_or(Sign::Plus);
    let g = p.gamma.unwrap_or(Sign::Plus);
    Ok(match ty {
        RiseType::FF => vec![(j, i, a), (i, j, -a)],
        RiseType::FE => vec![(i, vj, a), (j, i, b), (vj, j, a * b)],
        RiseType::EF => vec![(j, i, a), (vi, j, b), (i, vi, a * b)],
        RiseType::EENC => vec![(i, j, a), (j, i, -a), (vi, vj, b), (vj, vi, -b)],
        RiseType::EEC => vec![(j, i, g), (vj, j, a), (vi, vj, b), (i, vi, -(a * b * g))],
        RiseType::ED => vec![(j, i, a), (i, j, -a), (vj, vi, b), (vi, vj, -b)],
    })
}

/// A covering pair `lower ◁ upper` with its rise data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedCover {
    pub lower: SignedInvolution,
    pub upper: SignedInvolution,
    pub i: usize,
    pub j: usize,
    pub rise_type: RiseType,
    pub params: SignParams,
    /// Sorted `{i, j, v(i), v(j)}`.
    pub support: Vec<usize>,
}

impl SignedCover {
    pub fn alpha(&self) -> Sign {
        self.params.alpha
    }

    pub fn beta(&self) -> Option<Sign> {
        self.params.beta
    }

    pub fn gamma(&self) -> Option<Sign> {
        self.params.gamma
    }

    /// `σ̃ = ṽ w̃`.
    pub fn sigma(&self) -> SignedPermutation {
        self.lower.as_permutation() * self.upper.as_permutation()
    }
}

impl Serialize for SignedCover {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SignedCover", 8)?;
        st.serialize_field("lower", &self.lower.to_string())?;
        st.serialize_field("upper", &self.upper.to_string())?;
        st.serialize_field("i", &(self.i + 1))?;
        st.serialize_field("j", &(self.j + 1))?;
        st.serialize_field("type", &self.rise_type)?;
        st.serialize_field("alpha", &self.params.alpha.to_i32())?;
        st.serialize_field("beta", &self.params.beta.map(Sign::to_i32))?;
        st.serialize_field("gamma", &self.params.gamma.map(Sign::to_i32))?;
        st.end()
    }
}

/// Builds the cover for one rise and one choice of signs, if `ṽ σ̃` is an
/// involution in the same Grassmannian.
pub fn cover_for(
    v: &SignedInvolution,
    i: usize,
    j: usize,
    params: SignParams,
) -> Result<Option<SignedCover>, CoveringError> {
    let ty = classify_rise(v, i, j)?;
    let support = support(v, i, j);
    let entries = sign_pattern(v, i, j, ty, params)?;
    let off = (0..v.n()).filter(|x| !support.contains(x)).map(|x| (x, x, Sign::Plus));
    let sigma = SignedPermutation::from_entries(v.n(), entries.into_iter().chain(off))
        .expect("sign pattern is a signed permutation");
    let product = v.as_permutation() * &sigma;
    let Ok(upper) = SignedInvolution::from_permutation(product) else {
        return Ok(None);
    };
    if upper.as_permutation().trace() != v.as_permutation().trace() {
        return Ok(None);
    }
    debug_assert_eq!(upper.perm(), covering_operation_applied(v, i, j, ty).as_slice());
    Ok(Some(SignedCover {
        lower: v.clone(),
        upper,
        i,
        j,
        rise_type: ty,
        params,
        support,
    }))
}

fn covering_operation_applied(v: &SignedInvolution, i: usize, j: usize, ty: RiseType) -> Vec<usize> {
    covering_operation(v, i, j, ty).iter().map(|&x| v.image(x)).collect()
}

/// Suitable rises of `v` with their types.
pub fn suitable_rises(v: &SignedInvolution) -> Vec<(usize, usize, RiseType)> {
    v.rises()
        .filter_map(|(i, j)| classify_rise(v, i, j).ok().map(|t| (i, j, t)))
        .collect()
}

/// All signed covers of `v`.
pub fn signed_covers(v: &SignedInvolution) -> Vec<SignedCover> {
    let mut out = Vec::new();
    for (i, j, ty) in suitable_rises(v) {
        for params in SignParams::all(ty) {
            if let Some(c) = cover_for(v, i, j, params).expect("suitable rise") {
                out.push(c);
            }
        }
    }
    out
}

/// The rise data of a covering pair.
pub fn rise_of(v: &SignedInvolution, w: &SignedInvolution) -> Result<SignedCover, CoveringError> {
    signed_covers(v)
        .into_iter()
        .find(|c| &c.upper == w)
        .ok_or_else(|| CoveringError::NotCovering {
            lower: v.to_string(),
            upper: w.to_string(),
        })
}

/// All covering pairs in `G_k(ℝⁿ)`.
pub fn covering_pairs(n: usize, k: usize) -> Vec<SignedCover> {
    enumerate_cells(n, k).iter().flat_map(signed_covers).collect()
}
