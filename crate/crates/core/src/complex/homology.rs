//! Cellular homology over ℤ and 𝔽₂.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::snf::{invariant_factors, rank_mod2};
use super::{verify_d_squared, ChainComplex, ComplexError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Integers,
    Mod2,
}

impl std::str::FromStr for Coefficients {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "integers" | "z" | "int" => Ok(Coefficients::Integers),
            "mod2" | "f2" => Ok(Coefficients::Mod2),
            _ => Err(format!("unknown coefficients '{}'", s)),
        }
    }
}

/// `ℤ^free_rank ⊕ ⨁ ℤ/t` (or `𝔽₂^free_rank` with empty torsion).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Invariant factors `≥ 2`, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{}", t)));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub coefficients: Coefficients,
    /// Indexed by dimension.
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.free_rank).collect()
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, g) in self.groups.iter().enumerate() {
            match self.coefficients {
                Coefficients::Integers => writeln!(f, "H_{} = {}", d, g)?,
                Coefficients::Mod2 => writeln!(f, "H_{} = F2^{}", d, g.free_rank)?,
            }
        }
        Ok(())
    }
}

/// Homology of a complex; fails if `∂∘∂ ≠ 0`.
pub fn homology(c: &ChainComplex, coefficients: Coefficients) -> Result<HomologyResult, ComplexError> {
    let bad = verify_d_squared(c);
    if !bad.is_empty() {
        return Err(ComplexError::ComplexInvalid(bad.len()));
    }
    let counts = c.cell_counts();
    let top = counts.len();
    let mut ranks = vec![0usize; top + 1];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    for (d, rank) in ranks.iter_mut().enumerate().take(top).skip(1) {
        let m = c.boundary(d);
        match coefficients {
            Coefficients::Integers => {
                let f = invariant_factors(&m);
                *rank = f.len();
                torsion[d - 1] = f.into_iter().filter(|x| !x.is_one()).collect();
            }
            Coefficients::Mod2 => *rank = rank_mod2(&m),
        }
    }
    let groups = (0..top)
        .map(|d| HomologyGroup {
            free_rank: counts[d] - ranks[d] - ranks[d + 1],
            torsion: std::mem::take(&mut torsion[d]),
        })
        .collect();
    Ok(HomologyResult { coefficients, groups })
}
