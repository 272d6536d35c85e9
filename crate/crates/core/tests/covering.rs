use std::collections::HashSet;

use grassmann_cw::covering::{classify_rise, covering_pairs, rise_of, signed_covers, CoveringError, RiseType};
use grassmann_cw::incidence::{incidence, model_incidence, IncidenceRecord};
use grassmann_cw::involutions::{enumerate_cells, SignedInvolution};

/// `r_w(i, j) = #{a ≤ i : w(a) ≥ j}`; Bruhat order on permutations is the
/// entrywise order on these counts.
fn rank_matrix(w: &SignedInvolution) -> Vec<Vec<usize>> {
    let n = w.n();
    (0..n)
        .map(|i| (0..n).map(|j| (0..=i).filter(|&a| w.image(a) >= j).count()).collect())
        .collect()
}

fn bruhat_le(v: &SignedInvolution, w: &SignedInvolution) -> bool {
    let (rv, rw) = (rank_matrix(v), rank_matrix(w));
    rv.iter().flatten().zip(rw.iter().flatten()).all(|(a, b)| a <= b)
}

/// Rank function of the involution poset: `(ℓ(w) + #2-cycles) / 2`.
fn involution_rank(w: &SignedInvolution) -> usize {
    let len = w.inversions().count();
    let two_cycles = (0..w.n()).filter(|&i| w.image(i) > i).count();
    (len + two_cycles) / 2
}

fn moved(v: &SignedInvolution, w: &SignedInvolution) -> Vec<usize> {
    (0..v.n()).filter(|&x| v.image(x) != w.image(x)).collect()
}

const SIZES: [(usize, usize); 8] = [(2, 1), (3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (6, 2), (6, 3)];

#[test]
fn covers_are_bruhat_covers_of_one_rank() {
    for (n, k) in SIZES {
        for c in covering_pairs(n, k) {
            let (v, w) = (&c.lower, &c.upper);
            assert!(bruhat_le(v, w) && v.perm() != w.perm(), "{} < {}", v, w);
            assert_eq!(involution_rank(w), involution_rank(v) + 1);
            assert_eq!(w.cell_dim(), v.cell_dim() + 1);
            assert_eq!(involution_rank(w), w.cell_dim());
            assert_eq!((v.k(), w.k()), (k, k));
        }
    }
}

#[test]
fn signs_agree_away_from_the_moved_points() {
    for (n, k) in SIZES {
        for c in covering_pairs(n, k) {
            let (v, w) = (&c.lower, &c.upper);
            let d = moved(v, w);
            assert!(matches!(d.len(), 2..=4));
            for x in (0..n).filter(|x| !d.contains(x)) {
                assert_eq!(v.sign(x), w.sign(x), "{} < {} at {}", v, w, x + 1);
            }
        }
    }
}

#[test]
fn support_matches_the_moved_points() {
    for (n, k) in SIZES {
        for c in covering_pairs(n, k) {
            assert_eq!(c.support, moved(&c.lower, &c.upper), "{} < {}", c.lower, c.upper);
        }
    }
}

#[test]
fn rise_of_recovers_every_cover() {
    for (n, k) in SIZES {
        for c in covering_pairs(n, k) {
            let again = rise_of(&c.lower, &c.upper).unwrap();
            assert_eq!((again.i, again.j, again.rise_type), (c.i, c.j, c.rise_type));
        }
    }
}

#[test]
fn each_cover_arises_from_one_rise() {
    for (n, k) in SIZES {
        let pairs = covering_pairs(n, k);
        let distinct: HashSet<_> = pairs.iter().map(|c| (c.lower.clone(), c.upper.clone())).collect();
        assert_eq!(distinct.len(), pairs.len(), "G_{}(R^{})", k, n);
    }
}

#[test]
fn cover_counts() {
    let counts: Vec<usize> = [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2)]
        .iter()
        .map(|&(n, k)| covering_pairs(n, k).len())
        .collect();
    assert_eq!(counts, vec![16, 36, 144, 64, 600]);
}

#[test]
fn every_cell_below_the_top_has_a_cover() {
    for (n, k) in SIZES {
        let top = k * (n - k);
        for v in enumerate_cells(n, k).iter().filter(|v| v.cell_dim() < top) {
            assert!(!signed_covers(v).is_empty(), "{} has no cover", v);
        }
    }
}

#[test]
fn every_rise_type_occurs_with_every_sign_choice() {
    let mut seen = HashSet::new();
    for n in 2..=5 {
        for k in 0..=n {
            for c in covering_pairs(n, k) {
                seen.insert((c.rise_type, c.params));
            }
        }
    }
    for ty in RiseType::ALL {
        for p in grassmann_cw::covering::SignParams::all(ty) {
            assert!(seen.contains(&(ty, p)), "{} {:?}", ty, p);
        }
    }
}

#[test]
fn classification_on_small_examples() {
    let v = SignedInvolution::parse("(~2)", 3).unwrap();
    assert_eq!(classify_rise(&v, 0, 1), Ok(RiseType::FF));
    assert!(matches!(classify_rise(&v, 0, 2), Err(CoveringError::NotFree { .. })));
    let v = SignedInvolution::parse("(23)", 4).unwrap();
    assert_eq!(classify_rise(&v, 0, 1), Ok(RiseType::FE));
    let v = SignedInvolution::parse("(12)(34)", 4).unwrap();
    assert_eq!(classify_rise(&v, 0, 2), Ok(RiseType::EEC));
    let v = SignedInvolution::parse("(13)(24)", 4).unwrap();
    assert_eq!(classify_rise(&v, 0, 1), Ok(RiseType::EENC));
    let v = SignedInvolution::parse("(14)(23)", 4).unwrap();
    assert!(matches!(classify_rise(&v, 0, 1), Err(CoveringError::NotARise { .. })));
}

#[test]
fn non_covers_have_no_incidence() {
    let v = SignedInvolution::parse("(~1)", 3).unwrap();
    let w = SignedInvolution::parse("(13)", 3).unwrap();
    assert!(incidence(&v, &w).is_err());
}

#[test]
fn reduction_to_the_model_factorises() {
    for (n, k) in SIZES {
        for c in covering_pairs(n, k) {
            let r = IncidenceRecord::new(&c).unwrap();
            assert_eq!(r.model_incidence, model_incidence(c.rise_type, c.params));
            assert_eq!(r.incidence, r.model_incidence * r.sigma_lower * r.sigma_upper * r.xi);
            assert_eq!(r.orid, r.model_orid * r.rho_lower * r.rho_upper);
        }
    }
}
