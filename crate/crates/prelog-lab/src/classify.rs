//! Minor-rank classification: which side information a channel needs for
//! full pre-log, and whether partial cognition can ever help.
//!
//! Deleting row j and column k from H and checking whether the minor keeps
//! rank K-1 decides whether transmitter k must know message j. Channels that
//! are diagonal, or that concentrate all off-diagonal coupling in one row
//! and column (the cross pattern), are exactly the ones where partial side
//! information never beats none.

use crate::linalg::Mat;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error("matrix is {0}x{1}, not square")]
    NonSquare(usize, usize),
    #[error("matrix has rank {rank} < K = {k}; classification needs full rank")]
    RankDeficient { rank: usize, k: usize },
}

/// Entry (j,k) holds the exact rank of H with row j and column k deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorRankMap {
    pub table: Vec<Vec<usize>>,
}

pub fn minor_rank_map(h: &Mat) -> Result<MinorRankMap, ClassifyError> {
    if h.rows() != h.cols() {
        return Err(ClassifyError::NonSquare(h.rows(), h.cols()));
    }
    let k = h.rows();
    let table = (0..k)
        .map(|j| {
            (0..k)
                .map(|c| h.delete_row_col(j, c).expect("in range").rank())
                .collect()
        })
        .collect();
    Ok(MinorRankMap { table })
}

/// The unique smallest side-information sets achieving pre-log K:
/// S_k = {k} plus every j whose (j,k) minor has full rank K-1.
pub fn minimal_sideinfo_for_full_prelog(h: &Mat) -> Result<Vec<BTreeSet<usize>>, ClassifyError> {
    let map = minor_rank_map(h)?;
    let k = h.rows();
    let rank = h.rank();
    if rank < k {
        return Err(ClassifyError::RankDeficient { rank, k });
    }
    Ok((0..k)
        .map(|col| {
            let mut set = BTreeSet::from([col]);
            for j in 0..k {
                if map.table[j][col] == k - 1 {
                    set.insert(j);
                }
            }
            set
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyWitness {
    Diagonal,
    /// 0-based index of the cross row/column.
    Cross(usize),
}

impl fmt::Display for FamilyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyWitness::Diagonal => write!(f, "diagonal"),
            FamilyWitness::Cross(kstar) => write!(f, "k* = {}", kstar + 1),
        }
    }
}

/// Membership in the family where partial cognition never helps: diagonal
/// with nonzero diagonal, or a cross pattern around some index k* (all other
/// off-diagonal entries zero, the k* row and column and the remaining
/// diagonal nonzero, the (k*,k*) entry unconstrained).
pub fn in_h_family(h: &Mat) -> Result<Option<FamilyWitness>, ClassifyError> {
    if h.rows() != h.cols() {
        return Err(ClassifyError::NonSquare(h.rows(), h.cols()));
    }
    let k = h.rows();
    let diagonal = (0..k).all(|j| !h.get(j, j).is_zero())
        && (0..k).all(|j| (0..k).all(|c| j == c || h.get(j, c).is_zero()));
    if diagonal {
        return Ok(Some(FamilyWitness::Diagonal));
    }
    'next: for kstar in 0..k {
        for j in 0..k {
            for c in 0..k {
                if j == kstar || c == kstar {
                    continue;
                }
                let entry = h.get(j, c);
                if j == c {
                    if entry.is_zero() {
                        continue 'next;
                    }
                } else if !entry.is_zero() {
                    continue 'next;
                }
            }
        }
        for j in 0..k {
            if j != kstar && (h.get(j, kstar).is_zero() || h.get(kstar, j).is_zero()) {
                continue 'next;
            }
        }
        return Ok(Some(FamilyWitness::Cross(kstar)));
    }
    Ok(None)
}

/// Whether some partial setting has a strictly larger pre-log than the
/// no-side-information setting: exactly the complement of family membership.
pub fn partial_helps(h: &Mat) -> Result<bool, ClassifyError> {
    let k = h.rows();
    if h.rows() != h.cols() {
        return Err(ClassifyError::NonSquare(h.rows(), h.cols()));
    }
    let rank = h.rank();
    if rank < k {
        return Err(ClassifyError::RankDeficient { rank, k });
    }
    Ok(in_h_family(h)?.is_none())
}

/// True when every transmitter must know every message for full pre-log,
/// i.e. the minimal sets are all of {1..K}.
pub fn full_cognition_required(minimal: &[BTreeSet<usize>]) -> bool {
    let k = minimal.len();
    minimal.iter().all(|s| s.len() == k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_int};
    use crate::network::{builtin_matrix, gen_wyner};

    #[test]
    fn h1_minor_map() {
        let map = minor_rank_map(&builtin_matrix("H1").unwrap()).unwrap();
        for j in 0..3 {
            for c in 0..3 {
                if j == c {
                    continue;
                }
                let expected = if (j, c) == (2, 0) { 1 } else { 2 };
                assert_eq!(map.table[j][c], expected, "entry ({},{})", j + 1, c + 1);
            }
        }
    }

    #[test]
    fn identity_minor_map() {
        let map = minor_rank_map(&Mat::identity(3)).unwrap();
        for j in 0..3 {
            for c in 0..3 {
                assert_eq!(map.table[j][c], if j == c { 2 } else { 1 });
            }
        }
    }

    #[test]
    fn fully_connected_2x2_minor_map() {
        let h = Mat::from_rows(vec![
            vec![rat_int(1), rat(1, 3)],
            vec![rat(2, 5), rat_int(1)],
        ])
        .unwrap();
        let map = minor_rank_map(&h).unwrap();
        assert_eq!(map.table, vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn minimal_sets_h1() {
        let sets = minimal_sideinfo_for_full_prelog(&builtin_matrix("H1").unwrap()).unwrap();
        assert_eq!(
            sets,
            vec![
                BTreeSet::from([0, 1]),
                BTreeSet::from([0, 1, 2]),
                BTreeSet::from([0, 1, 2]),
            ]
        );
        assert!(!full_cognition_required(&sets));
    }

    #[test]
    fn minimal_sets_h2_full() {
        let sets = minimal_sideinfo_for_full_prelog(&builtin_matrix("H2").unwrap()).unwrap();
        assert!(sets.iter().all(|s| s.len() == 3));
        assert!(full_cognition_required(&sets));
    }

    #[test]
    fn minimal_sets_diagonal() {
        let h = Mat::from_rows(vec![
            vec![rat_int(2), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(5), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat(1, 3)],
        ])
        .unwrap();
        let sets = minimal_sideinfo_for_full_prelog(&h).unwrap();
        assert_eq!(
            sets,
            vec![
                BTreeSet::from([0]),
                BTreeSet::from([1]),
                BTreeSet::from([2]),
            ]
        );
    }

    #[test]
    fn family_h2_cross_at_two() {
        let w = in_h_family(&builtin_matrix("H2").unwrap()).unwrap();
        assert_eq!(w, Some(FamilyWitness::Cross(1)));
    }

    #[test]
    fn family_h1_out() {
        assert_eq!(in_h_family(&builtin_matrix("H1").unwrap()).unwrap(), None);
    }

    #[test]
    fn family_2x2_nonzero_in() {
        let h = Mat::from_rows(vec![
            vec![rat_int(1), rat(1, 3)],
            vec![rat(2, 5), rat_int(1)],
        ])
        .unwrap();
        assert!(in_h_family(&h).unwrap().is_some());
    }

    #[test]
    fn family_k1_diagonal() {
        assert_eq!(
            in_h_family(&Mat::identity(1)).unwrap(),
            Some(FamilyWitness::Diagonal)
        );
    }

    #[test]
    fn family_cross_with_zero_center() {
        // The (k*,k*) entry may vanish.
        let h = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ])
        .unwrap();
        assert_eq!(in_h_family(&h).unwrap(), Some(FamilyWitness::Cross(1)));
    }

    #[test]
    fn partial_helps_examples() {
        assert!(partial_helps(&builtin_matrix("H1").unwrap()).unwrap());
        assert!(!partial_helps(&builtin_matrix("H2").unwrap()).unwrap());
        for k in 3..=6usize {
            let net = gen_wyner(k, &rat(1, 2), 0).unwrap();
            if k == 3 {
                // K = 3 tridiagonal is the cross pattern around the middle.
                assert!(!partial_helps(net.h()).unwrap());
            } else {
                assert!(partial_helps(net.h()).unwrap());
            }
        }
    }

    #[test]
    fn errors() {
        let wide = Mat::zero(2, 3);
        assert!(matches!(
            minor_rank_map(&wide),
            Err(ClassifyError::NonSquare(2, 3))
        ));
        let singular = Mat::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            minimal_sideinfo_for_full_prelog(&singular),
            Err(ClassifyError::RankDeficient { rank: 1, k: 2 })
        ));
    }
}
