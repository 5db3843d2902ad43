//! Structural degradedness constraints and the pre-log upper bound.
//!
//! A constraint is an ordered receiver list (j_1..j_q) and a disjoint
//! receiver set V: for each position i, subtracting a combination of the
//! V-rows from row j_i must leave zero at every transmitter that knows any
//! of the messages j_i..j_q. Each feasible triple bounds the sum of the
//! named pre-logs by |V|; an exact LP combines all of them.
//!
//! The independence condition is implemented structurally (zero coefficient
//! at every informed transmitter). That is sufficient for soundness; no
//! completeness claim is made.

use crate::cancel::PstarResult;
use crate::linalg::{in_row_span, in_row_span_fast, rat_int, Mat, Rat};
use crate::lp::{solve_max, LpProblem, LpSolution};
use crate::network::Network;
use num_traits::ToPrimitive;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Ordered receivers (j_1..j_q), 0-based.
    pub jseq: Vec<usize>,
    /// Sorted helper receivers V, disjoint from `jseq`.
    pub vset: Vec<usize>,
    /// Exact coefficients, one vector over `vset` per position in `jseq`.
    pub alphas: Vec<Vec<Rat>>,
}

impl Constraint {
    /// Receivers whose pre-logs the inequality sums.
    pub fn index_set(&self) -> BTreeSet<usize> {
        self.jseq.iter().chain(&self.vset).copied().collect()
    }

    pub fn rhs(&self) -> usize {
        self.vset.len()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum UpperError {
    #[error("receiver sequence and helper set must be nonempty")]
    Empty,
    #[error("receiver {0} appears in both the sequence and the helper set")]
    Overlap(usize),
    #[error("receiver {0} out of range")]
    OutOfRange(usize),
    #[error("receiver {0} repeated in the sequence")]
    Repeated(usize),
    #[error("max_block must lie in 2..=K, got {0}")]
    BadBlock(usize),
    #[error("linear program failed: {0}")]
    Lp(#[from] crate::lp::LpError),
}

/// Transmitters that know any message in `suffix_mask`.
fn informed_cols(net: &Network, suffix_mask: u64) -> Vec<usize> {
    (0..net.k())
        .filter(|&k| {
            net.sideinfo()[k]
                .iter()
                .any(|&j| suffix_mask & (1 << j) != 0)
        })
        .collect()
}

/// Exact feasibility test of one (Jseq, V) pair.
pub fn constraint_feasible(
    net: &Network,
    jseq: &[usize],
    vset: &[usize],
) -> Result<Option<Constraint>, UpperError> {
    if jseq.is_empty() || vset.is_empty() {
        return Err(UpperError::Empty);
    }
    let k = net.k();
    let mut seen = BTreeSet::new();
    for &j in jseq.iter().chain(vset) {
        if j >= k {
            return Err(UpperError::OutOfRange(j + 1));
        }
        if !seen.insert(j) {
            return Err(UpperError::Repeated(j + 1));
        }
    }

    let h = net.h();
    let vsorted: Vec<usize> = {
        let mut v = vset.to_vec();
        v.sort_unstable();
        v
    };
    let mut alphas = Vec::with_capacity(jseq.len());
    for i in 0..jseq.len() {
        let suffix_mask = jseq[i..].iter().fold(0u64, |m, &j| m | (1 << j));
        let cols = informed_cols(net, suffix_mask);
        let own: Vec<Rat> = cols.iter().map(|&c| h.get(jseq[i], c).clone()).collect();
        let rows = h.select_rows(&vsorted).select_cols(&cols);
        match in_row_span(&own, &rows).expect("shapes agree") {
            Some(alpha) => alphas.push(alpha),
            None => return Ok(None),
        }
    }
    Ok(Some(Constraint {
        jseq: jseq.to_vec(),
        vset: vsorted,
        alphas,
    }))
}

/// All feasible constraints with q + |V| <= max_block.
///
/// Sequences are grown back to front: a longer sequence only adds one new
/// zero-pattern condition, and a dead suffix can never revive, so the search
/// prunes hard. Output is deduplicated per inequality (index set and
/// right-hand side), keeping the first witness ordering found, and finally
/// stripped of constraints implied by a stronger one together with the unit
/// box bounds.
pub fn enumerate_constraints(
    net: &Network,
    max_block: usize,
) -> Result<Vec<Constraint>, UpperError> {
    let k = net.k();
    if max_block < 2 || max_block > k {
        return Err(UpperError::BadBlock(max_block));
    }
    let h = net.h();

    let mut found: Vec<Constraint> = Vec::new();
    let mut seen_pairs: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();

    for vmask in 1u64..(1 << k) {
        let vset: Vec<usize> = (0..k).filter(|&i| vmask & (1 << i) != 0).collect();
        if vset.len() + 1 > max_block {
            continue;
        }
        let vrows_full = h.select_rows(&vset);
        let pool: Vec<usize> = (0..k).filter(|&i| vmask & (1 << i) == 0).collect();
        let mut tail: Vec<usize> = Vec::new();
        dfs_extend(
            net,
            &vrows_full,
            vset.len(),
            &pool,
            max_block,
            &mut tail,
            0,
            &mut |tail_rev: &[usize]| {
                let jseq: Vec<usize> = tail_rev.iter().rev().copied().collect();
                let mut jsorted = jseq.clone();
                jsorted.sort_unstable();
                if seen_pairs.insert((jsorted, vset.clone())) {
                    if let Some(c) =
                        constraint_feasible(net, &jseq, &vset).expect("validated inputs")
                    {
                        found.push(c);
                    }
                }
            },
        );
    }

    // One representative per inequality, deterministic order.
    found.sort_by_key(|c| {
        let set: Vec<usize> = c.index_set().into_iter().collect();
        (set.len(), set, c.rhs(), c.jseq.clone())
    });
    let mut by_inequality: Vec<Constraint> = Vec::new();
    let mut seen_ineq: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
    for c in found {
        let key: (Vec<usize>, usize) = (c.index_set().into_iter().collect(), c.rhs());
        if seen_ineq.insert(key) {
            by_inequality.push(c);
        }
    }

    // Drop implied inequalities. A kept (T', rhs') implies (T, rhs) in two
    // ways: T' inside T with rhs' + |T \ T'| <= rhs (pad with box bounds),
    // or T' containing T with rhs' <= rhs (pad with eta >= 0).
    let masks: Vec<(u64, usize)> = by_inequality
        .iter()
        .map(|c| {
            (
                c.index_set().iter().fold(0u64, |m, &j| m | (1 << j)),
                c.rhs(),
            )
        })
        .collect();
    let keep: Vec<bool> = masks
        .iter()
        .enumerate()
        .map(|(a, &(mask_a, rhs_a))| {
            !masks.iter().enumerate().any(|(b, &(mask_b, rhs_b))| {
                a != b
                    && ((mask_b & mask_a == mask_b
                        && rhs_b + (mask_a ^ mask_b).count_ones() as usize <= rhs_a)
                        || (mask_b & mask_a == mask_a && rhs_b <= rhs_a))
            })
        })
        .collect();
    Ok(by_inequality
        .into_iter()
        .zip(keep)
        .filter_map(|(c, keep)| keep.then_some(c))
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn dfs_extend(
    net: &Network,
    vrows_full: &Mat,
    vlen: usize,
    pool: &[usize],
    max_block: usize,
    tail: &mut Vec<usize>,
    tail_mask: u64,
    record: &mut impl FnMut(&[usize]),
) {
    if tail.len() + vlen >= max_block {
        return;
    }
    let h = net.h();
    for &j in pool {
        if tail_mask & (1 << j) != 0 {
            continue;
        }
        let new_mask = tail_mask | (1 << j);
        let cols = informed_cols(net, new_mask);
        let own: Vec<Rat> = cols.iter().map(|&c| h.get(j, c).clone()).collect();
        let rows = vrows_full.select_cols(&cols);
        if !in_row_span_fast(&own, &rows) {
            continue;
        }
        tail.push(j);
        record(tail);
        dfs_extend(
            net, vrows_full, vlen, pool, max_block, tail, new_mask, record,
        );
        tail.pop();
    }
}

#[derive(Debug, Clone)]
pub struct UpperBound {
    pub value: Rat,
    pub constraints: Vec<Constraint>,
    /// Indices into `constraints` of the inequalities tight at the optimum.
    pub tight: Vec<usize>,
    pub lp: LpSolution,
}

/// Exact LP optimum of: maximize sum of eta_j subject to every structural
/// constraint and 0 <= eta_j <= 1.
pub fn prelog_upper_bound(net: &Network) -> Result<UpperBound, UpperError> {
    prelog_upper_bound_capped(net, net.k())
}

pub fn prelog_upper_bound_capped(
    net: &Network,
    max_block: usize,
) -> Result<UpperBound, UpperError> {
    let k = net.k();
    let constraints = if k < 2 {
        Vec::new()
    } else {
        enumerate_constraints(net, max_block)?
    };
    let lp = solve_max(&lp_problem_for(net, &constraints))?;
    Ok(UpperBound {
        value: lp.value.clone(),
        tight: lp.tight.clone(),
        constraints,
        lp,
    })
}

pub fn lp_problem_for(net: &Network, constraints: &[Constraint]) -> LpProblem {
    let k = net.k();
    let mat = if constraints.is_empty() {
        Mat::zero(0, k)
    } else {
        Mat::from_rows(
            constraints
                .iter()
                .map(|c| {
                    let set = c.index_set();
                    (0..k)
                        .map(|j| {
                            if set.contains(&j) {
                                rat_int(1)
                            } else {
                                rat_int(0)
                            }
                        })
                        .collect()
                })
                .collect(),
        )
        .expect("uniform rows")
    };
    LpProblem {
        objective: vec![rat_int(1); k],
        constraints: mat,
        rhs: constraints
            .iter()
            .map(|c| rat_int(c.rhs() as i64))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyFlag {
    /// The LP upper bound fell below p*; the soundness ordering is broken.
    UpperBelowLower { lower: Rat, upper: Rat },
    /// p* <= K-2 yet the LP could not push the bound below K-1.
    GapRuleViolated { upper: Rat },
    /// A declared exact value landed in the forbidden open interval (K-1, K).
    ForbiddenInterval { value: Rat },
}

impl fmt::Display for ConsistencyFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConsistencyFlag::UpperBelowLower { lower, upper } => {
                write!(f, "upper bound {upper} below lower bound {lower}")
            }
            ConsistencyFlag::GapRuleViolated { upper } => {
                write!(f, "p* <= K-2 but upper bound {upper} is not below K-1")
            }
            ConsistencyFlag::ForbiddenInterval { value } => {
                write!(f, "exact value {value} inside the open interval (K-1, K)")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundVerdict {
    pub lower: Rat,
    pub upper: Rat,
    pub exact: Option<Rat>,
    pub flags: Vec<ConsistencyFlag>,
}

/// Combine p* with the LP bound and apply the integer-threshold rules:
/// p* = K or K-1 pins the pre-log exactly regardless of LP slack; p* <= K-2
/// requires the upper bound to fall strictly below K-1; nothing exact may
/// land in the open interval (K-1, K).
pub fn combine_bounds(net: &Network, ps: &PstarResult, upper: &UpperBound) -> BoundVerdict {
    let k = net.k();
    let k_rat = rat_int(k as i64);
    let km1 = rat_int(k as i64 - 1);
    let lower = rat_int(ps.pstar as i64);
    let up = upper.value.clone();
    let mut flags = Vec::new();

    if up < lower {
        flags.push(ConsistencyFlag::UpperBelowLower {
            lower: lower.clone(),
            upper: up.clone(),
        });
    }

    let exact = if ps.pstar == k || ps.pstar + 1 == k || lower == up {
        Some(lower.clone())
    } else {
        None
    };

    if ps.pstar + 2 <= k && up >= km1 {
        flags.push(ConsistencyFlag::GapRuleViolated { upper: up.clone() });
    }
    if let Some(e) = &exact {
        if e > &km1 && e < &k_rat {
            flags.push(ConsistencyFlag::ForbiddenInterval { value: e.clone() });
        }
    }

    BoundVerdict {
        lower,
        upper: up,
        exact,
        flags,
    }
}

/// Spectral norm of H in floating point, for the informational rate-level
/// printout only; every bound stays rational.
pub fn operator_norm_f64(h: &Mat) -> f64 {
    let n = h.rows();
    let m = h.cols();
    if n == 0 || m == 0 {
        return 0.0;
    }
    let a: Vec<Vec<f64>> = (0..n)
        .map(|r| h.row(r).iter().map(|x| x.to_f64().unwrap_or(0.0)).collect())
        .collect();
    let mut v = vec![1.0f64; m];
    let mut norm = 0.0;
    for _ in 0..200 {
        let av: Vec<f64> = (0..n)
            .map(|i| (0..m).map(|j| a[i][j] * v[j]).sum())
            .collect();
        let w: Vec<f64> = (0..m)
            .map(|j| (0..n).map(|i| a[i][j] * av[i]).sum())
            .collect();
        norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for (x, wj) in v.iter_mut().zip(&w) {
            *x = wj / norm;
        }
    }
    norm.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cancel::pstar;
    use crate::linalg::rat;
    use crate::network::{builtin_matrix, gen_cyclic, SideInfoKind};
    use num_traits::Zero;

    fn h1_none() -> Network {
        Network::with_uniform_sideinfo(builtin_matrix("H1").unwrap(), SideInfoKind::None)
    }

    fn h2_none() -> Network {
        Network::with_uniform_sideinfo(builtin_matrix("H2").unwrap(), SideInfoKind::None)
    }

    #[test]
    fn h1_triple_constraint() {
        let net = h1_none();
        let c = constraint_feasible(&net, &[1, 2], &[0]).unwrap().unwrap();
        assert_eq!(c.alphas[0], vec![rat_int(2)]);
        assert_eq!(c.alphas[1], vec![rat_int(4)]);
        assert_eq!(c.index_set(), BTreeSet::from([0, 1, 2]));
        assert_eq!(c.rhs(), 1);
    }

    #[test]
    fn h2_pair_constraint() {
        let net = h2_none();
        let c = constraint_feasible(&net, &[0], &[1]).unwrap().unwrap();
        assert_eq!(c.alphas[0], vec![rat_int(2)]);
    }

    #[test]
    fn h2_ordered_pair_infeasible() {
        let net = h2_none();
        assert!(constraint_feasible(&net, &[2, 0], &[1]).unwrap().is_none());
    }

    #[test]
    fn constraint_input_errors() {
        let net = h2_none();
        assert!(matches!(
            constraint_feasible(&net, &[], &[1]),
            Err(UpperError::Empty)
        ));
        assert!(matches!(
            constraint_feasible(&net, &[1], &[1]),
            Err(UpperError::Repeated(2))
        ));
        assert!(matches!(
            constraint_feasible(&net, &[9], &[1]),
            Err(UpperError::OutOfRange(10))
        ));
    }

    #[test]
    fn enumerate_h2_pairwise_only() {
        let net = h2_none();
        let cs = enumerate_constraints(&net, 3).unwrap();
        let sets: Vec<(BTreeSet<usize>, usize)> =
            cs.iter().map(|c| (c.index_set(), c.rhs())).collect();
        assert_eq!(
            sets,
            vec![(BTreeSet::from([0, 1]), 1), (BTreeSet::from([1, 2]), 1)]
        );
    }

    #[test]
    fn enumerate_h1_includes_triple() {
        let net = h1_none();
        let cs = enumerate_constraints(&net, 3).unwrap();
        assert!(cs
            .iter()
            .any(|c| c.index_set() == BTreeSet::from([0, 1, 2]) && c.rhs() == 1));
    }

    #[test]
    fn enumerate_full_sideinfo_empty() {
        for k in 2..=4usize {
            let mut h = Mat::from_rows(
                (0..k)
                    .map(|r| (0..k).map(|c| rat_int(1 + (r * k + c) as i64)).collect())
                    .collect(),
            )
            .unwrap();
            for i in 0..k {
                let v = h.get(i, i) + rat_int(100);
                h.set(i, i, v);
            }
            let net = Network::with_uniform_sideinfo(h, SideInfoKind::Full);
            assert!(enumerate_constraints(&net, k).unwrap().is_empty());
        }
    }

    #[test]
    fn alphas_reproduce_rows_exactly() {
        let net = h1_none();
        for c in enumerate_constraints(&net, 3).unwrap() {
            for (i, alpha) in c.alphas.iter().enumerate() {
                let suffix_mask = c.jseq[i..].iter().fold(0u64, |m, &j| m | (1 << j));
                let cols = informed_cols(&net, suffix_mask);
                for (slot, &col) in cols.iter().enumerate() {
                    let mut lhs = Rat::zero();
                    for (vpos, &v) in c.vset.iter().enumerate() {
                        lhs += &alpha[vpos] * net.h().get(v, col);
                    }
                    assert_eq!(&lhs, net.h().get(c.jseq[i], col), "slot {slot}");
                }
            }
        }
    }

    #[test]
    fn upper_h1_none_is_one() {
        let ub = prelog_upper_bound(&h1_none()).unwrap();
        assert_eq!(ub.value, rat_int(1));
    }

    #[test]
    fn upper_h2_none_is_two() {
        let ub = prelog_upper_bound(&h2_none()).unwrap();
        assert_eq!(ub.value, rat_int(2));
    }

    #[test]
    fn upper_full_sideinfo_is_k() {
        let net = Network::with_uniform_sideinfo(builtin_matrix("H1").unwrap(), SideInfoKind::Full);
        let ub = prelog_upper_bound(&net).unwrap();
        assert_eq!(ub.value, rat_int(3));
    }

    #[test]
    fn upper_cyclic_matches_ratio() {
        for k in 3..=4usize {
            let net = gen_cyclic(k).unwrap();
            let ub = prelog_upper_bound(&net).unwrap();
            assert_eq!(ub.value, rat(k as i64, k as i64 - 1));
        }
    }

    #[test]
    fn constraint_growth_never_raises_lp() {
        let net = h1_none();
        let all = enumerate_constraints(&net, 3).unwrap();
        let mut prev = rat_int(3);
        for take in 0..=all.len() {
            let lp = solve_max(&lp_problem_for(&net, &all[..take])).unwrap();
            assert!(lp.value <= prev);
            prev = lp.value;
        }
    }

    #[test]
    fn combine_bounds_examples() {
        let net = h2_none();
        let v = combine_bounds(&net, &pstar(&net), &prelog_upper_bound(&net).unwrap());
        assert_eq!(v.exact, Some(rat_int(2)));
        assert!(v.flags.is_empty());

        let net = Network::new_unchecked(
            builtin_matrix("H1").unwrap(),
            vec![
                BTreeSet::from([0, 1]),
                BTreeSet::from([0, 1, 2]),
                BTreeSet::from([0, 1, 2]),
            ],
        );
        let v = combine_bounds(&net, &pstar(&net), &prelog_upper_bound(&net).unwrap());
        assert_eq!(v.exact, Some(rat_int(3)));
        assert!(v.flags.is_empty());

        let net = h1_none();
        let v = combine_bounds(&net, &pstar(&net), &prelog_upper_bound(&net).unwrap());
        assert_eq!(v.exact, Some(rat_int(1)));
        assert!(v.flags.is_empty());
    }

    #[test]
    fn operator_norm_sanity() {
        let id = Mat::identity(3);
        assert!((operator_norm_f64(&id) - 1.0).abs() < 1e-9);
        let h = builtin_matrix("H2").unwrap();
        let n = operator_norm_f64(&h);
        // 3x3 symmetric tridiagonal with 1 on the diagonal and 1/2 off it:
        // eigenvalues 1 and 1 +/- sqrt(2)/2.
        assert!((n - (1.0 + 0.5 * 2.0f64.sqrt())).abs() < 1e-9);
    }
}
