//! Linear partial-cancelation: transmitters send linear combinations of the
//! Gaussian codewords they know, chosen so that interference vanishes at a
//! subset R of receivers. The best achievable |R| is the scheme's pre-log
//! lower bound p*.

use crate::linalg::{dot, in_row_span_fast, rat_int, Mat, Rat};
use crate::network::Network;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Cap on how many maximum-size feasible subsets a [`PstarResult`] records.
pub const MAX_REPORTED_SETS: usize = 64;

/// Coefficients certifying that every receiver in `r_set` is interference
/// free. Row j of `d` holds codeword j's coefficients across transmitters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub r_set: BTreeSet<usize>,
    pub d: Mat,
    pub xi: BTreeMap<usize, Rat>,
}

#[derive(Debug, Clone)]
pub struct PstarResult {
    pub pstar: usize,
    pub witness: Witness,
    /// Every feasible subset of maximum size, capped at [`MAX_REPORTED_SETS`].
    pub maximizing_sets: Vec<BTreeSet<usize>>,
    pub maximizing_truncated: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CancelError {
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset contains out-of-range receiver {0}")]
    BadReceiver(usize),
    #[error("witness does not match the network: {0}")]
    Mismatch(String),
}

/// Why a claimed witness fails re-verification.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error(
        "d[{codeword}][{transmitter}] must be zero (codeword silenced or transmitter uninformed)"
    )]
    NonzeroForbidden { codeword: usize, transmitter: usize },
    #[error("residual interference of codeword {codeword} at receiver {receiver}")]
    ResidualInterference { codeword: usize, receiver: usize },
    #[error("own gain of receiver {receiver} is zero or disagrees with the stored xi")]
    BadOwnGain { receiver: usize },
    #[error("transmitter {transmitter} exceeds unit power")]
    PowerExceeded { transmitter: usize },
}

fn check_subset(net: &Network, r: &BTreeSet<usize>) -> Result<(), CancelError> {
    if r.is_empty() {
        return Err(CancelError::EmptySubset);
    }
    for &j in r {
        if j >= net.k() {
            return Err(CancelError::BadReceiver(j + 1));
        }
    }
    Ok(())
}

/// Rank form of the feasibility criterion, no witness construction.
///
/// R is feasible iff for every i in R the row h_i restricted to the columns
/// C_i = {k : i in S_k} lies outside the span of the other R-rows restricted
/// to the same columns. Codewords outside R are silenced, which loses
/// nothing: their gains at R-receivers would have to vanish anyway.
fn feasible_quick(net: &Network, r: &[usize]) -> bool {
    let h = net.h();
    for &i in r {
        let cols = net.knowers(i);
        let others: Vec<usize> = r.iter().copied().filter(|&j| j != i).collect();
        let own: Vec<Rat> = cols.iter().map(|&k| h.get(i, k).clone()).collect();
        let rows = h.select_rows(&others).select_cols(&cols);
        if in_row_span_fast(&own, &rows) {
            return false;
        }
    }
    true
}

/// Feasibility of an explicit receiver subset, with a certified witness on
/// success.
pub fn subset_feasible(net: &Network, r: &BTreeSet<usize>) -> Result<Option<Witness>, CancelError> {
    check_subset(net, r)?;
    let members: Vec<usize> = r.iter().copied().collect();
    if !feasible_quick(net, &members) {
        return Ok(None);
    }
    Ok(Some(build_witness(net, &members)))
}

/// Deterministic witness for a subset already known feasible: per codeword,
/// the first nullspace basis vector with a nonzero own gain; then one global
/// rational scale bringing every transmitter under unit power.
fn build_witness(net: &Network, r: &[usize]) -> Witness {
    let k = net.k();
    let h = net.h();
    let mut d = Mat::zero(k, k);
    let mut xi = BTreeMap::new();
    for &i in r {
        let cols = net.knowers(i);
        let others: Vec<usize> = r.iter().copied().filter(|&j| j != i).collect();
        let constraints = h.select_rows(&others).select_cols(&cols);
        let own: Vec<Rat> = cols.iter().map(|&c| h.get(i, c).clone()).collect();
        let basis = constraints.nullspace();
        let v = basis
            .iter()
            .find(|v| !dot(&own, v).is_zero())
            .expect("feasible subset must admit a nonzero own gain");
        for (slot, &col) in cols.iter().enumerate() {
            d.set(i, col, v[slot].clone());
        }
        xi.insert(i, dot(&own, v));
    }

    // Power: one scalar on all codewords keeps every cancelation identity
    // intact while bringing each column sum of squares under 1.
    let mut worst = Rat::zero();
    for col in 0..k {
        let mut sum = Rat::zero();
        for row in 0..k {
            let e = d.get(row, col);
            if !e.is_zero() {
                sum += e * e;
            }
        }
        if sum > worst {
            worst = sum;
        }
    }
    if worst > rat_int(1) {
        let scale = Rat::from_integer(ceil_sqrt_big(worst.ceil().to_integer())).recip();
        for row in 0..k {
            for col in 0..k {
                if !d.get(row, col).is_zero() {
                    let v = d.get(row, col) * &scale;
                    d.set(row, col, v);
                }
            }
        }
        for v in xi.values_mut() {
            *v *= &scale;
        }
    }

    Witness {
        r_set: r.iter().copied().collect(),
        d,
        xi,
    }
}

fn ceil_sqrt_big(n: BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    let mut m = n.sqrt();
    if &m * &m < n {
        m += 1;
    }
    m
}

/// Exhaustive maximization of |R|: sizes descend from K, subsets of a size
/// are scanned lexicographically, the first feasible size wins. The returned
/// witness belongs to the lexicographically smallest maximizer.
pub fn pstar(net: &Network) -> PstarResult {
    pstar_up_to(net, net.k())
}

/// Like [`pstar`] but never looks at subsets larger than `max_size`. With a
/// cap that is a proven upper bound on p* the result is identical; callers
/// use this to keep lifted searches cheap.
pub fn pstar_up_to(net: &Network, max_size: usize) -> PstarResult {
    let k = net.k();
    for size in (1..=max_size.min(k)).rev() {
        let mut maxima: Vec<BTreeSet<usize>> = Vec::new();
        let mut truncated = false;
        for combo in (0..k).combinations(size) {
            if feasible_quick(net, &combo) {
                if maxima.len() < MAX_REPORTED_SETS {
                    maxima.push(combo.iter().copied().collect());
                } else {
                    truncated = true;
                }
            }
        }
        if let Some(first) = maxima.first() {
            let members: Vec<usize> = first.iter().copied().collect();
            let witness = build_witness(net, &members);
            debug_assert!(verify_witness(net, &witness).is_ok());
            return PstarResult {
                pstar: size,
                witness,
                maximizing_sets: maxima,
                maximizing_truncated: truncated,
            };
        }
    }
    // Possible only when some receiver can never see its own codeword (for
    // example a vanishing direct gain with no cognition); the scheme then
    // certifies nothing.
    PstarResult {
        pstar: 0,
        witness: Witness {
            r_set: BTreeSet::new(),
            d: Mat::zero(k, k),
            xi: BTreeMap::new(),
        },
        maximizing_sets: Vec::new(),
        maximizing_truncated: false,
    }
}

/// Re-verify every witness invariant exactly.
pub fn verify_witness(net: &Network, w: &Witness) -> Result<(), WitnessError> {
    let k = net.k();
    let h = net.h();
    for j in 0..k {
        for t in 0..k {
            if !w.d.get(j, t).is_zero()
                && (!net.sideinfo()[t].contains(&j) || !w.r_set.contains(&j))
            {
                return Err(WitnessError::NonzeroForbidden {
                    codeword: j + 1,
                    transmitter: t + 1,
                });
            }
        }
    }
    for &j in &w.r_set {
        for i in 0..k {
            let gain = dot(h.row(j), w.d.row(i));
            if i == j {
                let stored = w.xi.get(&j);
                if gain.is_zero() || stored != Some(&gain) {
                    return Err(WitnessError::BadOwnGain { receiver: j + 1 });
                }
            } else if !gain.is_zero() {
                return Err(WitnessError::ResidualInterference {
                    codeword: i + 1,
                    receiver: j + 1,
                });
            }
        }
    }
    for t in 0..k {
        let mut sum = Rat::zero();
        for j in 0..k {
            let e = w.d.get(j, t);
            if !e.is_zero() {
                sum += e * e;
            }
        }
        if sum > rat_int(1) {
            return Err(WitnessError::PowerExceeded { transmitter: t + 1 });
        }
    }
    Ok(())
}

/// Achievable sum rate in nats: (|R|/2) ln(1 + min_j xi_j^2 P). The minimum
/// of xi^2 is exact; only the final logarithm is floating point.
pub fn sum_rate_lower_bound(net: &Network, w: &Witness, p: f64) -> Result<f64, CancelError> {
    verify_witness(net, w).map_err(|e| CancelError::Mismatch(e.to_string()))?;
    if w.r_set.is_empty() {
        return Ok(0.0);
    }
    let min_xi2 =
        w.xi.values()
            .map(|x| x * x)
            .min()
            .expect("nonempty witness");
    let min_xi2 = min_xi2.to_f64().expect("xi^2 fits in f64");
    Ok(w.r_set.len() as f64 / 2.0 * (min_xi2 * p).ln_1p())
}

/// Per-receiver achievable rates (1/2) ln(1 + xi_j^2 P) on the parallel
/// single-user channels, in receiver order.
pub fn per_receiver_rates(w: &Witness, p: f64) -> Vec<(usize, f64)> {
    w.xi.iter()
        .map(|(&j, xi)| {
            let xi2 = (xi * xi).to_f64().expect("xi^2 fits in f64");
            (j, 0.5 * (xi2 * p).ln_1p())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub sum_rate_lower_nats: f64,
    pub half_log1p_nats: f64,
    /// Empirical pre-log estimate: bound / ((1/2) ln(1+P)).
    pub ratio: f64,
}

pub fn rate_sweep(
    net: &Network,
    w: &Witness,
    powers: &[f64],
) -> Result<Vec<SweepRow>, CancelError> {
    powers
        .iter()
        .map(|&p| {
            let bound = sum_rate_lower_bound(net, w, p)?;
            let half = 0.5 * p.ln_1p();
            Ok(SweepRow {
                p,
                sum_rate_lower_nats: bound,
                half_log1p_nats: half,
                ratio: if half > 0.0 { bound / half } else { 0.0 },
            })
        })
        .collect()
}
