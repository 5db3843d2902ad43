//! Channel-use lifting: group mu uses into one use of a muK-by-muK network
//! with a linear processing matrix per receiver, run partial cancelation
//! there, and divide by mu. Any certified rate on the lifted network is a
//! valid bound on the original one, so the search is one-sided: failure to
//! improve proves nothing.

use crate::cancel::{pstar_up_to, verify_witness, PstarResult, Witness};
use crate::linalg::{rat, rat_int, Mat, Rat};
use crate::network::Network;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Processing matrices act on the receiver side: blockdiag(A) * (H x I).
    #[default]
    ReceiverSide,
    /// The displayed product order: (H x I) * blockdiag(A).
    AsWritten,
}

impl Orientation {
    pub fn label(&self) -> &'static str {
        match self {
            Orientation::ReceiverSide => "receiver",
            Orientation::AsWritten => "as-written",
        }
    }
}

/// One lift candidate: mu and a processing matrix per user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftSpec {
    pub mu: usize,
    pub a: Vec<Mat>,
    pub orientation: Orientation,
}

impl LiftSpec {
    pub fn identity(k: usize, mu: usize, orientation: Orientation) -> Self {
        LiftSpec {
            mu,
            a: vec![Mat::identity(mu); k],
            orientation,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LiftedBound {
    pub mu: usize,
    pub pstar_lifted: usize,
    /// pstar_lifted / mu, exact.
    pub bound: Rat,
    pub spec: LiftSpec,
    /// Witness on the lifted network; empty R when even size 1 fails.
    pub witness: Witness,
    pub lifted: Network,
    pub candidates_tried: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum LiftError {
    #[error("mu must be at least 1")]
    ZeroMu,
    #[error("expected {expected} processing matrices, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("processing matrix {0} is not {1}x{1}")]
    WrongShape(usize, usize),
}

/// Build the muK-by-muK network. Lifted user (k,i) maps to row and column
/// mu*(k-1)+i; sub-user (k',i') knows message (k,i) iff k' knows k.
pub fn lift(net: &Network, spec: &LiftSpec) -> Result<Network, LiftError> {
    let k = net.k();
    let mu = spec.mu;
    if mu == 0 {
        return Err(LiftError::ZeroMu);
    }
    if spec.a.len() != k {
        return Err(LiftError::WrongCount {
            expected: k,
            got: spec.a.len(),
        });
    }
    for (idx, a) in spec.a.iter().enumerate() {
        if a.rows() != mu || a.cols() != mu {
            return Err(LiftError::WrongShape(idx + 1, mu));
        }
    }
    let kron = net.h().kron(&Mat::identity(mu));
    let diag = Mat::block_diag(&spec.a);
    let h = match spec.orientation {
        Orientation::ReceiverSide => diag.mul(&kron).expect("sizes agree"),
        Orientation::AsWritten => kron.mul(&diag).expect("sizes agree"),
    };
    let s = (0..k * mu)
        .map(|idx| {
            let user = idx / mu;
            let mut set = BTreeSet::new();
            for &known in &net.sideinfo()[user] {
                for sub in 0..mu {
                    set.insert(known * mu + sub);
                }
            }
            set
        })
        .collect();
    Ok(Network::new_unchecked(h, s))
}

/// The deterministic candidate stream: identity, cyclic-shift staircases,
/// then seeded random small-integer matrices.
fn candidate(k: usize, mu: usize, index: usize, rng: &mut ChaCha8Rng) -> Vec<Mat> {
    if index == 0 {
        return vec![Mat::identity(mu); k];
    }
    if index < mu {
        let shift = index;
        return (0..k)
            .map(|j| {
                let mut m = Mat::zero(mu, mu);
                for r in 0..mu {
                    m.set(r, (r + shift * j) % mu, rat_int(1));
                }
                m
            })
            .collect();
    }
    (0..k)
        .map(|_| {
            let mut m = Mat::zero(mu, mu);
            for r in 0..mu {
                for c in 0..mu {
                    m.set(r, c, rat_int(rng.gen_range(-3..=3)));
                }
            }
            m
        })
        .collect()
}

/// Best bound found for one mu within the budget. `cap`, when given, must be
/// a valid upper bound on the pre-log; it only lets the search stop once no
/// candidate could improve further, never changes the result.
pub fn lifted_lower_bound(
    net: &Network,
    mu: usize,
    budget: usize,
    seed: u64,
    orientation: Orientation,
    cap: Option<&Rat>,
) -> Result<LiftedBound, LiftError> {
    if mu == 0 {
        return Err(LiftError::ZeroMu);
    }
    let k = net.k();
    let p_cap = match cap {
        Some(c) => (c * rat_int(mu as i64))
            .floor()
            .to_integer()
            .to_usize()
            .unwrap_or(k * mu)
            .min(k * mu),
        None => k * mu,
    };

    // Scaling a single use by one matrix row cannot create new cancelation
    // patterns, so mu = 1 needs only the identity candidate.
    let effective_budget = if mu == 1 { 1 } else { budget.max(1) };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, LiftSpec, PstarResult, Network)> = None;
    let mut tried = 0;
    let chunk = rayon::current_num_threads().max(1) * 2;
    let mut index = 0;
    'outer: while index < effective_budget {
        let upper = (index + chunk).min(effective_budget);
        let batch: Vec<(usize, Vec<Mat>)> = (index..upper)
            .map(|i| (i, candidate(k, mu, i, &mut rng)))
            .collect();
        index = upper;
        let evaluated: Vec<(usize, LiftSpec, PstarResult, Network)> = batch
            .into_par_iter()
            .map(|(i, a)| {
                let spec = LiftSpec { mu, a, orientation };
                let lifted = lift(net, &spec).expect("candidate shapes are valid");
                let ps = pstar_up_to(&lifted, p_cap);
                (i, spec, ps, lifted)
            })
            .collect();
        for (_, spec, ps, lifted) in evaluated {
            tried += 1;
            let better = match &best {
                Some((bp, ..)) => ps.pstar > *bp,
                None => true,
            };
            if better {
                let p = ps.pstar;
                best = Some((p, spec, ps, lifted));
                if p >= p_cap {
                    break 'outer;
                }
            }
        }
    }

    let (p, spec, ps, lifted) = best.expect("budget >= 1");
    Ok(LiftedBound {
        mu,
        pstar_lifted: p,
        bound: rat(p as i64, mu as i64),
        spec,
        witness: ps.witness,
        lifted,
        candidates_tried: tried,
    })
}

/// Maximum of the lifted bound over mu in 1..=mu_max, ties toward smaller mu.
pub fn best_lower_bound(
    net: &Network,
    mu_max: usize,
    budget: usize,
    seed: u64,
    orientation: Orientation,
    cap: Option<&Rat>,
) -> Result<LiftedBound, LiftError> {
    if mu_max == 0 {
        return Err(LiftError::ZeroMu);
    }
    let mut best: Option<LiftedBound> = None;
    for mu in 1..=mu_max {
        let r = lifted_lower_bound(net, mu, budget, seed, orientation, cap)?;
        let better = match &best {
            Some(b) => r.bound > b.bound,
            None => true,
        };
        if better {
            best = Some(r);
        }
        if let (Some(b), Some(c)) = (&best, cap) {
            if &b.bound >= c {
                break;
            }
        }
    }
    Ok(best.expect("mu_max >= 1"))
}

/// Re-check a lifted bound end to end: the witness must certify
/// pstar_lifted interference-free receivers on the lifted network and the
/// bound must equal pstar_lifted / mu.
pub fn verify_lifted(bound: &LiftedBound) -> Result<(), String> {
    if bound.bound != rat(bound.pstar_lifted as i64, bound.mu as i64) {
        return Err("bound is not pstar_lifted / mu".into());
    }
    if bound.witness.r_set.len() != bound.pstar_lifted {
        return Err("witness size differs from pstar_lifted".into());
    }
    if bound.pstar_lifted > 0 {
        verify_witness(&bound.lifted, &bound.witness).map_err(|e| e.to_string())?;
    }
    Ok(())
}
