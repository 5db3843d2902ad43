//! Shared helpers for the integration suites: seeded random networks and
//! side-information settings.

use num_traits::Zero;
use prelog_lab::linalg::{rat, Mat, Rat};
use prelog_lab::network::Network;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Random full-rank K x K channel with small rational entries and a nonzero
/// diagonal. Rejection-samples until the rank check passes.
pub fn random_full_rank(k: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let mut rows = Vec::with_capacity(k);
        for r in 0..k {
            let mut row = Vec::with_capacity(k);
            for c in 0..k {
                let v = if r == c {
                    // Nonzero direct gain.
                    let n = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
                    rat(n, rng.gen_range(1..=2))
                } else {
                    let n = rng.gen_range(-2i64..=2);
                    rat(n, rng.gen_range(1..=2))
                };
                row.push(v);
            }
            rows.push(row);
        }
        let m = Mat::from_rows(rows).unwrap();
        if m.rank() == k {
            return m;
        }
    }
}

/// Random side information: k always knows its own message, every other
/// message independently with probability ~1/3.
pub fn random_sideinfo(k: usize, rng: &mut ChaCha8Rng) -> Vec<BTreeSet<usize>> {
    (0..k)
        .map(|me| {
            let mut s = BTreeSet::from([me]);
            for other in 0..k {
                if other != me && rng.gen_range(0..3) == 0 {
                    s.insert(other);
                }
            }
            s
        })
        .collect()
}

pub fn random_network(k: usize, rng: &mut ChaCha8Rng) -> Network {
    Network::new_unchecked(random_full_rank(k, rng), random_sideinfo(k, rng))
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every side-information setting at size K: each S_k is {k} plus any subset
/// of the other K-1 indices. 2^(K(K-1)) settings in a fixed order.
pub fn all_sideinfo_settings(k: usize) -> Vec<Vec<BTreeSet<usize>>> {
    let per_user: Vec<Vec<BTreeSet<usize>>> = (0..k)
        .map(|me| {
            let others: Vec<usize> = (0..k).filter(|&j| j != me).collect();
            (0..(1u32 << others.len()))
                .map(|mask| {
                    let mut s = BTreeSet::from([me]);
                    for (bit, &j) in others.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            s.insert(j);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let counts: Vec<usize> = per_user.iter().map(Vec::len).collect();
    let total: usize = counts.iter().product();
    for mut idx in 0..total {
        let mut setting = Vec::with_capacity(k);
        for user in 0..k {
            setting.push(per_user[user][idx % counts[user]].clone());
            idx /= counts[user];
        }
        out.push(setting);
    }
    out
}

#[allow(dead_code)]
pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}
