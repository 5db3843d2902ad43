//! Bundled example networks with expected results, plus deliberately
//! redundant oracles: a nullspace-route p* search and an LP vertex
//! enumerator. The oracles share no decision code with the implementations
//! they check.

use crate::analyze::{analyze, AnalyzeOptions, FinalVerdict};
use crate::cancel::pstar;
use crate::classify::in_h_family;
use crate::lift::{best_lower_bound, Orientation};
use crate::linalg::{dot, parse_rat, Mat, Rat};
use crate::network::Network;
use crate::upper::prelog_upper_bound;
use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Deserialize;
use std::collections::BTreeSet;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("brute-force oracle supports K <= 4, got {0}")]
    TooLarge(usize),
}

/// Independent p* computation for K <= 4: every nonempty subset is tested by
/// solving the per-codeword cancelation systems via a rational nullspace and
/// probing the own gain on each basis vector. No span or rank shortcut.
pub fn oracle_pstar_bruteforce(net: &Network) -> Result<usize, OracleError> {
    let k = net.k();
    if k > 4 {
        return Err(OracleError::TooLarge(k));
    }
    let h = net.h();
    let mut best = 0;
    for size in 1..=k {
        'subsets: for combo in (0..k).combinations(size) {
            for &i in &combo {
                let cols = net.knowers(i);
                let others: Vec<usize> = combo.iter().copied().filter(|&j| j != i).collect();
                let system = h.select_rows(&others).select_cols(&cols);
                let own: Vec<Rat> = cols.iter().map(|&c| h.get(i, c).clone()).collect();
                let feasible = system.nullspace().iter().any(|v| !dot(&own, v).is_zero());
                if !feasible {
                    continue 'subsets;
                }
            }
            best = best.max(size);
        }
    }
    Ok(best)
}

/// Independent LP optimum by vertex enumeration over {0 <= x <= 1, Ax <= b}:
/// every choice of n tight hyperplanes from the rows and box facets is
/// solved exactly and the best feasible corner wins.
pub fn lp_vertex_oracle(p: &crate::lp::LpProblem) -> Option<Rat> {
    let n = p.objective.len();
    let m = p.constraints.rows();
    // Pool rows: (normal, offset) for a'x = b, x_i = 0, x_i = 1.
    let mut pool: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for i in 0..m {
        pool.push((p.constraints.row(i).to_vec(), p.rhs[i].clone()));
    }
    for i in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::one();
        pool.push((e.clone(), Rat::zero()));
        pool.push((e, Rat::one()));
    }
    let mut best: Option<Rat> = None;
    for combo in (0..pool.len()).combinations(n) {
        let a = Mat::from_rows(combo.iter().map(|&i| pool[i].0.clone()).collect()).ok()?;
        if a.rank() < n {
            continue;
        }
        let b: Vec<Rat> = combo.iter().map(|&i| pool[i].1.clone()).collect();
        let Some(x) = a.solve(&b).ok()? else {
            continue;
        };
        let feasible = x.iter().all(|v| v >= &Rat::zero() && v <= &Rat::one())
            && (0..m).all(|i| dot(p.constraints.row(i), &x) <= p.rhs[i]);
        if !feasible {
            continue;
        }
        let value = dot(&p.objective, &x);
        if best.as_ref().is_none_or(|b| value > *b) {
            best = Some(value);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Fixture files
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
pub struct FixtureFile {
    pub name: String,
    pub network: serde_json::Value,
    pub expected: Expected,
    #[serde(default)]
    pub notes: std::collections::BTreeMap<String, String>,
}

#[derive(Debug, Deserialize, Default)]
pub struct Expected {
    pub pstar: Option<usize>,
    pub upper: Option<String>,
    pub exact: Option<String>,
    pub in_family: Option<bool>,
    /// 1-based cross index, or 0 for the diagonal witness.
    pub kstar: Option<usize>,
    pub partial_helps: Option<bool>,
    pub minimal_sideinfo: Option<Vec<Vec<usize>>>,
    pub lift: Option<LiftExpectation>,
}

#[derive(Debug, Deserialize)]
pub struct LiftExpectation {
    pub mu_max: usize,
    pub budget: usize,
    pub seed: u64,
    pub bound: String,
    pub mu: Option<usize>,
}

#[derive(Debug)]
pub struct Check {
    pub field: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct FixtureOutcome {
    pub name: String,
    pub checks: Vec<Check>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("cannot read fixture: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed fixture: {0}")]
    Malformed(String),
    #[error("fixture network invalid: {0}")]
    Network(String),
}

pub fn load_fixture(text: &str) -> Result<(FixtureFile, Network), FixtureError> {
    let file: FixtureFile =
        serde_json::from_str(text).map_err(|e| FixtureError::Malformed(e.to_string()))?;
    let net_text =
        serde_json::to_string(&file.network).map_err(|e| FixtureError::Malformed(e.to_string()))?;
    let net = Network::from_json(&net_text).map_err(|e| FixtureError::Network(e.to_string()))?;
    Ok((file, net))
}

/// Evaluate every expectation a fixture carries against the live modules.
pub fn run_fixture(file: &FixtureFile, net: &Network) -> FixtureOutcome {
    let mut checks = Vec::new();
    let note = |field: &str| {
        file.notes
            .get(field)
            .map(|n| format!(" ({n})"))
            .unwrap_or_default()
    };

    let ps = pstar(net);
    if let Some(want) = file.expected.pstar {
        checks.push(Check {
            field: "pstar".into(),
            pass: ps.pstar == want,
            detail: format!("expected {want}, got {}{}", ps.pstar, note("pstar")),
        });
    }
    let upper = prelog_upper_bound(net).ok();
    if let Some(want) = &file.expected.upper {
        let want_rat = parse_rat(want).expect("fixture rational");
        let got = upper.as_ref().map(|u| u.value.clone());
        checks.push(Check {
            field: "upper".into(),
            pass: got.as_ref() == Some(&want_rat),
            detail: format!(
                "expected {want}, got {}{}",
                got.map(|g| g.to_string()).unwrap_or_else(|| "error".into()),
                note("upper")
            ),
        });
    }
    if let Some(want) = &file.expected.exact {
        let want_rat = parse_rat(want).expect("fixture rational");
        let opts = match &file.expected.lift {
            Some(l) => AnalyzeOptions {
                mu_max: l.mu_max,
                budget: l.budget,
                seed: l.seed,
                ..Default::default()
            },
            None => AnalyzeOptions::default(),
        };
        let verdict = analyze(net, &opts).map(|a| a.verdict);
        let (pass, got) = match &verdict {
            Ok(FinalVerdict::Exact(e)) => (e == &want_rat, format!("exact {e}")),
            Ok(FinalVerdict::Bracket(lo, hi)) => (false, format!("bracket [{lo}, {hi}]")),
            Err(e) => (false, format!("error: {e}")),
        };
        checks.push(Check {
            field: "exact".into(),
            pass,
            detail: format!("expected exact {want}, got {got}{}", note("exact")),
        });
    }
    if let Some(want) = file.expected.in_family {
        let got = in_h_family(net.h()).map(|w| w.is_some());
        checks.push(Check {
            field: "in_family".into(),
            pass: got.as_ref().ok() == Some(&want),
            detail: format!("expected {want}, got {got:?}{}", note("in_family")),
        });
    }
    if let Some(want) = file.expected.kstar {
        use crate::classify::FamilyWitness;
        let got = in_h_family(net.h()).ok().flatten();
        let pass = match (want, got) {
            (0, Some(FamilyWitness::Diagonal)) => true,
            (w, Some(FamilyWitness::Cross(k0))) => k0 + 1 == w,
            _ => false,
        };
        checks.push(Check {
            field: "kstar".into(),
            pass,
            detail: format!("expected {want}, got {got:?}{}", note("kstar")),
        });
    }
    if let Some(want) = file.expected.partial_helps {
        let got = crate::classify::partial_helps(net.h());
        checks.push(Check {
            field: "partial_helps".into(),
            pass: got.as_ref().ok() == Some(&want),
            detail: format!("expected {want}, got {got:?}{}", note("partial_helps")),
        });
    }
    if let Some(want) = &file.expected.minimal_sideinfo {
        let got = crate::classify::minimal_sideinfo_for_full_prelog(net.h()).ok();
        let want_sets: Vec<BTreeSet<usize>> = want
            .iter()
            .map(|s| s.iter().map(|&j| j - 1).collect())
            .collect();
        checks.push(Check {
            field: "minimal_sideinfo".into(),
            pass: got.as_ref() == Some(&want_sets),
            detail: format!("expected {want:?}{}", note("minimal_sideinfo")),
        });
    }
    if let Some(l) = &file.expected.lift {
        let want = parse_rat(&l.bound).expect("fixture rational");
        let got = best_lower_bound(
            net,
            l.mu_max,
            l.budget,
            l.seed,
            Orientation::ReceiverSide,
            None,
        );
        let (pass, detail) = match &got {
            Ok(b) => {
                let mu_ok = l.mu.is_none_or(|m| m == b.mu);
                (
                    b.bound == want && mu_ok && crate::lift::verify_lifted(b).is_ok(),
                    format!(
                        "expected {} (mu {:?}), got {} at mu {}",
                        l.bound, l.mu, b.bound, b.mu
                    ),
                )
            }
            Err(e) => (false, format!("error: {e}")),
        };
        checks.push(Check {
            field: "lift".into(),
            pass,
            detail: format!("{detail}{}", note("lift")),
        });
    }
    FixtureOutcome {
        name: file.name.clone(),
        checks,
    }
}

/// Run every `*.json` fixture under a directory, sorted by file name.
pub fn run_fixture_dir(dir: &Path) -> Result<Vec<FixtureOutcome>, FixtureError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path)?;
        let (file, net) = load_fixture(&text)?;
        out.push(run_fixture(&file, &net));
    }
    Ok(out)
}
