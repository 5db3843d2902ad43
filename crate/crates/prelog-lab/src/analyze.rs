//! One-shot analysis of a network: lower bound, lifted search, LP upper
//! bound, classification, and the combined verdict, with stable text and
//! JSON renderings.

use crate::cancel::{pstar, PstarResult};
use crate::classify::{
    full_cognition_required, in_h_family, minimal_sideinfo_for_full_prelog, minor_rank_map,
    ClassifyError, FamilyWitness, MinorRankMap,
};
use crate::lift::{best_lower_bound, lifted_lower_bound, LiftError, LiftedBound, Orientation};
use crate::linalg::{rat_int, Mat, Rat};
use crate::network::{Network, SideInfoKind};
use crate::upper::{
    combine_bounds, operator_norm_f64, prelog_upper_bound, ConsistencyFlag, UpperBound, UpperError,
};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Beyond this many lifted users the default analysis skips the candidate
/// search; the dedicated lift command has no such guard.
pub const LIFT_SEARCH_USER_LIMIT: usize = 12;

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub mu_max: usize,
    pub budget: usize,
    pub seed: u64,
    pub orientation: Orientation,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            mu_max: 3,
            budget: 200,
            seed: 1,
            orientation: Orientation::ReceiverSide,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub minor_map: MinorRankMap,
    pub minimal_sets: Vec<BTreeSet<usize>>,
    pub full_cognition_required: bool,
    pub family: Option<FamilyWitness>,
    pub partial_helps: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FinalVerdict {
    Exact(Rat),
    Bracket(Rat, Rat),
}

#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub sideinfo_kind: SideInfoKind,
    pub pstar: PstarResult,
    pub lift: LiftedBound,
    /// False when the candidate search was skipped (already exact, or the
    /// lifted network would exceed the search limit).
    pub lift_searched: bool,
    pub upper: UpperBound,
    pub classification: Classification,
    pub verdict: FinalVerdict,
    pub flags: Vec<ConsistencyFlag>,
    pub operator_norm: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Upper(#[from] UpperError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

pub fn classify_network(net: &Network) -> Result<Classification, ClassifyError> {
    let minor_map = minor_rank_map(net.h())?;
    let minimal_sets = minimal_sideinfo_for_full_prelog(net.h())?;
    let family = in_h_family(net.h())?;
    Ok(Classification {
        full_cognition_required: full_cognition_required(&minimal_sets),
        partial_helps: family.is_none(),
        minor_map,
        minimal_sets,
        family,
    })
}

/// Run the whole pipeline on a validated network.
pub fn analyze(net: &Network, opts: &AnalyzeOptions) -> Result<AnalysisResult, AnalyzeError> {
    let k = net.k();
    let ps = pstar(net);
    let upper = prelog_upper_bound(net)?;
    let t1 = combine_bounds(net, &ps, &upper);

    // The lifted bound can only move when p* has not already met the rules
    // or the LP; and the default search stays within the user limit.
    let mu_cap = (LIFT_SEARCH_USER_LIMIT / k.max(1)).max(1).min(opts.mu_max);
    let (lift, lift_searched) = if t1.exact.is_some() || mu_cap < 2 {
        (
            lifted_lower_bound(net, 1, 1, opts.seed, opts.orientation, None)?,
            false,
        )
    } else {
        (
            best_lower_bound(
                net,
                mu_cap,
                opts.budget,
                opts.seed,
                opts.orientation,
                Some(&upper.value),
            )?,
            true,
        )
    };

    let classification = classify_network(net)?;

    let mut flags = t1.flags.clone();
    let lower = if lift.bound > t1.lower {
        lift.bound.clone()
    } else {
        t1.lower.clone()
    };
    if lower > upper.value {
        flags.push(ConsistencyFlag::UpperBelowLower {
            lower: lower.clone(),
            upper: upper.value.clone(),
        });
    }
    let verdict = match &t1.exact {
        Some(e) => FinalVerdict::Exact(e.clone()),
        None if lower == upper.value => FinalVerdict::Exact(lower.clone()),
        None => FinalVerdict::Bracket(lower.clone(), upper.value.clone()),
    };
    if let FinalVerdict::Exact(e) = &verdict {
        let km1 = rat_int(k as i64 - 1);
        let kk = rat_int(k as i64);
        if e > &km1
            && e < &kk
            && !flags
                .iter()
                .any(|f| matches!(f, ConsistencyFlag::ForbiddenInterval { .. }))
        {
            flags.push(ConsistencyFlag::ForbiddenInterval { value: e.clone() });
        }
    }

    Ok(AnalysisResult {
        sideinfo_kind: net.classify_sideinfo(),
        pstar: ps,
        lift,
        lift_searched,
        upper,
        classification,
        verdict,
        flags,
        operator_norm: operator_norm_f64(net.h()),
    })
}

// ---------------------------------------------------------------------------
// JSON report
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct ReportJson {
    pub network: NetworkJson,
    pub lower: LowerJson,
    pub lift: LiftJson,
    pub upper: UpperJson,
    pub classification: ClassificationJson,
    pub verdict: VerdictJson,
    pub flags: Vec<String>,
}

#[derive(Serialize)]
pub struct NetworkJson {
    pub k: usize,
    pub side_information: String,
    pub h: Vec<Vec<String>>,
    pub s: Vec<Vec<usize>>,
}

#[derive(Serialize)]
pub struct XiJson {
    pub receiver: usize,
    pub xi: String,
}

#[derive(Serialize)]
pub struct LowerJson {
    pub pstar: usize,
    pub r: Vec<usize>,
    pub xi: Vec<XiJson>,
    pub d: Vec<Vec<String>>,
    pub maximizing_sets: Vec<Vec<usize>>,
    pub maximizing_truncated: bool,
}

#[derive(Serialize)]
pub struct LiftJson {
    pub mu: usize,
    pub pstar_lifted: usize,
    pub bound: String,
    pub orientation: String,
    pub searched: bool,
    pub candidates_tried: usize,
    pub a: Vec<Vec<Vec<String>>>,
    /// Lifted interference-free receivers as (user, slot) pairs, 1-based.
    pub r: Vec<[usize; 2]>,
    pub d: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct ConstraintJson {
    pub j: Vec<usize>,
    pub v: Vec<usize>,
    pub alphas: Vec<Vec<String>>,
    pub rhs: usize,
}

#[derive(Serialize)]
pub struct UpperJson {
    pub value: String,
    pub constraints: Vec<ConstraintJson>,
    pub tight: Vec<usize>,
    pub operator_norm_approx: f64,
}

#[derive(Serialize)]
pub struct ClassificationJson {
    pub minor_rank_map: Vec<Vec<usize>>,
    pub minimal_sideinfo: Vec<Vec<usize>>,
    pub full_cognition_required: bool,
    pub in_family: bool,
    pub family_witness: Option<String>,
    pub partial_side_information_can_help: bool,
}

#[derive(Serialize)]
pub struct VerdictJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<[String; 2]>,
}

fn mat_strings(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(ToString::to_string).collect())
        .collect()
}

fn set_1based(s: &BTreeSet<usize>) -> Vec<usize> {
    s.iter().map(|&j| j + 1).collect()
}

pub fn report_json(net: &Network, a: &AnalysisResult) -> ReportJson {
    let mu = a.lift.mu;
    ReportJson {
        network: NetworkJson {
            k: net.k(),
            side_information: a.sideinfo_kind.to_string(),
            h: mat_strings(net.h()),
            s: net.sideinfo().iter().map(set_1based).collect(),
        },
        lower: LowerJson {
            pstar: a.pstar.pstar,
            r: set_1based(&a.pstar.witness.r_set),
            xi: a
                .pstar
                .witness
                .xi
                .iter()
                .map(|(&j, xi)| XiJson {
                    receiver: j + 1,
                    xi: xi.to_string(),
                })
                .collect(),
            d: mat_strings(&a.pstar.witness.d),
            maximizing_sets: a.pstar.maximizing_sets.iter().map(set_1based).collect(),
            maximizing_truncated: a.pstar.maximizing_truncated,
        },
        lift: LiftJson {
            mu,
            pstar_lifted: a.lift.pstar_lifted,
            bound: a.lift.bound.to_string(),
            orientation: a.lift.spec.orientation.label().to_string(),
            searched: a.lift_searched,
            candidates_tried: a.lift.candidates_tried,
            a: a.lift.spec.a.iter().map(mat_strings).collect(),
            r: a.lift
                .witness
                .r_set
                .iter()
                .map(|&idx| [idx / mu + 1, idx % mu + 1])
                .collect(),
            d: mat_strings(&a.lift.witness.d),
        },
        upper: upper_json(&a.upper, a.operator_norm),
        classification: ClassificationJson {
            minor_rank_map: a.classification.minor_map.table.clone(),
            minimal_sideinfo: a
                .classification
                .minimal_sets
                .iter()
                .map(set_1based)
                .collect(),
            full_cognition_required: a.classification.full_cognition_required,
            in_family: a.classification.family.is_some(),
            family_witness: a.classification.family.map(|w| w.to_string()),
            partial_side_information_can_help: a.classification.partial_helps,
        },
        verdict: match &a.verdict {
            FinalVerdict::Exact(e) => VerdictJson {
                exact: Some(e.to_string()),
                bracket: None,
            },
            FinalVerdict::Bracket(lo, hi) => VerdictJson {
                exact: None,
                bracket: Some([lo.to_string(), hi.to_string()]),
            },
        },
        flags: a.flags.iter().map(ToString::to_string).collect(),
    }
}

pub fn upper_json(u: &UpperBound, norm: f64) -> UpperJson {
    UpperJson {
        value: u.value.to_string(),
        constraints: u
            .constraints
            .iter()
            .map(|c| ConstraintJson {
                j: c.jseq.iter().map(|&j| j + 1).collect(),
                v: c.vset.iter().map(|&v| v + 1).collect(),
                alphas: c
                    .alphas
                    .iter()
                    .map(|a| a.iter().map(ToString::to_string).collect())
                    .collect(),
                rhs: c.rhs(),
            })
            .collect(),
        tight: u.tight.iter().map(|&i| i + 1).collect(),
        operator_norm_approx: norm,
    }
}

// ---------------------------------------------------------------------------
// Text report
// ---------------------------------------------------------------------------

pub fn fmt_set(s: &BTreeSet<usize>) -> String {
    let inner = s
        .iter()
        .map(|&j| (j + 1).to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("{{{inner}}}")
}

fn indent(text: &str, pad: &str) -> String {
    text.lines()
        .map(|l| format!("{pad}{l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn render_witness(w: &crate::cancel::Witness, pad: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{pad}R = {}", fmt_set(&w.r_set));
    let _ = writeln!(out, "{pad}codewords outside R are silenced");
    let xi =
        w.xi.iter()
            .map(|(&j, x)| format!("xi_{} = {}", j + 1, x))
            .collect::<Vec<_>>()
            .join(", ");
    let _ = writeln!(out, "{pad}{xi}");
    let _ = writeln!(
        out,
        "{pad}D (row j = codeword j, column k = transmitter k):"
    );
    let _ = writeln!(out, "{}", indent(&w.d.to_string(), pad));
    out
}

pub fn render_constraint_line(c: &crate::upper::Constraint) -> String {
    let sum = c
        .index_set()
        .iter()
        .map(|&j| format!("eta_{}", j + 1))
        .collect::<Vec<_>>()
        .join(" + ");
    let j = c
        .jseq
        .iter()
        .map(|&x| (x + 1).to_string())
        .collect::<Vec<_>>()
        .join(",");
    let v = c
        .vset
        .iter()
        .map(|&x| (x + 1).to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{sum} <= {}   [J = ({j}), V = {{{v}}}]", c.rhs())
}

pub fn render_classification(c: &Classification, pad: &str) -> String {
    let mut out = String::new();
    let k = c.minor_map.table.len();
    let _ = writeln!(
        out,
        "{pad}minor rank map (rank of H with row j, column k deleted):"
    );
    let header = (1..=k)
        .map(|c| format!("k={c}"))
        .collect::<Vec<_>>()
        .join("  ");
    let _ = writeln!(out, "{pad}        {header}");
    for (j, row) in c.minor_map.table.iter().enumerate() {
        let cells = row
            .iter()
            .map(|r| format!("{r:>3}"))
            .collect::<Vec<_>>()
            .join("  ");
        let _ = writeln!(out, "{pad}  j={} {cells}", j + 1);
    }
    let sets = c
        .minimal_sets
        .iter()
        .enumerate()
        .map(|(i, s)| format!("S_{} = {}", i + 1, fmt_set(s)))
        .collect::<Vec<_>>()
        .join("; ");
    let _ = writeln!(
        out,
        "{pad}minimal side information for full pre-log: {sets}"
    );
    let _ = writeln!(
        out,
        "{pad}full cognition required for full pre-log: {}",
        yesno(c.full_cognition_required)
    );
    match &c.family {
        Some(w) => {
            let _ = writeln!(out, "{pad}in family (diagonal or cross pattern): yes ({w})");
        }
        None => {
            let _ = writeln!(out, "{pad}in family (diagonal or cross pattern): no");
        }
    }
    let _ = writeln!(
        out,
        "{pad}partial side-information can help: {}",
        yesno(c.partial_helps)
    );
    out
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_analysis(net: &Network, a: &AnalysisResult, opts: &AnalyzeOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "network: K={}, side information: {}",
        net.k(),
        a.sideinfo_kind
    );
    let _ = writeln!(out, "H =");
    let _ = writeln!(out, "{}", indent(&net.h().to_string(), "  "));

    let _ = writeln!(out, "lower bound (linear partial cancelation)");
    let _ = writeln!(out, "  p* = {}", a.pstar.pstar);
    if a.pstar.pstar > 0 {
        let _ = write!(out, "{}", render_witness(&a.pstar.witness, "  "));
        let sets = a
            .pstar
            .maximizing_sets
            .iter()
            .map(fmt_set)
            .collect::<Vec<_>>()
            .join(", ");
        let suffix = if a.pstar.maximizing_truncated {
            " (truncated)"
        } else {
            ""
        };
        let _ = writeln!(out, "  maximizing sets: {sets}{suffix}");
    }
    let _ = writeln!(out);

    if a.lift_searched {
        let _ = writeln!(
            out,
            "lifted search ({} orientation, budget {}, seed {})",
            a.lift.spec.orientation.label(),
            opts.budget,
            opts.seed
        );
        let improved = a.lift.bound > rat_int(a.pstar.pstar as i64);
        let _ = writeln!(
            out,
            "  best bound {} at mu = {} ({}; {} candidates tried)",
            a.lift.bound,
            a.lift.mu,
            if improved {
                "improves on p*"
            } else {
                "no improvement found"
            },
            a.lift.candidates_tried
        );
    } else {
        let _ = writeln!(out, "lifted search");
        let _ = writeln!(
            out,
            "  skipped (bound already settled or network beyond the default search size); mu = 1 bound {}",
            a.lift.bound
        );
    }
    let _ = writeln!(out);

    let _ = writeln!(out, "upper bound (structural constraint LP)");
    let _ = writeln!(out, "  value = {}", a.upper.value);
    if a.upper.constraints.is_empty() {
        let _ = writeln!(out, "  no feasible structural constraints; box bounds only");
    } else {
        let _ = writeln!(out, "  constraints:");
        for (i, c) in a.upper.constraints.iter().enumerate() {
            let _ = writeln!(out, "    #{} {}", i + 1, render_constraint_line(c));
        }
        let tight = a
            .upper
            .tight
            .iter()
            .map(|&i| format!("#{}", i + 1))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(
            out,
            "  tight at optimum: {}",
            if tight.is_empty() { "none" } else { &tight }
        );
    }
    let _ = writeln!(
        out,
        "  operator norm of H ~= {:.6} (floating approximation)",
        a.operator_norm
    );
    let _ = writeln!(out);

    let _ = writeln!(out, "classification");
    let _ = write!(out, "{}", render_classification(&a.classification, "  "));
    let _ = writeln!(out);

    let _ = writeln!(out, "verdict");
    match &a.verdict {
        FinalVerdict::Exact(e) => {
            let _ = writeln!(out, "  exact pre-log: {e}");
        }
        FinalVerdict::Bracket(lo, hi) => {
            let _ = writeln!(out, "  pre-log bracket: [{lo}, {hi}]");
        }
    }
    if a.flags.is_empty() {
        let _ = writeln!(out, "consistency: ok");
    } else {
        for f in &a.flags {
            let _ = writeln!(out, "consistency flag: {f}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::network::{builtin_matrix, gen_cyclic, gen_wyner};

    fn analyze_default(net: &Network) -> AnalysisResult {
        analyze(net, &AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn h2_none_exact_two() {
        let net = Network::with_uniform_sideinfo(builtin_matrix("H2").unwrap(), SideInfoKind::None);
        let a = analyze_default(&net);
        assert_eq!(a.verdict, FinalVerdict::Exact(rat_int(2)));
        assert!(a.flags.is_empty());
        assert!(!a.lift_searched);
        let text = render_analysis(&net, &a, &AnalyzeOptions::default());
        assert!(text.contains("exact pre-log: 2"));
        assert!(text.contains("partial side-information can help: no"));
    }

    #[test]
    fn cyclic3_exact_three_halves_via_lift() {
        let net = gen_cyclic(3).unwrap();
        let opts = AnalyzeOptions {
            mu_max: 2,
            budget: 400,
            seed: 7,
            ..Default::default()
        };
        let a = analyze(&net, &opts).unwrap();
        assert!(a.lift_searched);
        assert_eq!(a.lift.bound, rat(3, 2));
        assert_eq!(a.upper.value, rat(3, 2));
        assert_eq!(a.verdict, FinalVerdict::Exact(rat(3, 2)));
        assert!(a.flags.is_empty());
    }

    #[test]
    fn wyner_k5_j1_exact_four() {
        let net = gen_wyner(5, &rat(1, 2), 1).unwrap();
        let a = analyze_default(&net);
        assert_eq!(a.pstar.pstar, 4);
        assert_eq!(a.verdict, FinalVerdict::Exact(rat_int(4)));
    }

    #[test]
    fn json_report_round_trips_rationals() {
        let net = Network::with_uniform_sideinfo(builtin_matrix("H2").unwrap(), SideInfoKind::None);
        let a = analyze_default(&net);
        let report = report_json(&net, &a);
        let text = serde_json::to_string_pretty(&report).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["verdict"]["exact"], "2");
        for row in parsed["network"]["h"].as_array().unwrap() {
            for cell in row.as_array().unwrap() {
                crate::linalg::parse_rat(cell.as_str().unwrap()).unwrap();
            }
        }
    }
}
