//! Command-line front end: generate networks, compute bounds, classify, and
//! produce batch reports. Exit codes: 0 success, 2 invalid input, 1 internal
//! inconsistency (a consistency flag fired or a fixture check failed).

use clap::{Args, Parser, Subcommand};
use prelog_lab::analyze::{
    analyze, render_analysis, render_classification, render_constraint_line, render_witness,
    report_json, upper_json, AnalyzeOptions,
};
use prelog_lab::cancel::{per_receiver_rates, pstar, rate_sweep};
use prelog_lab::fixture::{load_fixture, run_fixture};
use prelog_lab::lift::{best_lower_bound, Orientation};
use prelog_lab::linalg::parse_rat;
use prelog_lab::lp::format_tableau;
use prelog_lab::network::{
    builtin_matrix, gen_cyclic, gen_diag, gen_wyner, parse_sideinfo, Network,
};
use prelog_lab::upper::{lp_problem_for, operator_norm_f64, prelog_upper_bound_capped};
use prelog_lab::Mat;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "prelog-lab",
    version,
    about = "Exact pre-log bounds and classification for cognitive Gaussian interference networks"
)]
struct Cli {
    /// Cap on worker threads (PRELOG_LAB_THREADS is the fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a network JSON file for one of the built-in families.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Output path (stdout when omitted).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Partial-cancelation lower bound: p* with a certified witness.
    Lower {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Structural-constraint LP upper bound.
    Upper {
        file: String,
        /// Cap q+|V| per constraint (default K).
        #[arg(long)]
        max_block: Option<usize>,
        /// Write the feasible constraints as JSON.
        #[arg(long)]
        dump_constraints: Option<PathBuf>,
        /// Write the LP in a plain-text tableau form.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Search lifted networks for a better lower bound.
    Lift {
        file: String,
        #[arg(long, default_value_t = 3)]
        mu_max: usize,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Processing side: `receiver` or `as-written`.
        #[arg(long, default_value = "receiver")]
        orientation: String,
        #[arg(long)]
        json: bool,
    },
    /// Minor-rank map, minimal side information, family membership.
    Classify {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Rate table over a power list; optional CSV output.
    Sweep {
        file: String,
        /// Comma-separated powers, e.g. 1e2,1e4,1e6,1e8.
        #[arg(long)]
        powers: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Full report: lower, lift, upper, classification, verdict.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    file: String,
    #[arg(long, default_value_t = 3)]
    mu_max: usize,
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json: bool,
    /// Treat the input as a fixture file and verify its expectations.
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand)]
enum GenFamily {
    /// One of the bundled 3x3 matrices H1 or H2.
    Builtin {
        name: String,
        /// `none`, `full`, or explicit sets like `1,2;1,2,3;1,2,3`.
        #[arg(long, default_value = "none")]
        sideinfo: String,
    },
    /// Linear cellular chain with window side information.
    Wyner {
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long = "J", default_value_t = 0)]
        j: usize,
    },
    /// Every receiver hears all but its cyclic predecessor.
    Cyclic {
        #[arg(long = "K")]
        k: usize,
    },
    /// Identity channel.
    Diag {
        #[arg(long = "K")]
        k: usize,
        #[arg(long, default_value = "none")]
        sideinfo: String,
    },
}

enum CliError {
    /// Bad input: exit 2.
    Input(String),
    /// Internal inconsistency or failed check: exit 1.
    Inconsistent(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("PRELOG_LAB_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Inconsistent(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))
    }
}

fn load_network(path: &str) -> Result<Network, CliError> {
    let text = read_input(path)?;
    Network::from_json(&text).map_err(|e| CliError::Input(e.to_string()))
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_orientation(name: &str) -> Result<Orientation, CliError> {
    match name {
        "receiver" => Ok(Orientation::ReceiverSide),
        "as-written" => Ok(Orientation::AsWritten),
        other => Err(CliError::Input(format!(
            "unknown orientation `{other}` (expected receiver or as-written)"
        ))),
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Gen { family, out } => {
            let net = generate(family)?;
            let violations = net.validate();
            if !violations.is_empty() {
                let list = violations
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; ");
                return Err(CliError::Input(format!(
                    "generated network is invalid: {list}"
                )));
            }
            write_out(&out, &net.to_json())
        }
        Command::Lower { file, json } => {
            let net = load_network(&file)?;
            let res = pstar(&net);
            if json {
                let lower = serde_json::json!({
                    "pstar": res.pstar,
                    "r": res.witness.r_set.iter().map(|&j| j + 1).collect::<Vec<_>>(),
                    "xi": res.witness.xi.iter()
                        .map(|(&j, x)| serde_json::json!({"receiver": j + 1, "xi": x.to_string()}))
                        .collect::<Vec<_>>(),
                    "d": (0..net.k())
                        .map(|r| res.witness.d.row(r).iter().map(ToString::to_string).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "maximizing_sets": res.maximizing_sets.iter()
                        .map(|s| s.iter().map(|&j| j + 1).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "maximizing_truncated": res.maximizing_truncated,
                });
                println!("{}", serde_json::to_string_pretty(&lower).unwrap());
            } else {
                println!(
                    "network: K={}, side information: {}",
                    net.k(),
                    net.classify_sideinfo()
                );
                println!("p* = {}", res.pstar);
                if res.pstar > 0 {
                    print!("{}", render_witness(&res.witness, ""));
                    let sets = res
                        .maximizing_sets
                        .iter()
                        .map(prelog_lab::analyze::fmt_set)
                        .collect::<Vec<_>>()
                        .join(", ");
                    let suffix = if res.maximizing_truncated {
                        " (truncated)"
                    } else {
                        ""
                    };
                    println!("maximizing sets: {sets}{suffix}");
                } else {
                    println!("no receiver can be made interference free");
                }
            }
            Ok(())
        }
        Command::Upper {
            file,
            max_block,
            dump_constraints,
            dump_lp,
            json,
        } => {
            let net = load_network(&file)?;
            let block = max_block.unwrap_or(net.k());
            let ub = prelog_upper_bound_capped(&net, block)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let norm = operator_norm_f64(net.h());
            if let Some(path) = &dump_constraints {
                let dump = upper_json(&ub, norm);
                std::fs::write(
                    path,
                    serde_json::to_string_pretty(&dump.constraints).unwrap(),
                )?;
            }
            if let Some(path) = &dump_lp {
                std::fs::write(path, format_tableau(&lp_problem_for(&net, &ub.constraints)))?;
            }
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&upper_json(&ub, norm)).unwrap()
                );
            } else {
                println!(
                    "network: K={}, side information: {}",
                    net.k(),
                    net.classify_sideinfo()
                );
                println!("upper bound (structural constraint LP) = {}", ub.value);
                if ub.constraints.is_empty() {
                    println!("no feasible structural constraints; box bounds only");
                } else {
                    println!("constraints:");
                    for (i, c) in ub.constraints.iter().enumerate() {
                        println!("  #{} {}", i + 1, render_constraint_line(c));
                    }
                    let tight = ub
                        .tight
                        .iter()
                        .map(|&i| format!("#{}", i + 1))
                        .collect::<Vec<_>>()
                        .join(", ");
                    println!(
                        "tight at optimum: {}",
                        if tight.is_empty() { "none" } else { &tight }
                    );
                }
                println!("operator norm of H ~= {norm:.6} (floating approximation)");
                println!(
                    "rate form per constraint: sum of named rates <= (|V|/2) log(1 + |H|^2 P) + const"
                );
            }
            Ok(())
        }
        Command::Lift {
            file,
            mu_max,
            budget,
            seed,
            orientation,
            json,
        } => {
            let net = load_network(&file)?;
            let orient = parse_orientation(&orientation)?;
            let best = best_lower_bound(&net, mu_max, budget, seed, orient, None)
                .map_err(|e| CliError::Input(e.to_string()))?;
            prelog_lab::lift::verify_lifted(&best)
                .map_err(|e| CliError::Inconsistent(format!("lifted witness failed: {e}")))?;
            if json {
                let mu = best.mu;
                let out = serde_json::json!({
                    "mu": best.mu,
                    "pstar_lifted": best.pstar_lifted,
                    "bound": best.bound.to_string(),
                    "orientation": best.spec.orientation.label(),
                    "candidates_tried": best.candidates_tried,
                    "a": best.spec.a.iter().map(|m| (0..m.rows())
                        .map(|r| m.row(r).iter().map(ToString::to_string).collect::<Vec<_>>())
                        .collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "r": best.witness.r_set.iter()
                        .map(|&idx| [idx / mu + 1, idx % mu + 1])
                        .collect::<Vec<_>>(),
                    "d": (0..best.lifted.k())
                        .map(|r| best.witness.d.row(r).iter().map(ToString::to_string).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!(
                    "network: K={}, side information: {}",
                    net.k(),
                    net.classify_sideinfo()
                );
                println!(
                    "lifted search: mu <= {mu_max}, budget {budget}, seed {seed}, {} orientation",
                    best.spec.orientation.label()
                );
                println!(
                    "best bound: {} (p* = {} on the mu = {} lift; {} candidates tried)",
                    best.bound, best.pstar_lifted, best.mu, best.candidates_tried
                );
                let pairs = best
                    .witness
                    .r_set
                    .iter()
                    .map(|&idx| format!("({},{})", idx / best.mu + 1, idx % best.mu + 1))
                    .collect::<Vec<_>>()
                    .join(", ");
                println!("lifted interference-free receivers (user, slot): {pairs}");
                for (j, a) in best.spec.a.iter().enumerate() {
                    println!("A_{} =", j + 1);
                    print!("{a}");
                }
            }
            Ok(())
        }
        Command::Classify { file, json } => {
            let net = load_classify_input(&file)?;
            let cls = prelog_lab::analyze::classify_network(&net)
                .map_err(|e| CliError::Input(e.to_string()))?;
            if json {
                let out = serde_json::json!({
                    "minor_rank_map": cls.minor_map.table,
                    "minimal_sideinfo": cls.minimal_sets.iter()
                        .map(|s| s.iter().map(|&j| j + 1).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "full_cognition_required": cls.full_cognition_required,
                    "in_family": cls.family.is_some(),
                    "family_witness": cls.family.map(|w| w.to_string()),
                    "partial_side_information_can_help": cls.partial_helps,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("network: K={}", net.k());
                print!("{}", render_classification(&cls, ""));
            }
            Ok(())
        }
        Command::Sweep { file, powers, csv } => {
            let net = load_network(&file)?;
            let list = parse_powers(&powers)?;
            let res = pstar(&net);
            let rows = rate_sweep(&net, &res.witness, &list)
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!(
                "p* = {}, R = {}",
                res.pstar,
                prelog_lab::analyze::fmt_set(&res.witness.r_set)
            );
            println!(
                "{:>12}  {:>22}  {:>18}  {:>8}",
                "P", "sum_rate_lower_nats", "half_log1P_nats", "ratio"
            );
            for row in &rows {
                println!(
                    "{:>12.6e}  {:>22.6}  {:>18.6}  {:>8.4}",
                    row.p, row.sum_rate_lower_nats, row.half_log1p_nats, row.ratio
                );
            }
            if let Some(&p_last) = list.last() {
                let per = per_receiver_rates(&res.witness, p_last)
                    .into_iter()
                    .map(|(j, r)| format!("receiver {}: {:.4}", j + 1, r))
                    .collect::<Vec<_>>()
                    .join(", ");
                if !per.is_empty() {
                    println!("per-receiver rates at P = {p_last:.3e} (nats): {per}");
                }
            }
            if let Some(path) = csv {
                let mut text = String::from("P,sum_rate_lower_nats,half_log1P_nats,ratio\n");
                for row in &rows {
                    text.push_str(&format!(
                        "{},{},{},{}\n",
                        row.p, row.sum_rate_lower_nats, row.half_log1p_nats, row.ratio
                    ));
                }
                std::fs::write(path, text)?;
            }
            Ok(())
        }
        Command::Analyze(args) => run_analyze(args),
    }
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    if args.check {
        let text = read_input(&args.file)?;
        let (file, net) = load_fixture(&text).map_err(|e| CliError::Input(e.to_string()))?;
        let outcome = run_fixture(&file, &net);
        for c in &outcome.checks {
            println!(
                "{} {}: {}",
                if c.pass { "pass" } else { "FAIL" },
                c.field,
                c.detail
            );
        }
        return if outcome.passed() {
            println!("fixture {}: all checks passed", outcome.name);
            Ok(())
        } else {
            Err(CliError::Inconsistent(format!(
                "fixture {} failed",
                outcome.name
            )))
        };
    }

    let net = load_network(&args.file)?;
    let opts = AnalyzeOptions {
        mu_max: args.mu_max,
        budget: args.budget,
        seed: args.seed,
        ..Default::default()
    };
    let a = analyze(&net, &opts).map_err(|e| CliError::Input(e.to_string()))?;
    if args.json {
        let report = report_json(&net, &a);
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print!("{}", render_analysis(&net, &a, &opts));
    }
    if a.flags.is_empty() {
        Ok(())
    } else {
        Err(CliError::Inconsistent(format!(
            "{} consistency flag(s) raised",
            a.flags.len()
        )))
    }
}

fn generate(family: GenFamily) -> Result<Network, CliError> {
    match family {
        GenFamily::Builtin { name, sideinfo } => {
            let h = builtin_matrix(&name).map_err(|e| CliError::Input(e.to_string()))?;
            let s =
                parse_sideinfo(&sideinfo, h.rows()).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Network::new_unchecked(h, s))
        }
        GenFamily::Wyner { k, alpha, j } => {
            let alpha = parse_rat(&alpha).map_err(|e| CliError::Input(e.to_string()))?;
            gen_wyner(k, &alpha, j).map_err(|e| CliError::Input(e.to_string()))
        }
        GenFamily::Cyclic { k } => {
            eprintln!("note: receiver j misses transmitter j-1, with j-1 read as K when j = 1");
            gen_cyclic(k).map_err(|e| CliError::Input(e.to_string()))
        }
        GenFamily::Diag { k, sideinfo } => {
            let net = gen_diag(k).map_err(|e| CliError::Input(e.to_string()))?;
            let s = parse_sideinfo(&sideinfo, k).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Network::new_unchecked(net.h().clone(), s))
        }
    }
}

/// A classify input may be a full network file or a bare matrix file
/// (`{"H": [[...]]}` with an optional `"K"`).
fn load_classify_input(path: &str) -> Result<Network, CliError> {
    let text = read_input(path)?;
    if let Ok(net) = Network::from_json(&text) {
        return Ok(net);
    }
    #[derive(serde::Deserialize)]
    struct MatrixOnly {
        #[serde(rename = "H")]
        h: Vec<Vec<String>>,
    }
    let m: MatrixOnly = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("neither a network nor a matrix file: {e}")))?;
    let rows: Result<Vec<Vec<_>>, _> =
        m.h.iter()
            .map(|row| row.iter().map(|c| parse_rat(c)).collect())
            .collect();
    let rows = rows.map_err(|e| CliError::Input(e.to_string()))?;
    let h = Mat::from_rows(rows).map_err(|e| CliError::Input(e.to_string()))?;
    let net = Network::with_uniform_sideinfo(h, prelog_lab::network::SideInfoKind::None);
    let violations = net.validate();
    if violations.is_empty() {
        Ok(net)
    } else {
        Err(CliError::Input(
            violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        ))
    }
}

fn parse_powers(arg: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in arg.split(',').filter(|p| !p.trim().is_empty()) {
        let p: f64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad power value `{part}`")))?;
        if p <= 0.0 || !p.is_finite() {
            return Err(CliError::Input(format!("power must be positive: `{part}`")));
        }
        if let Some(&prev) = out.last() {
            if p <= prev {
                return Err(CliError::Input("powers must be strictly ascending".into()));
            }
        }
        out.push(p);
    }
    Ok(out)
}
