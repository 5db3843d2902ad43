//! The network object: a full-rank channel matrix `H` together with the
//! side-information sets `S_k`, plus validation, JSON interchange and the
//! built-in generator families.
//!
//! Indices are 1-based in every file format and report; internally everything
//! is 0-based.

use crate::linalg::{parse_rat, rat_int, Mat, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A K-user cognitive interference network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    k: usize,
    h: Mat,
    /// 0-based: s[k] is the set of message indices known to transmitter k.
    s: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideInfoKind {
    None,
    Full,
    Partial,
}

impl fmt::Display for SideInfoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideInfoKind::None => write!(f, "none"),
            SideInfoKind::Full => write!(f, "full"),
            SideInfoKind::Partial => write!(f, "partial"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonSquare {
        rows: usize,
        cols: usize,
    },
    WrongMatrixSize {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    WrongSideInfoCount {
        expected: usize,
        got: usize,
    },
    IndexOutOfRange {
        set: usize,
        value: i64,
    },
    MissingSelf {
        set: usize,
    },
    RankDeficient {
        rank: usize,
        k: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonSquare { rows, cols } => {
                write!(f, "H is {rows}x{cols}, not square")
            }
            Violation::WrongMatrixSize {
                expected,
                rows,
                cols,
            } => {
                write!(f, "H is {rows}x{cols}, expected {expected}x{expected}")
            }
            Violation::WrongSideInfoCount { expected, got } => {
                write!(f, "S lists {got} sets, expected {expected}")
            }
            Violation::IndexOutOfRange { set, value } => {
                write!(f, "S_{set} contains out-of-range index {value}")
            }
            Violation::MissingSelf { set } => write!(f, "{set} not in S_{set}"),
            Violation::RankDeficient { rank, k } => write!(f, "rank(H)={rank} < K={k}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum NetworkError {
    #[error("{0}")]
    Parse(String),
    #[error("invalid network: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown builtin matrix `{0}` (expected H1 or H2)")]
    UnknownBuiltin(String),
    #[error("{0}")]
    BadParameter(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Network {
    /// Build without validating; pair with [`Network::validate`].
    pub fn new_unchecked(h: Mat, s: Vec<BTreeSet<usize>>) -> Self {
        let k = h.rows();
        Network { k, h, s }
    }

    /// Build and validate, reporting every violated invariant.
    pub fn new(h: Mat, s: Vec<BTreeSet<usize>>) -> Result<Self, Vec<Violation>> {
        let net = Network::new_unchecked(h, s);
        let violations = net.validate();
        if violations.is_empty() {
            Ok(net)
        } else {
            Err(violations)
        }
    }

    /// H plus the uniform side-information settings (every S_k = {k} or all
    /// of {1..K}).
    pub fn with_uniform_sideinfo(h: Mat, kind: SideInfoKind) -> Self {
        let k = h.rows();
        let s = match kind {
            SideInfoKind::None => (0..k).map(|i| BTreeSet::from([i])).collect(),
            SideInfoKind::Full => (0..k).map(|_| (0..k).collect()).collect(),
            SideInfoKind::Partial => panic!("partial side information needs explicit sets"),
        };
        Network::new_unchecked(h, s)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> &Mat {
        &self.h
    }

    pub fn sideinfo(&self) -> &[BTreeSet<usize>] {
        &self.s
    }

    pub fn sideinfo_mut(&mut self) -> &mut Vec<BTreeSet<usize>> {
        &mut self.s
    }

    /// Transmitters that know message `i` (0-based): {k : i in S_k}.
    pub fn knowers(&self, i: usize) -> Vec<usize> {
        (0..self.k).filter(|&k| self.s[k].contains(&i)).collect()
    }

    /// Empty iff all Network invariants hold.
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.h.rows() != self.h.cols() {
            v.push(Violation::NonSquare {
                rows: self.h.rows(),
                cols: self.h.cols(),
            });
        }
        if self.h.rows() != self.k || self.h.cols() != self.k {
            v.push(Violation::WrongMatrixSize {
                expected: self.k,
                rows: self.h.rows(),
                cols: self.h.cols(),
            });
        }
        if self.s.len() != self.k {
            v.push(Violation::WrongSideInfoCount {
                expected: self.k,
                got: self.s.len(),
            });
        }
        for (k0, set) in self.s.iter().enumerate() {
            for &j in set {
                if j >= self.k {
                    v.push(Violation::IndexOutOfRange {
                        set: k0 + 1,
                        value: j as i64 + 1,
                    });
                }
            }
            if !set.contains(&k0) {
                v.push(Violation::MissingSelf { set: k0 + 1 });
            }
        }
        if self.h.rows() == self.h.cols() {
            let rank = self.h.rank();
            if rank < self.k {
                v.push(Violation::RankDeficient { rank, k: self.k });
            }
        }
        v
    }

    pub fn classify_sideinfo(&self) -> SideInfoKind {
        let none = (0..self.k).all(|k| self.s[k].len() == 1 && self.s[k].contains(&k));
        if none {
            return SideInfoKind::None;
        }
        let full = self.s.iter().all(|set| set.len() == self.k);
        if full {
            return SideInfoKind::Full;
        }
        SideInfoKind::Partial
    }

    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            k: self.k,
            h: (0..self.k)
                .map(|r| self.h.row(r).iter().map(ToString::to_string).collect())
                .collect(),
            s: self
                .s
                .iter()
                .map(|set| set.iter().map(|&j| j as u64 + 1).collect())
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("network serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let file: NetworkFile = serde_json::from_str(text)
            .map_err(|e| NetworkError::Parse(format!("malformed network JSON: {e}")))?;
        let k = file.k;
        if file.h.len() != k {
            return Err(NetworkError::Parse(format!(
                "H has {} rows, expected K={k}",
                file.h.len()
            )));
        }
        let mut rows = Vec::with_capacity(k);
        for (r, row) in file.h.iter().enumerate() {
            if row.len() != k {
                return Err(NetworkError::Parse(format!(
                    "H row {} has {} entries, expected K={k}",
                    r + 1,
                    row.len()
                )));
            }
            let mut parsed = Vec::with_capacity(k);
            for (c, cell) in row.iter().enumerate() {
                let value = parse_rat(cell)
                    .map_err(|e| NetworkError::Parse(format!("H[{}][{}]: {e}", r + 1, c + 1)))?;
                parsed.push(value);
            }
            rows.push(parsed);
        }
        let h = Mat::from_rows(rows).map_err(|e| NetworkError::Parse(e.to_string()))?;

        // Range-check the 1-based indices before shifting to 0-based.
        let mut violations = Vec::new();
        let mut s = Vec::with_capacity(file.s.len());
        for (k0, raw) in file.s.iter().enumerate() {
            let mut set = BTreeSet::new();
            for &j in raw {
                if j == 0 || j as usize > k {
                    violations.push(Violation::IndexOutOfRange {
                        set: k0 + 1,
                        value: j as i64,
                    });
                } else {
                    set.insert(j as usize - 1);
                }
            }
            s.push(set);
        }
        if !violations.is_empty() {
            return Err(NetworkError::Invalid(violations));
        }
        Network::new(h, s).map_err(NetworkError::Invalid)
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "H")]
    h: Vec<Vec<String>>,
    #[serde(rename = "S")]
    s: Vec<Vec<u64>>,
}

/// The two bundled 3x3 example matrices.
pub fn builtin_matrix(name: &str) -> Result<Mat, NetworkError> {
    match name.to_ascii_uppercase().as_str() {
        "H1" => Ok(Mat::from_rows(vec![
            vec![
                rat_int(1),
                Rat::new(1.into(), 2.into()),
                Rat::new(1.into(), 4.into()),
            ],
            vec![
                Rat::new(1.into(), 2.into()),
                rat_int(1),
                Rat::new(1.into(), 2.into()),
            ],
            vec![rat_int(0), Rat::new(1.into(), 2.into()), rat_int(1)],
        ])
        .expect("H1 literal")),
        "H2" => Ok(Mat::from_rows(vec![
            vec![rat_int(1), Rat::new(1.into(), 2.into()), rat_int(0)],
            vec![
                Rat::new(1.into(), 2.into()),
                rat_int(1),
                Rat::new(1.into(), 2.into()),
            ],
            vec![rat_int(0), Rat::new(1.into(), 2.into()), rat_int(1)],
        ])
        .expect("H2 literal")),
        other => Err(NetworkError::UnknownBuiltin(other.to_string())),
    }
}

/// Linear cellular chain: 1 on the diagonal, `alpha` on the first upper and
/// lower secondary diagonals, 0 elsewhere. Transmitter k knows the messages
/// of the J previous and J next transmitters, clipped at the chain ends.
pub fn gen_wyner(k: usize, alpha: &Rat, j: usize) -> Result<Network, NetworkError> {
    if k < 1 {
        return Err(NetworkError::BadParameter("wyner requires K >= 1".into()));
    }
    if alpha.is_zero() {
        return Err(NetworkError::BadParameter(
            "wyner requires alpha != 0".into(),
        ));
    }
    let mut h = Mat::zero(k, k);
    for r in 0..k {
        h.set(r, r, rat_int(1));
        if r + 1 < k {
            h.set(r, r + 1, alpha.clone());
            h.set(r + 1, r, alpha.clone());
        }
    }
    let s = (0..k)
        .map(|i| (i.saturating_sub(j)..=(i + j).min(k - 1)).collect())
        .collect();
    Ok(Network::new_unchecked(h, s))
}

/// Cyclic family: receiver j hears every transmitter except transmitter j-1,
/// where j-1 wraps to K at j=1. No side information.
pub fn gen_cyclic(k: usize) -> Result<Network, NetworkError> {
    if k < 2 {
        return Err(NetworkError::BadParameter("cyclic requires K >= 2".into()));
    }
    let mut h = Mat::zero(k, k);
    for r in 0..k {
        let silent = (r + k - 1) % k;
        for c in 0..k {
            if c != silent {
                h.set(r, c, rat_int(1));
            }
        }
    }
    let s = (0..k).map(|i| BTreeSet::from([i])).collect();
    Ok(Network::new_unchecked(h, s))
}

/// Identity channel, no side information.
pub fn gen_diag(k: usize) -> Result<Network, NetworkError> {
    if k < 1 {
        return Err(NetworkError::BadParameter("diag requires K >= 1".into()));
    }
    Ok(Network::with_uniform_sideinfo(
        Mat::identity(k),
        SideInfoKind::None,
    ))
}

/// Parse a side-information argument: `none`, `full`, or explicit 1-based
/// sets like `1,2;1,2,3;1,2,3`.
pub fn parse_sideinfo(spec: &str, k: usize) -> Result<Vec<BTreeSet<usize>>, NetworkError> {
    match spec {
        "none" => Ok((0..k).map(|i| BTreeSet::from([i])).collect()),
        "full" => Ok((0..k).map(|_| (0..k).collect()).collect()),
        other => {
            let groups: Vec<&str> = other.split(';').collect();
            if groups.len() != k {
                return Err(NetworkError::BadParameter(format!(
                    "side information lists {} sets, expected {k}",
                    groups.len()
                )));
            }
            let mut out = Vec::with_capacity(k);
            for (k0, group) in groups.iter().enumerate() {
                let mut set = BTreeSet::new();
                for item in group.split(',').filter(|t| !t.trim().is_empty()) {
                    let j: usize = item.trim().parse().map_err(|_| {
                        NetworkError::BadParameter(format!(
                            "bad index `{item}` in side-information set {}",
                            k0 + 1
                        ))
                    })?;
                    if j == 0 || j > k {
                        return Err(NetworkError::BadParameter(format!(
                            "index {j} out of range in side-information set {}",
                            k0 + 1
                        )));
                    }
                    set.insert(j - 1);
                }
                out.push(set);
            }
            Ok(out)
        }
    }
}
