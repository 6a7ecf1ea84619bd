//! Host graphs being decomposed: complete graphs and complete multipartite
//! graphs with explicit partition rules, plus the counting side
//! (expected copies, admissible orders).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HostError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("host has {edges} edges, not divisible by e = {e}")]
    NotDivisible { edges: u64, e: u64 },
    #[error("no cubic graph on {0} vertices (odd order)")]
    OddOrder(u64),
    #[error("cannot parse host: {0}")]
    Parse(String),
}

/// How a multipartite vertex set is split into parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionRule {
    /// Part `i` is `{x < universe : x = i (mod modulus)}`; an optional tail
    /// range `lo..=hi` forms one extra part.
    ResidueMod {
        modulus: usize,
        universe: usize,
        tail: Option<(usize, usize)>,
    },
    /// Explicit parts, each a union of arithmetic windows `(lo, hi, step)`.
    Ranges(Vec<Vec<(usize, usize, usize)>>),
}

/// The graph being decomposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HostSpec {
    Complete { n: usize },
    Multipartite { rule: PartitionRule },
}

impl HostSpec {
    pub fn complete(n: usize) -> Self {
        HostSpec::Complete { n }
    }

    /// Residue-class partition of `0..universe` modulo `modulus`, with an
    /// optional tail part appended directly after the prefix.
    pub fn residue_mod(
        modulus: usize,
        universe: usize,
        tail: Option<(usize, usize)>,
    ) -> Result<Self, HostError> {
        if modulus == 0 || universe == 0 || universe % modulus != 0 {
            return Err(HostError::InvalidPartition(format!(
                "universe {universe} not a multiple of modulus {modulus}"
            )));
        }
        if let Some((lo, hi)) = tail {
            if lo != universe || hi < lo {
                return Err(HostError::InvalidPartition(format!(
                    "tail {lo}..{hi} must start at {universe}"
                )));
            }
        }
        let host = HostSpec::Multipartite {
            rule: PartitionRule::ResidueMod {
                modulus,
                universe,
                tail,
            },
        };
        host.validate()?;
        Ok(host)
    }

    pub fn ranges(parts: Vec<Vec<(usize, usize, usize)>>) -> Result<Self, HostError> {
        let host = HostSpec::Multipartite {
            rule: PartitionRule::Ranges(parts),
        };
        host.validate()?;
        Ok(host)
    }

    fn validate(&self) -> Result<(), HostError> {
        let parts = match self.parts() {
            None => return Ok(()),
            Some(p) => p,
        };
        if parts.iter().any(|p| p.is_empty()) {
            return Err(HostError::InvalidPartition("empty part".into()));
        }
        let n = self.n();
        let mut seen = vec![false; n];
        for p in &parts {
            for &x in p {
                if x >= n || seen[x] {
                    return Err(HostError::InvalidPartition(format!(
                        "vertex {x} out of range or in two parts"
                    )));
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(HostError::InvalidPartition(
                "parts do not cover 0..n-1".into(),
            ));
        }
        Ok(())
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        match self {
            HostSpec::Complete { n } => *n,
            HostSpec::Multipartite { rule } => match rule {
                PartitionRule::ResidueMod { universe, tail, .. } => {
                    tail.map_or(*universe, |(_, hi)| hi + 1)
                }
                PartitionRule::Ranges(parts) => parts
                    .iter()
                    .flatten()
                    .map(|&(_, hi, _)| hi + 1)
                    .max()
                    .unwrap_or(0),
            },
        }
    }

    /// The explicit parts, or `None` for a complete host.
    pub fn parts(&self) -> Option<Vec<Vec<usize>>> {
        match self {
            HostSpec::Complete { .. } => None,
            HostSpec::Multipartite { rule } => Some(match rule {
                PartitionRule::ResidueMod {
                    modulus,
                    universe,
                    tail,
                } => {
                    let mut parts: Vec<Vec<usize>> = (0..*modulus)
                        .map(|i| (i..*universe).step_by(*modulus).collect())
                        .collect();
                    if let Some((lo, hi)) = tail {
                        parts.push((*lo..=*hi).collect());
                    }
                    parts
                }
                PartitionRule::Ranges(ranges) => ranges
                    .iter()
                    .map(|windows| {
                        let mut p: Vec<usize> = windows
                            .iter()
                            .flat_map(|&(lo, hi, step)| (lo..=hi).step_by(step))
                            .collect();
                        p.sort_unstable();
                        p
                    })
                    .collect(),
            }),
        }
    }

    /// Part index per vertex (`None` for complete hosts).
    pub fn part_index(&self) -> Option<Vec<usize>> {
        let parts = self.parts()?;
        let mut idx = vec![usize::MAX; self.n()];
        for (i, p) in parts.iter().enumerate() {
            for &x in p {
                idx[x] = i;
            }
        }
        Some(idx)
    }

    pub fn part_sizes(&self) -> Option<Vec<usize>> {
        self.parts().map(|ps| ps.iter().map(|p| p.len()).collect())
    }

    pub fn edge_count(&self) -> u64 {
        let n = self.n() as u64;
        match self.part_sizes() {
            None => n * (n - 1) / 2,
            Some(sizes) => {
                let intra: u64 = sizes.iter().map(|&s| (s as u64) * (s as u64 - 1) / 2).sum();
                n * (n - 1) / 2 - intra
            }
        }
    }

    pub fn is_host_edge(&self, x: usize, y: usize) -> bool {
        if x == y || x >= self.n() || y >= self.n() {
            return false;
        }
        match self.part_index() {
            None => true,
            Some(idx) => idx[x] != idx[y],
        }
    }

    /// Number of copies of an e-edge graph in a decomposition of this host.
    pub fn expected_copies(&self, e: u64) -> Result<u64, HostError> {
        assert!(e > 0);
        let edges = self.edge_count();
        if edges % e != 0 {
            return Err(HostError::NotDivisible { edges, e });
        }
        Ok(edges / e)
    }

    /// Grammar:
    /// `host complete <n>`
    /// `host multipartite mod <r> over 0..<k-1> [tail <lo>..<hi>]`
    /// `host multipartite parts <lo>..<hi> step <s> [+ ...] [; ...]`
    pub fn parse(line: &str) -> Result<HostSpec, HostError> {
        let err = |m: &str| HostError::Parse(format!("{m}: {line:?}"));
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&"host") {
            return Err(err("expected `host ...`"));
        }
        match toks.get(1) {
            Some(&"complete") => {
                let n = toks
                    .get(2)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("expected `host complete <n>`"))?;
                Ok(HostSpec::complete(n))
            }
            Some(&"multipartite") => match toks.get(2) {
                Some(&"mod") => {
                    let r: usize = toks
                        .get(3)
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| err("bad modulus"))?;
                    if toks.get(4) != Some(&"over") {
                        return Err(err("expected `over 0..<k-1>`"));
                    }
                    let (lo, hi) = parse_range(toks.get(5).copied().unwrap_or(""))
                        .ok_or_else(|| err("bad range"))?;
                    if lo != 0 {
                        return Err(err("residue range must start at 0"));
                    }
                    let tail = match toks.get(6) {
                        None => None,
                        Some(&"tail") => Some(
                            parse_range(toks.get(7).copied().unwrap_or(""))
                                .ok_or_else(|| err("bad tail range"))?,
                        ),
                        Some(_) => return Err(err("unexpected trailing tokens")),
                    };
                    HostSpec::residue_mod(r, hi + 1, tail)
                }
                Some(&"parts") => {
                    let body = line
                        .split_once(" parts ")
                        .map(|(_, b)| b)
                        .ok_or_else(|| err("missing parts body"))?;
                    let mut parts = Vec::new();
                    for part in body.split(';') {
                        let mut windows = Vec::new();
                        for w in part.split('+') {
                            let t: Vec<&str> = w.split_whitespace().collect();
                            if t.len() != 3 || t[1] != "step" {
                                return Err(err("expected `<lo>..<hi> step <s>`"));
                            }
                            let (lo, hi) = parse_range(t[0]).ok_or_else(|| err("bad window"))?;
                            let step: usize = t[2].parse().map_err(|_| err("bad step"))?;
                            if step == 0 {
                                return Err(err("zero step"));
                            }
                            windows.push((lo, hi, step));
                        }
                        parts.push(windows);
                    }
                    HostSpec::ranges(parts)
                }
                _ => Err(err("expected `mod` or `parts`")),
            },
            _ => Err(err("expected `complete` or `multipartite`")),
        }
    }

    pub fn render(&self) -> String {
        match self {
            HostSpec::Complete { n } => format!("host complete {n}"),
            HostSpec::Multipartite { rule } => match rule {
                PartitionRule::ResidueMod {
                    modulus,
                    universe,
                    tail,
                } => {
                    let mut s = format!("host multipartite mod {modulus} over 0..{}", universe - 1);
                    if let Some((lo, hi)) = tail {
                        s.push_str(&format!(" tail {lo}..{hi}"));
                    }
                    s
                }
                PartitionRule::Ranges(parts) => {
                    let body: Vec<String> = parts
                        .iter()
                        .map(|ws| {
                            ws.iter()
                                .map(|&(lo, hi, step)| format!("{lo}..{hi} step {step}"))
                                .collect::<Vec<_>>()
                                .join(" + ")
                        })
                        .collect();
                    format!("host multipartite parts {}", body.join(" ; "))
                }
            },
        }
    }
}

fn parse_range(tok: &str) -> Option<(usize, usize)> {
    let (a, b) = tok.split_once("..")?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// The admissible orders for designs of a cubic graph on `v` vertices:
/// residues modulo the least period, plus the minimum-order bound
/// (`n = 1` or `n >= v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSet {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub minimum_order: u64,
}

impl AdmissibleSet {
    pub fn contains(&self, n: u64) -> bool {
        (n == 1 || n >= self.minimum_order) && self.residues.contains(&(n % self.modulus))
    }
}

/// Divisibility conditions for decomposing `K_n` into a 3-regular graph on
/// `v` vertices: `n = 1 (mod 3)` and `n(n-1) = 0 (mod 3v)`, reduced to the
/// least modulus that makes the residue set periodic.
pub fn admissible_residues(v: u64) -> Result<AdmissibleSet, HostError> {
    if v % 2 != 0 || v < 4 {
        return Err(HostError::OddOrder(v));
    }
    let m0 = 3 * v;
    let set: Vec<u64> = (0..m0)
        .filter(|&r| r % 3 == 1 && (r * (r + m0 - 1)) % m0 == 0)
        .collect();
    // least divisor d of m0 under which the set is translation-invariant
    let mut modulus = m0;
    for d in 1..=m0 {
        if m0 % d != 0 {
            continue;
        }
        let shifted: Vec<u64> = {
            let mut s: Vec<u64> = set.iter().map(|&r| (r + d) % m0).collect();
            s.sort_unstable();
            s
        };
        if shifted == set {
            modulus = d;
            break;
        }
    }
    let mut residues: Vec<u64> = set.iter().map(|&r| r % modulus).collect();
    residues.sort_unstable();
    residues.dedup();
    Ok(AdmissibleSet {
        modulus,
        residues,
        minimum_order: v,
    })
}
