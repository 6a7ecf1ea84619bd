//! Vertex actions (piecewise cyclic shifts plus fixed points) and the
//! development of base blocks into full orbits.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("segment window {lo}..{hi} does not match modulus {modulus}")]
    WindowMismatch { lo: usize, hi: usize, modulus: u64 },
    #[error("segments and fixed points overlap or leave vertex {0} uncovered")]
    Coverage(usize),
    #[error("vertex {0} outside the action domain")]
    OutOfDomain(usize),
    #[error("action is not a permutation")]
    NotBijective,
    #[error("cannot parse action: {0}")]
    Parse(String),
}

/// One shift window: `x -> lo + ((x - lo + step) mod modulus)` for
/// `x` in `lo..=hi`. The window spans a full residue range, so the shift
/// permutes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub lo: usize,
    pub hi: usize,
    pub step: u64,
    pub modulus: u64,
}

/// A permutation of the host vertex set `0..domain`, given as disjoint
/// shift segments plus fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    domain: usize,
    segments: Vec<Segment>,
    fixed: BTreeSet<usize>,
}

impl ActionSpec {
    pub fn new(
        domain: usize,
        segments: Vec<Segment>,
        fixed: BTreeSet<usize>,
    ) -> Result<Self, ActionError> {
        for s in &segments {
            if s.hi < s.lo || (s.hi - s.lo + 1) as u64 != s.modulus || s.modulus == 0 {
                return Err(ActionError::WindowMismatch {
                    lo: s.lo,
                    hi: s.hi,
                    modulus: s.modulus,
                });
            }
        }
        let mut covered = vec![false; domain];
        for s in &segments {
            for x in s.lo..=s.hi {
                if x >= domain || covered[x] {
                    return Err(ActionError::Coverage(x));
                }
                covered[x] = true;
            }
        }
        for &x in &fixed {
            if x >= domain || covered[x] {
                return Err(ActionError::Coverage(x));
            }
            covered[x] = true;
        }
        if let Some(x) = covered.iter().position(|&c| !c) {
            return Err(ActionError::Coverage(x));
        }
        let action = ActionSpec {
            domain,
            segments,
            fixed,
        };
        // bijectivity: image set must have full cardinality
        let mut seen = vec![false; domain];
        for x in 0..domain {
            let y = action.apply(x)?;
            if y >= domain || seen[y] {
                return Err(ActionError::NotBijective);
            }
            seen[y] = true;
        }
        Ok(action)
    }

    /// The identity on `0..domain` (every vertex fixed).
    pub fn identity(domain: usize) -> Self {
        ActionSpec {
            domain,
            segments: Vec::new(),
            fixed: (0..domain).collect(),
        }
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn is_identity(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn fixed(&self) -> &BTreeSet<usize> {
        &self.fixed
    }

    pub fn apply(&self, x: usize) -> Result<usize, ActionError> {
        if self.fixed.contains(&x) {
            return Ok(x);
        }
        for s in &self.segments {
            if s.lo <= x && x <= s.hi {
                let off = (x - s.lo) as u64;
                return Ok(s.lo + ((off + s.step) % s.modulus) as usize);
            }
        }
        Err(ActionError::OutOfDomain(x))
    }

    /// Least `t >= 1` with the t-th power equal to the identity: the lcm
    /// over segments of `modulus / gcd(step, modulus)`.
    pub fn permutation_order(&self) -> u64 {
        self.segments
            .iter()
            .map(|s| s.modulus / gcd(s.step % s.modulus, s.modulus).max(1))
            .fold(1, lcm)
    }

    /// Grammar: `action <id> identity` or
    /// `action <id> [fix INF] shift <s> mod <m> on <lo>..<hi> [; shift ...]`.
    /// `INF` denotes the sentinel vertex `domain - 1`.
    pub fn parse(line: &str, domain: usize) -> Result<(String, ActionSpec), ActionError> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let err = |m: &str| ActionError::Parse(format!("{m}: {line:?}"));
        if toks.len() < 3 || toks[0] != "action" {
            return Err(err("expected `action <id> ...`"));
        }
        let id = toks[1].to_string();
        let mut rest = &toks[2..];
        if rest == ["identity"] {
            return Ok((id, ActionSpec::identity(domain)));
        }
        let mut fixed = BTreeSet::new();
        if rest.first() == Some(&"fix") {
            if rest.get(1) != Some(&"INF") {
                return Err(err("only `fix INF` is supported"));
            }
            if domain == 0 {
                return Err(err("INF needs a nonempty domain"));
            }
            fixed.insert(domain - 1);
            rest = &rest[2..];
        }
        let mut segments = Vec::new();
        for part in rest.join(" ").split(';') {
            let p: Vec<&str> = part.split_whitespace().collect();
            if p.len() != 6 || p[0] != "shift" || p[2] != "mod" || p[4] != "on" {
                return Err(err("expected `shift <s> mod <m> on <lo>..<hi>`"));
            }
            let step: u64 = p[1].parse().map_err(|_| err("bad step"))?;
            let modulus: u64 = p[3].parse().map_err(|_| err("bad modulus"))?;
            let (lo, hi) = p[5]
                .split_once("..")
                .ok_or_else(|| err("bad window"))
                .and_then(|(a, b)| {
                    Ok((
                        a.parse().map_err(|_| err("bad window"))?,
                        b.parse().map_err(|_| err("bad window"))?,
                    ))
                })?;
            segments.push(Segment {
                lo,
                hi,
                step,
                modulus,
            });
        }
        ActionSpec::new(domain, segments, fixed).map(|a| (id, a))
    }

    pub fn render(&self, id: &str) -> String {
        if self.is_identity() {
            return format!("action {id} identity");
        }
        let fix = if self.fixed.is_empty() {
            ""
        } else {
            "fix INF "
        };
        let segs: Vec<String> = self
            .segments
            .iter()
            .map(|s| format!("shift {} mod {} on {}..{}", s.step, s.modulus, s.lo, s.hi))
            .collect();
        format!("action {id} {fix}{}", segs.join(" ; "))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A labeled embedding of a catalog graph: the ordered tuple of host
/// vertices, tagged with the graph and the action that develops it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBlock {
    pub graph: String,
    pub action: String,
    pub tuple: Vec<usize>,
}

/// Develops a tuple through the full orbit of `action`: the t-th copy is
/// the image of the tuple under the t-th power. Short orbits are not
/// special-cased; a block stabilized by a proper power double-covers its
/// edges and fails verification instead.
pub fn develop_tuple(action: &ActionSpec, tuple: &[usize]) -> Result<Vec<Vec<usize>>, ActionError> {
    let order = action.permutation_order();
    let mut copies = Vec::with_capacity(order as usize);
    let mut cur = tuple.to_vec();
    for _ in 0..order {
        let next: Result<Vec<usize>, ActionError> = cur.iter().map(|&x| action.apply(x)).collect();
        copies.push(cur);
        cur = next?;
    }
    Ok(copies)
}
