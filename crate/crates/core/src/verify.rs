//! The independent re-checker: certifies that a set of base blocks
//! decomposes the host exactly, with per-edge multiplicity accounting.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::actions::{develop_tuple, ActionError, ActionSpec, BaseBlock};
use crate::graphs::{Catalog, CatalogError};
use crate::hosts::HostSpec;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("configuration: {0}")]
    Catalog(#[from] CatalogError),
    #[error("configuration: block {block} references undeclared action {action:?}")]
    MissingAction { block: usize, action: String },
    #[error("configuration: block {block} vertex {vertex} outside host of size {n}")]
    VertexOutOfRange {
        block: usize,
        vertex: usize,
        n: usize,
    },
    #[error("configuration: action error: {0}")]
    Action(#[from] ActionError),
}

/// A set of base blocks over one host, all referencing one catalog graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub host: HostSpec,
    pub graph: String,
    pub actions: BTreeMap<String, ActionSpec>,
    pub blocks: Vec<BaseBlock>,
    pub provenance: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    NonHostEdge,
    CoverageDeficit,
    CoverageExcess,
    RepeatedVertex,
    BadTupleLength,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ViolationKind::NonHostEdge => "non-host-edge",
            ViolationKind::CoverageDeficit => "coverage-deficit",
            ViolationKind::CoverageExcess => "coverage-excess",
            ViolationKind::RepeatedVertex => "repeated-vertex",
            ViolationKind::BadTupleLength => "bad-tuple-length",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Edge(usize, usize),
    Block(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Witness,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub status: Status,
    pub copies: u64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Checks that the blocks decompose the host exactly: distinct tuple
/// vertices, every developed edge a host edge, and each host edge covered
/// exactly once. Missing graph or action references are configuration
/// errors, distinct from a FAIL report.
pub fn verify(d: &Decomposition, catalog: &Catalog) -> Result<VerifyReport, VerifyError> {
    let graph = catalog.get(&d.graph)?;
    let n = d.host.n();
    let part = d.host.part_index();
    let mut coverage = vec![0u64; n * n]; // upper triangle, x*n+y with x<y
    let mut violations = Vec::new();
    let mut copies = 0u64;

    for (bi, block) in d.blocks.iter().enumerate() {
        if block.graph != d.graph {
            return Err(VerifyError::Catalog(CatalogError::Malformed {
                name: block.graph.clone(),
                msg: format!("block {bi} does not reference graph {:?}", d.graph),
            }));
        }
        let action = d
            .actions
            .get(&block.action)
            .ok_or_else(|| VerifyError::MissingAction {
                block: bi,
                action: block.action.clone(),
            })?;
        if let Some(&v) = block.tuple.iter().find(|&&v| v >= n) {
            return Err(VerifyError::VertexOutOfRange {
                block: bi,
                vertex: v,
                n,
            });
        }
        if block.tuple.len() != graph.v {
            violations.push(Violation {
                kind: ViolationKind::BadTupleLength,
                witness: Witness::Block(bi),
                multiplicity: block.tuple.len() as u64,
            });
            continue;
        }
        {
            let mut seen = vec![false; n];
            let mut repeated = false;
            for &v in &block.tuple {
                if seen[v] {
                    repeated = true;
                }
                seen[v] = true;
            }
            if repeated {
                violations.push(Violation {
                    kind: ViolationKind::RepeatedVertex,
                    witness: Witness::Block(bi),
                    multiplicity: 1,
                });
                continue;
            }
        }
        for copy in develop_tuple(action, &block.tuple)? {
            copies += 1;
            for &(i, j) in graph.edges() {
                let (x, y) = (copy[i], copy[j]);
                let (x, y) = (x.min(y), x.max(y));
                coverage[x * n + y] += 1;
            }
        }
    }

    for x in 0..n {
        for y in x + 1..n {
            let c = coverage[x * n + y];
            let host_edge = match &part {
                None => true,
                Some(idx) => idx[x] != idx[y],
            };
            let kind = if !host_edge && c > 0 {
                Some(ViolationKind::NonHostEdge)
            } else if host_edge && c == 0 {
                Some(ViolationKind::CoverageDeficit)
            } else if host_edge && c > 1 {
                Some(ViolationKind::CoverageExcess)
            } else {
                None
            };
            if let Some(kind) = kind {
                violations.push(Violation {
                    kind,
                    witness: Witness::Edge(x, y),
                    multiplicity: c,
                });
            }
        }
    }

    violations.sort_by_key(|v| {
        let w = match v.witness {
            Witness::Edge(x, y) => x * n + y,
            Witness::Block(b) => b,
        };
        (v.kind, w)
    });

    let status = if violations.is_empty() {
        debug_assert_eq!(
            copies,
            d.host.expected_copies(graph.edge_count() as u64).unwrap()
        );
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerifyReport {
        status,
        copies,
        violations,
    })
}

/// Per-entry result of a corpus run, in input order.
#[derive(Debug)]
pub struct CorpusRun {
    pub results: Vec<(String, Result<VerifyReport, VerifyError>)>,
}

impl CorpusRun {
    pub fn passed(&self) -> usize {
        self.results
            .iter()
            .filter(|(_, r)| matches!(r, Ok(rep) if rep.passed()))
            .count()
    }

    pub fn failed(&self) -> usize {
        self.results.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

/// Verifies many entries, in parallel when `jobs > 1`; results keep input
/// order. With `fail_fast`, stops after the first failing entry.
pub fn verify_corpus(
    entries: &[crate::corpus::CorpusEntry],
    catalog: &Catalog,
    jobs: usize,
    fail_fast: bool,
) -> CorpusRun {
    if fail_fast {
        let mut results = Vec::new();
        for e in entries {
            let r = verify(&e.decomposition, catalog);
            let failed = !matches!(&r, Ok(rep) if rep.passed());
            results.push((e.id.clone(), r));
            if failed {
                break;
            }
        }
        return CorpusRun { results };
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let results = pool.install(|| {
        entries
            .par_iter()
            .map(|e| (e.id.clone(), verify(&e.decomposition, catalog)))
            .collect()
    });
    CorpusRun { results }
}
