//! Randomized local search for base blocks under a prescribed action:
//! hill climbing with sideways moves, incremental cost evaluation and
//! random restarts.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::actions::{ActionSpec, BaseBlock, Segment};
use crate::graphs::{Catalog, CatalogError};
use crate::hosts::HostSpec;
use crate::verify::{verify, Decomposition};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("invariant violated: {blocks} blocks x orbit {orbit} x {e} edges != {host_edges} host edges")]
    BadArithmetic {
        blocks: usize,
        orbit: u64,
        e: usize,
        host_edges: u64,
    },
    #[error("action domain {domain} does not match host size {n}")]
    DomainMismatch { domain: usize, n: usize },
}

/// A search instance: find `block_count` base blocks whose development
/// under `action` decomposes the host.
#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub host: HostSpec,
    pub graph: String,
    pub action: ActionSpec,
    pub block_count: usize,
}

impl SearchProblem {
    pub fn validate(&self, catalog: &Catalog) -> Result<(), SearchError> {
        let g = catalog.get(&self.graph)?;
        if self.action.domain() != self.host.n() {
            return Err(SearchError::DomainMismatch {
                domain: self.action.domain(),
                n: self.host.n(),
            });
        }
        let orbit = self.action.permutation_order();
        let host_edges = self.host.edge_count();
        if self.block_count as u64 * orbit * g.edge_count() as u64 != host_edges {
            return Err(SearchError::BadArithmetic {
                blocks: self.block_count,
                orbit,
                e: g.edge_count(),
                host_edges,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub max_steps: u64,
    pub max_restarts: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_steps: 2_000_000,
            max_restarts: u64::MAX,
        }
    }
}

/// Cost weight of a developed non-host edge and of a repeated tuple
/// entry; strictly worse than any single coverage defect.
pub const NON_HOST_PENALTY: u64 = 4;

struct Engine<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    nbrs: Vec<Vec<usize>>, // catalog neighbours per coordinate
    orbit: usize,
    pows: Vec<Vec<usize>>, // pows[t][x] = t-th power image
    host_edge: Vec<bool>,  // n*n upper triangle
    coverage: Vec<u32>,
    cost: u64,
    blocks: Vec<Vec<usize>>,
}

impl<'a> Engine<'a> {
    fn new(p: &SearchProblem, g: &'a crate::graphs::CatalogGraph) -> Self {
        let n = p.host.n();
        let orbit = p.action.permutation_order() as usize;
        let mut pows = Vec::with_capacity(orbit);
        pows.push((0..n).collect::<Vec<usize>>());
        for t in 1..orbit {
            let prev = &pows[t - 1];
            pows.push((0..n).map(|x| p.action.apply(prev[x]).unwrap()).collect());
        }
        let part = p.host.part_index();
        let mut host_edge = vec![false; n * n];
        for x in 0..n {
            for y in x + 1..n {
                let he = match &part {
                    None => true,
                    Some(idx) => idx[x] != idx[y],
                };
                host_edge[x * n + y] = he;
            }
        }
        let mut nbrs = vec![Vec::new(); g.v];
        for &(a, b) in g.edges() {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        Engine {
            n,
            edges: g.edges(),
            nbrs,
            orbit,
            pows,
            host_edge,
            coverage: vec![0; n * n],
            cost: 0,
            blocks: Vec::new(),
        }
    }

    fn place(&mut self, x: usize, y: usize, delta: i32) -> i64 {
        if x == y {
            // self-pair from a repeated vertex placement
            return NON_HOST_PENALTY as i64 * delta as i64;
        }
        let (a, b) = (x.min(y), x.max(y));
        let idx = a * self.n + b;
        if !self.host_edge[idx] {
            return NON_HOST_PENALTY as i64 * delta as i64;
        }
        let before = self.coverage[idx] as i64;
        let after = before + delta as i64;
        self.coverage[idx] = after as u32;
        (after - 1).abs() - (before - 1).abs()
    }

    /// Adds (+1) or removes (-1) the orbit of one block, updating cost.
    fn apply_block(&mut self, tuple: &[usize], delta: i32) {
        let edges = self.edges;
        let mut change = 0i64;
        for t in 0..self.orbit {
            for &(i, j) in edges {
                let x = self.pows[t][tuple[i]];
                let y = self.pows[t][tuple[j]];
                change += self.place(x, y, delta);
            }
        }
        self.cost = (self.cost as i64 + change) as u64;
    }

    /// Changes one coordinate, updating only the touched placements.
    fn move_coord(&mut self, b: usize, i: usize, w: usize) {
        let old = self.blocks[b][i];
        let nbrs = std::mem::take(&mut self.nbrs[i]);
        let mut change = 0i64;
        for t in 0..self.orbit {
            // remove old placements, add new ones
            let xo = self.pows[t][old];
            let xw = self.pows[t][w];
            for &j in &nbrs {
                let other = self.pows[t][self.blocks[b][j]];
                change += self.place(xo, other, -1);
                change += self.place(xw, other, 1);
            }
        }
        self.nbrs[i] = nbrs;
        self.cost = (self.cost as i64 + change) as u64;
        self.blocks[b][i] = w;
    }

    fn deficit_base(&self) -> u64 {
        // cost of an empty state: every host edge uncovered
        self.host_edge.iter().filter(|&&h| h).count() as u64
    }

    fn reset(&mut self, blocks: Vec<Vec<usize>>) {
        self.coverage.iter_mut().for_each(|c| *c = 0);
        self.cost = self.deficit_base();
        self.blocks = Vec::new();
        for b in blocks {
            self.apply_block(&b, 1);
            self.blocks.push(b);
        }
    }

    fn full_recompute(&self) -> u64 {
        let mut cov = vec![0i64; self.n * self.n];
        let mut cost = 0u64;
        for tuple in &self.blocks {
            let mut seen = vec![false; self.n];
            let mut dup = 0usize;
            for &x in tuple {
                if std::mem::replace(&mut seen[x], true) {
                    dup += 1;
                }
            }
            let _ = dup;
            for t in 0..self.orbit {
                let pow = &self.pows[t];
                for &(i, j) in self.edges {
                    let (x, y) = (pow[tuple[i]], pow[tuple[j]]);
                    if x == y {
                        cost += NON_HOST_PENALTY;
                        continue;
                    }
                    let (a, b) = (x.min(y), x.max(y));
                    if self.host_edge[a * self.n + b] {
                        cov[a * self.n + b] += 1;
                    } else {
                        cost += NON_HOST_PENALTY;
                    }
                }
            }
        }
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.host_edge[x * self.n + y] {
                    cost += (cov[x * self.n + y] - 1).unsigned_abs();
                }
            }
        }
        cost
    }
}

/// The cost of a block set: per-host-edge coverage defects, a weight-4
/// penalty per developed non-host edge, and a penalty per repeated tuple
/// entry. Zero exactly when verification would pass.
pub fn cost(
    p: &SearchProblem,
    blocks: &[Vec<usize>],
    catalog: &Catalog,
) -> Result<u64, SearchError> {
    let g = catalog.get(&p.graph)?;
    let mut engine = Engine::new(p, g);
    engine.reset(blocks.to_vec());
    let mut repeated = 0u64;
    for tuple in blocks {
        let mut seen = vec![false; p.host.n()];
        for &x in tuple {
            if std::mem::replace(&mut seen[x], true) {
                repeated += NON_HOST_PENALTY;
            }
        }
    }
    Ok(engine.cost + repeated)
}

fn random_tuple(rng: &mut ChaCha8Rng, n: usize, v: usize) -> Vec<usize> {
    let mut tuple = Vec::with_capacity(v);
    while tuple.len() < v {
        let x = rng.random_range(0..n);
        if !tuple.contains(&x) {
            tuple.push(x);
        }
    }
    tuple
}

/// Hill climbing with sideways moves: propose replacing one coordinate of
/// one block by a random host vertex, accept when the cost does not
/// increase, restart from random tuples after a plateau of
/// `20 * total coordinates` sideways steps. Deterministic for a fixed
/// seed. Returns the first zero-cost state, re-verified, or `None` when
/// the budget runs out.
pub fn local_search(
    p: &SearchProblem,
    seed: u64,
    budget: SearchBudget,
    catalog: &Catalog,
) -> Result<Option<Vec<BaseBlock>>, SearchError> {
    p.validate(catalog)?;
    let g = catalog.get(&p.graph)?;
    if p.block_count == 0 {
        return Ok(Some(Vec::new()));
    }
    let n = p.host.n();
    let v = g.v;
    let coords = p.block_count * v;
    let plateau_limit = 20 * coords as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut engine = Engine::new(p, g);

    let mut restarts = 0u64;
    let mut steps = 0u64;
    let mut accepted = 0u64;
    'restart: loop {
        let blocks: Vec<Vec<usize>> = (0..p.block_count)
            .map(|_| random_tuple(&mut rng, n, v))
            .collect();
        engine.reset(blocks);
        let mut sideways = 0u64;
        loop {
            if engine.cost == 0 {
                let blocks: Vec<BaseBlock> = engine
                    .blocks
                    .iter()
                    .map(|t| BaseBlock {
                        graph: p.graph.clone(),
                        action: "a0".to_string(),
                        tuple: t.clone(),
                    })
                    .collect();
                let d = Decomposition {
                    host: p.host.clone(),
                    graph: p.graph.clone(),
                    actions: BTreeMap::from([("a0".to_string(), p.action.clone())]),
                    blocks: blocks.clone(),
                    provenance: format!("search seed {seed}"),
                };
                let rep = verify(&d, catalog).map_err(|e| {
                    SearchError::Catalog(CatalogError::Malformed {
                        name: p.graph.clone(),
                        msg: e.to_string(),
                    })
                })?;
                assert!(rep.passed(), "zero-cost state must verify");
                return Ok(Some(blocks));
            }
            if steps >= budget.max_steps {
                return Ok(None);
            }
            steps += 1;
            let b = rng.random_range(0..p.block_count);
            let i = rng.random_range(0..v);
            let w = rng.random_range(0..n);
            if engine.blocks[b].contains(&w) {
                continue;
            }
            let old = engine.blocks[b][i];
            let before = engine.cost;
            engine.move_coord(b, i, w);
            if engine.cost > before {
                engine.move_coord(b, i, old); // reject
            } else {
                accepted += 1;
                if engine.cost == before {
                    sideways += 1;
                } else {
                    sideways = 0;
                }
                if accepted % 10_000 == 0 {
                    debug_assert_eq!(engine.cost, engine.full_recompute());
                }
            }
            if sideways > plateau_limit {
                restarts += 1;
                if restarts > budget.max_restarts {
                    return Ok(None);
                }
                continue 'restart;
            }
        }
    }
}

/// Runs independent seeds in parallel; the first verified success wins,
/// selected by lowest seed for determinism.
pub fn local_search_any(
    p: &SearchProblem,
    seeds: std::ops::Range<u64>,
    budget: SearchBudget,
    jobs: usize,
    catalog: &Catalog,
) -> Result<Option<(u64, Vec<BaseBlock>)>, SearchError> {
    p.validate(catalog)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let found = std::sync::Mutex::new(None::<(u64, Vec<BaseBlock>)>);
    pool.install(|| {
        seeds.collect::<Vec<u64>>().par_iter().for_each(|&seed| {
            {
                // cancel seeds above an existing winner
                let cur = found.lock().unwrap();
                if cur.as_ref().is_some_and(|(s, _)| *s < seed) {
                    return;
                }
            }
            if let Ok(Some(blocks)) = local_search(p, seed, budget, catalog) {
                let mut cur = found.lock().unwrap();
                if cur.as_ref().map_or(true, |(s, _)| seed < *s) {
                    *cur = Some((seed, blocks));
                }
            }
        });
    });
    Ok(found.into_inner().unwrap())
}

/// Enumerates search problems whose action has one of the shapes used with
/// this corpus (full cyclic shift, optionally with a fixed point, and
/// residue-preserving shifts with a tail window) and whose orbit
/// arithmetic admits an integral block count.
pub fn suggest_problems(host: &HostSpec, graph: &str, catalog: &Catalog) -> Vec<SearchProblem> {
    let Ok(g) = catalog.get(graph) else {
        return Vec::new();
    };
    let n = host.n();
    if n < g.v {
        return Vec::new();
    }
    let e = g.edge_count() as u64;
    let host_edges = host.edge_count();
    let mut out = Vec::new();
    let push = |segments: Vec<Segment>,
                fixed: std::collections::BTreeSet<usize>,
                out: &mut Vec<SearchProblem>| {
        let Ok(action) = ActionSpec::new(n, segments, fixed) else {
            return;
        };
        let orbit = action.permutation_order();
        if orbit == 1 {
            return;
        }
        if host_edges % (orbit * e) != 0 {
            return;
        }
        out.push(SearchProblem {
            host: host.clone(),
            graph: graph.to_string(),
            action,
            block_count: (host_edges / (orbit * e)) as usize,
        });
    };
    let divisors = |m: usize| (1..m).filter(move |s| m % s == 0);
    match host {
        HostSpec::Complete { .. } => {
            for s in divisors(n) {
                push(
                    vec![Segment {
                        lo: 0,
                        hi: n - 1,
                        step: s as u64,
                        modulus: n as u64,
                    }],
                    Default::default(),
                    &mut out,
                );
            }
            if n >= 2 {
                let m = n - 1;
                for s in divisors(m) {
                    push(
                        vec![Segment {
                            lo: 0,
                            hi: m - 1,
                            step: s as u64,
                            modulus: m as u64,
                        }],
                        std::collections::BTreeSet::from([m]),
                        &mut out,
                    );
                }
            }
        }
        HostSpec::Multipartite { .. } => {
            let Some(crate::hosts::PartitionRule::ResidueMod {
                modulus,
                universe,
                tail,
            }) = (match host {
                HostSpec::Multipartite { rule } => Some(rule.clone()),
                _ => None,
            })
            else {
                return out;
            };
            match tail {
                None => {
                    for s in divisors(universe).filter(|s| s % modulus == 0) {
                        push(
                            vec![Segment {
                                lo: 0,
                                hi: universe - 1,
                                step: s as u64,
                                modulus: universe as u64,
                            }],
                            Default::default(),
                            &mut out,
                        );
                    }
                }
                Some((lo, hi)) => {
                    let len = hi - lo + 1;
                    for s1 in divisors(universe).filter(|s| s % modulus == 0) {
                        for s2 in divisors(len).chain(std::iter::once(len)) {
                            push(
                                vec![
                                    Segment {
                                        lo: 0,
                                        hi: universe - 1,
                                        step: s1 as u64,
                                        modulus: universe as u64,
                                    },
                                    Segment {
                                        lo,
                                        hi,
                                        step: s2 as u64,
                                        modulus: len as u64,
                                    },
                                ],
                                Default::default(),
                                &mut out,
                            );
                        }
                    }
                }
            }
        }
    }
    out
}
