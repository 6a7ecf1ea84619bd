//! The catalog of cubic graphs and structural checks on them.
//!
//! Catalog graphs are stored in a line-oriented text format (`graph NAME
//! v=<n>` followed by one `edge i j` line per edge, 1-based) and are
//! validated on load: simple, 3-regular, connected. Vertices are 0-based
//! everywhere inside the library; the parser is the 1-based boundary.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{name}: {msg}")]
    Malformed { name: String, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown graph {0:?}")]
    UnknownGraph(String),
    #[error("{0}: operation requires a cubic graph")]
    NotCubic(String),
}

/// Design spectrum metadata: admissible orders are `residues` mod `modulus`,
/// minus the known sporadic exceptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub excluded: Vec<u64>,
}

/// Known spectrum rows by vertex count. Exceptions (such as no order-16
/// design at v = 20) come from non-existence results, not from counting,
/// so they are recorded here as data.
const SPECTRUM_ROWS: &[(usize, u64, &[u64], &[u64])] = &[
    (12, 36, &[1, 28], &[]),
    (18, 27, &[1], &[]),
    (20, 60, &[1, 16, 25, 40], &[16]),
    (22, 33, &[1, 22], &[]),
    (24, 72, &[1, 64], &[]),
    (26, 39, &[1, 13], &[13]),
    (28, 84, &[1, 28, 49, 64], &[]),
    (30, 45, &[1, 10], &[10]),
    (34, 51, &[1, 34], &[]),
    (36, 108, &[1, 28], &[28]),
    (40, 120, &[1, 16, 25, 40], &[16, 25]),
    (50, 75, &[1, 25], &[25]),
];

fn spectrum_for(v: usize) -> Option<Spectrum> {
    SPECTRUM_ROWS.iter().find(|r| r.0 == v).map(|r| Spectrum {
        modulus: r.1,
        residues: r.2.to_vec(),
        excluded: r.3.to_vec(),
    })
}

/// A named graph given by its vertex count and edge list (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogGraph {
    pub name: String,
    pub v: usize,
    edges: Vec<(usize, usize)>,
    pub spectrum: Option<Spectrum>,
}

impl CatalogGraph {
    /// Builds a graph from 0-based edges, checking simplicity and range.
    pub fn new(
        name: impl Into<String>,
        v: usize,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self, CatalogError> {
        let name = name.into();
        let fail = |msg: String| CatalogError::Malformed {
            name: name.clone(),
            msg,
        };
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.0 == e.1 {
                return Err(fail(format!("loop at vertex {}", e.0)));
            }
            if e.1 >= v {
                return Err(fail(format!("edge ({}, {}) out of range", e.0, e.1)));
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(fail("duplicate edge".into()));
        }
        Ok(CatalogGraph {
            spectrum: spectrum_for(v),
            name,
            v,
            edges,
        })
    }

    /// Parses the catalog file format: `graph NAME v=<n>` then `edge i j`
    /// lines with 1-based endpoints; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let mut name = None;
        let mut v = 0usize;
        let mut edges = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: String| CatalogError::Parse { line: ln + 1, msg };
            match toks[0] {
                "graph" => {
                    if toks.len() != 3 || !toks[2].starts_with("v=") {
                        return Err(err("expected `graph NAME v=<n>`".into()));
                    }
                    name = Some(toks[1].to_string());
                    v = toks[2][2..]
                        .parse()
                        .map_err(|_| err(format!("bad vertex count {:?}", toks[2])))?;
                }
                "edge" => {
                    if toks.len() != 3 {
                        return Err(err("expected `edge i j`".into()));
                    }
                    let a: usize = toks[1].parse().map_err(|_| err("bad endpoint".into()))?;
                    let b: usize = toks[2].parse().map_err(|_| err("bad endpoint".into()))?;
                    if a < 1 || b < 1 {
                        return Err(err("endpoints are 1-based".into()));
                    }
                    edges.push((a - 1, b - 1));
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        let name = name.ok_or(CatalogError::Parse {
            line: 0,
            msg: "missing `graph` header".into(),
        })?;
        CatalogGraph::new(name, v, edges)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.v];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.v];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn is_cubic(&self) -> bool {
        self.degree_sequence().iter().all(|&d| d == 3)
    }

    pub fn is_connected(&self) -> bool {
        if self.v == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.v];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.v
    }

    /// Length of the shortest cycle: the minimum over all edges of one plus
    /// the distance between its endpoints with that edge removed. `None`
    /// for acyclic graphs.
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency();
        let mut best: Option<usize> = None;
        for &(a, b) in &self.edges {
            let mut dist = vec![usize::MAX; self.v];
            dist[a] = 0;
            let mut queue = std::collections::VecDeque::from([a]);
            while let Some(x) = queue.pop_front() {
                if x == b {
                    break;
                }
                for &y in &adj[x] {
                    if x == a && y == b || x == b && y == a {
                        continue;
                    }
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            if dist[b] != usize::MAX {
                let c = dist[b] + 1;
                if best.map_or(true, |g| c < g) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// Cut-edge detection by DFS low-link.
    pub fn is_bridgeless(&self) -> bool {
        let adj: Vec<Vec<(usize, usize)>> = {
            let mut a = vec![Vec::new(); self.v];
            for (ei, &(x, y)) in self.edges.iter().enumerate() {
                a[x].push((y, ei));
                a[y].push((x, ei));
            }
            a
        };
        let mut order = vec![usize::MAX; self.v];
        let mut low = vec![0usize; self.v];
        let mut next = 0usize;
        // iterative DFS: (vertex, parent edge, neighbour cursor)
        for root in 0..self.v {
            if order[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![(root, usize::MAX, 0usize)];
            order[root] = next;
            low[root] = next;
            next += 1;
            while let Some(&mut (x, pe, ref mut cur)) = stack.last_mut() {
                if *cur < adj[x].len() {
                    let (y, ei) = adj[x][*cur];
                    *cur += 1;
                    if ei == pe {
                        continue;
                    }
                    if order[y] == usize::MAX {
                        order[y] = next;
                        low[y] = next;
                        next += 1;
                        stack.push((y, ei, 0));
                    } else {
                        low[x] = low[x].min(order[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p] = low[p].min(low[x]);
                        if low[x] > order[p] {
                            return false; // bridge
                        }
                    }
                }
            }
        }
        true
    }

    /// Exhaustive backtracking over proper 3-edge-colorings with forced-move
    /// propagation. Returns whether any proper coloring exists; errors on
    /// non-cubic input.
    pub fn has_proper_3_edge_coloring(&self) -> Result<bool, CatalogError> {
        if !self.is_cubic() {
            return Err(CatalogError::NotCubic(self.name.clone()));
        }
        let e = self.edges.len();
        let mut incident = vec![Vec::new(); self.v];
        for (ei, &(a, b)) in self.edges.iter().enumerate() {
            incident[a].push(ei);
            incident[b].push(ei);
        }
        // adjacency between edges sharing a vertex
        let mut adj_edges = vec![Vec::new(); e];
        for inc in &incident {
            for i in 0..inc.len() {
                for j in 0..inc.len() {
                    if i != j {
                        adj_edges[inc[i]].push(inc[j]);
                    }
                }
            }
        }
        let mut color = vec![u8::MAX; e];
        Ok(color_edges(&adj_edges, &mut color))
    }

    /// Canonical byte string: identical for isomorphic graphs, distinct for
    /// non-isomorphic ones within the tested corpus. Deterministic.
    pub fn canonical_form(&self) -> Vec<u8> {
        self.canonical_labeling().0
    }

    /// Canonical form together with the labeling (vertex -> canonical
    /// position) that realizes it.
    fn canonical_labeling(&self) -> (Vec<u8>, Vec<usize>) {
        let adj = self.adjacency();
        let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
        let colors = refine(&adj, vec![0; self.v]);
        canon_search(&adj, self.v, &self.edges, colors, &mut best);
        best.expect("canonical search produced no labeling")
    }

    /// Isomorphism witness through canonical labelings, or `None` when the
    /// canonical forms differ. A returned map sends vertices of `self` to
    /// vertices of `other` and maps edges onto edges exactly.
    pub fn isomorphic(&self, other: &CatalogGraph) -> Option<Vec<usize>> {
        if self.v != other.v || self.edges.len() != other.edges.len() {
            return None;
        }
        let (fa, la) = self.canonical_labeling();
        let (fb, lb) = other.canonical_labeling();
        if fa != fb {
            return None;
        }
        // position -> vertex of other
        let mut inv = vec![0usize; other.v];
        for (vtx, &pos) in lb.iter().enumerate() {
            inv[pos] = vtx;
        }
        let map: Vec<usize> = (0..self.v).map(|x| inv[la[x]]).collect();
        for &(a, b) in &self.edges {
            let (p, q) = (map[a].min(map[b]), map[a].max(map[b]));
            other.edges.binary_search(&(p, q)).ok()?;
        }
        Some(map)
    }

    /// Applies a vertex permutation (`perm[old] = new`), giving an
    /// isomorphic relabeled copy.
    pub fn relabel(&self, perm: &[usize]) -> CatalogGraph {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        CatalogGraph::new(self.name.clone(), self.v, edges).expect("relabeling a valid graph")
    }
}

fn color_edges(adj_edges: &[Vec<usize>], color: &mut [u8]) -> bool {
    // pick the uncolored edge with fewest available colors, then most
    // colored neighbours; colors tried in fixed order 0, 1, 2
    let mut pick = None;
    let mut pick_key = (4u32, 0i32);
    for (ei, &c) in color.iter().enumerate() {
        if c != u8::MAX {
            continue;
        }
        let mut used = 0u8;
        let mut colored = 0i32;
        for &ej in &adj_edges[ei] {
            if color[ej] != u8::MAX {
                used |= 1 << color[ej];
                colored += 1;
            }
        }
        let avail = (0..3).filter(|c| used & (1 << c) == 0).count() as u32;
        if avail == 0 {
            return false;
        }
        let key = (avail, -colored);
        if key < pick_key {
            pick_key = key;
            pick = Some((ei, used));
        }
    }
    let Some((ei, used)) = pick else {
        return true; // everything colored
    };
    for c in 0u8..3 {
        if used & (1 << c) != 0 {
            continue;
        }
        color[ei] = c;
        if color_edges(adj_edges, color) {
            return true;
        }
        color[ei] = u8::MAX;
    }
    false
}

/// Iterative neighbourhood refinement: colors stabilize when no class splits.
fn refine(adj: &[Vec<usize>], mut colors: Vec<u32>) -> Vec<u32> {
    let n = adj.len();
    loop {
        let mut sigs: Vec<(u32, Vec<u32>, usize)> = (0..n)
            .map(|x| {
                let mut nc: Vec<u32> = adj[x].iter().map(|&y| colors[y]).collect();
                nc.sort_unstable();
                (colors[x], nc, x)
            })
            .collect();
        sigs.sort();
        let mut new_colors = vec![0u32; n];
        let mut c = 0u32;
        for i in 0..n {
            if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                c += 1;
            }
            new_colors[sigs[i].2] = c;
        }
        if new_colors == colors {
            return colors;
        }
        colors = new_colors;
    }
}

fn canon_search(
    adj: &[Vec<usize>],
    n: usize,
    edges: &[(usize, usize)],
    colors: Vec<u32>,
    best: &mut Option<(Vec<u8>, Vec<usize>)>,
) {
    // first non-singleton class by color value
    let mut class_of: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (x, &c) in colors.iter().enumerate() {
        class_of.entry(c).or_default().push(x);
    }
    let target = class_of.values().find(|m| m.len() > 1).cloned();
    match target {
        None => {
            // discrete: colors give the labeling directly
            let mut labeling = vec![0usize; n];
            for (x, &c) in colors.iter().enumerate() {
                labeling[x] = c as usize;
            }
            let bytes = adjacency_bytes(n, edges, &labeling);
            if best.as_ref().map_or(true, |(b, _)| bytes < *b) {
                *best = Some((bytes, labeling));
            }
        }
        Some(members) => {
            let fresh = colors.iter().max().unwrap() + 1;
            for &x in &members {
                let mut c2 = colors.clone();
                c2[x] = fresh;
                let refined = refine(adj, c2);
                canon_search(adj, n, edges, refined, best);
            }
        }
    }
}

fn adjacency_bytes(n: usize, edges: &[(usize, usize)], labeling: &[usize]) -> Vec<u8> {
    let mut bits = vec![0u8; (n * n + 7) / 8];
    for &(a, b) in edges {
        let (p, q) = (labeling[a], labeling[b]);
        for idx in [p * n + q, q * n + p] {
            bits[idx / 8] |= 1 << (idx % 8);
        }
    }
    bits
}

/// The embedded catalog, loaded and validated once.
#[derive(Debug)]
pub struct Catalog {
    graphs: BTreeMap<String, CatalogGraph>,
}

const CATALOG_FILES: &[&str] = &[
    include_str!("../data/catalog/b11.graph"),
    include_str!("../data/catalog/b12.graph"),
    include_str!("../data/catalog/b21.graph"),
    include_str!("../data/catalog/b22.graph"),
    include_str!("../data/catalog/b31.graph"),
    include_str!("../data/catalog/b32.graph"),
    include_str!("../data/catalog/cs1.graph"),
    include_str!("../data/catalog/cs2.graph"),
    include_str!("../data/catalog/ds.graph"),
    include_str!("../data/catalog/fj7.graph"),
    include_str!("../data/catalog/gs3.graph"),
    include_str!("../data/catalog/gs5.graph"),
    include_str!("../data/catalog/l1.graph"),
    include_str!("../data/catalog/l10.graph"),
    include_str!("../data/catalog/l11.graph"),
    include_str!("../data/catalog/l12.graph"),
    include_str!("../data/catalog/l13.graph"),
    include_str!("../data/catalog/l14.graph"),
    include_str!("../data/catalog/l15.graph"),
    include_str!("../data/catalog/l16.graph"),
    include_str!("../data/catalog/l17.graph"),
    include_str!("../data/catalog/l18.graph"),
    include_str!("../data/catalog/l19.graph"),
    include_str!("../data/catalog/l2.graph"),
    include_str!("../data/catalog/l20.graph"),
    include_str!("../data/catalog/l3.graph"),
    include_str!("../data/catalog/l4.graph"),
    include_str!("../data/catalog/l5.graph"),
    include_str!("../data/catalog/l6.graph"),
    include_str!("../data/catalog/l7.graph"),
    include_str!("../data/catalog/l8.graph"),
    include_str!("../data/catalog/l9.graph"),
    include_str!("../data/catalog/s1.graph"),
    include_str!("../data/catalog/s2.graph"),
    include_str!("../data/catalog/s3.graph"),
    include_str!("../data/catalog/s4.graph"),
    include_str!("../data/catalog/s5.graph"),
    include_str!("../data/catalog/s6.graph"),
    include_str!("../data/catalog/sze.graph"),
    include_str!("../data/catalog/tietze.graph"),
    include_str!("../data/catalog/wat.graph"),
    include_str!("../data/catalog/z.graph"),
];

impl Catalog {
    /// Parses and validates a set of catalog files. Every entry must be
    /// simple, 3-regular and connected (hence e = 3v/2).
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Self, CatalogError> {
        let mut graphs = BTreeMap::new();
        for text in texts {
            let g = CatalogGraph::parse(text)?;
            let fail = |msg: &str| CatalogError::Malformed {
                name: g.name.clone(),
                msg: msg.into(),
            };
            if !g.is_cubic() {
                return Err(fail("not 3-regular"));
            }
            if !g.is_connected() {
                return Err(fail("not connected"));
            }
            if g.edge_count() != 3 * g.v / 2 {
                return Err(fail("edge count is not 3v/2"));
            }
            if graphs.insert(g.name.clone(), g).is_some() {
                return Err(CatalogError::Parse {
                    line: 0,
                    msg: "duplicate graph name".into(),
                });
            }
        }
        Ok(Catalog { graphs })
    }

    pub fn get(&self, name: &str) -> Result<&CatalogGraph, CatalogError> {
        self.graphs
            .get(name)
            .ok_or_else(|| CatalogError::UnknownGraph(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.graphs.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &CatalogGraph> {
        self.graphs.values()
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

/// The embedded catalog of all graphs shipped with the crate.
pub fn load_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        Catalog::from_texts(CATALOG_FILES.iter().copied()).expect("embedded catalog is valid")
    })
}
