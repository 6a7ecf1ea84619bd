//! Exact-cover backtracking for sporadic GDD types: cover every cross-group
//! pair exactly once by k-subsets meeting each group at most once.
//!
//! Algorithm X with explicit undo stacks: candidate liveness and per-pair
//! live counts are maintained incrementally, and the uncovered pair with
//! the fewest live candidates is branched on first.

use super::{Gdd, GddType};

#[derive(Debug, Clone, Copy)]
pub struct CoverBudget {
    /// Backtracking node limit (block placements tried).
    pub max_nodes: u64,
}

impl Default for CoverBudget {
    fn default() -> Self {
        CoverBudget { max_nodes: 300_000 }
    }
}

#[derive(Debug)]
pub enum CoverOutcome {
    Found(Gdd),
    /// Ruled out by counting or by exhausting the search space.
    NoSolution,
    /// Budget ran out before the search finished.
    BudgetExceeded,
}

struct Solver {
    /// pairs covered by each candidate (pair ids)
    cand_pairs: Vec<Vec<u32>>,
    /// candidates through each pair
    by_pair: Vec<Vec<u32>>,
    cross_pairs: Vec<u32>,
    covered: Vec<bool>,
    alive: Vec<bool>,
    live_count: Vec<u32>,
    chosen: Vec<u32>,
    nodes: u64,
    max_nodes: u64,
}

enum Outcome {
    Solved,
    Exhausted,
    OutOfBudget,
}

impl Solver {
    fn kill(&mut self, ci: u32, dead: &mut Vec<u32>) {
        self.alive[ci as usize] = false;
        dead.push(ci);
        let np = self.cand_pairs[ci as usize].len();
        for t in 0..np {
            let q = self.cand_pairs[ci as usize][t] as usize;
            self.live_count[q] -= 1;
        }
    }

    fn place(&mut self, ci: u32) -> Vec<u32> {
        let mut dead = Vec::new();
        let np = self.cand_pairs[ci as usize].len();
        for t in 0..np {
            let q = self.cand_pairs[ci as usize][t] as usize;
            self.covered[q] = true;
        }
        for t in 0..np {
            let q = self.cand_pairs[ci as usize][t] as usize;
            for s in 0..self.by_pair[q].len() {
                let di = self.by_pair[q][s];
                if self.alive[di as usize] {
                    self.kill(di, &mut dead);
                }
            }
        }
        self.chosen.push(ci);
        dead
    }

    fn unplace(&mut self, ci: u32, dead: Vec<u32>) {
        self.chosen.pop();
        for &di in dead.iter().rev() {
            self.alive[di as usize] = true;
            let np = self.cand_pairs[di as usize].len();
            for t in 0..np {
                let q = self.cand_pairs[di as usize][t] as usize;
                self.live_count[q] += 1;
            }
        }
        let np = self.cand_pairs[ci as usize].len();
        for t in 0..np {
            let q = self.cand_pairs[ci as usize][t] as usize;
            self.covered[q] = false;
        }
    }

    fn search(&mut self) -> Outcome {
        // uncovered pair with fewest live candidates
        let mut best: Option<(u32, u32)> = None; // (count, pair)
        for &q in &self.cross_pairs {
            if self.covered[q as usize] {
                continue;
            }
            let c = self.live_count[q as usize];
            if c == 0 {
                return Outcome::Exhausted;
            }
            if best.map_or(true, |(bc, _)| c < bc) {
                best = Some((c, q));
                if c == 1 {
                    break;
                }
            }
        }
        let Some((_, q)) = best else {
            return Outcome::Solved;
        };
        for ci in self.by_pair[q as usize].clone() {
            if !self.alive[ci as usize] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Outcome::OutOfBudget;
            }
            let dead = self.place(ci);
            match self.search() {
                Outcome::Solved => return Outcome::Solved,
                Outcome::Exhausted => self.unplace(ci, dead),
                Outcome::OutOfBudget => return Outcome::OutOfBudget,
            }
        }
        Outcome::Exhausted
    }
}

/// Searches for a GDD of the given type. Arithmetically impossible types
/// are rejected before any search runs.
pub fn solve_gdd_exact_cover(ty: &GddType, budget: CoverBudget) -> CoverOutcome {
    let k = ty.k;
    let n = ty.points();
    let sizes = ty.group_sizes();
    let group_of: Vec<usize> = {
        let mut g = Vec::with_capacity(n);
        for (gi, size) in sizes.iter().enumerate() {
            g.extend(std::iter::repeat(gi).take(*size));
        }
        g
    };
    let ngroups = sizes.len();

    // counting pre-checks: cross pairs divisible by C(k,2); per-point
    // cross-degree divisible by k-1
    let cross_count: usize =
        n * (n - 1) / 2 - sizes.iter().map(|&s| s * (s - 1) / 2).sum::<usize>();
    if k < 2 || n < k || cross_count % (k * (k - 1) / 2) != 0 {
        return CoverOutcome::NoSolution;
    }
    for &s in &sizes {
        if (n - s) % (k - 1) != 0 {
            return CoverOutcome::NoSolution;
        }
    }

    let pair_idx = |x: usize, y: usize| {
        let (a, b) = (x.min(y), x.max(y));
        (a * n + b) as u32
    };

    // candidate blocks: k-subsets meeting k distinct groups, lex order
    let mut cand_blocks: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn gen(
        start: usize,
        n: usize,
        k: usize,
        group_of: &[usize],
        used: &mut [bool],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        if n - start < k - cur.len() {
            return;
        }
        for x in start..n {
            if used[group_of[x]] {
                continue;
            }
            used[group_of[x]] = true;
            cur.push(x);
            gen(x + 1, n, k, group_of, used, cur, out);
            cur.pop();
            used[group_of[x]] = false;
        }
    }
    gen(
        0,
        n,
        k,
        &group_of,
        &mut vec![false; ngroups],
        &mut cur,
        &mut cand_blocks,
    );

    let cand_pairs: Vec<Vec<u32>> = cand_blocks
        .iter()
        .map(|c| {
            let mut ps = Vec::with_capacity(k * (k - 1) / 2);
            for i in 0..k {
                for j in i + 1..k {
                    ps.push(pair_idx(c[i], c[j]));
                }
            }
            ps
        })
        .collect();
    let mut by_pair: Vec<Vec<u32>> = vec![Vec::new(); n * n];
    let mut live_count = vec![0u32; n * n];
    for (ci, ps) in cand_pairs.iter().enumerate() {
        for &q in ps {
            by_pair[q as usize].push(ci as u32);
            live_count[q as usize] += 1;
        }
    }
    let cross_pairs: Vec<u32> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .filter(|&(x, y)| group_of[x] != group_of[y])
        .map(|(x, y)| pair_idx(x, y))
        .collect();

    let mut solver = Solver {
        cand_pairs,
        by_pair,
        cross_pairs,
        covered: vec![false; n * n],
        alive: vec![true; cand_blocks.len()],
        live_count,
        chosen: Vec::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    match solver.search() {
        Outcome::Solved => {
            let groups: Vec<Vec<usize>> = {
                let mut gs: Vec<Vec<usize>> = vec![Vec::new(); ngroups];
                for (x, &g) in group_of.iter().enumerate() {
                    gs[g].push(x);
                }
                gs
            };
            let blocks = solver
                .chosen
                .iter()
                .map(|&ci| cand_blocks[ci as usize].clone())
                .collect();
            let mut gdd = Gdd { k, groups, blocks };
            gdd.canonicalize();
            CoverOutcome::Found(gdd)
        }
        Outcome::Exhausted => CoverOutcome::NoSolution,
        Outcome::OutOfBudget => CoverOutcome::BudgetExceeded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gdd::validate_gdd;

    #[test]
    fn finds_2_3_4_1() {
        let ty = GddType::parse("2^3 4^1 k=3").unwrap();
        match solve_gdd_exact_cover(&ty, CoverBudget::default()) {
            CoverOutcome::Found(g) => {
                assert!(validate_gdd(&g).passed());
                assert_eq!(g.gdd_type(), ty);
            }
            other => panic!("expected solution, got {other:?}"),
        }
    }

    #[test]
    fn finds_4_4() {
        let ty = GddType::parse("4^4 k=3").unwrap();
        match solve_gdd_exact_cover(&ty, CoverBudget::default()) {
            CoverOutcome::Found(g) => {
                assert!(validate_gdd(&g).passed());
                assert_eq!(g.blocks.len(), 96 / 3);
            }
            other => panic!("expected solution, got {other:?}"),
        }
    }

    #[test]
    fn counting_obstruction_rejected_without_search() {
        let ty = GddType::parse("2^2 k=3").unwrap();
        assert!(matches!(
            solve_gdd_exact_cover(&ty, CoverBudget { max_nodes: 0 }),
            CoverOutcome::NoSolution
        ));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let ty = GddType::parse("3^8 k=4").unwrap();
        match solve_gdd_exact_cover(&ty, CoverBudget { max_nodes: 10 }) {
            CoverOutcome::BudgetExceeded | CoverOutcome::Found(_) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
