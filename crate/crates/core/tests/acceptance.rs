//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --release --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use snark_designs::actions::{ActionSpec, Segment};
use snark_designs::construct::Constructor;
use snark_designs::corpus::load_corpus;
use snark_designs::gdd::{
    gdd_by_deletion, gdd_from_latin_squares, solve_gdd_exact_cover, steiner_triple_system,
    validate_gdd, CoverBudget, CoverOutcome, DeletionMode, GddProvider, GddType,
};
use snark_designs::graphs::{load_catalog, Catalog, CatalogGraph};
use snark_designs::hosts::{admissible_residues, HostSpec};
use snark_designs::search::{local_search, SearchBudget, SearchProblem};
use snark_designs::verify::{verify, verify_corpus};

struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion {
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(detail());
        }
    }

    fn finish(self) {
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {}: {status}", self.name);
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:?}",
            self.name,
            self.failures
        );
    }
}

#[test]
fn criterion_1_corpus_verification() {
    let mut c = Criterion::new("1 (corpus verification)");
    let corpus = load_corpus();
    let catalog = load_catalog();
    c.check(corpus.len() >= 160, || {
        format!("corpus has only {} entries", corpus.len())
    });
    let start = Instant::now();
    let run = verify_corpus(corpus, catalog, 8, false);
    let elapsed = start.elapsed();
    for (id, result) in &run.results {
        let ok = matches!(result, Ok(rep) if rep.passed());
        c.check(ok, || format!("{id} did not pass"));
    }
    c.check(elapsed < Duration::from_secs(60), || {
        format!("corpus verification took {elapsed:?}")
    });

    // spot quantitative checks, computed against the counting formulas
    let spot = |id: &str, copies: u64, c: &mut Criterion| {
        let e = corpus.iter().find(|e| e.id == id).unwrap();
        let rep = verify(&e.decomposition, catalog).unwrap();
        c.check(rep.passed() && rep.copies == copies, || {
            format!("{id}: copies {} != {copies}", rep.copies)
        });
        let g = catalog.get(&e.decomposition.graph).unwrap();
        let expected = e
            .decomposition
            .host
            .expected_copies(g.edge_count() as u64)
            .unwrap();
        c.check(rep.copies == expected, || {
            format!("{id}: copies {} != expected {expected}", rep.copies)
        });
    };
    spot("tietze.k37", 37, &mut c);
    for i in 1..=6 {
        // K_220: 220 * 219 / 60
        spot(&format!("s{i}.k220"), 803, &mut c);
    }
    for i in 1..=20 {
        // K_{22,...,22,55}: 14520 edges / 33
        spot(&format!("l{i}.k22x22x22x22x22x22x55"), 440, &mut c);
    }
    c.finish();
}

#[test]
fn criterion_2_admissibility_table() {
    let mut c = Criterion::new("2 (admissible residues)");
    let rows: &[(u64, u64, &[u64])] = &[
        (10, 15, &[1, 10]),
        (12, 36, &[1, 28]),
        (18, 27, &[1]),
        (20, 60, &[1, 16, 25, 40]),
        (22, 33, &[1, 22]),
        (24, 72, &[1, 64]),
        (26, 39, &[1, 13]),
        (28, 84, &[1, 28, 49, 64]),
        (30, 45, &[1, 10]),
        (34, 51, &[1, 34]),
        (36, 108, &[1, 28]),
        (40, 120, &[1, 16, 25, 40]),
        (50, 75, &[1, 25]),
    ];
    assert_eq!(rows.len(), 13);
    for &(v, modulus, residues) in rows {
        let a = admissible_residues(v).unwrap();
        c.check(a.modulus == modulus && a.residues == residues, || {
            format!(
                "v={v}: got {:?} (mod {}), want {residues:?} (mod {modulus})",
                a.residues, a.modulus
            )
        });
    }
    c.finish();
}

#[test]
fn criterion_3_snark_properties() {
    let mut c = Criterion::new("3 (snark property suite)");
    for g in load_catalog().iter() {
        let start = Instant::now();
        c.check(g.is_cubic(), || format!("{} not cubic", g.name));
        c.check(g.is_connected(), || format!("{} not connected", g.name));
        c.check(g.is_bridgeless(), || format!("{} has a bridge", g.name));
        let colorable = g.has_proper_3_edge_coloring().unwrap();
        c.check(!colorable, || format!("{} is 3-edge-colorable", g.name));
        let elapsed = start.elapsed();
        c.check(elapsed < Duration::from_secs(5), || {
            format!("{} took {elapsed:?}", g.name)
        });
    }
    c.finish();
}

/// Exhaustive backtracking isomorphism oracle in BFS vertex order,
/// independent of the canonical-form path.
fn iso_oracle(g: &CatalogGraph, h: &CatalogGraph) -> bool {
    if g.v != h.v || g.edge_count() != h.edge_count() {
        return false;
    }
    let adj = |g: &CatalogGraph| {
        let mut a = vec![Vec::new(); g.v];
        for &(x, y) in g.edges() {
            a[x].push(y);
            a[y].push(x);
        }
        a
    };
    let ga = adj(g);
    let ha = adj(h);
    // BFS order so every new vertex has a mapped neighbour
    let mut order = vec![0usize];
    let mut seen = vec![false; g.v];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &y in &ga[x] {
            if !seen[y] {
                seen[y] = true;
                order.push(y);
            }
        }
    }
    fn go(
        idx: usize,
        order: &[usize],
        ga: &[Vec<usize>],
        ha: &[Vec<usize>],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if idx == order.len() {
            return true;
        }
        let x = order[idx];
        'cand: for y in 0..ha.len() {
            if used[y] {
                continue;
            }
            for &z in &ga[x] {
                if map[z] != usize::MAX && !ha[y].contains(&map[z]) {
                    continue 'cand;
                }
            }
            map[x] = y;
            used[y] = true;
            if go(idx + 1, order, ga, ha, map, used) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    let mut map = vec![usize::MAX; g.v];
    let mut used = vec![false; g.v];
    go(0, &order, &ga, &ha, &mut map, &mut used)
}

#[test]
fn criterion_4_pairwise_non_isomorphism() {
    let mut c = Criterion::new("4 (pairwise non-isomorphism)");
    let catalog = load_catalog();
    let ls: Vec<&CatalogGraph> = (1..=20)
        .map(|i| catalog.get(&format!("L{i}")).unwrap())
        .collect();
    let ss: Vec<&CatalogGraph> = (1..=6)
        .map(|i| catalog.get(&format!("S{i}")).unwrap())
        .collect();
    let mut pairs = 0;
    for family in [&ls[..], &ss[..]] {
        let forms: Vec<Vec<u8>> = family.iter().map(|g| g.canonical_form()).collect();
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                pairs += 1;
                c.check(forms[i] != forms[j], || {
                    format!(
                        "{} and {} share a canonical form",
                        family[i].name, family[j].name
                    )
                });
                c.check(family[i].isomorphic(family[j]).is_none(), || {
                    format!(
                        "{} and {} report isomorphic",
                        family[i].name, family[j].name
                    )
                });
            }
        }
    }
    c.check(pairs == 190 + 15, || format!("checked {pairs} pairs"));
    // cross-check three pairs with the exhaustive oracle
    for (a, b) in [("L1", "L2"), ("L7", "L13"), ("S3", "S6")] {
        let (ga, gb) = (catalog.get(a).unwrap(), catalog.get(b).unwrap());
        c.check(!iso_oracle(ga, gb), || format!("oracle finds {a} ~ {b}"));
        c.check(iso_oracle(ga, ga), || format!("oracle rejects {a} ~ {a}"));
    }
    c.finish();
}

#[test]
fn criterion_5_constructions() {
    let mut c = Criterion::new("5 (construction end-to-end)");
    let catalog = load_catalog();
    let provider = GddProvider::default();
    for (graph, n, copies) in [
        ("TIETZE", 109usize, 327u64),
        ("B11", 163, 489),
        ("B12", 163, 489),
        ("L1", 100, 150),
        ("L1", 121, 220),
    ] {
        let start = Instant::now();
        let mut constructor = Constructor::new(catalog, load_corpus(), &provider);
        match constructor.construct(graph, n) {
            Ok(d) => {
                let rep = verify(&d, catalog).unwrap();
                c.check(rep.passed(), || format!("{graph} {n}: verification failed"));
                c.check(rep.copies == copies, || {
                    format!("{graph} {n}: copies {} != {copies}", rep.copies)
                });
                c.check(d.host == HostSpec::complete(n), || {
                    format!("{graph} {n}: wrong host")
                });
            }
            Err(e) => c.check(false, || format!("{graph} {n}: {e}")),
        }
        let elapsed = start.elapsed();
        c.check(elapsed < Duration::from_secs(30), || {
            format!("{graph} {n} took {elapsed:?}")
        });
    }
    c.finish();
}

#[test]
fn criterion_6_gdd_suite() {
    let mut c = Criterion::new("6 (GDD suite)");
    for g in 1..=10 {
        let ok = gdd_from_latin_squares(3, g)
            .is_ok_and(|d| validate_gdd(&d).passed() && d.gdd_type() == GddType::uniform(g, 3, 3));
        c.check(ok, || format!("3-GDD of type {g}^3 failed"));
    }
    for g in [3, 4, 5, 7, 8, 9] {
        let ok = gdd_from_latin_squares(4, g)
            .is_ok_and(|d| validate_gdd(&d).passed() && d.gdd_type() == GddType::uniform(g, 4, 4));
        c.check(ok, || format!("4-GDD of type {g}^4 failed"));
    }
    for n in [7, 9, 13, 15, 19, 21] {
        let ok = steiner_triple_system(n)
            .is_ok_and(|s| validate_gdd(&s).passed() && s.blocks.len() == n * (n - 1) / 6);
        c.check(ok, || format!("triple system of order {n} failed"));
    }
    for u in [3usize, 6, 7, 9, 10] {
        let sts = steiner_triple_system(2 * u + 1).unwrap();
        let ok = gdd_by_deletion(&sts, DeletionMode::DeletePoint)
            .is_ok_and(|d| validate_gdd(&d).passed() && d.gdd_type() == GddType::uniform(2, u, 3));
        c.check(ok, || format!("point deletion to 2^{u} failed"));
    }
    for t in [1usize, 2, 3] {
        let m = 2 * t + 1;
        let sts = steiner_triple_system(3 * m).unwrap();
        let ok = gdd_by_deletion(&sts, DeletionMode::DeleteParallelClassAsGroups)
            .is_ok_and(|d| validate_gdd(&d).passed() && d.gdd_type() == GddType::uniform(3, m, 3));
        c.check(ok, || format!("parallel-class deletion to 3^{m} failed"));
    }
    for ty in ["2^3 4^1 k=3", "4^4 k=3"] {
        let ty = GddType::parse(ty).unwrap();
        let start = Instant::now();
        let found = matches!(
            solve_gdd_exact_cover(&ty, CoverBudget::default()),
            CoverOutcome::Found(g) if validate_gdd(&g).passed()
        );
        let elapsed = start.elapsed();
        c.check(found, || format!("exact cover missed {ty}"));
        c.check(elapsed < Duration::from_secs(10), || {
            format!("exact cover for {ty} took {elapsed:?}")
        });
    }
    c.finish();
}

fn tamper_catalog(base: &Catalog, graph: &str, rng: &mut ChaCha8Rng) -> Option<Catalog> {
    // rewire one endpoint of one catalog edge, keeping the graph simple
    let g = base.get(graph).unwrap();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    for _ in 0..50 {
        let ei = rng.random_range(0..edges.len());
        let (a, b) = edges[ei];
        let keep = if rng.random_range(0..2) == 0 { a } else { b };
        let new = rng.random_range(0..g.v);
        let cand = (keep.min(new), keep.max(new));
        if new == keep || cand == (a.min(b), a.max(b)) || edges.contains(&cand) {
            continue;
        }
        edges[ei] = cand;
        let texts: Vec<String> = std::iter::once({
            let mut lines = vec![format!("graph {} v={}", g.name, g.v)];
            lines.extend(
                edges
                    .iter()
                    .map(|&(x, y)| format!("edge {} {}", x + 1, y + 1)),
            );
            lines.join("\n")
        })
        .collect();
        // a rewire may break 3-regularity, which the catalog rejects; in
        // that case verification cannot even be configured, so try again
        match Catalog::from_texts(texts.iter().map(|s| s.as_str())) {
            Ok(c) => return Some(c),
            Err(_) => {
                edges[ei] = (a, b);
                continue;
            }
        }
    }
    None
}

#[test]
fn criterion_7_search_and_tamper_detection() {
    let mut c = Criterion::new("7 (search acceptance)");
    let catalog = load_catalog();

    // (K_28, TIETZE, +4 mod 28, 3 blocks): some seed below 50 reaches
    // cost 0 within 2e6 steps and the result verifies (inside
    // local_search)
    let problem = SearchProblem {
        host: HostSpec::complete(28),
        graph: "TIETZE".into(),
        action: ActionSpec::new(
            28,
            vec![Segment {
                lo: 0,
                hi: 27,
                step: 4,
                modulus: 28,
            }],
            Default::default(),
        )
        .unwrap(),
        block_count: 3,
    };
    let budget = SearchBudget {
        max_steps: 2_000_000,
        max_restarts: u64::MAX,
    };
    let hit = (0..50u64).find_map(|seed| local_search(&problem, seed, budget, catalog).unwrap());
    c.check(hit.is_some(), || "no seed in 0..50 found K_28".into());
    if let Some(blocks) = &hit {
        let d = snark_designs::verify::Decomposition {
            host: problem.host.clone(),
            graph: problem.graph.clone(),
            actions: BTreeMap::from([("a0".into(), problem.action.clone())]),
            blocks: blocks.clone(),
            provenance: "acceptance".into(),
        };
        c.check(verify(&d, catalog).unwrap().passed(), || {
            "search result fails verification".into()
        });
    }

    // 1000 random single-symbol tampers across the corpus all fail:
    // vertex changes, edge-list rewires, action step changes
    let corpus = load_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    let mut survived = Vec::new();
    while done < 1000 {
        let e = &corpus[rng.random_range(0..corpus.len())];
        let mut d = e.decomposition.clone();
        let kind = rng.random_range(0..3u32);
        let label;
        match kind {
            0 => {
                // vertex change
                let b = rng.random_range(0..d.blocks.len());
                let i = rng.random_range(0..d.blocks[b].tuple.len());
                let n = d.host.n();
                let old = d.blocks[b].tuple[i];
                let new = rng.random_range(0..n);
                if new == old {
                    continue;
                }
                d.blocks[b].tuple[i] = new;
                label = format!("{} vertex {old}->{new}", e.id);
                let rep = verify(&d, catalog).unwrap();
                if rep.passed() {
                    survived.push(label);
                }
            }
            1 => {
                // edge-list change in the catalog graph
                let Some(tampered) = tamper_catalog(catalog, &d.graph, &mut rng) else {
                    continue;
                };
                label = format!("{} edge rewire", e.id);
                let rep = verify(&d, &tampered).unwrap();
                if rep.passed() {
                    survived.push(label);
                }
            }
            _ => {
                // action step change that alters the orbit structure
                let ids: Vec<String> = d.actions.keys().cloned().collect();
                let id = &ids[rng.random_range(0..ids.len())];
                let a = &d.actions[id];
                if a.segments().is_empty() {
                    continue;
                }
                let si = rng.random_range(0..a.segments().len());
                let seg = &a.segments()[si];
                let m = seg.modulus;
                let candidates: Vec<u64> = (1..m)
                    .filter(|&s| s != seg.step && gcd(s, m) != gcd(seg.step, m))
                    .collect();
                if candidates.is_empty() {
                    continue;
                }
                let new_step = candidates[rng.random_range(0..candidates.len())];
                let mut segments = a.segments().to_vec();
                segments[si].step = new_step;
                let fixed = a.fixed().clone();
                let Ok(tampered) = ActionSpec::new(d.host.n(), segments, fixed) else {
                    continue;
                };
                label = format!("{} step {}->{new_step}", e.id, seg.step);
                d.actions.insert(id.clone(), tampered);
                let rep = verify(&d, catalog).unwrap();
                if rep.passed() {
                    survived.push(label);
                }
            }
        }
        done += 1;
    }
    c.check(survived.is_empty(), || {
        format!(
            "{} of 1000 tampers passed: {:?}",
            survived.len(),
            &survived[..survived.len().min(5)]
        )
    });
    c.finish();
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn criterion_8_determinism() {
    let mut c = Criterion::new("8 (determinism)");
    let catalog = load_catalog();
    let corpus = load_corpus();

    // verify reports byte-identical across runs
    let render_run = || {
        let run = verify_corpus(corpus, catalog, 8, false);
        let mut out = String::new();
        for (id, r) in &run.results {
            let rep = r.as_ref().unwrap();
            out.push_str(&format!(
                "{id} {:?} {} {:?}\n",
                rep.status, rep.copies, rep.violations
            ));
        }
        out
    };
    c.check(render_run() == render_run(), || {
        "verify reports differ between runs".into()
    });

    // construct outputs identical
    let build = || {
        let provider = GddProvider::default();
        let mut constructor = Constructor::new(catalog, corpus, &provider);
        constructor.construct("TIETZE", 109).unwrap()
    };
    c.check(build() == build(), || "construct outputs differ".into());

    // fixed-seed search trajectories identical
    let problem = SearchProblem {
        host: HostSpec::complete(37),
        graph: "TIETZE".into(),
        action: ActionSpec::new(
            37,
            vec![Segment {
                lo: 0,
                hi: 36,
                step: 1,
                modulus: 37,
            }],
            Default::default(),
        )
        .unwrap(),
        block_count: 1,
    };
    let budget = SearchBudget {
        max_steps: 100_000,
        max_restarts: u64::MAX,
    };
    let a = local_search(&problem, 5, budget, catalog).unwrap();
    let b = local_search(&problem, 5, budget, catalog).unwrap();
    c.check(a == b, || "fixed-seed search results differ".into());
    c.finish();
}
