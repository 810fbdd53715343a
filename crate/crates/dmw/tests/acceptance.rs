//! One line per acceptance criterion; the test fails if any line fails.

use std::time::{Duration, Instant};

use dmw::coloring::{dichromatic_number, n_dichromatic, ListDemand};
use dmw::domset::min_weight_domset;
use dmw::fvs::min_weight_fvs;
use dmw::generate::{generate, GeneratorKind, GeneratorSpec};
use dmw::hampath::{ham, hamiltonian_cycle, path_partition_witness};
use dmw::identities::{check_identities, IdentityReport};
use dmw::ilp::{solve, IlpInstance, IlpResult, Relation};
use dmw::modular::{decomposition_tree, dmw, is_directed_cograph};
use dmw::oracles::*;
use dmw::paths::{reduced_capacities, solve_vddp, solve_vddp_cs};
use dmw::verify::*;
use dmw::weighted::WeightedDigraph;
use dmw::widths::{cycle_rank, directed_pathwidth};
use dmw::{Digraph, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_GRAPHS: u64 = 500;
const ORACLE_TIME: Duration = Duration::from_secs(300);
const IDENTITY_GRAPHS: u64 = 200;
const IDENTITY_MAX_N: usize = 20;
const COGRAPHS: u64 = 100;
const COGRAPH_MAX_N: usize = 30;
const MONOTONE_PAIRS: u64 = 500;
const SCALE_N: usize = 200;
const SCALE_OMEGA: usize = 4;
const SCALE_TIME: Duration = Duration::from_secs(10);
const PATHS_TIME: Duration = Duration::from_secs(30);
const MEMORY_LIMIT_KB: u64 = 1 << 20;
const CONTROL_N: usize = 40;
const CONTROL_TIME: Duration = Duration::from_secs(300);
const ILP_INSTANCES: u64 = 1000;

struct Line {
    ok: bool,
}

impl Line {
    fn report(id: u32, name: &str, ok: bool, detail: String) -> Line {
        println!("[{}] criterion {id} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        Line { ok }
    }
}

/// Mixed corpus for the oracle comparisons: n in 1..=8, uniform and bounded width.
fn small_corpus() -> Vec<Digraph> {
    (0..ORACLE_GRAPHS)
        .map(|seed| {
            let n = 1 + (seed % 8) as usize;
            let kind = if seed % 2 == 0 { GeneratorKind::Uniform } else { GeneratorKind::BoundedDmw };
            generate(&GeneratorSpec { n, omega: 2 + (seed % 4) as usize, seed: 1000 + seed, kind }).unwrap()
        })
        .collect()
}

/// Runs every solver on one small digraph and compares with the oracles and
/// the witness checkers. Returns (oracle mismatches, witness failures).
fn check_small(d: &Digraph, rng: &mut ChaCha8Rng, budget: &OracleBudget) -> (Vec<String>, Vec<String>) {
    let n = d.n();
    let mut wrong = Vec::new();
    let mut bad = Vec::new();
    let mut same = |what: &str, got: i64, want: i64| {
        if got != want {
            wrong.push(format!("{what}: {got} != {want} on\n{d}"));
        }
    };
    let mut valid = |what: &str, r: dmw::Result<()>| {
        if let Err(e) = r {
            bad.push(format!("{what}: {e} on\n{d}"));
        }
    };

    same("dmw", dmw(d) as i64, brute_dmw(d, budget).unwrap() as i64);
    valid("tree", check_decomposition_tree(d, &decomposition_tree(d)));

    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let wd = WeightedDigraph::new(d.clone(), w.clone(), w.iter().sum()).unwrap();
    let f = min_weight_fvs(&wd).unwrap();
    same("fvs", f.weight, brute_fvs(&wd, budget).unwrap());
    valid("fvs", check_fvs(&wd, &f));
    let g = min_weight_domset(&wd).unwrap();
    same("domset", g.weight, brute_domset(&wd, budget).unwrap());
    valid("domset", check_domset(&wd, &g));

    let mut demand = vec![1i64; n];
    for _ in 0..rng.gen_range(0..=(budget.max_total_weight as usize - n)) {
        demand[rng.gen_range(0..n)] += 1;
    }
    let dem = ListDemand::new(demand.clone(), demand.iter().sum()).unwrap();
    let col = n_dichromatic(d, &dem).unwrap();
    same("dichromatic", col.k, brute_dichromatic(d, &demand, budget).unwrap());
    valid("colouring", check_colouring(d, &dem, &col));

    let h = ham(d).unwrap();
    same("ham", h as i64, brute_ham(d, budget).unwrap() as i64);
    let part = path_partition_witness(d).unwrap();
    valid("path partition", check_path_partition(d, &part));
    same("path partition size", part.paths.len() as i64, h as i64);
    if n >= 2 {
        let cycle = hamiltonian_cycle(d).unwrap();
        same("hamiltonian cycle", cycle.is_some() as i64, brute_hamiltonian_cycle(d, budget).unwrap() as i64);
        if let Some(c) = cycle {
            valid("hamiltonian cycle", check_hamiltonian_cycle(d, &c));
        }
    }

    let cap: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let r = rng.gen_range(0..=budget.max_r);
    let pairs: Vec<(usize, usize)> = (0..r).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    let table = solve_vddp_cs(d, &cap, &pairs, cap.iter().sum()).unwrap();
    for a in 0..1u64 << r {
        let wa = reduced_capacities(&cap, &pairs, a);
        let sub: Vec<(usize, usize)> = (0..r).filter(|&i| a >> i & 1 == 1).map(|i| pairs[i]).collect();
        let want = if wa.iter().any(|&x| x < 0) { None } else { brute_vddp_c(d, &wa, &sub, budget).unwrap() };
        let entry = &table.entries[a as usize];
        same("paths", entry.as_ref().map_or(-1, |c| c.size), want.unwrap_or(-1));
        if let Some(c) = entry {
            valid("paths", check_path_collection(d, &wa, &pairs, c));
        }
    }

    let (width, dec) = directed_pathwidth(d).unwrap();
    same("dpw", width as i64, brute_dpw(d, budget).unwrap() as i64);
    valid("path decomposition", check_path_decomposition(d, &dec));
    let (rank, ordering) = cycle_rank(d).unwrap();
    same("cycle rank", rank as i64, brute_cycle_rank(d, budget).unwrap() as i64);
    valid("elimination ordering", check_elimination_ordering(d, &ordering));
    same("ordering depth", ordering.rank as i64, rank as i64 + 1);
    (wrong, bad)
}

fn criteria_1_and_2() -> Vec<Line> {
    let budget = OracleBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let corpus = small_corpus();
    let (mut wrong, mut bad) = (Vec::new(), Vec::new());
    for d in &corpus {
        let (w, b) = check_small(d, &mut rng, &budget);
        wrong.extend(w);
        bad.extend(b);
    }
    let took = start.elapsed();
    for msg in wrong.iter().chain(&bad).take(5) {
        eprintln!("{msg}");
    }
    vec![
        Line::report(
            1,
            "oracle equivalence",
            corpus.len() as u64 >= ORACLE_GRAPHS && wrong.is_empty() && took < ORACLE_TIME,
            format!("{} digraphs, {} mismatches, {:.1?} (limit {:?})", corpus.len(), wrong.len(), took, ORACLE_TIME),
        ),
        Line::report(2, "witness validity", bad.is_empty(), format!("{} digraphs, {} rejected witnesses", corpus.len(), bad.len())),
    ]
}

fn criterion_3() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let budget = OracleBudget::default();
    let mut total = IdentityReport::default();
    for seed in 0..IDENTITY_GRAPHS {
        let n = rng.gen_range(1..=IDENTITY_MAX_N);
        let kind = if seed % 4 == 0 { GeneratorKind::Cograph } else { GeneratorKind::BoundedDmw };
        let d = generate(&GeneratorSpec { n, omega: 2 + (seed % 3) as usize, seed: 3000 + seed, kind }).unwrap();
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
        let demand: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        match check_identities(&d, &w, &demand, &budget) {
            Ok(report) => total.merge(report),
            Err(e) => total.failures.push(format!("{e} on\n{d}")),
        }
    }
    for msg in total.failures.iter().take(5) {
        eprintln!("{msg}");
    }
    Line::report(
        3,
        "recurrence identities",
        total.failures.is_empty() && total.nodes.iter().all(|&k| k > 0),
        format!(
            "{IDENTITY_GRAPHS} digraphs, inner nodes per identity {:?}, oracle-checked {:?}, {} failures",
            total.nodes,
            total.oracle_nodes,
            total.failures.len()
        ),
    )
}

fn criterion_4() -> Line {
    let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
    let mut problems = Vec::new();
    if dmw(&c3) != 3 {
        problems.push("dmw(C3) != 3".to_string());
    }
    let mut tree_checked = 0;
    let mut tree_bound = |d: &Digraph, problems: &mut Vec<String>| {
        tree_checked += 1;
        if decomposition_tree(d).nodes.len() > 2 * d.n() - 1 {
            problems.push(format!("tree too large for\n{d}"));
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..COGRAPHS {
        let n = rng.gen_range(1..=COGRAPH_MAX_N);
        let d = generate(&GeneratorSpec { n, omega: 2, seed: 4000 + seed, kind: GeneratorKind::Cograph }).unwrap();
        if dmw(&d) > 2 || !is_directed_cograph(&d) {
            problems.push(format!("co-graph with dmw {}:\n{d}", dmw(&d)));
        }
        tree_bound(&d, &mut problems);
    }
    for seed in 0..MONOTONE_PAIRS {
        let n = rng.gen_range(1..=10);
        let kind = if seed % 2 == 0 { GeneratorKind::Uniform } else { GeneratorKind::BoundedDmw };
        let d = generate(&GeneratorSpec { n, omega: 3, seed: 5000 + seed, kind }).unwrap();
        let x: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        tree_bound(&d, &mut problems);
        if x.is_empty() {
            continue;
        }
        let (sub, _) = d.induced_subgraph(&x).unwrap();
        if dmw(&sub) > dmw(&d) {
            problems.push(format!("dmw grows on {x:?} of\n{d}"));
        }
    }
    for msg in problems.iter().take(5) {
        eprintln!("{msg}");
    }
    Line::report(
        4,
        "structural facts",
        problems.is_empty(),
        format!("dmw(C3) = {}, {COGRAPHS} co-graphs, {MONOTONE_PAIRS} induced pairs, {tree_checked} tree sizes, {} violations", dmw(&c3), problems.len()),
    )
}

fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn reaches(d: &Digraph, s: usize, t: usize) -> bool {
    let mut seen = vec![false; d.n()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        for &v in d.out_neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen[t]
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn criterion_5() -> Line {
    let d = generate(&GeneratorSpec { n: SCALE_N, omega: SCALE_OMEGA, seed: 5, kind: GeneratorKind::BoundedDmw }).unwrap();
    let unit = WeightedDigraph::unit(d.clone());
    let mut times: Vec<(&str, Duration, bool)> = Vec::new();
    let (width, t) = timed(|| dmw(&d));
    times.push(("dmw", t, width <= SCALE_OMEGA));
    let (f, t) = timed(|| min_weight_fvs(&unit).unwrap());
    times.push(("fvs", t, check_fvs(&unit, &f).is_ok()));
    let (g, t) = timed(|| min_weight_domset(&unit).unwrap());
    times.push(("domset", t, check_domset(&unit, &g).is_ok()));
    let (col, t) = timed(|| dichromatic_number(&d).unwrap());
    times.push(("color", t, check_colouring(&d, &ListDemand::unit(d.n()), &col).is_ok()));
    let (part, t) = timed(|| path_partition_witness(&d).unwrap());
    times.push(("ham", t, check_path_partition(&d, &part).is_ok()));
    let ((_, dec), t) = timed(|| directed_pathwidth(&d).unwrap());
    times.push(("dpw", t, check_path_decomposition(&d, &dec).is_ok()));
    let ((_, ord), t) = timed(|| cycle_rank(&d).unwrap());
    times.push(("cyclerank", t, check_elimination_ordering(&d, &ord).is_ok()));
    let mut ok = times.iter().all(|&(_, t, valid)| valid && t < SCALE_TIME);

    // three random pairs with distinct endpoints, each sink reachable from its source
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    while pairs.len() < 3 {
        let (s, t) = (rng.gen_range(0..d.n()), rng.gen_range(0..d.n()));
        let used = pairs.iter().any(|&(a, b)| [a, b].contains(&s) || [a, b].contains(&t));
        if s != t && !used && reaches(&d, s, t) {
            pairs.push((s, t));
        }
    }
    let (routed, paths_time) = timed(|| solve_vddp(&d, &pairs).unwrap());
    let routed_ok = routed.as_ref().map_or(true, |c| check_path_collection(&d, &vec![1; d.n()], &pairs, c).is_ok());
    ok &= routed_ok && paths_time < PATHS_TIME;

    let control = generate(&GeneratorSpec { n: CONTROL_N, omega: 2, seed: 40, kind: GeneratorKind::Uniform }).unwrap();
    let start = Instant::now();
    let control_dmw = dmw(&control);
    let tree_ok = check_decomposition_tree(&control, &decomposition_tree(&control)).is_ok();
    let cunit = WeightedDigraph::unit(control.clone());
    let guarded = |r: &dmw::Result<()>| matches!(r, Ok(()) | Err(Error::QuotientTooLarge { .. }));
    let fvs_outcome = min_weight_fvs(&cunit).and_then(|s| check_fvs(&cunit, &s));
    let dom_outcome = min_weight_domset(&cunit).and_then(|s| check_domset(&cunit, &s));
    let control_time = start.elapsed();
    let control_ok = tree_ok && guarded(&fvs_outcome) && guarded(&dom_outcome) && control_time < CONTROL_TIME;
    ok &= control_ok;
    let outcome = |r: &dmw::Result<()>| match r {
        Ok(()) => "solved".to_string(),
        Err(e) => format!("refused ({e})"),
    };

    let memory = peak_memory_kb();
    ok &= memory.map_or(true, |kb| kb < MEMORY_LIMIT_KB);
    let listed: Vec<String> = times.iter().map(|(name, t, valid)| format!("{name} {t:.2?}{}", if *valid { "" } else { " INVALID" })).collect();
    Line::report(
        5,
        "scaling smoke",
        ok,
        format!(
            "n = {SCALE_N}, dmw = {width}: {} (limit {SCALE_TIME:?}); paths r = 3 {paths_time:.2?}, {} (limit {PATHS_TIME:?}); \
             control n = {CONTROL_N}: dmw = {control_dmw}, fvs {}, domset {}, {control_time:.2?}; peak memory {} kB (limit {MEMORY_LIMIT_KB})",
            listed.join(", "),
            if routed.is_some() { "routed" } else { "no routing" },
            outcome(&fvs_outcome),
            outcome(&dom_outcome),
            memory.map_or("unknown".to_string(), |kb| kb.to_string()),
        ),
    )
}

fn grid_optimum(ilp: &IlpInstance) -> Option<i64> {
    let mut x: Vec<i64> = ilp.bounds.iter().map(|b| b.0).collect();
    let mut best: Option<i64> = None;
    loop {
        if ilp.is_feasible(&x) {
            let v = ilp.evaluate(&x);
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        let mut j = 0;
        loop {
            if j == x.len() {
                return best;
            }
            if x[j] < ilp.bounds[j].1 {
                x[j] += 1;
                break;
            }
            x[j] = ilp.bounds[j].0;
            j += 1;
        }
    }
}

fn criterion_6() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut wrong = 0;
    for _ in 0..ILP_INSTANCES {
        let p = rng.gen_range(1..=4);
        let bounds: Vec<(i64, i64)> = (0..p)
            .map(|_| {
                let lo = rng.gen_range(0..=15);
                (lo, rng.gen_range(lo..=15))
            })
            .collect();
        let mut ilp = IlpInstance::new(bounds);
        ilp.objective = (0..p).map(|_| rng.gen_range(-5..=5)).collect();
        for _ in 0..rng.gen_range(0..=6) {
            let coeffs = (0..p).map(|_| rng.gen_range(-6..=6)).collect();
            let rel = [Relation::Ge, Relation::Le, Relation::Eq][rng.gen_range(0..3)];
            ilp.add(coeffs, rel, rng.gen_range(-40..=40));
        }
        let want = grid_optimum(&ilp);
        let got = solve(&ilp).unwrap();
        let consistent = match &got {
            IlpResult::Optimal { assignment, value } => ilp.is_feasible(assignment) && ilp.evaluate(assignment) == *value,
            IlpResult::Infeasible => true,
        };
        if !consistent || got.value() != want {
            wrong += 1;
            eprintln!("ilp mismatch: {ilp:?} got {got:?} want {want:?}");
        }
    }
    Line::report(6, "ILP against grid enumeration", wrong == 0, format!("{ILP_INSTANCES} instances, {wrong} mismatches"))
}

#[test]
fn acceptance() {
    let mut lines = criteria_1_and_2();
    lines.push(criterion_3());
    lines.push(criterion_4());
    lines.push(criterion_5());
    lines.push(criterion_6());
    let failed = lines.iter().filter(|l| !l.ok).count();
    println!("acceptance: {} of {} criteria passed", lines.len() - failed, lines.len());
    assert_eq!(failed, 0, "acceptance criteria failed");
}
