//! `dmw`: command-line access to the solvers, oracles and witness checks.
//!
//! Every subcommand prints one JSON object on stdout (except `gen`, which
//! prints an edge list). Exit status 0 means solved or feasible, 1 means
//! infeasible or rejected, 2 means the input was bad.

mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmw::coloring::{n_dichromatic, ListColouring, ListDemand};
use dmw::domset::{min_weight_domset, DomsetSolution};
use dmw::fvs::{min_weight_fvs, FvsSolution};
use dmw::generate::{generate, GeneratorKind, GeneratorSpec};
use dmw::hampath::{hamiltonian_cycle, path_partition_witness, PathPartition};
use dmw::homeo::{dshp, topological_minor, Homeomorphism, PatternDigraph};
use dmw::ilp::IlpInstance;
use dmw::modular::{decomposition_tree, tree_width, DecompositionTree};
use dmw::oracles::{self, OracleBudget};
use dmw::paths::{reduced_capacities, solve_vddp_cs, PathCollection};
use dmw::weighted::WeightedDigraph;
use dmw::widths::{cycle_rank, directed_pathwidth, rank_of_ordering, DirectedPathDecomposition, EliminationTree};
use dmw::{verify, Digraph, Error, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "dmw", version, about = "Exact digraph solvers that recurse over the modular decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decomposition tree and directed modular width
    Decompose(Inputs),
    /// Directed modular width
    Dmw(Inputs),
    /// Minimum-weight feedback vertex set
    Fvs(Inputs),
    /// Minimum-weight out-dominating set
    Domset(Inputs),
    /// Dichromatic number with per-vertex colour demands
    Color(Inputs),
    /// Minimum path partition
    Ham(Inputs),
    /// Hamiltonian cycle
    Hamcycle(Inputs),
    /// Capacitated disjoint paths for the pairs in --pairs
    Paths(Inputs),
    /// Embedding of the pattern in --pattern, at --anchors if given
    Homeo(Inputs),
    /// Directed pathwidth with a decomposition
    Dpw(Inputs),
    /// Cycle rank with an elimination ordering
    Cyclerank(Inputs),
    /// Random digraph as an edge list
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        omega: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Kind::BoundedDmw)]
        kind: Kind,
    },
    /// Exhaustive reference answer for a small instance
    Oracle {
        #[arg(value_enum)]
        problem: Problem,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Check a witness printed by a solver subcommand
    Verify {
        #[arg(value_enum)]
        problem: Problem,
        #[command(flatten)]
        inputs: Inputs,
        /// JSON output of the solver
        witness: PathBuf,
    },
    /// Solve an integer program given as JSON
    Ilp { instance: PathBuf },
}

#[derive(Args)]
struct Inputs {
    /// Edge-list file: vertex count, then one `u v` per line
    graph: PathBuf,
    /// Lines `v w`; unlisted vertices weigh 1
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Lines `v N`; unlisted vertices demand 1 colour
    #[arg(long)]
    demands: Option<PathBuf>,
    /// Lines `s t`
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Lines `v c`; unlisted vertices have capacity 1
    #[arg(long)]
    capacities: Option<PathBuf>,
    /// Pattern digraph in edge-list form; loops and repeated edges allowed
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Comma-separated anchor vertices, one per pattern vertex
    #[arg(long)]
    anchors: Option<String>,
    /// Upper bound on the total weight; defaults to the total weight, at most 2^40
    #[arg(long)]
    tau: Option<i64>,
    /// Solve every sub-list of the pairs
    #[arg(long)]
    all_sublists: bool,
    /// JSON output (the only format)
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Uniform,
    Cograph,
    BoundedDmw,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    Decompose,
    Dmw,
    Fvs,
    Domset,
    Color,
    Ham,
    Hamcycle,
    Paths,
    Homeo,
    Dpw,
    Cyclerank,
}

/// `(success, output)`; success selects exit status 0 or 1.
type Outcome = (bool, Value);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((ok, out)) => {
            if !out.is_null() {
                println!("{out}");
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Decompose(i) => solve(Problem::Decompose, &i),
        Command::Dmw(i) => solve(Problem::Dmw, &i),
        Command::Fvs(i) => solve(Problem::Fvs, &i),
        Command::Domset(i) => solve(Problem::Domset, &i),
        Command::Color(i) => solve(Problem::Color, &i),
        Command::Ham(i) => solve(Problem::Ham, &i),
        Command::Hamcycle(i) => solve(Problem::Hamcycle, &i),
        Command::Paths(i) => solve(Problem::Paths, &i),
        Command::Homeo(i) => solve(Problem::Homeo, &i),
        Command::Dpw(i) => solve(Problem::Dpw, &i),
        Command::Cyclerank(i) => solve(Problem::Cyclerank, &i),
        Command::Gen { n, omega, seed, kind } => {
            let kind = match kind {
                Kind::Uniform => GeneratorKind::Uniform,
                Kind::Cograph => GeneratorKind::Cograph,
                Kind::BoundedDmw => GeneratorKind::BoundedDmw,
            };
            print!("{}", generate(&GeneratorSpec { n, omega, seed, kind })?.to_edge_list());
            Ok((true, Value::Null))
        }
        Command::Oracle { problem, inputs } => oracle(problem, &inputs),
        Command::Verify { problem, inputs, witness } => check(problem, &inputs, &witness),
        Command::Ilp { instance } => {
            let inst: IlpInstance = serde_json::from_str(&input::read(&instance)?).map_err(bad_json)?;
            let result = dmw::ilp::solve(&inst)?;
            Ok((result.value().is_some(), to_json(&result)))
        }
    }
}

fn bad_json(e: serde_json::Error) -> Error {
    Error::InvalidInstance(format!("JSON: {e}"))
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

/// Everything a problem needs besides the digraph.
struct Loaded {
    d: Digraph,
    weights: WeightedDigraph,
    demand: ListDemand,
    pairs: Vec<(usize, usize)>,
    caps: Vec<i64>,
    tau: Option<i64>,
}

fn load(problem: Problem, i: &Inputs) -> Result<Loaded> {
    let d = input::graph(&i.graph)?;
    let w = input::per_vertex(&d, i.weights.as_deref(), 1)?;
    let tau_w = input::tau(i.tau, w.iter().sum())?;
    let weights = WeightedDigraph::new(d.clone(), w, tau_w)?;
    let demand = input::per_vertex(&d, i.demands.as_deref(), 1)?;
    let tau_n = input::tau(i.tau, demand.iter().sum())?;
    let demand = ListDemand::new(demand, tau_n)?;
    let pairs = match (&i.pairs, problem) {
        (Some(p), _) => input::pairs(&d, p)?,
        (None, Problem::Paths) => return Err(Error::InvalidInstance("--pairs is required".into())),
        (None, _) => vec![],
    };
    let caps = input::per_vertex(&d, i.capacities.as_deref(), 1)?;
    Ok(Loaded { d, weights, demand, pairs, caps, tau: i.tau })
}

fn pattern(i: &Inputs) -> Result<(PatternDigraph, Option<Vec<usize>>)> {
    let path = i.pattern.as_deref().ok_or_else(|| Error::InvalidInstance("--pattern is required".into()))?;
    let h: PatternDigraph = input::read(path)?.parse()?;
    let anchors = i.anchors.as_deref().map(input::anchors).transpose()?;
    Ok((h, anchors))
}

fn collection_json(c: &Option<PathCollection>) -> Value {
    match c {
        Some(c) => json!({ "feasible": true, "W": c.size, "pairs": c.pairs, "walks": c.walks }),
        None => json!({ "feasible": false, "W": null, "pairs": null, "walks": null }),
    }
}

fn solve(problem: Problem, i: &Inputs) -> Result<Outcome> {
    let l = load(problem, i)?;
    let d = &l.d;
    Ok(match problem {
        Problem::Decompose => {
            let tree = decomposition_tree(d);
            (true, json!({ "dmw": tree_width(&tree), "tree": tree }))
        }
        Problem::Dmw => (true, json!({ "dmw": dmw::modular::dmw(d) })),
        Problem::Fvs => (true, to_json(&min_weight_fvs(&l.weights)?)),
        Problem::Domset => (true, to_json(&min_weight_domset(&l.weights)?)),
        Problem::Color => (true, to_json(&n_dichromatic(d, &l.demand)?)),
        Problem::Ham => {
            let p = path_partition_witness(d)?;
            (true, json!({ "ham": p.paths.len(), "paths": p.paths }))
        }
        Problem::Hamcycle => {
            let c = hamiltonian_cycle(d)?;
            (c.is_some(), json!({ "exists": c.is_some(), "cycle": c }))
        }
        Problem::Paths => {
            let tau = input::tau(l.tau, l.caps.iter().sum())?;
            let table = solve_vddp_cs(d, &l.caps, &l.pairs, tau)?;
            if i.all_sublists {
                let entries: Vec<Value> = table
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(a, c)| {
                        let mut e = collection_json(c);
                        e["sublist"] = json!((0..l.pairs.len()).filter(|&j| a >> j & 1 == 1).collect::<Vec<_>>());
                        e
                    })
                    .collect();
                (true, json!({ "entries": entries }))
            } else {
                let full = table.entries.into_iter().last().expect("the full list has an entry");
                (full.is_some(), collection_json(&full))
            }
        }
        Problem::Homeo => {
            let (h, anchors) = pattern(i)?;
            let found = match anchors {
                Some(a) => dshp(d, &h, &a)?,
                None => topological_minor(d, &h)?,
            };
            match found {
                Some(emb) => (true, json!({ "found": true, "anchors": emb.anchors, "walks": emb.walks })),
                None => (false, json!({ "found": false, "anchors": null, "walks": null })),
            }
        }
        Problem::Dpw => {
            let (width, dec) = directed_pathwidth(d)?;
            (true, json!({ "width": width, "bags": dec.bags }))
        }
        Problem::Cyclerank => {
            let (rank, ord) = cycle_rank(d)?;
            (true, json!({ "rank": rank, "ordering": ord.sigma, "depth": ord.rank, "tree": ord.tree }))
        }
    })
}

fn oracle(problem: Problem, i: &Inputs) -> Result<Outcome> {
    let l = load(problem, i)?;
    let (d, b) = (&l.d, &OracleBudget::default());
    Ok(match problem {
        Problem::Decompose | Problem::Dmw => (true, json!({ "dmw": oracles::brute_dmw(d, b)? })),
        Problem::Fvs => (true, json!({ "weight": oracles::brute_fvs(&l.weights, b)? })),
        Problem::Domset => (true, json!({ "weight": oracles::brute_domset(&l.weights, b)? })),
        Problem::Color => (true, json!({ "k": oracles::brute_dichromatic(d, &l.demand.demand, b)? })),
        Problem::Ham => (true, json!({ "ham": oracles::brute_ham(d, b)? })),
        Problem::Hamcycle => {
            let exists = oracles::brute_hamiltonian_cycle(d, b)?;
            (exists, json!({ "exists": exists }))
        }
        Problem::Paths => {
            let size = oracles::brute_vddp_c(d, &l.caps, &l.pairs, b)?;
            (size.is_some(), json!({ "feasible": size.is_some(), "W": size }))
        }
        Problem::Homeo => {
            let (h, anchors) = pattern(i)?;
            let found = match anchors {
                Some(a) => oracles::brute_dshp(d, &h, &a, b)?,
                None => oracles::brute_topological_minor(d, &h, b)?,
            };
            (found, json!({ "found": found }))
        }
        Problem::Dpw => (true, json!({ "width": oracles::brute_dpw(d, b)? })),
        Problem::Cyclerank => (true, json!({ "rank": oracles::brute_cycle_rank(d, b)? })),
    })
}

fn field<T: serde::de::DeserializeOwned>(w: &Value, name: &str) -> Result<T> {
    let v = w.get(name).ok_or_else(|| Error::Witness(format!("missing field {name:?}")))?;
    serde_json::from_value(v.clone()).map_err(|e| Error::Witness(format!("field {name:?}: {e}")))
}

fn optional<T: serde::de::DeserializeOwned>(w: &Value, name: &str) -> Result<Option<T>> {
    match w.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => field(w, name).map(Some),
    }
}

fn agree<T: PartialEq + std::fmt::Debug>(what: &str, stated: Option<T>, actual: T) -> Result<()> {
    match stated {
        Some(s) if s != actual => Err(Error::Witness(format!("stated {what} {s:?} differs from {actual:?}"))),
        _ => Ok(()),
    }
}

/// Runs the checker for `problem`. Negative answers carry no witness and
/// are reported as unchecked.
fn check(problem: Problem, i: &Inputs, witness: &Path) -> Result<Outcome> {
    let l = load(problem, i)?;
    let d = &l.d;
    let w: Value = serde_json::from_str(&input::read(witness)?).map_err(bad_json)?;
    let verdict = |r: Result<()>| -> Result<Outcome> {
        match r {
            Ok(()) => Ok((true, json!({ "valid": true, "checked": true, "reason": null }))),
            Err(Error::Witness(m)) => Ok((false, json!({ "valid": false, "checked": true, "reason": m }))),
            Err(e) => Err(e),
        }
    };
    let nothing = || Ok((true, json!({ "valid": true, "checked": false, "reason": "negative answer, no witness" })));
    match problem {
        Problem::Decompose | Problem::Dmw => {
            let tree: DecompositionTree = field(&w, "tree")?;
            verdict(verify::check_decomposition_tree(d, &tree).and_then(|_| agree("dmw", optional(&w, "dmw")?, tree_width(&tree))))
        }
        Problem::Fvs => {
            let vertices: Vec<usize> = field(&w, "vertices")?;
            let weight = optional(&w, "weight")?.unwrap_or_else(|| vertices.iter().map(|&v| l.weights.w.get(v).copied().unwrap_or(0)).sum());
            verdict(verify::check_fvs(&l.weights, &FvsSolution { weight, vertices }))
        }
        Problem::Domset => {
            let vertices: Vec<usize> = field(&w, "vertices")?;
            let weight = optional(&w, "weight")?.unwrap_or_else(|| vertices.iter().map(|&v| l.weights.w.get(v).copied().unwrap_or(0)).sum());
            verdict(verify::check_domset(&l.weights, &DomsetSolution { weight, vertices }))
        }
        Problem::Color => {
            let col = ListColouring { k: field(&w, "k")?, lists: field(&w, "lists")? };
            verdict(verify::check_colouring(d, &l.demand, &col))
        }
        Problem::Ham => {
            let p = PathPartition { paths: field(&w, "paths")? };
            verdict(verify::check_path_partition(d, &p).and_then(|_| agree("ham", optional(&w, "ham")?, p.paths.len())))
        }
        Problem::Hamcycle => match optional::<Vec<usize>>(&w, "cycle")? {
            Some(c) => verdict(verify::check_hamiltonian_cycle(d, &c)),
            None => nothing(),
        },
        Problem::Paths => {
            let one = |e: &Value, caps: &[i64]| -> Result<()> {
                let (Some(pairs), Some(walks)) = (optional(e, "pairs")?, optional::<Vec<Vec<usize>>>(e, "walks")?) else { return Ok(()) };
                let size = optional(e, "W")?.unwrap_or_else(|| walks.iter().map(|x| x.len() as i64).sum());
                verify::check_path_collection(d, caps, &l.pairs, &PathCollection { pairs, walks, size })
            };
            match optional::<Vec<Value>>(&w, "entries")? {
                Some(entries) => verdict(entries.iter().try_for_each(|e| {
                    let sub: Vec<usize> = field(e, "sublist")?;
                    let a = sub.iter().fold(0u64, |m, &j| m | 1 << j);
                    one(e, &reduced_capacities(&l.caps, &l.pairs, a))
                })),
                None if w.get("walks").map_or(true, Value::is_null) => nothing(),
                None => verdict(one(&w, &l.caps)),
            }
        }
        Problem::Homeo => {
            let (h, _) = pattern(i)?;
            match optional::<Vec<usize>>(&w, "anchors")? {
                Some(anchors) => verdict(verify::check_homeomorphism(d, &h, &Homeomorphism { anchors, walks: field(&w, "walks")? })),
                None => nothing(),
            }
        }
        Problem::Dpw => {
            let dec = DirectedPathDecomposition { bags: field(&w, "bags")? };
            verdict(verify::check_path_decomposition(d, &dec).and_then(|_| agree("width", optional(&w, "width")?, dec.width())))
        }
        Problem::Cyclerank => {
            let sigma: Vec<usize> = field(&w, "ordering")?;
            let (depth, tree) = match rank_of_ordering(d, &sigma) {
                Ok(x) => x,
                Err(Error::NotAPermutation | Error::LengthMismatch { .. }) => return verdict(Err(Error::Witness("ordering is not a permutation".into()))),
                Err(e) => return Err(e),
            };
            let stated_tree: Option<EliminationTree> = optional(&w, "tree")?;
            let r = agree("depth", optional(&w, "depth")?, depth)
                .and_then(|_| agree("rank", optional::<usize>(&w, "rank")?.map(|r| r + 1), depth))
                .and_then(|_| agree("tree", stated_tree, tree));
            verdict(r)
        }
    }
}
