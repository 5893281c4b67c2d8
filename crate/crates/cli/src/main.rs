//! `lorenz`: command-line access to kneading, branch partitions,
//! renormalization and the parameter-plane tools of `lorenz-core`.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lorenz_core::family::island::trace_island_boundary_with;
use lorenz_core::family::realize::{realize_kneading_with, RealizeOptions};
use lorenz_core::family::*;
use lorenz_core::renorm::{detect_renormalizations, verify_renormalization, RenormType};
use lorenz_core::scalar::parse_rational;
use lorenz_core::symbolic::{branch_partition, cutting_times};
use lorenz_core::*;

use output::{emit_json, write_atomic, Failure};

#[derive(Parser, Debug)]
#[command(name = "lorenz", version, about = "Combinatorics and renormalization of Lorenz maps")]
struct Cli {
    /// Recorded in every JSON document and image header.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated kneading pair of a map.
    Knead {
        #[command(flatten)]
        map: MapSpec,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Branch partition of the n-th iterate as CSV.
    Branches {
        #[command(flatten)]
        map: MapSpec,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All renormalizations up to the given period caps.
    Renorm {
        #[command(flatten)]
        map: MapSpec,
        #[arg(long, default_value_t = 8)]
        a_max: usize,
        #[arg(long, default_value_t = 8)]
        b_max: usize,
    },
    /// Raster membership scan of one renormalization type over the (u, m) square.
    Scan {
        #[command(flatten)]
        rtype: TypeSpec,
        #[arg(long, default_value_t = 64)]
        nu: usize,
        #[arg(long, default_value_t = 64)]
        nm: usize,
        #[arg(long, default_value = "grid.csv")]
        out: PathBuf,
        #[arg(long, default_value = "grid.pgm")]
        img: PathBuf,
    },
    /// Boundary, extremal points and vertices of the largest island of a type.
    Islands {
        #[command(flatten)]
        rtype: TypeSpec,
        /// Resolution of the scan used to find a seed.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 128)]
        fibers: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the family for a parameter with a given kneading pair.
    Realize {
        #[arg(long, value_parser = parse_word)]
        kminus: Word,
        #[arg(long, value_parser = parse_word)]
        kplus: Word,
        #[arg(long, default_value_t = 1 << 20)]
        budget: usize,
    },
    /// Fraction of a parameter grid with attracting critical cycles.
    HyperbolicDensity {
        #[arg(long, default_value_t = 64)]
        ns: usize,
        #[arg(long, default_value_t = 64)]
        nt: usize,
        #[arg(long, default_value_t = 10_000)]
        horizon: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        /// Include the per-cell classification.
        #[arg(long)]
        cells: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MapSpec {
    /// Family parameters `s,t` in [0, 1].
    #[arg(long, value_parser = parse_pair)]
    family: Option<(BigRational, BigRational)>,
    /// Exact affine slopes `k1,k2` in (1, 2], e.g. `3/2,7/4`.
    #[arg(long, value_parser = parse_pair)]
    affine: Option<(BigRational, BigRational)>,
}

#[derive(Args, Debug)]
struct TypeSpec {
    #[arg(long, value_parser = parse_word)]
    alpha: Word,
    #[arg(long, value_parser = parse_word)]
    beta: Word,
}

impl TypeSpec {
    fn rtype(&self) -> Result<RenormType> {
        RenormType::new(self.alpha.clone(), self.beta.clone())
    }
}

fn parse_word(s: &str) -> std::result::Result<Word, String> {
    s.parse().map_err(|e: LorenzError| e.to_string())
}

fn parse_pair(s: &str) -> std::result::Result<(BigRational, BigRational), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated numbers, got '{s}'"))?;
    let num = |x: &str| parse_rational(x).ok_or_else(|| format!("not a number: '{x}'"));
    Ok((num(a)?, num(b)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return Failure::usage(&e).report(),
    };
    if let Err(f) = configure_threads() {
        return f.report();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}

fn configure_threads() -> std::result::Result<(), Failure> {
    let Ok(var) = std::env::var("LORENZ_THREADS") else {
        return Ok(());
    };
    let n: usize = var
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::validation(format!("LORENZ_THREADS must be a positive integer, got '{var}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::validation(e.to_string()))
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(LorenzError::Precondition(format!("{name} must be positive, got {x}")))
    }
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let seed = cli.seed;
    match cli.command {
        Command::Knead { map, depth } => {
            let k = with_map(&map, |m| kneading(m, depth), |m| kneading(m, depth))?;
            let mut doc = serde_json::to_value(&k).map_err(Failure::internal)?;
            doc["seed"] = json!(seed);
            emit_json(&doc, None)
        }
        Command::Branches { map, depth, out } => {
            let csv = with_map(&map, |m| branches_csv(m, depth), |m| branches_csv(m, depth))?;
            match out {
                Some(path) => write_atomic(&path, csv.as_bytes()),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::Renorm { map, a_max, b_max } => {
            let list = with_map(&map, |m| renorm_json(m, a_max, b_max), |m| renorm_json(m, a_max, b_max))?;
            emit_json(&list, None)
        }
        Command::Scan { rtype, nu, nm, out, img } => {
            let rtype = rtype.rtype()?;
            let grid = scan_archipelago(&rtype, nu, nm)?;
            let mut csv = Vec::new();
            grid.write_csv(&mut csv).map_err(Failure::io)?;
            let comment = format!("lorenz scan alpha={} beta={} seed={seed}", rtype.alpha, rtype.beta);
            let mut pgm = Vec::new();
            grid.write_pgm(&mut pgm, Some(&comment)).map_err(Failure::io)?;
            write_atomic(&out, &csv)?;
            write_atomic(&img, &pgm)?;
            let summary = json!({
                "seed": seed,
                "alpha": rtype.alpha,
                "beta": rtype.beta,
                "nu": nu,
                "nm": nm,
                "inside": grid.count(CellStatus::Inside),
                "uncertain": grid.count(CellStatus::Uncertain),
                "outside": grid.count(CellStatus::Outside),
                "islands": grid.islands().len(),
                "discontiguous_fibers": grid.discontiguous_fibers,
                "csv": out,
                "pgm": img,
            });
            emit_json(&summary, None)
        }
        Command::Islands { rtype, grid, fibers, tol, out } => {
            positive("--tol", tol)?;
            let rtype = rtype.rtype()?;
            let scan = scan_archipelago(&rtype, grid, grid)?;
            let islands = scan.islands();
            let Some(island) = islands.first() else {
                return Err(LorenzError::Undefined(format!("no island of type {rtype} at resolution {grid}")).into());
            };
            let opts = TraceOptions { fiber_tol: tol, fibers, ..TraceOptions::default() };
            let b = trace_island_boundary_with(&rtype, &island.seed(&scan), &opts)?;
            let doc = json!({
                "seed": seed,
                "alpha": rtype.alpha,
                "beta": rtype.beta,
                "u1": b.u_range.0,
                "u2": b.u_range.1,
                "lower": b.lower,
                "upper": b.upper,
                "extremals": [b.left_extremal, b.right_extremal],
                "vertices": b.vertices,
                "truncated": b.truncated,
                "fiber_tol": b.fiber_tol,
                "contiguity_failures": b.contiguity_failures,
                "lipschitz_violations": b.lipschitz_violations,
            });
            emit_json(&doc, out.as_deref())
        }
        Command::Realize { kminus, kplus, budget } => {
            let opts = RealizeOptions { node_budget: budget, ..RealizeOptions::default() };
            let r = realize_kneading_with(&kminus, &kplus, &opts)?;
            let mut doc = match &r {
                Realization::Found { s, t } => json!({ "s": s, "t": t }),
                Realization::None { certificate } => json!({ "result": "none", "certificate": certificate }),
            };
            doc["seed"] = json!(seed);
            emit_json(&doc, None)
        }
        Command::HyperbolicDensity { ns, nt, horizon, eps, cells, out } => {
            positive("--eps", eps)?;
            let report = hyperbolic_density(ns, nt, horizon, eps, true)?;
            let mut doc = serde_json::to_value(&report).map_err(Failure::internal)?;
            if !cells {
                doc.as_object_mut().expect("report is an object").remove("cells");
            }
            doc["seed"] = json!(seed);
            emit_json(&doc, out.as_deref())
        }
    }
}

/// Dispatch on the map kind: family points run in `f64`, affine slopes exactly.
fn with_map<T>(
    map: &MapSpec,
    family: impl FnOnce(&Map64) -> Result<T>,
    affine: impl FnOnce(&ExactMap) -> Result<T>,
) -> Result<T> {
    match (&map.family, &map.affine) {
        (Some((s, t)), _) => {
            let pt = ParamPoint::new(s.approx(), t.approx())?;
            family(&family_map(&pt))
        }
        (None, Some((k1, k2))) => affine(&ExactMap::affine(k1.clone(), k2.clone())?),
        (None, None) => Err(LorenzError::Precondition("one of --family or --affine is required".into())),
    }
}

fn csv_value<S: Scalar>(x: &S) -> String {
    match x.to_json() {
        Value::String(s) => s,
        _ => scan::num(x.approx()),
    }
}

fn branches_csv<S: Scalar>(map: &LorenzMap<S>, depth: usize) -> Result<String> {
    let p = branch_partition(map, depth)?;
    let time = |c: Option<usize>| c.map(|c| c.to_string()).unwrap_or_default();
    let mut out = String::from("lo,hi,word,cut_l,cut_r\n");
    for b in &p.branches {
        let (l, r) = cutting_times(b);
        out.push_str(&format!("{},{},{},{},{}\n", csv_value(&b.lo), csv_value(&b.hi), b.word, time(l), time(r)));
    }
    Ok(out)
}

/// Detected renormalizations, each re-checked pointwise before it is reported.
fn renorm_json<S: Scalar>(map: &LorenzMap<S>, a_max: usize, b_max: usize) -> Result<Value> {
    let found = detect_renormalizations(map, a_max, b_max)?;
    let mut list = Vec::with_capacity(found.len());
    for r in &found {
        if !r.uncertain {
            verify_renormalization(map, r)?;
        }
        list.push(json!({
            "p": r.p.to_json(),
            "q": r.q.to_json(),
            "a": r.a,
            "b": r.b,
            "alpha": r.rtype.alpha,
            "beta": r.rtype.beta,
            "deriv_p": r.deriv_p.to_json(),
            "deriv_q": r.deriv_q.to_json(),
            "uncertain": r.uncertain,
        }));
    }
    Ok(Value::Array(list))
}
