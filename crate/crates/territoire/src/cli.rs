//! The `territoire` command-line interface: stable JSON reports, budgets,
//! and the 0/1/2 exit-code contract (success / input error / verdict
//! failure).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{plus_subalgebra, Subalgebra};
use crate::combtypes;
use crate::config::{OutputFormat, RunConfig};
use crate::equations;
use crate::error::{Error, Result};
use crate::invariants;
use crate::jsonio::{self, LoadedAlgebra, LoadedSubalgebra};
use crate::pointcount;

/// Witness lists in reports are truncated to this many entries.
pub const PRINT_CAP: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "territoire",
    about = "Subalgebra moduli: invariants, chart equations, finite-field counts, combinatorial types",
    version
)]
struct Cli {
    /// Output format for the report body on stdout.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Worker threads for exhaustive solving; never changes any payload.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for the randomized property checks; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the full JSON report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute delta, conductor, delta', conductances and the Gorenstein flag.
    Invariants(InvariantsArgs),
    /// Emit the polynomial systems cutting territories out of chart(s).
    Territory(TerritoryArgs),
    /// Brute-force point counts over F_p, with optional decomposition and orbits.
    Count(CountArgs),
    /// Combinatorial types: enumerate, validate, stratum reports, dot output.
    Types {
        #[command(subcommand)]
        cmd: TypesCommand,
    },
    /// Run the full acceptance suite.
    Selfcheck,
}

#[derive(Args, Debug)]
struct InvariantsArgs {
    /// Ambient algebra file; optional when the subalgebra file names one.
    #[arg(long)]
    algebra: Option<PathBuf>,
    #[arg(long)]
    subalgebra: PathBuf,
    /// Require branch-conductance data (the algebra must be a truncated product).
    #[arg(long)]
    conductances: bool,
}

#[derive(Args, Debug)]
struct TerritoryArgs {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    delta: usize,
    /// Add determinantal rank conditions for this delta'.
    #[arg(long)]
    delta_prime: Option<usize>,
    /// Containment constraint: "plus" for A^+ of a truncated product, or a
    /// path to a subalgebra JSON file.
    #[arg(long)]
    inside: Option<String>,
    /// Restrict to the chart with these pivot columns (comma-separated,
    /// 0-based); default is all charts.
    #[arg(long)]
    chart: Option<String>,
    /// Solve the system(s) exhaustively over F_p.
    #[arg(long)]
    solve_mod: Option<u64>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    conductances: Vec<u32>,
    #[arg(long)]
    delta: usize,
    #[arg(long)]
    delta_prime: usize,
    #[arg(short)]
    p: u64,
    /// Verify the decomposition identity tuple by tuple.
    #[arg(long)]
    decompose: bool,
    /// Report automorphism orbits (strict crimping classes) per bucket.
    #[arg(long)]
    orbits: bool,
}

#[derive(Subcommand, Debug)]
enum TypesCommand {
    Enumerate {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        markings: usize,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        delta_prime: u32,
    },
    Validate { file: PathBuf },
    Stratum { file: PathBuf },
    Draw {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counters {
    pub candidates_examined: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

/// The full run report. Everything except `timing` is deterministic for a
/// fixed command line and seed.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub config: RunConfig,
    pub results: Value,
    pub counters: Counters,
    pub verdicts: Vec<Verdict>,
    pub timing: Timing,
}

struct Outcome {
    results: Value,
    text: String,
    verdicts: Vec<Verdict>,
    candidates: u64,
}

fn load_rational_algebra(path: &PathBuf) -> Result<(Arc<crate::algebra::FiniteAlgebra<crate::field::Rationals>>, Option<crate::algebra::ConductanceVector>)> {
    match jsonio::load_algebra(path)? {
        LoadedAlgebra::Rational { alg, conductances } => Ok((alg, conductances)),
        LoadedAlgebra::Prime { .. } => Err(Error::Other(
            "territory systems are generated over the rationals; use {\"field\":{\"kind\":\"rationals\"}}"
                .into(),
        )),
    }
}

fn run_invariants(args: &InvariantsArgs) -> Result<Outcome> {
    let ambient = args
        .algebra
        .as_ref()
        .map(|p| jsonio::load_algebra(p))
        .transpose()?;
    let loaded = jsonio::load_subalgebra(&args.subalgebra, ambient)?;
    let (record, conductances) = match &loaded {
        LoadedSubalgebra::Rational { sub, conductances } => {
            let c = conductances.as_ref();
            if args.conductances && c.is_none() {
                return Err(Error::NotTruncatedProduct);
            }
            (invariants::full_record(sub, c)?, conductances.clone())
        }
        LoadedSubalgebra::Prime { sub, conductances } => {
            let c = conductances.as_ref();
            if args.conductances && c.is_none() {
                return Err(Error::NotTruncatedProduct);
            }
            (invariants::full_record(sub, c)?, conductances.clone())
        }
    };
    let mut text = String::new();
    let _ = writeln!(text, "delta          {}", record.delta);
    let _ = writeln!(text, "delta'         {}", record.delta_prime);
    let _ = writeln!(text, "conductor dim  {}", record.conductor_dim);
    for row in &record.conductor_basis {
        let _ = writeln!(text, "  cond row     [{}]", row.join(", "));
    }
    if let Some(bc) = &record.branch_conductances {
        let _ = writeln!(text, "conductances   {bc:?}");
    }
    if let Some(m) = record.branches_after_gluing {
        let _ = writeln!(text, "branches m     {m}");
    }
    if let Some(g) = record.genus {
        let _ = writeln!(text, "genus          {g}");
    }
    if let Some(prof) = &record.gluing {
        let _ = writeln!(text, "gluing         {:?} genera {:?}", prof.partition, prof.genera);
    }
    let _ = writeln!(text, "gorenstein     {}", record.gorenstein);
    Ok(Outcome {
        results: json!({
            "record": serde_json::to_value(&record)?,
            "conductances": conductances.map(|c| c.parts().to_vec()),
        }),
        text,
        verdicts: Vec::new(),
        candidates: 1,
    })
}

fn parse_chart_arg(raw: &str, n: usize) -> Result<equations::Chart> {
    let pivots = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidChart(format!("bad pivot {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    equations::Chart::new(n, pivots)
}

fn run_territory(args: &TerritoryArgs, cfg: &RunConfig) -> Result<Outcome> {
    let (alg, conductances) = load_rational_algebra(&args.algebra)?;
    let n = alg.dim;
    let charts = match &args.chart {
        Some(raw) => vec![parse_chart_arg(raw, n)?],
        None => equations::Chart::all(n, args.delta),
    };
    let inside = match args.inside.as_deref() {
        None => None,
        Some("plus") => {
            let c = conductances
                .as_ref()
                .ok_or(Error::NotTruncatedProduct)?;
            Some(plus_subalgebra(c, &alg)?)
        }
        Some(path) => match jsonio::load_subalgebra(&PathBuf::from(path), None)? {
            LoadedSubalgebra::Rational { sub, .. } => Some(sub),
            LoadedSubalgebra::Prime { .. } => {
                return Err(Error::Other(
                    "containment subalgebra must be over the rationals".into(),
                ))
            }
        },
    };

    let mut chart_reports = Vec::new();
    let mut text = String::new();
    let mut candidates = 0u64;
    let alg_p = match args.solve_mod {
        Some(p) => {
            let field = crate::field::PrimeField::new(p)?;
            Some(Arc::new(reduce_mod_p(&alg, field)?))
        }
        None => None,
    };
    let mut dedup = std::collections::BTreeSet::new();
    for chart in &charts {
        let mut system = equations::chart_equations(&alg, args.delta, chart)?;
        if let Some(b0) = &inside {
            system = system.merge(equations::containment_equations(&alg, chart, b0)?)?;
        }
        if let Some(dp) = args.delta_prime {
            system = system.merge(equations::fitting_rank_conditions(&alg, args.delta, dp, chart)?)?;
        }
        let _ = writeln!(text, "chart pivots {:?}: {} closed, {} open", chart.pivots, system.closed.len(), system.open.len());
        for t in system.closed.iter().chain(system.open.iter()).take(PRINT_CAP) {
            let _ = writeln!(text, "  [{:?}] {}", t.provenance, t.poly.render(&system.variables));
        }
        let mut entry = json!({
            "chart": { "pivots": chart.pivots, "variables": chart.variable_names() },
            "system": serde_json::to_value(jsonio::system_to_json(&system))?,
        });
        if let (Some(p), Some(alg_p)) = (args.solve_mod, &alg_p) {
            let sols = equations::solve_over_prime_field(&system, p, cfg.solve_cap, cfg.threads)?;
            candidates += (p as u64).pow(system.var_count() as u32);
            for sol in &sols {
                dedup.insert(chart.point_to_subalgebra(alg_p, sol)?);
            }
            let _ = writeln!(text, "  solutions mod {p}: {}", sols.len());
            entry["solutions"] = json!(sols.iter().take(PRINT_CAP).collect::<Vec<_>>());
            entry["solution_count"] = json!(sols.len());
        }
        chart_reports.push(entry);
    }
    let mut results = json!({ "delta": args.delta, "charts": chart_reports });
    if args.solve_mod.is_some() {
        let witnesses: Vec<Vec<Vec<u64>>> = dedup
            .iter()
            .take(PRINT_CAP)
            .map(|b| b.basis.to_row_vecs())
            .collect();
        results["distinct_subalgebras"] = json!(dedup.len());
        results["witnesses"] = json!(witnesses);
        let _ = writeln!(text, "distinct subalgebras across charts: {}", dedup.len());
    }
    Ok(Outcome {
        results,
        text,
        verdicts: Vec::new(),
        candidates,
    })
}

fn reduce_mod_p(
    alg: &crate::algebra::FiniteAlgebra<crate::field::Rationals>,
    field: crate::field::PrimeField,
) -> Result<crate::algebra::FiniteAlgebra<crate::field::PrimeField>> {
    let n = alg.dim;
    let to_fp = |x: &num::BigRational| -> Result<u64> {
        crate::field::rational_to_i64(x)
            .map(|i| field.reduce_i64(i))
            .ok_or_else(|| Error::Other("algebra has non-integer entries; cannot reduce mod p".into()))
    };
    let mut table = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                table.push(to_fp(alg.entry(i, j, k))?);
            }
        }
    }
    let unit = alg.unit.iter().map(to_fp).collect::<Result<Vec<_>>>()?;
    crate::algebra::FiniteAlgebra::from_structure_constants(
        field,
        n,
        alg.labels.clone(),
        unit,
        table,
    )
}

fn run_count(args: &CountArgs, cfg: &RunConfig) -> Result<Outcome> {
    let c = crate::algebra::ConductanceVector::new(args.conductances.clone())?;
    let field = crate::field::PrimeField::new(args.p)?;
    let alg = Arc::new(crate::algebra::FiniteAlgebra::truncated_product(
        &c,
        field,
        cfg.construction_dim_cap,
    )?);
    let all = pointcount::enumerate_subalgebras(&alg, args.delta, cfg.enumeration_cap)?;
    let stratum: Vec<Subalgebra<crate::field::PrimeField>> = all
        .iter()
        .filter(|b| invariants::delta_prime(b) == args.delta_prime)
        .cloned()
        .collect();
    let buckets = pointcount::bucketize(&stratum, Some(&c))?;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "corank-{} subalgebras of A_{} over F_{}: {} total, {} with delta' = {}",
        args.delta,
        c,
        args.p,
        all.len(),
        stratum.len(),
        args.delta_prime
    );
    let mut bucket_json = Vec::new();
    for b in &buckets {
        let profile = b.key.profile.as_ref();
        let _ = writeln!(
            text,
            "  bucket {:?} genera {:?}: {} points",
            profile.map(|p| &p.partition),
            profile.map(|p| &p.genera),
            b.points.len()
        );
        bucket_json.push(json!({
            "key": serde_json::to_value(&b.key)?,
            "count": b.points.len(),
            "witnesses": b.points.iter().take(PRINT_CAP).map(|s| s.basis.to_row_vecs()).collect::<Vec<_>>(),
        }));
    }

    let mut verdicts = Vec::new();
    let mut results = json!({
        "conductances": c.parts().to_vec(),
        "delta": args.delta,
        "delta_prime": args.delta_prime,
        "p": args.p,
        "total_corank_delta": all.len(),
        "count": stratum.len(),
        "buckets": bucket_json,
    });

    if args.decompose {
        let report = pointcount::verify_decomposition(
            &c,
            args.delta,
            args.delta_prime,
            args.p,
            cfg.enumeration_cap,
            cfg.solve_cap,
            cfg.threads,
        )?;
        let _ = writeln!(
            text,
            "decomposition: brute {} vs sum of products {} -> {}",
            report.bruteforce_count,
            report.sum_of_products,
            if report.pass { "ok" } else { "MISMATCH" }
        );
        for term in &report.terms {
            let _ = writeln!(
                text,
                "  partition {:?} genera {:?}: product {} (bucket {})",
                term.partition, term.genera, term.product, term.bucket_count
            );
        }
        verdicts.push(Verdict {
            name: "decomposition identity".into(),
            pass: report.pass,
            details: format!(
                "{} tuples, brute {} = sum {}",
                report.terms.len(),
                report.bruteforce_count,
                report.sum_of_products
            ),
        });
        results["decomposition"] = serde_json::to_value(&report)?;
    }

    if args.orbits {
        let group = pointcount::aut_elements(&c, args.p, cfg.group_cap)?;
        let mut orbit_json = Vec::new();
        let mut all_balanced = true;
        for b in &buckets {
            let orbits = pointcount::orbits(&c, &b.points, &group)?;
            for orbit in &orbits {
                all_balanced &=
                    orbit.members.len() as u128 * orbit.stabilizer_order == group.len() as u128;
            }
            let _ = writeln!(
                text,
                "  bucket {:?}: {} orbit(s), sizes {:?}",
                b.key.profile.as_ref().map(|p| &p.partition),
                orbits.len(),
                orbits.iter().map(|o| o.members.len()).collect::<Vec<_>>()
            );
            orbit_json.push(json!({
                "bucket": serde_json::to_value(&b.key)?,
                "orbits": serde_json::to_value(&orbits)?,
            }));
        }
        let _ = writeln!(
            text,
            "note: orbit data over F_{} approximates strict crimping classes; the theorem assumes an algebraically closed field",
            args.p
        );
        verdicts.push(Verdict {
            name: "orbit times stabilizer equals group order".into(),
            pass: all_balanced,
            details: format!("group order {}", group.len()),
        });
        results["orbits"] = Value::Array(orbit_json);
        results["orbit_caveat"] =
            json!("orbit data over F_p; the crimping identification assumes an algebraically closed field");
    }

    Ok(Outcome {
        results,
        text,
        verdicts,
        candidates: all.len() as u64,
    })
}

fn run_types(cmd: &TypesCommand, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        TypesCommand::Enumerate {
            genus,
            markings,
            delta,
            delta_prime,
        } => {
            let types =
                combtypes::enumerate_types(*genus, *markings, *delta, *delta_prime, cfg.enumeration_cap)?;
            let mut text = format!(
                "{} combinatorial type(s) for genus {genus}, {markings} marking(s), delta {delta}, delta' {delta_prime}\n",
                types.len()
            );
            let mut docs = Vec::new();
            for (i, t) in types.iter().enumerate() {
                let inv = combtypes::type_invariants(t)?;
                let _ = writeln!(
                    text,
                    "type {}: {} singularities, {} components, {} branches (components <= {})",
                    i + 1,
                    t.num_sings(),
                    t.num_comps(),
                    t.num_branches(),
                    1 + delta
                );
                docs.push(json!({
                    "type": serde_json::to_value(jsonio::type_to_doc(t))?,
                    "invariants": serde_json::to_value(inv)?,
                }));
            }
            Ok(Outcome {
                results: json!({ "count": types.len(), "types": docs }),
                text,
                verdicts: Vec::new(),
                candidates: types.len() as u64,
            })
        }
        TypesCommand::Validate { file } => {
            let t = jsonio::load_type(file)?;
            let violations = combtypes::validate_type(&t);
            let pass = violations.is_empty();
            let listed: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            let text = if pass {
                "valid combinatorial type\n".to_string()
            } else {
                format!("{} violation(s):\n  {}\n", listed.len(), listed.join("\n  "))
            };
            Ok(Outcome {
                results: json!({ "valid": pass, "violations": listed }),
                text,
                verdicts: vec![Verdict {
                    name: "type validates".into(),
                    pass,
                    details: listed.join("; "),
                }],
                candidates: 1,
            })
        }
        TypesCommand::Stratum { file } => {
            let t = jsonio::load_type(file)?;
            let report = combtypes::stratum_report(&t)?;
            let inv = combtypes::type_invariants(&t)?;
            let mut text = String::new();
            let _ = writeln!(
                text,
                "stratum of a genus-{} type with delta {}, delta' {}",
                inv.genus, inv.delta, inv.delta_prime
            );
            for f in &report.base_factors {
                let _ = writeln!(
                    text,
                    "  base factor M_{{{},{}}} (dim {}){}",
                    f.genus,
                    f.marked_points + f.unmarked_branches,
                    f.dimension,
                    if f.stable { "" } else { "  [unstable]" }
                );
            }
            let _ = writeln!(text, "  symmetry order {}", report.symmetry_order);
            for f in &report.fiber_factors {
                let _ = writeln!(
                    text,
                    "  fiber territory (g={}, c={:?}){}",
                    f.genus,
                    f.conductances,
                    match f.dimension {
                        Some(d) => format!(" dim {d}"),
                        None => "  [dimension unknown; equations emitted on demand]".into(),
                    }
                );
            }
            let _ = writeln!(
                text,
                "  total dimension {}{}",
                report.total_dimension,
                if report.total_is_exact { "" } else { " (lower bound)" }
            );
            Ok(Outcome {
                results: json!({
                    "invariants": serde_json::to_value(inv)?,
                    "stratum": serde_json::to_value(&report)?,
                }),
                text,
                verdicts: Vec::new(),
                candidates: 1,
            })
        }
        TypesCommand::Draw { file, dot: _ } => {
            let t = jsonio::load_type(file)?;
            let dot = combtypes::to_dot(&t);
            Ok(Outcome {
                results: json!({ "dot": dot }),
                text: dot.clone(),
                verdicts: Vec::new(),
                candidates: 1,
            })
        }
    }
}

fn run_selfcheck(cfg: &RunConfig) -> Result<Outcome> {
    let results = crate::acceptance::run_all(cfg)?;
    let mut text = String::new();
    let mut verdicts = Vec::new();
    for r in &results {
        let _ = writeln!(
            text,
            "criterion {:>2} [{}]: {} — {}",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.details.replace('\n', "; ")
        );
        verdicts.push(Verdict {
            name: format!("criterion {}: {}", r.id, r.name),
            pass: r.pass,
            details: r.details.clone(),
        });
    }
    Ok(Outcome {
        results: serde_json::to_value(&results)?,
        text,
        verdicts,
        candidates: results.len() as u64,
    })
}

/// Parse and execute. Returns the exit code (0 success, 1 usage/input
/// error, 2 verdict failure) and the report when one was produced.
pub fn run(argv: &[String]) -> (i32, Option<Report>) {
    let started = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with success codes
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return (code, None);
        }
    };
    let mut cfg = RunConfig {
        threads: cli.threads.max(1),
        seed: cli.seed,
        format: match cli.format {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Json => OutputFormat::Json,
        },
        ..RunConfig::default()
    };
    if let Err(e) = cfg.apply_env() {
        eprintln!("territoire: {e}");
        return (1, None);
    }

    let outcome = match &cli.command {
        Command::Invariants(args) => run_invariants(args),
        Command::Territory(args) => run_territory(args, &cfg),
        Command::Count(args) => run_count(args, &cfg),
        Command::Types { cmd } => run_types(cmd, &cfg),
        Command::Selfcheck => run_selfcheck(&cfg),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("territoire: {e}");
            return (1, None);
        }
    };

    let report = Report {
        command: argv.iter().skip(1).cloned().collect(),
        config: cfg.clone(),
        results: outcome.results,
        counters: Counters {
            candidates_examined: outcome.candidates,
        },
        verdicts: outcome.verdicts,
        timing: Timing {
            elapsed_ms: started.elapsed().as_millis(),
        },
    };

    match cfg.format {
        OutputFormat::Text => print!("{}", outcome.text),
        OutputFormat::Json => match serde_json::to_string_pretty(&report) {
            Ok(s) => println!("{s}"),
            Err(e) => {
                eprintln!("territoire: {e}");
                return (1, Some(report));
            }
        },
    }
    if let Some(path) = &cli.json {
        match serde_json::to_string_pretty(&report) {
            Ok(s) => {
                if let Err(e) = std::fs::write(path, s) {
                    eprintln!("territoire: cannot write {}: {e}", path.display());
                    return (1, Some(report));
                }
            }
            Err(e) => {
                eprintln!("territoire: {e}");
                return (1, Some(report));
            }
        }
    }

    let code = if report.verdicts.iter().all(|v| v.pass) {
        0
    } else {
        2
    };
    (code, Some(report))
}
