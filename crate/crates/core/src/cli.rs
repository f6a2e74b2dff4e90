//! The `graphon` command line.
//!
//! Every subcommand prints one JSON document on stdout: pretty by default,
//! a single line with `--json`. Rationals appear as `"p/q"` strings in
//! lowest terms, next to a decimal rendering.
//!
//! Exit codes: 0 success, 1 failed reproduction check, 2 domain, alignment,
//! parse or I/O error, 3 capacity exceeded (including capped constants),
//! 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::battery;
use crate::constructions::{
    binary_coloring, certified_constants, chromatic_coloring, kappa_upper, local_deficit_with, odd_girth_family,
    odd_girth_kernel, permutation_family,
};
use crate::cutnorm::{cut_norm_with_limit, template_window_check, DEFAULT_PART_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{graph_stats, SimpleGraph};
use crate::homcount::{Budget, Strategy};
use crate::homdensity::{
    build_k2a2b_c5, commonness_margin, density_with, epsilon_expansion_with, mono_sum_with, random_coloring_value,
    DensityOptions,
};
use crate::independence::{alpha_lower, low_degree_peel, AlphaOptions, DEFAULT_RESOLUTION};
use crate::kernel::{diagonal_average, split_parts, ColoringTemplate, StepKernel};
use crate::rational::{decimal, fmt_q, parse_q, Q};
use crate::sampler::{convergence_report, random_template, sample_w_random, CountMode, Source};
use crate::spectral::{cycle_trace_check_with, decompose, DEFAULT_TOLERANCE};

#[derive(Parser, Debug)]
#[command(name = "graphon", version, about = "Exact computations with step graphons and coloring templates")]
struct Cli {
    /// Worker threads for parallel scans; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Evaluation budget for homomorphism sums (overrides GRAPHON_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Print compact single-line JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    Brute,
    Elimination,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Homomorphism,
    Injective,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homomorphism density t(H, W).
    Density {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Coefficients of t(H, p + εU) in ε.
    Expand {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Monochromatic density of H under a template against k^(1−‖H‖).
    Margin {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Structural statistics of a graph.
    Stats {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Spectrum of a kernel with cycle-density trace checks.
    Spectrum {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Exact cut norm with a maximizing box.
    Cutnorm {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PART_LIMIT)]
        limit: usize,
    },
    /// Per-color window test ‖W_i − 1/k‖□ ≤ ε₀/k and ‖W_i − 1/k‖∞ ≤ 1/k.
    Localcheck {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        eps0: String,
    },
    /// Build colorings, kernels and graphs.
    Construct(ConstructArgs),
    /// Local deficit polynomial of H for k colors.
    Deficit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Upper bounds on κ(H).
    Kappa {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Certified constants of the recursion up to level k.
    Constants {
        #[arg(long)]
        k: usize,
    },
    /// Grid lower bound on the δ-independence ratio.
    Alpha {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },
    /// Low-degree peeling fixpoint.
    Peel {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        d0: String,
    },
    /// Sample G(n, W).
    Sample {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical densities in samples against the exact limit.
    Converge {
        #[arg(long, conflicts_with = "kernel", required_unless_present = "kernel")]
        template: Option<PathBuf>,
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        schedule: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "injective")]
        mode: ModeArg,
    },
    /// Run the reproduction battery.
    Reproduce {
        #[arg(long, default_value = "paper", value_parser = ["paper"])]
        suite: String,
        /// Run only these checks (1-based, comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Also write the constructed object to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    what: Construct,
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// The bit-pattern k-coloring on 2^(k−1) parts.
    Binary {
        #[arg(long)]
        k: usize,
    },
    /// A q-coloring built from a base template of k colors.
    Chromatic {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: usize,
    },
    /// The odd-girth kernel U on 2ℓ parts; with --k and --eps, the whole
    /// perturbed k-color family.
    Oddgirth {
        #[arg(long)]
        l: usize,
        #[arg(long, requires = "eps")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        eps: Option<String>,
    },
    /// Permutation family of a graphon with constant diagonal and equal parts.
    Permfamily {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        l: usize,
        /// First replace the diagonal by its average and split every part in two.
        #[arg(long)]
        average: bool,
    },
    /// The graph K_{2a,2b} glued to C5, with an optional random template search.
    Kc5 {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Number of random templates to try.
        #[arg(long, default_value_t = 0)]
        search: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        parts: usize,
        #[arg(long, default_value_t = 12)]
        denominator: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Outcome of a command: a JSON document and an exit code.
struct Output {
    doc: Value,
    code: i32,
}

impl From<Value> for Output {
    fn from(doc: Value) -> Self {
        Output { doc, code: 0 }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity(_) => 3,
        _ => 2,
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let budget = cli.budget.map(Budget::new).unwrap_or_else(Budget::from_env);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command, budget, err)),
            Err(e) => Err(Error::Domain(format!("cannot start {n} threads: {e}"))),
        },
        None => execute(cli.command, budget, err),
    };
    match result {
        Ok(o) => {
            let text = if cli.json {
                serde_json::to_string(&o.doc)
            } else {
                serde_json::to_string_pretty(&o.doc)
            }
            .expect("JSON values serialize");
            if writeln!(out, "{text}").is_err() {
                return 2;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr())
}

fn rational(x: &Q) -> Value {
    json!({ "exact": fmt_q(x), "decimal": decimal(x) })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_graph(path: &Path) -> Result<SimpleGraph> {
    read(path)?.parse()
}

fn load_kernel(path: &Path) -> Result<StepKernel> {
    StepKernel::from_json_str(&read(path)?)
}

fn load_template(path: &Path) -> Result<ColoringTemplate> {
    ColoringTemplate::from_json_str(&read(path)?)
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn execute(command: Command, budget: Budget, log: &mut (dyn Write + Send)) -> Result<Output> {
    let opts = DensityOptions::with_budget(budget);
    let out = match command {
        Command::Density { graph, kernel, strategy } => {
            let h = load_graph(&graph)?;
            let w = load_kernel(&kernel)?;
            let strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::Brute => Strategy::BruteForce,
                StrategyArg::Elimination => Strategy::Elimination,
            };
            let t = density_with(&h, &w, DensityOptions { strategy, budget })?;
            json!({ "density": rational(&t) }).into()
        }
        Command::Expand { graph, p, kernel } => {
            let h = load_graph(&graph)?;
            let u = load_kernel(&kernel)?;
            let poly = epsilon_expansion_with(&h, &parse_q(&p)?, &u, opts)?;
            to_value(poly.to_json()).into()
        }
        Command::Margin { template, graph } => {
            let t = load_template(&template)?;
            let h = load_graph(&graph)?;
            let sum = mono_sum_with(&t, &h, opts)?;
            let baseline = random_coloring_value(t.k(), &h);
            let margin = &sum - &baseline;
            json!({
                "k": t.k(),
                "mono_sum": rational(&sum),
                "random_coloring": rational(&baseline),
                "margin": rational(&margin),
                "beats_random": margin < Q::from_integer(0.into()),
            })
            .into()
        }
        Command::Stats { graph } => {
            let s = graph_stats(&load_graph(&graph)?)?;
            json!({
                "vertices": s.vertices,
                "edges": s.edges,
                "components": s.components,
                "average_degree": rational(&s.average_degree),
                "girth": s.girth,
                "odd_girth": s.odd_girth,
                "girth_cycles": s.girth_cycles,
                "chromatic_number": s.chromatic_number,
                "bipartite": s.bipartite,
            })
            .into()
        }
        Command::Spectrum { kernel, tol } => {
            let w = load_kernel(&kernel)?;
            let d = decompose(&w, tol)?;
            let mut traces = serde_json::Map::new();
            for n in 3..=8 {
                let (exact, sum) = cycle_trace_check_with(&w, n, tol)?;
                let diff = (crate::rational::to_f64(&exact) - sum).abs();
                traces.insert(
                    n.to_string(),
                    json!({ "density": rational(&exact), "power_sum": sum, "difference": diff }),
                );
            }
            json!({
                "eigenvalues": d.eigenvalues,
                "eigenfunctions": d.eigenfunctions,
                "trace_checks": traces,
                "consistent": d.check(&w).err(),
            })
            .into()
        }
        Command::Cutnorm { kernel, limit } => {
            let c = cut_norm_with_limit(&load_kernel(&kernel)?, limit)?;
            json!({ "value": rational(&c.value), "S": c.s, "T": c.t }).into()
        }
        Command::Localcheck { template, eps0 } => {
            let checks = template_window_check(&load_template(&template)?, &parse_q(&eps0)?)?;
            let ok = checks.iter().all(|c| c.cut_ok && c.sup_ok);
            json!({ "colors": checks, "all_ok": ok }).into()
        }
        Command::Construct(args) => construct(args, log)?,
        Command::Deficit { graph, k } => {
            let h = load_graph(&graph)?;
            to_value(local_deficit_with(&h, k, opts)?.to_json()).into()
        }
        Command::Kappa { graph } => to_value(kappa_upper(&load_graph(&graph)?)).into(),
        Command::Constants { k } => {
            let c = certified_constants(k)?;
            Output { code: if c.capped() { 3 } else { 0 }, doc: c.to_json() }
        }
        Command::Alpha { kernel, delta, resolution, refine } => {
            let w = load_kernel(&kernel)?;
            let a = alpha_lower(
                &w,
                &parse_q(&delta)?,
                AlphaOptions { resolution, refine_levels: refine, budget },
            )?;
            json!({
                "bound": rational(&a.bound),
                "h": a.h.weights().iter().map(fmt_q).collect::<Vec<_>>(),
            })
            .into()
        }
        Command::Peel { kernel, d0 } => to_value(low_degree_peel(&load_kernel(&kernel)?, &parse_q(&d0)?)?.to_json()).into(),
        Command::Sample { kernel, n, seed, out } => {
            let s = sample_w_random(&load_kernel(&kernel)?, n, seed)?;
            let pairs = (n * (n - 1) / 2).max(1);
            let mut doc = json!({
                "vertices": n,
                "edges": s.graph.edge_count(),
                "edge_density": s.graph.edge_count() as f64 / pairs as f64,
                "seed": seed,
            });
            match out {
                Some(path) => {
                    std::fs::write(&path, s.graph.to_text())?;
                    doc["out"] = json!(path.display().to_string());
                }
                None => doc["graph"] = json!(s.graph.to_text()),
            }
            doc.into()
        }
        Command::Converge { template, kernel, graph, schedule, trials, seed, csv, mode } => {
            let source = match (template, kernel) {
                (Some(t), _) => Source::Template(load_template(&t)?),
                (None, Some(k)) => Source::Graphon(load_kernel(&k)?),
                (None, None) => return Err(Error::Domain("either --template or --kernel is required".into())),
            };
            let mode = match mode {
                ModeArg::Homomorphism => CountMode::Homomorphism,
                ModeArg::Injective => CountMode::Injective,
            };
            let h = load_graph(&graph)?;
            let report = convergence_report(&source, &h, &schedule, trials, seed, mode, budget)?;
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(&path).map_err(csv_error)?;
                for row in &report.rows {
                    w.serialize(row).map_err(csv_error)?;
                }
                w.flush()?;
            }
            to_value(&report).into()
        }
        Command::Reproduce { suite: _, only } => {
            let ids: Vec<usize> = if only.is_empty() { (1..=battery::check_count()).collect() } else { only };
            if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > battery::check_count()) {
                return Err(Error::Domain(format!("no check numbered {bad}")));
            }
            let results: Vec<_> = ids
                .into_iter()
                .map(|id| {
                    let r = battery::run_check(id);
                    let _ = writeln!(log, "{}", r.line());
                    r
                })
                .collect();
            let passed = results.iter().filter(|r| r.passed).count();
            let code = if passed == results.len() { 0 } else { 1 };
            let checks: Vec<_> =
                results.iter().map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail })).collect();
            Output { doc: json!({ "passed": passed, "total": checks.len(), "checks": checks }), code }
        }
    };
    Ok(out)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

fn construct(args: ConstructArgs, log: &mut (dyn Write + Send)) -> Result<Output> {
    let (doc, file) = match args.what {
        Construct::Binary { k } => {
            let t = binary_coloring(k)?;
            (to_value(t.to_json()), t.to_json_string())
        }
        Construct::Chromatic { k, q } => {
            let t = chromatic_coloring(k, q)?;
            (to_value(t.to_json()), t.to_json_string())
        }
        Construct::Oddgirth { l, k: None, .. } => {
            let u = odd_girth_kernel(l)?;
            (to_value(u.to_json()), u.to_json_string())
        }
        Construct::Oddgirth { l, k: Some(k), eps } => {
            let eps = parse_q(eps.as_deref().unwrap_or_default())?;
            let colors = odd_girth_family(k, l, &eps)?;
            let valid = ColoringTemplate::new(colors.clone()).is_ok();
            let json_colors: Vec<_> = colors.iter().map(|c| c.to_json()).collect();
            let doc = json!({ "k": k, "colors": json_colors });
            let text = serde_json::to_string_pretty(&doc).expect("serializes");
            let mut doc = doc;
            doc["valid_template"] = json!(valid);
            (doc, text)
        }
        Construct::Permfamily { kernel, l, average } => {
            let mut w = load_kernel(&kernel)?;
            if average {
                w = split_parts(&diagonal_average(&w)?.0, 2)?;
            }
            let t = permutation_family(&w, l)?;
            (to_value(t.to_json()), t.to_json_string())
        }
        Construct::Kc5 { a, b, search, k, parts, denominator, seed } => {
            let h = build_k2a2b_c5(a, b)?;
            let mut doc = json!({
                "vertices": h.vertex_count(),
                "edges": h.edge_count(),
                "graph": h.to_text(),
            });
            if search > 0 {
                doc["search"] = kc5_search(&h, search, k, parts, denominator, seed, log)?;
            }
            (doc, h.to_text())
        }
    };
    if let Some(path) = args.out {
        std::fs::write(path, file)?;
    }
    Ok(doc.into())
}

/// Random templates against `H`; reports the smallest margin seen. Finding
/// no negative margin proves nothing.
#[allow(clippy::too_many_arguments)]
fn kc5_search(
    h: &SimpleGraph,
    trials: usize,
    k: usize,
    parts: usize,
    denominator: u64,
    seed: u64,
    log: &mut (dyn Write + Send),
) -> Result<Value> {
    let mut best: Option<(Q, usize)> = None;
    for i in 0..trials {
        let t = random_template(k, parts, denominator, seed, i as u64)?;
        let margin = commonness_margin(&t, h)?;
        if best.as_ref().is_none_or(|(m, _)| margin < *m) {
            best = Some((margin, i));
        }
    }
    let (margin, index) = best.expect("at least one trial");
    let negative = margin < Q::from_integer(0.into());
    if negative {
        let _ = writeln!(log, "template {index} colors H with fewer monochromatic copies than a random coloring");
    }
    Ok(json!({
        "trials": trials,
        "k": k,
        "parts": parts,
        "seed": seed,
        "least_margin": rational(&margin),
        "least_index": index,
        "negative_found": negative,
    }))
}
