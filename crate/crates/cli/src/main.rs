use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sqchroma::coloring::{color_square_convex, verify_coloring, ColorOptions, Coloring};
use sqchroma::experiment::{format_summary, run_experiment, summarize, ExperimentConfig, Family, CSV_HEADER};
use sqchroma::format::{parse_bipartite, parse_general, write_bipartite, write_general};
use sqchroma::generators::{self, GenSpec, Generated, Girth7Kind};
use sqchroma::oracle::{self, DEFAULT_BUDGET};
use sqchroma::reduction::split_reduction;
use sqchroma::structure::analyze_square_cycles;
use sqchroma::{recognize_biconvex, recognize_convex, square, BipartiteGraph, SimpleGraph, VertexRef};

/// Distance-2 colorings of convex bipartite graphs.
#[derive(Parser)]
#[command(name = "sqchroma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide convexity and biconvexity, printing the layout.
    Recognize { graph: PathBuf },
    /// Color the square of a convex bipartite graph.
    Color {
        graph: PathBuf,
        #[arg(long)]
        json: bool,
        /// Log every pivot, partner and swap event.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Exact chromatic and clique numbers (of the square, for bipartite input).
    Exact {
        graph: PathBuf,
        /// For general input, use the square instead of the graph itself.
        #[arg(long)]
        square: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// List the induced cycles (of the square, for bipartite input).
    Holes {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        min: usize,
        #[arg(long)]
        max: Option<usize>,
        /// For general input, use the square instead of the graph itself.
        #[arg(long)]
        square: bool,
    },
    /// Check the cycle-structure theorem on every hole of the square.
    Structure {
        graph: PathBuf,
        /// Print only pass/fail counts.
        #[arg(long)]
        summary: bool,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output", global = true)]
        output: Option<PathBuf>,
    },
    /// Split a general graph G into the bipartite graph B_G.
    Reduce {
        graph: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run a seeded batch and stream one record per trial.
    Experiment(ExperimentArgs),
    /// Check a coloring of the square against a graph.
    Verify { graph: PathBuf, coloring: PathBuf },
}

#[derive(Args, Clone, Copy)]
struct BudgetArg {
    /// Search-node budget for the exact oracles.
    #[arg(long)]
    budget: Option<u64>,
}

impl BudgetArg {
    fn resolve(self) -> Result<u64> {
        if let Some(b) = self.budget {
            return Ok(b);
        }
        match std::env::var("SQCHROMA_BUDGET") {
            Ok(v) => v.trim().parse().with_context(|| format!("SQCHROMA_BUDGET=`{v}` is not an integer")),
            Err(_) => Ok(DEFAULT_BUDGET),
        }
    }
}

#[derive(Subcommand)]
enum GenFamily {
    #[command(name = "random_convex")]
    RandomConvex {
        #[arg(long)]
        n_a: usize,
        #[arg(long)]
        n_b: usize,
        #[arg(long)]
        max_len: usize,
    },
    #[command(name = "random_biconvex")]
    RandomBiconvex {
        #[arg(long)]
        n_a: usize,
        #[arg(long)]
        n_b: usize,
    },
    #[command(name = "lower_bound_H")]
    LowerBoundH {
        #[arg(long)]
        q: usize,
    },
    /// `K_{n_a,n_b}`; `--n` sets both sides.
    #[command(name = "complete")]
    Complete {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_a: Option<usize>,
        #[arg(long)]
        n_b: Option<usize>,
    },
    /// A figure graph: not_perfect, antihole, biconvex or convex_c4free.
    #[command(name = "named")]
    Named { name: String },
    /// A general graph of girth at least 7.
    #[command(name = "girth7")]
    Girth7 {
        #[arg(long, value_enum)]
        kind: GirthKindArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        branching: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
#[value(rename_all = "snake_case")]
enum GirthKindArg {
    LongCycle,
    Tree,
    SubdividedRandom,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum FamilyArg {
    #[value(name = "random_convex")]
    RandomConvex,
    #[value(name = "random_biconvex")]
    RandomBiconvex,
    #[value(name = "lower_bound_H")]
    LowerBoundH,
    #[value(name = "complete")]
    Complete,
    #[value(name = "named")]
    Named,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    with_exact: bool,
    #[command(flatten)]
    budget: BudgetArg,
    /// Emit JSON lines instead of CSV.
    #[arg(long)]
    json: bool,
    /// Largest `n_a` for the random families.
    #[arg(long, default_value_t = 10)]
    max_n_a: usize,
    /// Largest `n_b` for the random families.
    #[arg(long, default_value_t = 10)]
    max_n_b: usize,
    /// Longest interval for `random_convex`.
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    /// Values of `q` for `lower_bound_H`.
    #[arg(long, value_delimiter = ',')]
    q: Vec<usize>,
    /// Values of `n` for `complete`.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Figure names for `named`.
    #[arg(long, value_delimiter = ',')]
    name: Vec<String>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Do not print the summary table to stderr.
    #[arg(long)]
    no_summary: bool,
}

/// Domain outcome: printed, then exit code 1.
struct Failure(String);

type Outcome = std::result::Result<String, Failure>;

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => io::stdout().write_all(text.as_bytes()).context("writing standard output"),
    }
}

enum Input {
    Bipartite(BipartiteGraph),
    General(SimpleGraph),
}

fn is_general(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| l.starts_with("p ") || l.starts_with("p\t"))
        .is_some_and(|l| l.split_whitespace().nth(1) == Some("gen"))
}

fn load_any(path: &Path) -> Result<Input> {
    let text = read_input(path)?;
    if is_general(&text) {
        Ok(Input::General(parse_general(&text)?))
    } else {
        Ok(Input::Bipartite(parse_bipartite(&text)?))
    }
}

fn load_bipartite(path: &Path) -> Result<BipartiteGraph> {
    Ok(parse_bipartite(&read_input(path)?)?)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn label(g: &BipartiteGraph, v: usize) -> String {
    g.vertex_ref(v).to_string()
}

fn recognize(path: &Path) -> Result<Outcome> {
    let g = load_bipartite(path)?;
    let layout = match recognize_convex(&g) {
        Ok(l) => l,
        Err(w) => {
            let (p, q, r) = w.gap;
            return Ok(Ok(format!(
                "NOT CONVEX\nwitness a{} sees b{p} and b{r} but not b{q}\nattempted b order: {}\n",
                w.violating_a,
                join(w.b_order_attempted.iter().map(|b| format!("b{b}")))
            )));
        }
    };
    let bi = recognize_biconvex(&g);
    let mut out = String::from(if bi.is_some() { "BICONVEX\n" } else { "CONVEX\n" });
    out += &format!("b order: {}\n", join(layout.b_order().iter().map(|b| format!("b{b}"))));
    out += &format!("a order: {}\n", join(layout.a_order().iter().map(|a| format!("a{a}"))));
    if let Some(bi) = &bi {
        out += &format!("a order (B intervals): {}\n", join(bi.a_order_prime.iter().map(|a| format!("a{a}"))));
    }
    for a in 0..g.n_a() {
        match layout.interval(a) {
            Some((l, r)) => out += &format!("a{a} [{l}, {r}]\n"),
            None => out += &format!("a{a} isolated\n"),
        }
    }
    Ok(Ok(out))
}

fn color(path: &Path, json_out: bool, trace: bool, budget: u64) -> Result<Outcome> {
    let g = load_bipartite(path)?;
    let Ok(layout) = recognize_convex(&g) else {
        return Ok(Err(Failure("NOT CONVEX".into())));
    };
    let opts = ColorOptions { trace, budget, ..ColorOptions::default() };
    let report = color_square_convex(&g, &layout, &opts)?;
    if !verify_coloring(&square(&g), &report.coloring) {
        bail!("internal error: the computed coloring failed verification");
    }
    let c = &report.coloring;
    if json_out {
        let vertices: Vec<_> = (0..g.num_vertices())
            .map(|v| json!({ "vertex": label(&g, v), "color": c.colors[v] }))
            .collect();
        let mut doc = json!({
            "palette": c.palette,
            "omega": report.omega,
            "bound": report.bound,
            "vertices": vertices,
            "stats": report.stats,
        });
        if trace {
            doc["trace"] = serde_json::to_value(&report.trace)?;
        }
        return Ok(Ok(format!("{doc}\n")));
    }
    if trace {
        let mut err = io::stderr().lock();
        for e in &report.trace {
            writeln!(err, "trace {}", serde_json::to_string(e)?)?;
        }
    }
    let mut out = format!("palette={} omega={} bound={}\n", c.palette, report.omega, report.bound);
    for v in 0..g.num_vertices() {
        out += &format!("v {} {}\n", label(&g, v), c.colors[v]);
    }
    Ok(Ok(out))
}

/// The graph the `exact` and `holes` commands work on, with vertex labels.
fn target_graph(input: Input, use_square: bool) -> (SimpleGraph, Vec<String>) {
    match input {
        Input::Bipartite(g) => {
            let labels = (0..g.num_vertices()).map(|v| label(&g, v)).collect();
            (square(&g), labels)
        }
        Input::General(h) => {
            let labels = (0..h.n()).map(|v| v.to_string()).collect();
            let h = if use_square { sqchroma::reduction::square_of(&h) } else { h };
            (h, labels)
        }
    }
}

fn exact(path: &Path, use_square: bool, json_out: bool, budget: u64) -> Result<Outcome> {
    let (h, _) = target_graph(load_any(path)?, use_square);
    let s = match oracle::exact_stats(&h, budget) {
        Ok(s) => s,
        Err(e @ sqchroma::Error::BudgetExceeded { .. }) => return Ok(Err(Failure(e.to_string()))),
        Err(e) => return Err(e.into()),
    };
    if json_out {
        Ok(Ok(format!("{}\n", serde_json::to_string(&s)?)))
    } else {
        Ok(Ok(format!("chi={} omega={}\n", s.chi, s.omega)))
    }
}

fn holes(path: &Path, min: usize, max: Option<usize>, use_square: bool) -> Result<Outcome> {
    let (h, labels) = target_graph(load_any(path)?, use_square);
    let cycles = oracle::find_induced_cycles(&h, min.max(3), max.unwrap_or(h.n()));
    let mut out = String::new();
    for c in &cycles {
        out += &format!("{} {}\n", c.len(), join(c.iter().map(|&v| &labels[v])));
    }
    out += &format!("total={}\n", cycles.len());
    Ok(Ok(out))
}

fn structure(path: &Path, summary_only: bool, max_len: Option<usize>, json_out: bool) -> Result<Outcome> {
    let g = load_bipartite(path)?;
    let Ok(layout) = recognize_convex(&g) else {
        return Ok(Err(Failure("NOT CONVEX".into())));
    };
    let (reports, summary) = analyze_square_cycles(&g, &layout, max_len.unwrap_or(g.num_vertices()));
    let failed = summary.cycles - summary.passed;
    if json_out {
        let doc = if summary_only { json!({ "summary": summary }) } else { json!({ "summary": summary, "reports": reports }) };
        let text = format!("{doc}\n");
        return Ok(if failed == 0 { Ok(text) } else { Err(Failure(text)) });
    }
    let mut out = String::new();
    if !summary_only {
        for r in &reports {
            let names = |bs: &[usize]| join(bs.iter().map(|b| format!("b{b}")));
            out += &format!("cycle {}\n", join(&r.cycle));
            out += &format!("  a-path {}\n", join(r.a_path.iter().map(|a| format!("a{a}"))));
            if let (Some(lo), Some(hi)) = (r.b_end_low, r.b_end_high) {
                out += &format!("  ends b{lo} b{hi}\n");
            }
            out += &format!("  private {}\n", names(&r.private_bs));
            if let Some(a) = r.common_a {
                out += &format!("  common a{a}\n");
            }
            out += &format!(
                "  p1={} p2_private={} p2_a_order={} p3={} gap_empty={} partite_count={}\n",
                r.ok.p1, r.ok.p2_private, r.ok.p2_a_order, r.ok.p3, r.ok.gap_empty, r.ok.partite_count
            );
        }
        for f in &summary.failures {
            out += &format!("FAIL {f}\n");
        }
    }
    out += &format!(
        "cycles={} passed={} failed={} lengths={} spectrum_contiguous={}\n",
        summary.cycles,
        summary.passed,
        failed,
        join(&summary.lengths),
        summary.spectrum_contiguous
    );
    Ok(if failed == 0 { Ok(out) } else { Err(Failure(out)) })
}

fn gen(family: &GenFamily, seed: u64) -> Result<String> {
    let spec = match family {
        &GenFamily::RandomConvex { n_a, n_b, max_len } => GenSpec::RandomConvex { n_a, n_b, max_len, seed },
        &GenFamily::RandomBiconvex { n_a, n_b } => GenSpec::RandomBiconvex { n_a, n_b, seed },
        &GenFamily::LowerBoundH { q } => GenSpec::LowerBoundH { q },
        &GenFamily::Complete { n, n_a, n_b } => match (n, n_a, n_b) {
            (Some(n), None, None) => GenSpec::CompleteBipartite { n_a: n, n_b: n },
            (None, Some(n_a), Some(n_b)) => GenSpec::CompleteBipartite { n_a, n_b },
            _ => bail!("complete takes either --n or both --n-a and --n-b"),
        },
        GenFamily::Named { name } => GenSpec::NamedFigure { name: name.clone() },
        &GenFamily::Girth7 { kind, n, branching, depth, p } => {
            let need = |v: Option<usize>, flag: &str| v.with_context(|| format!("girth7 needs {flag}"));
            let kind = match kind {
                GirthKindArg::LongCycle => Girth7Kind::LongCycle { n: need(n, "--n")? },
                GirthKindArg::Tree => Girth7Kind::Tree { branching: need(branching, "--branching")?, depth: need(depth, "--depth")? },
                GirthKindArg::SubdividedRandom => Girth7Kind::SubdividedRandom { n: need(n, "--n")?, p: p.context("girth7 needs --p")? },
            };
            GenSpec::Girth7 { kind, seed }
        }
    };
    Ok(match generators::generate(&spec)? {
        Generated::Bipartite(g) => write_bipartite(&g),
        Generated::General(h) => write_general(&h),
    })
}

fn experiment(args: &ExperimentArgs) -> Result<Outcome> {
    let family = match args.family {
        FamilyArg::RandomConvex => Family::RandomConvex { max_n_a: args.max_n_a, max_n_b: args.max_n_b, max_len: args.max_len },
        FamilyArg::RandomBiconvex => Family::RandomBiconvex { max_n_a: args.max_n_a, max_n_b: args.max_n_b },
        FamilyArg::LowerBoundH => Family::LowerBoundH { qs: args.q.clone() },
        FamilyArg::Complete => Family::Complete { ns: args.n.clone() },
        FamilyArg::Named => Family::Named { names: args.name.clone() },
    };
    if args.family == FamilyArg::RandomConvex && args.max_len == 0 {
        bail!("--max-len must be at least 1");
    }
    let cfg = ExperimentConfig {
        family,
        trials: args.trials,
        seed: args.seed,
        with_exact: args.with_exact,
        budget: args.budget.resolve()?,
    };
    let records = run_experiment(&cfg);
    let mut out = String::new();
    if args.json {
        for r in &records {
            out += &serde_json::to_string(r)?;
            out.push('\n');
        }
    } else {
        out += CSV_HEADER;
        out.push('\n');
        for r in &records {
            out += &sqchroma::experiment::csv_row(r);
            out.push('\n');
        }
    }
    write_output(args.output.as_deref(), &out)?;
    if !args.no_summary {
        eprint!("{}", format_summary(&summarize(&records)));
    }
    Ok(Ok(String::new()))
}

/// Reads `v <side><index> <color>` lines; other lines are ignored.
fn parse_coloring(g: &BipartiteGraph, text: &str) -> Result<Coloring> {
    let mut colors = vec![0usize; g.num_vertices()];
    for (i, line) in text.lines().enumerate() {
        let mut tok = line.split_whitespace();
        if tok.next() != Some("v") {
            continue;
        }
        let (Some(v), Some(c), None) = (tok.next(), tok.next(), tok.next()) else {
            bail!("line {}: expected `v <vertex> <color>`", i + 1);
        };
        let v: VertexRef = v.parse().map_err(|e: String| anyhow::anyhow!("line {}: {e}", i + 1))?;
        let c: usize = c.parse().with_context(|| format!("line {}: bad color `{c}`", i + 1))?;
        if v.index >= g.side_len(v.side) {
            bail!("line {}: vertex {v} is out of range", i + 1);
        }
        colors[g.global_index(v)] = c;
    }
    let palette = colors.iter().copied().max().unwrap_or(0);
    Ok(Coloring { colors, palette })
}

fn verify(graph: &Path, coloring: &Path) -> Result<Outcome> {
    let g = load_bipartite(graph)?;
    let c = parse_coloring(&g, &read_input(coloring)?)?;
    let sq = square(&g);
    if let Some(v) = (0..sq.n()).find(|&v| c.colors[v] == 0) {
        return Ok(Err(Failure(format!("INVALID: {} is uncolored", label(&g, v)))));
    }
    if let Some((u, v)) = sq.edges().find(|&(u, v)| c.colors[u] == c.colors[v]) {
        return Ok(Err(Failure(format!(
            "INVALID: {} and {} are within distance 2 and share color {}",
            label(&g, u),
            label(&g, v),
            c.colors[u]
        ))));
    }
    let distinct: std::collections::BTreeSet<_> = c.colors.iter().collect();
    Ok(Ok(format!("VALID colors={}\n", distinct.len())))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Recognize { graph } => recognize(&graph),
        Command::Color { graph, json, trace, budget } => color(&graph, json, trace, budget.resolve()?),
        Command::Exact { graph, square, json, budget } => exact(&graph, square, json, budget.resolve()?),
        Command::Holes { graph, min, max, square } => holes(&graph, min, max, square),
        Command::Structure { graph, summary, max_len, json } => structure(&graph, summary, max_len, json),
        Command::Gen { family, seed, output } => {
            write_output(output.as_deref(), &gen(&family, seed)?)?;
            Ok(Ok(String::new()))
        }
        Command::Reduce { graph, output } => {
            let h = parse_general(&read_input(&graph)?)?;
            let (b_g, _) = split_reduction(&h);
            write_output(output.as_deref(), &write_bipartite(&b_g))?;
            Ok(Ok(String::new()))
        }
        Command::Experiment(args) => experiment(&args),
        Command::Verify { graph, coloring } => verify(&graph, &coloring),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Err(Failure(text))) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
