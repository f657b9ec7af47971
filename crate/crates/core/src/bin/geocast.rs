use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fermat_geocast::energy::{route_energy, RadioParams};
use fermat_geocast::experiment::{
    self, emit_csv, format_sig6, parse_config, parse_point, render_route_svg, render_svg,
    run_scenarios, write_sweep_csv, write_trace_csv, ExperimentConfig,
};
use fermat_geocast::forwarding::{route, Forwarding, GreedyRule, RouteOptions, Scheme};
use fermat_geocast::geometry::{
    minima_fermat_point, torricelli_triangle, weiszfeld_fermat_point, AnchorSet, FermatResult,
    GeometryError, SearchBounds,
};
use fermat_geocast::topology::{Arena, Network};
use fermat_geocast::Execution;

#[derive(Parser)]
#[command(
    name = "geocast",
    version,
    about = "Fermat-point geocast forwarding simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate the Fermat point of a source and destinations with every method.
    Fermat(FermatArgs),
    /// Route one packet between two nodes and print the hop trace.
    Route(RouteArgs),
    /// Run a configured experiment and print one metrics row per (seed, scheme).
    Simulate(SimulateArgs),
    /// Repeat an experiment for 2..=N regions and print per-scheme means.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct FermatArgs {
    /// Source point as `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    source: Option<String>,
    /// Destination point as `x,y`; repeat for each region.
    #[arg(long = "dest", allow_hyphen_values = true)]
    dests: Vec<String>,
    /// File with one `x,y` per line, source first.
    #[arg(long, conflicts_with_all = ["source", "dests"])]
    anchors: Option<PathBuf>,
    /// Grid resolution of the minima scan, meters.
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, default_value_t = 1000)]
    max_iterations: usize,
}

#[derive(Args)]
struct RouteArgs {
    /// Forwarding rule or scheme name (greedy, imin, global_minima, ...).
    #[arg(long, default_value = "imin")]
    scheme: String,
    #[arg(long)]
    source: usize,
    #[arg(long)]
    destination: usize,
    /// Load nodes from an `id,x,y` CSV instead of deploying them.
    #[arg(long)]
    topology: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    nodes: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Arena as `WIDTHxHEIGHT`.
    #[arg(long, default_value = "1800x1100")]
    arena: String,
    #[arg(long, default_value_t = 150.0)]
    radius: f64,
    /// Defaults to ten transitions per node.
    #[arg(long)]
    hop_limit: Option<usize>,
    /// Greedy neighbor rule: mfr or nearest.
    #[arg(long, default_value = "mfr")]
    rule: String,
    #[arg(long, default_value_t = 1000)]
    packet_bits: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for one `seed_<n>.svg` render per seed.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct SweepArgs {
    config: PathBuf,
    #[arg(long, default_value_t = 5)]
    max_regions: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| runtime(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn exec(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn read_config(path: &Path) -> Result<ExperimentConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn fermat(args: FermatArgs) -> Result<(), Failure> {
    let mut points = Vec::new();
    if let Some(path) = &args.anchors {
        let text =
            fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        for line in text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
        {
            if !line.is_empty() {
                points.push(parse_point(line).map_err(usage)?);
            }
        }
    } else {
        let source = args
            .source
            .as_deref()
            .ok_or_else(|| usage("--source is required"))?;
        points.push(parse_point(source).map_err(usage)?);
        for d in &args.dests {
            points.push(parse_point(d).map_err(usage)?);
        }
    }
    let Some((&source, dests)) = points.split_first() else {
        return Err(usage("no anchors given"));
    };
    let anchors = AnchorSet::new(source, dests.to_vec()).map_err(usage)?;

    let mut results: Vec<(FermatResult, &str)> = Vec::new();
    let bounds = SearchBounds::enclosing(&anchors, args.step);
    results.push((minima_fermat_point(&anchors, &bounds).map_err(usage)?, ""));
    match weiszfeld_fermat_point(&anchors, args.tolerance, args.max_iterations) {
        Ok(r) => results.push((r, "")),
        Err(e @ GeometryError::NoConvergence { .. }) => eprintln!("weiszfeld: {e}"),
        Err(e) => return Err(usage(e)),
    }
    if let [b, c] = anchors.destinations() {
        match torricelli_triangle(source, *b, *c) {
            Ok(r) => results.push((r, "")),
            Err(GeometryError::DegenerateTriangle { fallback }) => {
                results.push((fallback, "degenerate"))
            }
            Err(e) => return Err(usage(e)),
        }
    }

    let mut out = csv::Writer::from_writer(io::stdout().lock());
    let write = |out: &mut csv::Writer<_>| -> csv::Result<()> {
        out.write_record(["method", "x", "y", "total_distance_m", "note"])?;
        for (r, note) in &results {
            out.write_record([
                r.method.as_str(),
                &r.point.x.to_string(),
                &r.point.y.to_string(),
                &format_sig6(r.total_distance),
                note,
            ])?;
        }
        out.flush()?;
        Ok(())
    };
    write(&mut out).map_err(runtime)
}

fn parse_arena(s: &str) -> Result<Arena, Failure> {
    let (w, h) = s
        .split_once(['x', 'X', ','])
        .ok_or_else(|| usage(format!("arena must be WIDTHxHEIGHT, got `{s}`")))?;
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("bad arena `{s}`")))
    };
    Arena::new(num(w)?, num(h)?).map_err(usage)
}

fn route_cmd(args: RouteArgs) -> Result<(), Failure> {
    let forwarding = match args.scheme.parse::<Forwarding>() {
        Ok(f) => f,
        Err(_) => args.scheme.parse::<Scheme>().map_err(usage)?.forwarding(),
    };
    let rule: GreedyRule = args.rule.parse().map_err(usage)?;
    let arena = parse_arena(&args.arena)?;
    let network = match &args.topology {
        Some(path) => {
            let file = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let nodes = Network::read_csv_nodes(file).map_err(usage)?;
            Network::new(nodes, args.radius, arena).map_err(usage)?
        }
        None => Network::random(args.nodes, arena, args.radius, args.seed).map_err(usage)?,
    };
    let radio = RadioParams::default().with_packet_bits(args.packet_bits);
    radio.validate().map_err(usage)?;
    let options = RouteOptions {
        hop_limit: args
            .hop_limit
            .unwrap_or(RouteOptions::for_network(&network).hop_limit),
        rule,
    };
    let trace = route(
        &network,
        args.source,
        args.destination,
        forwarding,
        &options,
    )
    .map_err(usage)?;

    write_trace_csv(&network, [&trace], output(args.out.as_deref())?).map_err(runtime)?;
    if let Some(path) = &args.svg {
        let file = File::create(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        render_route_svg(&network, &[(forwarding, &trace)], BufWriter::new(file))
            .map_err(runtime)?;
    }
    let energy = route_energy(&radio, &trace);
    eprintln!(
        "status={} hops={} distance_m={} energy_j={}",
        trace.status,
        trace.transitions(),
        format_sig6(trace.total_distance()),
        format_sig6(energy.total)
    );
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let config = read_config(&args.config)?;
    let scenarios = run_scenarios(&config, exec(args.sequential)).map_err(usage)?;
    let rows: Vec<_> = scenarios
        .iter()
        .flat_map(|s| s.rows(config.regions.len()))
        .collect();
    emit_csv(&rows, output(args.out.as_deref())?).map_err(runtime)?;

    if let Some(dir) = &args.svg {
        fs::create_dir_all(dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))?;
        for s in &scenarios {
            let path = dir.join(format!("seed_{}.svg", s.seed));
            let file =
                File::create(&path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
            let traces: Vec<_> = s.traces().cloned().collect();
            render_svg(&s.network, &traces, BufWriter::new(file)).map_err(runtime)?;
        }
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let config = read_config(&args.config)?;
    let rows =
        experiment::sweep(&config, args.max_regions, exec(args.sequential)).map_err(usage)?;
    write_sweep_csv(&rows, output(args.out.as_deref())?).map_err(runtime)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Fermat(a) => fermat(a),
        Command::Route(a) => route_cmd(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
