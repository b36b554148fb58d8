//! `skel`: compute, compare, plot and time β-skeletons from the command line.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 unsupported
//! configuration, 4 internal invariant violation.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use betaskel::bench::{bench, BenchConfig};
use betaskel::io::{graph_to_string, load_points, spectrum_to_string, Format};
use betaskel::svg::{render_svg, SvgOptions};
use betaskel::{
    beta_spectrum, minimal_lenses, Algorithm, BuildOptions, Metric, PointSet, SkelError,
    SkeletonGraph, Tolerance, Variant, DEFAULT_EPS,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "skel", version, about = "Lens-based and circle-based beta-skeletons under L1 and L-infinity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one skeleton and write its edge list.
    Build(BuildArgs),
    /// Compute skeletons for an increasing list of betas from one index.
    Spectrum(SpectrumArgs),
    /// Render a skeleton as SVG.
    Plot(PlotArgs),
    /// Time the indexed and brute-force builders on random lattice inputs.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FileFormat {
    Csv,
    Json,
}

impl From<FileFormat> for Format {
    fn from(f: FileFormat) -> Self {
        match f {
            FileFormat::Csv => Format::Csv,
            FileFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    L1,
    Linf,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::L1 => Metric::L1,
            MetricArg::Linf => Metric::LInf,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Lens,
    Circle,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Lens => Variant::LensBased,
            VariantArg::Circle => Variant::CircleBased,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Brute,
    Indexed,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Brute => Algorithm::Brute,
            AlgoArg::Indexed => Algorithm::Indexed,
        }
    }
}

/// Options shared by every subcommand that reads a point set.
#[derive(Args, Debug)]
struct InputArgs {
    /// Point file (CSV or JSON).
    #[arg(long)]
    input: PathBuf,
    /// Input format; guessed from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FileFormat>,
    #[arg(long, value_enum, default_value = "l1")]
    metric: MetricArg,
    #[arg(long, value_enum, default_value = "lens")]
    variant: VariantArg,
    #[arg(long = "algo", value_enum, default_value = "indexed")]
    algo: AlgoArg,
    /// Absolute tolerance for comparisons of derived reals.
    #[arg(long, default_value_t = DEFAULT_EPS)]
    epsilon: f64,
    /// Worker threads for the per-pair decisions.
    #[arg(long, env = "SKEL_THREADS", default_value_t = 1)]
    threads: usize,
}

impl InputArgs {
    fn load(&self) -> Result<PointSet, SkelError> {
        let format = self.format.map(Format::from).unwrap_or_else(|| Format::from_path(&self.input));
        load_points(&self.input, format)
    }

    fn options(&self) -> Result<BuildOptions, SkelError> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(SkelError::Unsupported(format!("epsilon {} must be finite and >= 0", self.epsilon)));
        }
        Ok(BuildOptions {
            threads: self.threads.max(1),
            tol: Tolerance(self.epsilon),
            ..BuildOptions::default()
        })
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Edge-list destination; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Edge-list format; guessed from the output extension, JSON by default.
    #[arg(long, value_enum)]
    output_format: Option<FileFormat>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        match (self.output_format, &self.output) {
            (Some(f), _) => f.into(),
            (None, Some(p)) => Format::from_path(p),
            (None, None) => Format::Json,
        }
    }

    fn emit(&self, text: &str) -> Result<(), SkelError> {
        match &self.output {
            Some(path) => fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

#[derive(Args, Debug)]
struct SvgArgs {
    /// Canvas size in pixels.
    #[arg(long, default_value_t = 800.0)]
    width: f64,
    #[arg(long, default_value_t = 3.0)]
    point_radius: f64,
    /// Projection axes as `i,j`; required for more than three dimensions.
    #[arg(long, value_parser = parse_axes)]
    axes: Option<(usize, usize)>,
    /// Draw the first minimal lens of the pair with these ids, as `a,b`.
    #[arg(long, value_parser = parse_axes)]
    overlay: Option<(usize, usize)>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    beta: f64,
    #[command(flatten)]
    output: OutputArgs,
    /// Also write an SVG rendering here.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    svg_opts: SvgArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Strictly increasing comma-separated list.
    #[arg(long, value_delimiter = ',', required = true)]
    betas: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    beta: f64,
    /// SVG destination.
    #[arg(long)]
    svg: PathBuf,
    #[command(flatten)]
    svg_opts: SvgArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated point counts.
    #[arg(long, value_delimiter = ',', default_value = "512,1024,2048")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, value_enum, default_value = "linf")]
    metric: MetricArg,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, value_enum, default_value = "lens")]
    variant: VariantArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest n for which the brute-force builder is timed.
    #[arg(long, default_value_t = 256)]
    brute_cutoff: usize,
    /// Timing rounds per size; the fastest sample is reported.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, env = "SKEL_THREADS", default_value_t = 1)]
    threads: usize,
    /// Also write the report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_axes(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|_| format!("`{a}` is not an index"))?,
            b.parse().map_err(|_| format!("`{b}` is not an index"))?,
        )),
        _ => Err(format!("expected two comma-separated indices, got `{s}`")),
    }
}

fn exit_code(err: &SkelError) -> u8 {
    match err {
        SkelError::Unsupported(_) | SkelError::MetricMismatch => 3,
        SkelError::Invariant(_) => 4,
        _ => 2,
    }
}

fn build_graph(input: &InputArgs, ps: &PointSet, beta: f64) -> Result<SkeletonGraph, SkelError> {
    betaskel::skeleton::skeleton(
        ps,
        beta,
        input.metric.into(),
        input.variant.into(),
        input.algo.into(),
        &input.options()?,
    )
}

fn svg_document(
    input: &InputArgs,
    ps: &PointSet,
    g: &SkeletonGraph,
    opts: &SvgArgs,
) -> Result<String, SkelError> {
    let overlay = match opts.overlay {
        Some((a, b)) => {
            let find = |id: usize| {
                ps.points()
                    .iter()
                    .find(|p| p.id == id)
                    .ok_or_else(|| SkelError::Unsupported(format!("no point with id {id}")))
            };
            let lenses = minimal_lenses(
                find(a)?,
                find(b)?,
                g.params.beta,
                input.metric.into(),
                input.variant.into(),
                input.options()?.tol,
            )?;
            lenses.into_iter().next()
        }
        None => None,
    };
    render_svg(
        ps,
        g,
        &SvgOptions {
            size: opts.width,
            point_radius: opts.point_radius,
            axes: opts.axes,
            overlay,
        },
    )
}

fn run(cli: Cli) -> Result<(), SkelError> {
    match cli.command {
        Command::Build(args) => {
            let ps = args.input.load()?;
            let g = build_graph(&args.input, &ps, args.beta)?;
            log::info!("{} points, {} edges", ps.len(), g.edge_count());
            args.output.emit(&graph_to_string(&g, args.output.format())?)?;
            if let Some(path) = &args.svg {
                fs::write(path, svg_document(&args.input, &ps, &g, &args.svg_opts)?)?;
            }
        }
        Command::Spectrum(args) => {
            let ps = args.input.load()?;
            let graphs = beta_spectrum(
                &ps,
                &args.betas,
                args.input.metric.into(),
                args.input.variant.into(),
                args.input.algo.into(),
                &args.input.options()?,
            )?;
            args.output.emit(&spectrum_to_string(&graphs, args.output.format())?)?;
        }
        Command::Plot(args) => {
            let ps = args.input.load()?;
            let g = build_graph(&args.input, &ps, args.beta)?;
            write_file(&args.svg, &svg_document(&args.input, &ps, &g, &args.svg_opts)?)?;
        }
        Command::Bench(args) => {
            let cfg = BenchConfig {
                sizes: args.sizes,
                dim: args.dim,
                metric: args.metric.into(),
                beta: args.beta,
                variant: args.variant.into(),
                seed: args.seed,
                brute_cutoff: args.brute_cutoff,
                repeats: args.repeats,
                opts: BuildOptions {
                    threads: args.threads.max(1),
                    ..BuildOptions::default()
                },
            };
            let report = bench(&cfg)?;
            print!("{report}");
            if let Some(path) = &args.json {
                write_file(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), SkelError> {
    fs::write(path, text)?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
