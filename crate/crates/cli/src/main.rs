use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use shiftkrylov::cost_model::{self, CostParams, JNew, SweepBase, SweepVar};
use shiftkrylov::{Method, ShiftConvention};
use shiftkrylov_cli::{
    fetch_qcd, mk_sum_grid, parse_shift_list, product_grid, run_diagnostics, run_marginal, run_solve, run_sweep, write_csv, FetchOptions,
    PrecondChoice, ProblemSource, RunConfig,
};

#[derive(Parser)]
#[command(name = "shiftkrylov", version, about = "Shifted GMRES and recycled shifted GMRES solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one shifted family (or a sequence of matrices) and print a JSON report.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a grid of (m, k) settings and print CSV.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated method names.
        #[arg(long, default_value = "sgmres,srgmres,seq-gmres,seq-rgmres")]
        methods: String,
        #[arg(long, value_delimiter = ',')]
        m_list: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        k_list: Vec<usize>,
        /// Hold m + k fixed and vary k over --k-list.
        #[arg(long)]
        mk_sum: Option<usize>,
        /// Add shifts one at a time and report the matvec increase.
        #[arg(long)]
        marginal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the FLOP overhead model.
    Cost(CostArgs),
    /// Per-projection residual decomposition check and residual histories as CSV.
    Diagnose {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Download the small QCD test set in Matrix Market form.
    FetchQcd {
        #[arg(long, default_value = "data/qcd")]
        dir: PathBuf,
        /// Comma-separated matrix names; defaults to the seven small matrices.
        #[arg(long, value_delimiter = ',')]
        names: Vec<String>,
        #[arg(long, default_value = shiftkrylov_cli::fetch::DEFAULT_BASE_URL)]
        base_url: String,
        /// Critical hopping parameter, used when the file header has none.
        #[arg(long)]
        kappa_c: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Relative,
    Absolute,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "sgmres", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = 30)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value_t = 500)]
    max_cycles: usize,
    /// Comma-separated complex shifts, e.g. `0.01,0.5+0.1i,-2i`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    shifts: String,
    /// Matrix Market file; repeat for a sequence.
    #[arg(long, conflicts_with = "synthetic")]
    matrix: Vec<PathBuf>,
    /// Critical kappa for `(1/κ_c + 1e-3)I − D`; overrides metadata sidecars.
    #[arg(long)]
    kappa_c: Option<f64>,
    /// Use the matrix files as given.
    #[arg(long)]
    raw: bool,
    /// Convection-diffusion test problem `nx,peclet,rotation`.
    #[arg(long)]
    synthetic: Option<String>,
    #[arg(long, value_enum, default_value = "ilu0")]
    precond: PrecondChoice,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "relative")]
    shift_convention: ConventionArg,
    #[arg(long)]
    parallel_shift_projections: bool,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// Real right-hand sides.
    #[arg(long)]
    real_rhs: bool,
}

#[derive(Args)]
struct CostArgs {
    #[arg(long, default_value_t = 40.0)]
    m: f64,
    /// Defaults to m/2.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    l: f64,
    #[arg(long, default_value_t = 1e7)]
    n: f64,
    /// A number, or `model` for the iteration-count model.
    #[arg(long, default_value = "model")]
    j_new: String,
    /// Sweep one of l, n, m over --values and print CSV.
    #[arg(long, value_parser = ["l", "n", "m"])]
    sweep: Option<String>,
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: shiftkrylov::Error| e.to_string())
}

fn parse_synthetic(s: &str) -> Result<ProblemSource> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [nx, pe, rot] = parts[..] else {
        bail!("--synthetic expects nx,peclet,rotation, got {s:?}");
    };
    Ok(ProblemSource::Synthetic { nx: nx.parse().context("nx")?, peclet: pe.parse().context("peclet")?, rotation: rot.parse().context("rotation")? })
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let problem = if !self.matrix.is_empty() {
            ProblemSource::Matrix { paths: self.matrix.clone(), kappa_c: self.kappa_c, raw: self.raw }
        } else {
            parse_synthetic(self.synthetic.as_deref().unwrap_or("20,0.5,0.1"))?
        };
        let cfg = RunConfig {
            method: self.method,
            m: self.m,
            k: self.k,
            eps: self.eps,
            max_cycles: self.max_cycles,
            shifts: parse_shift_list(&self.shifts)?,
            problem,
            precond: self.precond,
            seed: self.seed,
            shift_convention: match self.shift_convention {
                ConventionArg::Relative => ShiftConvention::Relative,
                ConventionArg::Absolute => ShiftConvention::Absolute,
            },
            parallel: self.parallel_shift_projections,
            repeats: self.repeats,
            complex_rhs: !self.real_rhs,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_j_new(s: &str) -> Result<JNew> {
    if s == "model" {
        return Ok(JNew::Model);
    }
    Ok(JNew::Fixed(s.parse().with_context(|| format!("--j-new expects a number or `model`, got {s:?}"))?))
}

fn cost(args: &CostArgs) -> Result<()> {
    let j = parse_j_new(&args.j_new)?;
    if let Some(var) = &args.sweep {
        if args.values.is_empty() {
            bail!("--sweep needs --values");
        }
        let var = match var.as_str() {
            "l" => SweepVar::L,
            "n" => SweepVar::N,
            _ => SweepVar::M,
        };
        let rows = cost_model::sweep(var, &args.values, SweepBase { l: args.l, n: args.n, m: args.m }, j)?;
        print!("{}", cost_model::sweep_csv(&rows));
        return Ok(());
    }
    let j_new = match j {
        JNew::Model => cost_model::j_new_model(args.n, args.m),
        JNew::Fixed(v) => v,
    };
    let p = CostParams::new(args.m, args.k.unwrap_or(args.m / 2.0), args.l, args.n, j_new)?;
    let (a, b) = cost_model::d_srgmres_split(&p);
    let doc = serde_json::json!({
        "m": p.m, "k": p.k, "l": p.l, "n": p.n, "j_new": p.j_new,
        "d_sgmres": cost_model::d_sgmres(&p),
        "d_srgmres": cost_model::d_srgmres(&p),
        "d_srgmres_per_iteration": a,
        "d_srgmres_one_time": b,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { run, out } => {
            let res = run_solve(&run.config()?)?;
            let mut w = sink(&out)?;
            serde_json::to_writer_pretty(&mut w, &res)?;
            writeln!(w)?;
            Ok(if res.report.converged { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Sweep { run, methods, m_list, k_list, mk_sum, marginal, out } => {
            let base = run.config()?;
            let methods = methods.split(',').map(|s| s.trim().parse::<Method>()).collect::<Result<Vec<_>, _>>()?;
            let w = sink(&out)?;
            if marginal {
                write_csv(&run_marginal(&base, &methods)?, w)?;
                return Ok(ExitCode::SUCCESS);
            }
            let ks = if k_list.is_empty() { vec![base.k] } else { k_list };
            let grid = match mk_sum {
                Some(s) => mk_sum_grid(s, &ks),
                None => product_grid(if m_list.is_empty() { std::slice::from_ref(&base.m) } else { &m_list }, &ks),
            };
            if grid.is_empty() {
                bail!("empty sweep grid");
            }
            write_csv(&run_sweep(&base, &methods, &grid), w)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cost(args) => {
            cost(&args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Diagnose { run, out } => {
            let (rows, report) = run_diagnostics(&run.config()?)?;
            write_csv(&rows, sink(&out)?)?;
            Ok(if report.converged { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::FetchQcd { dir, names, base_url, kappa_c } => {
            let mut opts = FetchOptions::new(dir);
            if !names.is_empty() {
                opts.names = names;
            }
            opts.base_url = base_url;
            opts.kappa_override = kappa_c;
            let got = fetch_qcd(&opts)?;
            for w in got.iter().flat_map(|g| &g.warnings) {
                eprintln!("warning: {w}");
            }
            println!("{}", serde_json::to_string_pretty(&got)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
