use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use ersp_core::bench::{
    batch, compare, grid_instances, het_vs_hom, integrated_vs_sequential, variant_for, write_csv,
    Grid, GridInstance,
};
use ersp_core::colgen::{adaptive_solve, ElementarityMode, Engine, SolveConfig, Termination};
use ersp_core::duals::DualPrices;
use ersp_core::instance::{load_instance, save_instance, GenParams, Instance};
use ersp_core::oracle::{
    enumerate_sequences, min_reduced_cost, solve_exact_tiny, EnumLimits, OracleMode,
};
use ersp_core::pricing::{price, Elementarity, PricingConfig, Variant};

const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_LIMIT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ersp",
    version,
    about = "Exact column generation for electric routing and charging"
)]
struct Cli {
    /// Log progress (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write generated instances as JSON files.
    Generate {
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance and print a JSON summary.
    Solve {
        /// Instance JSON; otherwise one is generated from the grid flags.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Also run the route-then-charge baseline and the averaged-cost comparison.
        #[arg(long)]
        benchmarks: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bi-level against path-level pricing over a grid; CSV output.
    Compare {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every grid instance; CSV output.
    Batch {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Leave timing columns empty so reruns compare byte for byte.
        #[arg(long)]
        no_timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify small instances against exhaustive enumeration.
    OracleCheck {
        #[arg(long)]
        instance: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Task counts, e.g. `8` or `6,8,10`.
    #[arg(long, default_value = "8")]
    tasks: String,
    /// Seeds, e.g. `0`, `0,3` or `0..20`.
    #[arg(long, default_value = "0")]
    seed: String,
    /// Area as WxH lattice cells.
    #[arg(long, default_value = "2x2")]
    area: String,
    /// Horizon over battery capacity, comma separated.
    #[arg(long = "tb-ratio", default_value = "3")]
    tb_ratio: String,
    /// Number of charging-cost levels, comma separated.
    #[arg(long, default_value = "1")]
    levels: String,
    /// Machines per instance; one per task when omitted.
    #[arg(long)]
    fleet: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Hom,
    Het,
}

#[derive(Clone, Copy, ValueEnum)]
enum ElemArg {
    None,
    Ng,
    Adaptive,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Bilevel,
    Pathwise,
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Defaults to het on instances with several cost levels.
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long, value_enum, default_value = "adaptive")]
    elementarity: ElemArg,
    #[arg(long, value_enum, default_value = "on")]
    cuts: Toggle,
    #[arg(long, value_enum, default_value = "bilevel")]
    pricing: EngineArg,
    /// Wall-clock limit in seconds per solve.
    #[arg(long = "time-limit", default_value_t = 3600.0)]
    time_limit: f64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Run(e.to_string())
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad {what}: {x:?}")))
        })
        .collect()
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, CliError> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a
            .parse()
            .map_err(|_| CliError::Usage(format!("bad seed range {s:?}")))?;
        let b: u64 = b
            .parse()
            .map_err(|_| CliError::Usage(format!("bad seed range {s:?}")))?;
        return Ok((a..b).collect());
    }
    parse_list(s, "seed")
}

fn grid(a: &GridArgs) -> Result<Grid, CliError> {
    let (w, h) = a
        .area
        .split_once(['x', 'X'])
        .ok_or_else(|| CliError::Usage(format!("bad area {:?}", a.area)))?;
    let dim = |v: &str| {
        v.parse::<u32>()
            .map_err(|_| CliError::Usage(format!("bad area {:?}", a.area)))
    };
    Ok(Grid {
        tasks: parse_list(&a.tasks, "task count")?,
        tb_ratios: parse_list(&a.tb_ratio, "T/B ratio")?,
        levels: parse_list(&a.levels, "level count")?,
        seeds: parse_seeds(&a.seed)?,
        area: (dim(w)?, dim(h)?),
        fleet: a.fleet,
    })
}

fn instances(a: &GridArgs) -> Result<Vec<GridInstance>, CliError> {
    grid_instances(&grid(a)?).map_err(|e| CliError::Usage(e.to_string()))
}

fn solve_config(a: &SolveArgs, inst: &Instance) -> SolveConfig {
    let mode = match a.elementarity {
        ElemArg::None => ElementarityMode::None,
        ElemArg::Ng => ElementarityMode::Ng,
        ElemArg::Adaptive => ElementarityMode::Adaptive,
        ElemArg::Full => ElementarityMode::Full,
    };
    let mut cfg = SolveConfig::for_instance(inst, mode);
    if let Some(v) = a.variant {
        let wanted = match v {
            VariantArg::Hom => Variant::Hom,
            VariantArg::Het => Variant::Het,
        };
        cfg.variant = variant_for(inst, wanted);
    }
    cfg.cuts = matches!(a.cuts, Toggle::On);
    cfg.engine = match a.pricing {
        EngineArg::Bilevel => Engine::Bilevel,
        EngineArg::Pathwise => Engine::Pathwise,
    };
    cfg.time_limit = Duration::from_secs_f64(a.time_limit.max(0.0));
    cfg
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => {
            Box::new(File::create(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?)
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn load(p: &FsPath) -> Result<Instance, CliError> {
    load_instance(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Cmd::Generate { grid, out } => {
            fs::create_dir_all(&out)?;
            for gi in instances(&grid)? {
                let path = out.join(format!("{}.json", gi.id));
                save_instance(&gi.instance, &path)?;
                println!("{}", path.display());
            }
            Ok(0)
        }
        Cmd::Solve {
            instance,
            grid,
            solve,
            benchmarks,
            out,
        } => {
            let (id, inst) = match instance {
                Some(p) => (p.display().to_string(), load(&p)?),
                None => {
                    let gi = instances(&grid)?
                        .into_iter()
                        .next()
                        .ok_or_else(|| CliError::Usage("empty grid".into()))?;
                    (gi.id, gi.instance)
                }
            };
            let cfg = solve_config(&solve, &inst);
            let report = adaptive_solve(&inst, &cfg)?;
            let mut summary = serde_json::json!({ "instance": id, "report": report });
            if benchmarks {
                let (integrated, rtc) = integrated_vs_sequential(&inst, &cfg)?;
                summary["route_then_charge"] = serde_json::json!({
                    "cost": if rtc.cost.is_finite() { Some(rtc.cost) } else { None },
                    "failed_repairs": rtc.failed,
                    "integrated_cost": integrated.ip_value,
                });
                if inst.levels.len() > 1 {
                    summary["het_vs_hom"] = serde_json::to_value(het_vs_hom(&inst, &cfg)?)?;
                }
            }
            let mut w = sink(&out)?;
            serde_json::to_writer_pretty(&mut w, &summary)?;
            writeln!(w)?;
            Ok(match report.status {
                Termination::Converged => 0,
                Termination::Infeasible => EXIT_INFEASIBLE,
                Termination::IterationLimit | Termination::TimeLimit => EXIT_LIMIT,
            })
        }
        Cmd::Compare { grid, solve, out } => {
            let mut rows = Vec::new();
            for gi in instances(&grid)? {
                if gi.instance.levels.len() > 1 {
                    return Err(CliError::Usage(
                        "compare needs single-level instances (--levels 1)".into(),
                    ));
                }
                let row = compare(&gi, &solve_config(&solve, &gi.instance))?;
                info!(
                    "{}: delta {:.2e} ratio {:.3}",
                    row.instance_id, row.bound_delta, row.time_ratio
                );
                rows.push(row);
            }
            write_csv(sink(&out)?, &rows)?;
            Ok(0)
        }
        Cmd::Batch {
            grid,
            solve,
            no_timings,
            out,
        } => {
            let list = instances(&grid)?;
            let Some(first) = list.first() else {
                return Err(CliError::Usage("empty grid".into()));
            };
            let cfg = solve_config(&solve, &first.instance);
            let rows = batch(&list, &cfg, !no_timings)?;
            write_csv(sink(&out)?, &rows)?;
            Ok(0)
        }
        Cmd::OracleCheck { instance, grid } => {
            let list = match instance {
                Some(p) => {
                    let inst = load(&p)?;
                    let params = GenParams {
                        n_tasks: inst.tasks.len(),
                        ..GenParams::default()
                    };
                    vec![GridInstance {
                        id: p.display().to_string(),
                        params,
                        instance: inst,
                    }]
                }
                None => instances(&grid)?,
            };
            let mut ok = true;
            for gi in &list {
                ok &= oracle_check(gi)?;
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn oracle_check(gi: &GridInstance) -> Result<bool, CliError> {
    let inst = &gi.instance;
    let exact = solve_exact_tiny(inst, &OracleMode::Elementary, &[])?;
    let full = adaptive_solve(
        inst,
        &SolveConfig::for_instance(inst, ElementarityMode::Full),
    )?;
    let adaptive = adaptive_solve(
        inst,
        &SolveConfig::for_instance(inst, ElementarityMode::Adaptive),
    )?;
    let paths = enumerate_sequences(inst, &EnumLimits::default())?;
    let duals = DualPrices::random(inst, 0, gi.params.seed);
    let variant = variant_for(inst, Variant::Hom);
    let priced = price(
        inst,
        &duals,
        &PricingConfig::new(variant, Elementarity::Full),
    )?
    .min_reduced_cost;
    let want_rc = min_reduced_cost(&paths, &duals, &[], inst);
    let checks = [
        ("lp_full", full.lp_bound, exact.lp),
        ("lp_adaptive", adaptive.lp_bound, exact.lp),
        ("ip_full", full.ip_value, exact.ip),
        ("min_rc", priced, want_rc),
    ];
    let mut ok = true;
    for (name, got, want) in checks {
        let pass = (got - want).abs() <= 1e-6;
        ok &= pass;
        println!(
            "{} {} {name}: got {got:.9} oracle {want:.9}",
            if pass { "PASS" } else { "FAIL" },
            gi.id
        );
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::FAILURE
        }
    }
}
