//! Command-line front end: regime queries, multiplier traces, linear and
//! nonlinear experiment drivers, figure CSVs, and the acceptance suite.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 acceptance failure,
//! 3 numerical failure.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use corioflow::acceptance::{all_ids, run_acceptance};
use corioflow::criteria::gaussian_packet;
use corioflow::figures::{figure_csv, FigureKind, FigureParams};
use corioflow::fit::fit_power_law;
use corioflow::{HarnessError, Result};
use corioflow_linear::{
    dispersive_decay_experiment, evolve_state, reconstruct_velocity, velocity_to_unknowns,
};
use corioflow_multiplier::{m1_symbol, m2_symbol, m_symbol, sample};
use corioflow_nonlinear::{is_settled, run, threshold_scan, Dynamics, RunStatus, SimConfig};
use corioflow_regimes::{classify, growth_rate, stable_eigenvalues, RegimeKind};
use corioflow_spectral::{Grid, ModeClass, ModeIndex};

#[derive(Parser)]
#[command(name = "corioflow", version, about = "Rotating-shear-flow experiment driver")]
struct Cli {
    /// TOML simulation config (simulate, scan, linear; defaults used if absent).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output target: a file for CSV subcommands, a directory for figures,
    /// the report file for accept, the run directory for simulate.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Overrides init.seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Place (beta, nu) in the four-way stability classification.
    Classify {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e-3)]
        nu: f64,
    },
    /// Pointwise k=0 eigenvalue information at one (eta, l).
    Eigen {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e-3)]
        nu: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        l: i64,
    },
    /// CSV map of growth rate and unstable-set membership over (eta, l).
    InstabilityMap {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e-3)]
        nu: f64,
        #[arg(long, default_value_t = 16.0)]
        eta_max: f64,
        #[arg(long, default_value_t = 321)]
        eta_steps: usize,
        #[arg(long, default_value_t = 8)]
        l_max: i64,
    },
    /// CSV trace (t, value, dlog) of one ghost-multiplier weight on a mode.
    Multiplier {
        #[arg(long, value_enum)]
        which: Weight,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 0)]
        l: i64,
        #[arg(long, default_value_t = 1e-3)]
        nu: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.5)]
        dt: f64,
    },
    /// Evolve a seeded field under the per-mode linear dynamics; CSV norms.
    Linear,
    /// Sup-norm decay series of Gaussian k=0 wave packets; CSV with running fit.
    Dispersive {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e-4)]
        nu: f64,
        #[arg(long, default_value_t = 1000.0)]
        t_max: f64,
        #[arg(long, default_value_t = 30)]
        points: usize,
    },
    /// Run one nonlinear simulation from the config.
    Simulate,
    /// Amplitude-threshold bisection over a viscosity list.
    Scan {
        #[arg(long, value_delimiter = ',', required = true)]
        nu_list: Vec<f64>,
        #[arg(long)]
        eps_min: f64,
        #[arg(long)]
        eps_max: f64,
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
    /// Emit the four standard figure CSVs into --out DIR.
    Figures,
    /// Run the acceptance suite (all criteria, or a subset via --only).
    Accept {
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Weight {
    M,
    M1,
    M2,
    A,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            failure_code(&e)
        }
    }
}

/// Config and I/O problems are usage errors (1); everything else that reaches
/// the top is a numerical failure (3).
fn failure_code(e: &HarnessError) -> i32 {
    use corioflow_nonlinear::NonlinearError as NE;
    match e {
        HarnessError::Io(_) => 1,
        HarnessError::Nonlinear(NE::Config(_) | NE::Toml(_) | NE::Io(_)) => 1,
        _ => 3,
    }
}

fn load_config(cli: &Cli) -> Result<SimConfig> {
    let mut cfg = match &cli.config {
        Some(path) => SimConfig::from_path(path)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.init.seed = seed;
    }
    Ok(cfg)
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Classify { beta, nu } => {
            print!("{}", classify(*beta, *nu)?);
            Ok(0)
        }
        Command::Eigen { beta, nu, eta, l } => {
            let report = classify(*beta, *nu)?;
            println!("kind={}", report.kind);
            match report.kind {
                RegimeKind::ExponentiallyUnstable => {
                    println!("growth_rate={}", growth_rate(*beta, *nu, *eta, *l)?);
                }
                RegimeKind::Stable => {
                    let (plus, minus) = stable_eigenvalues(*beta, *nu, *eta, *l)?;
                    println!("eigenvalue_plus={plus}");
                    println!("eigenvalue_minus={minus}");
                }
                RegimeKind::LiftUpClassical | RegimeKind::LiftUpRotated => {
                    println!("note=degenerate regime; growth is algebraic, not exponential");
                }
            }
            Ok(0)
        }
        Command::InstabilityMap {
            beta,
            nu,
            eta_max,
            eta_steps,
            l_max,
        } => {
            let params = FigureParams {
                beta: *beta,
                nu: *nu,
                l: 0,
                eta_min: -eta_max,
                eta_max: *eta_max,
                n_eta: *eta_steps,
                l_max: *l_max,
            };
            let csv = figure_csv(FigureKind::InstabilityMap, &params)?;
            write_or_print(&cli.out, &csv)?;
            Ok(0)
        }
        Command::Multiplier {
            which,
            k,
            eta,
            l,
            nu,
            delta,
            t_max,
            dt,
        } => {
            let mode = ModeIndex::new(*k, *eta, *l);
            let mut csv = String::from("t,value,dlog\n");
            let n = (t_max / dt).round() as usize;
            for i in 0..=n {
                let t = dt * i as f64;
                let (value, dlog) = match which {
                    Weight::M => m_symbol(t, &mode, *nu)?,
                    Weight::M1 => m1_symbol(t, &mode, *nu)?,
                    Weight::M2 => m2_symbol(t, &mode)?,
                    Weight::A => {
                        let s = sample(t, mode, *nu, *delta)?;
                        let dlog =
                            s.dlog_m + s.dlog_m1 + s.dlog_m2 + delta * nu.powf(1.0 / 3.0);
                        (s.a, dlog)
                    }
                };
                writeln!(csv, "{t},{value},{dlog}").expect("string write");
            }
            write_or_print(&cli.out, &csv)?;
            Ok(0)
        }
        Command::Linear => {
            let cfg = load_config(cli)?;
            let grid = cfg.build_grid()?;
            let u0 = corioflow_nonlinear::init::seeded_field(
                &grid,
                cfg.init.epsilon,
                cfg.init.seed,
                cfg.sobolev.n,
            );
            let mut state = velocity_to_unknowns(&u0, cfg.physics.beta, cfg.physics.nu, 0.0)?;
            let mut csv = String::from("t,double_zero,simple_zero,nonzero,u2,u2_bracket\n");
            let n_out = (cfg.time.t_end / cfg.time.ledger_interval).round() as usize;
            for step in 0..=n_out {
                let t = cfg.time.ledger_interval * step as f64;
                if step > 0 {
                    state = evolve_state(&state, t, cfg.time.dt)?;
                }
                let u = reconstruct_velocity(&state)?;
                let norm_of = |class: ModeClass| u.project_modes(class).l2_norm_sq().sqrt();
                let u2: f64 = u
                    .component(1)
                    .iter()
                    .map(Complex64::norm_sqr)
                    .sum::<f64>()
                    .sqrt();
                writeln!(
                    csv,
                    "{t},{},{},{},{u2},{}",
                    norm_of(ModeClass::DoubleZero),
                    norm_of(ModeClass::SimpleZero),
                    norm_of(ModeClass::NonZero),
                    u2 * (1.0 + t * t).sqrt()
                )
                .expect("string write");
            }
            write_or_print(&cli.out, &csv)?;
            Ok(0)
        }
        Command::Dispersive {
            beta,
            nu,
            t_max,
            points,
        } => {
            let b = beta * (beta - 1.0);
            if b <= 0.0 {
                return Err(corioflow_linear::LinearError::NotStableRegime(*beta).into());
            }
            let alpha = b.sqrt();
            let grid = Grid::new(4, 4096, 16, std::f64::consts::TAU * 512.0)?;
            let u = gaussian_packet(&grid);
            let n = (*points).max(2);
            let times: Vec<f64> = (0..n)
                .map(|i| t_max.powf(i as f64 / (n - 1) as f64))
                .collect();
            let series = dispersive_decay_experiment(&u, alpha, *nu, &times)?;
            let mut csv = String::from("t,sup_u1,sup_u2,sup_u3,fit_exponent\n");
            let mut compensated = Vec::new();
            for (i, &t) in times.iter().enumerate() {
                let sup = series.sup_u[i];
                let peak = sup.iter().fold(0.0f64, |a, &b| a.max(b));
                compensated.push((t, peak * (nu * t).exp()));
                let fit = fit_power_law(&compensated, (times[0] * 0.99, t * 1.01))
                    .map(|f| format!("{}", f.exponent))
                    .unwrap_or_default();
                writeln!(csv, "{t},{},{},{},{fit}", sup[0], sup[1], sup[2])
                    .expect("string write");
            }
            write_or_print(&cli.out, &csv)?;
            Ok(0)
        }
        Command::Simulate => {
            let mut cfg = load_config(cli)?;
            if let Some(dir) = &cli.out {
                cfg.output.dir = Some(dir.clone());
            }
            let result = run(&cfg)?;
            println!("status={}", result.status);
            println!("t_final={}", result.state.time);
            println!("steps={}", result.state.step_count);
            println!("bootstrap_peak={:e}", result.ledger.bootstrap_peak());
            println!("settled={}", is_settled(&result, cfg.init.epsilon));
            let div_max = result
                .ledger
                .div_residual
                .iter()
                .fold(0.0f64, |a, &b| a.max(b));
            println!("div_residual_max={div_max:e}");
            Ok(if result.status == RunStatus::ToleranceFail {
                3
            } else {
                0
            })
        }
        Command::Scan {
            nu_list,
            eps_min,
            eps_max,
            steps,
        } => {
            let cfg = load_config(cli)?;
            let table =
                threshold_scan(&cfg, nu_list, (*eps_min, *eps_max), *steps, Dynamics::Full)?;
            let mut text = table.to_csv_string();
            if let Some(expo) = table.exponent {
                writeln!(text, "# exponent={expo}").expect("string write");
            }
            write_or_print(&cli.out, &text)?;
            Ok(0)
        }
        Command::Figures => {
            let Some(dir) = &cli.out else {
                eprintln!("figures requires --out DIR");
                return Ok(1);
            };
            std::fs::create_dir_all(dir)?;
            let jobs = [
                ("fig1_left.csv", FigureKind::EigenCurve, FigureParams::rate_curve(1e-3)),
                ("fig1_right.csv", FigureKind::EigenCurve, FigureParams::rate_curve(1e-4)),
                ("fig2_left.csv", FigureKind::InstabilityMap, FigureParams::set_map(0.5)),
                ("fig2_right.csv", FigureKind::InstabilityMap, FigureParams::set_map(0.1)),
            ];
            for (name, kind, params) in jobs {
                let path = dir.join(name);
                std::fs::write(&path, figure_csv(kind, &params)?)?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Accept { only } => {
            let ids = if only.is_empty() {
                all_ids()
            } else {
                only.clone()
            };
            let report = run_acceptance(&ids);
            print!("{}", report.text());
            if let Some(path) = &cli.out {
                std::fs::write(path, report.text())?;
            }
            Ok(if report.all_passed() { 0 } else { 2 })
        }
    }
}
