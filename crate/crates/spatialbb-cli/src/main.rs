//! Command-line surface over the spatialbb library: first-order sequence
//! verification, segmented fiber runs, spacing bounds and their curves,
//! the back-of-envelope device-count estimates, and a one-shot table that
//! recomputes every headline number.
//!
//! Exit codes: 0 on success (and on "all eliminated"/"all rows pass"),
//! 1 when a verification or reproduction check fails, 2 on usage or
//! configuration errors. All numeric output is locale-free scientific
//! notation with 12 significant digits, so identical inputs give
//! byte-identical output.

mod literal;
mod reproduce;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use spatialbb::bound::{
    delta_bound, figure_curve, rough_estimate_bilinear, rough_estimate_linear, BoundQuery,
    SpectralDensity, SPEED_OF_LIGHT,
};
use spatialbb::fiber::{BathMode, FiberModel, FiberParams};
use spatialbb::monomial::surviving_terms;
use spatialbb::propagate::compare;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "spatialbb", version, about = "Spatial bang-bang decoupling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check which target terms a device sequence eliminates to first order
    Verify {
        /// Sequence literal: omega12, omega1234, eightstep, identity, or [m,E,...,1,E]
        #[arg(long)]
        seq: String,
        /// Target terms: families (linear, A, B, C) and/or c(c1,c2)a(a1,a2), comma-separated
        #[arg(long)]
        terms: String,
    },
    /// Run a segmented fiber simulation from a JSON config, paired with and without kicks
    Simulate {
        /// Path to the run configuration (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the shifter-spacing bound, or sweep it across cutoffs
    Delta(DeltaArgs),
    /// Back-of-envelope device budget for a target residual coupling
    Estimate {
        /// Which suppression budget the cycle must meet
        #[arg(long)]
        order: EstimateOrder,
        /// Transmission surviving the span without devices
        #[arg(long, default_value_t = 0.95)]
        transmission: f64,
        /// Residual coupling target the cycle must reach
        #[arg(long, default_value_t = 1e-4)]
        target: f64,
        /// Span the budget covers, meters
        #[arg(long = "span-m", default_value_t = 1000.0)]
        span_m: f64,
    },
    /// Recompute every headline number and report pass/fail per row
    Reproduce {
        /// Judge quoted values to this relative tolerance instead of the
        /// default windows (rows with rounded quotes then fail and print
        /// the computed value)
        #[arg(long = "strict-tol")]
        strict_tol: Option<f64>,
        /// List the rows without computing anything
        #[arg(long)]
        list: bool,
        /// Also write summary.txt and the n=2,3 spacing curves into this directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DeltaArgs {
    /// Spectral exponent n (1=Ohmic, 2=super-Ohmic, 3=Debye-type)
    #[arg(long)]
    n: u32,
    /// Cutoff frequency, rad/s (single solve; omit with --curve)
    #[arg(long = "omega-c")]
    omega_c: Option<f64>,
    /// Coupling prefactor of the spectral density
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Coherence deficit budget delta
    #[arg(long, default_value_t = 1e-4)]
    deficit: f64,
    /// Signal speed, m/s
    #[arg(long, default_value_t = SPEED_OF_LIGHT / 1.6)]
    velocity: f64,
    /// Span the signal crosses, meters (transit = span / velocity)
    #[arg(long = "span-m", default_value_t = 1000.0, conflicts_with = "transit_s")]
    span_m: f64,
    /// Transit time in seconds, overriding --span-m
    #[arg(long = "transit-s")]
    transit_s: Option<f64>,
    /// Inverse temperature, seconds (omit for zero temperature)
    #[arg(long = "beta-s")]
    beta_s: Option<f64>,
    /// Sweep the cutoff over a log-spaced range instead of one solve
    #[arg(long, requires = "from", requires = "to")]
    curve: bool,
    /// Curve start cutoff, rad/s
    #[arg(long)]
    from: Option<f64>,
    /// Curve end cutoff, rad/s
    #[arg(long)]
    to: Option<f64>,
    /// Curve point count
    #[arg(long, default_value_t = 25)]
    points: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateOrder {
    Linear,
    Bilinear,
}

/// Segmented-run configuration. Field names carry their units; unknown
/// keys are rejected by name.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateConfig {
    omega1_rad_s: f64,
    omega2_rad_s: f64,
    bath_frequencies_rad_s: Vec<f64>,
    g_rad_s: f64,
    dim_per_mode: usize,
    epsilon: f64,
    seeds: Vec<u64>,
    sequence: String,
    n_segments: usize,
    tau_s: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { seq, terms } => cmd_verify(&seq, &terms),
        Command::Simulate { config, out } => cmd_simulate(&config, out.as_deref()),
        Command::Delta(args) => cmd_delta(&args),
        Command::Estimate { order, transmission, target, span_m } => {
            cmd_estimate(order, transmission, target, span_m)
        }
        Command::Reproduce { strict_tol, list, out } => {
            cmd_reproduce(strict_tol, list, out.as_deref())
        }
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn cmd_verify(seq_literal: &str, terms_literal: &str) -> Result<ExitCode> {
    let seq = literal::parse_sequence(seq_literal)?;
    let terms = literal::parse_terms(terms_literal)?;
    let mut all_eliminated = true;
    let mut out = String::new();
    for m in &terms {
        let survivors = surviving_terms(&seq, m)?;
        if survivors.is_empty() {
            out.push_str(&format!("c({},{})a({},{}): eliminated\n", m.c1, m.c2, m.a1, m.a2));
        } else {
            all_eliminated = false;
            let listed: Vec<String> = survivors
                .iter()
                .map(|(t, coeff)| {
                    format!("c({},{})a({},{}) x {:.11e}", t.c1, t.c2, t.a1, t.a2, coeff.norm())
                })
                .collect();
            out.push_str(&format!(
                "c({},{})a({},{}): survives as {}\n",
                m.c1,
                m.c2,
                m.a1,
                m.a2,
                listed.join(" + ")
            ));
        }
    }
    out.push_str(if all_eliminated {
        "all targets eliminated\n"
    } else {
        "survivors remain\n"
    });
    print!("{out}");
    Ok(if all_eliminated { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_simulate(config_path: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let raw = std::fs::read_to_string(config_path)
        .with_context(|| format!("reading {}", config_path.display()))?;
    let config: SimulateConfig = serde_json::from_str(&raw)
        .with_context(|| format!("parsing {}", config_path.display()))?;
    let seq = literal::parse_sequence(&config.sequence)?;
    let mut csv = String::from("seed,epsilon,g,tau_s,bb,fidelity,coherence,purity\n");
    for &seed in &config.seeds {
        let model = FiberModel::new(FiberParams {
            omega: [config.omega1_rad_s, config.omega2_rad_s],
            baths: config
                .bath_frequencies_rad_s
                .iter()
                .map(|&frequency| BathMode { frequency, coupling: config.g_rad_s })
                .collect(),
            dim_per_mode: config.dim_per_mode,
            epsilon: config.epsilon,
            seed,
        })?;
        let report = compare(&model, &seq, config.n_segments, config.tau_s)?;
        for (bb, figures) in [(1, &report.protected), (0, &report.unprotected)] {
            csv.push_str(&format!(
                "{seed},{:.11e},{:.11e},{:.11e},{bb},{:.11e},{:.11e},{:.11e}\n",
                config.epsilon,
                config.g_rad_s,
                config.tau_s,
                figures.fidelity,
                figures.coherence,
                figures.purity,
            ));
        }
    }
    emit(out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_delta(args: &DeltaArgs) -> Result<ExitCode> {
    let transit = match args.transit_s {
        Some(t) => t,
        None => args.span_m / args.velocity,
    };
    let query = BoundQuery::with_transit_time(args.deficit, args.velocity, transit)?;
    if args.curve {
        if args.beta_s.is_some() {
            bail!("--curve sweeps the zero-temperature bound; drop --beta-s");
        }
        let from = args.from.ok_or_else(|| anyhow!("--curve needs --from"))?;
        let to = args.to.ok_or_else(|| anyhow!("--curve needs --to"))?;
        let points = figure_curve(args.n, args.alpha, from, to, args.points, &query)?;
        let mut csv = String::from("omega_c_rad_s,delta_m\n");
        for (omega_c, delta_m) in points {
            csv.push_str(&format!("{omega_c:.11e},{delta_m:.11e}\n"));
        }
        print!("{csv}");
        return Ok(ExitCode::SUCCESS);
    }
    let omega_c = args
        .omega_c
        .ok_or_else(|| anyhow!("--omega-c is required without --curve"))?;
    let mut sd = SpectralDensity::new(args.n, args.alpha, omega_c)?;
    if let Some(beta) = args.beta_s {
        sd = sd.with_beta(beta)?;
    }
    let bound = delta_bound(&sd, &query)?;
    println!("delta_m = {:.11e}", bound.delta_m);
    Ok(ExitCode::SUCCESS)
}

fn cmd_estimate(
    order: EstimateOrder,
    transmission: f64,
    target: f64,
    span_m: f64,
) -> Result<ExitCode> {
    let estimate = match order {
        EstimateOrder::Linear => rough_estimate_linear(transmission, target, span_m)?,
        EstimateOrder::Bilinear => rough_estimate_bilinear(transmission, target, span_m)?,
    };
    println!("{}", serde_json::to_string(&estimate)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(
    strict_tol: Option<f64>,
    list: bool,
    out: Option<&Path>,
) -> Result<ExitCode> {
    if list {
        print!("{}", reproduce::list());
        return Ok(ExitCode::SUCCESS);
    }
    let report = reproduce::run(strict_tol)?;
    print!("{}", report.text);
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))?;
        std::fs::write(dir.join("summary.txt"), &report.text)?;
        std::fs::write(dir.join("curve_n2.csv"), reproduce::curve_csv(2)?)?;
        std::fs::write(dir.join("curve_n3.csv"), reproduce::curve_csv(3)?)?;
    }
    Ok(if report.all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}
