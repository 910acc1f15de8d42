//! `pivot-buffon`: exact and simulated hitting probabilities for a
//! two-segment pivot needle on a lattice of parallel lines.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pivot_buffon::montecarlo::{self, EstimateReport, SimulationConfig};
use pivot_buffon::stats::{self, GofResult, StatsError};
use pivot_buffon::{closed_form, DistributionSource, HitDistribution, Lattice, PivotNeedle};

mod output;

use output::{Document, Record, Section};

/// Seed fallback used by `simulate` and `validate` when `--seed` is absent.
const SEED_ENV_VAR: &str = "PIVOT_BUFFON_SEED";

#[derive(Parser)]
#[command(
    name = "pivot-buffon",
    about = "Hitting probabilities for a two-segment pivot needle on a line lattice",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct NeedleArgs {
    /// Length of the first segment
    #[arg(long)]
    a: f64,
    /// Length of the second segment
    #[arg(long)]
    b: f64,
    /// Lattice line spacing
    #[arg(long)]
    d: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form hit distribution
    Exact {
        #[command(flatten)]
        needle: NeedleArgs,
        /// Hold the opening angle constant instead of averaging over it
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Simulate random throws and report estimates
    Simulate {
        #[command(flatten)]
        needle: NeedleArgs,
        /// Number of throws
        #[arg(long)]
        n: u64,
        /// RNG seed; falls back to PIVOT_BUFFON_SEED
        #[arg(long)]
        seed: Option<u64>,
        /// Number of work chunks (scheduling only; the result never depends on it)
        #[arg(long, default_value_t = 1)]
        chunks: u64,
        /// Pin the opening angle instead of drawing it
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Simulate, compare against the closed form, and report PASS/FAIL
    Validate {
        #[command(flatten)]
        needle: NeedleArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        chunks: u64,
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Multiply the exact p1 by this factor before comparing (test hook)
        #[arg(long, hide = true)]
        bias_p1: Option<f64>,
    },
    /// Sweep the length ratio r = a/(a+b) at fixed total length
    Sweep {
        /// Lattice line spacing
        #[arg(long)]
        d: f64,
        /// Fixed total needle length a + b
        #[arg(long)]
        total: f64,
        /// Number of steps; emits steps + 1 rows for r in [0, 1]
        #[arg(long)]
        steps: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Exact { needle, phi, format } => cmd_exact(&needle, phi, format),
        Command::Simulate {
            needle,
            n,
            seed,
            chunks,
            phi,
            format,
        } => cmd_simulate(&needle, n, seed, chunks, phi, format),
        Command::Validate {
            needle,
            n,
            seed,
            chunks,
            phi,
            format,
            bias_p1,
        } => cmd_validate(&needle, n, seed, chunks, phi, format, bias_p1),
        Command::Sweep {
            d,
            total,
            steps,
            format,
        } => cmd_sweep(d, total, steps, format),
    }
}

fn build_scene(args: &NeedleArgs) -> Result<(PivotNeedle, Lattice), String> {
    let needle = PivotNeedle::new(args.a, args.b).map_err(|e| e.to_string())?;
    let lattice = Lattice::new(args.d).map_err(|e| e.to_string())?;
    Ok((needle, lattice))
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV_VAR} is set but not a valid u64: {value:?}")),
        Err(_) => Err(format!(
            "no seed given: pass --seed or set {SEED_ENV_VAR}"
        )),
    }
}

fn check_phi(phi: Option<f64>) -> Result<(), String> {
    match phi {
        Some(p) if !p.is_finite() => Err(format!("--phi must be finite, got {p}")),
        _ => Ok(()),
    }
}

fn params_record(args: &NeedleArgs, phi: Option<f64>) -> Record {
    let mut record = Record::new();
    record.float("a", args.a);
    record.float("b", args.b);
    record.float("d", args.d);
    if let Some(p) = phi {
        record.float("phi", p);
    }
    record
}

fn exact_record(
    needle: &PivotNeedle,
    lattice: &Lattice,
    phi: Option<f64>,
) -> Result<(HitDistribution, Record), String> {
    let distribution = match phi {
        Some(p) => closed_form::fixed_angle_distribution(needle, lattice, p),
        None => closed_form::hit_distribution(needle, lattice),
    }
    .map_err(|e| e.to_string())?;

    let modulus = closed_form::modulus(needle);
    let mean_n = closed_form::expected_intersections(needle, lattice).map_err(|e| e.to_string())?;

    let mut record = Record::new();
    record.float("p0", distribution.p0());
    record.float("p1", distribution.p1());
    record.float("p2", distribution.p2());
    record.float("k_squared", modulus.k_squared());
    record.float("complete_e", pivot_buffon::elliptic::complete_e(modulus));
    record.float("mean_chord", closed_form::mean_chord(needle));
    if let Some(p) = phi {
        record.float("chord", pivot_buffon::geometry::chord_length(needle, p));
    }
    record.float("expected_intersections", mean_n);
    Ok((distribution, record))
}

fn estimate_record(report: &EstimateReport) -> Record {
    let mut record = Record::new();
    record.int("n", report.n_throws);
    record.int("seed", report.seed);
    record.int("c0", report.counts.c0);
    record.int("c1", report.counts.c1);
    record.int("c2", report.counts.c2);
    record.int("c_other", report.counts.c_other);
    record.int("sum_n", report.counts.sum_n);
    record.float("p0_hat", report.p_hat.p0());
    record.float("p1_hat", report.p_hat.p1());
    record.float("p2_hat", report.p_hat.p2());
    record.float("se0", report.std_errors[0]);
    record.float("se1", report.std_errors[1]);
    record.float("se2", report.std_errors[2]);
    record.float("mean_n_hat", report.mean_n_hat);
    record
}

fn run_simulation(
    needle: PivotNeedle,
    lattice: Lattice,
    n: u64,
    seed: u64,
    chunks: u64,
    phi: Option<f64>,
) -> Result<EstimateReport, String> {
    let mut config = SimulationConfig::new(needle, lattice, n, seed);
    config.n_chunks = chunks;
    match phi {
        Some(p) => montecarlo::run_fixed_angle(&config, p),
        None => montecarlo::run(&config),
    }
    .map_err(|e| e.to_string())
}

fn cmd_exact(args: &NeedleArgs, phi: Option<f64>, format: Format) -> Result<ExitCode, String> {
    check_phi(phi)?;
    let (needle, lattice) = build_scene(args)?;
    let (_, record) = exact_record(&needle, &lattice, phi)?;

    let mut doc = Document::new();
    doc.push("params", Section::Object(params_record(args, phi)));
    doc.push("exact", Section::Object(record));
    print_document(&doc, format);
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(
    args: &NeedleArgs,
    n: u64,
    seed: Option<u64>,
    chunks: u64,
    phi: Option<f64>,
    format: Format,
) -> Result<ExitCode, String> {
    check_phi(phi)?;
    let (needle, lattice) = build_scene(args)?;
    let seed = resolve_seed(seed)?;
    let report = run_simulation(needle, lattice, n, seed, chunks, phi)?;

    let mut doc = Document::new();
    doc.push("params", Section::Object(params_record(args, phi)));
    doc.push("estimate", Section::Object(estimate_record(&report)));
    print_document(&doc, format);
    Ok(ExitCode::SUCCESS)
}

fn apply_bias(exact: HitDistribution, bias_p1: Option<f64>) -> Result<HitDistribution, String> {
    let Some(factor) = bias_p1 else {
        return Ok(exact);
    };
    // distorts the null while keeping it on the simplex
    let p1 = exact.p1() * factor;
    let p0 = 1.0 - p1 - exact.p2();
    HitDistribution::from_exact(p0, p1, exact.p2(), DistributionSource::Exact)
        .map_err(|e| format!("--bias-p1 {factor} leaves the simplex: {e}"))
}

fn goodness_of_fit(
    report: &EstimateReport,
    exact: &HitDistribution,
) -> Result<(GofResult, bool), String> {
    let collapsed = exact.as_array().contains(&0.0);
    let result = if collapsed {
        stats::chi_square_gof_collapsed(&report.counts, exact)
    } else {
        match stats::chi_square_gof(&report.counts, exact) {
            Err(StatsError::CollapsedTestRequired(_)) => {
                return goodness_of_fit_collapsed(report, exact)
            }
            other => other,
        }
    }
    .map_err(|e| e.to_string())?;
    Ok((result, collapsed))
}

fn goodness_of_fit_collapsed(
    report: &EstimateReport,
    exact: &HitDistribution,
) -> Result<(GofResult, bool), String> {
    Ok((
        stats::chi_square_gof_collapsed(&report.counts, exact).map_err(|e| e.to_string())?,
        true,
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_validate(
    args: &NeedleArgs,
    n: u64,
    seed: Option<u64>,
    chunks: u64,
    phi: Option<f64>,
    format: Format,
    bias_p1: Option<f64>,
) -> Result<ExitCode, String> {
    check_phi(phi)?;
    let (needle, lattice) = build_scene(args)?;
    let seed = resolve_seed(seed)?;

    let (exact, exact_rec) = exact_record(&needle, &lattice, phi)?;
    let exact = apply_bias(exact, bias_p1)?;
    let report = run_simulation(needle, lattice, n, seed, chunks, phi)?;

    let z = stats::z_scores(&report, &exact);
    let (gof, collapsed) = goodness_of_fit(&report, &exact)?;
    let pass = z.iter().all(|v| v.abs() < 4.0) && gof.p_value > 0.001;

    let mut tests = Record::new();
    tests.float("z0", z[0]);
    tests.float("z1", z[1]);
    tests.float("z2", z[2]);
    tests.float("chi_square", gof.statistic);
    tests.int("dof", u64::from(gof.dof));
    tests.float("p_value", gof.p_value);
    tests.bool("collapsed", collapsed);
    tests.bool("pass", pass);

    let mut doc = Document::new();
    doc.push("params", Section::Object(params_record(args, phi)));
    doc.push("exact", Section::Object(exact_rec));
    doc.push("estimate", Section::Object(estimate_record(&report)));
    doc.push("tests", Section::Object(tests));
    print_document(&doc, format);

    if pass {
        eprintln!("PASS");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("FAIL");
        Ok(ExitCode::from(1))
    }
}

fn cmd_sweep(d: f64, total: f64, steps: u64, format: Format) -> Result<ExitCode, String> {
    if steps == 0 {
        return Err("--steps must be at least 1".into());
    }
    let lattice = Lattice::new(d).map_err(|e| e.to_string())?;
    if !(total.is_finite() && total > 0.0) {
        return Err(format!("--total must be positive and finite, got {total}"));
    }
    if total > d {
        return Err(format!(
            "total needle length {total} exceeds lattice spacing {d}: the closed forms require a + b <= d"
        ));
    }

    let mut rows = Vec::with_capacity(steps as usize + 1);
    for i in 0..=steps {
        let r = i as f64 / steps as f64;
        let a = r * total;
        let b = total - a;
        let needle = PivotNeedle::new(a, b).map_err(|e| e.to_string())?;
        let modulus = closed_form::modulus(&needle);
        let distribution =
            closed_form::hit_distribution(&needle, &lattice).map_err(|e| e.to_string())?;

        let mut row = Record::new();
        row.float("r", r);
        row.float("a", a);
        row.float("b", b);
        row.float("d", d);
        row.float("k_squared", modulus.k_squared());
        row.float("complete_e", pivot_buffon::elliptic::complete_e(modulus));
        row.float("mean_chord", closed_form::mean_chord(&needle));
        row.float("p0", distribution.p0());
        row.float("p1", distribution.p1());
        row.float("p2", distribution.p2());
        rows.push(row);
    }

    let mut params = Record::new();
    params.float("d", d);
    params.float("total", total);
    params.int("steps", steps);

    let mut doc = Document::new();
    doc.push("params", Section::Object(params));
    doc.push("sweep", Section::Array(rows));
    print_document(&doc, format);
    Ok(ExitCode::SUCCESS)
}

fn print_document(doc: &Document, format: Format) {
    match format {
        Format::Json => print!("{}", doc.to_json()),
        Format::Csv => print!("{}", doc.to_csv()),
    }
}
