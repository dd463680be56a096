//! `nonlocal`: Monte Carlo estimation of the nonlocal fraction and
//! nonlocality strength of N-qubit states under Haar-random measurements.
//!
//! Exit codes: 0 success, 2 argument/parse errors, 3 numerical failures
//! (samples were discarded; the JSON report is still written).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use nonlocal_core::catalog;
use nonlocal_core::detector::{available_detectors, build_detector};
use nonlocal_core::montecarlo::{
    estimate_nonlocal_fraction, estimate_strength, estimate_typicality, sample_rng, Estimate,
    McConfig, TypicalityEstimate, DEFAULT_SAMPLES, DEFAULT_TYPICALITY_STATES,
};
use nonlocal_core::polytope::LocalPolytope;
use nonlocal_core::quantum::{correlation_tensor, SettingsSample, StateVector};
use nonlocal_core::witness::{assess_witness, WitnessReport};
use nonlocal_core::Scenario;

/// Environment variable supplying the default worker-thread count.
const THREADS_ENV: &str = "NONLOCAL_THREADS";

#[derive(Parser)]
#[command(
    name = "nonlocal",
    version,
    about = "Nonlocal fraction and nonlocality strength of N-qubit states under random measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the nonlocal fraction P_V of a state.
    Fraction(EstimateArgs),
    /// Estimate the strength distribution g(S) and the average strength.
    Strength(StrengthArgs),
    /// Estimate the typical fraction/strength over Haar-random pure states.
    Typicality(TypicalityArgs),
    /// Examine a single settings sample with the exact LP oracle.
    LpCheck(LpCheckArgs),
    /// Run a fraction estimate and compare it against the two-producible
    /// entanglement-witness thresholds.
    Witness(EstimateArgs),
    /// List the built-in states, inequalities and detectors, or export the
    /// catalog as JSON.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct StateOpts {
    /// Catalog state name, basis bitstring, or tensor product such as
    /// "GHZ2x00"; see `nonlocal catalog`.
    #[arg(long, conflicts_with = "state_file")]
    state: Option<String>,
    /// Amplitude file: one line per basis state, "index re im".
    #[arg(long)]
    state_file: Option<PathBuf>,
}

#[derive(Args)]
struct CommonOpts {
    /// Measurement scenario, e.g. "2x2x2".
    #[arg(long)]
    scenario: String,
    /// Detector name: "lp", "iopt", a cataloged inequality, or a
    /// comma-separated list of families.
    #[arg(long, default_value = "iopt")]
    detector: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Violation threshold on inequality values; raise it (e.g. to 0.015)
    /// to mimic finite experimental precision.
    #[arg(long, default_value_t = 1e-9)]
    epsilon: f64,
    /// Worker threads (defaults to NONLOCAL_THREADS or all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    state: StateOpts,
    #[command(flatten)]
    common: CommonOpts,
    /// Number of Haar-random settings samples.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    n: u64,
    /// White-noise visibility: the estimate runs on v*rho + (1-v)*I/2^N.
    #[arg(long, default_value_t = 1.0)]
    v: f64,
}

#[derive(Args)]
struct StrengthArgs {
    #[command(flatten)]
    estimate: EstimateArgs,
    /// Histogram bin width for g(S).
    #[arg(long, default_value_t = 0.005)]
    bin_width: f64,
    /// Also write the histogram as CSV (columns s_low,s_high,mass,density).
    #[arg(long)]
    hist: Option<PathBuf>,
}

#[derive(Args)]
struct TypicalityArgs {
    /// Number of qubits of the random states.
    #[arg(long)]
    qubits: usize,
    #[command(flatten)]
    common: CommonOpts,
    /// Number of Haar-random pure states (one settings draw each).
    #[arg(long, default_value_t = DEFAULT_TYPICALITY_STATES)]
    n_states: u64,
}

#[derive(Args)]
struct LpCheckArgs {
    #[command(flatten)]
    state: StateOpts,
    /// Measurement scenario, e.g. "2x2x2".
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Which sample of the seeded stream to examine.
    #[arg(long, default_value_t = 0)]
    sample_index: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    /// Export states and inequalities to this JSON file.
    #[arg(long)]
    export: Option<PathBuf>,
}

/// Envelope written by every estimating command.
#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct RunDocument<T> {
    command: String,
    scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<String>,
    detector: String,
    epsilon: f64,
    result: T,
    runtime_ms: u64,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct WitnessOutcome {
    estimate: Estimate,
    report: WitnessReport,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct LpCheckOutcome {
    sample_index: u64,
    family_violates: bool,
    family_strength: Option<f64>,
    lp_feasible: bool,
    v_star: f64,
    lp_strength: f64,
    certificate_error: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // Errors in user-supplied names, shapes or files are usage
            // errors; anything else is an internal failure.
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fraction(args) => run_fraction(args, false),
        Command::Witness(args) => run_fraction(args, true),
        Command::Strength(args) => run_strength(args),
        Command::Typicality(args) => run_typicality(args),
        Command::LpCheck(args) => run_lp_check(args),
        Command::Catalog(args) => run_catalog(args),
    }
}

fn parse_scenario(text: &str) -> Result<Scenario> {
    text.parse::<Scenario>()
        .map_err(|e| usage(format!("{e}")))
}

fn load_state(opts: &StateOpts, scenario: &Scenario) -> Result<(StateVector, Option<String>)> {
    let (state, label) = match (&opts.state, &opts.state_file) {
        (Some(spec), None) => {
            let s = catalog::parse_state_spec(spec).map_err(|e| usage(format!("{e}")))?;
            (s, Some(spec.clone()))
        }
        (None, Some(path)) => {
            let s = read_amplitude_file(path)?;
            (s, Some(path.display().to_string()))
        }
        _ => return Err(usage("exactly one of --state or --state-file is required")),
    };
    if state.n_qubits() != scenario.n_parties() {
        return Err(usage(format!(
            "state has {} qubits but scenario {scenario} has {} parties",
            state.n_qubits(),
            scenario.n_parties()
        )));
    }
    Ok((state, label))
}

/// Amplitude file format: one line per basis state, "index re im".
/// Blank lines and lines starting with '#' are ignored; omitted indices are
/// zero; the vector is normalized on load.
fn read_amplitude_file(path: &Path) -> Result<StateVector> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| usage(format!("{e:#}")))?;
    let mut entries: Vec<(usize, Complex64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>, what: &str| -> Result<f64> {
            tok.ok_or_else(|| usage(format!("{}:{}: missing {what}", path.display(), lineno + 1)))?
                .parse::<f64>()
                .map_err(|_| usage(format!("{}:{}: bad {what}", path.display(), lineno + 1)))
        };
        let index = parse(it.next(), "index")? as usize;
        let re = parse(it.next(), "real part")?;
        let im = parse(it.next(), "imaginary part")?;
        entries.push((index, Complex64::new(re, im)));
    }
    let max_index = entries
        .iter()
        .map(|(i, _)| *i)
        .max()
        .ok_or_else(|| usage(format!("{}: no amplitudes", path.display())))?;
    let dim = (max_index + 1).next_power_of_two().max(2);
    let mut amps = vec![Complex64::ZERO; dim];
    for (i, a) in entries {
        amps[i] = a;
    }
    StateVector::from_unnormalized(amps).map_err(|e| usage(format!("{e}")))
}

fn thread_pool(requested: Option<usize>) -> Result<rayon::ThreadPool> {
    let threads = match requested {
        Some(t) => t,
        None => std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building thread pool")
}

fn emit<T: Serialize>(doc: &RunDocument<T>, out: Option<&PathBuf>) -> Result<()> {
    let json = serde_json::to_string_pretty(doc)?;
    match out {
        Some(path) => {
            fs::write(path, json.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(json.as_bytes())?;
            stdout.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn exit_for_discards(discarded: u64) -> ExitCode {
    if discarded > 0 {
        eprintln!("warning: {discarded} samples discarded after LP failures");
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_fraction(args: EstimateArgs, witness: bool) -> Result<ExitCode> {
    let scenario = parse_scenario(&args.common.scenario)?;
    let (state, label) = load_state(&args.state, &scenario)?;
    let detector = build_detector(&args.common.detector, &scenario, args.common.epsilon)
        .map_err(|e| usage(format!("{e}")))?;
    let cfg = McConfig {
        n: args.n,
        seed: args.common.seed,
        visibility: args.v,
        ..Default::default()
    };
    let pool = thread_pool(args.common.threads)?;
    let start = Instant::now();
    let estimate = pool
        .install(|| estimate_nonlocal_fraction(&state, detector.as_ref(), &cfg))
        .map_err(|e| usage(format!("{e}")))?;
    let runtime_ms = start.elapsed().as_millis() as u64;
    let discarded = estimate.discarded;

    if witness {
        let report = assess_witness(&scenario, estimate.p_v, estimate.stderr_p_v);
        let doc = RunDocument {
            command: "witness".into(),
            scenario: scenario.to_string(),
            state: label,
            detector: args.common.detector.clone(),
            epsilon: args.common.epsilon,
            result: WitnessOutcome { estimate, report },
            runtime_ms,
        };
        emit(&doc, args.common.out.as_ref())?;
    } else {
        let doc = RunDocument {
            command: "fraction".into(),
            scenario: scenario.to_string(),
            state: label,
            detector: args.common.detector.clone(),
            epsilon: args.common.epsilon,
            result: estimate,
            runtime_ms,
        };
        emit(&doc, args.common.out.as_ref())?;
    }
    Ok(exit_for_discards(discarded))
}

fn run_strength(args: StrengthArgs) -> Result<ExitCode> {
    let est_args = args.estimate;
    let scenario = parse_scenario(&est_args.common.scenario)?;
    let (state, label) = load_state(&est_args.state, &scenario)?;
    let detector = build_detector(&est_args.common.detector, &scenario, est_args.common.epsilon)
        .map_err(|e| usage(format!("{e}")))?;
    let cfg = McConfig {
        n: est_args.n,
        seed: est_args.common.seed,
        visibility: est_args.v,
        bin_width: args.bin_width,
    };
    let pool = thread_pool(est_args.common.threads)?;
    let start = Instant::now();
    let estimate = pool
        .install(|| estimate_strength(&state, detector.as_ref(), &cfg))
        .map_err(|e| usage(format!("{e}")))?;
    let runtime_ms = start.elapsed().as_millis() as u64;

    if let Some(hist_path) = &args.hist {
        let stats = estimate
            .strength
            .as_ref()
            .expect("strength runs always carry a histogram");
        write_histogram_csv(hist_path, &stats.histogram)?;
    }
    let discarded = estimate.discarded;
    let doc = RunDocument {
        command: "strength".into(),
        scenario: scenario.to_string(),
        state: label,
        detector: est_args.common.detector.clone(),
        epsilon: est_args.common.epsilon,
        result: estimate,
        runtime_ms,
    };
    emit(&doc, est_args.common.out.as_ref())?;
    Ok(exit_for_discards(discarded))
}

fn write_histogram_csv(
    path: &Path,
    hist: &nonlocal_core::StrengthHistogram,
) -> Result<()> {
    let mut out = String::from("s_low,s_high,mass,density\n");
    for (k, &count) in hist.counts.iter().enumerate() {
        let mass = count as f64 / hist.n_samples as f64;
        out.push_str(&format!(
            "{:.6},{:.6},{},{}\n",
            k as f64 * hist.bin_width,
            (k + 1) as f64 * hist.bin_width,
            mass,
            mass / hist.bin_width
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run_typicality(args: TypicalityArgs) -> Result<ExitCode> {
    let scenario = parse_scenario(&args.common.scenario)?;
    let detector = build_detector(&args.common.detector, &scenario, args.common.epsilon)
        .map_err(|e| usage(format!("{e}")))?;
    let cfg = McConfig {
        n: args.n_states,
        seed: args.common.seed,
        ..Default::default()
    };
    let pool = thread_pool(args.common.threads)?;
    let start = Instant::now();
    let result: TypicalityEstimate = pool
        .install(|| estimate_typicality(args.qubits, detector.as_ref(), &cfg))
        .map_err(|e| usage(format!("{e}")))?;
    let runtime_ms = start.elapsed().as_millis() as u64;
    let discarded = result.discarded;
    let doc = RunDocument {
        command: "typicality".into(),
        scenario: scenario.to_string(),
        state: None,
        detector: args.common.detector.clone(),
        epsilon: args.common.epsilon,
        result,
        runtime_ms,
    };
    emit(&doc, args.common.out.as_ref())?;
    Ok(exit_for_discards(discarded))
}

fn run_lp_check(args: LpCheckArgs) -> Result<ExitCode> {
    let scenario = parse_scenario(&args.scenario)?;
    let (state, label) = load_state(&args.state, &scenario)?;
    let family = build_detector("iopt", &scenario, 1e-9).map_err(|e| usage(format!("{e}")))?;
    let polytope = LocalPolytope::new(&scenario).map_err(|e| anyhow!("{e}"))?;

    let start = Instant::now();
    // The same stream the estimators would use for this sample index.
    let mut rng = sample_rng(args.seed, args.sample_index);
    let sample = SettingsSample::sample(&scenario, &mut rng);
    let tensor = correlation_tensor(&state, &sample);

    let fam_detector = family.as_ref();
    let family_strength = fam_detector
        .strength(&tensor)
        .map_err(|e| anyhow!("{e}"))?;
    let membership = polytope.is_local_tensor(&tensor).map_err(|e| anyhow!("{e}"))?;
    let vis = polytope
        .critical_visibility_tensor(&tensor)
        .map_err(|e| anyhow!("{e}"))?;
    let certificate_error = vis.certificate.as_ref().map(|q| {
        let rec = polytope.mixture_tensor(q);
        rec.iter()
            .zip(tensor.values())
            .map(|(r, t)| (r - vis.v_star * t).abs())
            .skip(1)
            .fold(0.0f64, f64::max)
    });
    let runtime_ms = start.elapsed().as_millis() as u64;

    let doc = RunDocument {
        command: "lp-check".into(),
        scenario: scenario.to_string(),
        state: label,
        detector: "lp".into(),
        epsilon: 1e-9,
        result: LpCheckOutcome {
            sample_index: args.sample_index,
            family_violates: family_strength.is_some(),
            family_strength,
            lp_feasible: membership.feasible,
            v_star: vis.v_star,
            lp_strength: 1.0 - vis.v_star,
            certificate_error,
        },
        runtime_ms,
    };
    emit(&doc, args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn run_catalog(args: CatalogArgs) -> Result<ExitCode> {
    match args.export {
        Some(path) => {
            let json = serde_json::to_string_pretty(&catalog::export_json())?;
            fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
            println!("catalog exported to {}", path.display());
        }
        None => {
            // Tolerate a closed pipe (e.g. `nonlocal catalog | head`).
            let mut out = String::new();
            out.push_str("states:\n");
            for entry in catalog::list_catalog() {
                if entry.kind == "state" {
                    out.push_str(&format!("  {:8} {}\n", entry.name, entry.shape));
                }
            }
            out.push_str("inequalities:\n");
            for entry in catalog::list_catalog() {
                if entry.kind == "inequality" {
                    out.push_str(&format!("  {:8} {}\n", entry.name, entry.shape));
                }
            }
            out.push_str("detectors:\n");
            for d in available_detectors() {
                out.push_str(&format!("  {:8} {}\n", d.name, d.summary));
            }
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
        }
    }
    Ok(ExitCode::SUCCESS)
}
