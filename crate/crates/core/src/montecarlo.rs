//! Monte Carlo estimators: nonlocal fraction, strength distribution and
//! average, and typicality over Haar-random pure states.
//!
//! Reproducibility contract: sample `i` of a run draws everything it needs
//! from an independent ChaCha stream selected by `(seed, i)`, and per-chunk
//! partial results are reduced in chunk order. Identical configurations give
//! bit-identical estimates for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::{Detector, DetectorKind};
use crate::quantum::{correlation_tensor, random_pure_state, SettingsSample, StateVector};

/// Samples per estimate unless configured otherwise (the sampling density
/// used for the reference tables).
pub const DEFAULT_SAMPLES: u64 = 50_000;
/// Random states for typicality runs unless configured otherwise.
pub const DEFAULT_TYPICALITY_STATES: u64 = 120_000;
/// Strength histogram resolution.
pub const DEFAULT_BIN_WIDTH: f64 = 0.005;

const CHUNK: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error("state has {state} qubits but the detector scenario {scenario} has {parties} parties")]
    QubitMismatch {
        state: usize,
        scenario: String,
        parties: usize,
    },
    #[error("bad run configuration: {0}")]
    BadConfig(String),
}

/// Run parameters shared by all estimators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    /// Number of settings samples (or random states for typicality).
    pub n: u64,
    pub seed: u64,
    /// White-noise visibility applied to the state, `sigma(v)`.
    pub visibility: f64,
    pub bin_width: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n: DEFAULT_SAMPLES,
            seed: 0,
            visibility: 1.0,
            bin_width: DEFAULT_BIN_WIDTH,
        }
    }
}

impl McConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        McConfig {
            n,
            seed,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), McError> {
        if self.n == 0 {
            return Err(McError::BadConfig("n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(McError::BadConfig(format!(
                "visibility {} outside [0, 1]",
                self.visibility
            )));
        }
        if !(self.bin_width > 0.0 && self.bin_width <= 1.0) {
            return Err(McError::BadConfig(format!(
                "bin width {} outside (0, 1]",
                self.bin_width
            )));
        }
        Ok(())
    }
}

/// Binned nonlocality-strength mass. Bin `k` covers `[k w, (k+1) w)`; the
/// mass of a bin is its sample count over the total sample count, so the
/// masses sum to the nonlocal fraction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrengthHistogram {
    pub bin_width: f64,
    pub n_samples: u64,
    /// Violating-sample counts per bin, trailing zeros trimmed.
    pub counts: Vec<u64>,
}

impl StrengthHistogram {
    pub fn mass(&self, bin: usize) -> f64 {
        self.counts.get(bin).copied().unwrap_or(0) as f64 / self.n_samples as f64
    }

    pub fn masses(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.n_samples as f64)
            .collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_count() as f64 / self.n_samples as f64
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Strength observables of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrengthStats {
    /// Mean strength over all samples, counting non-violating samples as 0.
    pub s_bar: f64,
    /// Largest strength observed in the run.
    pub s_max_observed: f64,
    pub histogram: StrengthHistogram,
}

/// Result of a fraction or strength estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub p_v: f64,
    /// Binomial standard error `sqrt(p (1-p) / n)`.
    pub stderr_p_v: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub visibility: f64,
    pub detector: DetectorKind,
    /// Samples dropped because the LP solver failed on them.
    pub discarded: u64,
    /// Present for strength runs, absent for fraction-only runs.
    pub strength: Option<StrengthStats>,
}

/// Result of a typicality estimate over Haar-random pure states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalityEstimate {
    pub t_v: f64,
    pub stderr_t_v: f64,
    /// Mean strength over all draws (zero for non-violating ones).
    pub t_s: f64,
    pub n_states: u64,
    /// Settings samples drawn per random state.
    pub draws_per_state: u64,
    pub seed: u64,
    pub detector: DetectorKind,
    pub discarded: u64,
}

/// The random stream owned by sample `index` of a run with master `seed`:
/// one ChaCha instance per sample, selected by stream id. This is what makes
/// estimates independent of how samples are distributed over workers.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone)]
struct ChunkOut {
    violations: u64,
    discarded: u64,
    s_sum: f64,
    s_max: f64,
    counts: Vec<u64>,
}

enum Mode {
    Fraction,
    Strength,
}

enum Source<'a> {
    Fixed(&'a StateVector),
    Haar(usize),
}

fn run(
    source: Source<'_>,
    detector: &dyn Detector,
    cfg: &McConfig,
    mode: Mode,
) -> Result<ChunkOut, McError> {
    cfg.validate()?;
    let scenario = detector.scenario().clone();
    if let Source::Fixed(state) = source {
        if state.n_qubits() != scenario.n_parties() {
            return Err(McError::QubitMismatch {
                state: state.n_qubits(),
                scenario: scenario.to_string(),
                parties: scenario.n_parties(),
            });
        }
    }
    let n_bins = (1.0 / cfg.bin_width).ceil() as usize + 1;
    let n_chunks = cfg.n.div_ceil(CHUNK);

    let chunks: Vec<ChunkOut> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(cfg.n);
            let mut out = ChunkOut {
                violations: 0,
                discarded: 0,
                s_sum: 0.0,
                s_max: 0.0,
                counts: vec![0u64; n_bins],
            };
            for i in lo..hi {
                let mut rng = sample_rng(cfg.seed, i);
                let haar_state;
                let state = match source {
                    Source::Fixed(s) => s,
                    Source::Haar(qubits) => {
                        haar_state = random_pure_state(qubits, &mut rng);
                        &haar_state
                    }
                };
                let sample = SettingsSample::sample(&scenario, &mut rng);
                let mut tensor = correlation_tensor(state, &sample);
                if cfg.visibility < 1.0 {
                    tensor = tensor
                        .scale_visibility(cfg.visibility)
                        .expect("validated visibility");
                }
                match mode {
                    Mode::Fraction => match detector.violates(&tensor) {
                        Ok(true) => out.violations += 1,
                        Ok(false) => {}
                        Err(_) => out.discarded += 1,
                    },
                    Mode::Strength => match detector.strength(&tensor) {
                        Ok(Some(s)) => {
                            out.violations += 1;
                            out.s_sum += s;
                            out.s_max = out.s_max.max(s);
                            let bin =
                                ((s / cfg.bin_width) as usize).min(n_bins - 1);
                            out.counts[bin] += 1;
                        }
                        Ok(None) => {}
                        Err(_) => out.discarded += 1,
                    },
                }
            }
            out
        })
        .collect();

    // Deterministic chunk-order reduction.
    let mut total = ChunkOut {
        violations: 0,
        discarded: 0,
        s_sum: 0.0,
        s_max: 0.0,
        counts: vec![0u64; n_bins],
    };
    for c in chunks {
        total.violations += c.violations;
        total.discarded += c.discarded;
        total.s_sum += c.s_sum;
        total.s_max = total.s_max.max(c.s_max);
        for (t, x) in total.counts.iter_mut().zip(&c.counts) {
            *t += x;
        }
    }
    Ok(total)
}

fn binomial_stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn finish_estimate(
    raw: ChunkOut,
    cfg: &McConfig,
    detector: &dyn Detector,
    with_strength: bool,
) -> Estimate {
    let p_v = raw.violations as f64 / cfg.n as f64;
    let strength = with_strength.then(|| {
        let mut counts = raw.counts;
        while counts.last() == Some(&0) {
            counts.pop();
        }
        StrengthStats {
            s_bar: raw.s_sum / cfg.n as f64,
            s_max_observed: raw.s_max,
            histogram: StrengthHistogram {
                bin_width: cfg.bin_width,
                n_samples: cfg.n,
                counts,
            },
        }
    });
    Estimate {
        p_v,
        stderr_p_v: binomial_stderr(p_v, cfg.n),
        n_samples: cfg.n,
        seed: cfg.seed,
        visibility: cfg.visibility,
        detector: detector.kind(),
        discarded: raw.discarded,
        strength,
    }
}

/// Estimates the nonlocal fraction: the probability that one Haar draw of
/// local measurement settings puts the state's statistics outside the local
/// polytope according to `detector`.
pub fn estimate_nonlocal_fraction(
    state: &StateVector,
    detector: &dyn Detector,
    cfg: &McConfig,
) -> Result<Estimate, McError> {
    let raw = run(Source::Fixed(state), detector, cfg, Mode::Fraction)?;
    Ok(finish_estimate(raw, cfg, detector, false))
}

/// Estimates the strength distribution: per violating sample the strength
/// `S = 1 - v_crit`, binned at `bin_width`; `s_bar` averages `S` over all
/// samples with `S = 0` for non-violating ones.
pub fn estimate_strength(
    state: &StateVector,
    detector: &dyn Detector,
    cfg: &McConfig,
) -> Result<Estimate, McError> {
    let raw = run(Source::Fixed(state), detector, cfg, Mode::Strength)?;
    Ok(finish_estimate(raw, cfg, detector, true))
}

/// Typicality: draws `cfg.n` Haar-random pure states, one settings sample
/// each, and reports the violating fraction and mean strength.
pub fn estimate_typicality(
    n_qubits: usize,
    detector: &dyn Detector,
    cfg: &McConfig,
) -> Result<TypicalityEstimate, McError> {
    if n_qubits != detector.scenario().n_parties() {
        return Err(McError::QubitMismatch {
            state: n_qubits,
            scenario: detector.scenario().to_string(),
            parties: detector.scenario().n_parties(),
        });
    }
    let raw = run(Source::Haar(n_qubits), detector, cfg, Mode::Strength)?;
    let t_v = raw.violations as f64 / cfg.n as f64;
    Ok(TypicalityEstimate {
        t_v,
        stderr_t_v: binomial_stderr(t_v, cfg.n),
        t_s: raw.s_sum / cfg.n as f64,
        n_states: cfg.n,
        draws_per_state: 1,
        seed: cfg.seed,
        detector: detector.kind(),
        discarded: raw.discarded,
    })
}
