//! Correlator-form Bell inequalities, their symmetry orbits, and the lifted
//! CHSH family.
//!
//! Every inequality is stored with its classical constant folded into the
//! expression, so the uniform convention is `value <= 0` for all local
//! behaviors. Coefficients are integers, which makes variant deduplication
//! and the brute-force classical bound exact.

mod orbit;
mod parse;

pub use orbit::{lifted_chsh_family, symmetry_orbit};
pub use parse::parse_inequality;

use crate::quantum::CorrelationTensor;
use crate::scenario::Scenario;

use thiserror::Error;

/// Default threshold above which an evaluated inequality counts as violated.
/// The CLI can raise it (e.g. to 0.015) to mimic finite experimental
/// precision.
pub const DEFAULT_VIOLATION_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IneqError {
    #[error("inequality lives in scenario {ineq} but tensor is for {tensor}")]
    ScenarioMismatch { ineq: String, tensor: String },
    #[error("base uses {needed} settings for one of its parties; no free scenario party offers that many")]
    BaseDoesNotFit { needed: usize },
    #[error("lifted CHSH needs at least two parties with two or more settings in {0}")]
    NoChshPair(String),
    #[error("inequality has no non-constant term")]
    NoTerms,
    #[error("cannot parse inequality text: {0}")]
    Parse(String),
    #[error("setting index {setting} out of range for party {party} in scenario {scenario}")]
    SettingOutOfRange {
        party: usize,
        setting: usize,
        scenario: String,
    },
}

/// A Bell inequality `constant + sum_t w_t C_t <= 0` over correlator terms.
///
/// `terms` holds the non-constant coefficients as `(term offset, weight)`
/// pairs sorted by offset (see [`Scenario::term_strides`] for the offset
/// convention). The folded classical constant sits apart so that critical
/// visibilities come out of a single division.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BellInequality {
    scenario: Scenario,
    constant: i64,
    terms: Vec<(u32, i64)>,
}

impl BellInequality {
    pub fn from_sorted_terms(
        scenario: Scenario,
        constant: i64,
        terms: Vec<(u32, i64)>,
    ) -> Result<Self, IneqError> {
        if terms.is_empty() {
            return Err(IneqError::NoTerms);
        }
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|&(off, w)| {
            off > 0 && (off as usize) < scenario.n_terms() && w != 0
        }));
        Ok(BellInequality {
            scenario,
            constant,
            terms,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// The folded classical constant (the all-identity coefficient).
    pub fn constant(&self) -> i64 {
        self.constant
    }

    /// Non-constant terms as `(offset, weight)`, sorted by offset.
    pub fn terms(&self) -> &[(u32, i64)] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Non-constant terms with explicit per-party components.
    pub fn term_entries(&self) -> Vec<(Vec<Option<usize>>, i64)> {
        self.terms
            .iter()
            .map(|&(off, w)| (self.scenario.term_parts(off as usize), w))
            .collect()
    }

    /// `constant + sum w_t C_t`; positive values signal nonlocality.
    pub fn evaluate(&self, t: &CorrelationTensor) -> Result<f64, IneqError> {
        if t.scenario() != &self.scenario {
            return Err(IneqError::ScenarioMismatch {
                ineq: self.scenario.to_string(),
                tensor: t.scenario().to_string(),
            });
        }
        Ok(self.evaluate_unchecked(t.values()))
    }

    pub(crate) fn evaluate_unchecked(&self, values: &[f64]) -> f64 {
        let acc: f64 = self
            .terms
            .iter()
            .map(|&(off, w)| w as f64 * values[off as usize])
            .sum();
        self.constant as f64 + acc
    }

    /// Critical visibility: the `v` solving `constant + v * A = 0`, where `A`
    /// is the non-constant part of the evaluation. Returns `None` when the
    /// inequality is not violated beyond `eps`. On a violating sample the
    /// white-noise mixture `sigma(v)` stays nonlocal for `v > v_crit`, and
    /// the nonlocality strength is `1 - v_crit`.
    pub fn critical_visibility(
        &self,
        t: &CorrelationTensor,
        eps: f64,
    ) -> Result<Option<f64>, IneqError> {
        let value = self.evaluate(t)?;
        if value <= eps {
            return Ok(None);
        }
        let linear = value - self.constant as f64;
        debug_assert!(linear > 0.0);
        Ok(Some(-(self.constant as f64) / linear))
    }

    /// Flips the measurement outcome labels of one `(party, setting)`: every
    /// term containing that observable changes sign.
    pub fn flip_output(&self, party: usize, setting: usize) -> BellInequality {
        let strides = self.scenario.term_strides();
        let m = self.scenario.settings()[party] + 1;
        let mut terms: Vec<(u32, i64)> = self
            .terms
            .iter()
            .map(|&(off, w)| {
                let digit = (off as usize / strides[party]) % m;
                if digit == setting + 1 {
                    (off, -w)
                } else {
                    (off, w)
                }
            })
            .collect();
        terms.sort_unstable_by_key(|&(off, _)| off);
        BellInequality {
            scenario: self.scenario.clone(),
            constant: self.constant,
            terms,
        }
    }
}

/// A deduplicated set of equivalent inequalities instantiated in one
/// scenario, in deterministic generation order.
#[derive(Clone, Debug)]
pub struct InequalityFamily {
    scenario: Scenario,
    provenance: String,
    variants: Vec<BellInequality>,
}

impl InequalityFamily {
    pub(crate) fn new(
        scenario: Scenario,
        provenance: String,
        variants: Vec<BellInequality>,
    ) -> Self {
        InequalityFamily {
            scenario,
            provenance,
            variants,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Base name plus generation mode, e.g. `"i5 orbit"`.
    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.variants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    pub fn variants(&self) -> &[BellInequality] {
        &self.variants
    }

    /// Maximum evaluation over the family; ties keep the first-generated
    /// variant. Returns the best value and the index of the variant.
    pub fn max_over_family(&self, t: &CorrelationTensor) -> Result<(f64, usize), IneqError> {
        if let Some(first) = self.variants.first() {
            if t.scenario() != first.scenario() {
                return Err(IneqError::ScenarioMismatch {
                    ineq: first.scenario().to_string(),
                    tensor: t.scenario().to_string(),
                });
            }
        }
        let mut best = f64::NEG_INFINITY;
        let mut best_idx = 0;
        for (i, v) in self.variants.iter().enumerate() {
            let val = v.evaluate_unchecked(t.values());
            if val > best {
                best = val;
                best_idx = i;
            }
        }
        Ok((best, best_idx))
    }
}
