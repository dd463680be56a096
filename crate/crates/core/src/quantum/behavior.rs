//! Joint outcome probability tables ("behaviors") and the two equivalent ways
//! of building them: the Born rule with explicit projectors, and the
//! correlator expansion
//! `P(r|k) = 2^-N sum_S (-1)^(sum_{i in S} r_i) <prod_{i in S} E_i>`.

use num_complex::Complex64;

use crate::scenario::Scenario;

use super::bloch::SettingsSample;
use super::correlations::{apply_single_qubit, CorrelationTensor};
use super::state::{DensityMatrix, StateVector};
use super::QuantumError;

const PROB_TOL: f64 = 1e-9;

/// The full table `P(r_1..r_N | k_1..k_N)` for one settings sample.
///
/// Layout: `probs[tuple_index * 2^N + outcome_bits]`, where `tuple_index`
/// runs over joint setting choices in the mixed-radix order of
/// [`Scenario::setting_strides`] and party 1 owns the most significant
/// outcome bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    probs: Vec<f64>,
}

impl Behavior {
    pub fn new(scenario: Scenario, probs: Vec<f64>) -> Result<Self, QuantumError> {
        let b = Behavior { scenario, probs };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<(), QuantumError> {
        let dim = self.scenario.dim();
        let tuples = self.scenario.n_setting_tuples();
        if self.probs.len() != dim * tuples {
            return Err(QuantumError::InvalidBehavior(format!(
                "expected {} probabilities, got {}",
                dim * tuples,
                self.probs.len()
            )));
        }
        for &p in &self.probs {
            if !(-PROB_TOL..=1.0 + PROB_TOL).contains(&p) {
                return Err(QuantumError::InvalidBehavior(format!(
                    "probability {p} outside [0, 1]"
                )));
            }
        }
        for s in 0..tuples {
            let sum: f64 = self.probs[s * dim..(s + 1) * dim].iter().sum();
            if (sum - 1.0).abs() > PROB_TOL {
                return Err(QuantumError::InvalidBehavior(format!(
                    "outcomes for setting tuple {s} sum to {sum}"
                )));
            }
        }
        self.check_no_signaling()?;
        Ok(())
    }

    /// No-signaling: marginalizing out any one party must give a table
    /// independent of that party's setting choice.
    fn check_no_signaling(&self) -> Result<(), QuantumError> {
        let n = self.scenario.n_parties();
        let dim = self.scenario.dim();
        let strides = self.scenario.setting_strides();
        let settings = self.scenario.settings();
        for party in 0..n {
            let bit = n - 1 - party;
            for s in 0..self.scenario.n_setting_tuples() {
                let k_p = (s / strides[party]) % settings[party];
                if k_p == 0 {
                    continue;
                }
                let s0 = s - k_p * strides[party];
                for others in 0..dim / 2 {
                    // Outcome bits of the other parties, with party's bit spliced out.
                    let high = (others >> bit) << (bit + 1);
                    let low = others & ((1 << bit) - 1);
                    let r0 = high | low;
                    let r1 = r0 | (1 << bit);
                    let m = self.probs[s * dim + r0] + self.probs[s * dim + r1];
                    let m0 = self.probs[s0 * dim + r0] + self.probs[s0 * dim + r1];
                    if (m - m0).abs() > PROB_TOL {
                        return Err(QuantumError::InvalidBehavior(format!(
                            "signaling marginal for party {party} (diff {:.3e})",
                            (m - m0).abs()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(outcomes | settings)` with explicit per-party indices.
    pub fn prob(&self, settings: &[usize], outcomes: &[usize]) -> f64 {
        let strides = self.scenario.setting_strides();
        let n = self.scenario.n_parties();
        let s: usize = settings
            .iter()
            .enumerate()
            .map(|(i, &k)| k * strides[i])
            .sum();
        let r: usize = outcomes
            .iter()
            .enumerate()
            .map(|(i, &b)| b << (n - 1 - i))
            .sum();
        self.probs[s * self.scenario.dim() + r]
    }

    /// Recovers the correlation tensor. Inverse of
    /// [`behavior_from_correlations`]; well-defined because the table is
    /// no-signaling.
    pub fn correlation_tensor(&self) -> CorrelationTensor {
        let n = self.scenario.n_parties();
        let dim = self.scenario.dim();
        let term_strides = self.scenario.term_strides();
        let setting_strides = self.scenario.setting_strides();
        let mut values = vec![0.0; self.scenario.n_terms()];
        for offset in 0..values.len() {
            let mut rem = offset;
            let mut tuple = 0usize;
            let mut mask = 0usize;
            for i in 0..n {
                let d = rem / term_strides[i];
                rem %= term_strides[i];
                if d > 0 {
                    tuple += (d - 1) * setting_strides[i];
                    mask |= 1 << (n - 1 - i);
                }
            }
            let base = tuple * dim;
            let mut acc = 0.0;
            for r in 0..dim {
                let sign = if ((r & mask).count_ones() & 1) == 0 {
                    1.0
                } else {
                    -1.0
                };
                acc += sign * self.probs[base + r];
            }
            values[offset] = acc;
        }
        values[0] = 1.0;
        CorrelationTensor::new(self.scenario.clone(), values)
            .expect("behavior always yields a valid tensor")
    }
}

/// Born-rule behavior of a pure state: projectors `(I +- e.sigma)/2` applied
/// qubit by qubit.
pub fn behavior_from_born(psi: &StateVector, sample: &SettingsSample) -> Behavior {
    let scenario = sample.scenario().clone();
    let n = scenario.n_parties();
    assert_eq!(psi.n_qubits(), n, "state/scenario qubit mismatch");
    let dim = scenario.dim();
    let tuples = scenario.n_setting_tuples();
    let strides = scenario.setting_strides();
    let mut probs = vec![0.0; tuples * dim];
    let mut cur = vec![Complex64::ZERO; dim];
    let mut next = vec![Complex64::ZERO; dim];
    for s in 0..tuples {
        let ks: Vec<usize> = (0..n)
            .map(|i| (s / strides[i]) % scenario.settings()[i])
            .collect();
        for r in 0..dim {
            cur.copy_from_slice(psi.amplitudes());
            for (i, &k) in ks.iter().enumerate() {
                let sign = if (r >> (n - 1 - i)) & 1 == 0 { 1.0 } else { -1.0 };
                let proj = projector(sample.setting(i, k).observable(), sign);
                apply_single_qubit(n, i, &proj, &cur, &mut next);
                std::mem::swap(&mut cur, &mut next);
            }
            let p: f64 = psi
                .amplitudes()
                .iter()
                .zip(&cur)
                .map(|(a, b)| (a.conj() * b).re)
                .sum();
            probs[s * dim + r] = p.clamp(0.0, 1.0);
        }
    }
    Behavior { scenario, probs }
}

/// Born-rule behavior of a density matrix, `Tr(rho . Pi_1 (x) ... (x) Pi_N)`.
pub fn behavior_from_born_mixed(rho: &DensityMatrix, sample: &SettingsSample) -> Behavior {
    let scenario = sample.scenario().clone();
    let n = scenario.n_parties();
    assert_eq!(rho.n_qubits(), n, "state/scenario qubit mismatch");
    let dim = scenario.dim();
    let tuples = scenario.n_setting_tuples();
    let strides = scenario.setting_strides();
    let mut probs = vec![0.0; tuples * dim];
    for s in 0..tuples {
        let ks: Vec<usize> = (0..n)
            .map(|i| (s / strides[i]) % scenario.settings()[i])
            .collect();
        for r in 0..dim {
            let projs: Vec<[[Complex64; 2]; 2]> = ks
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    let sign = if (r >> (n - 1 - i)) & 1 == 0 { 1.0 } else { -1.0 };
                    projector(sample.setting(i, k).observable(), sign)
                })
                .collect();
            let mut acc = Complex64::ZERO;
            for a in 0..dim {
                for b in 0..dim {
                    let mut prod = rho.get(a, b);
                    if prod.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (i, proj) in projs.iter().enumerate() {
                        let bit = n - 1 - i;
                        prod *= proj[(b >> bit) & 1][(a >> bit) & 1];
                    }
                    acc += prod;
                }
            }
            probs[s * dim + r] = acc.re.clamp(0.0, 1.0);
        }
    }
    Behavior { scenario, probs }
}

/// Behavior reconstructed from the correlator expansion.
pub fn behavior_from_correlations(t: &CorrelationTensor) -> Behavior {
    let scenario = t.scenario().clone();
    let n = scenario.n_parties();
    let dim = scenario.dim();
    let tuples = scenario.n_setting_tuples();
    let term_strides = scenario.term_strides();
    let setting_strides = scenario.setting_strides();
    let norm = 1.0 / dim as f64;
    let mut probs = vec![0.0; tuples * dim];
    // Per subset of parties, the bit mask and the term offset contribution of
    // each party's chosen setting.
    for s in 0..tuples {
        let ks: Vec<usize> = (0..n)
            .map(|i| (s / setting_strides[i]) % scenario.settings()[i])
            .collect();
        let offsets_and_masks: Vec<(usize, usize)> = (0..dim)
            .map(|subset| {
                let mut off = 0usize;
                let mut mask = 0usize;
                for i in 0..n {
                    if (subset >> (n - 1 - i)) & 1 == 1 {
                        off += (ks[i] + 1) * term_strides[i];
                        mask |= 1 << (n - 1 - i);
                    }
                }
                (off, mask)
            })
            .collect();
        for r in 0..dim {
            let mut acc = 0.0;
            for &(off, mask) in &offsets_and_masks {
                let sign = if ((r & mask).count_ones() & 1) == 0 {
                    1.0
                } else {
                    -1.0
                };
                acc += sign * t.value_at(off);
            }
            probs[s * dim + r] = acc * norm;
        }
    }
    Behavior { scenario, probs }
}

fn projector(obs: [[Complex64; 2]; 2], sign: f64) -> [[Complex64; 2]; 2] {
    let half = Complex64::new(0.5, 0.0);
    let s = Complex64::new(0.5 * sign, 0.0);
    [
        [half + s * obs[0][0], s * obs[0][1]],
        [s * obs[1][0], half + s * obs[1][1]],
    ]
}
