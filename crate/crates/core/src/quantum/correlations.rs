//! Correlation tensors: every joint expectation value of the chosen
//! observables, including all lower-order marginal correlators.

use num_complex::Complex64;

use crate::scenario::Scenario;

use super::bloch::SettingsSample;
use super::state::{DensityMatrix, StateVector};
use super::QuantumError;

const VALUE_TOL: f64 = 1e-9;

/// All expectation values `<T_1 (x) ... (x) T_N>` for one settings sample,
/// where each factor is either the identity ("not measured", component 0) or
/// the party's observable `j` (component `j + 1`).
///
/// Stored flat in the mixed-radix order of [`Scenario::term_strides`]; the
/// all-identity entry (offset 0) is exactly 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensor {
    scenario: Scenario,
    values: Vec<f64>,
}

impl CorrelationTensor {
    pub fn new(scenario: Scenario, values: Vec<f64>) -> Result<Self, QuantumError> {
        if values.len() != scenario.n_terms() {
            return Err(QuantumError::ShapeMismatch(format!(
                "expected {} tensor entries, got {}",
                scenario.n_terms(),
                values.len()
            )));
        }
        if values[0] != 1.0 {
            return Err(QuantumError::ShapeMismatch(
                "all-identity correlator must be exactly 1".into(),
            ));
        }
        if let Some(v) = values.iter().find(|v| v.abs() > 1.0 + VALUE_TOL) {
            return Err(QuantumError::ShapeMismatch(format!(
                "correlator {v} outside [-1, 1]"
            )));
        }
        Ok(CorrelationTensor { scenario, values })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, offset: usize) -> f64 {
        self.values[offset]
    }

    /// Correlator for explicit per-party components (`None` = not measured).
    pub fn get(&self, parts: &[Option<usize>]) -> f64 {
        self.values[self.scenario.term_offset(parts)]
    }

    /// Tensor of the white-noise mixture `v rho + (1-v) I/2^N`: every
    /// non-constant entry scales exactly by `v`.
    pub fn scale_visibility(&self, v: f64) -> Result<CorrelationTensor, QuantumError> {
        if !(0.0..=1.0).contains(&v) {
            return Err(QuantumError::VisibilityOutOfRange(v));
        }
        let mut values = self.values.clone();
        for x in values.iter_mut().skip(1) {
            *x *= v;
        }
        Ok(CorrelationTensor {
            scenario: self.scenario.clone(),
            values,
        })
    }
}

pub(super) const IDENTITY_2X2: [[Complex64; 2]; 2] = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

/// Applies a 2x2 operator to one qubit of an `n`-qubit state. Party 0 owns
/// the most significant bit.
pub(super) fn apply_single_qubit(
    n: usize,
    party: usize,
    m: &[[Complex64; 2]; 2],
    input: &[Complex64],
    out: &mut [Complex64],
) {
    let stride = 1usize << (n - 1 - party);
    let dim = 1usize << n;
    let mut base = 0;
    while base < dim {
        for k in base..base + stride {
            let x = input[k];
            let y = input[k + stride];
            out[k] = m[0][0] * x + m[0][1] * y;
            out[k + stride] = m[1][0] * x + m[1][1] * y;
        }
        base += 2 * stride;
    }
}

fn re_inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Correlation tensor of a pure state under one settings sample.
pub fn correlation_tensor(psi: &StateVector, sample: &SettingsSample) -> CorrelationTensor {
    let scenario = sample.scenario().clone();
    let n = scenario.n_parties();
    assert_eq!(
        psi.n_qubits(),
        n,
        "state has {} qubits but scenario {} needs {}",
        psi.n_qubits(),
        scenario,
        n
    );
    let strides = scenario.term_strides();
    let mut values = vec![0.0; scenario.n_terms()];
    let mut scratch: Vec<Vec<Complex64>> = (0..n).map(|_| vec![Complex64::ZERO; psi.dim()]).collect();

    fn fill(
        party: usize,
        offset: usize,
        current: &[Complex64],
        scratch: &mut [Vec<Complex64>],
        psi: &StateVector,
        sample: &SettingsSample,
        strides: &[usize],
        values: &mut [f64],
    ) {
        let n = psi.n_qubits();
        if party == n {
            values[offset] = re_inner(psi.amplitudes(), current);
            return;
        }
        let (mine, rest) = scratch.split_at_mut(1);
        // Component 0: party not measured, identity factor.
        fill(party + 1, offset, current, rest, psi, sample, strides, values);
        for (j, setting) in sample.party(party).iter().enumerate() {
            let op = setting.observable();
            apply_single_qubit(n, party, &op, current, &mut mine[0]);
            fill(
                party + 1,
                offset + (j + 1) * strides[party],
                &mine[0],
                rest,
                psi,
                sample,
                strides,
                values,
            );
        }
    }

    fill(
        0,
        0,
        psi.amplitudes(),
        &mut scratch,
        psi,
        sample,
        &strides,
        &mut values,
    );
    values[0] = 1.0;
    CorrelationTensor { scenario, values }
}

/// Correlation tensor of a density matrix: `Tr(rho . T_1 (x) ... (x) T_N)`
/// evaluated entrywise. Slower than the pure-state path; meant for mixed
/// inputs and cross-checks.
pub fn correlation_tensor_mixed(rho: &DensityMatrix, sample: &SettingsSample) -> CorrelationTensor {
    let scenario = sample.scenario().clone();
    let n = scenario.n_parties();
    assert_eq!(rho.n_qubits(), n, "state/scenario qubit mismatch");
    let dim = rho.dim();
    let strides = scenario.term_strides();

    let ops: Vec<Vec<[[Complex64; 2]; 2]>> = (0..n)
        .map(|i| {
            let mut v = vec![IDENTITY_2X2];
            v.extend(sample.party(i).iter().map(|b| b.observable()));
            v
        })
        .collect();

    let mut values = vec![0.0; scenario.n_terms()];
    for offset in 0..values.len() {
        let mut rem = offset;
        let digits: Vec<usize> = (0..n)
            .map(|i| {
                let d = rem / strides[i];
                rem %= strides[i];
                d
            })
            .collect();
        // Tr(rho . M) = sum_{a,b} rho[a,b] M[b,a], with M a tensor product.
        let mut acc = Complex64::ZERO;
        for a in 0..dim {
            for b in 0..dim {
                let mut prod = rho.get(a, b);
                if prod.norm_sqr() == 0.0 {
                    continue;
                }
                for (i, &d) in digits.iter().enumerate() {
                    let bit = n - 1 - i;
                    let ai = (a >> bit) & 1;
                    let bi = (b >> bit) & 1;
                    prod *= ops[i][d][bi][ai];
                    if prod.norm_sqr() == 0.0 {
                        break;
                    }
                }
                acc += prod;
            }
        }
        values[offset] = acc.re;
    }
    values[0] = 1.0;
    CorrelationTensor { scenario, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::white_noise_mixture;
    use crate::quantum::BlochSetting;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ghz(n: usize) -> StateVector {
        let dim = 1 << n;
        let mut amps = vec![Complex64::ZERO; dim];
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = a;
        amps[dim - 1] = a;
        StateVector::new(amps).unwrap()
    }

    fn z_settings(scenario: &Scenario) -> SettingsSample {
        let per_party = scenario
            .settings()
            .iter()
            .map(|&m| vec![BlochSetting::from_haar_pair(0.0, 0.0); m])
            .collect();
        SettingsSample::new(scenario.clone(), per_party).unwrap()
    }

    fn x_settings(scenario: &Scenario) -> SettingsSample {
        let x = BlochSetting::from_angles(std::f64::consts::FRAC_PI_4, 0.0);
        let per_party = scenario.settings().iter().map(|&m| vec![x; m]).collect();
        SettingsSample::new(scenario.clone(), per_party).unwrap()
    }

    #[test]
    fn z_eigenstate_has_unit_correlator() {
        let scenario: Scenario = "2x2".parse().unwrap();
        let psi = StateVector::basis(2, 0);
        let t = correlation_tensor(&psi, &z_settings(&scenario));
        assert!((t.get(&[Some(0), Some(0)]) - 1.0).abs() < 1e-12);
        assert!((t.get(&[Some(0), None]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz2_x_correlator_matches_direct_trace() {
        let scenario: Scenario = "1x1".parse().unwrap();
        let psi = ghz(2);
        let sample = x_settings(&scenario);
        let t = correlation_tensor(&psi, &sample);
        assert!((t.get(&[Some(0), Some(0)]) - 1.0).abs() < 1e-12);
        // Cross-check against the dense trace on the density matrix.
        let rho = white_noise_mixture(&psi, 1.0).unwrap();
        let tm = correlation_tensor_mixed(&rho, &sample);
        for (a, b) in t.values().iter().zip(tm.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_state_has_zero_correlators() {
        let scenario: Scenario = "2x2x2".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sample = SettingsSample::sample(&scenario, &mut rng);
        let rho = DensityMatrix::maximally_mixed(3);
        let t = correlation_tensor_mixed(&rho, &sample);
        assert_eq!(t.value_at(0), 1.0);
        for &v in &t.values()[1..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn white_noise_scales_correlators_linearly() {
        let scenario: Scenario = "2x2x2".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let psi = ghz(3);
        let sample = SettingsSample::sample(&scenario, &mut rng);
        let pure = correlation_tensor(&psi, &sample);
        for v in [0.0, 0.3, 0.5, 0.7, 1.0] {
            let mixed = correlation_tensor_mixed(&white_noise_mixture(&psi, v).unwrap(), &sample);
            let scaled = pure.scale_visibility(v).unwrap();
            for (a, b) in mixed.values().iter().zip(scaled.values()) {
                assert!((a - b).abs() < 1e-12, "v={v}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pure_and_mixed_paths_agree_on_random_states() {
        let scenario: Scenario = "2x2x2".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let psi = crate::quantum::random_pure_state(3, &mut rng);
            let sample = SettingsSample::sample(&scenario, &mut rng);
            let a = correlation_tensor(&psi, &sample);
            let b = correlation_tensor_mixed(&white_noise_mixture(&psi, 1.0).unwrap(), &sample);
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-12);
            }
            for &v in a.values() {
                assert!(v.abs() <= 1.0 + 1e-9);
            }
        }
    }
}
