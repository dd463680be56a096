//! The exact local-polytope oracle: deterministic-strategy vertices, LP
//! membership, LP critical visibility, and the brute-force classical-bound
//! verifier.
//!
//! Membership is solved in correlator space. A behavior and its correlation
//! tensor determine each other (the tensor is the character transform of the
//! no-signaling probability table), so `b = sum_k q_k V_k` holds in
//! probability space exactly when it holds entrywise over correlator terms.
//! That cuts the LP from `2^N prod m_i` equality rows to `prod (m_i+1) - 1`.

use thiserror::Error;

use crate::inequality::BellInequality;
use crate::quantum::{Behavior, CorrelationTensor};
use crate::scenario::Scenario;
use crate::simplex::{solve_equality_form, LpError, LpStatus};

/// Cap on the number of deterministic strategies we will enumerate.
pub const MAX_VERTICES: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolytopeError {
    #[error("scenario {0} has more than {MAX_VERTICES} deterministic strategies")]
    TooLarge(String),
    #[error("tensor is for scenario {tensor} but polytope is for {polytope}")]
    ScenarioMismatch { tensor: String, polytope: String },
    #[error("LP solver failed: {0}")]
    Lp(#[from] LpError),
}

/// A local deterministic strategy: one predetermined outcome bit per
/// `(party, setting)` pair, packed into a single word (party-major, setting
/// order within a party).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeterministicStrategy {
    bits: u32,
}

impl DeterministicStrategy {
    pub fn outcome(&self, scenario: &Scenario, party: usize, setting: usize) -> u8 {
        let pos: usize = scenario.settings()[..party].iter().sum::<usize>() + setting;
        ((self.bits >> pos) & 1) as u8
    }

    /// The `+-1` observable value assigned to `(party, setting)`:
    /// outcome 0 maps to +1, outcome 1 to -1.
    pub fn sign(&self, scenario: &Scenario, party: usize, setting: usize) -> f64 {
        if self.outcome(scenario, party, setting) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// The deterministic behavior table of this strategy.
    pub fn behavior(&self, scenario: &Scenario) -> Behavior {
        let n = scenario.n_parties();
        let dim = scenario.dim();
        let tuples = scenario.n_setting_tuples();
        let strides = scenario.setting_strides();
        let mut probs = vec![0.0; tuples * dim];
        for s in 0..tuples {
            let mut r = 0usize;
            for i in 0..n {
                let k = (s / strides[i]) % scenario.settings()[i];
                r |= (self.outcome(scenario, i, k) as usize) << (n - 1 - i);
            }
            probs[s * dim + r] = 1.0;
        }
        Behavior::new(scenario.clone(), probs).expect("deterministic table is valid")
    }

    /// All correlator-term values of this strategy (products of the assigned
    /// signs), in the flat term order of the scenario.
    pub fn correlators(&self, scenario: &Scenario) -> Vec<f64> {
        let n = scenario.n_parties();
        let mut values = vec![1.0f64; scenario.n_terms()];
        // Walk the mixed-radix term space; digit 0 contributes factor 1.
        let strides = scenario.term_strides();
        for t in 1..values.len() {
            let mut rem = t;
            let mut v = 1.0;
            for i in 0..n {
                let d = rem / strides[i];
                rem %= strides[i];
                if d > 0 {
                    v *= self.sign(scenario, i, d - 1);
                }
            }
            values[t] = v;
        }
        values
    }
}

/// Enumerates all `prod 2^{m_i}` deterministic strategies.
pub fn vertices(scenario: &Scenario) -> Result<Vec<DeterministicStrategy>, PolytopeError> {
    let total_settings: usize = scenario.settings().iter().sum();
    if total_settings >= 32 || (1usize << total_settings) > MAX_VERTICES {
        return Err(PolytopeError::TooLarge(scenario.to_string()));
    }
    Ok((0..(1u32 << total_settings))
        .map(|bits| DeterministicStrategy { bits })
        .collect())
}

/// Result of a polytope LP query.
#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    /// Whether the queried behavior itself admits a local model.
    pub feasible: bool,
    /// Largest visibility `v` for which `v rho + (1-v) I/2^N` stays local
    /// (1.0 for membership queries that are feasible).
    pub v_star: f64,
    /// Vertex weights certifying the local model at `v_star`, when available.
    pub certificate: Option<Vec<f64>>,
}

/// Precomputed vertex data for one scenario, shared across LP solves.
pub struct LocalPolytope {
    scenario: Scenario,
    strategies: Vec<DeterministicStrategy>,
    /// Vertex correlators, column-major: entry `[v * n_terms + t]`.
    columns: Vec<f64>,
    n_terms: usize,
}

impl LocalPolytope {
    pub fn new(scenario: &Scenario) -> Result<Self, PolytopeError> {
        let strategies = vertices(scenario)?;
        let n_terms = scenario.n_terms();
        let mut columns = Vec::with_capacity(strategies.len() * n_terms);
        for s in &strategies {
            columns.extend(s.correlators(scenario));
        }
        Ok(LocalPolytope {
            scenario: scenario.clone(),
            strategies,
            columns,
            n_terms,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn n_vertices(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategies(&self) -> &[DeterministicStrategy] {
        &self.strategies
    }

    fn check_scenario(&self, t: &CorrelationTensor) -> Result<(), PolytopeError> {
        if t.scenario() != &self.scenario {
            return Err(PolytopeError::ScenarioMismatch {
                tensor: t.scenario().to_string(),
                polytope: self.scenario.to_string(),
            });
        }
        Ok(())
    }

    /// Feasibility of `sum_k q_k V_k = b, q >= 0, sum q = 1` for the behavior
    /// with the given correlation tensor. Infeasible means nonlocal.
    pub fn is_local_tensor(&self, t: &CorrelationTensor) -> Result<LpResult, PolytopeError> {
        self.check_scenario(t)?;
        let k = self.strategies.len();
        let rows = self.n_terms; // terms 1.. plus normalization row
        let mut a = vec![0.0f64; rows * k];
        let mut b = vec![0.0f64; rows];
        for term in 1..self.n_terms {
            for v in 0..k {
                a[(term - 1) * k + v] = self.columns[v * self.n_terms + term];
            }
            b[term - 1] = t.value_at(term);
        }
        for v in 0..k {
            a[(rows - 1) * k + v] = 1.0;
        }
        b[rows - 1] = 1.0;
        let c = vec![0.0f64; k];
        let sol = solve_equality_form(rows, k, &a, &b, &c)?;
        match sol.status {
            LpStatus::Infeasible => Ok(LpResult {
                feasible: false,
                v_star: 0.0,
                certificate: None,
            }),
            LpStatus::Optimal => Ok(LpResult {
                feasible: true,
                v_star: 1.0,
                certificate: Some(sol.x),
            }),
        }
    }

    /// Behavior-level membership query.
    pub fn is_local(&self, b: &Behavior) -> Result<LpResult, PolytopeError> {
        self.is_local_tensor(&b.correlation_tensor())
    }

    /// Maximizes `v` subject to `v P_rho + (1-v) I/2^N` being local. In
    /// correlator space the mixture has tensor `v * t`, so the constraints
    /// are `sum_k q_k V_k[term] - v * t[term] = 0`, `sum q = 1`,
    /// `v + slack = 1`.
    pub fn critical_visibility_tensor(
        &self,
        t: &CorrelationTensor,
    ) -> Result<LpResult, PolytopeError> {
        self.check_scenario(t)?;
        let k = self.strategies.len();
        let n_cols = k + 2; // q, v, slack
        let rows = self.n_terms + 1;
        let mut a = vec![0.0f64; rows * n_cols];
        let mut b = vec![0.0f64; rows];
        for term in 1..self.n_terms {
            let row = term - 1;
            for v in 0..k {
                a[row * n_cols + v] = self.columns[v * self.n_terms + term];
            }
            a[row * n_cols + k] = -t.value_at(term);
            b[row] = 0.0;
        }
        for v in 0..k {
            a[(self.n_terms - 1) * n_cols + v] = 1.0;
        }
        b[self.n_terms - 1] = 1.0;
        a[(rows - 1) * n_cols + k] = 1.0;
        a[(rows - 1) * n_cols + k + 1] = 1.0;
        b[rows - 1] = 1.0;

        let mut c = vec![0.0f64; n_cols];
        c[k] = -1.0; // maximize v
        let sol = solve_equality_form(rows, n_cols, &a, &b, &c)?;
        match sol.status {
            // v = 0 (pure white noise) is always local, so the program is
            // feasible for every valid tensor; treat the contrary as a
            // numerical failure.
            LpStatus::Infeasible => Err(PolytopeError::Lp(LpError::IterationLimit)),
            LpStatus::Optimal => {
                let v_star = sol.x[k].clamp(0.0, 1.0);
                let q = sol.x[..k].to_vec();
                Ok(LpResult {
                    feasible: v_star >= 1.0 - 1e-9,
                    v_star,
                    certificate: Some(q),
                })
            }
        }
    }

    /// Reconstructs the mixture behavior `sum_k q_k V_k` from a certificate.
    pub fn mixture_tensor(&self, weights: &[f64]) -> Vec<f64> {
        assert_eq!(weights.len(), self.strategies.len());
        let mut out = vec![0.0f64; self.n_terms];
        for (v, w) in weights.iter().enumerate() {
            if *w != 0.0 {
                let col = &self.columns[v * self.n_terms..(v + 1) * self.n_terms];
                for (o, cv) in out.iter_mut().zip(col) {
                    *o += w * cv;
                }
            }
        }
        out
    }
}

/// Exact classical bound of a folded inequality: the maximum of
/// `constant + sum w_t prod e` over all deterministic sign assignments,
/// in integer arithmetic. Catalog transcriptions must return 0.
pub fn classical_bound(ineq: &BellInequality) -> Result<i64, PolytopeError> {
    let scenario = ineq.scenario();
    let total_settings: usize = scenario.settings().iter().sum();
    if total_settings >= 32 || (1usize << total_settings) > MAX_VERTICES {
        return Err(PolytopeError::TooLarge(scenario.to_string()));
    }
    // Bit mask per term: one bit per (party, setting) factor; the term value
    // under a strategy flips sign once per factor assigned outcome 1.
    let mut offsets = vec![0usize; scenario.n_parties()];
    for i in 1..scenario.n_parties() {
        offsets[i] = offsets[i - 1] + scenario.settings()[i - 1];
    }
    let masked: Vec<(u32, i64)> = ineq
        .term_entries()
        .into_iter()
        .map(|(parts, w)| {
            let mut mask = 0u32;
            for (party, p) in parts.iter().enumerate() {
                if let Some(j) = p {
                    mask |= 1 << (offsets[party] + j);
                }
            }
            (mask, w)
        })
        .collect();
    let mut best = i64::MIN;
    for bits in 0u32..(1u32 << total_settings) {
        let mut value = ineq.constant();
        for &(mask, w) in &masked {
            if (bits & mask).count_ones() & 1 == 0 {
                value += w;
            } else {
                value -= w;
            }
        }
        best = best.max(value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::parse_inequality;
    use crate::quantum::{correlation_tensor, BlochSetting, SettingsSample, StateVector};
    use num_complex::Complex64;
    use rand::prelude::IndexedRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vertex_counts_match_the_product_formula() {
        for (s, count) in [("2x2", 16), ("2x2x2", 64), ("3x3x3", 512)] {
            let scenario: Scenario = s.parse().unwrap();
            assert_eq!(vertices(&scenario).unwrap().len(), count);
        }
    }

    #[test]
    fn oversized_scenarios_are_rejected() {
        let scenario: Scenario = "4x4x4x4x4x4".parse().unwrap();
        assert!(matches!(
            vertices(&scenario),
            Err(PolytopeError::TooLarge(_))
        ));
    }

    #[test]
    fn vertex_behaviors_are_deterministic() {
        let scenario: Scenario = "2x2".parse().unwrap();
        for v in vertices(&scenario).unwrap() {
            let b = v.behavior(&scenario);
            assert!(b.probs().iter().all(|&p| p == 0.0 || p == 1.0));
        }
    }

    #[test]
    fn chsh_has_zero_folded_bound() {
        let s: Scenario = "2x2".parse().unwrap();
        let chsh = parse_inequality("A0 B0 + A1 B0 + A0 B1 - A1 B1 - 2", &s).unwrap();
        assert_eq!(classical_bound(&chsh).unwrap(), 0);
    }

    fn ghz2_tsirelson() -> (StateVector, SettingsSample) {
        let scenario: Scenario = "2x2".parse().unwrap();
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = StateVector::new(vec![a, Complex64::ZERO, Complex64::ZERO, a]).unwrap();
        // Party 1 measures z and x; party 2 the diagonals (z+-x)/sqrt(2).
        let z = BlochSetting::from_angles(0.0, 0.0);
        let x = BlochSetting::from_angles(std::f64::consts::FRAC_PI_4, 0.0);
        let d1 = BlochSetting::from_angles(std::f64::consts::FRAC_PI_8, 0.0);
        let d2 = BlochSetting::from_angles(3.0 * std::f64::consts::FRAC_PI_8, 0.0);
        let sample = SettingsSample::new(scenario, vec![vec![z, x], vec![d1, d2]]).unwrap();
        (psi, sample)
    }

    #[test]
    fn tsirelson_point_is_nonlocal_with_v_star_inverse_sqrt2() {
        let (psi, sample) = ghz2_tsirelson();
        let t = correlation_tensor(&psi, &sample);
        let poly = LocalPolytope::new(sample.scenario()).unwrap();

        let membership = poly.is_local_tensor(&t).unwrap();
        assert!(!membership.feasible);

        let vis = poly.critical_visibility_tensor(&t).unwrap();
        assert!(!vis.feasible);
        let expected = std::f64::consts::FRAC_1_SQRT_2;
        assert!(
            (vis.v_star - expected).abs() < 1e-6,
            "v_star = {}, expected {expected}",
            vis.v_star
        );
    }

    #[test]
    fn uniform_behavior_is_local() {
        let scenario: Scenario = "2x2x2".parse().unwrap();
        let dim = scenario.dim();
        let probs = vec![1.0 / dim as f64; scenario.n_setting_tuples() * dim];
        let b = Behavior::new(scenario.clone(), probs).unwrap();
        let poly = LocalPolytope::new(&scenario).unwrap();
        let r = poly.is_local(&b).unwrap();
        assert!(r.feasible);
    }

    #[test]
    fn deterministic_behaviors_are_local() {
        let scenario: Scenario = "2x2x2".parse().unwrap();
        let poly = LocalPolytope::new(&scenario).unwrap();
        for v in poly.strategies().iter().step_by(7) {
            let r = poly.is_local(&v.behavior(&scenario)).unwrap();
            assert!(r.feasible);
        }
    }

    #[test]
    fn random_vertex_mixtures_are_feasible_and_reconstructed() {
        let scenario: Scenario = "2x2x2".parse().unwrap();
        let poly = LocalPolytope::new(&scenario).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let all: Vec<usize> = (0..poly.n_vertices()).collect();
        for _ in 0..10 {
            // Convex mixture of up to five random vertices.
            let picks: Vec<usize> = all.choose_multiple(&mut rng, 5).copied().collect();
            let mut weights = vec![0.0f64; poly.n_vertices()];
            let mut total = 0.0;
            for &p in &picks {
                let w: f64 = rand::Rng::random::<f64>(&mut rng) + 0.1;
                weights[p] += w;
                total += w;
            }
            for w in &mut weights {
                *w /= total;
            }
            let mut mix = poly.mixture_tensor(&weights);
            mix[0] = 1.0; // normalization drift from float division
            let t = CorrelationTensor::new(scenario.clone(), mix.clone()).unwrap();
            let r = poly.is_local_tensor(&t).unwrap();
            assert!(r.feasible);
            let rec = poly.mixture_tensor(&r.certificate.unwrap());
            let err = rec
                .iter()
                .zip(&mix)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(err < 1e-7, "reconstruction error {err}");
        }
    }
}
