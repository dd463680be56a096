//! Measurement directions on the Bloch sphere and per-party setting samples.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::scenario::Scenario;

use super::QuantumError;

/// A projective qubit measurement direction, parametrized as in the sampling
/// recipe: polar angle `2*phi`, azimuth `xi`, so the Bloch vector is
/// `(sin 2phi cos xi, sin 2phi sin xi, cos 2phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochSetting {
    pub phi: f64,
    pub xi: f64,
    unit: [f64; 3],
}

impl BlochSetting {
    pub fn from_angles(phi: f64, xi: f64) -> Self {
        let (s, c) = (2.0 * phi).sin_cos();
        let unit = [s * xi.cos(), s * xi.sin(), c];
        BlochSetting { phi, xi, unit }
    }

    /// The Haar parametrization: `phi = arcsin(sqrt(omega))` with `omega`
    /// uniform on `[0,1)` and `xi` uniform on `[0,2pi)` makes the direction
    /// uniform on the sphere (`cos 2phi = 1 - 2 omega` is uniform on (-1,1]).
    pub fn from_haar_pair(omega: f64, xi: f64) -> Self {
        Self::from_angles(omega.sqrt().asin(), xi)
    }

    /// Draws one Haar-uniform measurement direction.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let xi = TAU * rng.random::<f64>();
        let omega = rng.random::<f64>();
        Self::from_haar_pair(omega, xi)
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        self.unit
    }

    /// The observable `e . sigma` as a dense 2x2 Hermitian matrix with
    /// eigenvalues +1 (outcome 0) and -1 (outcome 1).
    pub fn observable(&self) -> [[Complex64; 2]; 2] {
        let [x, y, z] = self.unit;
        [
            [Complex64::new(z, 0.0), Complex64::new(x, -y)],
            [Complex64::new(x, y), Complex64::new(-z, 0.0)],
        ]
    }
}

/// One joint draw of measurement directions: `m_i` settings for each party.
#[derive(Clone, Debug)]
pub struct SettingsSample {
    scenario: Scenario,
    per_party: Vec<Vec<BlochSetting>>,
}

impl SettingsSample {
    pub fn new(
        scenario: Scenario,
        per_party: Vec<Vec<BlochSetting>>,
    ) -> Result<Self, QuantumError> {
        if per_party.len() != scenario.n_parties()
            || per_party
                .iter()
                .zip(scenario.settings())
                .any(|(v, &m)| v.len() != m)
        {
            return Err(QuantumError::ShapeMismatch(format!(
                "settings sample does not match scenario {scenario}"
            )));
        }
        Ok(SettingsSample {
            scenario,
            per_party,
        })
    }

    /// Draws all `sum m_i` directions independently, party-major order.
    pub fn sample<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Self {
        let per_party = scenario
            .settings()
            .iter()
            .map(|&m| (0..m).map(|_| BlochSetting::sample(rng)).collect())
            .collect();
        SettingsSample {
            scenario: scenario.clone(),
            per_party,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn party(&self, i: usize) -> &[BlochSetting] {
        &self.per_party[i]
    }

    pub fn setting(&self, party: usize, j: usize) -> &BlochSetting {
        &self.per_party[party][j]
    }
}
