//! Violation detectors behind a common trait, registered by name and chosen
//! at runtime: inequality families (the fast, incomplete route) and the
//! exact LP polytope oracle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::inequality::{lifted_chsh_family, symmetry_orbit, InequalityFamily};
use crate::polytope::{LocalPolytope, PolytopeError};
use crate::quantum::CorrelationTensor;
use crate::scenario::Scenario;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectorError {
    #[error("unknown detector {0:?}; see the detector registry")]
    Unknown(String),
    #[error("cannot build detector: {0}")]
    Build(String),
    #[error("LP failure while assessing a sample: {0}")]
    Lp(#[from] PolytopeError),
    #[error("tensor scenario {tensor} does not match detector scenario {detector}")]
    ScenarioMismatch { tensor: String, detector: String },
}

/// Which detection route produced an estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DetectorKind {
    /// Maximum over the variants of one or more inequality families.
    Family { names: Vec<String> },
    /// Exact local-polytope membership by linear programming.
    Lp,
}

/// A decision procedure for "do these correlations violate local realism,
/// and how strongly".
pub trait Detector: Send + Sync {
    fn kind(&self) -> DetectorKind;

    fn scenario(&self) -> &Scenario;

    /// Violation decision only; may be cheaper than a strength query.
    fn violates(&self, t: &CorrelationTensor) -> Result<bool, DetectorError>;

    /// `Some(S)` with the nonlocality strength `S = 1 - v_crit` when the
    /// sample is nonlocal, `None` otherwise.
    fn strength(&self, t: &CorrelationTensor) -> Result<Option<f64>, DetectorError>;
}

/// Family-based detector with the variants compiled to flat arrays.
pub struct FamilyDetector {
    scenario: Scenario,
    names: Vec<String>,
    families: Vec<InequalityFamily>,
    starts: Vec<u32>,
    offsets: Vec<u32>,
    weights: Vec<f64>,
    constants: Vec<f64>,
    eps: f64,
}

impl FamilyDetector {
    pub fn new(families: Vec<InequalityFamily>, eps: f64) -> Result<Self, DetectorError> {
        let Some(first) = families.first() else {
            return Err(DetectorError::Build("no families given".into()));
        };
        let scenario = first.scenario().clone();
        if families.iter().any(|f| f.scenario() != &scenario) {
            return Err(DetectorError::Build(
                "families live in different scenarios".into(),
            ));
        }
        let names = families
            .iter()
            .map(|f| f.provenance().to_string())
            .collect();
        let mut starts = vec![0u32];
        let mut offsets = Vec::new();
        let mut weights = Vec::new();
        let mut constants = Vec::new();
        for family in &families {
            for v in family.variants() {
                for &(off, w) in v.terms() {
                    offsets.push(off);
                    weights.push(w as f64);
                }
                starts.push(offsets.len() as u32);
                constants.push(v.constant() as f64);
            }
        }
        Ok(FamilyDetector {
            scenario,
            names,
            families,
            starts,
            offsets,
            weights,
            constants,
            eps,
        })
    }

    pub fn families(&self) -> &[InequalityFamily] {
        &self.families
    }

    pub fn n_variants(&self) -> usize {
        self.constants.len()
    }

    fn check(&self, t: &CorrelationTensor) -> Result<(), DetectorError> {
        if t.scenario() != &self.scenario {
            return Err(DetectorError::ScenarioMismatch {
                tensor: t.scenario().to_string(),
                detector: self.scenario.to_string(),
            });
        }
        Ok(())
    }
}

impl Detector for FamilyDetector {
    fn kind(&self) -> DetectorKind {
        DetectorKind::Family {
            names: self.names.clone(),
        }
    }

    fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    fn violates(&self, t: &CorrelationTensor) -> Result<bool, DetectorError> {
        self.check(t)?;
        let values = t.values();
        for v in 0..self.constants.len() {
            let lo = self.starts[v] as usize;
            let hi = self.starts[v + 1] as usize;
            let mut acc = 0.0f64;
            for i in lo..hi {
                acc += self.weights[i] * values[self.offsets[i] as usize];
            }
            if self.constants[v] + acc > self.eps {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn strength(&self, t: &CorrelationTensor) -> Result<Option<f64>, DetectorError> {
        self.check(t)?;
        let values = t.values();
        let mut best: Option<f64> = None;
        for v in 0..self.constants.len() {
            let lo = self.starts[v] as usize;
            let hi = self.starts[v + 1] as usize;
            let mut acc = 0.0f64;
            for i in lo..hi {
                acc += self.weights[i] * values[self.offsets[i] as usize];
            }
            let value = self.constants[v] + acc;
            if value > self.eps {
                // S = 1 - v_crit = 1 + constant / acc = value / acc.
                let s = value / acc;
                if best.map_or(true, |b| s > b) {
                    best = Some(s);
                }
            }
        }
        Ok(best)
    }
}

/// Exact oracle: LP feasibility for violation, visibility LP for strength.
pub struct LpDetector {
    polytope: LocalPolytope,
}

impl LpDetector {
    pub fn new(scenario: &Scenario) -> Result<Self, DetectorError> {
        Ok(LpDetector {
            polytope: LocalPolytope::new(scenario)?,
        })
    }

    pub fn polytope(&self) -> &LocalPolytope {
        &self.polytope
    }
}

impl Detector for LpDetector {
    fn kind(&self) -> DetectorKind {
        DetectorKind::Lp
    }

    fn scenario(&self) -> &Scenario {
        self.polytope.scenario()
    }

    fn violates(&self, t: &CorrelationTensor) -> Result<bool, DetectorError> {
        Ok(!self.polytope.is_local_tensor(t)?.feasible)
    }

    fn strength(&self, t: &CorrelationTensor) -> Result<Option<f64>, DetectorError> {
        let r = self.polytope.critical_visibility_tensor(t)?;
        if r.feasible {
            Ok(None)
        } else {
            Ok(Some(1.0 - r.v_star))
        }
    }
}

/// One registry row: a detector name and what it builds.
#[derive(Clone, Debug)]
pub struct DetectorEntry {
    pub name: String,
    pub summary: String,
}

/// Every name accepted by [`build_detector`].
pub fn available_detectors() -> Vec<DetectorEntry> {
    let mut out = vec![
        DetectorEntry {
            name: "lp".into(),
            summary: "exact local-polytope membership via linear programming".into(),
        },
        DetectorEntry {
            name: "iopt".into(),
            summary: "lifted CHSH family adapted to the scenario".into(),
        },
    ];
    for name in catalog::inequality_names() {
        if name == "I_opt" {
            continue; // the CHSH seed is reachable as "iopt"
        }
        out.push(DetectorEntry {
            name: name.to_string(),
            summary: format!("symmetry orbit of the cataloged inequality {name}"),
        });
    }
    out
}

/// Builds a detector from its registry name: `"lp"`, `"iopt"`, a cataloged
/// inequality name, or a comma-separated list of family names whose orbits
/// are pooled into one detector.
pub fn build_detector(
    spec: &str,
    scenario: &Scenario,
    eps: f64,
) -> Result<Box<dyn Detector>, DetectorError> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("lp") {
        return Ok(Box::new(LpDetector::new(scenario)?));
    }
    let mut families = Vec::new();
    for part in spec.split(',') {
        let name = part.trim();
        if name.is_empty() {
            continue;
        }
        families.push(build_family(name, scenario)?);
    }
    if families.is_empty() {
        return Err(DetectorError::Unknown(spec.to_string()));
    }
    Ok(Box::new(FamilyDetector::new(families, eps)?))
}

/// Builds one named family in the given scenario.
pub fn build_family(name: &str, scenario: &Scenario) -> Result<InequalityFamily, DetectorError> {
    let lowered: String = name
        .chars()
        .filter(|c| *c != '_')
        .map(|c| c.to_ascii_lowercase())
        .collect();
    if lowered == "iopt" {
        return lifted_chsh_family(scenario)
            .map_err(|e| DetectorError::Build(format!("iopt in {scenario}: {e}")));
    }
    let named = catalog::get_inequality(name)
        .map_err(|_| DetectorError::Unknown(name.to_string()))?;
    symmetry_orbit(
        &named.inequality,
        scenario,
        &format!("{} orbit", named.name),
    )
    .map_err(|e| DetectorError::Build(format!("{name} in {scenario}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{correlation_tensor, SettingsSample};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn registry_lists_lp_iopt_and_catalog_names() {
        let names: Vec<String> = available_detectors().into_iter().map(|e| e.name).collect();
        assert!(names.contains(&"lp".to_string()));
        assert!(names.contains(&"iopt".to_string()));
        assert!(names.contains(&"I_5".to_string()));
        assert!(names.contains(&"MABK3".to_string()));
    }

    #[test]
    fn family_and_lp_detectors_agree_with_each_other_on_samples() {
        let scenario: Scenario = "2x2".parse().unwrap();
        let family = build_detector("iopt", &scenario, 1e-9).unwrap();
        let lp = build_detector("lp", &scenario, 1e-9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let psi = crate::catalog::get_state("GHZ2").unwrap();
        let mut violations = 0;
        for _ in 0..200 {
            let sample = SettingsSample::sample(&scenario, &mut rng);
            let t = correlation_tensor(&psi, &sample);
            let f = family.violates(&t).unwrap();
            let l = lp.violates(&t).unwrap();
            // In the 2x2 scenario the CHSH orbit is the complete facet set,
            // so the two detectors must agree exactly.
            assert_eq!(f, l);
            if f {
                violations += 1;
                let sf = family.strength(&t).unwrap().unwrap();
                let sl = lp.strength(&t).unwrap().unwrap();
                assert!((sf - sl).abs() < 1e-6, "family {sf} vs lp {sl}");
            }
        }
        assert!(violations > 10);
    }

    #[test]
    fn pooled_families_share_one_kind() {
        let scenario: Scenario = "2x2x2".parse().unwrap();
        let det = build_detector("iopt,I_5,I_6", &scenario, 1e-9).unwrap();
        match det.kind() {
            DetectorKind::Family { names } => assert_eq!(names.len(), 3),
            _ => panic!("expected family detector"),
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        let scenario: Scenario = "2x2x2".parse().unwrap();
        assert!(matches!(
            build_detector("no-such-detector", &scenario, 1e-9),
            Err(DetectorError::Unknown(_))
        ));
    }
}
