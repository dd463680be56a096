//! Multipartite-entanglement witnessing via the nonlocal fraction: a state
//! whose fraction exceeds the best value attainable by two-producible states
//! (states carrying only bipartite entanglement) must be multipartite
//! entangled.

use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;

/// Nonlocal fraction of a maximally entangled two-qubit pair under two
/// Haar-random settings per side: `2 (pi - 3)`.
pub const PAIR_FRACTION_2X2: f64 = 2.0 * (std::f64::consts::PI - 3.0);
/// Pair fraction for a 3x2 scenario.
pub const PAIR_FRACTION_3X2: f64 = 0.52401;
/// Pair fraction for a 3x3 scenario.
pub const PAIR_FRACTION_3X3: f64 = 0.78219;

/// Numerically supported (conjectural) bound for the 2x2x2x2 nonlocal
/// fraction of biproduct four-qubit states; exceeding it indicates genuine
/// four-partite entanglement.
pub const GENUINE_FOUR_PARTITE_THRESHOLD: f64 = 0.74688;

/// Fraction of a product of two independently violating blocks:
/// at least one block must violate.
pub fn product_fraction(p_a: f64, p_b: f64) -> f64 {
    1.0 - (1.0 - p_a) * (1.0 - p_b)
}

/// A two-producible threshold: its conventional name and value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub name: String,
    pub value: f64,
}

/// Largest nonlocal fraction attainable by two-producible states in the
/// given scenario, where tabulated. The settings multiset decides the row;
/// party order is irrelevant.
pub fn two_producible_threshold(scenario: &Scenario) -> Option<Threshold> {
    let mut sorted: Vec<usize> = scenario.settings().to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let t = |name: &str, value: f64| {
        Some(Threshold {
            name: name.to_string(),
            value,
        })
    };
    match sorted.as_slice() {
        [2, 2, 2] => t("P22", PAIR_FRACTION_2X2),
        [3, 2, 2] => t("P32", PAIR_FRACTION_3X2),
        [3, 3, 2] => t("P33", PAIR_FRACTION_3X3),
        [3, 3, 3] => t("P33", PAIR_FRACTION_3X3),
        [2, 2, 1, 1] => t("P22", PAIR_FRACTION_2X2),
        [2, 2, 2, 1] => t("P22", PAIR_FRACTION_2X2),
        [2, 2, 2, 2] => t(
            "P2222",
            product_fraction(PAIR_FRACTION_2X2, PAIR_FRACTION_2X2),
        ),
        [3, 2, 2, 2] => t(
            "P3222",
            product_fraction(PAIR_FRACTION_3X2, PAIR_FRACTION_2X2),
        ),
        [3, 3, 2, 2] => t(
            "P3322",
            product_fraction(PAIR_FRACTION_3X3, PAIR_FRACTION_2X2),
        ),
        [3, 3, 3, 2] => t(
            "P3332",
            product_fraction(PAIR_FRACTION_3X3, PAIR_FRACTION_3X2),
        ),
        [2, 2, 1, 1, 1] => t("P22", PAIR_FRACTION_2X2),
        [2, 2, 2, 1, 1] => t("P22", PAIR_FRACTION_2X2),
        [2, 2, 2, 2, 1] => t(
            "P2222",
            product_fraction(PAIR_FRACTION_2X2, PAIR_FRACTION_2X2),
        ),
        [2, 2, 2, 2, 2] => t(
            "P2222",
            product_fraction(PAIR_FRACTION_2X2, PAIR_FRACTION_2X2),
        ),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessVerdict {
    Detected,
    NotDetected,
    Inconclusive,
}

/// Outcome of comparing an estimated fraction against a threshold with a
/// two-standard-error band.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub p_v: f64,
    pub stderr_p_v: f64,
    pub threshold: Option<Threshold>,
    pub verdict: WitnessVerdict,
    pub explanation: String,
    /// Present only for the 2x2x2x2 scenario: comparison against the
    /// conjectural genuine-four-partite bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genuine_four_partite: Option<ConjecturalReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjecturalReport {
    pub threshold: f64,
    pub verdict: WitnessVerdict,
    /// This bound rests on numerical evidence, not a proof.
    pub conjectural: bool,
}

fn compare(p_v: f64, stderr: f64, threshold: f64) -> WitnessVerdict {
    if p_v - 2.0 * stderr > threshold {
        WitnessVerdict::Detected
    } else if p_v + 2.0 * stderr < threshold {
        WitnessVerdict::NotDetected
    } else {
        WitnessVerdict::Inconclusive
    }
}

/// Assesses an estimated nonlocal fraction as a multipartite-entanglement
/// witness for the given scenario.
pub fn assess_witness(scenario: &Scenario, p_v: f64, stderr_p_v: f64) -> WitnessReport {
    let threshold = two_producible_threshold(scenario);
    let (verdict, explanation) = match &threshold {
        Some(t) => {
            let verdict = compare(p_v, stderr_p_v, t.value);
            let explanation = match verdict {
                WitnessVerdict::Detected => format!(
                    "p_v - 2 stderr = {:.5} exceeds the two-producible bound {} = {:.5}: \
                     the state is multipartite entangled",
                    p_v - 2.0 * stderr_p_v,
                    t.name,
                    t.value
                ),
                WitnessVerdict::NotDetected => format!(
                    "p_v + 2 stderr = {:.5} stays below {} = {:.5}: no entanglement claim",
                    p_v + 2.0 * stderr_p_v,
                    t.name,
                    t.value
                ),
                WitnessVerdict::Inconclusive => format!(
                    "p_v = {:.5} lies within 2 stderr of {} = {:.5}",
                    p_v, t.name, t.value
                ),
            };
            (verdict, explanation)
        }
        None => (
            WitnessVerdict::Inconclusive,
            format!("no two-producible threshold is tabulated for scenario {scenario}"),
        ),
    };

    let mut sorted: Vec<usize> = scenario.settings().to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let genuine_four_partite = (sorted == [2, 2, 2, 2]).then(|| ConjecturalReport {
        threshold: GENUINE_FOUR_PARTITE_THRESHOLD,
        verdict: compare(p_v, stderr_p_v, GENUINE_FOUR_PARTITE_THRESHOLD),
        conjectural: true,
    });

    WitnessReport {
        p_v,
        stderr_p_v,
        threshold,
        verdict,
        explanation,
        genuine_four_partite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_and_composite_values() {
        assert!((PAIR_FRACTION_2X2 - 0.2831853).abs() < 1e-7);
        let p2222 = product_fraction(PAIR_FRACTION_2X2, PAIR_FRACTION_2X2);
        let p3222 = product_fraction(PAIR_FRACTION_3X2, PAIR_FRACTION_2X2);
        let p3322 = product_fraction(PAIR_FRACTION_3X3, PAIR_FRACTION_2X2);
        let p3332 = product_fraction(PAIR_FRACTION_3X3, PAIR_FRACTION_3X2);
        assert!((p2222 - 0.4862).abs() < 5e-5, "{p2222}");
        assert!((p3222 - 0.6588).abs() < 5e-5, "{p3222}");
        assert!((p3322 - 0.8439).abs() < 5e-5, "{p3322}");
        assert!((p3332 - 0.8963).abs() < 5e-5, "{p3332}");
    }

    #[test]
    fn threshold_lookup_ignores_party_order() {
        let a: Scenario = "2x2x3".parse().unwrap();
        let b: Scenario = "3x2x2".parse().unwrap();
        assert_eq!(
            two_producible_threshold(&a),
            two_producible_threshold(&b)
        );
    }

    #[test]
    fn ghz3_fraction_detects_entanglement() {
        let s: Scenario = "2x2x2".parse().unwrap();
        let r = assess_witness(&s, 0.70, 0.001);
        assert_eq!(r.verdict, WitnessVerdict::Detected);
        assert!(r.genuine_four_partite.is_none());
    }

    #[test]
    fn wide_error_bars_are_inconclusive() {
        let s: Scenario = "2x2x2".parse().unwrap();
        let r = assess_witness(&s, 0.29, 0.01);
        assert_eq!(r.verdict, WitnessVerdict::Inconclusive);
        let r = assess_witness(&s, 0.10, 0.01);
        assert_eq!(r.verdict, WitnessVerdict::NotDetected);
    }

    #[test]
    fn four_qubit_full_scenario_adds_conjectural_report() {
        let s: Scenario = "2x2x2x2".parse().unwrap();
        let r = assess_witness(&s, 0.89, 0.002);
        assert_eq!(r.verdict, WitnessVerdict::Detected);
        let g = r.genuine_four_partite.unwrap();
        assert!(g.conjectural);
        assert_eq!(g.verdict, WitnessVerdict::Detected);
    }

    #[test]
    fn unknown_scenarios_stay_inconclusive() {
        let s: Scenario = "4x4".parse().unwrap();
        let r = assess_witness(&s, 0.99, 0.001);
        assert_eq!(r.verdict, WitnessVerdict::Inconclusive);
        assert!(r.threshold.is_none());
    }
}
