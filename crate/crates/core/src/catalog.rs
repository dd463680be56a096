//! Built-in library of benchmark states and Bell inequalities.
//!
//! The inequality table covers the three-qubit 2x2x2 classes that dominate
//! the nonlocal fraction, the genuine multisetting 3x2x2 / 3x3x2 / 3x3x3
//! classes, the three-qubit Mermin (MABK) form, and the CHSH seed of the
//! lifted family. Every entry is verified against a brute-force classical
//! bound of exactly zero before it is handed out.

use num_complex::Complex64;
use thiserror::Error;

use crate::inequality::{parse_inequality, BellInequality};
use crate::polytope::classical_bound;
use crate::quantum::StateVector;
use crate::scenario::Scenario;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown state name {0:?}")]
    UnknownState(String),
    #[error("unknown inequality name {0:?}")]
    UnknownInequality(String),
    #[error("cannot parse state spec {0:?}")]
    BadStateSpec(String),
}

/// A cataloged state with its canonical name.
#[derive(Clone, Debug)]
pub struct NamedState {
    pub name: &'static str,
    pub vector: StateVector,
}

/// A cataloged inequality: canonical name, the scenario it is printed in,
/// and the folded coefficient table.
#[derive(Clone, Debug)]
pub struct NamedInequality {
    pub name: &'static str,
    pub base_scenario: Scenario,
    pub inequality: BellInequality,
}

const STATE_NAMES: &[&str] = &[
    "GHZ2", "GHZ3", "W3", "GHZ4", "W4", "D2_4", "Cl4", "GHZ5", "W5", "D2_5", "LCl5", "RCl5",
    "psi3",
];

/// `(name, scenario, folded correlator expression)`.
///
/// Party letters A, B, C index parties 1..3; digits are setting indices; the
/// trailing integer is the classical constant folded in, so each expression
/// is `<= 0` for local models.
const INEQUALITY_TABLE: &[(&str, &str, &str)] = &[
    ("I_opt", "2x2", "A0 B0 + A1 B0 + A0 B1 - A1 B1 - 2"),
    (
        "I_5",
        "2x2x2",
        "A0 - A0 B0 C0 - A0 B0 C1 + A0 B1 - A0 B1 C0 + A0 C1 + A1 B0 - A1 B0 C0 - A1 B1 \
         + A1 B1 C1 + A1 C0 - A1 C1 + B0 + B0 C1 + B1 C0 - B1 C1 + C0 - 3",
    ),
    (
        "I_6",
        "2x2x2",
        "A0 + A0 B0 - A0 B0 C0 - A0 B1 C0 - A0 B1 C1 + A0 C1 - A1 B0 C0 + A1 B0 C1 \
         + A1 C0 - A1 C1 + B0 - B0 C1 + B1 C0 + B1 C1 + C0 - 3",
    ),
    (
        "I_13",
        "2x2x2",
        "2 A0 B0 + A0 B0 C0 + A0 B0 C1 + A0 B1 C0 - A0 B1 C1 + 2 A1 B0 - A1 B0 C0 \
         - A1 B0 C1 - A1 B1 C0 + A1 B1 C1 - 4",
    ),
    (
        "I_16",
        "2x2x2",
        "A0 + A0 B0 + A0 B0 C1 + A0 B1 C0 - A0 B1 C1 + A0 C0 + A1 + A1 B0 - 2 A1 B0 C0 \
         - A1 B0 C1 - A1 B1 C0 + A1 B1 C1 + A1 C0 - 4",
    ),
    (
        "I_19",
        "2x2x2",
        "A0 + A0 B0 + A0 B0 C1 - A0 B1 C0 + A0 B1 C1 + A0 C0 + A1 + A1 B0 - A1 B0 C1 \
         - A1 B1 C0 - A1 B1 C1 + A1 C0 - 2 B0 C0 + 2 B1 C0 - 4",
    ),
    (
        "I_21",
        "2x2x2",
        "A0 + A0 B0 - 2 A0 B0 C0 + A0 B0 C1 - A0 B1 C0 - A0 B1 C1 + A0 C0 + A1 + B1 \
         - A1 B0 C0 - A1 B0 C1 - A1 B1 + A1 B1 C1 + A1 C0 + B0 + B0 C0 + B1 C0 - 4",
    ),
    (
        "I_30",
        "2x2x2",
        "A0 + 2 A0 B0 + 2 A0 B0 C0 - 2 A0 B0 C1 + A0 B1 + A0 B1 C0 + 2 A0 B1 C1 + A0 C0 \
         - 2 A1 B0 + A1 B0 C0 - A1 B0 C1 - A1 B1 + 2 A1 B1 C0 + A1 B1 C1 + A1 - A1 C0 \
         - B0 C0 + B0 C1 - B1 C0 - B1 C1 - 6",
    ),
    (
        "I322_1",
        "3x2x2",
        "- 2 A0 B0 C0 - 2 A0 B1 C1 + A1 B0 C0 - A1 B0 C1 + A1 B1 C0 - A1 B1 C1 \
         - A2 B0 C0 - A2 B0 C1 + A2 B1 C0 + A2 B1 C1 - 4",
    ),
    // The published tail reads "- 4", but the expression has 13 odd-weight
    // terms, so its value at any deterministic strategy is odd; the true
    // LHV bound of the printed polynomial is 5.
    (
        "I322_2",
        "3x2x2",
        "- A0 + A0 B0 C0 + A0 B1 - A0 B1 C1 - A0 C1 - A1 B0 C1 - A1 B1 C0 + A2 \
         - A2 B0 C0 + A2 B1 + A2 B1 C1 - A2 C1 + B0 C0 - 5",
    ),
    (
        "I322_3",
        "3x2x2",
        "A0 B0 C0 - A0 B0 C1 + A0 B1 C0 + A0 B1 C1 + 2 A0 C0 + A1 B1 C0 + A1 B1 C1 \
         - A1 C0 - A1 C1 - A2 B0 C0 + A2 B0 C1 + A2 C0 - A2 C1 - 4",
    ),
    (
        "I322_4",
        "3x2x2",
        "A0 B0 + 2 A0 B0 C0 + A0 B0 C1 + A0 B1 - A0 B1 C1 - A1 B0 + A1 B0 C0 - A1 B1 \
         + A1 B1 C0 + A2 B0 C0 - A2 B0 C1 - A2 B1 C0 + A2 B1 C1 - 4",
    ),
    (
        "I322_5",
        "3x2x2",
        "- A0 B0 C0 + A0 B0 C1 + A0 C0 - A0 C1 + A1 B0 - A1 B0 C0 + A1 B1 + B1 \
         + A1 B1 C0 + 2 A1 C1 + A2 B1 C0 + A2 B1 C1 - A2 C0 - A2 C1 + B0 - B0 C1 \
         - B1 C1 - 4",
    ),
    (
        "I322_6",
        "3x2x2",
        "2 A0 B1 C0 - 2 A0 B1 C1 - A1 C0 - A1 C1 - A1 B0 C0 - A1 B0 C1 + A2 C0 + A2 C1 \
         - A2 B0 C0 - A2 B0 C1 - 4",
    ),
    (
        "I322_7",
        "3x2x2",
        "- A0 B0 C0 - A0 B0 C1 - A0 B1 C0 - A0 B1 C1 - A1 B0 C0 + A1 B0 C1 - A1 B1 C0 \
         + A1 B1 C1 - 2 A2 B0 + 2 A2 B1 - 4",
    ),
    (
        "I322_8",
        "3x2x2",
        "A0 - A0 B0 + A0 C0 - A0 B0 C1 - A0 B1 C0 + A0 B1 C1 + A1 B0 - A1 B0 C0 + A1 B1 \
         - A1 B1 C0 - A2 - A2 B1 - A2 C0 - A2 B0 C0 - A2 B0 C1 + A2 B1 C1 - 4",
    ),
    (
        "I322_9",
        "3x3x2",
        "A0 B1 C0 + A0 B1 C1 - A1 B1 - A1 B1 C0 + A2 B1 - A2 B1 C1 - A0 B2 C0 - A0 B2 C1 \
         - A1 B2 - A1 B2 C1 + A2 B2 - A2 B2 C0 - A1 C0 + A1 C1 - A2 C0 + A2 C1 - 4",
    ),
    (
        "I332_1",
        "3x3x2",
        "- A0 B0 + A0 B0 C0 - 2 A0 B1 C1 + A0 B2 + A0 B2 C0 + 2 A1 B0 C1 + A2 B0 \
         + 4 A1 B1 C0 + 2 A1 B2 C1 + A2 B0 C0 - 2 A2 B1 C1 - A2 B2 + A2 B2 C0 - 8",
    ),
    (
        "I332_2",
        "3x3x2",
        "- A0 B0 C0 - A0 B0 C1 - A0 B1 C0 + A0 B1 C1 + 2 A0 B2 C1 - A1 B1 C0 + A1 B1 C1 \
         + A1 B2 C0 - A1 B2 C1 - A2 B0 C0 - A2 B0 C1 - A2 B2 C0 - A2 B2 C1 - 4",
    ),
    (
        "I332_3",
        "3x3x2",
        "- A0 B0 + A0 B0 C0 + A0 B1 C0 - A0 B1 C1 - A0 B2 + A0 B2 C1 + A1 B0 - A1 B0 C0 \
         - A1 B1 - A1 B1 C1 + A1 B2 C0 + A1 B2 C1 - A2 B1 - A2 B1 C0 - A2 B2 - A2 B2 C0 \
         - 4",
    ),
    (
        "I332_4",
        "3x3x2",
        "A0 B0 C0 + A0 B0 C1 + A0 B1 C0 + A0 B1 C1 - A1 B0 + A1 B0 C0 + A1 B1 \
         - A1 B1 C1 + A1 B2 C0 - A1 B2 C1 + A2 B0 + A2 B0 C1 - A2 B1 - A2 B1 C0 \
         + A2 B2 C0 - A2 B2 C1 - 4",
    ),
    (
        "I332_5",
        "3x3x2",
        "2 A0 B2 C0 - A0 B0 C1 + A0 B2 C1 - A0 B0 + 2 A0 B1 + A0 B2 + 2 A1 B0 C0 \
         + 2 A1 B1 C0 - 2 A1 B1 C1 + 2 A1 B2 C1 + 2 A2 B2 C0 - A2 B0 C1 + A2 B2 C1 \
         + A2 B0 - 2 A2 B1 - A2 B2 - 8",
    ),
    (
        "I332_6",
        "3x3x3",
        "A0 B0 C0 - A0 B0 C2 - A0 B1 C0 + A0 B1 C2 + A1 B0 C0 - A1 B0 C2 - A1 B1 C2 \
         + A2 B2 C0 + A2 B2 C2 - A2 C0 - A2 C2 - B2 C0 - B2 C2 + A1 B1 C0 - C0 - C2 - 4",
    ),
    (
        "I333_1",
        "3x3x3",
        "A0 B0 C0 + A0 B0 C1 + A0 B2 C0 + A0 B2 C1 - A1 B0 C0 - A1 B0 C2 - A1 B1 C1 \
         + A1 B2 C1 + A1 B2 C2 - A2 B0 C1 + A2 B0 C2 + A2 B1 C0 + A1 B1 C0 - A2 B1 C1 \
         + A2 B2 C0 - A2 B2 C2 - 4",
    ),
    (
        "I333_2",
        "3x3x3",
        "A0 B0 C0 - A0 B0 C2 + A0 B1 C1 - A0 B1 C2 + A0 B2 C0 - A0 B2 C1 + A1 B0 C2 \
         + 2 A1 B1 C0 + A1 B1 C1 + A1 B1 C2 + A1 B2 C0 - A1 B0 C0 - A1 B2 C1 - 4",
    ),
    // Standard three-qubit Mermin expression, setting indices as printed in
    // its usual 1-based form (112 + 121 + 211 - 222), refolded to <= 0.
    ("MABK3", "2x2x2", "A0 B0 C1 + A0 B1 C0 + A1 B0 C0 - A1 B1 C1 - 2"),
];

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| *c != '_')
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

/// Canonical names of all cataloged states.
pub fn state_names() -> Vec<&'static str> {
    STATE_NAMES.to_vec()
}

/// Canonical names of all cataloged inequalities.
pub fn inequality_names() -> Vec<&'static str> {
    INEQUALITY_TABLE.iter().map(|(n, _, _)| *n).collect()
}

/// Looks up a state by name (case-insensitive, underscores optional).
pub fn get_state(name: &str) -> Result<StateVector, CatalogError> {
    let key = normalize(name);
    STATE_NAMES
        .iter()
        .find(|n| normalize(n) == key)
        .map(|n| build_state(n))
        .ok_or_else(|| CatalogError::UnknownState(name.to_string()))
}

/// Looks up an inequality by name and verifies its classical bound is exactly
/// zero over all deterministic strategies before returning it.
pub fn get_inequality(name: &str) -> Result<NamedInequality, CatalogError> {
    let key = normalize(name);
    let (canon, scenario, text) = INEQUALITY_TABLE
        .iter()
        .find(|(n, _, _)| normalize(n) == key)
        .ok_or_else(|| CatalogError::UnknownInequality(name.to_string()))?;
    let scenario: Scenario = scenario.parse().expect("catalog scenario is valid");
    let inequality = parse_inequality(text, &scenario).expect("catalog text is well-formed");
    let bound = classical_bound(&inequality).expect("catalog scenario is enumerable");
    assert_eq!(
        bound, 0,
        "catalog transcription of {canon} has classical bound {bound}, expected 0"
    );
    Ok(NamedInequality {
        name: canon,
        base_scenario: scenario,
        inequality,
    })
}

/// One row of the human-readable catalog listing.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: &'static str,
    pub shape: String,
}

/// Complete listing: every state with its qubit count, every inequality with
/// its base scenario.
pub fn list_catalog() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = STATE_NAMES
        .iter()
        .map(|n| CatalogEntry {
            name: n.to_string(),
            kind: "state",
            shape: format!("{} qubits", build_state(n).n_qubits()),
        })
        .collect();
    out.extend(INEQUALITY_TABLE.iter().map(|(n, s, _)| CatalogEntry {
        name: n.to_string(),
        kind: "inequality",
        shape: s.to_string(),
    }));
    out
}

/// Machine-readable export of the whole catalog.
///
/// Schema: `{"states": [{"name", "n_qubits", "amplitudes": [[re, im], ..]}],
/// "inequalities": [{"name", "scenario", "constant", "bound",
/// "terms": [{"factors": [[party, setting], ..], "weight"}]}]}`.
/// `terms` lists only the non-constant coefficients; the inequality reads
/// `constant + sum(weight * <prod E>) <= bound` with `bound` always 0.
pub fn export_json() -> serde_json::Value {
    let states: Vec<serde_json::Value> = STATE_NAMES
        .iter()
        .map(|n| {
            let v = build_state(n);
            serde_json::json!({
                "name": n,
                "n_qubits": v.n_qubits(),
                "amplitudes": v
                    .amplitudes()
                    .iter()
                    .map(|a| serde_json::json!([a.re, a.im]))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let inequalities: Vec<serde_json::Value> = INEQUALITY_TABLE
        .iter()
        .map(|(n, _, _)| {
            let named = get_inequality(n).expect("catalog entry");
            let terms: Vec<serde_json::Value> = named
                .inequality
                .term_entries()
                .into_iter()
                .map(|(parts, w)| {
                    let factors: Vec<serde_json::Value> = parts
                        .iter()
                        .enumerate()
                        .filter_map(|(party, p)| p.map(|j| serde_json::json!([party, j])))
                        .collect();
                    serde_json::json!({ "factors": factors, "weight": w })
                })
                .collect();
            serde_json::json!({
                "name": n,
                "scenario": named.base_scenario.to_string(),
                "constant": named.inequality.constant(),
                "bound": 0,
                "terms": terms,
            })
        })
        .collect();
    serde_json::json!({ "states": states, "inequalities": inequalities })
}

/// Parses a state specification: a catalog name, a computational basis
/// bitstring, or a tensor product of those joined by `x`
/// (e.g. `"GHZ2x00"` for `GHZ2 (x) |00>`).
pub fn parse_state_spec(spec: &str) -> Result<StateVector, CatalogError> {
    if let Ok(s) = get_state(spec) {
        return Ok(s);
    }
    if !spec.is_empty() && spec.chars().all(|c| c == '0' || c == '1') {
        let n = spec.len();
        let idx = usize::from_str_radix(spec, 2).expect("binary literal");
        return Ok(StateVector::basis(n, idx));
    }
    // Try every split at an 'x'; leftmost split that parses wins.
    for (i, c) in spec.char_indices() {
        if c != 'x' && c != 'X' {
            continue;
        }
        let (left, right) = (&spec[..i], &spec[i + 1..]);
        if left.is_empty() || right.is_empty() {
            continue;
        }
        if let (Ok(a), Ok(b)) = (parse_state_spec(left), parse_state_spec(right)) {
            return Ok(a.tensor(&b));
        }
    }
    Err(CatalogError::BadStateSpec(spec.to_string()))
}

fn build_state(name: &str) -> StateVector {
    match name {
        "GHZ2" => ghz(2),
        "GHZ3" => ghz(3),
        "GHZ4" => ghz(4),
        "GHZ5" => ghz(5),
        "W3" => dicke(3, 1),
        "W4" => dicke(4, 1),
        "W5" => dicke(5, 1),
        "D2_4" => dicke(4, 2),
        "D2_5" => dicke(5, 2),
        "Cl4" => signed_superposition(4, &[(0b0000, 1.0), (0b1100, 1.0), (0b0011, 1.0), (0b1111, -1.0)]),
        "LCl5" => signed_superposition(
            5,
            &[
                (0b00000, 1.0),
                (0b00010, 1.0),
                (0b00101, 1.0),
                (0b00111, -1.0),
                (0b01000, 1.0),
                (0b01010, 1.0),
                (0b01101, 1.0),
                (0b01111, -1.0),
                (0b10001, 1.0),
                (0b10011, -1.0),
                (0b10100, 1.0),
                (0b10110, 1.0),
                (0b11001, -1.0),
                (0b11011, 1.0),
                (0b11100, -1.0),
                (0b11110, -1.0),
            ],
        ),
        "RCl5" => signed_superposition(
            5,
            &[
                (0b00001, 1.0),
                (0b00010, 1.0),
                (0b00100, 1.0),
                (0b00111, -1.0),
                (0b01000, 1.0),
                (0b01011, 1.0),
                (0b01101, 1.0),
                (0b01110, -1.0),
                (0b10000, 1.0),
                (0b10011, -1.0),
                (0b10101, 1.0),
                (0b10110, 1.0),
                (0b11001, -1.0),
                (0b11010, 1.0),
                (0b11100, -1.0),
                (0b11111, -1.0),
            ],
        ),
        "psi3" => psi3(),
        _ => unreachable!("state {name} is in STATE_NAMES"),
    }
}

fn ghz(n: usize) -> StateVector {
    let dim = 1usize << n;
    let mut amps = vec![Complex64::ZERO; dim];
    amps[0] = Complex64::ONE;
    amps[dim - 1] = Complex64::ONE;
    StateVector::from_unnormalized(amps).expect("GHZ is nonzero")
}

/// Symmetric Dicke state with `k` excitations among `n` qubits; `k = 1` is W.
fn dicke(n: usize, k: u32) -> StateVector {
    let dim = 1usize << n;
    let mut amps = vec![Complex64::ZERO; dim];
    for (i, a) in amps.iter_mut().enumerate() {
        if (i as u32).count_ones() == k {
            *a = Complex64::ONE;
        }
    }
    StateVector::from_unnormalized(amps).expect("Dicke is nonzero")
}

fn signed_superposition(n: usize, entries: &[(usize, f64)]) -> StateVector {
    let mut amps = vec![Complex64::ZERO; 1usize << n];
    for &(idx, sign) in entries {
        amps[idx] = Complex64::new(sign, 0.0);
    }
    StateVector::from_unnormalized(amps).expect("superposition is nonzero")
}

/// Three-qubit state printed with 3-decimal moduli and phases; renormalized.
fn psi3() -> StateVector {
    let polar: [(f64, f64); 8] = [
        (0.522, 0.0),
        (0.692, 2.387),
        (0.172, -2.972),
        (0.140, -0.102),
        (0.296, 2.864),
        (0.159, 0.068),
        (0.206, 2.671),
        (0.208, 3.087),
    ];
    let amps = polar
        .iter()
        .map(|&(r, theta)| Complex64::from_polar(r, theta))
        .collect();
    StateVector::from_unnormalized(amps).expect("psi3 is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_match_their_printed_form() {
        let ghz3 = get_state("GHZ3").unwrap();
        let r = 0.5f64.sqrt();
        assert!((ghz3.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((ghz3.amplitudes()[7].re - r).abs() < 1e-15);
        assert_eq!(
            ghz3.amplitudes()
                .iter()
                .filter(|a| a.norm() > 0.0)
                .count(),
            2
        );

        let w3 = get_state("W3").unwrap();
        let r = (1.0f64 / 3.0).sqrt();
        for idx in [1, 2, 4] {
            assert!((w3.amplitudes()[idx].re - r).abs() < 1e-15);
        }

        let d24 = get_state("D2_4").unwrap();
        let nonzero: Vec<f64> = d24
            .amplitudes()
            .iter()
            .filter(|a| a.norm() > 0.0)
            .map(|a| a.re)
            .collect();
        assert_eq!(nonzero.len(), 6);
        let r = (1.0f64 / 6.0).sqrt();
        assert!(nonzero.iter().all(|x| (x - r).abs() < 1e-15));
    }

    #[test]
    fn all_states_are_normalized() {
        for name in state_names() {
            let s = get_state(name).unwrap();
            let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-15, "{name}: norm^2 = {norm}");
        }
    }

    #[test]
    fn constants_match_the_printed_tail() {
        for (name, constant) in [
            ("I_5", -3),
            ("I_6", -3),
            ("I_13", -4),
            ("I_16", -4),
            ("I_19", -4),
            ("I_21", -4),
            ("I_30", -6),
            ("I322_1", -4),
            ("I322_9", -4),
            ("I332_1", -8),
            ("I332_5", -8),
            ("I333_2", -4),
            ("MABK3", -2),
        ] {
            let ineq = get_inequality(name).unwrap();
            assert_eq!(ineq.inequality.constant(), constant, "{name}");
        }
    }

    #[test]
    fn printed_term_counts_survive_transcription() {
        for (name, terms) in [
            ("I_opt", 4),
            ("I_5", 17),
            ("I_6", 15),
            ("I_13", 10),
            ("I_16", 13),
            ("I_19", 14),
            ("I_21", 17),
            ("I_30", 20),
            ("I322_9", 16),
            ("I332_6", 16),
            ("I333_1", 16),
            ("MABK3", 4),
        ] {
            let ineq = get_inequality(name).unwrap();
            assert_eq!(ineq.inequality.n_terms(), terms, "{name}");
        }
    }

    #[test]
    fn every_catalog_inequality_has_zero_classical_bound() {
        // get_inequality re-verifies internally; this also pins the scenario
        // shapes the entries are printed in.
        for name in inequality_names() {
            let ineq = get_inequality(name).unwrap();
            assert_eq!(
                classical_bound(&ineq.inequality).unwrap(),
                0,
                "{name} in {}",
                ineq.base_scenario
            );
        }
        let i3229 = get_inequality("I322_9").unwrap();
        assert_eq!(i3229.base_scenario.to_string(), "3x3x2");
    }

    #[test]
    fn listing_contains_both_kinds() {
        let listing = list_catalog();
        assert!(listing
            .iter()
            .any(|e| e.name == "I_5" && e.kind == "inequality" && e.shape == "2x2x2"));
        assert!(listing.iter().any(|e| e.name == "MABK3"));
        assert!(listing.iter().any(|e| e.name == "GHZ4" && e.kind == "state"));
    }

    #[test]
    fn state_spec_tensor_products() {
        let s = parse_state_spec("GHZ2x00").unwrap();
        assert_eq!(s.n_qubits(), 4);
        let r = 0.5f64.sqrt();
        assert!((s.amplitudes()[0b0000].re - r).abs() < 1e-15);
        assert!((s.amplitudes()[0b1100].re - r).abs() < 1e-15);
        assert!(s.amplitudes()[0b1111].norm() < 1e-15);

        assert!(parse_state_spec("101").unwrap().amplitudes()[0b101].re > 0.99);
        assert!(parse_state_spec("noSuchState").is_err());
    }

    #[test]
    fn lookup_is_case_and_underscore_insensitive() {
        assert!(get_state("ghz3").is_ok());
        assert!(get_inequality("i5").is_ok());
        assert!(get_inequality("I_5").is_ok());
        assert!(get_inequality("mabk3").is_ok());
        assert!(get_inequality("i999").is_err());
    }
}
