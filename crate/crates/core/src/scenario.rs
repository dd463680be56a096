//! Bell scenario descriptions: how many parties, and how many measurement
//! settings each party may choose from.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported party count. Behavior tables and vertex sets grow
/// exponentially; six qubits keeps everything at desk scale.
pub const MAX_PARTIES: usize = 6;

/// Largest supported number of settings per party.
pub const MAX_SETTINGS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("a Bell scenario needs at least two parties, got {0}")]
    TooFewParties(usize),
    #[error("at most {MAX_PARTIES} parties are supported, got {0}")]
    TooManyParties(usize),
    #[error("party {party} has {got} settings; must be between 1 and {MAX_SETTINGS}")]
    BadSettingCount { party: usize, got: usize },
    #[error("cannot parse scenario {0:?}; expected e.g. \"2x2x2\"")]
    Parse(String),
}

/// An `m_1 x m_2 x ... x m_N` scenario: `N` parties making dichotomic
/// measurements, party `i` choosing among `m_i` observables.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Scenario {
    settings: Vec<usize>,
}

impl Scenario {
    pub fn new(settings: Vec<usize>) -> Result<Self, ScenarioError> {
        if settings.len() < 2 {
            return Err(ScenarioError::TooFewParties(settings.len()));
        }
        if settings.len() > MAX_PARTIES {
            return Err(ScenarioError::TooManyParties(settings.len()));
        }
        for (party, &m) in settings.iter().enumerate() {
            if m < 1 || m > MAX_SETTINGS {
                return Err(ScenarioError::BadSettingCount { party, got: m });
            }
        }
        Ok(Scenario { settings })
    }

    /// Uniform scenario with `n` parties and `m` settings each.
    pub fn uniform(n: usize, m: usize) -> Result<Self, ScenarioError> {
        Self::new(vec![m; n])
    }

    pub fn n_parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    /// Hilbert-space dimension of the N-qubit system, `2^N`.
    pub fn dim(&self) -> usize {
        1 << self.settings.len()
    }

    /// Number of joint setting choices, `prod m_i`.
    pub fn n_setting_tuples(&self) -> usize {
        self.settings.iter().product()
    }

    /// Number of correlator terms, `prod (m_i + 1)`.
    ///
    /// Each party contributes a component that is either "not measured"
    /// (component 0) or one of its `m_i` observables (components `1..=m_i`).
    pub fn n_terms(&self) -> usize {
        self.settings.iter().map(|m| m + 1).product()
    }

    /// Mixed-radix strides for the correlator term space; party 0 varies
    /// slowest. `offset = sum_i digit_i * stride_i` with `digit_i in 0..=m_i`.
    pub fn term_strides(&self) -> Vec<usize> {
        let n = self.settings.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (self.settings[i + 1] + 1);
        }
        strides
    }

    /// Mixed-radix strides for joint setting tuples; party 0 varies slowest.
    pub fn setting_strides(&self) -> Vec<usize> {
        let n = self.settings.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.settings[i + 1];
        }
        strides
    }

    /// Flat offset of a correlator term given per-party components
    /// (`None` = not measured, `Some(j)` = setting `j`).
    pub fn term_offset(&self, parts: &[Option<usize>]) -> usize {
        assert_eq!(parts.len(), self.settings.len(), "term arity mismatch");
        let strides = self.term_strides();
        parts
            .iter()
            .enumerate()
            .map(|(i, p)| match p {
                None => 0,
                Some(j) => {
                    assert!(*j < self.settings[i], "setting index out of range");
                    (j + 1) * strides[i]
                }
            })
            .sum()
    }

    /// Per-party components of the term at `offset` (inverse of
    /// [`Self::term_offset`]).
    pub fn term_parts(&self, offset: usize) -> Vec<Option<usize>> {
        let strides = self.term_strides();
        let mut rem = offset;
        self.settings
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let d = rem / strides[i];
                rem %= strides[i];
                if d == 0 {
                    None
                } else {
                    Some(d - 1)
                }
            })
            .collect()
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.settings.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl fmt::Debug for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scenario({self})")
    }
}

impl FromStr for Scenario {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let settings: Result<Vec<usize>, _> = s
            .split(['x', 'X'])
            .map(|tok| tok.trim().parse::<usize>())
            .collect();
        match settings {
            Ok(v) if !v.is_empty() => Scenario::new(v),
            _ => Err(ScenarioError::Parse(s.to_string())),
        }
    }
}

impl From<Scenario> for String {
    fn from(s: Scenario) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Scenario {
    type Error = ScenarioError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
