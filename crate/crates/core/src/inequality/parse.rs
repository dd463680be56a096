//! Compact text notation for correlator-form inequalities.
//!
//! A term is an optional integer coefficient followed by factors like
//! `A0 B1 C2` (party letter, setting index); a bare integer is the constant
//! term; terms are joined by `+` or `-`. CHSH folded to `<= 0` reads
//! `"A0 B0 + A1 B0 + A0 B1 - A1 B1 - 2"`.

use std::collections::BTreeMap;

use crate::scenario::Scenario;

use super::{BellInequality, IneqError};

pub fn parse_inequality(text: &str, scenario: &Scenario) -> Result<BellInequality, IneqError> {
    let n = scenario.n_parties();
    let strides = scenario.term_strides();
    let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
    let mut constant = 0i64;

    let mut chars = text.chars().peekable();
    let mut sign = 1i64;
    let mut pending = false; // a sign has been consumed, a term must follow

    loop {
        while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
            chars.next();
        }
        let Some(&c) = chars.peek() else { break };
        match c {
            '+' | '-' => {
                if pending {
                    return Err(IneqError::Parse(format!("dangling sign in {text:?}")));
                }
                sign = if c == '-' { -1 } else { 1 };
                pending = true;
                chars.next();
            }
            _ => {
                // One term: optional coefficient, then factors.
                let mut coeff: Option<i64> = None;
                while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
                    let mut num = 0i64;
                    while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
                        num = num * 10 + (chars.next().unwrap() as i64 - '0' as i64);
                    }
                    if coeff.is_some() {
                        return Err(IneqError::Parse(format!(
                            "two coefficients in one term of {text:?}"
                        )));
                    }
                    coeff = Some(num);
                    while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                        chars.next();
                    }
                }
                let mut parts: Vec<Option<usize>> = vec![None; n];
                loop {
                    while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                        chars.next();
                    }
                    let Some(&c) = chars.peek() else { break };
                    if !c.is_ascii_uppercase() {
                        break;
                    }
                    chars.next();
                    let party = (c as usize) - ('A' as usize);
                    if party >= n {
                        return Err(IneqError::Parse(format!(
                            "party {c} outside scenario {scenario} in {text:?}"
                        )));
                    }
                    let Some(d) = chars.next().filter(|d| d.is_ascii_digit()) else {
                        return Err(IneqError::Parse(format!(
                            "party letter {c} without setting digit in {text:?}"
                        )));
                    };
                    let setting = (d as usize) - ('0' as usize);
                    if setting >= scenario.settings()[party] {
                        return Err(IneqError::SettingOutOfRange {
                            party,
                            setting,
                            scenario: scenario.to_string(),
                        });
                    }
                    if parts[party].is_some() {
                        return Err(IneqError::Parse(format!(
                            "party {c} appears twice in one term of {text:?}"
                        )));
                    }
                    parts[party] = Some(setting);
                }
                let weight = sign * coeff.unwrap_or(1);
                if coeff.is_none() && parts.iter().all(Option::is_none) {
                    return Err(IneqError::Parse(format!("empty term in {text:?}")));
                }
                if parts.iter().all(Option::is_none) {
                    constant += weight;
                } else {
                    let off: usize = parts
                        .iter()
                        .enumerate()
                        .filter_map(|(i, p)| p.map(|j| (j + 1) * strides[i]))
                        .sum();
                    *acc.entry(off as u32).or_insert(0) += weight;
                }
                sign = 1;
                pending = false;
            }
        }
    }
    if pending {
        return Err(IneqError::Parse(format!("trailing sign in {text:?}")));
    }

    let terms: Vec<(u32, i64)> = acc.into_iter().filter(|&(_, w)| w != 0).collect();
    BellInequality::from_sorted_terms(scenario.clone(), constant, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_chsh() {
        let s: Scenario = "2x2".parse().unwrap();
        let chsh = parse_inequality("A0 B0 + A1 B0 + A0 B1 - A1 B1 - 2", &s).unwrap();
        assert_eq!(chsh.constant(), -2);
        assert_eq!(chsh.n_terms(), 4);
        let entries = chsh.term_entries();
        assert!(entries.contains(&(vec![Some(1), Some(1)], -1)));
        assert!(entries.contains(&(vec![Some(1), Some(0)], 1)));
    }

    #[test]
    fn parses_coefficients_and_marginals() {
        let s: Scenario = "2x2x2".parse().unwrap();
        let i = parse_inequality("2 A0 B0 + A0 - B1 C0 - 4", &s).unwrap();
        assert_eq!(i.constant(), -4);
        let entries = i.term_entries();
        assert!(entries.contains(&(vec![Some(0), Some(0), None], 2)));
        assert!(entries.contains(&(vec![Some(0), None, None], 1)));
        assert!(entries.contains(&(vec![None, Some(1), Some(0)], -1)));
    }

    #[test]
    fn rejects_malformed_text() {
        let s: Scenario = "2x2".parse().unwrap();
        assert!(parse_inequality("A0 B0 -", &s).is_err());
        assert!(parse_inequality("A0 C0 - 2", &s).is_err());
        assert!(parse_inequality("A3 B0 - 2", &s).is_err());
        assert!(parse_inequality("A B0 - 2", &s).is_err());
    }
}
