//! Symmetry-orbit generation: all distinct relabelings of a base inequality
//! under party permutations, ordered injections of its used settings into a
//! host scenario, and per-setting output flips.

use std::collections::HashSet;

use crate::scenario::Scenario;

use super::{BellInequality, IneqError, InequalityFamily};

struct BaseTerm {
    /// `(base party, position within that party's used-settings list)` for
    /// every measured factor of the term.
    factors: Vec<(usize, usize)>,
    weight: i64,
    /// One bit per `(party, used setting)`; the term changes sign when an odd
    /// number of its factors are output-flipped.
    flip_mask: u32,
}

/// Generates the full orbit of `base` inside `target`: every assignment of
/// base parties to scenario parties, every ordered injection of each party's
/// used settings into its host's settings, and every output sign flip,
/// deduplicated by exact coefficient-table equality.
///
/// Fails with [`IneqError::BaseDoesNotFit`] when some base party uses more
/// settings than any assignable scenario party offers.
pub fn symmetry_orbit(
    base: &BellInequality,
    target: &Scenario,
    provenance: &str,
) -> Result<InequalityFamily, IneqError> {
    let b = base.scenario().n_parties();
    let n = target.n_parties();
    if b > n {
        return Err(IneqError::BaseDoesNotFit {
            needed: base.scenario().n_parties(),
        });
    }

    // Distinct settings actually used by each base party, in ascending order.
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); b];
    for (parts, _) in base.term_entries() {
        for (i, p) in parts.iter().enumerate() {
            if let Some(j) = p {
                if !used[i].contains(j) {
                    used[i].push(*j);
                }
            }
        }
    }
    for u in &mut used {
        u.sort_unstable();
    }

    // Feasibility: a greedy check is not enough in general, but the party
    // assignment search below simply yields nothing if no placement exists.
    let max_need = used.iter().map(Vec::len).max().unwrap_or(0);
    if target.settings().iter().all(|&m| m < max_need) {
        return Err(IneqError::BaseDoesNotFit { needed: max_need });
    }

    // Flip-bit layout: consecutive bits per base party.
    let mut flip_base = vec![0u32; b];
    let mut total_bits = 0u32;
    for i in 0..b {
        flip_base[i] = total_bits;
        total_bits += used[i].len() as u32;
    }
    assert!(total_bits <= 31, "too many settings for flip enumeration");

    let terms: Vec<BaseTerm> = base
        .term_entries()
        .into_iter()
        .map(|(parts, weight)| {
            let mut factors = Vec::new();
            let mut flip_mask = 0u32;
            for (i, p) in parts.iter().enumerate() {
                if let Some(j) = p {
                    let pos = used[i].iter().position(|x| x == j).unwrap();
                    factors.push((i, pos));
                    flip_mask |= 1 << (flip_base[i] + pos as u32);
                }
            }
            BaseTerm {
                factors,
                weight,
                flip_mask,
            }
        })
        .collect();

    // All ordered injections of k settings into 0..m, per base party / host m.
    let injection_table: Vec<Vec<Vec<Vec<usize>>>> = (0..b)
        .map(|i| {
            (0..=crate::scenario::MAX_SETTINGS)
                .map(|m| ordered_injections(m, used[i].len()))
                .collect()
        })
        .collect();

    let strides = target.term_strides();
    let mut seen: HashSet<Vec<(u32, i64)>> = HashSet::new();
    let mut variants: Vec<BellInequality> = Vec::new();

    let mut assignment = vec![usize::MAX; b];
    let mut taken = vec![false; n];
    enumerate_assignments(
        0,
        b,
        n,
        target,
        &used,
        &mut assignment,
        &mut taken,
        &mut |assignment| {
            // Odometer over per-party setting injections.
            let lists: Vec<&Vec<Vec<usize>>> = (0..b)
                .map(|i| &injection_table[i][target.settings()[assignment[i]]])
                .collect();
            let mut idx = vec![0usize; b];
            loop {
                // Offsets are flip-independent; compute and sort once.
                let mut pairs: Vec<(u32, i64, u32)> = terms
                    .iter()
                    .map(|t| {
                        let off: usize = t
                            .factors
                            .iter()
                            .map(|&(i, pos)| {
                                (lists[i][idx[i]][pos] + 1) * strides[assignment[i]]
                            })
                            .sum();
                        (off as u32, t.weight, t.flip_mask)
                    })
                    .collect();
                pairs.sort_unstable_by_key(|&(off, _, _)| off);

                for flips in 0u32..(1 << total_bits) {
                    let key: Vec<(u32, i64)> = pairs
                        .iter()
                        .map(|&(off, w, mask)| {
                            if (flips & mask).count_ones() & 1 == 1 {
                                (off, -w)
                            } else {
                                (off, w)
                            }
                        })
                        .collect();
                    if seen.insert(key.clone()) {
                        variants.push(
                            BellInequality::from_sorted_terms(
                                target.clone(),
                                base.constant(),
                                key,
                            )
                            .expect("orbit preserves non-emptiness"),
                        );
                    }
                }

                // Advance the odometer.
                let mut i = b;
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < lists[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        },
    );

    if variants.is_empty() {
        return Err(IneqError::BaseDoesNotFit { needed: max_need });
    }
    Ok(InequalityFamily::new(
        target.clone(),
        provenance.to_string(),
        variants,
    ))
}

fn enumerate_assignments(
    i: usize,
    b: usize,
    n: usize,
    target: &Scenario,
    used: &[Vec<usize>],
    assignment: &mut Vec<usize>,
    taken: &mut Vec<bool>,
    f: &mut impl FnMut(&[usize]),
) {
    if i == b {
        f(assignment);
        return;
    }
    for p in 0..n {
        if !taken[p] && target.settings()[p] >= used[i].len() {
            taken[p] = true;
            assignment[i] = p;
            enumerate_assignments(i + 1, b, n, target, used, assignment, taken, f);
            taken[p] = false;
        }
    }
}

fn ordered_injections(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..m {
            if !cur.contains(&j) {
                cur.push(j);
                rec(m, k, cur, out);
                cur.pop();
            }
        }
    }
    rec(m, k, &mut cur, &mut out);
    out
}

/// The lifted CHSH family `<(CHSH - 2) prod_{i>=3} (1 - E_i)> <= 0`: two
/// parties run CHSH and every remaining party contributes a single
/// measurement factor. Generates all relabelings in `scenario`.
pub fn lifted_chsh_family(scenario: &Scenario) -> Result<InequalityFamily, IneqError> {
    let n = scenario.n_parties();
    let capable = scenario.settings().iter().filter(|&&m| m >= 2).count();
    if capable < 2 {
        return Err(IneqError::NoChshPair(scenario.to_string()));
    }

    // Expand (E00 + E10 + E01 - E11 - 2) * prod_i (1 - E_i0) over digit
    // vectors (0 = identity, d = setting d-1). Parties 0 and 1 host CHSH.
    let mut terms: Vec<(Vec<u8>, i64)> = vec![
        (digit_vec(n, &[(0, 1), (1, 1)]), 1),
        (digit_vec(n, &[(0, 2), (1, 1)]), 1),
        (digit_vec(n, &[(0, 1), (1, 2)]), 1),
        (digit_vec(n, &[(0, 2), (1, 2)]), -1),
        (vec![0; n], -2),
    ];
    for party in 2..n {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (digits, w) in &terms {
            next.push((digits.clone(), *w));
            let mut d = digits.clone();
            d[party] = 1;
            next.push((d, -w));
        }
        terms = next;
    }

    let mut base_settings = vec![1usize; n];
    base_settings[0] = 2;
    base_settings[1] = 2;
    let base_scenario = Scenario::new(base_settings).expect("valid base scenario");
    let strides = base_scenario.term_strides();
    let mut constant = 0i64;
    let mut pairs: Vec<(u32, i64)> = Vec::new();
    for (digits, w) in terms {
        let off: usize = digits
            .iter()
            .enumerate()
            .map(|(i, &d)| d as usize * strides[i])
            .sum();
        if off == 0 {
            constant += w;
        } else {
            pairs.push((off as u32, w));
        }
    }
    pairs.sort_unstable_by_key(|&(off, _)| off);
    let base = BellInequality::from_sorted_terms(base_scenario, constant, pairs)?;
    symmetry_orbit(&base, scenario, "iopt lifted")
}

fn digit_vec(n: usize, set: &[(usize, u8)]) -> Vec<u8> {
    let mut v = vec![0u8; n];
    for &(i, d) in set {
        v[i] = d;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::parse_inequality;

    #[test]
    fn chsh_orbit_in_2x2_has_eight_facets() {
        let s: Scenario = "2x2".parse().unwrap();
        let chsh = parse_inequality("A0 B0 + A1 B0 + A0 B1 - A1 B1 - 2", &s).unwrap();
        let family = symmetry_orbit(&chsh, &s, "chsh orbit").unwrap();
        assert_eq!(family.len(), 8);
    }

    #[test]
    fn lifted_family_matches_two_party_orbit() {
        let s: Scenario = "2x2".parse().unwrap();
        let family = lifted_chsh_family(&s).unwrap();
        assert_eq!(family.len(), 8);
        assert_eq!(family.variants()[0].constant(), -2);
    }

    #[test]
    fn lifted_three_party_count() {
        let s: Scenario = "2x2x2".parse().unwrap();
        let family = lifted_chsh_family(&s).unwrap();
        assert_eq!(family.len(), 96);
        // Ten terms each: (4 CHSH + constant) x (identity + factor), minus
        // the folded constant.
        assert!(family.variants().iter().all(|v| v.n_terms() == 9));
        assert!(family.variants().iter().all(|v| v.constant() == -2));
    }

    #[test]
    fn lifted_rejects_single_capable_party() {
        let s: Scenario = "3x1x1".parse().unwrap();
        assert!(matches!(
            lifted_chsh_family(&s),
            Err(IneqError::NoChshPair(_))
        ));
    }

    #[test]
    fn orbit_rejects_bases_that_do_not_fit() {
        // Three-party base into a two-party scenario.
        let base_sc: Scenario = "2x2x2".parse().unwrap();
        let base = parse_inequality("A0 B0 C0 - 1", &base_sc).unwrap();
        let target: Scenario = "2x2".parse().unwrap();
        assert!(matches!(
            symmetry_orbit(&base, &target, "test"),
            Err(IneqError::BaseDoesNotFit { .. })
        ));
        // Two-setting party into a scenario with only single-setting hosts
        // beyond the first.
        let chsh_sc: Scenario = "2x2".parse().unwrap();
        let chsh = parse_inequality("A0 B0 + A1 B0 + A0 B1 - A1 B1 - 2", &chsh_sc).unwrap();
        let narrow: Scenario = "4x1".parse().unwrap();
        assert!(matches!(
            symmetry_orbit(&chsh, &narrow, "test"),
            Err(IneqError::BaseDoesNotFit { .. })
        ));
    }

    #[test]
    fn output_flip_closure() {
        let s: Scenario = "2x2x2".parse().unwrap();
        let family = lifted_chsh_family(&s).unwrap();
        let keys: std::collections::HashSet<Vec<(u32, i64)>> = family
            .variants()
            .iter()
            .map(|v| v.terms().to_vec())
            .collect();
        for v in family.variants().iter().take(8) {
            for party in 0..3 {
                for setting in 0..2 {
                    let flipped = v.flip_output(party, setting);
                    assert!(keys.contains(flipped.terms()));
                }
            }
        }
    }
}
