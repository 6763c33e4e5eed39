//! Validation of the K-preamplifier laws by exhaustive search.

use super::{SuiteReport, VerifyError};
use crate::fastmath::Budget;
use crate::gadgets::PreamplifierSpec;
use crate::ir::{Configuration, Program};
use crate::semantics::{reach_set, ExplorationPolicy};
use std::time::Instant;

/// Checks the preamplifier laws on the reachable set from the zero
/// configuration:
///
/// 1. every final configuration has `y >= b·x` and zeros outside
///    `{x, y, b}`;
/// 2. every final configuration with `y = b·x` has `b = K`;
/// 3. for each `ℓ = 1…l_max` some final configuration has `y = b·x` and
///    `x = ℓ`.
///
/// The policy must let the search exhaust its frontier (value bounds are
/// fine, they define which runs are inspected; a truncated search is
/// [`VerifyError::Inconclusive`]). Clauses 1 and 2 are then verified on
/// every bounded run, and clause 3's witnesses must fit the bounds.
pub fn check_preamplifier(
    a: &Program,
    spec: &PreamplifierSpec,
    l_max: u64,
    policy: &ExplorationPolicy,
) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let mut report = SuiteReport::new("preamplifier");
    let k = spec
        .k
        .exact(&Budget::default())
        .map_err(|e| VerifyError::Inconclusive(format!("claimed K not materializable: {e}")))?;

    let result = reach_set(a, &Configuration::zero(), policy)?;
    if !result.exhausted {
        return Err(VerifyError::Inconclusive(
            "search truncated before exhausting the preamplifier's bounded runs".into(),
        ));
    }

    let triple = [&spec.x, &spec.y, &spec.b];
    for beta in &result.configs {
        report.case();
        let x = beta.get(&spec.x);
        let y = beta.get(&spec.y);
        let b = beta.get(&spec.b);
        if y < &b * &x {
            report.fail(beta.to_json(), "y >= b*x", format!("y = {y}, b*x = {}", &b * &x));
        }
        if !beta.supported_by(triple.iter().copied()) {
            report.fail(beta.to_json(), "zeros outside {x, y, b}", "stray counter");
        }
        if y == &b * &x && b != k {
            report.fail(beta.to_json(), format!("b = K = {k} when y = b*x"), format!("b = {b}"));
        }
    }

    for l in 1..=l_max {
        report.case();
        let l = crate::Nat::from(l);
        let hit = result.configs.iter().any(|beta| {
            let x = beta.get(&spec.x);
            let y = beta.get(&spec.y);
            let b = beta.get(&spec.b);
            x == l && y == b * &x
        });
        if !hit {
            report.fail(
                format!("l = {l}"),
                "some final configuration with y = b*x and x = l",
                "none reachable within the bounds",
            );
        }
    }

    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{build_trivial_preamplifier, ClaimedK};
    use crate::Nat;

    #[test]
    fn trivial_preamplifier_passes() {
        let (a, spec) = build_trivial_preamplifier(2).unwrap();
        let policy = ExplorationPolicy::sum_bounded(3 * (2 + 1) + 2);
        let report = check_preamplifier(&a, &spec, 3, &policy).unwrap();
        assert!(report.passed(), "{}", report.human_table());
    }

    #[test]
    fn wrong_claimed_k_fails_clause_two() {
        let (a, mut spec) = build_trivial_preamplifier(2).unwrap();
        spec.k = ClaimedK::Exact(Nat::from(3u32));
        let policy = ExplorationPolicy::sum_bounded(11);
        let report = check_preamplifier(&a, &spec, 2, &policy).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| f.expected.contains("b = K")));
    }

    #[test]
    fn truncation_is_inconclusive() {
        let (a, spec) = build_trivial_preamplifier(2).unwrap();
        let policy = ExplorationPolicy::unbounded().with_max_states(50);
        assert!(matches!(
            check_preamplifier(&a, &spec, 1, &policy),
            Err(VerifyError::Inconclusive(_))
        ));
    }
}
