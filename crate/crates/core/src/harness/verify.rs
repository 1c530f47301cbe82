//! Independent re-checking of a run report against its instance.

use crate::harness::instance::Instance;
use crate::harness::report::RunReport;
use crate::ledger::QueryLedger;
use crate::Result;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub pass: bool,
    pub violations: Vec<String>,
}

/// Re-check a report: solution common-independent (2 queries), dual coverage,
/// and the min-max bound rank1(A) + rank2(B) ≤ |S| + declared slack (equality
/// at slack 0, i.e. a tight certificate).
pub fn verify_report(instance: &Instance, report: &RunReport) -> Result<Verdict> {
    let (m1, m2) = instance.matroids()?;
    let mut violations = Vec::new();
    if report.instance_sha256 != instance.sha256() {
        violations.push("instance hash does not match the report".to_string());
    }
    if report.size != report.solution.len() {
        violations.push("size field disagrees with the solution set".to_string());
    }

    let mut ledger = QueryLedger::sequential();
    if report.solution.iter().any(|&e| !m1.in_ground(e)) {
        violations.push("solution contains elements outside the ground set".to_string());
    } else {
        if !m1.is_independent(&report.solution, &mut ledger) {
            violations.push("solution is not independent in matroid 1".to_string());
        }
        if !m2.is_independent(&report.solution, &mut ledger) {
            violations.push("solution is not independent in matroid 2".to_string());
        }
    }

    if let Some(dual) = &report.dual {
        let mut covered = vec![false; m1.universe()];
        for &e in dual.a.iter().chain(dual.b.iter()) {
            if !m1.in_ground(e) {
                violations.push(format!("dual contains element {e} outside the ground set"));
                break;
            }
            covered[e] = true;
        }
        if m1.ground().iter().any(|&e| !covered[e]) {
            violations.push("dual sets do not cover the ground set".to_string());
        }
        let slack = report.certified_slack.unwrap_or(0);
        let bound = m1.rank(&dual.a, &mut ledger) + m2.rank(&dual.b, &mut ledger);
        if (bound as u64) > report.size as u64 + slack {
            violations.push(format!(
                "dual bound violated: rank1(A) + rank2(B) = {bound} > size {} + slack {slack}",
                report.size
            ));
        }
    }

    if let (Some(w), Some(weight)) = (&instance.weights, report.weight) {
        let actual: i64 = report
            .solution
            .iter()
            .map(|&e| w.get(e).copied().unwrap_or(0))
            .sum();
        if actual != weight {
            violations.push(format!(
                "reported weight {weight} but the solution weighs {actual}"
            ));
        }
    }

    Ok(Verdict {
        pass: violations.is_empty(),
        violations,
    })
}
