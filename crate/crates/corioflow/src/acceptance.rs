//! Acceptance-suite orchestration: criterion dispatch by number and report
//! assembly shared by the CLI `accept` subcommand and the integration tests.

use crate::criteria;

pub const CRITERION_COUNT: usize = 11;

/// Optional fault injection for mutation-testing the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Corruption {
    #[default]
    None,
    /// Perturb the closed-form m value so the quadrature cross-check must
    /// flag it.
    MClosedForm,
}

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {}: {} — {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.details
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct AcceptanceReport {
    pub outcomes: Vec<CriterionOutcome>,
}

impl AcceptanceReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&o.line());
            out.push('\n');
        }
        out
    }
}

pub fn run_criterion(id: usize) -> CriterionOutcome {
    match id {
        1 => criteria::regime_trichotomy(),
        2 => criteria::growth_rate_curve(),
        3 => criteria::multiplier_closed_forms(criteria::DEFAULT_SWEEP, Corruption::None),
        4 => criteria::m_bound_constants(),
        5 => criteria::enhanced_dissipation_envelope(),
        6 => criteria::inviscid_damping_bound(),
        7 => criteria::dispersive_decay_fit(),
        8 => criteria::instability_growth_rate(),
        9 => criteria::linearization_deviation(),
        10 => criteria::bootstrap_and_heat_identity(),
        11 => criteria::threshold_scan_baselines(),
        other => CriterionOutcome {
            id: other,
            name: "unknown",
            passed: false,
            details: format!("no criterion with id {other} (valid: 1..={CRITERION_COUNT})"),
        },
    }
}

/// Runs the requested criteria in the given order. An empty list yields an
/// empty, successful report.
pub fn run_acceptance(ids: &[usize]) -> AcceptanceReport {
    AcceptanceReport {
        outcomes: ids.iter().map(|&id| run_criterion(id)).collect(),
    }
}

pub fn all_ids() -> Vec<usize> {
    (1..=CRITERION_COUNT).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_is_successful() {
        let report = run_acceptance(&[]);
        assert!(report.outcomes.is_empty());
        assert!(report.all_passed());
        assert!(report.text().is_empty());
    }

    #[test]
    fn unknown_id_becomes_failed_entry() {
        let report = run_acceptance(&[99]);
        assert_eq!(report.outcomes.len(), 1);
        assert!(!report.all_passed());
        assert!(report.outcomes[0].details.contains("no criterion"));
    }

    #[test]
    fn report_lines_carry_ids_and_verdicts() {
        let report = run_acceptance(&[1, 2]);
        let text = report.text();
        assert!(text.contains("criterion 01"));
        assert!(text.contains("criterion 02"));
        assert!(report.all_passed(), "{text}");
    }
}
