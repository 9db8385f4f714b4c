use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which publication a budget charge pays for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryLabel {
    /// The noisy degree report.
    Degree,
    /// The value published in iteration `t` (1-based).
    Iteration(usize),
}

impl fmt::Display for QueryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryLabel::Degree => write!(f, "degree"),
            QueryLabel::Iteration(t) => write!(f, "iterate[{t}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub label: QueryLabel,
    /// Budget spent by each user answering this query.
    pub epsilon: f64,
}

/// Append-only record of per-user privacy spend under basic composition.
///
/// A charge that would push the total above the budget is refused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyLedger {
    budget: f64,
    entries: Vec<LedgerEntry>,
    total: f64,
}

/// Slack for floating-point summation when comparing against the budget.
const BUDGET_SLACK: f64 = 1e-12;

impl PrivacyLedger {
    pub fn new(budget: f64) -> Self {
        PrivacyLedger {
            budget,
            entries: Vec::new(),
            total: 0.0,
        }
    }

    pub fn charge(&mut self, label: QueryLabel, epsilon: f64) -> Result<()> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::argument(format!("cannot charge budget {epsilon}")));
        }
        let would_total = self.total + epsilon;
        if would_total > self.budget + BUDGET_SLACK {
            return Err(Error::Budget {
                requested: epsilon,
                would_total,
                budget: self.budget,
            });
        }
        self.entries.push(LedgerEntry { label, epsilon });
        self.total = would_total;
        Ok(())
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn remaining(&self) -> f64 {
        self.budget - self.total
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_is_sum_of_entries() {
        let mut l = PrivacyLedger::new(1.0);
        l.charge(QueryLabel::Degree, 0.1).unwrap();
        for t in 1..=9 {
            l.charge(QueryLabel::Iteration(t), 0.1).unwrap();
        }
        let sum: f64 = l.entries().iter().map(|e| e.epsilon).sum();
        assert_eq!(sum, l.total());
        assert!((l.total() - 1.0).abs() < 1e-12);
        assert_eq!(l.len(), 10);
    }

    #[test]
    fn refuses_overspend() {
        let mut l = PrivacyLedger::new(1.0);
        l.charge(QueryLabel::Degree, 0.6).unwrap();
        let err = l.charge(QueryLabel::Iteration(1), 0.5).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
        assert_eq!(l.len(), 1);
        assert!(l.charge(QueryLabel::Iteration(1), -0.1).is_err());
    }

    #[test]
    fn labels_display() {
        assert_eq!(QueryLabel::Degree.to_string(), "degree");
        assert_eq!(QueryLabel::Iteration(3).to_string(), "iterate[3]");
    }
}
