use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ordinal::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<Ordinal>,
    pub level: Option<u32>,
    pub ordinal: Option<Ordinal>,
    pub message: String,
}

impl Witness {
    pub fn at(point: &Ordinal, message: String) -> Self {
        Witness {
            points: vec![point.clone()],
            level: None,
            ordinal: None,
            message,
        }
    }

    pub fn pair(a: &Ordinal, b: &Ordinal, message: String) -> Self {
        Witness {
            points: vec![a.clone(), b.clone()],
            level: None,
            ordinal: None,
            message,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub passed: bool,
    /// Number of instances examined.
    pub checked: usize,
    pub witnesses: Vec<Witness>,
}

impl CheckResult {
    pub fn new(check: &str) -> Self {
        CheckResult {
            check: check.to_string(),
            passed: true,
            checked: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn fail(&mut self, witness: Witness) {
        self.passed = false;
        self.witnesses.push(witness);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn new(results: Vec<CheckResult>) -> Self {
        CheckReport { results }
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.check.as_str())
            .collect()
    }

    pub fn get(&self, check: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.check == check)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{} {verdict} ({} checked)", r.check, r.checked)?;
            for w in &r.witnesses {
                writeln!(f, "  {}", w.message)?;
            }
        }
        Ok(())
    }
}
