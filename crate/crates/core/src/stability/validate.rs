use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ordinal::Ordinal;

use super::StabilitySystem;

/// The validator's checklist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Check {
    /// The bound is a successor ordinal.
    V1,
    /// Exception keys lie in the domain of their level and below the bound.
    V2,
    /// `f_k(α) ≤ α`.
    V3,
    /// Liminf continuity at lim² points of each level's index chain.
    V4,
    /// `f_k(α) ≤_k α`.
    V5,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: Check,
    pub level: u32,
    pub ordinal: Ordinal,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    /// `(check, level, ordinal)` triples in a canonical order, for comparing
    /// verdicts produced by different validators.
    pub fn signature(&self) -> Vec<(Check, u32, Ordinal)> {
        let mut sig: Vec<_> = self
            .violations
            .iter()
            .map(|v| (v.check, v.level, v.ordinal.clone()))
            .collect();
        sig.sort();
        sig
    }
}

impl StabilitySystem {
    /// Runs V1–V5.
    ///
    /// Points off the exception keys carry the identity, which already
    /// meets V3–V5 and equals the liminf at every lim² point, so only keys
    /// are inspected. V4 and V5 are skipped at keys that fail V2, and V5
    /// at keys that fail V3.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut push = |check, level, ordinal: &Ordinal, message: String| {
            violations.push(Violation {
                check,
                level,
                ordinal: ordinal.clone(),
                message,
            })
        };
        if !self.bound.is_successor() {
            push(Check::V1, 0, &self.bound, format!("bound {} is not a successor", self.bound));
        }
        for (k, map) in self.levels() {
            for (key, value) in map {
                let in_bounds = key < &self.bound;
                if value > key {
                    push(Check::V3, k, key, format!("f_{k}({key}) = {value} exceeds its argument"));
                }
                if !in_bounds {
                    push(Check::V2, k, key, format!("key {key} is not below the bound {}", self.bound));
                    continue;
                }
                if !self.in_dom(k, key) {
                    let what = if k == 1 {
                        "a limit ordinal".to_string()
                    } else {
                        format!("a <_{}-limit", k - 1)
                    };
                    push(Check::V2, k, key, format!("key {key} of f_{k} is not {what}"));
                    continue;
                }
                if self.lim2_at(k - 1, key) {
                    let expected = self
                        .chain_liminf(k - 1, key)
                        .expect("lim² point admits a liminf");
                    if &expected != value {
                        push(
                            Check::V4,
                            k,
                            key,
                            format!("f_{k}({key}) = {value} but the chain liminf is {expected}"),
                        );
                    }
                }
                if value <= key && !(value == key || self.preds(k, key).member(value)) {
                    push(Check::V5, k, key, format!("f_{k}({key}) = {value} is not <_{k} {key}"));
                }
            }
        }
        ValidationReport::from_violations(violations)
    }
}
