//! Executable forms of the tree-order lemmas, evaluated on finite probes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ordinal::{IntervalSet, Ordinal};

use super::{StabilityError, StabilitySystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeProperty {
    Transitivity,
    Antisymmetry,
    /// Predecessors of a point are `≤_k`-comparable.
    Tree,
    Interpolation,
    Closure,
    /// `<_{k+1}` implies `<_k`.
    Refinement,
}

impl fmt::Display for TreeProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeViolation {
    pub property: TreeProperty,
    pub level: u32,
    pub points: Vec<Ordinal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TreeReport {
    pub checked_points: usize,
    pub violations: Vec<TreeViolation>,
}

impl TreeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Violation {
    pub level: u32,
    pub ordinal: Ordinal,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub largest_predecessor_checked: usize,
    pub unbounded_checked: usize,
    pub violations: Vec<Lemma2Violation>,
}

impl Lemma2Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite set of points where the orders of `p` can change shape: zero,
/// the top, every exception key and value, and their successors.
pub fn landmarks(p: &StabilitySystem) -> Vec<Ordinal> {
    let mut points = BTreeSet::new();
    points.insert(Ordinal::zero());
    if let Some(top) = p.top() {
        points.insert(top);
    }
    for (_, key, value) in p.all_exceptions() {
        for x in [key, value] {
            points.insert(x.clone());
            points.insert(x.successor());
        }
    }
    points.into_iter().filter(|x| x < p.bound()).collect()
}

/// Candidate lim² points: the top and exception keys, plus `x + ω²` and
/// `x + ω³` above zero and each key.
fn lim2_candidates(p: &StabilitySystem) -> Vec<Ordinal> {
    let mut points: BTreeSet<Ordinal> = BTreeSet::new();
    let mut anchors = vec![Ordinal::zero()];
    if let Some(top) = p.top() {
        points.insert(top);
    }
    for (_, key, _) in p.all_exceptions() {
        points.insert(key.clone());
        anchors.push(key.clone());
    }
    for a in anchors {
        for e in 2..=3 {
            points.insert(a.add(&Ordinal::omega_pow(e, 1)));
        }
    }
    points
        .into_iter()
        .filter(|x| x < p.bound() && x.is_lim2())
        .collect()
}

impl StabilitySystem {
    /// Checks the tree-order facts for `≤_k` and `≤_{k+1}` on every probe
    /// triple, plus closure of each probe's `<_k`-predecessor set.
    pub fn check_tree_properties(&self, k: u32, probe: &[Ordinal]) -> Result<TreeReport, StabilityError> {
        for x in probe {
            self.check_bounds(x)?;
        }
        let pts: Vec<Ordinal> = probe.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let lower: Vec<IntervalSet> = pts.iter().map(|x| self.preds(k, x)).collect();
        let upper: Vec<IntervalSet> = pts.iter().map(|x| self.preds(k + 1, x)).collect();
        let mut report = TreeReport {
            checked_points: pts.len(),
            violations: Vec::new(),
        };
        let mut flag = |property, level, points: &[&Ordinal]| {
            report.violations.push(TreeViolation {
                property,
                level,
                points: points.iter().map(|&x| x.clone()).collect(),
            })
        };
        let n = pts.len();
        for (level, table) in [(k, &lower), (k + 1, &upper)] {
            // lt(a, b) for probe indices
            let lt = |a: usize, b: usize| table[b].member(&pts[a]);
            for c in 0..n {
                for b in 0..n {
                    if lt(c, b) && lt(b, c) {
                        flag(TreeProperty::Antisymmetry, level, &[&pts[b], &pts[c]]);
                    }
                    if !lt(b, c) {
                        continue;
                    }
                    for a in 0..b {
                        if lt(a, b) && !lt(a, c) {
                            flag(TreeProperty::Transitivity, level, &[&pts[a], &pts[b], &pts[c]]);
                        }
                        if lt(a, c) && !lt(a, b) {
                            flag(TreeProperty::Tree, level, &[&pts[a], &pts[b], &pts[c]]);
                        }
                    }
                }
            }
        }
        for c in 0..n {
            for a in 0..c {
                if upper[c].member(&pts[a]) && !lower[c].member(&pts[a]) {
                    flag(TreeProperty::Refinement, k + 1, &[&pts[a], &pts[c]]);
                }
            }
            // a ≤ b ≤_k c and a ≤_{k+1} c imply a ≤_{k+1} b
            for b in 0..=c {
                if b != c && !lower[c].member(&pts[b]) {
                    continue;
                }
                for a in 0..=b {
                    let a_up_c = a == c || upper[c].member(&pts[a]);
                    let a_up_b = a == b || upper[b].member(&pts[a]);
                    if a_up_c && !a_up_b {
                        flag(TreeProperty::Interpolation, k + 1, &[&pts[a], &pts[b], &pts[c]]);
                    }
                }
            }
            // a limit point of the predecessor set below c must belong to it
            for iv in lower[c].intervals() {
                if iv.high < pts[c] && iv.high.is_limit() {
                    flag(TreeProperty::Closure, k, &[&iv.high, &pts[c]]);
                }
            }
        }
        Ok(report)
    }

    /// Largest-predecessor and unboundedness facts at level `k ≥ 1`.
    ///
    /// The first is checked at every exception key with `f_k(α) < α`;
    /// the second at every `<_{k-1}`-lim² candidate where `f_k(α) = α`.
    pub fn check_lemma2(&self, k: u32) -> Result<Lemma2Report, StabilityError> {
        if k == 0 {
            return Err(StabilityError::BadLevel(0));
        }
        let mut report = Lemma2Report::default();
        if let Some(map) = self.exceptions(k) {
            for (key, value) in map {
                if key >= &self.bound || value >= key || !self.in_dom(k, key) {
                    continue;
                }
                report.largest_predecessor_checked += 1;
                let largest = self.preds(k, key).max();
                if largest.as_ref() != Some(value) {
                    let shown = largest.map_or("none".to_string(), |m| m.to_string());
                    report.violations.push(Lemma2Violation {
                        level: k,
                        ordinal: key.clone(),
                        message: format!("f_{k}({key}) = {value} but the largest <_{k}-predecessor is {shown}"),
                    });
                }
            }
        }
        for a in lim2_candidates(self) {
            if !self.lim2_at(k - 1, &a) {
                continue;
            }
            let fixed = self.exceptions(k).and_then(|m| m.get(&a)).is_none_or(|v| v == &a);
            if !fixed {
                continue;
            }
            report.unbounded_checked += 1;
            let preds = self.preds(k, &a);
            let unbounded = preds.max().is_none() && preds.sup().ok().as_ref() == Some(&a);
            if !unbounded {
                report.violations.push(Lemma2Violation {
                    level: k,
                    ordinal: a.clone(),
                    message: format!("f_{k}({a}) = {a} but the <_{k}-predecessors {preds} are bounded"),
                });
            }
        }
        Ok(report)
    }
}
