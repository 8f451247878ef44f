//! Definition-literal reference implementation of the derived orders for
//! systems with bound below ω·20.
//!
//! Below ω² every ordinal is `ω·m + n`, so the limit ordinals under the
//! bound form a finite list and every "for all γ ∈ Dom f_k" quantifier is
//! evaluated by walking that list. Predecessor sets are assembled point by
//! point: inside a block `[ω·m, ω·(m+1))` membership of `ω·m + n` only
//! depends on `n` through comparisons with the finite parts of the stored
//! values, so every `n` past the largest of those behaves the same and one
//! representative decides the rest of the block.
//!
//! Nothing here calls into the interval scan of [`crate::stability`].

use std::cell::RefCell;
use std::collections::HashMap;

use thiserror::Error;

use crate::ordinal::{IntervalSet, Ordinal, OrdinalInterval};
use crate::stability::{Check, StabilitySystem, ValidationReport, Violation};

/// Largest `M` such that bounds below `ω·M` are accepted.
pub const MAX_OMEGA_MULTIPLE: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("bound {0} is not below w*{MAX_OMEGA_MULTIPLE}")]
    BoundTooLarge(Ordinal),
    #[error("{0} is outside the system")]
    OutOfBounds(Ordinal),
}

type LtKey = (u32, Ordinal, Ordinal);

pub struct Oracle<'a> {
    p: &'a StabilitySystem,
    limits: Vec<Ordinal>,
    finite_cap: u64,
    lt_memo: RefCell<HashMap<LtKey, bool>>,
    limit_memo: RefCell<HashMap<(u32, Ordinal), bool>>,
}

fn omega_coefficient(a: &Ordinal) -> u64 {
    a.terms()
        .iter()
        .find(|t| t.exponent == 1)
        .map_or(0, |t| t.coefficient)
}

impl<'a> Oracle<'a> {
    pub fn new(p: &'a StabilitySystem) -> Result<Self, OracleError> {
        let bound = p.bound();
        if bound >= &Ordinal::omega_pow(1, MAX_OMEGA_MULTIPLE) {
            return Err(OracleError::BoundTooLarge(bound.clone()));
        }
        let limits = (1..=omega_coefficient(bound))
            .map(|m| Ordinal::omega_pow(1, m))
            .filter(|l| l < bound)
            .collect();
        let finite_cap = p
            .all_exceptions()
            .flat_map(|(_, k, v)| [k.finite_part(), v.finite_part()])
            .chain([bound.finite_part()])
            .max()
            .unwrap_or(0)
            + 1;
        Ok(Oracle {
            p,
            limits,
            finite_cap,
            lt_memo: RefCell::default(),
            limit_memo: RefCell::default(),
        })
    }

    fn check(&self, a: &Ordinal) -> Result<(), OracleError> {
        if a < self.p.bound() {
            Ok(())
        } else {
            Err(OracleError::OutOfBounds(a.clone()))
        }
    }

    fn f(&self, k: u32, gamma: &Ordinal) -> Ordinal {
        self.p
            .exceptions(k)
            .and_then(|m| m.get(gamma))
            .unwrap_or(gamma)
            .clone()
    }

    fn in_dom(&self, k: u32, gamma: &Ordinal) -> bool {
        self.limits.contains(gamma) && self.limit(k - 1, gamma)
    }

    fn lt(&self, k: u32, a: &Ordinal, b: &Ordinal) -> bool {
        if a >= b {
            return false;
        }
        if k == 0 {
            return true;
        }
        let key = (k, a.clone(), b.clone());
        if let Some(&hit) = self.lt_memo.borrow().get(&key) {
            return hit;
        }
        let mut holds = k == 1 || self.lt(k - 1, a, b);
        if holds {
            for gamma in self.limits.iter().filter(|g| *g > a && *g <= b) {
                let on_chain = k == 1 || gamma == b || self.lt(k - 1, gamma, b);
                if on_chain && self.in_dom(k, gamma) && &self.f(k, gamma) < a {
                    holds = false;
                    break;
                }
            }
        }
        self.lt_memo.borrow_mut().insert(key, holds);
        holds
    }

    fn preds(&self, k: u32, b: &Ordinal) -> IntervalSet {
        let cap = self.finite_cap.max(b.finite_part()) + 1;
        let mut pieces = Vec::new();
        for m in 0..=omega_coefficient(b) {
            let start = Ordinal::omega_pow(1, m);
            let end = std::cmp::min(Ordinal::omega_pow(1, m + 1), b.clone());
            for n in 0..=cap {
                let x = start.add(&Ordinal::finite(n));
                if x >= end {
                    break;
                }
                if self.lt(k, &x, b) {
                    let high = if n == cap { end.clone() } else { x.successor() };
                    pieces.extend(OrdinalInterval::new(x, high));
                }
            }
        }
        IntervalSet::from_intervals(pieces)
    }

    fn limit(&self, k: u32, a: &Ordinal) -> bool {
        if k == 0 {
            return self.limits.contains(a);
        }
        let key = (k, a.clone());
        if let Some(&hit) = self.limit_memo.borrow().get(&key) {
            return hit;
        }
        let s = self.preds(k, a);
        let result = !s.is_empty() && !s.has_max().unwrap_or(true);
        self.limit_memo.borrow_mut().insert(key, result);
        result
    }

    /// `<_k`-limits among the predecessors of `a` reach up to `a`.
    fn lim2(&self, k: u32, a: &Ordinal) -> bool {
        if !self.limit(k, a) {
            return false;
        }
        let sup = self
            .limits
            .iter()
            .filter(|l| *l < a && (k == 0 || self.lt(k, l, a)) && self.limit(k, l))
            .max()
            .cloned()
            .unwrap_or_default();
        // a finite set of smaller limits never has supremum a
        &sup == a
    }

    pub fn lt_k(&self, k: u32, a: &Ordinal, b: &Ordinal) -> Result<bool, OracleError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.lt(k, a, b))
    }

    pub fn pred_set(&self, k: u32, b: &Ordinal) -> Result<IntervalSet, OracleError> {
        self.check(b)?;
        Ok(self.preds(k, b))
    }

    pub fn is_k_limit(&self, k: u32, a: &Ordinal) -> Result<bool, OracleError> {
        self.check(a)?;
        Ok(self.limit(k, a))
    }

    pub fn validate(&self) -> ValidationReport {
        let p = self.p;
        let mut violations = Vec::new();
        let mut push = |check, level, ordinal: &Ordinal| {
            violations.push(Violation {
                check,
                level,
                ordinal: ordinal.clone(),
                message: format!("{check} fails at {ordinal} (level {level})"),
            })
        };
        if p.bound().predecessor().is_none() {
            push(Check::V1, 0, p.bound());
        }
        for (k, key, value) in p.all_exceptions() {
            let v3 = value <= key;
            if !v3 {
                push(Check::V3, k, key);
            }
            if key >= p.bound() || !self.in_dom(k, key) {
                push(Check::V2, k, key);
                continue;
            }
            if self.lim2(k - 1, key) && value != key {
                push(Check::V4, k, key);
            }
            if v3 && value != key && !self.lt(k, value, key) {
                push(Check::V5, k, key);
            }
        }
        ValidationReport::from_violations(violations)
    }
}

pub fn brute_lt_k(p: &StabilitySystem, k: u32, a: &Ordinal, b: &Ordinal) -> Result<bool, OracleError> {
    Oracle::new(p)?.lt_k(k, a, b)
}

pub fn brute_pred_set(p: &StabilitySystem, k: u32, b: &Ordinal) -> Result<IntervalSet, OracleError> {
    Oracle::new(p)?.pred_set(k, b)
}

pub fn brute_is_k_limit(p: &StabilitySystem, k: u32, a: &Ordinal) -> Result<bool, OracleError> {
    Oracle::new(p)?.is_k_limit(k, a)
}

pub fn brute_validate(p: &StabilitySystem) -> Result<ValidationReport, OracleError> {
    Ok(Oracle::new(p)?.validate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    fn p_star() -> StabilitySystem {
        let mut p = StabilitySystem::new(ord("w*3+1"), 1);
        p.insert_exception(1, ord("w*2"), ord("5")).unwrap();
        p
    }

    #[test]
    fn examples() {
        let p = p_star();
        assert!(brute_lt_k(&p, 1, &ord("3"), &ord("w*3")).unwrap());
        assert!(!brute_lt_k(&p, 1, &ord("7"), &ord("w*3")).unwrap());
        assert_eq!(
            brute_pred_set(&p, 1, &ord("w*2")).unwrap(),
            IntervalSet::from_intervals(OrdinalInterval::new(ord("0"), ord("6")))
        );
        assert!(brute_validate(&p).unwrap().valid);
        assert!(brute_is_k_limit(&p, 1, &ord("w*3")).unwrap());
        assert!(!brute_is_k_limit(&p, 1, &ord("w*2")).unwrap());
    }

    #[test]
    fn rejects_large_bounds() {
        let p = StabilitySystem::new(ord("w^2+1"), 1);
        assert!(matches!(Oracle::new(&p), Err(OracleError::BoundTooLarge(_))));
        let q = StabilitySystem::new(ord("w*20"), 1);
        assert!(Oracle::new(&q).is_err());
        let r = StabilitySystem::new(ord("w*19+4"), 1);
        assert!(Oracle::new(&r).is_ok());
    }

    #[test]
    fn v5_counterexample() {
        let mut p = p_star();
        p.insert_exception(1, ord("w"), ord("5")).unwrap();
        p.insert_exception(1, ord("w*2"), ord("7")).unwrap();
        let r = brute_validate(&p).unwrap();
        assert_eq!(r.signature(), vec![(Check::V5, 1, ord("w*2"))]);
    }

    #[test]
    fn pred_set_tail_blocks() {
        let p = p_star();
        assert_eq!(
            brute_pred_set(&p, 1, &ord("w*3")).unwrap(),
            IntervalSet::from_intervals([
                OrdinalInterval::new(ord("0"), ord("6")).unwrap(),
                OrdinalInterval::new(ord("w*2"), ord("w*3")).unwrap(),
            ])
        );
    }
}
