//! The derived orders `<_k`.
//!
//! `α <_k β` holds iff `α <_{k-1} β` and every `γ ∈ Dom f_k` with
//! `α < γ ≤_{k-1} β` has `f_k(γ) ≥ α` (with `<_0` the ordinal order).
//! Default points satisfy `f_k(γ) = γ > α`, so only exception keys can
//! fail the quantifier. The predecessor set of `β` is therefore the
//! level-`(k-1)` set cut down by a threshold scan over the finitely many
//! relevant keys.

use crate::ordinal::{IntervalSet, Ordinal, OrdinalInterval};

use super::{StabilityError, StabilitySystem};

impl StabilitySystem {
    /// `{ α < β : α <_k β }`, with no bounds check.
    pub(crate) fn preds(&self, k: u32, beta: &Ordinal) -> IntervalSet {
        if k == 0 {
            return IntervalSet::below(beta);
        }
        // levels above the stored depth carry no data
        let k = k.min(self.depth());
        let base = self.preds(k - 1, beta);
        let relevant: Vec<(&Ordinal, &Ordinal)> = self.levels[k as usize - 1]
            .range(..=beta)
            .filter(|(key, _)| (*key == beta || base.member(key)) && self.in_dom(k, key))
            .collect();
        if relevant.is_empty() {
            return base;
        }
        base.intersect(&threshold_scan(beta, &relevant))
    }

    /// `α ∈ Dom f_k`, assuming `k ≥ 1`.
    pub(crate) fn in_dom(&self, k: u32, a: &Ordinal) -> bool {
        a < &self.bound && self.limit_at(k - 1, a)
    }

    /// `α` is a `<_k`-limit: its strict predecessor set is nonempty with
    /// no maximum. Level 0 is the ordinary notion.
    pub(crate) fn limit_at(&self, k: u32, a: &Ordinal) -> bool {
        if k == 0 {
            return a.is_limit();
        }
        let s = self.preds(k, a);
        !s.is_empty() && s.max().is_none()
    }

    /// `α` is a `<_k`-lim²: a `<_k`-limit whose `<_k`-limit predecessors
    /// are cofinal in it.
    ///
    /// Above the largest exception key below `α`, every limit is a
    /// `<_j`-limit at every level and lies in the top interval of the
    /// predecessor set, so the cofinality question reduces to whether
    /// limits are cofinal in `α` at all.
    pub(crate) fn lim2_at(&self, k: u32, a: &Ordinal) -> bool {
        if k == 0 {
            return a.is_lim2();
        }
        self.limit_at(k, a) && a.is_lim2()
    }

    pub fn dom_f(&self, k: u32, a: &Ordinal) -> Result<bool, StabilityError> {
        if k == 0 {
            return Err(StabilityError::BadLevel(0));
        }
        self.check_bounds(a)?;
        Ok(self.in_dom(k, a))
    }

    /// `f_k(α)`, or `None` outside the domain.
    pub fn f_eval(&self, k: u32, a: &Ordinal) -> Result<Option<Ordinal>, StabilityError> {
        if !self.dom_f(k, a)? {
            return Ok(None);
        }
        let value = self
            .exceptions(k)
            .and_then(|m| m.get(a))
            .unwrap_or(a)
            .clone();
        Ok(Some(value))
    }

    /// `α <_k β`. Level 0 is the plain order.
    pub fn lt_k(&self, k: u32, a: &Ordinal, b: &Ordinal) -> Result<bool, StabilityError> {
        self.check_bounds(a)?;
        self.check_bounds(b)?;
        if a >= b {
            return Ok(false);
        }
        Ok(k == 0 || self.preds(k, b).member(a))
    }

    /// `α ≤_k β`.
    pub fn le_k(&self, k: u32, a: &Ordinal, b: &Ordinal) -> Result<bool, StabilityError> {
        if a == b {
            self.check_bounds(a)?;
            return Ok(true);
        }
        self.lt_k(k, a, b)
    }

    pub fn pred_set(&self, k: u32, b: &Ordinal) -> Result<IntervalSet, StabilityError> {
        self.check_bounds(b)?;
        Ok(self.preds(k, b))
    }

    pub fn is_k_limit(&self, k: u32, a: &Ordinal) -> Result<bool, StabilityError> {
        self.check_bounds(a)?;
        Ok(self.limit_at(k, a))
    }

    pub fn is_k_lim2(&self, k: u32, a: &Ordinal) -> Result<bool, StabilityError> {
        self.check_bounds(a)?;
        Ok(self.lim2_at(k, a))
    }

    /// The liminf of `f_{k+1}` along the level-`k` chain below `α`: the
    /// limits below `α` for `k = 0`, otherwise the `<_k`-limits `ᾱ <_k α`.
    ///
    /// Finitely many exception keys sit below `α`; past the last of them
    /// every index point takes its default value, so each tail infimum is
    /// the least index point in that tail. Those are cofinal in `α`, so the
    /// supremum over tails is `α` itself.
    pub fn chain_liminf(&self, k: u32, a: &Ordinal) -> Result<Ordinal, StabilityError> {
        self.check_bounds(a)?;
        if !self.lim2_at(k, a) {
            return Err(StabilityError::NotLim2 {
                level: k,
                ordinal: a.clone(),
            });
        }
        let index = self.preds(k, a);
        let last_key = self
            .exceptions(k + 1)
            .and_then(|m| m.range(..a.clone()).next_back().map(|(key, _)| key.clone()))
            .unwrap_or_default();
        // the default tail must be nonempty for the argument above
        let tail = index.filter_below(a);
        debug_assert!(tail.sup().map(|s| &s == a).unwrap_or(false));
        debug_assert!(&last_key < a);
        Ok(a.clone())
    }
}

/// `{ α < β : every relevant key γ > α has value ≥ α }`, for keys listed
/// in ascending order.
fn threshold_scan(beta: &Ordinal, relevant: &[(&Ordinal, &Ordinal)]) -> IntervalSet {
    let mut out = Vec::with_capacity(relevant.len() + 1);
    let mut upper = beta.clone();
    let mut cap: Option<Ordinal> = None;
    for (key, value) in relevant.iter().rev() {
        out.extend(capped(key, &upper, cap.as_ref()));
        cap = Some(match cap {
            Some(c) if &c <= *value => c,
            _ => (*value).clone(),
        });
        upper = (*key).clone();
    }
    out.extend(capped(&Ordinal::zero(), &upper, cap.as_ref()));
    IntervalSet::from_intervals(out)
}

fn capped(low: &Ordinal, high: &Ordinal, cap: Option<&Ordinal>) -> Option<OrdinalInterval> {
    let high = match cap {
        Some(c) => std::cmp::min(high.clone(), c.successor()),
        None => high.clone(),
    };
    OrdinalInterval::new(low.clone(), high)
}
