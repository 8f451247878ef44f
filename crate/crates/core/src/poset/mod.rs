//! The forcing `P(κ, ℓ, γ)` of stability systems and its extension order.
//!
//! `q ≤ p` (at level `ℓ`) when every `f^q_k` extends `f^p_k` and
//! `α(p) ≤^q_{ℓ-1} α(q)`, where `≤_0` is the ordinal order.

mod chain;
mod dense;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::stability::{StabilityError, StabilitySystem};

pub use chain::{chain_infimum, ChainPresentation};
pub use dense::{meet_dense, taller_than, top_chain_limit, DenseSet, MeetOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("invalid condition: {0}")]
    InvalidCondition(String),
    #[error("{alpha} is out of range: {reason}")]
    OutOfRange { alpha: Ordinal, reason: String },
    #[error("chain is not descending at position {index}")]
    NotDescending { index: usize },
    #[error("bad chain target: {0}")]
    BadTarget(String),
    #[error("{target} is not <_{level} {lambda}; cannot place f_{level}({lambda}) = {target}")]
    TargetNotReachable {
        target: Ordinal,
        level: u32,
        lambda: Ordinal,
    },
    #[error("budget of {budget} exhausted before meeting dense set {dense}")]
    BudgetExhausted { dense: String, budget: usize },
    #[error("chain infimum check failed: {0}")]
    InfimumMismatch(String),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

/// The parameters `κ`, `ℓ`, `γ` of the forcing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetParams {
    pub kappa: Ordinal,
    pub ell: u32,
    pub gamma: Ordinal,
}

impl PosetParams {
    pub fn new(kappa: Ordinal, ell: u32, gamma: Ordinal) -> Result<Self, PosetError> {
        if ell == 0 {
            return Err(PosetError::OutOfRange {
                alpha: Ordinal::zero(),
                reason: "ell must be at least 1".into(),
            });
        }
        if !kappa.is_limit() || gamma >= kappa {
            return Err(PosetError::OutOfRange {
                alpha: gamma,
                reason: format!("kappa {kappa} must be a limit above gamma"),
            });
        }
        Ok(PosetParams { kappa, ell, gamma })
    }
}

fn require_valid(p: &StabilitySystem, what: &str) -> Result<Ordinal, PosetError> {
    let report = p.validate();
    if let Some(v) = report.violations.first() {
        return Err(PosetError::InvalidCondition(format!(
            "{what}: {} ({} violation(s))",
            v.message,
            report.violations.len()
        )));
    }
    Ok(p.top().expect("valid systems have a successor bound"))
}

/// `γ ≤_ℓ α(p) < κ`.
pub fn in_poset(p: &StabilitySystem, params: &PosetParams) -> Result<bool, PosetError> {
    let top = require_valid(p, "condition")?;
    if top >= params.kappa || params.gamma > top {
        return Ok(false);
    }
    Ok(p.le_k(params.ell, &params.gamma, &top)?)
}

/// `q ≤ p` at level `ell`.
pub fn extends(q: &StabilitySystem, p: &StabilitySystem, ell: u32) -> Result<bool, PosetError> {
    let top_p = require_valid(p, "weaker condition")?;
    let top_q = require_valid(q, "stronger condition")?;
    if q.bound() < p.bound() {
        return Ok(false);
    }
    let depth = p.depth().max(q.depth());
    for k in 1..=depth {
        let empty = Default::default();
        let mp = p.exceptions(k).unwrap_or(&empty);
        let mq = q.exceptions(k).unwrap_or(&empty);
        if !mq.range(..p.bound().clone()).eq(mp.iter()) {
            return Ok(false);
        }
    }
    Ok(q.le_k(ell.saturating_sub(1), &top_p, &top_q)?)
}

/// Raises the top of `p` to `alpha`, giving every new limit point its
/// default value.
pub fn canonical_extend(p: &StabilitySystem, alpha: &Ordinal) -> Result<StabilitySystem, PosetError> {
    let top = require_valid(p, "condition")?;
    if alpha < &top {
        return Err(PosetError::OutOfRange {
            alpha: alpha.clone(),
            reason: format!("below the current top {top}"),
        });
    }
    Ok(p.with_bound(alpha.successor()))
}

/// [`canonical_extend`] inside `P(κ, ℓ, γ)`: the new top must stay below `κ`.
pub fn canonical_extend_within(
    p: &StabilitySystem,
    alpha: &Ordinal,
    params: &PosetParams,
) -> Result<StabilitySystem, PosetError> {
    if alpha >= &params.kappa {
        return Err(PosetError::OutOfRange {
            alpha: alpha.clone(),
            reason: format!("not below kappa {}", params.kappa),
        });
    }
    canonical_extend(p, alpha)
}

/// Moves the top to `λ = α(p) + ω` and sets `f_{ell+1}(λ) = target`.
///
/// `λ` has a fresh tail of `<_ell`-predecessors, so it is a `<_ell`-limit
/// but not a `<_ell`-lim², and the new value is legal exactly when
/// `target <_{ell+1} λ`.
pub fn extend_to_chain_limit(
    p: &StabilitySystem,
    ell: u32,
    target: &Ordinal,
) -> Result<StabilitySystem, PosetError> {
    let top = require_valid(p, "condition")?;
    if ell == 0 {
        return Err(PosetError::OutOfRange {
            alpha: target.clone(),
            reason: "ell must be at least 1".into(),
        });
    }
    if target > &top {
        return Err(PosetError::OutOfRange {
            alpha: target.clone(),
            reason: format!("target above the current top {top}"),
        });
    }
    let lambda = top.add(&Ordinal::omega());
    let mut q = p.with_bound(lambda.successor());
    q.insert_exception(ell + 1, lambda.clone(), target.clone())?;
    if !q.lt_k(ell + 1, target, &lambda)? {
        return Err(PosetError::TargetNotReachable {
            target: target.clone(),
            level: ell + 1,
            lambda,
        });
    }
    require_valid(&q, "chain-limit extension")?;
    Ok(q)
}
