use serde::{Deserialize, Serialize};

use crate::ordinal::Ordinal;
use crate::stability::StabilitySystem;

use super::{canonical_extend, extends, require_valid, PosetError};

fn default_ell() -> u32 {
    1
}

/// A finite descending chain `p_0 ≥ … ≥ p_n` whose implicit continuation
/// raises `p_n` canonically towards the limit `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPresentation {
    #[serde(rename = "chain")]
    pub conditions: Vec<StabilitySystem>,
    pub target: Ordinal,
    /// Level of the extension order the chain descends in.
    #[serde(default = "default_ell")]
    pub ell: u32,
}

impl ChainPresentation {
    pub fn new(conditions: Vec<StabilitySystem>, target: Ordinal, ell: u32) -> Self {
        ChainPresentation {
            conditions,
            target,
            ell,
        }
    }
}

/// A lower bound of the chain whose top is `target`.
///
/// Values at the new top are assigned level by level: undefined off the
/// relevant limits, the chain liminf at lim² points, the point itself at
/// the remaining limits. Under the canonical continuation that is exactly
/// the canonical extension of the last condition, which is checked.
pub fn chain_infimum(chain: &ChainPresentation) -> Result<StabilitySystem, PosetError> {
    let Some(last) = chain.conditions.last() else {
        return Err(PosetError::BadTarget("empty chain".into()));
    };
    for (i, p) in chain.conditions.iter().enumerate() {
        require_valid(p, &format!("chain member {i}"))?;
    }
    for (i, pair) in chain.conditions.windows(2).enumerate() {
        if !extends(&pair[1], &pair[0], chain.ell)? {
            return Err(PosetError::NotDescending { index: i + 1 });
        }
    }
    let lambda = &chain.target;
    let top = last.top().expect("validated");
    if !lambda.is_limit() {
        return Err(PosetError::BadTarget(format!("{lambda} is not a limit")));
    }
    if lambda < &top || (lambda == &top && chain.conditions.len() == 1) {
        return Err(PosetError::BadTarget(format!(
            "{lambda} does not lie above the chain (last top {top})"
        )));
    }
    if lambda == &top {
        // the supremum is attained by the last condition
        return Ok(last.clone());
    }

    let mut p = last.with_bound(lambda.successor());
    for k in 1..=last.depth() + 1 {
        let below = k - 1;
        let value = if !p.limit_at(below, lambda) {
            // λ is not a <_{k-1}-limit, so nothing above is defined either
            break;
        } else if p.lim2_at(below, lambda) {
            p.chain_liminf(below, lambda)?
        } else {
            lambda.clone()
        };
        if &value != lambda {
            p.insert_exception(k, lambda.clone(), value)?;
        }
    }

    let canonical = canonical_extend(last, lambda)?;
    if p != canonical {
        return Err(PosetError::InfimumMismatch(format!(
            "case analysis gave {} but the canonical extension is {}",
            p.to_json(),
            canonical.to_json()
        )));
    }
    for (i, q) in chain.conditions.iter().enumerate() {
        if !extends(&p, q, chain.ell)? {
            return Err(PosetError::InfimumMismatch(format!(
                "result does not extend chain member {i}"
            )));
        }
    }
    Ok(p)
}
