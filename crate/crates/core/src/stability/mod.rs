//! Stability systems and the tree orders `<_k` derived from them.
//!
//! A system is a successor bound together with finitely presented
//! functions `f_1, f_2, …`: each `f_k` is the identity on its domain except
//! at the keys of a finite exception map. The domain of `f_1` is the limit
//! ordinals below the bound; the domain of `f_{k+1}` is the `<_k`-limits.

mod checks;
mod order;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;

pub use checks::{landmarks, Lemma2Report, Lemma2Violation, TreeProperty, TreeReport, TreeViolation};
pub use validate::{Check, ValidationReport, Violation};

pub type ExceptionMap = BTreeMap<Ordinal, Ordinal>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("{ordinal} is outside the system (bound {bound})")]
    OutOfBounds { ordinal: Ordinal, bound: Ordinal },
    #[error("{ordinal} is not a lim² point of the level-{level} order")]
    NotLim2 { level: u32, ordinal: Ordinal },
    #[error("levels are numbered from 1, got {0}")]
    BadLevel(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct StabilitySystem {
    bound: Ordinal,
    // levels[k - 1] holds the exceptions of f_k
    levels: Vec<ExceptionMap>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemRepr {
    bound: Ordinal,
    #[serde(default)]
    levels: BTreeMap<u32, ExceptionMap>,
}

impl TryFrom<SystemRepr> for StabilitySystem {
    type Error = StabilityError;

    fn try_from(repr: SystemRepr) -> Result<Self, Self::Error> {
        if repr.levels.contains_key(&0) {
            return Err(StabilityError::BadLevel(0));
        }
        let depth = repr.levels.keys().next_back().copied().unwrap_or(1).max(1);
        let mut system = StabilitySystem::new(repr.bound, depth);
        for (k, map) in repr.levels {
            system.levels[k as usize - 1] = map;
        }
        Ok(system)
    }
}

impl From<StabilitySystem> for SystemRepr {
    fn from(p: StabilitySystem) -> Self {
        SystemRepr {
            bound: p.bound,
            levels: p
                .levels
                .into_iter()
                .enumerate()
                .map(|(i, m)| (i as u32 + 1, m))
                .collect(),
        }
    }
}

impl StabilitySystem {
    /// A system with no exceptions and `depth` levels of (empty) data.
    pub fn new(bound: Ordinal, depth: u32) -> Self {
        StabilitySystem {
            bound,
            levels: vec![ExceptionMap::new(); depth.max(1) as usize],
        }
    }

    /// The one-point system `{0}` (bound 1).
    pub fn trivial() -> Self {
        StabilitySystem::new(Ordinal::one(), 1)
    }

    pub fn bound(&self) -> &Ordinal {
        &self.bound
    }

    /// `α(p)`, the largest ordinal in the system; `None` when the bound is
    /// not a successor.
    pub fn top(&self) -> Option<Ordinal> {
        self.bound.predecessor()
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    /// Exceptions of `f_k`; empty beyond the stored depth.
    pub fn exceptions(&self, k: u32) -> Option<&ExceptionMap> {
        if k == 0 {
            return None;
        }
        self.levels.get(k as usize - 1)
    }

    pub fn levels(&self) -> impl Iterator<Item = (u32, &ExceptionMap)> {
        self.levels.iter().enumerate().map(|(i, m)| (i as u32 + 1, m))
    }

    /// Every `(level, key, value)` triple, by level then key.
    pub fn all_exceptions(&self) -> impl Iterator<Item = (u32, &Ordinal, &Ordinal)> {
        self.levels()
            .flat_map(|(k, m)| m.iter().map(move |(key, v)| (k, key, v)))
    }

    pub fn exception_count(&self) -> usize {
        self.levels.iter().map(|m| m.len()).sum()
    }

    /// Largest exception key at any level.
    pub fn last_exception_key(&self) -> Option<&Ordinal> {
        self.levels.iter().filter_map(|m| m.keys().next_back()).max()
    }

    pub fn with_bound(&self, bound: Ordinal) -> Self {
        StabilitySystem {
            bound,
            levels: self.levels.clone(),
        }
    }

    /// Sets `f_k(key) = value`, growing the depth if needed.
    pub fn insert_exception(&mut self, k: u32, key: Ordinal, value: Ordinal) -> Result<(), StabilityError> {
        if k == 0 {
            return Err(StabilityError::BadLevel(0));
        }
        while self.depth() < k {
            self.levels.push(ExceptionMap::new());
        }
        self.levels[k as usize - 1].insert(key, value);
        Ok(())
    }

    pub fn with_exception(&self, k: u32, key: Ordinal, value: Ordinal) -> Result<Self, StabilityError> {
        let mut q = self.clone();
        q.insert_exception(k, key, value)?;
        Ok(q)
    }

    pub fn remove_exception(&mut self, k: u32, key: &Ordinal) -> Option<Ordinal> {
        self.levels.get_mut(k.checked_sub(1)? as usize)?.remove(key)
    }

    pub(crate) fn check_bounds(&self, a: &Ordinal) -> Result<(), StabilityError> {
        if a < &self.bound {
            Ok(())
        } else {
            Err(StabilityError::OutOfBounds {
                ordinal: a.clone(),
                bound: self.bound.clone(),
            })
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("system serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::ordinal::ord;

    /// bound ω·3+1 with f_1(ω·2) = 5.
    pub fn p_star() -> StabilitySystem {
        let mut p = StabilitySystem::new(ord("w*3+1"), 1);
        p.insert_exception(1, ord("w*2"), ord("5")).unwrap();
        p
    }

    /// p* raised to bound ω·4+1 with f_2(ω·4) = 5.
    pub fn q_star() -> StabilitySystem {
        let mut q = p_star().with_bound(ord("w*4+1"));
        q.insert_exception(2, ord("w*4"), ord("5")).unwrap();
        q
    }
}
