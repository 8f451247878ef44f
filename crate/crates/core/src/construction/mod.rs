//! Replay of the point-by-point construction of a global stability system
//! from a declared stability pattern, with checkers for the properties the
//! construction is meant to secure.
//!
//! Each point `i` of the pattern is handled in two steps. The system is
//! first raised canonically to `pos(i)` and `f_{ℓ_i}(pos(i))` is set to
//! `γ_i`, the α-value of the last earlier point of `C` that is stable to
//! level `ℓ_i`. The top is then moved to `α_i = pos(i) + ω`, which carries
//! `f_{ℓ_i+1}(α_i)` equal to the α-value of the last earlier point stable to
//! level `ℓ_i + 1`. Missing points stand for ordinal 0.

mod checks;
mod minimality;
mod pattern;
mod report;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::poset::{canonical_extend, extend_to_chain_limit, extends, PosetError};
use crate::stability::StabilitySystem;

pub use checks::{check_lemma6, check_requirements};
pub use minimality::{minimality_report, BlockWitness, MinimalityReport};
pub use pattern::{DerivedAssignment, PatternPoint, StabilityPattern};
pub use report::{CheckReport, CheckResult, Witness};

#[cfg(test)]
pub(crate) use pattern::fixtures;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("pattern fails {}", .0.failed().join(", "))]
    InvalidPattern(CheckReport),
    #[error("{target} is not <_{level} {lambda} while placing the chain limit above {pos}")]
    TargetNotReachable {
        pos: Ordinal,
        target: Ordinal,
        level: u32,
        lambda: Ordinal,
    },
    #[error("intermediate system at {pos} is invalid: {message}")]
    InvalidIntermediate { pos: Ordinal, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// Raised to `pos(i)` with the level-`ℓ_i` value installed.
    Open,
    ChainLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub point: Ordinal,
    pub kind: StepKind,
    /// Level at which this step extends the one before it.
    pub level: u32,
    pub system: StabilitySystem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointResult {
    pub pos: Ordinal,
    pub ell: u32,
    pub gamma: Ordinal,
    pub alpha: Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub system: StabilitySystem,
    #[serde(rename = "assignments")]
    pub per_point: Vec<PointResult>,
    pub trace: Vec<TraceStep>,
}

impl SimulationResult {
    pub fn point(&self, pos: &Ordinal) -> Option<&PointResult> {
        self.per_point.iter().find(|p| &p.pos == pos)
    }

    /// α-value of a point, with `None` standing for 0.
    pub fn alpha_of(&self, pos: Option<&Ordinal>) -> Ordinal {
        pos.and_then(|x| self.point(x))
            .map_or_else(Ordinal::zero, |p| p.alpha.clone())
    }
}

fn intermediate(pos: &Ordinal, e: impl ToString) -> SimError {
    SimError::InvalidIntermediate {
        pos: pos.clone(),
        message: e.to_string(),
    }
}

pub fn run_construction(pattern: &StabilityPattern) -> Result<SimulationResult, SimError> {
    let report = pattern.validate();
    if !report.passed() {
        return Err(SimError::InvalidPattern(report));
    }
    replay(pattern)
}

fn replay(pattern: &StabilityPattern) -> Result<SimulationResult, SimError> {
    let mut g = StabilitySystem::trivial();
    let mut result = SimulationResult {
        system: g.clone(),
        per_point: Vec::new(),
        trace: Vec::new(),
    };

    for derived in pattern.derive_assignments() {
        let pos = derived.pos.clone();
        let ell = derived.ell;
        let gamma = result.alpha_of(derived.sup_stable(ell));
        let target = result.alpha_of(derived.sup_stable(ell + 1));

        let mut open = canonical_extend(&g, &pos).map_err(|e| intermediate(&pos, e))?;
        open.insert_exception(ell, pos.clone(), gamma.clone())
            .map_err(|e| intermediate(&pos, e))?;
        let report = open.validate();
        if let Some(v) = report.violations.first() {
            return Err(intermediate(&pos, &v.message));
        }
        step(&mut result, &g, &open, &pos, StepKind::Open, 1)?;

        let closed = extend_to_chain_limit(&open, ell, &target).map_err(|e| match e {
            PosetError::TargetNotReachable { target, level, lambda } => SimError::TargetNotReachable {
                pos: pos.clone(),
                target,
                level,
                lambda,
            },
            other => intermediate(&pos, other),
        })?;
        step(&mut result, &open, &closed, &pos, StepKind::ChainLimit, ell + 1)?;

        let alpha = closed.top().expect("valid");
        result.per_point.push(PointResult {
            pos,
            ell,
            gamma,
            alpha,
        });
        g = closed;
    }
    result.system = g;
    Ok(result)
}

fn step(
    result: &mut SimulationResult,
    from: &StabilitySystem,
    to: &StabilitySystem,
    pos: &Ordinal,
    kind: StepKind,
    level: u32,
) -> Result<(), SimError> {
    if !extends(to, from, level).map_err(|e| intermediate(pos, e))? {
        return Err(intermediate(pos, format!("{kind:?} step does not extend at level {level}")));
    }
    result.trace.push(TraceStep {
        point: pos.clone(),
        kind,
        level,
        system: to.clone(),
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::ordinal::ord;
    use crate::stability::landmarks;

    fn exceptions(p: &StabilitySystem) -> Vec<(u32, String, String)> {
        p.all_exceptions()
            .map(|(k, a, b)| (k, a.to_string(), b.to_string()))
            .collect()
    }

    fn ex(list: &[(u32, &str, &str)]) -> Vec<(u32, String, String)> {
        list.iter().map(|(k, a, b)| (*k, a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn single_point_run() {
        let r = run_construction(&p1()).unwrap();
        assert_eq!(exceptions(&r.system), ex(&[(1, "w*6", "0"), (2, "w*7", "0")]));
        assert_eq!(r.per_point[0].alpha, ord("w*7"));
        assert_eq!(r.trace.len(), 2);
    }

    #[test]
    fn two_point_run_follows_stage_rule() {
        let r = run_construction(&p2()).unwrap();
        // st(i, j) = 1, so nothing earlier is stable to level 2 below j
        assert_eq!(
            exceptions(&r.system),
            ex(&[(1, "w*6", "0"), (1, "w*20", "w*7"), (2, "w*7", "0"), (2, "w*21", "0")])
        );
        assert_eq!(r.point(&ord("w*20")).unwrap().gamma, ord("w*7"));
    }

    #[test]
    fn deeper_pattern_run() {
        let r = run_construction(&p3()).unwrap();
        assert_eq!(
            exceptions(&r.system),
            ex(&[(1, "w*20", "w*7"), (2, "w*6", "0"), (2, "w*21", "w*7"), (3, "w*7", "0")])
        );
    }

    #[test]
    fn result_systems_satisfy_structure_checks() {
        for pattern in [p1(), p2(), p3()] {
            let g = run_construction(&pattern).unwrap().system;
            assert!(g.validate().valid);
            let probe = landmarks(&g);
            for k in 0..=g.depth() {
                assert!(g.check_tree_properties(k, &probe).unwrap().passed());
            }
            for k in 1..=g.depth() {
                assert!(g.check_lemma2(k).unwrap().passed());
            }
        }
    }

    #[test]
    fn trace_is_a_descending_chain() {
        let r = run_construction(&p3()).unwrap();
        let mut prev = StabilitySystem::trivial();
        for s in &r.trace {
            assert!(extends(&s.system, &prev, s.level).unwrap());
            prev = s.system.clone();
        }
        assert_eq!(prev, r.system);
    }

    #[test]
    fn invalid_pattern_is_refused() {
        let mut p = p2();
        p.st[0].2 = 2;
        assert!(matches!(run_construction(&p), Err(SimError::InvalidPattern(_))));
    }

    #[test]
    fn incoherent_pattern_hits_an_unreachable_target() {
        // st(a, i) = 2 and st(b, i) = 1 without st(a, b) ≥ 2
        let p = StabilityPattern::new(
            vec![
                PatternPoint::new(ord("w*2"), true, [1]),
                PatternPoint::new(ord("w*5"), true, []),
                PatternPoint::new(ord("w*8"), true, []),
            ],
            vec![(ord("w*2"), ord("w*8"), 2), (ord("w*5"), ord("w*8"), 1)],
        );
        assert_eq!(p.validate().failed(), vec!["A2"]);
        assert_eq!(
            replay(&p),
            Err(SimError::TargetNotReachable {
                pos: ord("w*8"),
                target: ord("w*3"),
                level: 2,
                lambda: ord("w*9"),
            })
        );
    }

    #[test]
    fn determinism() {
        let a = serde_json::to_string(&run_construction(&p3()).unwrap()).unwrap();
        let b = serde_json::to_string(&run_construction(&p3()).unwrap()).unwrap();
        assert_eq!(a, b);
        let back: SimulationResult = serde_json::from_str(&a).unwrap();
        assert_eq!(back, run_construction(&p3()).unwrap());
    }
}
