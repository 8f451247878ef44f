//! Seeded generators of stability systems, extension towers and chains.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ordinal::{IntervalSet, Ordinal, Term};
use crate::poset::{canonical_extend, extend_to_chain_limit, ChainPresentation};
use crate::stability::StabilitySystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemShape {
    /// Largest exponent in generated ordinals.
    pub max_exponent: u32,
    /// Largest coefficient in generated ordinals.
    pub max_coefficient: u64,
    /// Generated bounds lie strictly below this.
    pub bound_cap: Ordinal,
    pub max_exceptions: usize,
    pub max_depth: u32,
}

impl SystemShape {
    /// Bound at most `ω^3·5`, up to 8 exceptions, depth at most 4.
    pub fn wide() -> Self {
        SystemShape {
            max_exponent: 3,
            max_coefficient: 5,
            bound_cap: Ordinal::omega_pow(3, 5),
            max_exceptions: 8,
            max_depth: 4,
        }
    }

    /// Bound below `ω·12`, up to 6 exceptions, depth at most 4.
    pub fn small() -> Self {
        SystemShape {
            max_exponent: 1,
            max_coefficient: 11,
            bound_cap: Ordinal::omega_pow(1, 12),
            max_exceptions: 6,
            max_depth: 4,
        }
    }
}

/// A random ordinal strictly below `bound`, or 0 when `bound` is 0.
pub fn ordinal_below<R: Rng>(rng: &mut R, bound: &Ordinal, shape: &SystemShape) -> Ordinal {
    if bound.is_zero() {
        return Ordinal::zero();
    }
    for _ in 0..32 {
        let x = random_ordinal(rng, shape);
        if &x < bound {
            return x;
        }
    }
    // walk down the bound's own terms
    let mut terms: Vec<Term> = bound.terms().to_vec();
    let last = terms.pop().expect("nonzero");
    let lowered = rng.gen_range(0..last.coefficient);
    if lowered > 0 {
        terms.push(Term {
            exponent: last.exponent,
            coefficient: lowered,
        });
    }
    if last.exponent > 0 {
        terms.push(Term {
            exponent: rng.gen_range(0..last.exponent),
            coefficient: rng.gen_range(1..=shape.max_coefficient.max(1)),
        });
    }
    Ordinal::from_terms(terms.into_iter().map(|t| (t.exponent, t.coefficient))).expect("descending")
}

fn random_ordinal<R: Rng>(rng: &mut R, shape: &SystemShape) -> Ordinal {
    let mut terms = Vec::new();
    for e in (0..=shape.max_exponent).rev() {
        if rng.gen_bool(0.5) {
            terms.push((e, rng.gen_range(1..=shape.max_coefficient)));
        }
    }
    Ordinal::from_terms(terms).expect("descending exponents")
}

fn limit_below<R: Rng>(rng: &mut R, bound: &Ordinal, shape: &SystemShape) -> Option<Ordinal> {
    for _ in 0..32 {
        let x = ordinal_below(rng, bound, shape);
        let x = strip_finite(&x);
        if x.is_limit() {
            return Some(x);
        }
    }
    None
}

fn strip_finite(x: &Ordinal) -> Ordinal {
    let terms = x.terms().iter().filter(|t| t.exponent > 0).map(|t| (t.exponent, t.coefficient));
    Ordinal::from_terms(terms).expect("subsequence of a normal form")
}

/// A random element of a nonempty interval set.
pub fn element_of<R: Rng>(rng: &mut R, set: &IntervalSet, shape: &SystemShape) -> Option<Ordinal> {
    let iv = set.intervals().choose(rng)?;
    let x = match rng.gen_range(0..4) {
        0 => iv.low.clone(),
        1 => iv.high.predecessor().unwrap_or_else(|| iv.low.clone()),
        _ => std::cmp::max(iv.low.clone(), ordinal_below(rng, &iv.high, shape)),
    };
    Some(x)
}

fn random_bound<R: Rng>(rng: &mut R, shape: &SystemShape) -> Ordinal {
    loop {
        let top = ordinal_below(rng, &shape.bound_cap, shape);
        let top = if rng.gen_bool(0.8) { strip_finite(&top) } else { top };
        if !top.is_zero() {
            return top.successor();
        }
    }
}

/// A random valid system: exceptions are proposed at domain points with a
/// value drawn from the key's predecessors, and kept only if the system
/// still validates.
pub fn valid_system<R: Rng>(rng: &mut R, shape: &SystemShape) -> StabilitySystem {
    let bound = random_bound(rng, shape);
    let depth = rng.gen_range(1..=shape.max_depth);
    let mut p = StabilitySystem::new(bound.clone(), depth);
    let wanted = rng.gen_range(0..=shape.max_exceptions);
    let mut attempts = 0;
    while p.exception_count() < wanted && attempts < 8 * shape.max_exceptions {
        attempts += 1;
        let Some(key) = limit_below(rng, &bound, shape) else { continue };
        let k = rng.gen_range(1..=depth);
        if !p.dom_f(k, &key).unwrap_or(false) || p.exceptions(k).is_some_and(|m| m.contains_key(&key)) {
            continue;
        }
        let preds = p.pred_set(k, &key).expect("key below bound");
        let Some(value) = element_of(rng, &preds, shape) else { continue };
        let Ok(q) = p.with_exception(k, key, value) else { continue };
        if q.validate().valid {
            p = q;
        }
    }
    p
}

/// A random system with no validity guarantee: keys and values are drawn
/// loosely, some keys at or above the bound, some values above their keys.
pub fn raw_system<R: Rng>(rng: &mut R, shape: &SystemShape) -> StabilitySystem {
    let bound = if rng.gen_bool(0.9) {
        random_bound(rng, shape)
    } else {
        strip_finite(&random_bound(rng, shape)).max(Ordinal::omega())
    };
    let depth = rng.gen_range(1..=shape.max_depth);
    let mut p = StabilitySystem::new(bound.clone(), depth);
    let cap = shape.bound_cap.clone();
    for _ in 0..rng.gen_range(0..=shape.max_exceptions) {
        let key_range = if rng.gen_bool(0.1) { &cap } else { &bound };
        let Some(key) = limit_below(rng, key_range, shape) else { continue };
        let value = if rng.gen_bool(0.1) {
            key.successor()
        } else {
            ordinal_below(rng, &key.successor(), shape)
        };
        p.insert_exception(rng.gen_range(1..=depth), key, value).expect("level ≥ 1");
    }
    p
}

/// A step that extends `p` at level `ell`: a canonical raise or a move to a
/// chain limit at some level `≥ ell - 1` with a reachable target.
pub fn extension_step<R: Rng>(rng: &mut R, p: &StabilitySystem, ell: u32, shape: &SystemShape) -> StabilitySystem {
    let top = p.top().expect("valid");
    if rng.gen_bool(0.4) {
        let raise = match rng.gen_range(0..3) {
            0 => Ordinal::zero(),
            1 => Ordinal::omega_pow(1, rng.gen_range(1..=3)),
            _ => Ordinal::omega_pow(rng.gen_range(1..=shape.max_exponent.max(1)), 1),
        };
        return canonical_extend(p, &top.add(&raise)).expect("valid raise");
    }
    let level = rng.gen_range(ell.saturating_sub(1).max(1)..=ell + 1);
    let lambda = top.add(&Ordinal::omega());
    let raised = p.with_bound(lambda.successor());
    let preds = raised
        .pred_set(level + 1, &lambda)
        .expect("in range")
        .filter_below(p.bound());
    let target = element_of(rng, &preds, shape).unwrap_or_default();
    extend_to_chain_limit(p, level, &target)
        .or_else(|_| extend_to_chain_limit(p, level, &Ordinal::zero()))
        .expect("0 is below every limit at every level")
}

/// `p ≥ q ≥ r`, each step extending the previous at level `ell`.
pub fn tower<R: Rng>(rng: &mut R, shape: &SystemShape) -> (u32, [StabilitySystem; 3]) {
    let ell = rng.gen_range(1..=3);
    let p = valid_system(rng, shape);
    let q = extension_step(rng, &p, ell, shape);
    let r = extension_step(rng, &q, ell, shape);
    (ell, [p, q, r])
}

/// A descending chain of one to four conditions followed by a limit target
/// above the last top.
pub fn chain<R: Rng>(rng: &mut R, shape: &SystemShape) -> ChainPresentation {
    let ell = rng.gen_range(1..=3);
    let mut conditions = vec![valid_system(rng, shape)];
    for _ in 0..rng.gen_range(0..=3) {
        let last = conditions.last().expect("nonempty");
        conditions.push(extension_step(rng, last, ell, shape));
    }
    let top = conditions.last().and_then(|p| p.top()).expect("valid");
    let raise = match rng.gen_range(0..4) {
        0 => Ordinal::omega(),
        1 => Ordinal::omega_pow(1, rng.gen_range(2..=5)),
        2 => Ordinal::omega_pow(2, 1),
        _ => Ordinal::omega_pow(rng.gen_range(2..=4), rng.gen_range(1..=2)),
    };
    ChainPresentation::new(conditions, top.add(&raise), ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::extends;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn valid_systems_validate_and_respect_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = SystemShape::wide();
        let mut total = 0;
        for _ in 0..100 {
            let p = valid_system(&mut rng, &shape);
            assert!(p.validate().valid, "{}", p.to_json());
            assert!(p.bound() < &shape.bound_cap);
            assert!(p.exception_count() <= 8 && p.depth() <= 4);
            total += p.exception_count();
        }
        assert!(total > 100, "generator produced only {total} exceptions");
    }

    #[test]
    fn raw_systems_are_sometimes_invalid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = SystemShape::small();
        let invalid = (0..200)
            .filter(|_| !raw_system(&mut rng, &shape).validate().valid)
            .count();
        assert!(invalid > 20 && invalid < 200, "{invalid}");
    }

    #[test]
    fn towers_step_down() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let shape = SystemShape::wide();
        for _ in 0..30 {
            let (ell, [p, q, r]) = tower(&mut rng, &shape);
            assert!(extends(&q, &p, ell).unwrap());
            assert!(extends(&r, &q, ell).unwrap());
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let shape = SystemShape::wide();
        let a = valid_system(&mut ChaCha8Rng::seed_from_u64(5), &shape);
        let b = valid_system(&mut ChaCha8Rng::seed_from_u64(5), &shape);
        assert_eq!(a, b);
    }
}
