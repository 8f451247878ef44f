//! Dense sets and a deterministic engine for meeting them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ordinal::{parse_ordinal, Ordinal};
use crate::stability::StabilitySystem;

use super::{canonical_extend, extend_to_chain_limit, extends, ChainPresentation, PosetError};

type Accepts = Box<dyn Fn(&StabilitySystem) -> bool + Send + Sync>;
type Refine = Box<dyn Fn(&StabilitySystem) -> Result<StabilitySystem, PosetError> + Send + Sync>;

/// A family of conditions, given by a membership test and optionally a
/// procedure that moves any condition into the family.
pub struct DenseSet {
    pub name: String,
    accepts: Accepts,
    refine: Option<Refine>,
    /// Extra values the fallback search may place at a new top.
    hints: Vec<Ordinal>,
}

impl fmt::Debug for DenseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseSet")
            .field("name", &self.name)
            .field("refine", &self.refine.is_some())
            .field("hints", &self.hints)
            .finish()
    }
}

impl DenseSet {
    pub fn new(
        name: impl Into<String>,
        accepts: impl Fn(&StabilitySystem) -> bool + Send + Sync + 'static,
    ) -> Self {
        DenseSet {
            name: name.into(),
            accepts: Box::new(accepts),
            refine: None,
            hints: Vec::new(),
        }
    }

    pub fn with_refine(
        mut self,
        refine: impl Fn(&StabilitySystem) -> Result<StabilitySystem, PosetError> + Send + Sync + 'static,
    ) -> Self {
        self.refine = Some(Box::new(refine));
        self
    }

    pub fn with_hints(mut self, hints: Vec<Ordinal>) -> Self {
        self.hints = hints;
        self
    }

    pub fn accepts(&self, p: &StabilitySystem) -> bool {
        (self.accepts)(p)
    }

    pub fn refine(&self, p: &StabilitySystem) -> Option<Result<StabilitySystem, PosetError>> {
        self.refine.as_ref().map(|r| r(p))
    }

    /// Parses `taller_than(<ord>)` or `top_chain_limit(<ell>,<ord>)`.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let spec = spec.trim();
        let (name, rest) = spec
            .split_once('(')
            .ok_or_else(|| format!("expected name(args) in {spec:?}"))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("missing ')' in {spec:?}"))?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        match (name.trim(), args.as_slice()) {
            ("taller_than", [alpha]) => Ok(taller_than(parse_ordinal(alpha).map_err(|e| e.to_string())?)),
            ("top_chain_limit", [ell, target]) => {
                let ell: u32 = ell.parse().map_err(|_| format!("bad level {ell:?}"))?;
                if ell == 0 {
                    return Err("top_chain_limit needs ell >= 1".into());
                }
                let target = parse_ordinal(target).map_err(|e| e.to_string())?;
                Ok(top_chain_limit(ell, target))
            }
            _ => Err(format!("unknown dense set {spec:?}")),
        }
    }
}

/// Conditions whose top is at least `alpha`.
pub fn taller_than(alpha: Ordinal) -> DenseSet {
    let name = format!("taller_than({alpha})");
    let a = alpha.clone();
    DenseSet::new(name, move |p| p.top().is_some_and(|t| t >= a)).with_refine(move |p| {
        let top = p.top().unwrap_or_default();
        canonical_extend(p, std::cmp::max(&top, &alpha))
    })
}

/// Conditions whose top is a `<_ell`-limit carrying `f_{ell+1}(top) = target`.
pub fn top_chain_limit(ell: u32, target: Ordinal) -> DenseSet {
    let name = format!("top_chain_limit({ell},{target})");
    let hints = vec![target.clone()];
    let t = target.clone();
    DenseSet::new(name, move |p| {
        let Some(top) = p.top() else { return false };
        p.is_k_limit(ell, &top).unwrap_or(false)
            && p.f_eval(ell + 1, &top).ok().flatten().as_ref() == Some(&t)
    })
    .with_refine(move |p| extend_to_chain_limit(p, ell, &target))
    .with_hints(hints)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetOutcome {
    pub result: StabilitySystem,
    /// `trace[0]` is the starting condition; each entry extends the previous.
    pub trace: Vec<StabilitySystem>,
    /// For each dense set, the index of the trace entry that meets it.
    pub met: Vec<(String, usize)>,
    pub spent: usize,
}

impl MeetOutcome {
    pub fn into_chain(self, target: Ordinal, ell: u32) -> ChainPresentation {
        ChainPresentation::new(self.trace, target, ell)
    }
}

/// Walks the dense sets in order, extending the current condition until
/// it lies in each one. A dense set is tried through its refine procedure
/// first, then by a bounded search over canonical `+ω` steps with at most
/// one new value at the new top. Every attempt costs one unit of `budget`.
pub fn meet_dense(
    p: &StabilitySystem,
    ell: u32,
    dense: &[DenseSet],
    budget: usize,
) -> Result<MeetOutcome, PosetError> {
    super::require_valid(p, "starting condition")?;
    let mut out = MeetOutcome {
        result: p.clone(),
        trace: vec![p.clone()],
        met: Vec::new(),
        spent: 0,
    };
    for d in dense {
        if d.accepts(&out.result) {
            out.met.push((d.name.clone(), out.trace.len() - 1));
            continue;
        }
        let next = find_extension(&out.result, ell, d, budget, &mut out.spent)?;
        out.trace.push(next.clone());
        out.result = next;
        out.met.push((d.name.clone(), out.trace.len() - 1));
    }
    Ok(out)
}

fn find_extension(
    p: &StabilitySystem,
    ell: u32,
    d: &DenseSet,
    budget: usize,
    spent: &mut usize,
) -> Result<StabilitySystem, PosetError> {
    let exhausted = || PosetError::BudgetExhausted {
        dense: d.name.clone(),
        budget,
    };
    let good = |q: &StabilitySystem| {
        q.validate().valid && d.accepts(q) && extends(q, p, ell).unwrap_or(false)
    };
    if let Some(attempt) = d.refine(p) {
        if *spent >= budget {
            return Err(exhausted());
        }
        *spent += 1;
        if let Ok(q) = attempt {
            if good(&q) {
                return Ok(q);
            }
        }
    }

    let top = p.top().expect("validated");
    let mut values: BTreeSet<Ordinal> = BTreeSet::from([Ordinal::zero()]);
    values.extend(p.all_exceptions().map(|(_, _, v)| v.clone()));
    values.extend(d.hints.iter().cloned());
    let values: Vec<Ordinal> = values.into_iter().filter(|v| v <= &top).collect();

    let mut lambda = top.clone();
    loop {
        lambda = lambda.add(&Ordinal::omega());
        let base = p.with_bound(lambda.successor());
        let placements = (1..=p.depth() + 1).flat_map(|k| values.iter().map(move |v| (k, v)));
        let candidates = std::iter::once(None).chain(placements.map(Some));
        for placement in candidates {
            if *spent >= budget {
                return Err(exhausted());
            }
            *spent += 1;
            let q = match placement {
                None => base.clone(),
                Some((k, v)) => base.with_exception(k, lambda.clone(), v.clone())?,
            };
            if good(&q) {
                return Ok(q);
            }
        }
    }
}
