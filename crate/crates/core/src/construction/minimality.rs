use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ordinal::Ordinal;
use crate::poset::canonical_extend;

use super::SimulationResult;

/// An exception that keeps `ordinal` from being `<_level` the horizon:
/// `key` lies above `ordinal` on the `≤_{level-1}` chain below the horizon
/// and `f_level(key) = value < ordinal`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockWitness {
    pub ordinal: Ordinal,
    pub level: u32,
    pub key: Ordinal,
    pub value: Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    /// A fresh limit above both the system and the grid.
    pub horizon: Ordinal,
    /// Grid points below the horizon at each level, `1..=depth`.
    pub below_horizon: BTreeMap<u32, Vec<Ordinal>>,
    pub survivors: Vec<Ordinal>,
    pub blocked: Vec<BlockWitness>,
    /// Grid points past the last exception key; not reported either way.
    pub unsettled: Vec<Ordinal>,
}

/// Which grid points are `<_k` a fresh canonical top for every level `k`.
pub fn minimality_report(result: &SimulationResult, grid: &[Ordinal]) -> MinimalityReport {
    let g = &result.system;
    let grid: BTreeSet<Ordinal> = grid.iter().cloned().collect();
    let top = g.top().expect("valid system");
    let highest = grid.last().map_or(top.clone(), |x| std::cmp::max(x, &top).clone());
    let horizon = highest.add(&Ordinal::omega());
    let ext = canonical_extend(g, &horizon).expect("raising a valid system");
    let depth = ext.depth();
    let settled_end = g.last_exception_key().cloned();

    let mut report = MinimalityReport {
        horizon: horizon.clone(),
        below_horizon: BTreeMap::new(),
        survivors: Vec::new(),
        blocked: Vec::new(),
        unsettled: Vec::new(),
    };
    for k in 1..=depth {
        let preds = ext.pred_set(k, &horizon).expect("horizon is in range");
        let members = grid.iter().filter(|a| preds.member(a)).cloned().collect();
        report.below_horizon.insert(k, members);
    }

    for a in &grid {
        if settled_end.as_ref().is_none_or(|end| a > end) {
            report.unsettled.push(a.clone());
            continue;
        }
        let failing = (1..=depth).find(|k| !report.below_horizon[k].contains(a));
        let Some(level) = failing else {
            report.survivors.push(a.clone());
            continue;
        };
        let witness = ext.exceptions(level).and_then(|m| {
            m.range(a.successor()..).find(|(key, value)| {
                *value < a
                    && ext.dom_f(level, key).unwrap_or(false)
                    && ext.le_k(level - 1, key, &horizon).unwrap_or(false)
            })
        });
        let (key, value) = witness.expect("a failing level has a blocking exception");
        report.blocked.push(BlockWitness {
            ordinal: a.clone(),
            level,
            key: key.clone(),
            value: value.clone(),
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::run_construction;
    use super::*;
    use crate::ordinal::ord;

    fn grid(items: &[&str]) -> Vec<Ordinal> {
        items.iter().map(|s| ord(s)).collect()
    }

    const P3_GRID: [&str; 8] = ["1", "5", "w", "w*6", "w*6+3", "w*8", "w*19", "w*20+1"];

    #[test]
    fn deeper_pattern_blocks_the_grid() {
        let r = run_construction(&p3()).unwrap();
        let report = minimality_report(&r, &grid(&P3_GRID));
        assert_eq!(report.horizon, ord("w*22"));
        assert!(report.survivors.is_empty());
        assert!(report.unsettled.is_empty());
        assert_eq!(report.blocked.len(), 8);
        let at = |x: &str| report.blocked.iter().find(|w| w.ordinal == ord(x)).unwrap();
        assert_eq!((at("w*6").level, at("w*6").key.clone(), at("w*6").value.clone()), (3, ord("w*7"), ord("0")));
        assert_eq!((at("w*8").level, at("w*8").key.clone(), at("w*8").value.clone()), (1, ord("w*20"), ord("w*7")));
        assert_eq!((at("1").level, at("1").key.clone()), (2, ord("w*6")));
        assert_eq!((at("w*20+1").level, at("w*20+1").key.clone()), (2, ord("w*21")));
    }

    #[test]
    fn zero_and_the_first_alpha_survive() {
        let r = run_construction(&p3()).unwrap();
        let mut g = grid(&P3_GRID);
        g.extend(grid(&["0", "w*7"]));
        let report = minimality_report(&r, &g);
        assert_eq!(report.survivors, grid(&["0", "w*7"]));
    }

    #[test]
    fn canonical_tail_is_unsettled() {
        let r = run_construction(&p1()).unwrap();
        let report = minimality_report(&r, &grid(&["w*8"]));
        assert_eq!(report.unsettled, grid(&["w*8"]));
        assert!(report.survivors.is_empty());
        for k in 1..=2 {
            assert_eq!(report.below_horizon[&k], grid(&["w*8"]));
        }
    }

    #[test]
    fn shallow_pattern_survivors() {
        // f_2(ω·21) = 0 blocks everything strictly between 0 and ω·21
        let r = run_construction(&p2()).unwrap();
        let g = grid(&["0", "5", "w*6", "w*7", "w*8", "w*20", "w*21"]);
        let report = minimality_report(&r, &g);
        assert_eq!(report.survivors, grid(&["0", "w*21"]));
    }
}
