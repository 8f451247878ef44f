use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ordinal::Ordinal;

use super::report::{CheckReport, CheckResult, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternPoint {
    pub pos: Ordinal,
    #[serde(rename = "inC")]
    pub in_c: bool,
    #[serde(rename = "cofinalLevels", default)]
    pub cofinal_levels: BTreeSet<u32>,
}

impl PatternPoint {
    pub fn new(pos: Ordinal, in_c: bool, cofinal_levels: impl IntoIterator<Item = u32>) -> Self {
        PatternPoint {
            pos,
            in_c,
            cofinal_levels: cofinal_levels.into_iter().collect(),
        }
    }

    /// Least level `ℓ ≥ 1` not flagged as cofinal.
    pub fn ell(&self) -> u32 {
        (1..).find(|l| !self.cofinal_levels.contains(l)).expect("finite set")
    }
}

/// Declared stability data: an increasing list of points and the stability
/// degree of each ordered pair (absent pairs have degree 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityPattern {
    pub points: Vec<PatternPoint>,
    #[serde(default)]
    pub st: Vec<(Ordinal, Ordinal, u32)>,
}

/// `ℓ_i` together with `supStable(i, ℓ)` for `ℓ ≤ ℓ_i + 1`; `None` is the
/// sentinel standing for ordinal 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedAssignment {
    pub pos: Ordinal,
    pub ell: u32,
    #[serde(rename = "supStable")]
    pub sup_stable: BTreeMap<u32, Option<Ordinal>>,
}

impl DerivedAssignment {
    pub fn sup_stable(&self, level: u32) -> Option<&Ordinal> {
        self.sup_stable.get(&level).and_then(Option::as_ref)
    }
}

impl StabilityPattern {
    pub fn new(points: Vec<PatternPoint>, st: Vec<(Ordinal, Ordinal, u32)>) -> Self {
        StabilityPattern { points, st }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pattern serializes")
    }

    pub fn index_of(&self, pos: &Ordinal) -> Option<usize> {
        self.points.iter().position(|p| &p.pos == pos)
    }

    /// Degree table indexed by point positions in `points`.
    fn degrees(&self) -> BTreeMap<(usize, usize), u32> {
        self.st
            .iter()
            .filter_map(|(a, b, n)| Some(((self.index_of(a)?, self.index_of(b)?), *n)))
            .collect()
    }

    /// `st(i, j)` by point index.
    pub fn degree(&self, i: usize, j: usize) -> u32 {
        let (a, b) = (&self.points[i].pos, &self.points[j].pos);
        self.st
            .iter()
            .find(|(x, y, _)| x == a && y == b)
            .map_or(0, |t| t.2)
    }

    pub fn validate(&self) -> CheckReport {
        let n = self.points.len();
        let mut a1 = CheckResult::new("A1");
        for (idx, p) in self.points.iter().enumerate() {
            a1.checked += 1;
            if !p.pos.is_limit() || p.pos.last_exponent() != Some(1) {
                a1.fail(Witness::at(&p.pos, format!("{} is not a limit of the form λ + ω", p.pos)));
            }
            if idx > 0 {
                let prev = &self.points[idx - 1].pos;
                if prev.add(&Ordinal::omega_pow(1, 2)) > p.pos {
                    a1.fail(Witness::pair(prev, &p.pos, format!("{} does not lie ω·2 above {prev}", p.pos)));
                }
            }
        }
        for (a, b, deg) in &self.st {
            a1.checked += 1;
            match (self.index_of(a), self.index_of(b)) {
                (Some(i), Some(j)) if i < j && *deg >= 1 => {}
                _ => a1.fail(Witness::pair(a, b, format!("st({a}, {b}) = {deg} is not a degree between declared points"))),
            }
        }

        let deg = self.degrees();
        let st = |i: usize, j: usize| deg.get(&(i, j)).copied().unwrap_or(0);
        let mut a2 = CheckResult::new("A2");
        for j in 0..n {
            for mid in 0..j {
                let b = st(mid, j);
                if b == 0 {
                    continue;
                }
                for i in 0..mid {
                    let a = st(i, j);
                    if a < 2 {
                        continue;
                    }
                    a2.checked += 1;
                    // strongest instance: k = min(a - 1, b)
                    let k = (a - 1).min(b);
                    if st(i, mid) < k + 1 {
                        let (pi, pm, pj) = (&self.points[i].pos, &self.points[mid].pos, &self.points[j].pos);
                        a2.fail(Witness {
                            points: vec![pi.clone(), pm.clone(), pj.clone()],
                            level: Some(k),
                            ordinal: None,
                            message: format!(
                                "st({pi}, {pj}) = {a} and st({pm}, {pj}) = {b} but st({pi}, {pm}) = {} < {}",
                                st(i, mid),
                                k + 1
                            ),
                        });
                    }
                }
            }
        }

        let mut a3 = CheckResult::new("A3");
        for p in &self.points {
            a3.checked += 1;
            let levels = &p.cofinal_levels;
            let closed = levels.iter().enumerate().all(|(i, &l)| l == i as u32 + 1);
            if !closed {
                a3.fail(Witness::at(
                    &p.pos,
                    format!("cofinal levels {levels:?} at {} are not of the form 1..n", p.pos),
                ));
            }
        }

        let mut a4 = CheckResult::new("A4");
        for (&(i, j), &d) in &deg {
            let p = &self.points[i];
            if !p.in_c {
                continue;
            }
            a4.checked += 1;
            if p.ell() < d {
                a4.fail(Witness {
                    points: vec![p.pos.clone(), self.points[j].pos.clone()],
                    level: Some(d),
                    ordinal: None,
                    message: format!("ℓ = {} at {} is below st = {d}", p.ell(), p.pos),
                });
            }
        }

        CheckReport::new(vec![a1, a2, a3, a4])
    }

    /// `ℓ_i` and the last earlier point of `C` stable to each level.
    pub fn derive_assignments(&self) -> Vec<DerivedAssignment> {
        let deg = self.degrees();
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let ell = p.ell();
                let sup_stable = (1..=ell + 1)
                    .map(|level| {
                        let last = (0..i)
                            .rev()
                            .find(|&j| self.points[j].in_c && deg.get(&(j, i)).copied().unwrap_or(0) >= level)
                            .map(|j| self.points[j].pos.clone());
                        (level, last)
                    })
                    .collect();
                DerivedAssignment {
                    pos: p.pos.clone(),
                    ell,
                    sup_stable,
                }
            })
            .collect()
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::ordinal::ord;

    #[test]
    fn golden_patterns_validate() {
        for p in [p1(), p2(), p3()] {
            let r = p.validate();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn degree_above_ell_breaks_a4() {
        let mut p = p2();
        p.st[0].2 = 2;
        let r = p.validate();
        assert_eq!(r.failed(), vec!["A4"]);
        assert_eq!(r.get("A4").unwrap().witnesses[0].points, vec![ord("w*6"), ord("w*20")]);
    }

    #[test]
    fn position_constraints() {
        let bad = StabilityPattern::new(
            vec![
                PatternPoint::new(ord("w^2"), true, []),
                PatternPoint::new(ord("w^2+w"), true, []),
                PatternPoint::new(ord("w^2+w*4+1"), true, []),
            ],
            vec![(ord("w"), ord("w^2"), 1)],
        );
        let a1 = bad.validate().get("A1").unwrap().clone();
        assert_eq!(a1.witnesses.len(), 4, "{a1:?}");
    }

    #[test]
    fn coherence_and_closure() {
        let p = StabilityPattern::new(
            vec![
                PatternPoint::new(ord("w*2"), true, [1, 2]),
                PatternPoint::new(ord("w*5"), true, [1]),
                PatternPoint::new(ord("w*9"), true, [2]),
            ],
            vec![(ord("w*2"), ord("w*9"), 2), (ord("w*5"), ord("w*9"), 1)],
        );
        let r = p.validate();
        assert_eq!(r.failed(), vec!["A2", "A3"]);
        let a2 = r.get("A2").unwrap();
        assert_eq!(a2.witnesses[0].level, Some(1));

        let mut fixed = p.clone();
        fixed.st.push((ord("w*2"), ord("w*5"), 2));
        fixed.points[2].cofinal_levels = [1, 2].into();
        assert!(fixed.validate().passed());
    }

    #[test]
    fn assignments() {
        let a = p2().derive_assignments();
        assert_eq!((a[0].ell, a[0].sup_stable(1)), (1, None));
        assert_eq!((a[1].ell, a[1].sup_stable(1)), (1, Some(&ord("w*6"))));
        assert_eq!(a[1].sup_stable(2), None);

        let a = p1().derive_assignments();
        assert_eq!((a[0].ell, a[0].sup_stable(1)), (1, None));

        let a = p3().derive_assignments();
        assert_eq!(a[0].ell, 2);
        assert_eq!(a[0].sup_stable(2), None);
        assert_eq!(a[0].sup_stable(3), None);
        assert_eq!(a[1].ell, 1);
        assert_eq!(a[1].sup_stable(1), Some(&ord("w*6")));
        assert_eq!(a[1].sup_stable(2), Some(&ord("w*6")));
    }

    #[test]
    fn sup_stable_skips_points_outside_c() {
        let mut p = p2();
        p.points[0].in_c = false;
        assert_eq!(p.derive_assignments()[1].sup_stable(1), None);
    }

    #[test]
    fn json_shape() {
        let text = r#"{"points":[{"pos":"w*6","inC":true,"cofinalLevels":[1]},{"pos":"w*20","inC":true,"cofinalLevels":[]}],"st":[["w*6","w*20",2]]}"#;
        let p = StabilityPattern::from_json(text).unwrap();
        assert_eq!(p, p3());
        assert_eq!(p.to_json(), text);
    }
}
