use crate::ordinal::Ordinal;
use crate::stability::StabilitySystem;

use super::report::{CheckReport, CheckResult, Witness};
use super::{SimulationResult, StabilityPattern};

fn leveled(points: &[&Ordinal], level: u32, ordinal: Option<&Ordinal>, message: String) -> Witness {
    Witness {
        points: points.iter().map(|&x| x.clone()).collect(),
        level: Some(level),
        ordinal: ordinal.cloned(),
        message,
    }
}

/// Exceptions of `prev` are kept unchanged by `next`.
fn keeps_exceptions(prev: &StabilitySystem, next: &StabilitySystem) -> Option<String> {
    if next.bound() < prev.bound() {
        return Some(format!("bound shrinks from {} to {}", prev.bound(), next.bound()));
    }
    prev.all_exceptions().find_map(|(k, key, value)| {
        let now = next.exceptions(k).and_then(|m| m.get(key));
        (now != Some(value)).then(|| {
            let shown = now.map_or("nothing".to_string(), |v| v.to_string());
            format!("f_{k}({key}) = {value} became {shown}")
        })
    })
}

/// Requirements R1 to R4 on a finished run.
pub fn check_requirements(result: &SimulationResult, pattern: &StabilityPattern) -> CheckReport {
    let g = &result.system;
    let derived = pattern.derive_assignments();

    let mut r1 = CheckResult::new("R1");
    let mut prev = StabilitySystem::trivial();
    for step in &result.trace {
        r1.checked += 1;
        if let Some(msg) = keeps_exceptions(&prev, &step.system) {
            r1.fail(Witness::at(&step.point, msg));
        }
        prev = step.system.clone();
    }
    r1.checked += 1;
    if &prev != g {
        r1.fail(Witness::at(
            g.bound(),
            "the final system is not the last trace step".to_string(),
        ));
    }

    let mut r2 = CheckResult::new("R2");
    let mut r3 = CheckResult::new("R3");
    let mut r4 = CheckResult::new("R4");
    for (idx, d) in derived.iter().enumerate() {
        let pos = &d.pos;
        r2.checked += 1;
        let Some(point) = result.point(pos) else {
            r2.fail(Witness::at(pos, format!("no assignment recorded for {pos}")));
            continue;
        };
        let gamma = result.alpha_of(d.sup_stable(d.ell));
        if point.ell != d.ell {
            r2.fail(leveled(&[pos], d.ell, None, format!("ℓ at {pos} is {} but should be {}", point.ell, d.ell)));
        }
        if point.gamma != gamma {
            r2.fail(leveled(
                &[pos],
                d.ell,
                Some(&point.gamma),
                format!("γ at {pos} is {} but should be {gamma}", point.gamma),
            ));
        }

        let ell = point.ell;
        r3.checked += 1;
        for k in 1..ell {
            if let Some(v) = g.exceptions(k).and_then(|m| m.get(pos)) {
                r3.fail(leveled(&[pos], k, Some(v), format!("f_{k}({pos}) = {v} below level {ell}")));
            }
        }
        match g.f_eval(ell, pos) {
            Ok(Some(v)) if v == point.gamma => {}
            other => r3.fail(leveled(
                &[pos],
                ell,
                Some(&point.gamma),
                format!("f_{ell}({pos}) is {other:?}, expected {}", point.gamma),
            )),
        }

        let alpha = &point.alpha;
        r4.checked += 1;
        if !g.lt_k(ell, pos, alpha).unwrap_or(false) {
            r4.fail(leveled(&[pos], ell, Some(alpha), format!("{pos} is not <_{ell} {alpha}")));
        }
        let above = ell + 1;
        let target = result.alpha_of(d.sup_stable(above));
        match g.f_eval(above, alpha) {
            Ok(Some(v)) if v == target => {}
            Ok(Some(v)) => r4.fail(leveled(
                &[pos],
                above,
                Some(alpha),
                format!("f_{above}({alpha}) = {v}, expected {target}"),
            )),
            _ => r4.fail(leveled(
                &[pos],
                above,
                Some(alpha),
                format!("{alpha} is not in the domain of f_{above}"),
            )),
        }
        let next = pattern.points.get(idx + 1).map(|p| &p.pos);
        if alpha <= pos || next.is_some_and(|n| alpha >= n) {
            r4.fail(Witness::at(alpha, format!("{alpha} does not lie strictly between {pos} and the next point")));
        }
    }

    CheckReport::new(vec![r1, r2, r3, r4])
}

/// `pos(i) ≤_k α_i <_k pos(j)` for every eligible pair and level: `i` in
/// `C`, `st(i, j) ≥ k`, and either `k ≤ 2` or `k - 2` cofinal at `j`.
pub fn check_lemma6(result: &SimulationResult, pattern: &StabilityPattern) -> CheckReport {
    let g = &result.system;
    let mut check = CheckResult::new("L6");
    for (j, pj) in pattern.points.iter().enumerate() {
        for (i, pi) in pattern.points.iter().enumerate().take(j) {
            if !pi.in_c {
                continue;
            }
            let alpha = result.alpha_of(Some(&pi.pos));
            for k in 1..=pattern.degree(i, j) {
                if k > 2 && !pj.cofinal_levels.contains(&(k - 2)) {
                    continue;
                }
                check.checked += 1;
                let low = g.le_k(k, &pi.pos, &alpha).unwrap_or(false);
                let high = g.lt_k(k, &alpha, &pj.pos).unwrap_or(false);
                if !(low && high) {
                    check.fail(leveled(
                        &[&pi.pos, &pj.pos],
                        k,
                        Some(&alpha),
                        format!(
                            "expected {} ≤_{k} {alpha} <_{k} {} ({}, {})",
                            pi.pos,
                            pj.pos,
                            if low { "left holds" } else { "left fails" },
                            if high { "right holds" } else { "right fails" },
                        ),
                    ));
                }
            }
        }
    }
    CheckReport::new(vec![check])
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::run_construction;
    use super::*;
    use crate::ordinal::ord;

    #[test]
    fn requirements_hold_on_golden_runs() {
        for p in [p1(), p2(), p3()] {
            let r = run_construction(&p).unwrap();
            let report = check_requirements(&r, &p);
            assert!(report.passed(), "{report}");
            assert_eq!(report.get("R4").unwrap().checked, p.points.len());
        }
    }

    #[test]
    fn tampered_gamma_breaks_r2() {
        let p = p2();
        let mut r = run_construction(&p).unwrap();
        r.per_point[1].gamma = ord("0");
        let report = check_requirements(&r, &p);
        assert!(report.failed().contains(&"R2"));
        let w = &report.get("R2").unwrap().witnesses[0];
        assert_eq!(w.points, vec![ord("w*20")]);
    }

    #[test]
    fn rewritten_exception_breaks_r1() {
        let p = p2();
        let mut r = run_construction(&p).unwrap();
        let last = r.trace.last_mut().unwrap();
        last.system.insert_exception(1, ord("w*6"), ord("5")).unwrap();
        r.system = last.system.clone();
        let report = check_requirements(&r, &p);
        assert!(report.failed().contains(&"R1"));
        assert!(report.failed().contains(&"R3"));
    }

    #[test]
    fn lemma6_on_golden_runs() {
        let r = run_construction(&p1()).unwrap();
        let report = check_lemma6(&r, &p1());
        assert!(report.passed());
        assert_eq!(report.results[0].checked, 0);

        let r = run_construction(&p2()).unwrap();
        let report = check_lemma6(&r, &p2());
        assert!(report.passed(), "{report}");
        assert_eq!(report.results[0].checked, 1);

        let r = run_construction(&p3()).unwrap();
        let report = check_lemma6(&r, &p3());
        assert!(report.passed(), "{report}");
        assert_eq!(report.results[0].checked, 2);
        // the level-2 quantifier is vacuous at ω·20
        assert_eq!(r.system.f_eval(2, &ord("w*20")).unwrap(), None);
    }

    #[test]
    fn lemma6_reports_a_broken_system() {
        let p = p2();
        let mut r = run_construction(&p).unwrap();
        r.system.insert_exception(1, ord("w*20"), ord("0")).unwrap();
        let report = check_lemma6(&r, &p);
        let w = &report.results[0].witnesses[0];
        assert_eq!((w.level, w.ordinal.clone()), (Some(1), Some(ord("w*7"))));
    }
}
