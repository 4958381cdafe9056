//! Quantitative checks over result rows, and the rule-level restriction
//! equivalence test.

use crate::error::{Error, Result};
use crate::harness::ResultRow;
use crate::knn::{predict, TieBreakPolicy};
use crate::problem::{
    problem_cerou_guyader, problem_hedgehog, LabeledSample, LearningProblem,
};
use crate::space::{PointCode, SpaceSpec};
use crate::substream::StreamKey;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub pass: bool,
    pub detail: String,
}

/// Consistency check: the excess risk at the largest n is below `tol` and
/// the excess is non-increasing across the grid, with a 2-sem slack per
/// step because finite-sample error curves are not exactly monotone.
pub fn check_consistency(rows: &[ResultRow], tol: f64) -> Result<CheckReport> {
    if rows.len() < 2 {
        return Err(Error::NotEnoughRows { need: 2, got: rows.len() });
    }
    let name = &rows[0].problem_name;
    if rows.iter().any(|r| &r.problem_name != name) {
        return Err(Error::WrongProblem {
            expected: name.clone(),
            got: rows.iter().find(|r| &r.problem_name != name).unwrap().problem_name.clone(),
        });
    }
    let mut rows: Vec<&ResultRow> = rows.iter().collect();
    rows.sort_by_key(|r| r.n);

    let mut pass = true;
    let mut notes = Vec::new();
    for w in rows.windows(2) {
        let slack = 2.0 * (w[0].err_sem + w[1].err_sem);
        if w[1].excess_risk > w[0].excess_risk + slack {
            pass = false;
            notes.push(format!(
                "excess rose {:.4} -> {:.4} from n={} to n={}",
                w[0].excess_risk, w[1].excess_risk, w[0].n, w[1].n
            ));
        }
    }
    let last = rows.last().unwrap();
    let final_ok = last.excess_risk < tol;
    if !final_ok {
        pass = false;
        notes.push(format!("final excess {:.4} not below tol {tol}", last.excess_risk));
    }
    let detail = if notes.is_empty() {
        format!("final excess {:.4} at n={} (tol {tol})", last.excess_risk, last.n)
    } else {
        notes.join("; ")
    };
    Ok(CheckReport { pass, detail })
}

/// Lower-bound check for two-valued rows: every row must satisfy
/// err_mean >= 1/3 - exp(-k/18) - 3 sem.
pub fn check_chernoff_bound(rows: &[ResultRow]) -> Result<CheckReport> {
    if rows.is_empty() {
        return Err(Error::NotEnoughRows { need: 1, got: 0 });
    }
    for row in rows {
        if row.problem_name != "two_valued" {
            return Err(Error::WrongProblem {
                expected: "two_valued".into(),
                got: row.problem_name.clone(),
            });
        }
    }
    let mut pass = true;
    let mut notes = Vec::new();
    for row in rows {
        let bound = 1.0 / 3.0 - (-(row.k as f64) / 18.0).exp() - 3.0 * row.err_sem;
        if row.err_mean < bound {
            pass = false;
            notes.push(format!(
                "n={} k={}: err {:.4} below bound {:.4}",
                row.n, row.k, row.err_mean, bound
            ));
        } else {
            notes.push(format!(
                "n={} k={}: err {:.4} >= bound {:.4}",
                row.n, row.k, row.err_mean, bound
            ));
        }
    }
    Ok(CheckReport { pass, detail: notes.join("; ") })
}

/// How a metric subspace is re-expressed in its own intrinsic coordinates.
pub struct SubspaceView {
    pub sub_spec: SpaceSpec,
    pub map: Box<dyn Fn(&PointCode) -> PointCode + Send + Sync>,
}

/// A named restriction scenario: an ambient problem, the predicate carving
/// out the subspace Y, and Y's intrinsic re-expression.
pub struct RestrictionCase {
    pub name: &'static str,
    pub problem: LearningProblem,
    pub predicate: Box<dyn Fn(&PointCode) -> bool + Send + Sync>,
    pub view: SubspaceView,
}

pub const RESTRICTION_QUERIES: usize = 100;

/// Rule-level restriction equivalence: draw a sample inside Y, then compare
/// the ambient prediction with the prediction on the intrinsically
/// re-expressed data for 100 queries in Y, under identically seeded
/// generators. Distances are intrinsic, so the two must agree exactly.
pub fn restriction_equivalence_test(case: &RestrictionCase, n: usize, k: usize, seed: u64) -> Result<CheckReport> {
    let problem = &case.problem;
    let policy = TieBreakPolicy::UniformRandomOrder;

    let mut draw_rng = StreamKey::new(seed)
        .label_str("restriction")
        .label_str(case.name)
        .label_u64(n as u64)
        .rng();
    let draw_in_y = |rng: &mut rand_chacha::ChaCha12Rng| -> Result<(PointCode, u8)> {
        // rejection sampling from mu conditioned on Y
        for _ in 0..1_000_000 {
            let (x, y) = problem.draw_pair(rng);
            if (case.predicate)(&x) {
                return Ok((x, y));
            }
        }
        Err(Error::EmptySubspace)
    };

    let mut ambient_pairs = Vec::with_capacity(n);
    for _ in 0..n {
        ambient_pairs.push(draw_in_y(&mut draw_rng)?);
    }
    let sub_pairs: Vec<(PointCode, u8)> =
        ambient_pairs.iter().map(|(p, y)| ((case.view.map)(p), *y)).collect();
    let ambient_sample = LabeledSample::new(ambient_pairs)?;
    let sub_sample = LabeledSample::new(sub_pairs)?;

    let mut agreed = 0usize;
    for q in 0..RESTRICTION_QUERIES {
        let (x, _) = draw_in_y(&mut draw_rng)?;
        let mapped = (case.view.map)(&x);
        let mut rng_ambient = StreamKey::new(seed)
            .label_str("restriction_query")
            .label_str(case.name)
            .label_u64(q as u64)
            .rng();
        let mut rng_sub = rng_ambient.clone();
        let a = predict(problem.spec(), &ambient_sample, &x, k, policy, &mut rng_ambient)?;
        let b = predict(&case.view.sub_spec, &sub_sample, &mapped, k, policy, &mut rng_sub)?;
        if a == b {
            agreed += 1;
        }
    }
    Ok(CheckReport {
        pass: agreed == RESTRICTION_QUERIES,
        detail: format!("{}: {agreed}/{RESTRICTION_QUERIES} predictions agree", case.name),
    })
}

/// The CG problem restricted to the nonzero atoms: a uniformly discrete
/// space with all distances 2, re-expressed as a two-valued space indexed
/// by atom number.
pub fn restriction_case_cg(atoms: usize) -> Result<RestrictionCase> {
    let problem = problem_cerou_guyader(atoms)?;
    let m = atoms as f64;
    Ok(RestrictionCase {
        name: "cg_nonzero_atoms",
        problem,
        predicate: Box::new(|p| !matches!(p, PointCode::UnitInterval(x) if *x == 0.0)),
        view: SubspaceView {
            sub_spec: SpaceSpec::two_valued(atoms, 2.0)?,
            map: Box::new(move |p| match p {
                PointCode::UnitInterval(x) => {
                    PointCode::Discrete((x * m).round() as usize - 1)
                }
                other => other.clone(),
            }),
        },
    })
}

/// The identity restriction: Y is the whole space.
pub fn restriction_case_identity(atoms: usize) -> Result<RestrictionCase> {
    let problem = problem_cerou_guyader(atoms)?;
    Ok(RestrictionCase {
        name: "identity",
        problem: problem.clone(),
        predicate: Box::new(|_| true),
        view: SubspaceView {
            sub_spec: *problem.spec(),
            map: Box::new(|p| p.clone()),
        },
    })
}

/// One spine of the hedgehog, an isometric copy of the unit interval,
/// re-expressed as 1-d Euclidean.
pub fn restriction_case_hedgehog_spine(spines: usize, spine: usize) -> Result<RestrictionCase> {
    if spine >= spines {
        return Err(Error::InvalidParameter(format!("spine {spine} >= {spines}")));
    }
    let problem = problem_hedgehog(spines)?;
    Ok(RestrictionCase {
        name: "hedgehog_single_spine",
        problem,
        predicate: Box::new(move |p| matches!(p, PointCode::Hedgehog { spine: s, .. } if *s == spine)),
        view: SubspaceView {
            sub_spec: SpaceSpec::euclidean(1)?,
            map: Box::new(|p| match p {
                PointCode::Hedgehog { t, .. } => PointCode::Euclidean(vec![*t]),
                other => other.clone(),
            }),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(name: &str, n: usize, k: usize, err: f64, sem: f64, bayes: f64) -> ResultRow {
        ResultRow {
            problem_name: name.into(),
            n,
            k,
            repetitions: 100,
            test_draws: 50,
            err_mean: err,
            err_sem: sem,
            bayes_error: bayes,
            excess_risk: err - bayes,
            wall_ms: 0,
            master_seed: 1,
        }
    }

    #[test]
    fn consistency_passes_on_decreasing_excess() {
        let rows = vec![
            row("euclidean_linear", 100, 10, 0.280, 0.004, 0.25),
            row("euclidean_linear", 1000, 32, 0.258, 0.004, 0.25),
            row("euclidean_linear", 10000, 100, 0.252, 0.004, 0.25),
        ];
        let report = check_consistency(&rows, 0.02).unwrap();
        assert!(report.pass, "{}", report.detail);
    }

    #[test]
    fn consistency_fails_on_flat_high_error() {
        let rows = vec![
            row("cerou_guyader", 100, 10, 0.47, 0.004, 0.0),
            row("cerou_guyader", 1000, 32, 0.49, 0.004, 0.0),
            row("cerou_guyader", 10000, 100, 0.50, 0.004, 0.0),
        ];
        let report = check_consistency(&rows, 0.02).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn consistency_single_row_is_usage_error() {
        let rows = vec![row("x", 100, 10, 0.1, 0.01, 0.0)];
        assert!(matches!(check_consistency(&rows, 0.02), Err(Error::NotEnoughRows { .. })));
    }

    #[test]
    fn consistency_rejects_mixed_problems() {
        let rows = vec![
            row("a", 100, 10, 0.1, 0.01, 0.0),
            row("b", 1000, 32, 0.05, 0.01, 0.0),
        ];
        assert!(matches!(check_consistency(&rows, 0.02), Err(Error::WrongProblem { .. })));
    }

    #[test]
    fn chernoff_bound_named_values() {
        // k = 100: bound ~ 1/3 - 3.9e-3 - 3 sem; empirical 1/3 passes
        let good = vec![row("two_valued", 10_000, 100, 1.0 / 3.0, 0.004, 0.0)];
        assert!(check_chernoff_bound(&good).unwrap().pass);

        // k = 1: bound is ~ -0.61, vacuously passed even by zero error
        let vacuous = vec![row("two_valued", 100, 1, 0.0, 0.004, 0.0)];
        assert!(check_chernoff_bound(&vacuous).unwrap().pass);

        // err 0.2 at k = 100 sits below the bound
        let bad = vec![row("two_valued", 10_000, 100, 0.2, 0.004, 0.0)];
        assert!(!check_chernoff_bound(&bad).unwrap().pass);

        let wrong = vec![row("euclidean_linear", 100, 10, 0.3, 0.004, 0.25)];
        assert!(matches!(check_chernoff_bound(&wrong), Err(Error::WrongProblem { .. })));
    }

    #[test]
    fn restriction_cases_agree_exactly() {
        for case in [
            restriction_case_cg(10_000).unwrap(),
            restriction_case_identity(10_000).unwrap(),
            restriction_case_hedgehog_spine(16, 3).unwrap(),
        ] {
            let report = restriction_equivalence_test(&case, 200, 15, 2024).unwrap();
            assert!(report.pass, "{}", report.detail);
        }
    }

    #[test]
    fn restriction_empty_predicate_errors() {
        let mut case = restriction_case_identity(100).unwrap();
        case.predicate = Box::new(|_| false);
        assert!(matches!(
            restriction_equivalence_test(&case, 10, 2, 7),
            Err(Error::EmptySubspace)
        ));
    }
}
