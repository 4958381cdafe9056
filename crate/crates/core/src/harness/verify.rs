//! The verification suite: nine quantitative criteria covering the
//! counterexample simulations, the consistency checks, the tie-break
//! contract, the Nagata search, restriction equivalence, and byte-level
//! reproducibility. `verify_all` runs everything and reports pass/fail per
//! criterion; the CLI maps the report to exit codes.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::harness::checks::{
    check_chernoff_bound, check_consistency, restriction_case_cg, restriction_case_hedgehog_spine,
    restriction_case_identity, restriction_equivalence_test,
};
use crate::harness::{run_experiment, rows_to_csv_bytes, ExperimentConfig};
use crate::knn::{select_neighbors_from_distances, KSchedule, TieBreakPolicy};
use crate::nagata::{
    check_dim_at_scale, find_subfamily, multiplicity, verify_certificate, Ball, BallFamily,
    DimVerdict, SearchMode, Witness,
};
use crate::problem::ProblemSpec;
use crate::space::{
    is_strong_triangle, materialize, FiniteMetricInstance, PointCode, SpaceSpec,
};
use crate::substream::StreamKey;

pub const DEFAULT_SEED: u64 = 20260808;

/// Wall-clock budget for the Cérou-Guyader sweep, single-threaded.
const CG_BUDGET_SECS: f64 = 300.0;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub all_pass: bool,
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn worker_count() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn sweep_config(problem: ProblemSpec, schedule: KSchedule, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        problem,
        n_grid: vec![100, 1_000, 10_000],
        schedule,
        policy: TieBreakPolicy::UniformRandomOrder,
        repetitions: 200,
        test_draws: 50,
        master_seed: seed,
        parallelism: worker_count(),
        output_path: String::new(),
        record_timing: false,
    }
}

/// Criterion 1: the Cérou-Guyader problem has Bayes error zero while the
/// k-NN error at n = 10^4 sits in [0.45, 0.55]; the sweep finishes within
/// the single-threaded budget.
pub fn criterion_1_cg_nonconsistency(seed: u64) -> Result<CriterionResult> {
    let mut spec = ProblemSpec::named("cerou_guyader");
    spec.atoms = Some(100_000);
    let mut config = sweep_config(spec, KSchedule::CeilSqrt, seed);
    config.parallelism = 1;
    let start = Instant::now();
    let rows = run_experiment(&config)?;
    let secs = start.elapsed().as_secs_f64();
    let last = rows.last().unwrap();
    let in_band = (0.45..=0.55).contains(&last.err_mean);
    let bayes_zero = last.bayes_error == 0.0;
    let in_budget = secs < CG_BUDGET_SECS;
    // the rule must NOT look consistent on this problem
    let inconsistent = !check_consistency(&rows, 0.02)?.pass;
    Ok(CriterionResult {
        id: 1,
        name: "cerou-guyader non-consistency",
        pass: in_band && bayes_zero && in_budget && inconsistent,
        detail: format!(
            "err_mean(n=10^4) = {:.4} (want [0.45, 0.55]), bayes = {}, consistency check fails = {}, wall = {:.1}s",
            last.err_mean, last.bayes_error, inconsistent, secs
        ),
    })
}

/// Criterion 2: the two-valued problem at n = 10^4, k = 100 respects the
/// Chernoff lower bound and lands in [0.28, 0.39].
pub fn criterion_2_two_valued_lower_bound(seed: u64) -> Result<CriterionResult> {
    let mut spec = ProblemSpec::named("two_valued");
    spec.points = Some(100_000);
    spec.distance = Some(1.0);
    let mut config = sweep_config(spec, KSchedule::Fixed { k: 100 }, seed);
    config.n_grid = vec![10_000];
    let rows = run_experiment(&config)?;
    let bound_report = check_chernoff_bound(&rows)?;
    let row = &rows[0];
    let in_band = (0.28..=0.39).contains(&row.err_mean);
    Ok(CriterionResult {
        id: 2,
        name: "two-valued Chernoff lower bound",
        pass: bound_report.pass && in_band,
        detail: format!("err_mean = {:.4} (want [0.28, 0.39]); {}", row.err_mean, bound_report.detail),
    })
}

/// Criterion 3: Stone consistency at desk scale on the Euclidean linear
/// problem — excess risk over the exact Bayes error 1/4 is non-increasing
/// and below 0.02 at n = 10^4.
pub fn criterion_3_stone_consistency(seed: u64) -> Result<CriterionResult> {
    let config = sweep_config(ProblemSpec::named("euclidean_linear"), KSchedule::CeilSqrt, seed);
    let rows = run_experiment(&config)?;
    let bayes_ok = rows.iter().all(|r| r.bayes_error == 0.25);
    let report = check_consistency(&rows, 0.02)?;
    let curve: Vec<String> =
        rows.iter().map(|r| format!("n={}: excess {:.4}", r.n, r.excess_risk)).collect();
    Ok(CriterionResult {
        id: 3,
        name: "euclidean Stone consistency",
        pass: report.pass && bayes_ok,
        detail: format!("{} [{}]", report.detail, curve.join(", ")),
    })
}

/// Criterion 4: hedgehog consistency at spininess 512 — excess risk below
/// 0.05 at n = 10^4 under the slow-growing k schedule.
pub fn criterion_4_hedgehog_consistency(seed: u64) -> Result<CriterionResult> {
    let mut spec = ProblemSpec::named("hedgehog");
    spec.spines = Some(512);
    let config = sweep_config(spec, KSchedule::CeilLog, seed);
    let rows = run_experiment(&config)?;
    let last = rows.last().unwrap();
    Ok(CriterionResult {
        id: 4,
        name: "hedgehog consistency",
        pass: last.excess_risk < 0.05,
        detail: format!(
            "excess(n=10^4) = {:.4} (want < 0.05), err = {:.4}, bayes = {:.4}",
            last.excess_risk, last.err_mean, last.bayes_error
        ),
    })
}

// One randomized tie-break case: a space, a sample of distances with heavy
// tie mass, a k, and a policy.
fn random_tie_case(rng: &mut rand_chacha::ChaCha12Rng) -> (Vec<f64>, usize, TieBreakPolicy) {
    let policy = if rng.random::<bool>() {
        TieBreakPolicy::UniformRandomOrder
    } else {
        TieBreakPolicy::IndexOrder
    };
    let kind = rng.random_range(0..5u8);
    let n = rng.random_range(1..=40usize);
    let (spec, points, query): (SpaceSpec, Vec<PointCode>, PointCode) = match kind {
        0 => {
            let dim = rng.random_range(1..=3usize);
            let spec = SpaceSpec::euclidean(dim).unwrap();
            let point = |rng: &mut rand_chacha::ChaCha12Rng| {
                PointCode::Euclidean(
                    (0..dim).map(|_| rng.random_range(0..5) as f64 * 0.5).collect(),
                )
            };
            let pts = (0..n).map(|_| point(rng)).collect();
            let q = point(rng);
            (spec, pts, q)
        }
        1 => {
            let spec = SpaceSpec::cg_interval();
            let point = |rng: &mut rand_chacha::ChaCha12Rng| {
                PointCode::UnitInterval(rng.random_range(0..=10) as f64 / 10.0)
            };
            let pts = (0..n).map(|_| point(rng)).collect();
            let q = point(rng);
            (spec, pts, q)
        }
        2 => {
            let spec = SpaceSpec::two_valued(8, 1.0).unwrap();
            let point =
                |rng: &mut rand_chacha::ChaCha12Rng| PointCode::Discrete(rng.random_range(0..8));
            let pts = (0..n).map(|_| point(rng)).collect();
            let q = point(rng);
            (spec, pts, q)
        }
        3 => {
            let spec = SpaceSpec::hedgehog(4).unwrap();
            let point = |rng: &mut rand_chacha::ChaCha12Rng| {
                PointCode::hedgehog(rng.random_range(0..4), rng.random_range(0..=4) as f64 * 0.25)
            };
            let pts = (0..n).map(|_| point(rng)).collect();
            let q = point(rng);
            (spec, pts, q)
        }
        _ => {
            let spec = SpaceSpec::c00(5).unwrap();
            let point = |rng: &mut rand_chacha::ChaCha12Rng| {
                let support = rng.random_range(0..=2usize);
                PointCode::sparse((0..support).map(|_| {
                    (rng.random_range(0..5usize), [-1.0, -0.5, 0.5, 1.0][rng.random_range(0..4)])
                }))
            };
            let pts = (0..n).map(|_| point(rng)).collect();
            let q = point(rng);
            (spec, pts, q)
        }
    };
    let dists: Vec<f64> = points
        .iter()
        .map(|p| crate::space::distance(&spec, p, &query).expect("generated points are valid"))
        .collect();
    let k = rng.random_range(1..=n);
    (dists, k, policy)
}

/// Criterion 5: 10^4 randomized cases across all spaces and both policies —
/// every neighbour set satisfies the k-NN mapping conditions and the radius
/// equals the k-th order statistic from an independent sort oracle.
pub fn criterion_5_tie_break_contract(seed: u64) -> Result<CriterionResult> {
    let cases = 10_000usize;
    let mut failures = 0usize;
    let mut first_failure = String::new();
    for case in 0..cases {
        let mut rng = StreamKey::new(seed).label_str("tiebreak").label_u64(case as u64).rng();
        let (dists, k, policy) = random_tie_case(&mut rng);
        let ns = select_neighbors_from_distances(&dists, k, policy, &mut rng)?;

        // independent sort-based oracle for the radius
        let mut sorted = dists.clone();
        sorted.sort_by(f64::total_cmp);
        let oracle_radius = sorted[k - 1];

        let mut ok = ns.radius == oracle_radius && ns.indices.len() == k;
        let mut seen = vec![false; dists.len()];
        for &i in &ns.indices {
            if seen[i] {
                ok = false;
            }
            seen[i] = true;
            // condition (1): selected points are within the radius
            if dists[i] > ns.radius {
                ok = false;
            }
        }
        // condition (2): strictly closer points are all selected
        for (i, &d) in dists.iter().enumerate() {
            if d < ns.radius && !seen[i] {
                ok = false;
            }
        }
        if !ok {
            failures += 1;
            if first_failure.is_empty() {
                first_failure = format!("case {case}: k={k}, dists={dists:?}");
            }
        }
    }
    Ok(CriterionResult {
        id: 5,
        name: "tie-break contract",
        pass: failures == 0,
        detail: if failures == 0 {
            format!("{cases} randomized cases, zero failures")
        } else {
            format!("{failures} failures; first: {first_failure}")
        },
    })
}

// All-subsets brute-force oracle, written directly against the definitions:
// some subset covers every family center with multiplicity <= delta + 1.
fn subfamily_oracle(
    inst: &FiniteMetricInstance,
    family: &BallFamily,
    delta: usize,
    witness: &Witness,
) -> Result<bool> {
    let balls = family.balls();
    let mut centers: Vec<usize> = balls.iter().map(|b| b.center).collect();
    centers.sort_unstable();
    centers.dedup();
    for mask in 1u32..(1u32 << balls.len()) {
        let chosen: Vec<usize> =
            (0..balls.len()).filter(|&i| mask & (1 << i) != 0).collect();
        let covers = centers.iter().all(|&c| {
            chosen.iter().any(|&i| inst.dist(balls[i].center, c) <= balls[i].radius)
        });
        if !covers {
            continue;
        }
        let sub = BallFamily::new(
            chosen.iter().map(|&i| balls[i]).collect(),
            family.scale(),
            family.centers().to_vec(),
        )?;
        if multiplicity(inst, &sub, witness)? <= delta + 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Criterion 6: on 50 random 8-point instances, the branch-and-bound search
/// agrees exactly with the all-subsets oracle for families of size <= 12.
pub fn criterion_6_nagata_oracle_equivalence(seed: u64) -> Result<CriterionResult> {
    let witness = Witness::FinitePoints;
    let mut checked = 0usize;
    for instance_idx in 0..50u64 {
        let mut rng =
            StreamKey::new(seed).label_str("nagata_oracle").label_u64(instance_idx).rng();
        let spec = SpaceSpec::euclidean(2).unwrap();
        let pts: Vec<PointCode> = (0..8)
            .map(|_| {
                PointCode::Euclidean(vec![
                    rng.random_range(0..20) as f64 * 0.5,
                    rng.random_range(0..20) as f64 * 0.5,
                ])
            })
            .collect();
        let inst = materialize(&spec, &pts)?;
        for _ in 0..4 {
            let nballs = rng.random_range(1..=12usize);
            let balls: Vec<Ball> = (0..nballs)
                .map(|_| Ball {
                    center: rng.random_range(0..8),
                    radius: rng.random::<f64>() * 8.0,
                })
                .collect();
            let family = BallFamily::new(balls, f64::INFINITY, (0..8).collect())?;
            for delta in 0..=2usize {
                let exact = find_subfamily(&inst, &family, delta, &witness)?;
                let oracle = subfamily_oracle(&inst, &family, delta, &witness)?;
                if exact.is_some() != oracle {
                    return Ok(CriterionResult {
                        id: 6,
                        name: "nagata oracle equivalence",
                        pass: false,
                        detail: format!(
                            "disagreement on instance {instance_idx}, delta {delta}: search {:?}, oracle {oracle}",
                            exact.is_some()
                        ),
                    });
                }
                if let Some(cert) = exact {
                    if !verify_certificate(&inst, &family, delta, &cert, &witness)? {
                        return Ok(CriterionResult {
                            id: 6,
                            name: "nagata oracle equivalence",
                            pass: false,
                            detail: format!("invalid certificate on instance {instance_idx}"),
                        });
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(CriterionResult {
        id: 6,
        name: "nagata oracle equivalence",
        pass: true,
        detail: format!("{checked} families agree with the all-subsets oracle"),
    })
}

fn two_valued_instance(n: usize, r: f64) -> Result<FiniteMetricInstance> {
    let spec = SpaceSpec::two_valued(n, r)?;
    let pts: Vec<PointCode> = (0..n).map(PointCode::Discrete).collect();
    materialize(&spec, &pts)
}

fn line_instance(coords: &[f64]) -> Result<(FiniteMetricInstance, Witness)> {
    let spec = SpaceSpec::euclidean(1)?;
    let pts: Vec<PointCode> = coords.iter().map(|&x| PointCode::Euclidean(vec![x])).collect();
    Ok((materialize(&spec, &pts)?, Witness::LineSweep { coords: coords.to_vec() }))
}

// Random ultrametric on n points via a 3-level random hierarchy.
fn random_ultrametric(rng: &mut rand_chacha::ChaCha12Rng, n: usize) -> Result<FiniteMetricInstance> {
    let paths: Vec<u8> = (0..n).map(|_| rng.random_range(0..8u8)).collect();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = paths[i] ^ paths[j];
            dist[i][j] = if x & 0b100 != 0 {
                4.0
            } else if x & 0b010 != 0 {
                2.0
            } else if x & 0b001 != 0 {
                1.0
            } else {
                0.0
            };
        }
    }
    FiniteMetricInstance::from_matrix(dist)
}

/// Criterion 7: the named Nagata verdicts — two-valued holds at (0, r), the
/// line holds at (1, inf) and yields a verified counterexample at delta = 0,
/// strong-triangle instances hold at (0, inf), and any X holds at |X| - 1.
pub fn criterion_7_nagata_named_values(seed: u64) -> Result<CriterionResult> {
    let mut notes = Vec::new();
    let mut pass = true;

    // two-valued 6-point instance at delta = 0, scale = r
    let inst = two_valued_instance(6, 1.0)?;
    let centers: Vec<usize> = (0..6).collect();
    let verdict =
        check_dim_at_scale(&inst, &centers, 0, 1.0, SearchMode::Exhaustive, &Witness::FinitePoints)?;
    if verdict != DimVerdict::Holds {
        pass = false;
        notes.push("two-valued (delta 0, scale r) did not hold".to_string());
    } else {
        notes.push("two-valued holds at (0, r)".to_string());
    }

    // six equispaced line points
    let coords: Vec<f64> = (0..6).map(|i| i as f64).collect();
    let (line, line_witness) = line_instance(&coords)?;
    let verdict =
        check_dim_at_scale(&line, &centers, 1, f64::INFINITY, SearchMode::Exhaustive, &line_witness)?;
    if verdict != DimVerdict::Holds {
        pass = false;
        notes.push("line (delta 1, inf) did not hold".to_string());
    } else {
        notes.push("line holds at (1, inf)".to_string());
    }
    match check_dim_at_scale(&line, &centers, 0, f64::INFINITY, SearchMode::Exhaustive, &line_witness)? {
        DimVerdict::Counterexample(family) => {
            // verified: exhaustive search proves no qualifying subfamily
            if find_subfamily(&line, &family, 0, &line_witness)?.is_some() {
                pass = false;
                notes.push("line counterexample failed re-verification".to_string());
            } else {
                notes.push(format!(
                    "line delta 0 counterexample: {} balls, verified",
                    family.balls().len()
                ));
            }
        }
        DimVerdict::Holds => {
            pass = false;
            notes.push("line (delta 0, inf) held but must not".to_string());
        }
    }

    // strong-triangle instances hold at (0, inf)
    for i in 0..5u64 {
        let mut rng = StreamKey::new(seed).label_str("ultrametric").label_u64(i).rng();
        let inst = random_ultrametric(&mut rng, 6)?;
        if !is_strong_triangle(&inst) {
            pass = false;
            notes.push(format!("ultrametric instance {i} failed the strong triangle check"));
            continue;
        }
        let centers: Vec<usize> = (0..inst.n()).collect();
        let verdict = check_dim_at_scale(
            &inst,
            &centers,
            0,
            f64::INFINITY,
            SearchMode::Exhaustive,
            &Witness::FinitePoints,
        )?;
        if verdict != DimVerdict::Holds {
            pass = false;
            notes.push(format!("ultrametric instance {i} did not hold at (0, inf)"));
        }
    }
    notes.push("5 strong-triangle instances hold at (0, inf)".to_string());

    // any X holds at delta = |X| - 1
    for (idx, coords) in [[0.0, 0.3, 1.1, 2.0, 4.5], [0.0, 1.0, 2.0, 3.0, 4.0]].iter().enumerate() {
        let (inst, witness) = line_instance(coords)?;
        let centers: Vec<usize> = (0..coords.len()).collect();
        let verdict = check_dim_at_scale(
            &inst,
            &centers,
            centers.len() - 1,
            f64::INFINITY,
            SearchMode::Exhaustive,
            &witness,
        )?;
        if verdict != DimVerdict::Holds {
            pass = false;
            notes.push(format!("instance {idx} failed the trivial |X|-1 bound"));
        }
    }
    let inst = two_valued_instance(5, 2.0)?;
    let centers: Vec<usize> = (0..5).collect();
    if check_dim_at_scale(&inst, &centers, 4, f64::INFINITY, SearchMode::Exhaustive, &Witness::FinitePoints)?
        != DimVerdict::Holds
    {
        pass = false;
        notes.push("two-valued instance failed the trivial |X|-1 bound".to_string());
    }
    notes.push("trivial delta = |X|-1 bound holds".to_string());

    Ok(CriterionResult {
        id: 7,
        name: "nagata named values",
        pass,
        detail: notes.join("; "),
    })
}

/// Criterion 8: exact restriction equivalence — 100/100 prediction
/// agreement for the CG-nonzero, identity, and single-spine hedgehog cases.
pub fn criterion_8_restriction_equivalence(seed: u64) -> Result<CriterionResult> {
    let n = 500;
    let k = KSchedule::CeilSqrt.k_for(n);
    let mut pass = true;
    let mut notes = Vec::new();
    for case in [
        restriction_case_cg(100_000)?,
        restriction_case_identity(100_000)?,
        restriction_case_hedgehog_spine(512, 17)?,
    ] {
        let report = restriction_equivalence_test(&case, n, k, seed)?;
        pass &= report.pass;
        notes.push(report.detail);
    }
    Ok(CriterionResult {
        id: 8,
        name: "restriction equivalence",
        pass,
        detail: notes.join("; "),
    })
}

/// Criterion 9: byte-identical CSV across parallelism 1, 4, and 8 for a
/// fixed config and seed.
pub fn criterion_9_reproducibility(seed: u64) -> Result<CriterionResult> {
    let mut config = ExperimentConfig {
        problem: ProblemSpec::named("euclidean_linear"),
        n_grid: vec![50, 100],
        schedule: KSchedule::CeilSqrt,
        policy: TieBreakPolicy::UniformRandomOrder,
        repetitions: 16,
        test_draws: 10,
        master_seed: seed,
        parallelism: 1,
        output_path: String::new(),
        record_timing: false,
    };
    let mut outputs = Vec::new();
    for parallelism in [1usize, 4, 8] {
        config.parallelism = parallelism;
        let rows = run_experiment(&config)?;
        outputs.push(rows_to_csv_bytes(&rows)?);
    }
    let pass = outputs.windows(2).all(|w| w[0] == w[1]);
    Ok(CriterionResult {
        id: 9,
        name: "reproducibility across parallelism",
        pass,
        detail: if pass {
            format!("CSV byte-identical at parallelism 1/4/8 ({} bytes)", outputs[0].len())
        } else {
            "CSV outputs differ across parallelism".to_string()
        },
    })
}

/// Runs the full suite.
pub fn verify_all(seed: u64) -> Result<VerifyReport> {
    let criteria = vec![
        criterion_1_cg_nonconsistency(seed)?,
        criterion_2_two_valued_lower_bound(seed)?,
        criterion_3_stone_consistency(seed)?,
        criterion_4_hedgehog_consistency(seed)?,
        criterion_5_tie_break_contract(seed)?,
        criterion_6_nagata_oracle_equivalence(seed)?,
        criterion_7_nagata_named_values(seed)?,
        criterion_8_restriction_equivalence(seed)?,
        criterion_9_reproducibility(seed)?,
    ];
    let all_pass = criteria.iter().all(|c| c.pass);
    Ok(VerifyReport { seed, all_pass, criteria })
}
