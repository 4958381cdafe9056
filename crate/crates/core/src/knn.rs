//! The k-nearest-neighbour rule: radius, tie-breaking neighbour selection,
//! Heaviside majority vote, and Monte Carlo error estimation.
//!
//! Neighbour search is exact brute force; the tie semantics on the sphere
//! are the contract here, and any accelerated index would have to reproduce
//! identical neighbour sets under the same seed. Distance comparisons on the
//! sphere use exact floating-point equality: every built-in space produces
//! exactly representable tie distances.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{LabeledSample, LearningProblem};
use crate::space::{distance_raw, validate_point, PointCode, SpaceSpec};
use crate::substream::repetition_rng;

/// How sphere ties are resolved once all strictly-closer points are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreakPolicy {
    /// Give the sample a uniformly random order and keep the tied points
    /// with the smallest permuted index (stochastic).
    UniformRandomOrder,
    /// Keep tied points in original sample order (deterministic).
    IndexOrder,
}

/// Schedules for k as a function of n. Both non-fixed schedules satisfy
/// k -> infinity, k/n -> 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KSchedule {
    Fixed { k: usize },
    CeilSqrt,
    /// k = ceil(ln n) + 1
    CeilLog,
}

impl KSchedule {
    /// The k this schedule produces at sample size n. The non-fixed
    /// schedules always land in [1, n]; `Fixed` is validated by the caller.
    pub fn k_for(&self, n: usize) -> usize {
        let k = match self {
            KSchedule::Fixed { k } => *k,
            KSchedule::CeilSqrt => (n as f64).sqrt().ceil() as usize,
            KSchedule::CeilLog => (n as f64).ln().ceil() as usize + 1,
        };
        match self {
            KSchedule::Fixed { .. } => k,
            _ => k.clamp(1, n.max(1)),
        }
    }
}

/// The k-subsample selected for a query, together with the k-NN radius.
///
/// Invariants: every selected index is within `radius` of the query, and
/// every sample index strictly closer than `radius` is selected.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet {
    pub indices: Vec<usize>,
    pub radius: f64,
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    Ok(())
}

/// k-th smallest of the given distances (the k-NN radius).
pub fn knn_radius_of_distances(dists: &[f64], k: usize) -> Result<f64> {
    check_k(k, dists.len())?;
    let mut sorted = dists.to_vec();
    let (_, kth, _) = sorted.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*kth)
}

/// Smallest radius of a closed ball around `x` containing at least k sample
/// points; equals the k-th smallest of the n distances.
pub fn knn_radius(
    spec: &SpaceSpec,
    sample_points: &[PointCode],
    x: &PointCode,
    k: usize,
) -> Result<f64> {
    check_k(k, sample_points.len())?;
    validate_point(spec, x)?;
    for p in sample_points {
        validate_point(spec, p)?;
    }
    let dists: Vec<f64> = sample_points.iter().map(|p| distance_raw(spec, p, x)).collect();
    knn_radius_of_distances(&dists, k)
}

/// Selects a k-subsample from precomputed distances: all points strictly
/// inside the k-NN radius, topped up from the sphere per policy.
///
/// The rng is consumed only when the sphere choice is non-trivial (more tied
/// points than open slots under `UniformRandomOrder`); forced selections are
/// policy-independent.
pub fn select_neighbors_from_distances<R: Rng>(
    dists: &[f64],
    k: usize,
    policy: TieBreakPolicy,
    rng: &mut R,
) -> Result<NeighborSet> {
    check_k(k, dists.len())?;
    let radius = knn_radius_of_distances(dists, k)?;
    let mut indices = Vec::with_capacity(k);
    let mut sphere = Vec::new();
    for (i, &d) in dists.iter().enumerate() {
        if d < radius {
            indices.push(i);
        } else if d == radius {
            sphere.push(i);
        }
    }
    let need = k - indices.len();
    if need == sphere.len() {
        indices.extend_from_slice(&sphere);
    } else {
        if let TieBreakPolicy::UniformRandomOrder = policy {
            // Fisher-Yates permutation of the sphere; the first `need`
            // entries form a uniformly random subset.
            for i in (1..sphere.len()).rev() {
                let j = rng.random_range(0..=i);
                sphere.swap(i, j);
            }
        }
        indices.extend_from_slice(&sphere[..need]);
    }
    Ok(NeighborSet { indices, radius })
}

/// Computes distances from the query and selects neighbours.
pub fn select_neighbors<R: Rng>(
    spec: &SpaceSpec,
    sample: &LabeledSample,
    x: &PointCode,
    k: usize,
    policy: TieBreakPolicy,
    rng: &mut R,
) -> Result<NeighborSet> {
    check_k(k, sample.len())?;
    validate_point(spec, x)?;
    for p in sample.points() {
        validate_point(spec, p)?;
    }
    let dists: Vec<f64> = sample.points().map(|p| distance_raw(spec, p, x)).collect();
    select_neighbors_from_distances(&dists, k, policy, rng)
}

/// Majority vote over selected labels: theta[(1/k) sum y_i - 1/2], so a
/// split vote returns 1.
pub fn vote(labels: &[u8], neighbors: &NeighborSet) -> u8 {
    let ones: usize = neighbors.indices.iter().map(|&i| labels[i] as usize).sum();
    u8::from(2 * ones >= neighbors.indices.len())
}

/// Predicts from precomputed distances and labels.
pub fn predict_from_distances<R: Rng>(
    dists: &[f64],
    labels: &[u8],
    k: usize,
    policy: TieBreakPolicy,
    rng: &mut R,
) -> Result<u8> {
    let ns = select_neighbors_from_distances(dists, k, policy, rng)?;
    Ok(vote(labels, &ns))
}

/// The k-NN rule's label for `x` given the sample.
pub fn predict<R: Rng>(
    spec: &SpaceSpec,
    sample: &LabeledSample,
    x: &PointCode,
    k: usize,
    policy: TieBreakPolicy,
    rng: &mut R,
) -> Result<u8> {
    let ns = select_neighbors(spec, sample, x, k, policy, rng)?;
    let labels: Vec<u8> = sample.pairs.iter().map(|(_, y)| *y).collect();
    Ok(vote(&labels, &ns))
}

/// One Monte Carlo repetition of the error estimate: draw a training sample
/// of size n, then `test_draws` fresh pairs, and score the mismatch rate.
///
/// The generator is derived from (master_seed, problem, n, rep), so the
/// result depends only on those four values — never on which thread or in
/// which order repetitions run.
pub fn repetition_error(
    problem: &LearningProblem,
    n: usize,
    k: usize,
    policy: TieBreakPolicy,
    master_seed: u64,
    rep: usize,
    test_draws: usize,
) -> Result<f64> {
    check_k(k, n)?;
    let mut rng = repetition_rng(master_seed, problem.name(), n, rep);
    let sample = problem.draw_sample(&mut rng, n)?;
    let labels: Vec<u8> = sample.pairs.iter().map(|(_, y)| *y).collect();
    let spec = problem.spec();
    let mut dists = vec![0.0f64; n];
    let mut mistakes = 0usize;
    for _ in 0..test_draws {
        let (x, y) = problem.draw_pair(&mut rng);
        for (slot, p) in dists.iter_mut().zip(sample.points()) {
            *slot = distance_raw(spec, p, &x);
        }
        let pred = predict_from_distances(&dists, &labels, k, policy, &mut rng)?;
        if pred != y {
            mistakes += 1;
        }
    }
    Ok(mistakes as f64 / test_draws as f64)
}

/// Monte Carlo estimate of the rule's misclassification error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub err_mean: f64,
    pub err_sem: f64,
    pub k: usize,
}

/// Aggregates repetition errors in fixed index order.
pub fn aggregate_errors(rep_errors: &[f64]) -> (f64, f64) {
    let r = rep_errors.len() as f64;
    let mean = rep_errors.iter().sum::<f64>() / r;
    let var = rep_errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Mean and standard error of the misclassification rate over `repetitions`
/// independent train/test repetitions. Deterministic given `master_seed`;
/// identical to any parallel scheduling of the same repetitions.
pub fn estimate_error(
    problem: &LearningProblem,
    n: usize,
    schedule: KSchedule,
    policy: TieBreakPolicy,
    master_seed: u64,
    repetitions: usize,
    test_draws: usize,
) -> Result<ErrorEstimate> {
    if repetitions < 2 {
        return Err(Error::InvalidParameter("need at least 2 repetitions".into()));
    }
    if test_draws == 0 {
        return Err(Error::InvalidParameter("need at least 1 test draw".into()));
    }
    let k = schedule.k_for(n);
    check_k(k, n)?;
    let rep_errors: Vec<f64> = (0..repetitions)
        .map(|rep| repetition_error(problem, n, k, policy, master_seed, rep, test_draws))
        .collect::<Result<_>>()?;
    let (err_mean, err_sem) = aggregate_errors(&rep_errors);
    Ok(ErrorEstimate { err_mean, err_sem, k })
}
