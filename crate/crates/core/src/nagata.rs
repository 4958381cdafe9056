//! Nagata dimension at a scale, certified on finite instances.
//!
//! A center subset X has dimension <= delta at scale s when every finite
//! family of closed balls with centers in X and radii < s admits a covering
//! subfamily of multiplicity <= delta + 1. This module computes ball-family
//! multiplicity against an explicit witness, searches for qualifying
//! subfamilies by exact branch and bound, and enumerates families to certify
//! a dimension bound or produce a counterexample family.
//!
//! Multiplicity is witness-relative. `FinitePoints` counts over the instance
//! points themselves; `LineSweep` and `HedgehogSweep` are exact over the
//! ambient continuum, which are the only ambient spaces where this artifact
//! claims continuum-exact answers. Every verdict is therefore reported next
//! to its witness mode.

use rand::Rng;

use crate::error::{Error, Result};
use crate::space::FiniteMetricInstance;
use crate::substream::StreamKey;

/// Tolerance when validating that sweep coordinates reproduce the instance
/// distances. Ball membership itself uses exact closed-ball comparisons.
const WITNESS_TOL: f64 = 1e-9;

/// A closed ball: an instance point index and a radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
}

/// A finite family of closed balls with designated center set X and a scale
/// bound: all radii are < scale.
#[derive(Debug, Clone, PartialEq)]
pub struct BallFamily {
    balls: Vec<Ball>,
    scale: f64,
    centers: Vec<usize>,
}

impl BallFamily {
    pub fn new(balls: Vec<Ball>, scale: f64, centers: Vec<usize>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::InvalidParameter("ball family must be nonempty".into()));
        }
        if scale.is_nan() || scale <= 0.0 {
            return Err(Error::InvalidParameter("scale must be positive (or +inf)".into()));
        }
        let mut centers = centers;
        centers.sort_unstable();
        centers.dedup();
        for b in &balls {
            if !b.radius.is_finite() || b.radius < 0.0 {
                return Err(Error::InvalidParameter(format!("bad radius {}", b.radius)));
            }
            if b.radius >= scale {
                return Err(Error::InvalidParameter(format!(
                    "radius {} not below scale {scale}",
                    b.radius
                )));
            }
            if !centers.contains(&b.center) {
                return Err(Error::InvalidParameter(format!(
                    "ball center {} outside the designated center set",
                    b.center
                )));
            }
        }
        Ok(BallFamily { balls, scale, centers })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    fn validate_against(&self, instance: &FiniteMetricInstance) -> Result<()> {
        for b in &self.balls {
            if b.center >= instance.n() {
                return Err(Error::InvalidParameter(format!(
                    "ball center {} outside instance of size {}",
                    b.center,
                    instance.n()
                )));
            }
        }
        Ok(())
    }
}

/// Where multiplicity is measured.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// All instance points.
    FinitePoints,
    /// Instance points lie on the real line at these coordinates;
    /// multiplicity is exact over R via an interval endpoint sweep.
    LineSweep { coords: Vec<f64> },
    /// Instance points lie on a hedgehog at (spine, t); multiplicity is
    /// exact over the whole hedgehog via per-spine sweeps plus the glue
    /// point. Spines not hosting any ball center never beat the glue count.
    HedgehogSweep { points: Vec<(usize, f64)> },
}

impl Witness {
    fn validate(&self, instance: &FiniteMetricInstance) -> Result<()> {
        match self {
            Witness::FinitePoints => Ok(()),
            Witness::LineSweep { coords } => {
                if coords.len() != instance.n() {
                    return Err(Error::WitnessMismatch(format!(
                        "{} coordinates for {} points",
                        coords.len(),
                        instance.n()
                    )));
                }
                for i in 0..coords.len() {
                    for j in 0..coords.len() {
                        let d = (coords[i] - coords[j]).abs();
                        if (d - instance.dist(i, j)).abs() > WITNESS_TOL {
                            return Err(Error::WitnessMismatch(format!(
                                "line coordinates disagree with dist({i},{j})"
                            )));
                        }
                    }
                }
                Ok(())
            }
            Witness::HedgehogSweep { points } => {
                if points.len() != instance.n() {
                    return Err(Error::WitnessMismatch(format!(
                        "{} hedgehog points for {} instance points",
                        points.len(),
                        instance.n()
                    )));
                }
                for (s, t) in points {
                    if !(0.0..=1.0).contains(t) {
                        return Err(Error::WitnessMismatch(format!("position {t} outside [0,1]")));
                    }
                    if *t == 0.0 && *s != 0 {
                        return Err(Error::WitnessMismatch("glue point must be on spine 0".into()));
                    }
                }
                for i in 0..points.len() {
                    for j in 0..points.len() {
                        let (si, ti) = points[i];
                        let (sj, tj) = points[j];
                        let d = if si == sj { (ti - tj).abs() } else { ti + tj };
                        if (d - instance.dist(i, j)).abs() > WITNESS_TOL {
                            return Err(Error::WitnessMismatch(format!(
                                "hedgehog points disagree with dist({i},{j})"
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// Max overlap count of closed intervals via an endpoint sweep (starts are
/// processed before ends at equal coordinates, so touching intervals count
/// as overlapping).
fn sweep_max_overlap(intervals: &[(f64, f64)]) -> usize {
    let mut events: Vec<(f64, u8)> = Vec::with_capacity(2 * intervals.len());
    for &(lo, hi) in intervals {
        events.push((lo, 0));
        events.push((hi, 1));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut count = 0usize;
    let mut max = 0usize;
    for (_, kind) in events {
        if kind == 0 {
            count += 1;
            max = max.max(count);
        } else {
            count -= 1;
        }
    }
    max
}

fn multiplicity_of_balls(
    instance: &FiniteMetricInstance,
    balls: &[Ball],
    witness: &Witness,
) -> usize {
    if balls.is_empty() {
        return 0;
    }
    match witness {
        Witness::FinitePoints => {
            let mut max = 0usize;
            for p in 0..instance.n() {
                let c = balls.iter().filter(|b| instance.dist(b.center, p) <= b.radius).count();
                max = max.max(c);
            }
            max
        }
        Witness::LineSweep { coords } => {
            let intervals: Vec<(f64, f64)> = balls
                .iter()
                .map(|b| (coords[b.center] - b.radius, coords[b.center] + b.radius))
                .collect();
            sweep_max_overlap(&intervals)
        }
        Witness::HedgehogSweep { points } => {
            let glue_count =
                balls.iter().filter(|b| b.radius >= points[b.center].1).count();
            let mut spines: Vec<usize> = balls.iter().map(|b| points[b.center].0).collect();
            spines.sort_unstable();
            spines.dedup();
            let mut max = glue_count;
            for &s in &spines {
                let mut intervals = Vec::new();
                for b in balls {
                    let (sc, tc) = points[b.center];
                    if sc == s {
                        let lo = (tc - b.radius).max(0.0);
                        let hi = (tc + b.radius).min(1.0);
                        if hi > 0.0 {
                            intervals.push((lo, hi));
                        }
                    } else {
                        let reach = b.radius - tc;
                        if reach > 0.0 {
                            intervals.push((0.0, reach.min(1.0)));
                        }
                    }
                }
                max = max.max(sweep_max_overlap(&intervals));
            }
            max
        }
    }
}

/// Maximum number of distinct balls of the family sharing a witness point.
pub fn multiplicity(
    instance: &FiniteMetricInstance,
    family: &BallFamily,
    witness: &Witness,
) -> Result<usize> {
    family.validate_against(instance)?;
    witness.validate(instance)?;
    Ok(multiplicity_of_balls(instance, family.balls(), witness))
}

/// A covering subfamily with a multiplicity bound: `chosen` indexes into the
/// family's ball list.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub chosen: Vec<usize>,
    pub multiplicity: usize,
}

/// Re-checks a certificate from scratch: every family center covered by a
/// chosen ball, and recomputed multiplicity within both the stored value and
/// delta + 1.
pub fn verify_certificate(
    instance: &FiniteMetricInstance,
    family: &BallFamily,
    delta: usize,
    cert: &Certificate,
    witness: &Witness,
) -> Result<bool> {
    family.validate_against(instance)?;
    witness.validate(instance)?;
    if cert.chosen.iter().any(|&i| i >= family.balls().len()) {
        return Ok(false);
    }
    let chosen: Vec<Ball> = cert.chosen.iter().map(|&i| family.balls()[i]).collect();
    for b in family.balls() {
        let covered = chosen.iter().any(|c| instance.dist(c.center, b.center) <= c.radius);
        if !covered {
            return Ok(false);
        }
    }
    let mult = multiplicity_of_balls(instance, &chosen, witness);
    Ok(mult <= cert.multiplicity && cert.multiplicity <= delta + 1)
}

/// Largest family size the exact search accepts.
pub const EXHAUSTIVE_FAMILY_BOUND: usize = 20;

/// Exact search for a covering subfamily of multiplicity <= delta + 1.
///
/// Branch and bound over subfamilies, balls ordered by descending
/// center-coverage count: include branches are pruned as soon as the partial
/// multiplicity exceeds delta + 1 (multiplicity grows monotonically as balls
/// are added), and any branch whose remaining balls cannot cover the missing
/// centers is cut. Returns None only when the exhaustive search proves no
/// qualifying subfamily exists.
pub fn find_subfamily(
    instance: &FiniteMetricInstance,
    family: &BallFamily,
    delta: usize,
    witness: &Witness,
) -> Result<Option<Certificate>> {
    family.validate_against(instance)?;
    witness.validate(instance)?;
    let nb = family.balls().len();
    if nb > EXHAUSTIVE_FAMILY_BOUND {
        return Err(Error::Capacity(format!(
            "family of {nb} balls above exhaustive bound {EXHAUSTIVE_FAMILY_BOUND}"
        )));
    }

    // Distinct center points that must be covered.
    let mut targets: Vec<usize> = family.balls().iter().map(|b| b.center).collect();
    targets.sort_unstable();
    targets.dedup();
    let full: u32 = if targets.len() == 32 { u32::MAX } else { (1u32 << targets.len()) - 1 };

    let cover_mask = |b: &Ball| -> u32 {
        let mut m = 0u32;
        for (t, &c) in targets.iter().enumerate() {
            if instance.dist(b.center, c) <= b.radius {
                m |= 1 << t;
            }
        }
        m
    };
    let masks: Vec<u32> = family.balls().iter().map(cover_mask).collect();

    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(masks[i].count_ones()));

    // suffix_union[p] = union of cover masks of order[p..]
    let mut suffix_union = vec![0u32; nb + 1];
    for p in (0..nb).rev() {
        suffix_union[p] = suffix_union[p + 1] | masks[order[p]];
    }

    struct Search<'a> {
        instance: &'a FiniteMetricInstance,
        family: &'a BallFamily,
        witness: &'a Witness,
        masks: &'a [u32],
        order: &'a [usize],
        suffix_union: &'a [u32],
        full: u32,
        cap: usize,
    }

    impl Search<'_> {
        fn mult_with(&self, chosen: &[usize], extra: usize) -> usize {
            let mut balls: Vec<Ball> = chosen.iter().map(|&i| self.family.balls()[i]).collect();
            balls.push(self.family.balls()[extra]);
            multiplicity_of_balls(self.instance, &balls, self.witness)
        }

        fn dfs(&self, pos: usize, covered: u32, chosen: &mut Vec<usize>) -> bool {
            if covered == self.full {
                return true;
            }
            if pos == self.order.len() {
                return false;
            }
            if covered | self.suffix_union[pos] != self.full {
                return false;
            }
            let ball = self.order[pos];
            // include first: descending-coverage order finds small
            // certificates early and prunes hard
            if self.mult_with(chosen, ball) <= self.cap {
                chosen.push(ball);
                if self.dfs(pos + 1, covered | self.masks[ball], chosen) {
                    return true;
                }
                chosen.pop();
            }
            self.dfs(pos + 1, covered, chosen)
        }
    }

    let search = Search {
        instance,
        family,
        witness,
        masks: &masks,
        order: &order,
        suffix_union: &suffix_union,
        full,
        cap: delta + 1,
    };
    let mut chosen = Vec::new();
    if search.dfs(0, 0, &mut chosen) {
        chosen.sort_unstable();
        let balls: Vec<Ball> = chosen.iter().map(|&i| family.balls()[i]).collect();
        let mult = multiplicity_of_balls(instance, &balls, witness);
        Ok(Some(Certificate { chosen, multiplicity: mult }))
    } else {
        Ok(None)
    }
}

/// Greedy heuristic: repeatedly add the ball covering the most uncovered
/// centers among those that keep the multiplicity within delta + 1. Sound
/// but incomplete — a returned certificate is always valid, None is
/// inconclusive. Not capacity-bounded.
pub fn greedy_subfamily(
    instance: &FiniteMetricInstance,
    family: &BallFamily,
    delta: usize,
    witness: &Witness,
) -> Result<Option<Certificate>> {
    family.validate_against(instance)?;
    witness.validate(instance)?;
    let balls = family.balls();
    let mut targets: Vec<usize> = balls.iter().map(|b| b.center).collect();
    targets.sort_unstable();
    targets.dedup();

    let covers = |b: &Ball, c: usize| instance.dist(b.center, c) <= b.radius;
    let mut uncovered: Vec<usize> = targets;
    let mut chosen: Vec<usize> = Vec::new();
    while !uncovered.is_empty() {
        let mut candidates: Vec<(usize, usize)> = balls
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(i))
            .map(|(i, b)| (uncovered.iter().filter(|&&c| covers(b, c)).count(), i))
            .filter(|(gain, _)| *gain > 0)
            .collect();
        candidates.sort_by_key(|&(gain, i)| (std::cmp::Reverse(gain), i));
        let mut added = false;
        for (_, i) in candidates {
            let mut trial: Vec<Ball> = chosen.iter().map(|&j| balls[j]).collect();
            trial.push(balls[i]);
            if multiplicity_of_balls(instance, &trial, witness) <= delta + 1 {
                uncovered.retain(|&c| !covers(&balls[i], c));
                chosen.push(i);
                added = true;
                break;
            }
        }
        if !added {
            return Ok(None);
        }
    }
    chosen.sort_unstable();
    let picked: Vec<Ball> = chosen.iter().map(|&i| balls[i]).collect();
    let mult = multiplicity_of_balls(instance, &picked, witness);
    Ok(Some(Certificate { chosen, multiplicity: mult }))
}

/// Largest center set the exhaustive dimension check accepts.
pub const EXHAUSTIVE_CENTER_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Randomized { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum DimVerdict {
    Holds,
    Counterexample(BallFamily),
}

/// Candidate radii for balls centered at `c`: zero plus every realized
/// distance strictly below the scale. Closed-ball contents over a finite
/// witness change only at realized distances, so enlarging a radius between
/// consecutive realized distances changes nothing.
fn candidate_radii(instance: &FiniteMetricInstance, c: usize, scale: f64) -> Vec<f64> {
    let mut radii = vec![0.0];
    for p in 0..instance.n() {
        let d = instance.dist(c, p);
        if d > 0.0 && d < scale {
            radii.push(d);
        }
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

/// Certifies `dim <= delta` at the scale over the designated centers, or
/// produces a counterexample family that exhaustive [`find_subfamily`]
/// proved has no qualifying subfamily.
///
/// Families with a repeated center reduce to one-ball-per-center
/// subfamilies — any qualifying subfamily of the reduction qualifies for
/// the original — so it suffices to enumerate one ball per center over
/// every nonempty center subset.
pub fn check_dim_at_scale(
    instance: &FiniteMetricInstance,
    centers: &[usize],
    delta: usize,
    scale: f64,
    mode: SearchMode,
    witness: &Witness,
) -> Result<DimVerdict> {
    witness.validate(instance)?;
    if centers.is_empty() {
        return Err(Error::InvalidParameter("need at least one center".into()));
    }
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::InvalidParameter("scale must be positive (or +inf)".into()));
    }
    let mut centers: Vec<usize> = centers.to_vec();
    centers.sort_unstable();
    centers.dedup();
    if centers.iter().any(|&c| c >= instance.n()) {
        return Err(Error::InvalidParameter("center index outside instance".into()));
    }

    let radii: Vec<Vec<f64>> =
        centers.iter().map(|&c| candidate_radii(instance, c, scale)).collect();

    let try_family = |balls: Vec<Ball>| -> Result<Option<DimVerdict>> {
        let family = BallFamily::new(balls, scale, centers.clone())?;
        if find_subfamily(instance, &family, delta, witness)?.is_none() {
            return Ok(Some(DimVerdict::Counterexample(family)));
        }
        Ok(None)
    };

    match mode {
        SearchMode::Exhaustive => {
            let m = centers.len();
            if m > EXHAUSTIVE_CENTER_BOUND {
                return Err(Error::Capacity(format!(
                    "{m} centers above exhaustive bound {EXHAUSTIVE_CENTER_BOUND}"
                )));
            }
            for subset in 1u32..(1 << m) {
                let chosen: Vec<usize> = (0..m).filter(|&i| subset & (1 << i) != 0).collect();
                // odometer over the radius assignments of this subset
                let mut pick = vec![0usize; chosen.len()];
                loop {
                    let balls: Vec<Ball> = chosen
                        .iter()
                        .zip(&pick)
                        .map(|(&ci, &ri)| Ball { center: centers[ci], radius: radii[ci][ri] })
                        .collect();
                    if let Some(verdict) = try_family(balls)? {
                        return Ok(verdict);
                    }
                    let mut pos = 0;
                    loop {
                        if pos == pick.len() {
                            break;
                        }
                        pick[pos] += 1;
                        if pick[pos] < radii[chosen[pos]].len() {
                            break;
                        }
                        pick[pos] = 0;
                        pos += 1;
                    }
                    if pos == pick.len() {
                        break;
                    }
                }
            }
            Ok(DimVerdict::Holds)
        }
        SearchMode::Randomized { trials, seed } => {
            let m = centers.len();
            for trial in 0..trials {
                let mut rng =
                    StreamKey::new(seed).label_str("nagata_trial").label_u64(trial as u64).rng();
                let size = rng.random_range(1..=m);
                // partial Fisher-Yates: first `size` entries are a uniform subset
                let mut pool: Vec<usize> = (0..m).collect();
                for i in 0..size {
                    let j = rng.random_range(i..m);
                    pool.swap(i, j);
                }
                let mut subset: Vec<usize> = pool[..size].to_vec();
                subset.sort_unstable();
                let balls: Vec<Ball> = subset
                    .iter()
                    .map(|&ci| {
                        let r = radii[ci][rng.random_range(0..radii[ci].len())];
                        Ball { center: centers[ci], radius: r }
                    })
                    .collect();
                if let Some(verdict) = try_family(balls)? {
                    return Ok(verdict);
                }
            }
            Ok(DimVerdict::Holds)
        }
    }
}
