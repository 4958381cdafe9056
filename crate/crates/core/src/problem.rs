//! Learning problems: a measure, a regression function, sampling, and the
//! closed-form Bayes error.
//!
//! Atomless measures cannot exist in software. Following the standard atom
//! approximation, the continuous components here are uniform measures on
//! large grids (default 10^5 atoms, far above n^2 for desk-scale n), so
//! finite samples behave as if the measure were atomless while every Bayes
//! quantity stays exactly computable.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{validate_point, PointCode, SpaceSpec};

pub const WEIGHT_TOL: f64 = 1e-12;

/// Default number of atoms approximating a continuous uniform component.
pub const DEFAULT_ATOMS: usize = 100_000;

/// Default spininess of the hedgehog problem.
pub const DEFAULT_SPINES: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureComponent {
    PointMass(PointCode),
    UniformFinite(Vec<PointCode>),
    /// `atoms` equispaced atoms i/atoms, i = 1..=atoms, in (0, 1]. Resolved
    /// to the point kind of the ambient space when sampling.
    UniformGrid { atoms: usize },
    /// Uniform over spines, position uniform in (0, 1] along the spine.
    UniformSpines { spines: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    components: Vec<(f64, MeasureComponent)>,
}

impl Measure {
    pub fn new(components: Vec<(f64, MeasureComponent)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("measure needs at least one component".into()));
        }
        let mut total = 0.0;
        for (w, c) in &components {
            if !(*w > 0.0 && *w <= 1.0) {
                return Err(Error::InvalidParameter(format!("component weight {w} outside (0,1]")));
            }
            total += w;
            match c {
                MeasureComponent::UniformFinite(pts) if pts.is_empty() => {
                    return Err(Error::InvalidParameter("empty uniform-finite component".into()));
                }
                MeasureComponent::UniformGrid { atoms } | MeasureComponent::UniformSpines { spines: atoms }
                    if *atoms == 0 =>
                {
                    return Err(Error::InvalidParameter("grid component needs >= 1 atom".into()));
                }
                _ => {}
            }
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, expected 1")));
        }
        Ok(Measure { components })
    }

    pub fn components(&self) -> &[(f64, MeasureComponent)] {
        &self.components
    }
}

/// Closed-form regression functions eta(x) = P[Y = 1 | X = x].
#[derive(Debug, Clone, PartialEq)]
pub enum RegressionFn {
    /// eta = 1 exactly at the given point, 0 elsewhere.
    IndicatorOfPoint(PointCode),
    /// eta = 0 exactly at the given point, 1 elsewhere.
    IndicatorOfComplementOfPoint(PointCode),
    /// eta(x) = x on the scalar position (interval coordinate, 1-d Euclidean
    /// coordinate, or hedgehog spine position).
    LinearOnInterval,
    /// eta(x) = 1 iff the scalar position exceeds the threshold.
    IndicatorAboveThreshold(f64),
    Constant(f64),
}

#[derive(Debug, Clone)]
pub struct LearningProblem {
    name: String,
    spec: SpaceSpec,
    mu: Measure,
    eta: RegressionFn,
}

/// An ordered list of labelled points; the input sigma of the learning rule.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub pairs: Vec<(PointCode, u8)>,
}

impl LabeledSample {
    pub fn new(pairs: Vec<(PointCode, u8)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("sample needs n >= 1".into()));
        }
        if pairs.iter().any(|(_, y)| *y > 1) {
            return Err(Error::InvalidParameter("labels must be 0 or 1".into()));
        }
        Ok(LabeledSample { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &PointCode> {
        self.pairs.iter().map(|(p, _)| p)
    }
}

impl LearningProblem {
    pub fn new(name: impl Into<String>, spec: SpaceSpec, mu: Measure, eta: RegressionFn) -> Result<Self> {
        spec.validate()?;
        if let RegressionFn::Constant(c) = &eta {
            if !(0.0..=1.0).contains(c) {
                return Err(Error::InvalidParameter(format!("constant eta {c} outside [0,1]")));
            }
        }
        // Support points must live in the space and eta must be evaluable on
        // them; grid components are checked against the space kind.
        for (_, comp) in mu.components() {
            match comp {
                MeasureComponent::PointMass(p) => validate_point(&spec, p)?,
                MeasureComponent::UniformFinite(pts) => {
                    for p in pts {
                        validate_point(&spec, p)?;
                    }
                }
                MeasureComponent::UniformGrid { .. } => match spec {
                    SpaceSpec::CgInterval | SpaceSpec::Euclidean { dim: 1 } => {}
                    _ => {
                        return Err(Error::InvalidParameter(
                            "uniform grid component needs an interval-like space".into(),
                        ))
                    }
                },
                MeasureComponent::UniformSpines { spines } => match spec {
                    SpaceSpec::Hedgehog { spines: tau } if *spines == tau => {}
                    _ => {
                        return Err(Error::InvalidParameter(
                            "uniform spine component needs a matching hedgehog space".into(),
                        ))
                    }
                },
            }
        }
        let problem = LearningProblem { name: name.into(), spec, mu, eta };
        // eta must be evaluable on the support; probe the atoms.
        for (_, comp) in problem.mu.components() {
            match comp {
                MeasureComponent::PointMass(p) => {
                    problem.eval_eta(p)?;
                }
                MeasureComponent::UniformFinite(pts) => {
                    for p in pts {
                        problem.eval_eta(p)?;
                    }
                }
                _ => {}
            }
        }
        Ok(problem)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn measure(&self) -> &Measure {
        &self.mu
    }

    pub fn eta(&self) -> &RegressionFn {
        &self.eta
    }

    /// Evaluates the regression function at a point of the space.
    pub fn eval_eta(&self, x: &PointCode) -> Result<f64> {
        validate_point(&self.spec, x)?;
        self.eval_eta_raw(x)
    }

    fn eval_eta_raw(&self, x: &PointCode) -> Result<f64> {
        let position = |x: &PointCode| {
            x.scalar_position().ok_or_else(|| {
                Error::InvalidPoint(format!("eta needs a scalar position, point is {x}"))
            })
        };
        match &self.eta {
            RegressionFn::IndicatorOfPoint(y) => Ok(if x == y { 1.0 } else { 0.0 }),
            RegressionFn::IndicatorOfComplementOfPoint(y) => Ok(if x == y { 0.0 } else { 1.0 }),
            RegressionFn::LinearOnInterval => {
                let t = position(x)?;
                if !(0.0..=1.0).contains(&t) {
                    return Err(Error::InvalidPoint(format!("position {t} outside [0,1]")));
                }
                Ok(t)
            }
            RegressionFn::IndicatorAboveThreshold(th) => {
                Ok(if position(x)? > *th { 1.0 } else { 0.0 })
            }
            RegressionFn::Constant(c) => Ok(*c),
        }
    }

    /// Bayes-optimal label: 1 iff eta(x) >= 1/2. The tie at exactly 1/2 goes
    /// to 1, matching the Heaviside convention of the k-NN rule.
    pub fn bayes_label(&self, x: &PointCode) -> Result<u8> {
        Ok(if self.eval_eta(x)? >= 0.5 { 1 } else { 0 })
    }

    /// Exact Bayes error: the mixture sum of E[min(eta, 1 - eta)] per
    /// component. Atom components sum directly; the uniform grid with linear
    /// eta uses the closed-form value of the grid integral.
    pub fn bayes_error(&self) -> f64 {
        let mut total = 0.0;
        for (w, comp) in self.mu.components() {
            total += w * self.component_bayes(comp);
        }
        total
    }

    fn component_bayes(&self, comp: &MeasureComponent) -> f64 {
        let min_eta = |eta: f64| eta.min(1.0 - eta);
        match comp {
            MeasureComponent::PointMass(p) => min_eta(self.eval_eta_raw(p).unwrap_or(0.0)),
            MeasureComponent::UniformFinite(pts) => {
                let s: f64 = pts.iter().map(|p| min_eta(self.eval_eta_raw(p).unwrap_or(0.0))).sum();
                s / pts.len() as f64
            }
            MeasureComponent::UniformGrid { atoms } => match &self.eta {
                // Indicator etas are 0/1 on every atom.
                RegressionFn::IndicatorOfPoint(_)
                | RegressionFn::IndicatorOfComplementOfPoint(_)
                | RegressionFn::IndicatorAboveThreshold(_) => 0.0,
                RegressionFn::Constant(c) => min_eta(*c),
                // sum_{i=1..M} min(i/M, 1-i/M) = M/4 for even M,
                // (M^2-1)/(4M) for odd M; exact in integer arithmetic.
                RegressionFn::LinearOnInterval => {
                    let m = *atoms as u64;
                    if m.is_multiple_of(2) {
                        0.25
                    } else {
                        ((m * m - 1) as f64) / ((4 * m * m) as f64)
                    }
                }
            },
            MeasureComponent::UniformSpines { .. } => match &self.eta {
                RegressionFn::IndicatorOfPoint(_)
                | RegressionFn::IndicatorOfComplementOfPoint(_)
                | RegressionFn::IndicatorAboveThreshold(_) => 0.0,
                RegressionFn::Constant(c) => min_eta(*c),
                // integral of min(t, 1-t) over t ~ U(0,1], per spine
                RegressionFn::LinearOnInterval => 0.25,
            },
        }
    }

    fn sample_component<R: Rng>(&self, comp: &MeasureComponent, rng: &mut R) -> PointCode {
        match comp {
            MeasureComponent::PointMass(p) => p.clone(),
            MeasureComponent::UniformFinite(pts) => pts[rng.random_range(0..pts.len())].clone(),
            MeasureComponent::UniformGrid { atoms } => {
                let i = rng.random_range(1..=*atoms);
                let x = i as f64 / *atoms as f64;
                match self.spec {
                    SpaceSpec::CgInterval => PointCode::UnitInterval(x),
                    SpaceSpec::Euclidean { dim: 1 } => PointCode::Euclidean(vec![x]),
                    // ruled out by the constructor
                    _ => unreachable!("grid component on non-interval space"),
                }
            }
            MeasureComponent::UniformSpines { spines } => {
                let spine = rng.random_range(0..*spines);
                // t = 0 has probability ~2^-53; canonicalized to the glue.
                let t = 1.0 - rng.random::<f64>();
                PointCode::hedgehog(spine, t)
            }
        }
    }

    /// Draws one point X ~ mu.
    pub fn draw_point<R: Rng>(&self, rng: &mut R) -> PointCode {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let comps = self.mu.components();
        for (w, comp) in comps {
            acc += w;
            if u < acc {
                return self.sample_component(comp, rng);
            }
        }
        // weight rounding can leave u just above the accumulated total
        self.sample_component(&comps[comps.len() - 1].1, rng)
    }

    /// Draws one labelled pair: X ~ mu, then Y ~ Bernoulli(eta(X)) by
    /// comparing a single uniform variate to eta(X).
    pub fn draw_pair<R: Rng>(&self, rng: &mut R) -> (PointCode, u8) {
        let x = self.draw_point(rng);
        let eta = self.eval_eta_raw(&x).expect("support point must be eta-evaluable");
        let y = u8::from(rng.random::<f64>() < eta);
        (x, y)
    }

    /// Draws an i.i.d. labelled sample of size n; bit-reproducible from the
    /// generator state.
    pub fn draw_sample<R: Rng>(&self, rng: &mut R, n: usize) -> Result<LabeledSample> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be >= 1".into()));
        }
        let pairs = (0..n).map(|_| self.draw_pair(rng)).collect();
        LabeledSample::new(pairs)
    }
}

/// The Cérou–Guyader counterexample: mu = 1/2 delta_0 + 1/2 uniform over
/// `atoms` grid atoms in (0, 1], labels deterministic (0 at the origin, 1 on
/// (0, 1]). Bayes error 0, yet the k-NN error tends to 1/2.
pub fn problem_cerou_guyader(atoms: usize) -> Result<LearningProblem> {
    if atoms < 2 {
        return Err(Error::InvalidParameter("cerou_guyader needs >= 2 atoms".into()));
    }
    let origin = PointCode::UnitInterval(0.0);
    let mu = Measure::new(vec![
        (0.5, MeasureComponent::PointMass(origin.clone())),
        (0.5, MeasureComponent::UniformGrid { atoms }),
    ])?;
    LearningProblem::new(
        "cerou_guyader",
        SpaceSpec::cg_interval(),
        mu,
        RegressionFn::IndicatorOfComplementOfPoint(origin),
    )
}

/// The two-valued counterexample: N points at pairwise distance r, with
/// mu = 1/3 uniform over the N-1 non-distinguished points + 2/3 delta_y and
/// eta the indicator of the distinguished point y. Bayes error 0; under
/// uniform distance tie-breaking the k-NN error stays above
/// 1/3 - exp(-k/18).
pub fn problem_two_valued(points: usize, r: f64) -> Result<LearningProblem> {
    if points < 2 {
        return Err(Error::InvalidParameter("two_valued needs >= 2 points".into()));
    }
    let spec = SpaceSpec::two_valued(points, r)?;
    let y = PointCode::Discrete(0);
    let others: Vec<PointCode> = (1..points).map(PointCode::Discrete).collect();
    let mu = Measure::new(vec![
        (1.0 / 3.0, MeasureComponent::UniformFinite(others)),
        (2.0 / 3.0, MeasureComponent::PointMass(y.clone())),
    ])?;
    LearningProblem::new("two_valued", spec, mu, RegressionFn::IndicatorOfPoint(y))
}

/// A consistent problem on the metric hedgehog: spine uniform, position
/// uniform along the spine, eta(spine, t) = t. Bayes error 1/4.
pub fn problem_hedgehog(spines: usize) -> Result<LearningProblem> {
    if spines < 2 {
        return Err(Error::InvalidParameter("hedgehog problem needs >= 2 spines".into()));
    }
    let spec = SpaceSpec::hedgehog(spines)?;
    let mu = Measure::new(vec![(1.0, MeasureComponent::UniformSpines { spines })])?;
    LearningProblem::new("hedgehog", spec, mu, RegressionFn::LinearOnInterval)
}

/// Uniform grid on [0, 1] (1-d Euclidean) with eta(x) = x: the desk-scale
/// Stone consistency check. Bayes error is exactly 1/4 for even atom counts.
pub fn problem_euclidean_linear() -> Result<LearningProblem> {
    let mu = Measure::new(vec![(1.0, MeasureComponent::UniformGrid { atoms: DEFAULT_ATOMS })])?;
    LearningProblem::new(
        "euclidean_linear",
        SpaceSpec::euclidean(1)?,
        mu,
        RegressionFn::LinearOnInterval,
    )
}

/// Constant eta(x) = c on a small Euclidean grid; c = 1 makes every label
/// and every vote 1, which pins the error estimator at exactly zero.
pub fn problem_constant(c: f64) -> Result<LearningProblem> {
    let mu = Measure::new(vec![(1.0, MeasureComponent::UniformGrid { atoms: 1000 })])?;
    LearningProblem::new("constant", SpaceSpec::euclidean(1)?, mu, RegressionFn::Constant(c))
}

/// Builder parameters as they appear in experiment configs: a builder name
/// plus the parameters it consumes. Unused parameters are rejected only by
/// omission (builders read what they need).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spines: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl ProblemSpec {
    pub fn named(name: impl Into<String>) -> Self {
        ProblemSpec { name: name.into(), atoms: None, points: None, distance: None, spines: None, value: None }
    }
}

/// Instantiates a problem from its config description.
pub fn build_problem(spec: &ProblemSpec) -> Result<LearningProblem> {
    match spec.name.as_str() {
        "cerou_guyader" => problem_cerou_guyader(spec.atoms.unwrap_or(DEFAULT_ATOMS)),
        "two_valued" => {
            problem_two_valued(spec.points.unwrap_or(DEFAULT_ATOMS), spec.distance.unwrap_or(1.0))
        }
        "hedgehog" => problem_hedgehog(spec.spines.unwrap_or(DEFAULT_SPINES)),
        "euclidean_linear" => problem_euclidean_linear(),
        "constant" => problem_constant(spec.value.unwrap_or(1.0)),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substream::StreamKey;

    fn rng(tag: u64) -> rand_chacha::ChaCha12Rng {
        StreamKey::new(1234).label_u64(tag).rng()
    }

    #[test]
    fn eval_eta_cerou_guyader() {
        let p = problem_cerou_guyader(100).unwrap();
        assert_eq!(p.eval_eta(&PointCode::UnitInterval(0.0)).unwrap(), 0.0);
        assert_eq!(p.eval_eta(&PointCode::UnitInterval(0.7)).unwrap(), 1.0);
    }

    #[test]
    fn eval_eta_two_valued() {
        let p = problem_two_valued(100, 1.0).unwrap();
        assert_eq!(p.eval_eta(&PointCode::Discrete(0)).unwrap(), 1.0);
        assert_eq!(p.eval_eta(&PointCode::Discrete(17)).unwrap(), 0.0);
    }

    #[test]
    fn eval_eta_constant() {
        let p = problem_constant(0.5).unwrap();
        assert_eq!(p.eval_eta(&PointCode::Euclidean(vec![0.123])).unwrap(), 0.5);
    }

    #[test]
    fn bayes_error_named_values() {
        assert_eq!(problem_cerou_guyader(DEFAULT_ATOMS).unwrap().bayes_error(), 0.0);
        assert_eq!(problem_two_valued(DEFAULT_ATOMS, 1.0).unwrap().bayes_error(), 0.0);
        assert_eq!(problem_euclidean_linear().unwrap().bayes_error(), 0.25);
        assert_eq!(problem_hedgehog(DEFAULT_SPINES).unwrap().bayes_error(), 0.25);
        assert_eq!(problem_constant(0.5).unwrap().bayes_error(), 0.5);
        assert_eq!(problem_constant(1.0).unwrap().bayes_error(), 0.0);
    }

    // Independent quadrature oracle for the linear problem: composite
    // Simpson on min(x, 1-x) over [0, 1].
    #[test]
    fn linear_bayes_error_matches_quadrature() {
        let f = |x: f64| x.min(1.0 - x);
        let n = 100_000usize; // even
        let h = 1.0 / n as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        let integral = s * h / 3.0;
        assert!((integral - 0.25).abs() < 1e-9, "quadrature gave {integral}");
        let p = problem_euclidean_linear().unwrap();
        assert!((p.bayes_error() - integral).abs() < 1e-9);
    }

    #[test]
    fn odd_grid_linear_bayes_matches_direct_sum() {
        let mu = Measure::new(vec![(1.0, MeasureComponent::UniformGrid { atoms: 999 })]).unwrap();
        let p = LearningProblem::new("g", SpaceSpec::cg_interval(), mu, RegressionFn::LinearOnInterval)
            .unwrap();
        let m = 999f64;
        let direct: f64 =
            (1..=999).map(|i| (i as f64 / m).min(1.0 - i as f64 / m)).sum::<f64>() / m;
        assert!((p.bayes_error() - direct).abs() < 1e-12);
    }

    #[test]
    fn bayes_label_convention() {
        let p = problem_cerou_guyader(100).unwrap();
        assert_eq!(p.bayes_label(&PointCode::UnitInterval(0.0)).unwrap(), 0);
        let half = problem_constant(0.5).unwrap();
        assert_eq!(half.bayes_label(&PointCode::Euclidean(vec![0.3])).unwrap(), 1);
        let lin = problem_euclidean_linear().unwrap();
        assert_eq!(lin.bayes_label(&PointCode::Euclidean(vec![0.2])).unwrap(), 0);
    }

    #[test]
    fn cg_sample_origin_fraction() {
        let p = problem_cerou_guyader(DEFAULT_ATOMS).unwrap();
        let mut r = rng(1);
        let n = 10_000;
        let sample = p.draw_sample(&mut r, n).unwrap();
        let zeros = sample.points().filter(|x| **x == PointCode::UnitInterval(0.0)).count();
        let frac = zeros as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.02, "origin fraction {frac}");
    }

    #[test]
    fn constant_one_labels_all_one() {
        let p = problem_constant(1.0).unwrap();
        let mut r = rng(2);
        let sample = p.draw_sample(&mut r, 500).unwrap();
        assert!(sample.pairs.iter().all(|(_, y)| *y == 1));
    }

    #[test]
    fn two_valued_distinguished_count_concentrates() {
        // binomial(9000, 2/3): sd = sqrt(9000 * 2/9) ~ 44.7; 150 ~ 3.4 sd
        let p = problem_two_valued(DEFAULT_ATOMS, 1.0).unwrap();
        let mut r = rng(3);
        let sample = p.draw_sample(&mut r, 9000).unwrap();
        let at_y = sample.points().filter(|x| **x == PointCode::Discrete(0)).count() as i64;
        assert!((at_y - 6000).abs() <= 150, "count at y was {at_y}");
    }

    #[test]
    fn sampling_is_bit_reproducible() {
        let p = problem_hedgehog(16).unwrap();
        let a = p.draw_sample(&mut rng(4), 200).unwrap();
        let b = p.draw_sample(&mut rng(4), 200).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mixture_component_frequencies_converge() {
        // every component frequency within 5 sqrt(w/R) of its weight
        let p = problem_two_valued(1000, 1.0).unwrap();
        let mut r = rng(5);
        let reps = 10_000;
        let mut at_y = 0usize;
        for _ in 0..reps {
            if p.draw_point(&mut r) == PointCode::Discrete(0) {
                at_y += 1;
            }
        }
        let freqs = [(at_y, 2.0 / 3.0), (reps - at_y, 1.0 / 3.0)];
        for (count, w) in freqs {
            let freq = count as f64 / reps as f64;
            assert!((freq - w).abs() < 5.0 * (w / reps as f64).sqrt(), "freq {freq} for weight {w}");
        }
    }

    #[test]
    fn builder_weights_sum_to_one() {
        for p in [
            problem_cerou_guyader(100).unwrap(),
            problem_two_valued(100, 1.0).unwrap(),
            problem_hedgehog(8).unwrap(),
            problem_euclidean_linear().unwrap(),
            problem_constant(0.25).unwrap(),
        ] {
            let total: f64 = p.measure().components().iter().map(|(w, _)| w).sum();
            assert!((total - 1.0).abs() <= WEIGHT_TOL);
        }
    }

    #[test]
    fn two_valued_mass_at_distinguished_point() {
        let p = problem_two_valued(DEFAULT_ATOMS, 1.0).unwrap();
        let mass: f64 = p
            .measure()
            .components()
            .iter()
            .filter(|(_, c)| matches!(c, MeasureComponent::PointMass(_)))
            .map(|(w, _)| w)
            .sum();
        assert!((mass - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_builders_are_usage_errors() {
        assert!(problem_cerou_guyader(1).is_err());
        assert!(problem_two_valued(1, 1.0).is_err());
        assert!(problem_two_valued(10, 0.0).is_err());
        assert!(problem_hedgehog(1).is_err());
        assert!(problem_constant(1.5).is_err());
    }

    #[test]
    fn build_problem_by_name() {
        let mut spec = ProblemSpec::named("cerou_guyader");
        spec.atoms = Some(500);
        assert_eq!(build_problem(&spec).unwrap().name(), "cerou_guyader");
        assert!(matches!(
            build_problem(&ProblemSpec::named("nope")),
            Err(Error::UnknownProblem(_))
        ));
    }

    #[test]
    fn eta_invalid_point_is_usage_error() {
        let p = problem_cerou_guyader(100).unwrap();
        assert!(p.eval_eta(&PointCode::Discrete(3)).is_err());
    }

    #[test]
    fn bayes_error_never_exceeds_half() {
        for p in [
            problem_cerou_guyader(100).unwrap(),
            problem_two_valued(50, 2.0).unwrap(),
            problem_hedgehog(4).unwrap(),
            problem_euclidean_linear().unwrap(),
            problem_constant(0.7).unwrap(),
        ] {
            let b = p.bayes_error();
            assert!((0.0..=0.5).contains(&b), "{} has bayes error {b}", p.name());
        }
    }
}
