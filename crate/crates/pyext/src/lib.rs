//! Python bindings for metriclab.
//!
//! Points are plain Python values interpreted by the space they belong to:
//! a list of floats (Euclidean), a float in [0, 1] (the CG interval), an
//! int (two-valued), a `(spine, t)` tuple (hedgehog), or a `{index: value}`
//! dict (c00).

use std::collections::BTreeMap;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use metriclab::harness::verify::verify_all;
use metriclab::harness::{run_experiment, ExperimentConfig};
use metriclab::knn::{self, KSchedule, TieBreakPolicy};
use metriclab::nagata::{
    self, Ball, BallFamily, DimVerdict, SearchMode, Witness,
};
use metriclab::problem::{self, LabeledSample, LearningProblem};
use metriclab::space::{self, FiniteMetricInstance, PointCode, SpaceSpec};
use metriclab::substream::StreamKey;

fn to_py_err(e: metriclab::Error) -> PyErr {
    match e {
        metriclab::Error::Io(inner) => PyIOError::new_err(inner.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn point_from_py(spec: &SpaceSpec, obj: &Bound<'_, PyAny>) -> PyResult<PointCode> {
    match spec {
        SpaceSpec::Euclidean { .. } => Ok(PointCode::Euclidean(obj.extract()?)),
        SpaceSpec::CgInterval => Ok(PointCode::UnitInterval(obj.extract()?)),
        SpaceSpec::TwoValued { .. } => Ok(PointCode::Discrete(obj.extract()?)),
        SpaceSpec::Hedgehog { .. } => {
            let (spine, t): (usize, f64) = obj.extract()?;
            Ok(PointCode::hedgehog(spine, t))
        }
        SpaceSpec::C00 { .. } => {
            let entries: BTreeMap<usize, f64> = obj.extract()?;
            Ok(PointCode::sparse(entries))
        }
    }
}

fn point_to_py(py: Python<'_>, p: &PointCode) -> PyResult<Py<PyAny>> {
    let obj = match p {
        PointCode::Euclidean(v) => v.clone().into_pyobject(py)?.into_any().unbind(),
        PointCode::UnitInterval(x) => x.into_pyobject(py)?.into_any().unbind(),
        PointCode::Discrete(i) => i.into_pyobject(py)?.into_any().unbind(),
        PointCode::Hedgehog { spine, t } => (*spine, *t).into_pyobject(py)?.into_any().unbind(),
        PointCode::Sparse(m) => m.clone().into_pyobject(py)?.into_any().unbind(),
    };
    Ok(obj)
}

fn parse_policy(policy: &str) -> PyResult<TieBreakPolicy> {
    match policy {
        "uniform_random_order" => Ok(TieBreakPolicy::UniformRandomOrder),
        "index_order" => Ok(TieBreakPolicy::IndexOrder),
        other => Err(PyValueError::new_err(format!("unknown tie-break policy `{other}`"))),
    }
}

fn parse_schedule(schedule: &Bound<'_, PyAny>) -> PyResult<KSchedule> {
    if let Ok(k) = schedule.extract::<usize>() {
        return Ok(KSchedule::Fixed { k });
    }
    match schedule.extract::<String>()?.as_str() {
        "ceil_sqrt" => Ok(KSchedule::CeilSqrt),
        "ceil_log" => Ok(KSchedule::CeilLog),
        other => Err(PyValueError::new_err(format!("unknown schedule `{other}`"))),
    }
}

/// A metric space description.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Space {
    inner: SpaceSpec,
}

#[pymethods]
impl Space {
    #[staticmethod]
    fn euclidean(dim: usize) -> PyResult<Self> {
        Ok(Space { inner: SpaceSpec::euclidean(dim).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn cg_interval() -> Self {
        Space { inner: SpaceSpec::cg_interval() }
    }

    #[staticmethod]
    fn two_valued(points: usize, distance: f64) -> PyResult<Self> {
        Ok(Space { inner: SpaceSpec::two_valued(points, distance).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn hedgehog(spines: usize) -> PyResult<Self> {
        Ok(Space { inner: SpaceSpec::hedgehog(spines).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn c00(index_bound: usize) -> PyResult<Self> {
        Ok(Space { inner: SpaceSpec::c00(index_bound).map_err(to_py_err)? })
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// A learning problem: measure, regression function, sampling, Bayes error.
#[pyclass(frozen)]
struct Problem {
    inner: LearningProblem,
}

#[pymethods]
impl Problem {
    #[staticmethod]
    #[pyo3(signature = (atoms = 100_000))]
    fn cerou_guyader(atoms: usize) -> PyResult<Self> {
        Ok(Problem { inner: problem::problem_cerou_guyader(atoms).map_err(to_py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (points = 100_000, distance = 1.0))]
    fn two_valued(points: usize, distance: f64) -> PyResult<Self> {
        Ok(Problem { inner: problem::problem_two_valued(points, distance).map_err(to_py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (spines = 512))]
    fn hedgehog(spines: usize) -> PyResult<Self> {
        Ok(Problem { inner: problem::problem_hedgehog(spines).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn euclidean_linear() -> PyResult<Self> {
        Ok(Problem { inner: problem::problem_euclidean_linear().map_err(to_py_err)? })
    }

    #[staticmethod]
    fn constant(value: f64) -> PyResult<Self> {
        Ok(Problem { inner: problem::problem_constant(value).map_err(to_py_err)? })
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn space(&self) -> Space {
        Space { inner: *self.inner.spec() }
    }

    fn bayes_error(&self) -> f64 {
        self.inner.bayes_error()
    }

    fn eval_eta(&self, x: &Bound<'_, PyAny>) -> PyResult<f64> {
        let p = point_from_py(self.inner.spec(), x)?;
        self.inner.eval_eta(&p).map_err(to_py_err)
    }

    fn bayes_label(&self, x: &Bound<'_, PyAny>) -> PyResult<u8> {
        let p = point_from_py(self.inner.spec(), x)?;
        self.inner.bayes_label(&p).map_err(to_py_err)
    }

    /// Draw an i.i.d. labelled sample as a list of (point, label) pairs.
    fn draw_sample(&self, py: Python<'_>, seed: u64, n: usize) -> PyResult<Py<PyList>> {
        let mut rng = StreamKey::new(seed).label_str("py_sample").rng();
        let sample = self.inner.draw_sample(&mut rng, n).map_err(to_py_err)?;
        let items: Vec<(Py<PyAny>, u8)> = sample
            .pairs
            .iter()
            .map(|(p, y)| Ok((point_to_py(py, p)?, *y)))
            .collect::<PyResult<_>>()?;
        Ok(PyList::new(py, items)?.unbind())
    }

    /// Monte Carlo (err_mean, err_sem, k) at sample size n. `schedule` is
    /// "ceil_sqrt", "ceil_log", or a fixed integer k.
    #[pyo3(signature = (n, schedule, master_seed, repetitions = 200, test_draws = 50, policy = "uniform_random_order"))]
    fn estimate_error(
        &self,
        n: usize,
        schedule: &Bound<'_, PyAny>,
        master_seed: u64,
        repetitions: usize,
        test_draws: usize,
        policy: &str,
    ) -> PyResult<(f64, f64, usize)> {
        let est = knn::estimate_error(
            &self.inner,
            n,
            parse_schedule(schedule)?,
            parse_policy(policy)?,
            master_seed,
            repetitions,
            test_draws,
        )
        .map_err(to_py_err)?;
        Ok((est.err_mean, est.err_sem, est.k))
    }
}

/// Metric value between two points of the space.
#[pyfunction]
fn distance(space: &Space, p: &Bound<'_, PyAny>, q: &Bound<'_, PyAny>) -> PyResult<f64> {
    let pp = point_from_py(&space.inner, p)?;
    let qq = point_from_py(&space.inner, q)?;
    space::distance(&space.inner, &pp, &qq).map_err(to_py_err)
}

/// Smallest radius of a closed ball around x containing at least k of the
/// sample points.
#[pyfunction]
fn knn_radius(
    space: &Space,
    points: &Bound<'_, PyAny>,
    x: &Bound<'_, PyAny>,
    k: usize,
) -> PyResult<f64> {
    let pts: Vec<PointCode> = points
        .try_iter()?
        .map(|item| point_from_py(&space.inner, &item?))
        .collect::<PyResult<_>>()?;
    knn::knn_radius(&space.inner, &pts, &point_from_py(&space.inner, x)?, k).map_err(to_py_err)
}

/// k-NN prediction for x from labelled points.
#[pyfunction]
#[pyo3(signature = (space, points, labels, x, k, policy = "uniform_random_order", seed = 0))]
#[allow(clippy::too_many_arguments)]
fn predict(
    space: &Space,
    points: &Bound<'_, PyAny>,
    labels: Vec<u8>,
    x: &Bound<'_, PyAny>,
    k: usize,
    policy: &str,
    seed: u64,
) -> PyResult<u8> {
    let pts: Vec<PointCode> = points
        .try_iter()?
        .map(|item| point_from_py(&space.inner, &item?))
        .collect::<PyResult<_>>()?;
    if pts.len() != labels.len() {
        return Err(PyValueError::new_err("points and labels must have equal length"));
    }
    let sample =
        LabeledSample::new(pts.into_iter().zip(labels).collect()).map_err(to_py_err)?;
    let mut rng = StreamKey::new(seed).label_str("py_predict").rng();
    knn::predict(
        &space.inner,
        &sample,
        &point_from_py(&space.inner, x)?,
        k,
        parse_policy(policy)?,
        &mut rng,
    )
    .map_err(to_py_err)
}

fn instance_from_matrix(matrix: Vec<Vec<f64>>) -> PyResult<FiniteMetricInstance> {
    FiniteMetricInstance::from_matrix(matrix).map_err(to_py_err)
}

/// Check the metric axioms of a distance matrix; returns (ok, violation).
#[pyfunction]
fn check_metric_axioms(matrix: Vec<Vec<f64>>) -> PyResult<(bool, Option<String>)> {
    let inst = instance_from_matrix(matrix)?;
    let report = space::check_metric_axioms(&inst);
    Ok((report.ok, report.first_violation.map(|v| format!("{v:?}"))))
}

/// True iff the matrix satisfies the strong triangle inequality.
#[pyfunction]
fn is_strong_triangle(matrix: Vec<Vec<f64>>) -> PyResult<bool> {
    Ok(space::is_strong_triangle(&instance_from_matrix(matrix)?))
}

fn family_from_pairs(balls: Vec<(usize, f64)>) -> PyResult<BallFamily> {
    let centers: Vec<usize> = balls.iter().map(|&(c, _)| c).collect();
    BallFamily::new(
        balls.into_iter().map(|(center, radius)| Ball { center, radius }).collect(),
        f64::INFINITY,
        centers,
    )
    .map_err(to_py_err)
}

/// Maximum number of balls sharing an instance point.
#[pyfunction]
fn multiplicity(matrix: Vec<Vec<f64>>, balls: Vec<(usize, f64)>) -> PyResult<usize> {
    let inst = instance_from_matrix(matrix)?;
    nagata::multiplicity(&inst, &family_from_pairs(balls)?, &Witness::FinitePoints)
        .map_err(to_py_err)
}

/// Exact covering-subfamily search; returns (chosen indices, multiplicity)
/// or None when provably no qualifying subfamily exists.
#[pyfunction]
fn find_subfamily(
    matrix: Vec<Vec<f64>>,
    balls: Vec<(usize, f64)>,
    delta: usize,
) -> PyResult<Option<(Vec<usize>, usize)>> {
    let inst = instance_from_matrix(matrix)?;
    let cert = nagata::find_subfamily(&inst, &family_from_pairs(balls)?, delta, &Witness::FinitePoints)
        .map_err(to_py_err)?;
    Ok(cert.map(|c| (c.chosen, c.multiplicity)))
}

/// Certify a Nagata dimension bound on the matrix; returns a dict with
/// "holds" and, when failed, the "counterexample" ball list.
#[pyfunction]
#[pyo3(signature = (matrix, centers, delta, scale = None, mode = "exhaustive", trials = 1000, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn check_dim_at_scale<'py>(
    py: Python<'py>,
    matrix: Vec<Vec<f64>>,
    centers: Vec<usize>,
    delta: usize,
    scale: Option<f64>,
    mode: &str,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = instance_from_matrix(matrix)?;
    let mode = match mode {
        "exhaustive" => SearchMode::Exhaustive,
        "randomized" => SearchMode::Randomized { trials, seed },
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    let verdict = nagata::check_dim_at_scale(
        &inst,
        &centers,
        delta,
        scale.unwrap_or(f64::INFINITY),
        mode,
        &Witness::FinitePoints,
    )
    .map_err(to_py_err)?;
    let out = PyDict::new(py);
    match verdict {
        DimVerdict::Holds => {
            out.set_item("holds", true)?;
        }
        DimVerdict::Counterexample(family) => {
            out.set_item("holds", false)?;
            let balls: Vec<(usize, f64)> =
                family.balls().iter().map(|b| (b.center, b.radius)).collect();
            out.set_item("counterexample", balls)?;
        }
    }
    Ok(out)
}

/// Run a sweep from a JSON experiment config; returns the rows as dicts.
/// Does not write any files.
#[pyfunction]
fn run_experiment_json<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyList>> {
    let config = ExperimentConfig::from_json(config_json).map_err(to_py_err)?;
    let rows = run_experiment(&config).map_err(to_py_err)?;
    let out = PyList::empty(py);
    for row in rows {
        let d = PyDict::new(py);
        d.set_item("problem_name", row.problem_name)?;
        d.set_item("n", row.n)?;
        d.set_item("k", row.k)?;
        d.set_item("R", row.repetitions)?;
        d.set_item("M", row.test_draws)?;
        d.set_item("err_mean", row.err_mean)?;
        d.set_item("err_sem", row.err_sem)?;
        d.set_item("bayes_error", row.bayes_error)?;
        d.set_item("excess_risk", row.excess_risk)?;
        d.set_item("wall_ms", row.wall_ms)?;
        d.set_item("master_seed", row.master_seed)?;
        out.append(d)?;
    }
    Ok(out)
}

/// Run the full verification suite; returns the JSON report as a string.
#[pyfunction]
fn verify(seed: u64) -> PyResult<String> {
    Ok(verify_all(seed).map_err(to_py_err)?.to_json())
}

#[pymodule]
fn _metriclab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_class::<Problem>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(knn_radius, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(check_metric_axioms, m)?)?;
    m.add_function(wrap_pyfunction!(is_strong_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(find_subfamily, m)?)?;
    m.add_function(wrap_pyfunction!(check_dim_at_scale, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment_json, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
