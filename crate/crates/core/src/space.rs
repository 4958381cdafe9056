//! Metric spaces, point codes, and finite-instance materialization.
//!
//! Five space families are supported:
//!
//! * `Euclidean(d)` — vectors in R^d with the L2 distance;
//! * `CgInterval` — the unit interval with the discrete Cérou–Guyader
//!   distance taking only the values {0, 1, 2};
//! * `TwoValued(N, r)` — N points, all nonzero distances equal to r;
//! * `Hedgehog(tau)` — tau copies of [0, 1] glued at the left endpoint,
//!   geodesic metric (cross-spine distance s + t);
//! * `C00(bound)` — finitely supported sparse vectors under the sup norm.
//!
//! Distances are pure functions; all types are immutable after construction
//! and safe to share across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Triangle-inequality checks absorb double-precision rounding with this
/// tolerance; all built-in metrics are exact or nearly exact in f64.
pub const AXIOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Euclidean { dim: usize },
    CgInterval,
    TwoValued { points: usize, distance: f64 },
    Hedgehog { spines: usize },
    C00 { index_bound: usize },
}

impl SpaceSpec {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("Euclidean dimension must be >= 1".into()));
        }
        Ok(SpaceSpec::Euclidean { dim })
    }

    pub fn cg_interval() -> Self {
        SpaceSpec::CgInterval
    }

    pub fn two_valued(points: usize, distance: f64) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidParameter("two-valued space needs >= 2 points".into()));
        }
        if !distance.is_finite() || distance <= 0.0 {
            return Err(Error::InvalidParameter("two-valued distance must be positive".into()));
        }
        Ok(SpaceSpec::TwoValued { points, distance })
    }

    pub fn hedgehog(spines: usize) -> Result<Self> {
        if spines == 0 {
            return Err(Error::InvalidParameter("hedgehog needs >= 1 spine".into()));
        }
        Ok(SpaceSpec::Hedgehog { spines })
    }

    pub fn c00(index_bound: usize) -> Result<Self> {
        if index_bound == 0 {
            return Err(Error::InvalidParameter("c00 index bound must be >= 1".into()));
        }
        Ok(SpaceSpec::C00 { index_bound })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SpaceSpec::Euclidean { .. } => "euclidean",
            SpaceSpec::CgInterval => "cg_interval",
            SpaceSpec::TwoValued { .. } => "two_valued",
            SpaceSpec::Hedgehog { .. } => "hedgehog",
            SpaceSpec::C00 { .. } => "c00",
        }
    }

    /// Validate parameter invariants after e.g. deserialization.
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpaceSpec::Euclidean { dim } => SpaceSpec::euclidean(dim).map(|_| ()),
            SpaceSpec::CgInterval => Ok(()),
            SpaceSpec::TwoValued { points, distance } => {
                SpaceSpec::two_valued(points, distance).map(|_| ())
            }
            SpaceSpec::Hedgehog { spines } => SpaceSpec::hedgehog(spines).map(|_| ()),
            SpaceSpec::C00 { index_bound } => SpaceSpec::c00(index_bound).map(|_| ()),
        }
    }
}

/// A point in one of the supported spaces.
///
/// Hedgehog points with `t == 0` are canonicalized to spine 0: the glue
/// point is a single point of the space no matter which spine named it.
/// Sparse points never store zero entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "point", rename_all = "snake_case")]
pub enum PointCode {
    Euclidean(Vec<f64>),
    UnitInterval(f64),
    Discrete(usize),
    Hedgehog { spine: usize, t: f64 },
    Sparse(BTreeMap<usize, f64>),
}

impl PointCode {
    pub fn hedgehog(spine: usize, t: f64) -> Self {
        if t == 0.0 {
            PointCode::Hedgehog { spine: 0, t: 0.0 }
        } else {
            PointCode::Hedgehog { spine, t }
        }
    }

    /// Builds a sparse point, dropping zero entries.
    pub fn sparse<I: IntoIterator<Item = (usize, f64)>>(entries: I) -> Self {
        PointCode::Sparse(entries.into_iter().filter(|&(_, v)| v != 0.0).collect())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            PointCode::Euclidean(_) => "euclidean",
            PointCode::UnitInterval(_) => "unit_interval",
            PointCode::Discrete(_) => "discrete",
            PointCode::Hedgehog { .. } => "hedgehog",
            PointCode::Sparse(_) => "sparse",
        }
    }

    /// Scalar position for spaces whose points carry one: the interval
    /// coordinate, a 1-d Euclidean coordinate, or the hedgehog spine
    /// position t.
    pub(crate) fn scalar_position(&self) -> Option<f64> {
        match self {
            PointCode::UnitInterval(x) => Some(*x),
            PointCode::Euclidean(v) if v.len() == 1 => Some(v[0]),
            PointCode::Hedgehog { t, .. } => Some(*t),
            _ => None,
        }
    }
}

impl fmt::Display for PointCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointCode::Euclidean(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            PointCode::UnitInterval(x) => write!(f, "{x}"),
            PointCode::Discrete(i) => write!(f, "#{i}"),
            PointCode::Hedgehog { spine, t } => write!(f, "spine{spine}@{t}"),
            PointCode::Sparse(m) => {
                write!(f, "{{")?;
                for (i, (k, v)) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}:{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Checks that `p` is a valid point of the space described by `spec`.
pub fn validate_point(spec: &SpaceSpec, p: &PointCode) -> Result<()> {
    let mismatch = |spec: &SpaceSpec, p: &PointCode| {
        Err(Error::PointSpaceMismatch { space: spec.kind_name(), got: p.kind_name() })
    };
    match (spec, p) {
        (SpaceSpec::Euclidean { dim }, PointCode::Euclidean(v)) => {
            if v.len() != *dim {
                return Err(Error::InvalidPoint(format!(
                    "expected {} coordinates, got {}",
                    dim,
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidPoint("non-finite coordinate".into()));
            }
            Ok(())
        }
        (SpaceSpec::CgInterval, PointCode::UnitInterval(x)) => {
            if !(0.0..=1.0).contains(x) {
                return Err(Error::InvalidPoint(format!("{x} outside [0,1]")));
            }
            Ok(())
        }
        (SpaceSpec::TwoValued { points, .. }, PointCode::Discrete(i)) => {
            if i >= points {
                return Err(Error::InvalidPoint(format!("index {i} >= {points}")));
            }
            Ok(())
        }
        (SpaceSpec::Hedgehog { spines }, PointCode::Hedgehog { spine, t }) => {
            if spine >= spines {
                return Err(Error::InvalidPoint(format!("spine {spine} >= {spines}")));
            }
            if !(0.0..=1.0).contains(t) {
                return Err(Error::InvalidPoint(format!("position {t} outside [0,1]")));
            }
            if *t == 0.0 && *spine != 0 {
                return Err(Error::InvalidPoint("glue point must be canonicalized to spine 0".into()));
            }
            Ok(())
        }
        (SpaceSpec::C00 { index_bound }, PointCode::Sparse(m)) => {
            for (&i, &v) in m {
                if i >= *index_bound {
                    return Err(Error::InvalidPoint(format!("index {i} >= {index_bound}")));
                }
                if v == 0.0 {
                    return Err(Error::InvalidPoint("sparse point stores a zero entry".into()));
                }
                if !v.is_finite() {
                    return Err(Error::InvalidPoint("non-finite entry".into()));
                }
            }
            Ok(())
        }
        _ => mismatch(spec, p),
    }
}

/// Distance without validation. Callers must have validated both points
/// against `spec`; the sampling and harness paths do this once per sample.
pub(crate) fn distance_raw(spec: &SpaceSpec, p: &PointCode, q: &PointCode) -> f64 {
    match (spec, p, q) {
        (SpaceSpec::Euclidean { .. }, PointCode::Euclidean(a), PointCode::Euclidean(b)) => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        (SpaceSpec::CgInterval, PointCode::UnitInterval(x), PointCode::UnitInterval(y)) => {
            if x == y {
                0.0
            } else if *x == 0.0 || *y == 0.0 {
                1.0
            } else {
                2.0
            }
        }
        (SpaceSpec::TwoValued { distance, .. }, PointCode::Discrete(i), PointCode::Discrete(j)) => {
            if i == j {
                0.0
            } else {
                *distance
            }
        }
        (
            SpaceSpec::Hedgehog { .. },
            PointCode::Hedgehog { spine: s, t },
            PointCode::Hedgehog { spine: s2, t: t2 },
        ) => {
            // Geodesic: along the spine, or through the glue point. Same-spine
            // |t - t2| never exceeds the glue route t + t2.
            if s == s2 {
                (t - t2).abs()
            } else {
                t + t2
            }
        }
        (SpaceSpec::C00 { .. }, PointCode::Sparse(a), PointCode::Sparse(b)) => {
            let mut max = 0.0f64;
            for (i, &v) in a {
                let w = b.get(i).copied().unwrap_or(0.0);
                max = max.max((v - w).abs());
            }
            for (i, &w) in b {
                if !a.contains_key(i) {
                    max = max.max(w.abs());
                }
            }
            max
        }
        // validate_point rules this out on the checked path.
        _ => f64::NAN,
    }
}

/// Metric value between two points of the space.
pub fn distance(spec: &SpaceSpec, p: &PointCode, q: &PointCode) -> Result<f64> {
    validate_point(spec, p)?;
    validate_point(spec, q)?;
    Ok(distance_raw(spec, p, q))
}

/// A finite metric instance: a symmetric distance matrix with zero diagonal.
///
/// Point identifiers are kept for CSV round trips and human-readable
/// certificates; they default to `p0..p{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricInstance {
    dist: Vec<Vec<f64>>,
    ids: Vec<String>,
}

impl FiniteMetricInstance {
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::InvalidParameter("instance needs at least one point".into()));
        }
        if dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter("distance matrix must be square".into()));
        }
        let ids = (0..n).map(|i| format!("p{i}")).collect();
        Ok(FiniteMetricInstance { dist, ids })
    }

    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.n() {
            return Err(Error::InvalidParameter("one id per point required".into()));
        }
        self.ids = ids;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.dist.len()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Writes the instance as a CSV distance matrix. The header row holds the
    /// point ids; each data row starts with its point id.
    pub fn to_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["id".to_string()];
        header.extend(self.ids.iter().cloned());
        wtr.write_record(&header)?;
        for (i, row) in self.dist.iter().enumerate() {
            let mut rec = vec![self.ids[i].clone()];
            rec.extend(row.iter().map(|d| d.to_string()));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn from_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header = rdr.headers()?.clone();
        if header.is_empty() {
            return Err(Error::InvalidParameter("empty CSV".into()));
        }
        let ids: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let n = ids.len();
        let mut dist = Vec::with_capacity(n);
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != n + 1 {
                return Err(Error::InvalidParameter(format!(
                    "row has {} fields, expected {}",
                    rec.len(),
                    n + 1
                )));
            }
            let row: Vec<f64> = rec
                .iter()
                .skip(1)
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidParameter(format!("bad distance `{s}`")))
                })
                .collect::<Result<_>>()?;
            dist.push(row);
        }
        if dist.len() != n {
            return Err(Error::InvalidParameter(format!(
                "matrix has {} rows for {} columns",
                dist.len(),
                n
            )));
        }
        FiniteMetricInstance::from_matrix(dist)?.with_ids(ids)
    }
}

/// Materializes the pairwise distance matrix of the given points.
pub fn materialize(spec: &SpaceSpec, points: &[PointCode]) -> Result<FiniteMetricInstance> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("need at least one point".into()));
    }
    for p in points {
        validate_point(spec, p)?;
    }
    let n = points.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = distance_raw(spec, &points[i], &points[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    FiniteMetricInstance::from_matrix(dist)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomViolation {
    NonzeroDiagonal { i: usize },
    Negative { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    /// dist(i,k) > dist(i,j) + dist(j,k) beyond tolerance.
    Triangle { i: usize, j: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomReport {
    pub ok: bool,
    pub first_violation: Option<AxiomViolation>,
}

/// Checks zero diagonal, non-negativity, symmetry, and the triangle
/// inequality (with [`AXIOM_TOL`] slack), pinpointing the first violation.
pub fn check_metric_axioms(instance: &FiniteMetricInstance) -> AxiomReport {
    let n = instance.n();
    let d = |i: usize, j: usize| instance.dist(i, j);
    for i in 0..n {
        if d(i, i) != 0.0 {
            return AxiomReport { ok: false, first_violation: Some(AxiomViolation::NonzeroDiagonal { i }) };
        }
    }
    for i in 0..n {
        for j in 0..n {
            if d(i, j) < 0.0 {
                return AxiomReport { ok: false, first_violation: Some(AxiomViolation::Negative { i, j }) };
            }
            if d(i, j) != d(j, i) {
                return AxiomReport { ok: false, first_violation: Some(AxiomViolation::Asymmetric { i, j }) };
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d(i, k) > d(i, j) + d(j, k) + AXIOM_TOL {
                    return AxiomReport {
                        ok: false,
                        first_violation: Some(AxiomViolation::Triangle { i, j, k }),
                    };
                }
            }
        }
    }
    AxiomReport { ok: true, first_violation: None }
}

/// True iff the instance satisfies the strong triangle inequality
/// d(i,k) <= max(d(i,j), d(j,k)) on every triple.
pub fn is_strong_triangle(instance: &FiniteMetricInstance) -> bool {
    let n = instance.n();
    let d = |i: usize, j: usize| instance.dist(i, j);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d(i, k) > d(i, j).max(d(j, k)) + AXIOM_TOL {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cg(x: f64) -> PointCode {
        PointCode::UnitInterval(x)
    }

    #[test]
    fn cg_distance_cases() {
        let s = SpaceSpec::cg_interval();
        assert_eq!(distance(&s, &cg(0.0), &cg(0.5)).unwrap(), 1.0);
        assert_eq!(distance(&s, &cg(0.3), &cg(0.7)).unwrap(), 2.0);
        assert_eq!(distance(&s, &cg(0.5), &cg(0.0)).unwrap(), 1.0);
    }

    #[test]
    fn distance_to_self_is_zero_in_every_space() {
        let cases: Vec<(SpaceSpec, PointCode)> = vec![
            (SpaceSpec::euclidean(3).unwrap(), PointCode::Euclidean(vec![1.0, -2.0, 0.5])),
            (SpaceSpec::cg_interval(), cg(0.25)),
            (SpaceSpec::two_valued(4, 1.5).unwrap(), PointCode::Discrete(2)),
            (SpaceSpec::hedgehog(5).unwrap(), PointCode::hedgehog(3, 0.4)),
            (SpaceSpec::c00(10).unwrap(), PointCode::sparse([(2, 0.5), (7, -1.0)])),
        ];
        for (spec, p) in cases {
            assert_eq!(distance(&spec, &p, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn hedgehog_same_and_cross_spine() {
        let s = SpaceSpec::hedgehog(6).unwrap();
        let d1 = distance(&s, &PointCode::hedgehog(3, 0.2), &PointCode::hedgehog(3, 0.9)).unwrap();
        assert!((d1 - 0.7).abs() < 1e-15);
        let d2 = distance(&s, &PointCode::hedgehog(1, 0.2), &PointCode::hedgehog(4, 0.5)).unwrap();
        assert!((d2 - 0.7).abs() < 1e-15);
    }

    // Independent oracle for the geodesic: shortest path over a dense grid
    // graph (spine-adjacent steps plus the glue vertex), Floyd-Warshall.
    #[test]
    fn hedgehog_matches_shortest_path_oracle() {
        let spines = 3usize;
        let steps = 10usize; // grid 0.0, 0.1, ..., 1.0 per spine
        // vertex 0 = glue; vertex 1 + s*steps + (g-1) = spine s at t = g/steps
        let nv = 1 + spines * steps;
        let idx = |s: usize, g: usize| -> usize {
            assert!(g >= 1);
            1 + s * steps + (g - 1)
        };
        let inf = f64::INFINITY;
        let mut d = vec![vec![inf; nv]; nv];
        for v in 0..nv {
            d[v][v] = 0.0;
        }
        let h = 1.0 / steps as f64;
        for s in 0..spines {
            // glue to first grid point, then along the spine
            d[0][idx(s, 1)] = h;
            d[idx(s, 1)][0] = h;
            for g in 1..steps {
                d[idx(s, g)][idx(s, g + 1)] = h;
                d[idx(s, g + 1)][idx(s, g)] = h;
            }
        }
        for m in 0..nv {
            for i in 0..nv {
                for j in 0..nv {
                    if d[i][m] + d[m][j] < d[i][j] {
                        d[i][j] = d[i][m] + d[m][j];
                    }
                }
            }
        }
        let spec = SpaceSpec::hedgehog(spines).unwrap();
        let point = |s: usize, g: usize| PointCode::hedgehog(s, g as f64 * h);
        for s in 0..spines {
            for g in 1..=steps {
                for s2 in 0..spines {
                    for g2 in 1..=steps {
                        let expect = d[idx(s, g)][idx(s2, g2)];
                        let got = distance(&spec, &point(s, g), &point(s2, g2)).unwrap();
                        assert!(
                            (expect - got).abs() < 1e-9,
                            "spine{s}@{g} vs spine{s2}@{g2}: oracle {expect}, got {got}"
                        );
                    }
                }
                let got = distance(&spec, &point(s, g), &PointCode::hedgehog(0, 0.0)).unwrap();
                assert!((d[idx(s, g)][0] - got).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn two_valued_distance_is_constant() {
        let s = SpaceSpec::two_valued(5, 2.5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let d = distance(&s, &PointCode::Discrete(i), &PointCode::Discrete(j)).unwrap();
                assert_eq!(d, if i == j { 0.0 } else { 2.5 });
            }
        }
    }

    #[test]
    fn glue_point_is_canonical() {
        let p = PointCode::hedgehog(4, 0.0);
        assert_eq!(p, PointCode::Hedgehog { spine: 0, t: 0.0 });
        let s = SpaceSpec::hedgehog(5).unwrap();
        let q = PointCode::hedgehog(2, 0.3);
        assert!((distance(&s, &p, &q).unwrap() - 0.3).abs() < 1e-15);
        // identity of indiscernibles holds after canonicalization
        assert_eq!(distance(&s, &p, &PointCode::hedgehog(1, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn sparse_points_drop_zeros_and_use_sup_norm() {
        let s = SpaceSpec::c00(100).unwrap();
        let a = PointCode::sparse([(1, 0.5), (3, 0.0), (7, -2.0)]);
        let b = PointCode::sparse([(1, 0.25), (9, 1.0)]);
        match &a {
            PointCode::Sparse(m) => assert!(!m.contains_key(&3)),
            _ => unreachable!(),
        }
        assert_eq!(distance(&s, &a, &b).unwrap(), 2.0);
        assert_eq!(distance(&s, &a, &PointCode::sparse([])).unwrap(), 2.0);
    }

    #[test]
    fn mismatched_point_kind_is_usage_error() {
        let s = SpaceSpec::cg_interval();
        let err = distance(&s, &cg(0.1), &PointCode::Discrete(0)).unwrap_err();
        assert!(matches!(err, Error::PointSpaceMismatch { .. }));
        let s2 = SpaceSpec::euclidean(2).unwrap();
        let err = distance(&s2, &PointCode::Euclidean(vec![0.0]), &PointCode::Euclidean(vec![0.0, 1.0]))
            .unwrap_err();
        assert!(matches!(err, Error::InvalidPoint(_)));
    }

    #[test]
    fn materialize_cg_three_points() {
        let s = SpaceSpec::cg_interval();
        let inst = materialize(&s, &[cg(0.0), cg(0.4), cg(0.8)]).unwrap();
        let want = [[0.0, 1.0, 1.0], [1.0, 0.0, 2.0], [1.0, 2.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(inst.dist(i, j), want[i][j]);
            }
        }
    }

    #[test]
    fn materialize_single_point() {
        let s = SpaceSpec::euclidean(2).unwrap();
        let inst = materialize(&s, &[PointCode::Euclidean(vec![3.0, 4.0])]).unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.dist(0, 0), 0.0);
    }

    #[test]
    fn materialize_hedgehog_matches_pairwise_calls() {
        let s = SpaceSpec::hedgehog(4).unwrap();
        let pts = vec![
            PointCode::hedgehog(0, 0.3),
            PointCode::hedgehog(1, 0.5),
            PointCode::hedgehog(1, 0.9),
            PointCode::hedgehog(3, 0.1),
        ];
        let inst = materialize(&s, &pts).unwrap();
        for i in 0..4 {
            assert_eq!(inst.dist(i, i), 0.0);
            for j in 0..4 {
                assert_eq!(inst.dist(i, j), inst.dist(j, i));
                assert_eq!(inst.dist(i, j), distance(&s, &pts[i], &pts[j]).unwrap());
            }
        }
        assert!(check_metric_axioms(&inst).ok);
    }

    #[test]
    fn axiom_check_flags_triangle_violation() {
        let inst = FiniteMetricInstance::from_matrix(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap();
        let report = check_metric_axioms(&inst);
        assert!(!report.ok);
        assert_eq!(report.first_violation, Some(AxiomViolation::Triangle { i: 0, j: 1, k: 2 }));
    }

    #[test]
    fn builtin_spaces_pass_axioms() {
        let s = SpaceSpec::cg_interval();
        let inst = materialize(&s, &[cg(0.0), cg(0.1), cg(0.2), cg(0.9)]).unwrap();
        assert!(check_metric_axioms(&inst).ok);
    }

    #[test]
    fn strong_triangle_named_cases() {
        let tv = SpaceSpec::two_valued(4, 1.0).unwrap();
        let pts: Vec<_> = (0..4).map(PointCode::Discrete).collect();
        assert!(is_strong_triangle(&materialize(&tv, &pts).unwrap()));

        let line = SpaceSpec::euclidean(1).unwrap();
        let pts: Vec<_> = [0.0, 1.0, 2.0]
            .iter()
            .map(|&x| PointCode::Euclidean(vec![x]))
            .collect();
        assert!(!is_strong_triangle(&materialize(&line, &pts).unwrap()));

        let s = SpaceSpec::cg_interval();
        let inst = materialize(&s, &[cg(0.0), cg(0.4), cg(0.8)]).unwrap();
        assert!(!is_strong_triangle(&inst));
    }

    #[test]
    fn instance_csv_round_trip() {
        let s = SpaceSpec::cg_interval();
        let inst = materialize(&s, &[cg(0.0), cg(0.4), cg(0.8)]).unwrap();
        let mut buf = Vec::new();
        inst.to_csv(&mut buf).unwrap();
        let back = FiniteMetricInstance::from_csv(buf.as_slice()).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn hedgehog_distance_bounds() {
        let s = SpaceSpec::hedgehog(8).unwrap();
        let p = PointCode::hedgehog(2, 1.0);
        let q = PointCode::hedgehog(7, 1.0);
        assert_eq!(distance(&s, &p, &q).unwrap(), 2.0);
    }
}
