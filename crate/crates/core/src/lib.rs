//! A metric-space learning laboratory for the k-nearest-neighbour rule.
//!
//! The crate has five parts:
//!
//! * [`space`] — the supported metric spaces (Euclidean, the discrete
//!   Cérou-Guyader interval, two-valued spaces, metric hedgehogs, sparse
//!   c00 vectors), point codes, distance evaluation, and finite-instance
//!   materialization with metric-axiom verification;
//! * [`problem`] — learning problems (mixture measure + closed-form
//!   regression function), i.i.d. sampling, exact Bayes error, and the
//!   named counterexample constructions;
//! * [`knn`] — the k-NN radius, tie-breaking neighbour selection under the
//!   documented sphere semantics, the Heaviside majority vote, and Monte
//!   Carlo error estimation;
//! * [`nagata`] — ball-family multiplicity against finite, line, and
//!   hedgehog witnesses, exact branch-and-bound subfamily search, and
//!   dimension-at-scale certification;
//! * [`harness`] — experiment configs, seeded parallel sweeps with
//!   byte-reproducible CSV output, quantitative checks, and the
//!   verification suite.
//!
//! Everything is deterministic given a master seed: randomness flows
//! through keyed substreams ([`substream`]), so parallel runs reproduce
//! serial ones bit for bit.

pub mod error;
pub mod harness;
pub mod knn;
pub mod nagata;
pub mod problem;
pub mod space;
pub mod substream;

pub use error::{Error, Result};
pub use knn::{
    estimate_error, knn_radius, predict, select_neighbors, ErrorEstimate, KSchedule, NeighborSet,
    TieBreakPolicy,
};
pub use problem::{
    build_problem, problem_cerou_guyader, problem_constant, problem_euclidean_linear,
    problem_hedgehog, problem_two_valued, LabeledSample, LearningProblem, Measure,
    MeasureComponent, ProblemSpec, RegressionFn,
};
pub use space::{
    check_metric_axioms, distance, is_strong_triangle, materialize, FiniteMetricInstance,
    PointCode, SpaceSpec,
};
