//! Multigrid convergence experiment.
//!
//! For each pixel size `h` the shape is Gauss-discretized, its boundary traced
//! and segmented into maximal arcs, and both estimators are compared at every
//! edge against the exact curvature at the boundary point nearest to the edge
//! midpoint. Average and maximal errors over the sweep are then fitted by
//! `log ε = m · log h + C`; the slope `m` is the experimental order.

use crate::boundary::{trace_boundary, BoundaryError, DigitalCurve};
use crate::estimator::{lambda_mdca_estimate, mdca_estimate, CurvatureProfile, EstimatorError, Lambda, Method};
use crate::geom::Point;
use crate::grid::{gauss_discretize, GridError, GridSpec, ImplicitShape};
use crate::groundtruth::{implicit_curvature, BoundaryProjector, GroundTruthError};
use crate::mdca::{compute_mdcas, MdcaError, MdcaSet};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("rasterize at h = {h}: {source}")]
    Grid { h: f64, source: GridError },
    #[error("trace at h = {h}: {source}")]
    Boundary { h: f64, source: BoundaryError },
    #[error("mdca at h = {h}: {source}")]
    Mdca { h: f64, source: MdcaError },
    #[error("curvature at h = {h}: {source}")]
    Estimator { h: f64, source: EstimatorError },
    #[error("ground truth at h = {h}: {source}")]
    GroundTruth { h: f64, source: GroundTruthError },
    #[error("no edges left to aggregate")]
    EmptyProfile,
    #[error("regression needs at least 3 rows, got {0}")]
    InsufficientData(usize),
    #[error("regression needs positive errors, got {value} at h = {h}")]
    NonpositiveError { h: f64, value: f64 },
    #[error("invalid resolutions: {0}")]
    InvalidResolutions(String),
}

impl HarnessError {
    /// Pipeline stage the error came from.
    pub fn stage(&self) -> &'static str {
        match self {
            HarnessError::Grid { .. } => "rasterize",
            HarnessError::Boundary { .. } => "trace",
            HarnessError::Mdca { .. } => "mdca",
            HarnessError::Estimator { .. } => "curvature",
            HarnessError::GroundTruth { .. } => "groundtruth",
            _ => "convergence",
        }
    }
}

/// `h = 2⁻ⁿ` for `n = 0..=6`.
pub fn default_resolutions() -> Vec<f64> {
    (0..=6).map(|n| 0.5f64.powi(n)).collect()
}

/// `|κ − κ̂|`.
pub fn absolute_error(truth: f64, estimate: f64) -> f64 {
    (truth - estimate).abs()
}

/// Ground truth for the edges of one curve.
pub struct ErrorContext<'a> {
    shape: &'a dyn ImplicitShape,
    projector: BoundaryProjector<'a>,
}

impl<'a> ErrorContext<'a> {
    /// Boundary sampling at four times the grid resolution.
    pub fn new(shape: &'a dyn ImplicitShape, h: f64) -> Result<Self, GroundTruthError> {
        Ok(ErrorContext {
            shape,
            projector: BoundaryProjector::new(shape, h / 4.0)?,
        })
    }

    /// Nearest boundary point to the midpoint of edge `k` and the exact
    /// curvature there; `None` where the curvature is undefined.
    pub fn truth(&self, curve: &DigitalCurve, k: usize) -> Result<(Point, Option<f64>), GroundTruthError> {
        let foot = self.projector.project(curve.midpoint(k))?;
        match implicit_curvature(self.shape, foot) {
            Ok(kappa) => Ok((foot, Some(kappa))),
            Err(GroundTruthError::SingularPoint { .. }) => Ok((foot, None)),
            Err(e) => Err(e),
        }
    }

    /// Absolute error of `profile` at edge `k`; `None` for excluded edges.
    pub fn absolute_error(
        &self,
        curve: &DigitalCurve,
        profile: &CurvatureProfile,
        k: usize,
    ) -> Result<Option<f64>, GroundTruthError> {
        let (_, truth) = self.truth(curve, k)?;
        Ok(truth.map(|t| absolute_error(t, profile.values[k])))
    }
}

/// Mean and maximum of per-edge errors.
pub fn aggregate_errors(errors: &[f64]) -> Result<(f64, f64), HarnessError> {
    if errors.is_empty() {
        return Err(HarnessError::EmptyProfile);
    }
    let sum: f64 = errors.iter().sum();
    let max = errors.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((sum / errors.len() as f64, max))
}

/// Least-squares line through `(log h, log ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn convergence_rate(rows: &[(f64, f64)]) -> Result<RateFit, HarnessError> {
    if rows.len() < 3 {
        return Err(HarnessError::InsufficientData(rows.len()));
    }
    for &(h, e) in rows {
        if e.is_nan() || e <= 0.0 {
            return Err(HarnessError::NonpositiveError { h, value: e });
        }
        if h.is_nan() || h <= 0.0 {
            return Err(HarnessError::InvalidResolutions(format!("non-positive h = {h}")));
        }
    }
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.0.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::InvalidResolutions("resolutions must be distinct".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Per-edge comparison data for one resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeSample {
    pub index: usize,
    pub midpoint: Point,
    pub foot: Point,
    /// Exact curvature; `None` for edges excluded at corners.
    pub truth: Option<f64>,
    pub mdca: f64,
    pub lambda_mdca: f64,
}

impl EdgeSample {
    pub fn estimate(&self, method: Method) -> f64 {
        match method {
            Method::Mdca => self.mdca,
            Method::LambdaMdca => self.lambda_mdca,
        }
    }

    pub fn error(&self, method: Method) -> Option<f64> {
        self.truth.map(|t| absolute_error(t, self.estimate(method)))
    }
}

/// Full pipeline output at one pixel size.
#[derive(Debug, Clone)]
pub struct ResolutionRun {
    pub h: f64,
    pub pixels: usize,
    pub curve: DigitalCurve,
    pub arcs: MdcaSet,
    pub samples: Vec<EdgeSample>,
}

impl ResolutionRun {
    pub fn excluded(&self) -> usize {
        self.samples.iter().filter(|s| s.truth.is_none()).count()
    }

    pub fn errors(&self, method: Method) -> Vec<f64> {
        self.samples.iter().filter_map(|s| s.error(method)).collect()
    }

    pub fn row(&self, method: Method) -> Result<ErrorRow, HarnessError> {
        let (avg, max) = aggregate_errors(&self.errors(method))?;
        Ok(ErrorRow {
            h: self.h,
            avg,
            max,
            edges: self.curve.len(),
            arcs: self.arcs.len(),
            excluded: self.excluded(),
        })
    }
}

/// Rasterize, trace, segment, estimate and compare at pixel size `h`.
pub fn run_resolution(shape: &dyn ImplicitShape, h: f64, lambda: Lambda) -> Result<ResolutionRun, HarnessError> {
    let spec = GridSpec::covering(shape.bounds(), h).map_err(|source| HarnessError::Grid { h, source })?;
    let pixels = gauss_discretize(shape, &spec).map_err(|source| HarnessError::Grid { h, source })?;
    let curve = trace_boundary(&pixels).map_err(|source| HarnessError::Boundary { h, source })?;
    let arcs = compute_mdcas(&curve).map_err(|source| HarnessError::Mdca { h, source })?;
    let est = |source| HarnessError::Estimator { h, source };
    let mdca = mdca_estimate(&curve, &arcs).map_err(est)?;
    let lam = lambda_mdca_estimate(&curve, &arcs, lambda).map_err(est)?;

    let gt = |source| HarnessError::GroundTruth { h, source };
    let ctx = ErrorContext::new(shape, h).map_err(gt)?;
    let samples = (0..curve.len())
        .map(|k| {
            let (foot, truth) = ctx.truth(&curve, k)?;
            Ok(EdgeSample {
                index: k,
                midpoint: curve.midpoint(k),
                foot,
                truth,
                mdca: mdca.values[k],
                lambda_mdca: lam.values[k],
            })
        })
        .collect::<Result<Vec<_>, GroundTruthError>>()
        .map_err(gt)?;

    Ok(ResolutionRun {
        h,
        pixels: pixels.len(),
        curve,
        arcs,
        samples,
    })
}

/// Aggregate errors at one pixel size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRow {
    pub h: f64,
    pub avg: f64,
    pub max: f64,
    pub edges: usize,
    pub arcs: usize,
    pub excluded: usize,
}

/// Convergence results for one shape and one estimator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub shape: String,
    pub method: Method,
    pub lambda: Lambda,
    pub rows: Vec<ErrorRow>,
    pub slope_avg: Option<f64>,
    pub intercept_avg: Option<f64>,
    pub slope_max: Option<f64>,
    pub intercept_max: Option<f64>,
}

impl ErrorReport {
    fn from_rows(shape: &str, method: Method, lambda: Lambda, rows: Vec<ErrorRow>) -> Result<Self, HarnessError> {
        let (avg_fit, max_fit) = if rows.len() >= 3 {
            let avg: Vec<_> = rows.iter().map(|r| (r.h, r.avg)).collect();
            let max: Vec<_> = rows.iter().map(|r| (r.h, r.max)).collect();
            (Some(convergence_rate(&avg)?), Some(convergence_rate(&max)?))
        } else {
            (None, None)
        };
        Ok(ErrorReport {
            shape: shape.to_string(),
            method,
            lambda,
            rows,
            slope_avg: avg_fit.map(|f| f.slope),
            intercept_avg: avg_fit.map(|f| f.intercept),
            slope_max: max_fit.map(|f| f.slope),
            intercept_max: max_fit.map(|f| f.intercept),
        })
    }
}

/// Both estimators over one resolution sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub mdca: ErrorReport,
    pub lambda_mdca: ErrorReport,
}

impl Sweep {
    pub fn report(&self, method: Method) -> &ErrorReport {
        match method {
            Method::Mdca => &self.mdca,
            Method::LambdaMdca => &self.lambda_mdca,
        }
    }
}

fn sorted_resolutions(resolutions: &[f64]) -> Result<Vec<f64>, HarnessError> {
    if resolutions.is_empty() {
        return Err(HarnessError::InvalidResolutions("no resolutions given".into()));
    }
    if let Some(h) = resolutions.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(HarnessError::InvalidResolutions(format!("non-positive h = {h}")));
    }
    let mut hs = resolutions.to_vec();
    hs.sort_by(|a, b| b.total_cmp(a));
    if hs.windows(2).any(|w| w[0] == w[1]) {
        return Err(HarnessError::InvalidResolutions("resolutions must be distinct".into()));
    }
    Ok(hs)
}

/// Run every resolution (in parallel) and fit both estimators.
pub fn run_sweep(shape: &dyn ImplicitShape, resolutions: &[f64], lambda: Lambda) -> Result<Sweep, HarnessError> {
    let hs = sorted_resolutions(resolutions)?;
    let runs: Vec<ResolutionRun> = hs
        .par_iter()
        .map(|&h| run_resolution(shape, h, lambda))
        .collect::<Result<_, _>>()?;
    let rows = |m: Method| runs.iter().map(|r| r.row(m)).collect::<Result<Vec<_>, _>>();
    Ok(Sweep {
        mdca: ErrorReport::from_rows(shape.name(), Method::Mdca, lambda, rows(Method::Mdca)?)?,
        lambda_mdca: ErrorReport::from_rows(shape.name(), Method::LambdaMdca, lambda, rows(Method::LambdaMdca)?)?,
    })
}

/// Convergence report for one estimator.
pub fn run_experiment(
    shape: &dyn ImplicitShape,
    method: Method,
    resolutions: &[f64],
    lambda: Lambda,
) -> Result<ErrorReport, HarnessError> {
    let sweep = run_sweep(shape, resolutions, lambda)?;
    Ok(match method {
        Method::Mdca => sweep.mdca,
        Method::LambdaMdca => sweep.lambda_mdca,
    })
}
