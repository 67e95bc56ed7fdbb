//! Per-edge curvature from maximal arcs.
//!
//! The MDCA estimate at an edge is the discrete curvature of the arc whose
//! central edge is nearest along the curve. The λ-MDCA estimate averages the
//! curvatures of every arc containing the edge, weighted by `λ(eccentricity)`
//! so that arcs seen near their middle count most.

use crate::boundary::{cyclic_distance, cyclic_span, DigitalCurve};
use crate::mdca::{Mdca, MdcaSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum EstimatorError {
    #[error("edge {edge} does not lie on the arc {start}..={end}")]
    EdgeNotOnArc { edge: usize, start: usize, end: usize },
    #[error("arc set was computed for a curve of {arcs} edges, got {curve}")]
    CurveMismatch { arcs: usize, curve: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "mdca")]
    Mdca,
    #[serde(rename = "lambda-mdca")]
    LambdaMdca,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mdca => "mdca",
            Method::LambdaMdca => "lambda-mdca",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Builtin eccentricity weights: concave on `[0, 1]`, zero at both ends,
/// maximal at ½.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lambda {
    /// `−t log t − (1 − t) log(1 − t)`, with `0 · log 0 = 0`.
    #[default]
    Entropy,
    /// `4t(1 − t)`.
    Parabola,
}

impl Lambda {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            Lambda::Entropy => xlogx_neg(t) + xlogx_neg(1.0 - t),
            Lambda::Parabola => 4.0 * t * (1.0 - t),
        }
    }
}

fn xlogx_neg(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -t * t.ln()
    }
}

/// Estimated curvature per curve edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureProfile {
    pub values: Vec<f64>,
    pub method: Method,
    pub h: f64,
}

impl CurvatureProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Index of the middle edge: `start + ⌈span/2⌉ mod N`.
pub fn central_edge(arc: &Mdca, n: usize) -> usize {
    (arc.start + arc.span().div_ceil(2)) % n
}

/// Relative position of edge `k` on the arc: 0 at the start, 1 at the end.
/// A single-edge arc puts its only edge at ½.
pub fn eccentricity(arc: &Mdca, k: usize, n: usize) -> Result<f64, EstimatorError> {
    let off = arc.offset_of(k, n).ok_or(EstimatorError::EdgeNotOnArc {
        edge: k,
        start: arc.start,
        end: arc.end,
    })?;
    Ok(if arc.span() == 0 {
        0.5
    } else {
        off as f64 / arc.span() as f64
    })
}

fn check(curve: &DigitalCurve, arcs: &MdcaSet) -> Result<(), EstimatorError> {
    if curve.len() != arcs.curve_len {
        return Err(EstimatorError::CurveMismatch {
            arcs: arcs.curve_len,
            curve: curve.len(),
        });
    }
    Ok(())
}

/// For every edge, the index (into `arcs`) of the arc with the nearest
/// central edge. Ties go to the arc with the smaller start edge.
pub fn nearest_arcs(arcs: &MdcaSet) -> Vec<usize> {
    let n = arcs.curve_len;
    if arcs.is_empty() {
        return Vec::new();
    }
    // One representative per distinct centre: the arc with the smallest start.
    let mut centres: Vec<(usize, usize, usize)> = arcs
        .iter()
        .enumerate()
        .map(|(l, a)| (central_edge(a, n), a.start, l))
        .collect();
    centres.sort_unstable();
    centres.dedup_by_key(|c| c.0);

    let m = centres.len();
    (0..n)
        .map(|k| {
            // first centre at or after k, and the one before it (cyclic)
            let after = centres.partition_point(|c| c.0 < k) % m;
            let before = (after + m - 1) % m;
            let key = |c: &(usize, usize, usize)| (cyclic_distance(k, c.0, n), c.1);
            let pick = if key(&centres[before]) <= key(&centres[after]) {
                centres[before]
            } else {
                centres[after]
            };
            pick.2
        })
        .collect()
}

/// Piecewise-constant MDCA curvature estimate.
pub fn mdca_estimate(curve: &DigitalCurve, arcs: &MdcaSet) -> Result<CurvatureProfile, EstimatorError> {
    check(curve, arcs)?;
    let values = nearest_arcs(arcs)
        .into_iter()
        .map(|l| arcs.arcs[l].curvature)
        .collect();
    Ok(CurvatureProfile {
        values,
        method: Method::Mdca,
        h: curve.spec().h,
    })
}

/// λ-MDCA estimate with one of the builtin weights.
pub fn lambda_mdca_estimate(
    curve: &DigitalCurve,
    arcs: &MdcaSet,
    lambda: Lambda,
) -> Result<CurvatureProfile, EstimatorError> {
    lambda_mdca_estimate_with(curve, arcs, |t| lambda.eval(t))
}

/// λ-MDCA estimate with an arbitrary weight. Where every containing arc has
/// zero weight the MDCA value is used.
pub fn lambda_mdca_estimate_with<W>(
    curve: &DigitalCurve,
    arcs: &MdcaSet,
    weight: W,
) -> Result<CurvatureProfile, EstimatorError>
where
    W: Fn(f64) -> f64,
{
    check(curve, arcs)?;
    let n = curve.len();
    let mut num = vec![0.0; n];
    let mut den = vec![0.0; n];
    // Common curvature of all weighted arcs at an edge, if they agree; the mean
    // of equal values is then reported exactly.
    let mut common: Vec<Option<f64>> = vec![None; n];
    let mut uniform = vec![true; n];
    for arc in arcs.iter() {
        let span = arc.span();
        for off in 0..arc.len {
            let t = if span == 0 { 0.5 } else { off as f64 / span as f64 };
            let w = weight(t);
            if w > 0.0 {
                let k = (arc.start + off) % n;
                num[k] += w * arc.curvature;
                den[k] += w;
                match common[k] {
                    None => common[k] = Some(arc.curvature),
                    Some(c) => uniform[k] &= c == arc.curvature,
                }
            }
        }
    }
    let fallback = mdca_estimate(curve, arcs)?;
    let values = (0..n)
        .map(|k| match common[k] {
            None => fallback.values[k],
            Some(c) if uniform[k] => c,
            Some(_) => num[k] / den[k],
        })
        .collect();
    Ok(CurvatureProfile {
        values,
        method: Method::LambdaMdca,
        h: curve.spec().h,
    })
}

/// Arcs containing edge `k`, as indices into `arcs`.
pub fn arcs_containing(arcs: &MdcaSet, k: usize) -> Vec<usize> {
    let n = arcs.curve_len;
    arcs.iter()
        .enumerate()
        .filter(|(_, a)| cyclic_span(a.start, k, n) < a.len)
        .map(|(l, _)| l)
        .collect()
}
