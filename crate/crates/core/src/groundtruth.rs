//! Analytic test shapes and exact boundary curvature.
//!
//! The smooth catalog shapes are polynomials in `x, y`, so value, gradient
//! and Hessian are evaluated term by term. Curvature of the level set
//! `g = 0` is
//!
//! ```text
//!     κ = (g_xx g_y² − 2 g_xy g_x g_y + g_yy g_x²) / (g_x² + g_y²)^{3/2}
//! ```
//!
//! reported unsigned, since concave stretches are compared by magnitude.

use crate::geom::{BoundingBox, Point};
use crate::grid::ImplicitShape;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum GroundTruthError {
    #[error("point ({x}, {y}) is not on the boundary (g = {value:e})")]
    NotOnCurve { x: f64, y: f64, value: f64 },
    #[error("curvature undefined at ({x}, {y})")]
    SingularPoint { x: f64, y: f64 },
    #[error("no boundary crossing found for shape `{0}`")]
    NoBoundaryFound(String),
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("invalid shape definition: {0}")]
    InvalidShape(String),
}

/// One monomial `coef · x^px · y^py`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    pub px: u32,
    pub py: u32,
}

impl Term {
    pub const fn new(coef: f64, px: u32, py: u32) -> Self {
        Term { coef, px, py }
    }
}

#[inline]
fn powi(v: f64, k: u32) -> f64 {
    match k {
        0 => 1.0,
        1 => v,
        2 => v * v,
        _ => v.powi(k as i32),
    }
}

/// `d^k/dv^k v^n` evaluated at `v`.
#[inline]
fn dpow(v: f64, n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let falling: f64 = (0..k).map(|m| (n - m) as f64).product();
    falling * powi(v, n - k)
}

/// Polynomial level-set shape `{ g ≤ 0 }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialShape {
    pub name: String,
    pub terms: Vec<Term>,
    pub bounds: BoundingBox,
}

impl PolynomialShape {
    pub fn new(name: impl Into<String>, terms: Vec<Term>, bounds: BoundingBox) -> Result<Self, GroundTruthError> {
        let shape = PolynomialShape {
            name: name.into(),
            terms,
            bounds,
        };
        shape.validate()?;
        Ok(shape)
    }

    pub fn validate(&self) -> Result<(), GroundTruthError> {
        if self.terms.is_empty() {
            return Err(GroundTruthError::InvalidShape("polynomial has no terms".into()));
        }
        if self.terms.iter().any(|t| !t.coef.is_finite()) {
            return Err(GroundTruthError::InvalidShape("non-finite coefficient".into()));
        }
        let b = self.bounds;
        if !(b.min.x < b.max.x && b.min.y < b.max.y) {
            return Err(GroundTruthError::InvalidShape("bounds must have positive extent".into()));
        }
        Ok(())
    }

    /// Circle of radius `r` about `center`.
    pub fn disk(center: Point, r: f64) -> Self {
        let (a, b) = (center.x, center.y);
        PolynomialShape {
            name: format!("disk(r={r})"),
            terms: vec![
                Term::new(1.0, 2, 0),
                Term::new(1.0, 0, 2),
                Term::new(-2.0 * a, 1, 0),
                Term::new(-2.0 * b, 0, 1),
                Term::new(a * a + b * b - r * r, 0, 0),
            ],
            bounds: BoundingBox::new(center - Point::new(r, r), center + Point::new(r, r)),
        }
    }

    /// Ellipse `x²/a² + y²/b² − 1`.
    pub fn ellipse(a: f64, b: f64) -> Self {
        PolynomialShape {
            name: "ellipse".into(),
            terms: vec![
                Term::new(1.0 / (a * a), 2, 0),
                Term::new(1.0 / (b * b), 0, 2),
                Term::new(-1.0, 0, 0),
            ],
            bounds: BoundingBox::new(Point::new(-a, -b), Point::new(a, b)),
        }
    }

    /// `(x/3)⁴ + (y/2)⁴ − x² − y² − 1`.
    pub fn gummy_bear() -> Self {
        PolynomialShape {
            name: "gummybear".into(),
            terms: vec![
                Term::new(1.0 / 81.0, 4, 0),
                Term::new(1.0 / 16.0, 0, 4),
                Term::new(-1.0, 2, 0),
                Term::new(-1.0, 0, 2),
                Term::new(-1.0, 0, 0),
            ],
            bounds: BoundingBox::new(Point::new(-9.4, -5.4), Point::new(9.4, 5.4)),
        }
    }

    /// `(3.96 + (x/3)² + (y/3)²)² − 15.84 (x/3)² − 16`, expanded.
    pub fn hour_glass() -> Self {
        // With u = x/3, v = y/3:
        // u⁴ + 2u²v² + v⁴ + (7.92 − 15.84) u² + 7.92 v² + 3.96² − 16
        PolynomialShape {
            name: "hourglass".into(),
            terms: vec![
                Term::new(1.0 / 81.0, 4, 0),
                Term::new(2.0 / 81.0, 2, 2),
                Term::new(1.0 / 81.0, 0, 4),
                Term::new((7.92 - 15.84) / 9.0, 2, 0),
                Term::new(7.92 / 9.0, 0, 2),
                Term::new(3.96 * 3.96 - 16.0, 0, 0),
            ],
            bounds: BoundingBox::new(Point::new(-8.7, -3.6), Point::new(8.7, 3.6)),
        }
    }
}

impl ImplicitShape for PolynomialShape {
    fn name(&self) -> &str {
        &self.name
    }

    fn value(&self, p: Point) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coef * powi(p.x, t.px) * powi(p.y, t.py))
            .sum()
    }

    fn gradient(&self, p: Point) -> Point {
        self.terms.iter().fold(Point::ORIGIN, |acc, t| {
            acc + Point::new(
                t.coef * dpow(p.x, t.px, 1) * powi(p.y, t.py),
                t.coef * powi(p.x, t.px) * dpow(p.y, t.py, 1),
            )
        })
    }

    fn hessian(&self, p: Point) -> Option<[f64; 3]> {
        Some(self.terms.iter().fold([0.0; 3], |[xx, xy, yy], t| {
            [
                xx + t.coef * dpow(p.x, t.px, 2) * powi(p.y, t.py),
                xy + t.coef * dpow(p.x, t.px, 1) * dpow(p.y, t.py, 1),
                yy + t.coef * powi(p.x, t.px) * dpow(p.y, t.py, 2),
            ]
        }))
    }

    fn bounds(&self) -> BoundingBox {
        self.bounds
    }
}

/// `|x| + |y| − r`: straight sides, four corners.
#[derive(Debug, Clone, PartialEq)]
pub struct Rhombus {
    pub r: f64,
    corners: [Point; 4],
}

impl Rhombus {
    pub fn new(r: f64) -> Self {
        Rhombus {
            r,
            corners: [
                Point::new(r, 0.0),
                Point::new(0.0, r),
                Point::new(-r, 0.0),
                Point::new(0.0, -r),
            ],
        }
    }
}

impl ImplicitShape for Rhombus {
    fn name(&self) -> &str {
        "rhombus"
    }

    fn value(&self, p: Point) -> f64 {
        p.x.abs() + p.y.abs() - self.r
    }

    fn gradient(&self, p: Point) -> Point {
        Point::new(sign(p.x), sign(p.y))
    }

    fn hessian(&self, p: Point) -> Option<[f64; 3]> {
        (p.x != 0.0 && p.y != 0.0).then_some([0.0; 3])
    }

    fn bounds(&self) -> BoundingBox {
        BoundingBox::new(Point::new(-self.r, -self.r), Point::new(self.r, self.r))
    }

    fn is_smooth(&self) -> bool {
        false
    }

    fn corners(&self) -> &[Point] {
        &self.corners
    }

    fn exact_projection(&self, p: Point) -> Option<Point> {
        let c = &self.corners;
        (0..4)
            .map(|k| closest_on_segment(p, c[k], c[(k + 1) % 4]))
            .min_by(|a, b| a.distance(p).total_cmp(&b.distance(p)))
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let d = b - a;
    let t = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
    a + d * t
}

/// Names accepted by [`catalog_shape`].
pub const CATALOG: [&str; 4] = ["ellipse", "gummybear", "hourglass", "rhombus"];

/// Builtin test shape by name. `disk:<r>` gives a centred disk.
pub fn catalog_shape(name: &str) -> Result<Arc<dyn ImplicitShape>, GroundTruthError> {
    let lower = name.trim().to_ascii_lowercase();
    if let Some(r) = lower.strip_prefix("disk:") {
        return match r.trim().parse::<f64>() {
            Ok(r) if r > 0.0 && r.is_finite() => Ok(Arc::new(PolynomialShape::disk(Point::ORIGIN, r))),
            _ => Err(GroundTruthError::UnknownShape(name.to_string())),
        };
    }
    let key = lower.replace(['-', '_', ' '], "");
    Ok(match key.as_str() {
        "ellipse" | "e" => Arc::new(PolynomialShape::ellipse(9.0, 3.0)),
        "gummybear" | "g" => Arc::new(PolynomialShape::gummy_bear()),
        "hourglass" | "s" => Arc::new(PolynomialShape::hour_glass()),
        "rhombus" | "q" => Arc::new(Rhombus::new(9.0)),
        _ => return Err(GroundTruthError::UnknownShape(name.to_string())),
    })
}

/// Distance from a corner below which the boundary curvature is undefined.
pub const CORNER_EXCLUSION: f64 = 1e-6;

fn on_curve_tolerance(shape: &dyn ImplicitShape, p: Point) -> f64 {
    1e-8 * (1.0 + shape.gradient(p).norm() * (1.0 + p.norm()))
}

/// Unsigned curvature of `∂X` at the boundary point `p`.
pub fn implicit_curvature(shape: &dyn ImplicitShape, p: Point) -> Result<f64, GroundTruthError> {
    if shape.corners().iter().any(|c| c.distance(p) <= CORNER_EXCLUSION) {
        return Err(GroundTruthError::SingularPoint { x: p.x, y: p.y });
    }
    let value = shape.value(p);
    if value.abs() > on_curve_tolerance(shape, p) {
        return Err(GroundTruthError::NotOnCurve { x: p.x, y: p.y, value });
    }
    let g = shape.gradient(p);
    let norm = g.norm();
    if norm <= 1e-8 {
        return Err(GroundTruthError::SingularPoint { x: p.x, y: p.y });
    }
    let [gxx, gxy, gyy] = shape
        .hessian(p)
        .ok_or(GroundTruthError::SingularPoint { x: p.x, y: p.y })?;
    let num = gxx * g.y * g.y - 2.0 * gxy * g.x * g.y + gyy * g.x * g.x;
    Ok((num / (norm * norm * norm)).abs())
}

/// Nearest-boundary-point queries for one shape at one sampling density.
///
/// The zero contour is sampled by marching squares on a lattice of spacing
/// `step`; queries start at the closest sample and are refined by alternating
/// tangential steps toward the query point with Newton projection onto
/// `g = 0`.
pub struct BoundaryProjector<'a> {
    shape: &'a dyn ImplicitShape,
    samples: Vec<Point>,
    buckets: Vec<Vec<u32>>,
    origin: Point,
    cell: f64,
    cols: usize,
    rows: usize,
}

const REFINE_ITERATIONS: usize = 20;

impl<'a> BoundaryProjector<'a> {
    pub fn new(shape: &'a dyn ImplicitShape, step: f64) -> Result<Self, GroundTruthError> {
        let step = if step > 0.0 && step.is_finite() { step } else { 1e-2 };
        let bounds = shape.bounds().expanded(2.0 * step);
        let samples = if shape.exact_projection(Point::ORIGIN).is_some() {
            Vec::new()
        } else {
            let s = marching_squares_samples(shape, bounds, step);
            if s.is_empty() {
                return Err(GroundTruthError::NoBoundaryFound(shape.name().to_string()));
            }
            s
        };

        let cell = (4.0 * step).max(1e-3);
        let cols = ((bounds.width() / cell).ceil() as usize).max(1);
        let rows = ((bounds.height() / cell).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); cols * rows];
        for (k, s) in samples.iter().enumerate() {
            let (c, r) = Self::cell_of(bounds.min, cell, cols, rows, *s);
            buckets[r * cols + c].push(k as u32);
        }
        Ok(BoundaryProjector {
            shape,
            samples,
            buckets,
            origin: bounds.min,
            cell,
            cols,
            rows,
        })
    }

    fn cell_of(origin: Point, cell: f64, cols: usize, rows: usize, p: Point) -> (usize, usize) {
        let c = ((p.x - origin.x) / cell).floor().clamp(0.0, (cols - 1) as f64) as usize;
        let r = ((p.y - origin.y) / cell).floor().clamp(0.0, (rows - 1) as f64) as usize;
        (c, r)
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    /// Closest contour sample to `p`.
    fn nearest_sample(&self, p: Point) -> Option<Point> {
        let (c0, r0) = Self::cell_of(self.origin, self.cell, self.cols, self.rows, p);
        let mut best: Option<(f64, Point)> = None;
        let max_ring = self.cols.max(self.rows);
        for ring in 0..=max_ring {
            // Anything in ring `ring` is at least (ring − 1)·cell away.
            if let Some((d, _)) = best {
                if d < (ring as f64 - 1.0) * self.cell {
                    break;
                }
            }
            let (rlo, rhi) = (r0 as i64 - ring as i64, r0 as i64 + ring as i64);
            let (clo, chi) = (c0 as i64 - ring as i64, c0 as i64 + ring as i64);
            for r in rlo..=rhi {
                for c in clo..=chi {
                    let on_ring = r == rlo || r == rhi || c == clo || c == chi;
                    if !on_ring || r < 0 || c < 0 || r as usize >= self.rows || c as usize >= self.cols {
                        continue;
                    }
                    for &k in &self.buckets[r as usize * self.cols + c as usize] {
                        let s = self.samples[k as usize];
                        let d = s.distance(p);
                        if best.is_none_or(|(bd, _)| d < bd) {
                            best = Some((d, s));
                        }
                    }
                }
            }
        }
        best.map(|(_, s)| s)
    }

    /// Boundary point closest to `p`.
    pub fn project(&self, p: Point) -> Result<Point, GroundTruthError> {
        if let Some(q) = self.shape.exact_projection(p) {
            return Ok(q);
        }
        let start = self
            .nearest_sample(p)
            .ok_or_else(|| GroundTruthError::NoBoundaryFound(self.shape.name().to_string()))?;
        // Samples lie on chords, not on the curve; compare on-curve points.
        let fallback = newton_project(self.shape, start);
        let refined = refine_foot_point(self.shape, p, start);
        Ok(if refined.distance(p) <= fallback.distance(p) + 1e-12 {
            refined
        } else {
            fallback
        })
    }
}

/// One-off projection with a sampling step derived from the query's own
/// neighbourhood. Prefer [`BoundaryProjector`] for many queries.
pub fn nearest_boundary_point(shape: &dyn ImplicitShape, p: Point, step: f64) -> Result<Point, GroundTruthError> {
    BoundaryProjector::new(shape, step)?.project(p)
}

fn newton_project(shape: &dyn ImplicitShape, mut q: Point) -> Point {
    for _ in 0..8 {
        let g = shape.gradient(q);
        let n2 = g.norm_sq();
        if n2 == 0.0 {
            break;
        }
        let step = g * (shape.value(q) / n2);
        q = q - step;
        if step.norm() < 1e-15 * (1.0 + q.norm()) {
            break;
        }
    }
    q
}

fn refine_foot_point(shape: &dyn ImplicitShape, p: Point, start: Point) -> Point {
    let mut q = newton_project(shape, start);
    for _ in 0..REFINE_ITERATIONS {
        let g = shape.gradient(q);
        let n = g.norm();
        if n == 0.0 {
            break;
        }
        let tangent = g.perp() / n;
        q = newton_project(shape, q + tangent * tangent.dot(p - q));
    }
    polish_foot_point(shape, p, q)
}

/// Newton iteration on `g(q) = 0`, `∇g(q) × (p − q) = 0`. The tangential
/// iteration converges only linearly when `p` is far from a strongly curved
/// part of the boundary; this removes the remaining error. Steps that leave
/// the curve or move away from `p` are rejected.
fn polish_foot_point(shape: &dyn ImplicitShape, p: Point, mut q: Point) -> Point {
    for _ in 0..8 {
        let Some([gxx, gxy, gyy]) = shape.hessian(q) else {
            break;
        };
        let g = shape.gradient(q);
        let d = p - q;
        let f = [shape.value(q), g.x * d.y - g.y * d.x];
        let j = [
            [g.x, g.y],
            [gxx * d.y - gxy * d.x + g.y, gxy * d.y - g.x - gyy * d.x],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dy = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        let next = newton_project(shape, q - Point::new(dx, dy));
        if !next.x.is_finite() || !next.y.is_finite() || next.distance(p) > q.distance(p) + 1e-12 {
            break;
        }
        let moved = next.distance(q);
        q = next;
        if moved < 1e-15 * (1.0 + q.norm()) {
            break;
        }
    }
    q
}

/// Zero crossings of `g` along the edges of a `step` lattice over `bounds`.
fn marching_squares_samples(shape: &dyn ImplicitShape, bounds: BoundingBox, step: f64) -> Vec<Point> {
    let nx = (bounds.width() / step).ceil() as usize + 1;
    let ny = (bounds.height() / step).ceil() as usize + 1;
    let at = |i: usize, j: usize| bounds.min + Point::new(i as f64 * step, j as f64 * step);

    let mut prev: Vec<f64> = (0..nx).map(|i| shape.value(at(i, 0))).collect();
    let mut cur = vec![0.0; nx];
    let mut samples = Vec::new();
    let crossing = |a: Point, b: Point, ga: f64, gb: f64| a + (b - a) * (ga / (ga - gb));

    for i in 0..nx - 1 {
        if (prev[i] <= 0.0) != (prev[i + 1] <= 0.0) {
            samples.push(crossing(at(i, 0), at(i + 1, 0), prev[i], prev[i + 1]));
        }
    }
    for j in 1..ny {
        for (i, v) in cur.iter_mut().enumerate() {
            *v = shape.value(at(i, j));
        }
        for i in 0..nx {
            if (prev[i] <= 0.0) != (cur[i] <= 0.0) {
                samples.push(crossing(at(i, j - 1), at(i, j), prev[i], cur[i]));
            }
            if i + 1 < nx && (cur[i] <= 0.0) != (cur[i + 1] <= 0.0) {
                samples.push(crossing(at(i, j), at(i + 1, j), cur[i], cur[i + 1]));
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    samples
}
