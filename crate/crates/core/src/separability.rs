//! Circular separability of two finite point sets.
//!
//! A circle with centre `m` and radius `R` is the lifted plane
//! `z = 2 m·(x, y) + (R² − ‖m‖²)` over the paraboloid `z = x² + y²`: a point is
//! inside the circle exactly when its lift lies below that plane. Finding a
//! separating circle is therefore a linear feasibility problem in the three
//! plane coefficients, and finding the smallest one minimises the convex
//! objective `R² = γ + (α² + β²)/4` over that feasible region.
//!
//! The minimiser is unique and is pinned down by at most three points lying on
//! the circle, which makes the problem LP-type. [`smallest_separating_circle`]
//! solves it with a randomized incremental scheme in the style of Welzl and
//! Seidel: when a point violates the current optimum it must lie on the new
//! optimum's boundary, and with two boundary points fixed the remaining
//! problem is one-dimensional (the centre slides along the bisector and every
//! constraint becomes a half-line in the slide parameter).

use crate::geom::Point;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used for on-circle classification.
pub const EPSILON: f64 = 1e-9;

/// Fixed shuffle seed: results must be reproducible run to run.
const SHUFFLE_SEED: u64 = 0x6d64_6361;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SeparabilityError {
    #[error("point set `{0}` is empty")]
    EmptyInput(&'static str),
    #[error("point sets are not circularly separable with the requested set enclosed")]
    NotSeparable,
}

/// Which of the two input sets lies inside the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Enclosed {
    Inner,
    Outer,
}

impl Enclosed {
    pub fn flipped(self) -> Enclosed {
        match self {
            Enclosed::Inner => Enclosed::Outer,
            Enclosed::Outer => Enclosed::Inner,
        }
    }
}

/// Witness of circular separability.
///
/// Every point of the enclosed set satisfies `‖m − p‖ ≤ R` and every point of
/// the other set satisfies `‖m − q‖ ≥ R`, both up to the power tolerance of
/// [`power_tolerance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatingCircle {
    pub center: Point,
    pub radius: f64,
    pub encloses: Enclosed,
}

impl SeparatingCircle {
    /// Power of `p` with respect to the circle: `‖p − m‖² − R²`.
    pub fn power(&self, p: Point) -> f64 {
        (p - self.center).norm_sq() - self.radius * self.radius
    }

    /// Reciprocal radius; infinite for the degenerate point circle.
    pub fn curvature(&self) -> f64 {
        1.0 / self.radius
    }

    /// The circle as a plane over the lifting paraboloid.
    pub fn lifted_plane(&self) -> LiftedPlane {
        LiftedPlane {
            a: 2.0 * self.center.x,
            b: 2.0 * self.center.y,
            c: self.radius * self.radius - self.center.norm_sq(),
        }
    }
}

/// A point lifted onto the paraboloid `z = x² + y²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LiftedPoint {
    pub fn new(p: Point) -> Self {
        LiftedPoint {
            x: p.x,
            y: p.y,
            z: p.x * p.x + p.y * p.y,
        }
    }
}

/// Non-vertical plane `z = a·x + b·y + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LiftedPlane {
    /// Height of the lifted point above the plane. Equals the power of the
    /// original point with respect to the circle the plane encodes.
    pub fn residual(&self, p: &LiftedPoint) -> f64 {
        p.z - (self.a * p.x + self.b * p.y + self.c)
    }

    /// Recover the circle; `None` if the plane lies entirely above the
    /// paraboloid (negative squared radius).
    pub fn to_circle(&self, encloses: Enclosed) -> Option<SeparatingCircle> {
        let center = Point::new(self.a / 2.0, self.b / 2.0);
        let r2 = self.c + center.norm_sq();
        (r2 >= 0.0).then(|| SeparatingCircle {
            center,
            radius: r2.sqrt(),
            encloses,
        })
    }
}

/// Power tolerance for a point configuration whose largest coordinate
/// magnitude (after centring) is `scale`.
pub fn power_tolerance(scale: f64) -> f64 {
    let s = 1.0 + scale;
    EPSILON * s * s
}

/// Decide whether `inner` and `outer` are circularly separable in either
/// orientation. Returns the smallest witness for the first orientation that
/// works, trying `inner` enclosed first.
pub fn is_circular_separable(
    inner: &[Point],
    outer: &[Point],
) -> Result<Option<SeparatingCircle>, SeparabilityError> {
    check_nonempty(inner, outer)?;
    Ok(solve_oriented(inner, outer, Enclosed::Inner)
        .or_else(|| solve_oriented(inner, outer, Enclosed::Outer)))
}

/// Smallest circle enclosing `inner` and excluding `outer`.
pub fn smallest_separating_circle(
    inner: &[Point],
    outer: &[Point],
) -> Result<SeparatingCircle, SeparabilityError> {
    smallest_separating_circle_oriented(inner, outer, Enclosed::Inner)
}

/// Smallest separating circle with an explicit choice of the enclosed set.
pub fn smallest_separating_circle_oriented(
    inner: &[Point],
    outer: &[Point],
    encloses: Enclosed,
) -> Result<SeparatingCircle, SeparabilityError> {
    check_nonempty(inner, outer)?;
    solve_oriented(inner, outer, encloses).ok_or(SeparabilityError::NotSeparable)
}

fn check_nonempty(inner: &[Point], outer: &[Point]) -> Result<(), SeparabilityError> {
    if inner.is_empty() {
        return Err(SeparabilityError::EmptyInput("inner"));
    }
    if outer.is_empty() {
        return Err(SeparabilityError::EmptyInput("outer"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Constraint {
    p: Point,
    inside: bool,
}

#[derive(Debug, Clone, Copy)]
struct Disk {
    center: Point,
    r2: f64,
}

impl Disk {
    fn point(p: Point) -> Self {
        Disk { center: p, r2: 0.0 }
    }

    #[inline]
    fn violated_by(&self, c: &Constraint, tol: f64) -> bool {
        let power = (c.p - self.center).norm_sq() - self.r2;
        if c.inside {
            power > tol
        } else {
            power < -tol
        }
    }
}

fn solve_oriented(inner: &[Point], outer: &[Point], encloses: Enclosed) -> Option<SeparatingCircle> {
    let (enclosed, excluded) = match encloses {
        Enclosed::Inner => (inner, outer),
        Enclosed::Outer => (outer, inner),
    };
    let anchor = *enclosed.first()?;

    // Work relative to the first enclosed point: keeps magnitudes small and
    // makes the result translation equivariant.
    let mut constraints: Vec<Constraint> = enclosed[1..]
        .iter()
        .map(|&p| Constraint { p: p - anchor, inside: true })
        .chain(excluded.iter().map(|&p| Constraint { p: p - anchor, inside: false }))
        .collect();
    let scale = constraints.iter().map(|c| c.p.max_abs()).fold(0.0, f64::max);
    let tol = power_tolerance(scale);

    constraints.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    constraints.insert(0, Constraint { p: Point::ORIGIN, inside: true });

    let disk = minimal_disk(&constraints, tol)?;
    Some(SeparatingCircle {
        center: disk.center + anchor,
        radius: disk.r2.max(0.0).sqrt(),
        encloses,
    })
}

/// `constraints[0]` must be an enclosed point.
fn minimal_disk(constraints: &[Constraint], tol: f64) -> Option<Disk> {
    let mut disk = Disk::point(constraints[0].p);
    for i in 1..constraints.len() {
        if disk.violated_by(&constraints[i], tol) {
            disk = disk_through_one(constraints[i].p, &constraints[..i], tol)?;
        }
    }
    Some(disk)
}

fn disk_through_one(a: Point, prefix: &[Constraint], tol: f64) -> Option<Disk> {
    let mut disk = Disk::point(a);
    for j in 0..prefix.len() {
        if disk.violated_by(&prefix[j], tol) {
            disk = disk_through_two(a, prefix[j].p, &prefix[..j], tol)?;
        }
    }
    Some(disk)
}

/// Smallest disk with `a` and `b` on its boundary satisfying `prefix`.
///
/// Centre is `mid + t·n` with `n ⟂ (b − a)`; the power of any point is affine
/// in `t`, so each constraint cuts the line of centres to a half-line.
fn disk_through_two(a: Point, b: Point, prefix: &[Constraint], tol: f64) -> Option<Disk> {
    let chord = b - a;
    let n = chord.perp();
    let n2 = n.norm_sq();
    if n2 == 0.0 {
        return disk_through_one(a, prefix, tol);
    }
    let mid = (a + b) * 0.5;
    let d2 = chord.norm_sq() * 0.25;

    // Tolerant bounds decide feasibility; exact bounds place the optimum.
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let (mut lo0, mut hi0) = (f64::NEG_INFINITY, f64::INFINITY);
    for c in prefix {
        let u = mid - c.p;
        let slope = 2.0 * n.dot(u);
        let base = u.norm_sq() - d2;
        let degenerate = slope.abs() <= 16.0 * f64::EPSILON * (n2.sqrt() * u.norm());
        // inside: base + slope·t ≤ tol; outside: −(base + slope·t) ≤ tol
        let (base, slope) = if c.inside { (base, slope) } else { (-base, -slope) };
        if degenerate {
            if base > tol {
                return None;
            }
        } else if slope > 0.0 {
            hi = hi.min((tol - base) / slope);
            hi0 = hi0.min(-base / slope);
        } else {
            lo = lo.max((tol - base) / slope);
            lo0 = lo0.max(-base / slope);
        }
        if lo > hi {
            return None;
        }
    }
    let t = 0.0_f64.max(lo0).min(hi0).max(lo).min(hi);
    Some(Disk {
        center: mid + n * t,
        r2: d2 + t * t * n2,
    })
}
