//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use mdca_core::boundary::{trace_boundary, DigitalCurve};
use mdca_core::grid::{gauss_discretize, GridSpec, ImplicitShape, PixelSet};
use mdca_core::Point;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn digitize(shape: &dyn ImplicitShape, h: f64) -> (PixelSet, DigitalCurve) {
    let spec = GridSpec::covering(shape.bounds(), h).unwrap();
    let px = gauss_discretize(shape, &spec).unwrap();
    let curve = trace_boundary(&px).unwrap();
    (px, curve)
}

/// Oracle tolerance on distances.
fn tol(points: &[Point]) -> f64 {
    let scale = points.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max);
    1e-7 * (1.0 + scale)
}

fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-12 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    Some((Point::new(a.x + ux, a.y + uy), (ux * ux + uy * uy).sqrt()))
}

fn circle_separates(m: Point, r: f64, enclosed: &[Point], excluded: &[Point], eps: f64) -> bool {
    enclosed.iter().all(|p| p.distance(m) <= r + eps) && excluded.iter().all(|q| q.distance(m) >= r - eps)
}

/// Every circle determined by at most three points of the union: point
/// circles at enclosed points, diametral circles of pairs, circumcircles of
/// triples.
fn candidate_circles(enclosed: &[Point], excluded: &[Point]) -> Vec<(Point, f64)> {
    let all: Vec<Point> = enclosed.iter().chain(excluded).copied().collect();
    let mut out: Vec<(Point, f64)> = enclosed.iter().map(|&p| (p, 0.0)).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let m = Point::new((all[i].x + all[j].x) / 2.0, (all[i].y + all[j].y) / 2.0);
            out.push((m, all[i].distance(all[j]) / 2.0));
            for k in j + 1..all.len() {
                if let Some(c) = circumcircle(all[i], all[j], all[k]) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Smallest circle enclosing `enclosed` and excluding `excluded`, by
/// exhaustive search over support sets.
pub fn oracle_smallest(enclosed: &[Point], excluded: &[Point]) -> Option<(Point, f64)> {
    let all: Vec<Point> = enclosed.iter().chain(excluded).copied().collect();
    let eps = tol(&all);
    candidate_circles(enclosed, excluded)
        .into_iter()
        .filter(|&(m, r)| circle_separates(m, r, enclosed, excluded, eps))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Separation by a line, understood as the limit of ever larger circles: the
/// enclosed side is closed, and points on the line itself must be split as a
/// large circle's chord would split them (enclosed points form one block
/// containing no excluded point).
pub fn oracle_line_separates(enclosed: &[Point], excluded: &[Point]) -> bool {
    let all: Vec<Point> = enclosed.iter().chain(excluded).copied().collect();
    let eps = tol(&all);
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let (a, b) = (all[i], all[j]);
            let d = Point::new(b.x - a.x, b.y - a.y);
            let len = d.norm();
            for sign in [1.0, -1.0] {
                let side = |p: Point| sign * (d.x * (p.y - a.y) - d.y * (p.x - a.x)) / len;
                let along = |p: Point| (d.x * (p.x - a.x) + d.y * (p.y - a.y)) / len;
                if enclosed.iter().any(|&p| side(p) < -eps) || excluded.iter().any(|&q| side(q) > eps) {
                    continue;
                }
                let on_in: Vec<f64> = enclosed.iter().filter(|&&p| side(p).abs() <= eps).map(|&p| along(p)).collect();
                let on_out: Vec<f64> = excluded.iter().filter(|&&q| side(q).abs() <= eps).map(|&q| along(q)).collect();
                if on_in.is_empty() {
                    return true;
                }
                let lo = on_in.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = on_in.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if on_out.iter().all(|&t| t <= lo + eps || t >= hi - eps) {
                    return true;
                }
            }
        }
    }
    false
}

/// Oracle decision in one orientation.
pub fn oracle_separable_oriented(enclosed: &[Point], excluded: &[Point]) -> bool {
    oracle_smallest(enclosed, excluded).is_some() || oracle_line_separates(enclosed, excluded)
}

/// Oracle decision in either orientation.
pub fn oracle_separable(inner: &[Point], outer: &[Point]) -> bool {
    oracle_separable_oriented(inner, outer) || oracle_separable_oriented(outer, inner)
}

/// Deduplicated inner/outer pixel centres of edges `i ..= i + len − 1`.
pub fn arc_points(curve: &DigitalCurve, i: usize, len: usize) -> (Vec<Point>, Vec<Point>) {
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for off in 0..len {
        let e = curve.edge(i + off);
        inner.push(e.inner);
        outer.push(e.outer);
    }
    inner.sort_unstable();
    inner.dedup();
    outer.sort_unstable();
    outer.dedup();
    let to_pts = |v: Vec<(i64, i64)>| v.into_iter().map(|(i, j)| Point::new(i as f64, j as f64)).collect();
    (to_pts(inner), to_pts(outer))
}

/// Oracle DCA test on edges `i ..= i + len − 1`.
pub fn oracle_dca(curve: &DigitalCurve, i: usize, len: usize) -> bool {
    let (inner, outer) = arc_points(curve, i, len);
    oracle_separable(&inner, &outer)
}

/// Signed area of the closed vertex polygon, in vertex units.
pub fn shoelace(curve: &DigitalCurve) -> f64 {
    curve
        .edges()
        .iter()
        .map(|e| (e.start.x * e.end.y - e.end.x * e.start.y) as f64)
        .sum::<f64>()
        / 2.0
}

/// Sum of signed quarter turns along the curve.
pub fn turn_sum(curve: &DigitalCurve) -> i64 {
    let n = curve.len();
    (0..n)
        .map(|k| {
            let a = curve.edge(k).direction();
            let b = curve.edge(k + 1).direction();
            a.0 * b.1 - a.1 * b.0
        })
        .sum()
}

/// Ray-casting point in polygon on the traced vertex loop (vertex units).
pub fn encloses(curve: &DigitalCurve, x: f64, y: f64) -> bool {
    let mut inside = false;
    for e in curve.edges() {
        let (x0, y0, x1, y1) = (e.start.x as f64, e.start.y as f64, e.end.x as f64, e.end.y as f64);
        if (y0 > y) != (y1 > y) {
            let xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0);
            if x < xc {
                inside = !inside;
            }
        }
    }
    inside
}

/// 4-connected components by flood fill.
pub fn components(pixels: &PixelSet) -> Vec<Vec<(i64, i64)>> {
    use std::collections::HashSet;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, j) in pixels.iter() {
        let start = (i as i64, j as i64);
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some((a, b)) = stack.pop() {
            for (da, db) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let q = (a + da, b + db);
                if pixels.contains(q.0, q.1) && seen.insert(q) {
                    comp.push(q);
                    stack.push(q);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// The pixel set plus every background pixel not 8-connected to the grid
/// border.
pub fn fill_holes(pixels: &PixelSet) -> PixelSet {
    let spec = *pixels.spec();
    let (w, h) = (spec.width as i64, spec.height as i64);
    let mut outside = vec![false; (w * h) as usize];
    let mut stack: Vec<(i64, i64)> = (0..w)
        .flat_map(|i| [(i, 0), (i, h - 1)])
        .chain((0..h).flat_map(|j| [(0, j), (w - 1, j)]))
        .filter(|&(i, j)| !pixels.contains(i, j))
        .collect();
    for &(i, j) in &stack {
        outside[(j * w + i) as usize] = true;
    }
    while let Some((i, j)) = stack.pop() {
        for di in -1..=1 {
            for dj in -1..=1 {
                let (a, b) = (i + di, j + dj);
                if a >= 0 && b >= 0 && a < w && b < h && !pixels.contains(a, b) && !outside[(b * w + a) as usize] {
                    outside[(b * w + a) as usize] = true;
                    stack.push((a, b));
                }
            }
        }
    }
    let filled = (0..w)
        .flat_map(|i| (0..h).map(move |j| (i, j)))
        .filter(|&(i, j)| !outside[(j * w + i) as usize])
        .map(|(i, j)| (i as usize, j as usize));
    PixelSet::from_indices(spec, filled).unwrap()
}
