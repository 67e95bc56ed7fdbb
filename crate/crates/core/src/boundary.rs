//! Boundary of a Gauss discretization as a closed digital curve of grid edges.
//!
//! The curve is traversed counterclockwise, so the inner pixel of every edge
//! lies on the left of its direction. When the boundary passes a saddle
//! vertex (two object pixels touching only at a corner) the trace turns left,
//! which treats the object as 4-connected and the background as 8-connected.

use crate::geom::Point;
use crate::grid::{GridSpec, PixelSet};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum BoundaryError {
    #[error("pixel set is empty")]
    EmptyInput,
    #[error("boundary trace did not close into a simple curve")]
    NotSimple,
    #[error("edge index {index} out of range for a curve of {len} edges")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Grid vertex in integer units of `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridVertex {
    pub x: i64,
    pub y: i64,
}

impl GridVertex {
    pub const fn new(x: i64, y: i64) -> Self {
        GridVertex { x, y }
    }
}

/// Pixel index `(i, j)`.
pub type Pixel = (i64, i64);

/// Axis-aligned unit edge separating an inner from an outer pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEdge {
    pub start: GridVertex,
    pub end: GridVertex,
    pub inner: Pixel,
    pub outer: Pixel,
}

impl GridEdge {
    /// Edge leaving `start` in unit direction `(dx, dy)`; inner pixel on the left.
    fn leaving(start: GridVertex, (dx, dy): (i64, i64)) -> Self {
        let (left, right) = flanking_pixels(start, (dx, dy));
        GridEdge {
            start,
            end: GridVertex::new(start.x + dx, start.y + dy),
            inner: left,
            outer: right,
        }
    }

    pub fn direction(&self) -> (i64, i64) {
        (self.end.x - self.start.x, self.end.y - self.start.y)
    }
}

/// Pixels to the left and right of the unit edge leaving `v` along `d`.
fn flanking_pixels(v: GridVertex, (dx, dy): (i64, i64)) -> (Pixel, Pixel) {
    // Doubled coordinates: edge midpoint 2v + d, left normal (−dy, dx).
    let mx = 2 * v.x + dx;
    let my = 2 * v.y + dy;
    let left = ((mx - dy - 1).div_euclid(2), (my + dx - 1).div_euclid(2));
    let right = ((mx + dy - 1).div_euclid(2), (my - dx - 1).div_euclid(2));
    (left, right)
}

/// Closed digital curve `(e_0, …, e_{N−1})`; all index arithmetic is mod `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitalCurve {
    edges: Vec<GridEdge>,
    spec: GridSpec,
}

impl DigitalCurve {
    /// Wrap an edge cycle. Consecutive edges must share a vertex.
    pub fn new(edges: Vec<GridEdge>, spec: GridSpec) -> Result<Self, BoundaryError> {
        let n = edges.len();
        if n == 0 {
            return Err(BoundaryError::EmptyInput);
        }
        for k in 0..n {
            if edges[k].end != edges[(k + 1) % n].start {
                return Err(BoundaryError::NotSimple);
            }
        }
        Ok(DigitalCurve { edges, spec })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        true
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn edges(&self) -> &[GridEdge] {
        &self.edges
    }

    /// Edge `k mod N`.
    #[inline]
    pub fn edge(&self, k: usize) -> &GridEdge {
        &self.edges[k % self.edges.len()]
    }

    /// Midpoint of edge `k` in world coordinates.
    pub fn midpoint(&self, k: usize) -> Point {
        let e = self.edge(k);
        let a = self.spec.vertex_position(e.start.x, e.start.y);
        let b = self.spec.vertex_position(e.end.x, e.end.y);
        (a + b) * 0.5
    }

    /// Cyclic distance `min(|j − i|, N − |j − i|)` between edges.
    pub fn edge_distance(&self, i: usize, j: usize) -> Result<usize, BoundaryError> {
        let n = self.len();
        for index in [i, j] {
            if index >= n {
                return Err(BoundaryError::IndexOutOfRange { index, len: n });
            }
        }
        Ok(cyclic_distance(i, j, n))
    }
}

#[inline]
pub(crate) fn cyclic_distance(i: usize, j: usize, n: usize) -> usize {
    let d = i.abs_diff(j);
    d.min(n - d)
}

/// Forward offset from edge `i` to edge `j` along the curve (`0..N`).
#[inline]
pub fn cyclic_span(i: usize, j: usize, n: usize) -> usize {
    (j + n - i % n) % n
}

/// Largest 4-connected component; ties go to the component whose
/// lexicographically smallest `(i, j)` pixel comes first.
#[allow(clippy::type_complexity)]
pub fn largest_component(pixels: &PixelSet) -> Result<PixelSet, BoundaryError> {
    let spec = *pixels.spec();
    let (w, hgt) = (spec.width, spec.height);
    let mut label = vec![usize::MAX; w * hgt];
    // (size, first pixel, members) of the largest component so far
    let mut best: Option<(usize, Pixel, Vec<(usize, usize)>)> = None;
    let mut next_label = 0;

    for (i0, j0) in pixels.iter() {
        if label[j0 * w + i0] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        let mut queue = VecDeque::from([(i0, j0)]);
        label[j0 * w + i0] = next_label;
        while let Some((i, j)) = queue.pop_front() {
            members.push((i, j));
            for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if pixels.contains(ni, nj) {
                    let k = nj as usize * w + ni as usize;
                    if label[k] == usize::MAX {
                        label[k] = next_label;
                        queue.push_back((ni as usize, nj as usize));
                    }
                }
            }
        }
        next_label += 1;
        let seed = members
            .iter()
            .map(|&(i, j)| (i as i64, j as i64))
            .min()
            .expect("component has a pixel");
        let better = match &best {
            None => true,
            Some((size, best_seed, _)) => members.len() > *size || (members.len() == *size && seed < *best_seed),
        };
        if better {
            best = Some((members.len(), seed, members));
        }
    }

    let (_, _, members) = best.ok_or(BoundaryError::EmptyInput)?;
    PixelSet::from_indices(spec, members).map_err(|_| BoundaryError::NotSimple)
}

/// Trace the outer boundary of the largest 4-connected component,
/// counterclockwise, starting at the left edge of its lexicographically
/// smallest pixel. Holes are not traced; the loop encloses the component
/// together with them.
pub fn trace_boundary(pixels: &PixelSet) -> Result<DigitalCurve, BoundaryError> {
    let component = largest_component(pixels)?;
    let (si, sj) = component
        .iter()
        .map(|(i, j)| (i as i64, j as i64))
        .min()
        .ok_or(BoundaryError::EmptyInput)?;

    let inside = |p: Pixel| component.contains(p.0, p.1);
    let is_boundary = |v: GridVertex, d: (i64, i64)| {
        let (l, r) = flanking_pixels(v, d);
        inside(l) && !inside(r)
    };

    let first = GridEdge::leaving(GridVertex::new(si, sj + 1), (0, -1));
    debug_assert!(inside(first.inner) && !inside(first.outer));
    let limit = 4 * component.len() + 4;
    let mut edges = vec![first];
    loop {
        let last = *edges.last().expect("non-empty");
        let (dx, dy) = last.direction();
        // left turn, straight, right turn
        let candidates = [(-dy, dx), (dx, dy), (dy, -dx)];
        let dir = candidates
            .into_iter()
            .find(|&d| is_boundary(last.end, d))
            .ok_or(BoundaryError::NotSimple)?;
        let next = GridEdge::leaving(last.end, dir);
        if next == first {
            break;
        }
        edges.push(next);
        if edges.len() > limit {
            return Err(BoundaryError::NotSimple);
        }
    }
    DigitalCurve::new(edges, *pixels.spec())
}
