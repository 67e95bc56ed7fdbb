//! Maximal digital circular arcs of a closed digital curve.
//!
//! A range of edges is a digital circular arc (DCA) when the centres of its
//! inner pixels and of its outer pixels are circularly separable. Because
//! separability survives removing points, the longest DCA starting at edge
//! `s` ends no earlier than the longest one starting at `s − 1`. All maximal
//! arcs are therefore found by one sweep with two pointers: advance the start,
//! keep the end, and grow the end while the range stays separable. The arc
//! starting at `s` is maximal exactly when the arc starting at `s − 1` cannot
//! reach past its end.

use crate::boundary::{cyclic_span, DigitalCurve};
use crate::geom::Point;
use crate::separability::{smallest_separating_circle_oriented, Enclosed, SeparatingCircle};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MdcaError {
    #[error("curve of {0} edges is too short (need at least 4)")]
    DegenerateCurve(usize),
    #[error("edge index {index} out of range for a curve of {len} edges")]
    IndexOutOfRange { index: usize, len: usize },
}

/// One maximal arc: edges `start ..= end` (cyclic) and its smallest
/// separating circle in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mdca {
    pub start: usize,
    pub end: usize,
    /// Number of edges, `span + 1`.
    pub len: usize,
    pub circle: SeparatingCircle,
    /// Discrete curvature `1/R`.
    pub curvature: f64,
}

impl Mdca {
    /// Cyclic offset from the start edge to the end edge.
    pub fn span(&self) -> usize {
        self.len - 1
    }

    /// Offset of edge `k` from the start, if the arc contains it.
    pub fn offset_of(&self, k: usize, n: usize) -> Option<usize> {
        let off = cyclic_span(self.start, k % n, n);
        (off < self.len).then_some(off)
    }

    pub fn contains(&self, k: usize, n: usize) -> bool {
        self.offset_of(k, n).is_some()
    }
}

/// All maximal arcs of a curve, ordered by start edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdcaSet {
    pub arcs: Vec<Mdca>,
    pub curve_len: usize,
}

impl MdcaSet {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Mdca> {
        self.arcs.iter()
    }

    /// `(start, end)` of every arc.
    pub fn ranges(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().map(|a| (a.start, a.end)).collect()
    }
}

/// Pixel-centre point sets of edge ranges, deduplicated, in pixel units.
struct ArcProbe<'c> {
    curve: &'c DigitalCurve,
    inner: Vec<(i64, i64)>,
    outer: Vec<(i64, i64)>,
    inner_pts: Vec<Point>,
    outer_pts: Vec<Point>,
}

impl<'c> ArcProbe<'c> {
    fn new(curve: &'c DigitalCurve) -> Self {
        ArcProbe {
            curve,
            inner: Vec::new(),
            outer: Vec::new(),
            inner_pts: Vec::new(),
            outer_pts: Vec::new(),
        }
    }

    fn load(&mut self, start: usize, len: usize) {
        self.inner.clear();
        self.outer.clear();
        for off in 0..len {
            let e = self.curve.edge(start + off);
            self.inner.push(e.inner);
            self.outer.push(e.outer);
        }
        for (set, pts) in [(&mut self.inner, &mut self.inner_pts), (&mut self.outer, &mut self.outer_pts)] {
            set.sort_unstable();
            set.dedup();
            pts.clear();
            pts.extend(set.iter().map(|&(i, j)| Point::new(i as f64, j as f64)));
        }
    }

    fn oriented(&self, encloses: Enclosed) -> Option<SeparatingCircle> {
        smallest_separating_circle_oriented(&self.inner_pts, &self.outer_pts, encloses).ok()
    }

    /// Is the range a DCA (either orientation)?
    fn separable(&mut self, start: usize, len: usize) -> bool {
        self.load(start, len);
        self.oriented(Enclosed::Inner).is_some() || self.oriented(Enclosed::Outer).is_some()
    }

    /// Circle reported for an arc: the feasible orientation, or the flatter
    /// one when a line separates and both orientations are feasible.
    fn arc_circle(&mut self, start: usize, len: usize) -> Option<SeparatingCircle> {
        self.load(start, len);
        match (self.oriented(Enclosed::Inner), self.oriented(Enclosed::Outer)) {
            (Some(a), Some(b)) => Some(if b.radius > a.radius { b } else { a }),
            (a, b) => a.or(b),
        }
    }
}

/// Circle in pixel-index units mapped to world coordinates.
fn to_world(curve: &DigitalCurve, c: SeparatingCircle) -> SeparatingCircle {
    let spec = curve.spec();
    SeparatingCircle {
        center: spec.origin + (c.center + Point::new(0.5, 0.5)) * spec.h,
        radius: c.radius * spec.h,
        encloses: c.encloses,
    }
}

/// Whether edges `i ..= j` (cyclic) form a digital circular arc.
pub fn is_dca(curve: &DigitalCurve, i: usize, j: usize) -> Result<bool, MdcaError> {
    let n = curve.len();
    for index in [i, j] {
        if index >= n {
            return Err(MdcaError::IndexOutOfRange { index, len: n });
        }
    }
    Ok(ArcProbe::new(curve).separable(i, cyclic_span(i, j, n) + 1))
}

/// Smallest separating circle of edges `i ..= j`, in world coordinates.
pub fn arc_circle(curve: &DigitalCurve, i: usize, j: usize) -> Result<Option<SeparatingCircle>, MdcaError> {
    let n = curve.len();
    for index in [i, j] {
        if index >= n {
            return Err(MdcaError::IndexOutOfRange { index, len: n });
        }
    }
    Ok(ArcProbe::new(curve)
        .arc_circle(i, cyclic_span(i, j, n) + 1)
        .map(|c| to_world(curve, c)))
}

/// All maximal digital circular arcs of `curve`.
pub fn compute_mdcas(curve: &DigitalCurve) -> Result<MdcaSet, MdcaError> {
    compute_mdcas_from(curve, 0)
}

/// Same as [`compute_mdcas`], sweeping from edge `seed`. The result does not
/// depend on the seed.
pub fn compute_mdcas_from(curve: &DigitalCurve, seed: usize) -> Result<MdcaSet, MdcaError> {
    let n = curve.len();
    if n < 4 {
        return Err(MdcaError::DegenerateCurve(n));
    }
    if seed >= n {
        return Err(MdcaError::IndexOutOfRange { index: seed, len: n });
    }
    let mut probe = ArcProbe::new(curve);

    // reach[s] = length of the longest DCA starting at edge s
    let mut reach = vec![0usize; n];
    let mut len = 0usize;
    let mut whole = false;
    for k in 0..n {
        let s = (seed + k) % n;
        len = len.saturating_sub(1).max(1);
        while len < n && probe.separable(s, len + 1) {
            len += 1;
        }
        reach[s] = len;
        if len == n {
            whole = true;
            break;
        }
    }

    let mut arcs = Vec::new();
    if whole {
        let circle = probe.arc_circle(0, n).expect("whole curve was separable");
        let circle = to_world(curve, circle);
        arcs.push(Mdca {
            start: 0,
            end: n - 1,
            len: n,
            circle,
            curvature: circle.curvature(),
        });
    } else {
        for s in 0..n {
            let before = reach[(s + n - 1) % n];
            if before <= reach[s] {
                let len = reach[s];
                let circle = probe.arc_circle(s, len).expect("reach is separable");
                let circle = to_world(curve, circle);
                arcs.push(Mdca {
                    start: s,
                    end: (s + len - 1) % n,
                    len,
                    circle,
                    curvature: circle.curvature(),
                });
            }
        }
    }
    Ok(MdcaSet { arcs, curve_len: n })
}
