//! Pixel grid at resolution `h`, Gauss discretization of implicit shapes and
//! binary image ingestion.
//!
//! Pixel `(i, j)` is the closed square of side `h` centred at its grid point
//! `origin + ((i + ½)h, (j + ½)h)`. Grid vertices are addressed by integer
//! coordinates in units of `h`: vertex `(a, b)` sits at `origin + (a·h, b·h)`,
//! so pixel `(i, j)` spans vertices `(i, j)` to `(i + 1, j + 1)`.

mod pnm;

pub use pnm::{load_binary_image, parse_binary_image, PnmError};

use crate::geom::{BoundingBox, Point};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    InvalidSpec(String),
    #[error("pixel ({i}, {j}) of the discretization touches the grid border")]
    BorderContact { i: usize, j: usize },
}

/// Geometry of an `h`-resolution pixel grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub h: f64,
    pub origin: Point,
    pub width: usize,
    pub height: usize,
}

/// Pixels of blank border kept around a shape's bounding box.
const COVER_MARGIN: i64 = 2;

impl GridSpec {
    pub fn new(h: f64, origin: Point, width: usize, height: usize) -> Result<Self, GridError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(GridError::InvalidSpec(format!("pixel size must be positive, got {h}")));
        }
        if width == 0 || height == 0 {
            return Err(GridError::InvalidSpec(format!(
                "grid must be at least 1x1, got {width}x{height}"
            )));
        }
        Ok(GridSpec { h, origin, width, height })
    }

    /// Smallest grid whose grid points lie on the lattice `h·ℤ²` and which
    /// covers `bounds` with a blank margin of two pixels.
    pub fn covering(bounds: BoundingBox, h: f64) -> Result<Self, GridError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(GridError::InvalidSpec(format!("pixel size must be positive, got {h}")));
        }
        let i_min = (bounds.min.x / h).floor() as i64 - COVER_MARGIN;
        let i_max = (bounds.max.x / h).ceil() as i64 + COVER_MARGIN;
        let j_min = (bounds.min.y / h).floor() as i64 - COVER_MARGIN;
        let j_max = (bounds.max.y / h).ceil() as i64 + COVER_MARGIN;
        let origin = Point::new((i_min as f64 - 0.5) * h, (j_min as f64 - 0.5) * h);
        GridSpec::new(h, origin, (i_max - i_min + 1) as usize, (j_max - j_min + 1) as usize)
    }

    /// Centre of pixel `(i, j)`.
    #[inline]
    pub fn grid_point(&self, i: usize, j: usize) -> Point {
        self.origin + Point::new((i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h)
    }

    /// Position of the grid vertex with integer coordinates `(a, b)`.
    #[inline]
    pub fn vertex_position(&self, a: i64, b: i64) -> Point {
        self.origin + Point::new(a as f64 * self.h, b as f64 * self.h)
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn in_bounds(&self, i: i64, j: i64) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height
    }

    pub fn is_border(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.width || j + 1 == self.height
    }
}

/// A planar region given implicitly: `p ∈ X ⇔ value(p) ≤ 0`.
pub trait ImplicitShape: Send + Sync {
    fn name(&self) -> &str;

    fn value(&self, p: Point) -> f64;

    /// `(g_x, g_y)`.
    fn gradient(&self, p: Point) -> Point;

    /// `[g_xx, g_xy, g_yy]`, or `None` where `g` is not twice differentiable.
    fn hessian(&self, p: Point) -> Option<[f64; 3]>;

    /// A box containing the whole region.
    fn bounds(&self) -> BoundingBox;

    /// `false` for shapes with corners or kinks on the boundary.
    fn is_smooth(&self) -> bool {
        true
    }

    /// Boundary points where the curvature is undefined.
    fn corners(&self) -> &[Point] {
        &[]
    }

    /// Closed-form closest boundary point, when the shape has one.
    fn exact_projection(&self, _p: Point) -> Option<Point> {
        None
    }
}

/// The foreground pixels of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelSet {
    spec: GridSpec,
    mask: Vec<bool>,
    count: usize,
}

impl PixelSet {
    pub fn empty(spec: GridSpec) -> Self {
        PixelSet {
            spec,
            mask: vec![false; spec.pixel_count()],
            count: 0,
        }
    }

    /// Build from pixel indices; indices outside the grid are rejected.
    pub fn from_indices<I>(spec: GridSpec, indices: I) -> Result<Self, GridError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = PixelSet::empty(spec);
        for (i, j) in indices {
            if i >= spec.width || j >= spec.height {
                return Err(GridError::InvalidSpec(format!(
                    "pixel ({i}, {j}) outside {}x{} grid",
                    spec.width, spec.height
                )));
            }
            set.insert(i, j);
        }
        Ok(set)
    }

    pub(crate) fn insert(&mut self, i: usize, j: usize) {
        let k = j * self.spec.width + i;
        if !self.mask[k] {
            self.mask[k] = true;
            self.count += 1;
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Membership test; out-of-grid indices are background.
    #[inline]
    pub fn contains(&self, i: i64, j: i64) -> bool {
        self.spec.in_bounds(i, j) && self.mask[j as usize * self.spec.width + i as usize]
    }

    /// Foreground pixels in row-major order (`j` outer, `i` inner).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.spec.width;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &set)| set)
            .map(move |(k, _)| (k % w, k / w))
    }
}

/// Gauss discretization: the pixels whose centres satisfy `g ≤ 0`.
pub fn gauss_discretize(shape: &dyn ImplicitShape, spec: &GridSpec) -> Result<PixelSet, GridError> {
    let mut set = PixelSet::empty(*spec);
    for j in 0..spec.height {
        for i in 0..spec.width {
            if shape.value(spec.grid_point(i, j)) <= 0.0 {
                if spec.is_border(i, j) {
                    return Err(GridError::BorderContact { i, j });
                }
                set.insert(i, j);
            }
        }
    }
    Ok(set)
}
