//! Fixtures shared by the benchmarks in `benches/`.

use mdca_core::{catalog_shape, gauss_discretize, trace_boundary, DigitalCurve, GridSpec, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Boundary of a catalog shape digitized at pixel size `h`.
pub fn digitized(name: &str, h: f64) -> DigitalCurve {
    let shape = catalog_shape(name).expect("catalog shape");
    let spec = GridSpec::covering(shape.bounds(), h).expect("grid");
    let pixels = gauss_discretize(shape.as_ref(), &spec).expect("pixels");
    trace_boundary(&pixels).expect("boundary")
}

/// Deterministic separable inner/outer point sets: `n` distinct points of the
/// `k × k` lattice, split by a disk of radius `k/3` about the lattice centre.
pub fn lattice_split(n: usize, k: i64, seed: u64) -> (Vec<Point>, Vec<Point>) {
    assert!(n as i64 <= k * k, "not enough lattice points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Point> = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::new(rng.gen_range(0..k) as f64, rng.gen_range(0..k) as f64);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let c = Point::new((k - 1) as f64 / 2.0, (k - 1) as f64 / 2.0);
    points.into_iter().partition(|p| p.distance(c) <= k as f64 / 3.0)
}
