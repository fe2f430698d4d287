//! Point-set families for sweeps: a random density grid and structured sets
//! that sit at the extremes of the bounds.

use std::sync::Arc;

use ffgeom::constructions;
use ffgeom::geometry::{PointSet, Space};
use ffgeom::Fq;
use rand::Rng;

/// A named pair of sets.
#[derive(Clone, Debug)]
pub struct SetPair {
    pub family: String,
    pub a: PointSet,
    pub b: PointSet,
}

impl SetPair {
    fn new(family: impl Into<String>, a: PointSet, b: PointSet) -> SetPair {
        SetPair { family: family.into(), a, b }
    }

    /// The same pair with `|A| <= |B|`.
    pub fn ordered(mut self) -> SetPair {
        if self.a.len() > self.b.len() {
            std::mem::swap(&mut self.a, &mut self.b);
        }
        self
    }
}

/// Densities `q^{-d (1 - (t+1)/(n+1))}`, from about one point up to most of the space.
pub fn density_grid(space: &Space, n: usize) -> Vec<f64> {
    let qd = space.size() as f64;
    (0..n).map(|t| qd.powf(-(1.0 - (t + 1) as f64 / (n + 1) as f64)).min(0.9)).collect()
}

/// Random pairs with independent densities from the grid.
pub fn random_pairs<R: Rng>(space: &Arc<Space>, n: usize, rng: &mut R) -> Vec<SetPair> {
    let grid = density_grid(space, n);
    (0..n)
        .map(|t| {
            let a = PointSet::random(space, grid[t], rng);
            let b = PointSet::random(space, grid[rng.gen_range(0..n)], rng);
            SetPair::new(format!("random-{t}"), a, b)
        })
        .collect()
}

/// `F_q^{d-1} x X` with `X = {0, ..., k-1}` in the last coordinate.
pub fn strip(space: &Arc<Space>, k: usize) -> PointSet {
    let d = space.dim();
    let xs: Vec<Fq> = (0..k).map(|i| space.field().from_int(i as i64)).collect();
    PointSet::from_predicate(space, |i| xs.contains(&space.decode(i)[d - 1]))
}

/// The span of the first `j` coordinate vectors.
pub fn coordinate_subspace(space: &Arc<Space>, j: usize) -> PointSet {
    PointSet::from_predicate(space, |i| space.decode(i)[j..].iter().all(|c| c.is_zero()))
}

/// Structured pairs: strips of width about `q/3` and `q/4`, the widest strip
/// whose difference set `F_q^{d-1} x {-(k-1)..k-1}` is under `q^d / 2`, the first
/// coordinate line, a sphere, the full space, and the lattice constructions
/// where isotropic vectors exist.
pub fn structured_pairs(space: &Arc<Space>) -> Vec<SetPair> {
    let q = space.q();
    let p = space.field().p() as usize;
    let mut out = Vec::new();
    let third = q.div_ceil(3).min(p);
    let quarter = (q / 4).max(1).min(p);
    out.push(SetPair::new("strip-third", strip(space, third), strip(space, third)));
    out.push(SetPair::new("strip-quarter", strip(space, quarter), strip(space, quarter)));
    // 2k - 1 < q/2
    let narrow = ((q + 2) / 4).max(1).min(p);
    out.push(SetPair::new("strip-narrow", strip(space, narrow), strip(space, narrow)));
    let line = coordinate_subspace(space, 1);
    out.push(SetPair::new("line", line.clone(), line.clone()));
    out.push(SetPair::new("line-strip", line, strip(space, third)));
    let sphere = PointSet::sphere(space, Fq::ONE);
    out.push(SetPair::new("sphere", sphere.clone(), sphere));
    out.push(SetPair::new("full", PointSet::full(space), PointSet::full(space)));
    if let Ok(v) = constructions::lattice_vectors(space) {
        if let Ok(x) = constructions::arithmetic_progression(space.field(), third) {
            if let Ok((a, b)) = constructions::build_ap_lattice_sets(space, &x, &v) {
                out.push(SetPair::new("ap-lattice", a, b));
            }
            if let Ok((a, b)) = constructions::build_small_large_sets(space, &x, &v) {
                out.push(SetPair::new("small-large", a, b));
            }
        }
    }
    out
}
