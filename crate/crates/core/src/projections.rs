//! Linear subspaces in RREF, Grassmannians, coset projections
//! `pi_W(E) = {x + W^perp : (x + W^perp) ∩ E != ∅}`, projection-intersection
//! sweeps, the projection-count bounds, and incidences between affine flats.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldContext, Fq};
use crate::geometry::{PointSet, Space};
use crate::linalg;
use crate::theorems::{Instance, Theorem};

/// Cap on the number of subspaces enumerated at once.
pub const MAX_GRASSMANNIAN: u128 = 1 << 22;

/// An `m`-dimensional subspace of `F_q^d`, stored by its RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    d: usize,
    pivots: Vec<usize>,
    basis: Vec<Vec<Fq>>,
}

impl Subspace {
    /// Span of `rows` in `F_q^d`; dependent rows are allowed.
    pub fn span(field: &FieldContext, d: usize, rows: &[Vec<Fq>]) -> Result<Subspace> {
        for r in rows {
            if r.len() != d {
                return Err(Error::Shape(format!("row of length {} in dimension {d}", r.len())));
            }
            if r.iter().any(|x| x.0 >= field.q()) {
                return Err(Error::Domain("entry outside the field".into()));
            }
        }
        let mut basis = rows.to_vec();
        let pivots = linalg::rref(field, &mut basis);
        Ok(Subspace { d, pivots, basis })
    }

    /// Like [`Subspace::span`] but requires the rows to be independent.
    pub fn new(field: &FieldContext, d: usize, rows: &[Vec<Fq>]) -> Result<Subspace> {
        let s = Subspace::span(field, d, rows)?;
        if s.dim() != rows.len() {
            return Err(Error::Shape(format!("{} rows span a {}-dimensional space", rows.len(), s.dim())));
        }
        Ok(s)
    }

    pub fn full(d: usize) -> Subspace {
        let basis = (0..d)
            .map(|i| (0..d).map(|j| if i == j { Fq::ONE } else { Fq::ZERO }).collect())
            .collect();
        Subspace { d, pivots: (0..d).collect(), basis }
    }

    pub fn zero(d: usize) -> Subspace {
        Subspace { d, pivots: Vec::new(), basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Fq>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, field: &FieldContext, v: &[Fq]) -> bool {
        linalg::in_span(field, &self.basis, &self.pivots, v)
    }

    pub fn is_subspace_of(&self, field: &FieldContext, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(field, b))
    }

    /// `v` reduced so that it vanishes on every pivot column; constant on
    /// cosets `v + W`.
    pub fn reduce(&self, field: &FieldContext, v: &mut [Fq]) {
        linalg::reduce(field, &self.basis, &self.pivots, v);
    }

    /// Basis rows joined by `;`, entries by `,`.
    pub fn serialize(&self) -> String {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span[{}]", self.serialize())
    }
}

/// The Gaussian binomial `[d choose m]_q`.
pub fn gaussian_binomial(q: u128, d: usize, m: usize) -> u128 {
    if m > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..m {
        num *= q.pow((d - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

fn pivot_sets(d: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for c in start..d {
            cur.push(c);
            rec(c + 1, d, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, m, &mut Vec::new(), &mut out);
    out
}

/// All of `G(d, m)`, sorted. Each pivot pattern contributes one subspace per
/// assignment of its free RREF entries.
pub fn enumerate_grassmannian(field: &FieldContext, d: usize, m: usize) -> Result<Vec<Subspace>> {
    if m > d {
        return Err(Error::Domain(format!("no {m}-dimensional subspaces of F_q^{d}")));
    }
    let count = gaussian_binomial(field.q() as u128, d, m);
    if count > MAX_GRASSMANNIAN {
        return Err(Error::Resource(format!("G({d},{m}) has {count} subspaces")));
    }
    let q = field.q() as usize;
    let mut out = Vec::with_capacity(count as usize);
    for pivots in pivot_sets(d, m) {
        let free: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| {
                let pv = pivots.clone();
                ((pv[i] + 1)..d).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut code in 0..total {
            let mut basis = vec![vec![Fq::ZERO; d]; m];
            for (i, &c) in pivots.iter().enumerate() {
                basis[i][c] = Fq::ONE;
            }
            for &(i, c) in &free {
                basis[i][c] = Fq((code % q) as u32);
                code /= q;
            }
            out.push(Subspace { d, pivots: pivots.clone(), basis });
        }
    }
    out.sort();
    Ok(out)
}

/// `W^perp = {x : x . w = 0 for all w in W}`. The dimensions always add up
/// to `d`, including when `W` meets `W^perp`.
pub fn orthogonal_complement(field: &FieldContext, w: &Subspace) -> Subspace {
    let ns = linalg::null_space(field, &w.basis, w.d);
    Subspace::span(field, w.d, &ns).expect("null space rows have the right length")
}

/// Maps each point of the space to the canonical key of its coset `x + W^perp`.
#[derive(Clone, Debug)]
pub struct Projector {
    space: Arc<Space>,
    subspace: Subspace,
    keys: Vec<u32>,
}

impl Projector {
    pub fn new(space: &Arc<Space>, w: &Subspace) -> Result<Projector> {
        if w.ambient_dim() != space.dim() {
            return Err(Error::Shape(format!("subspace of F_q^{} in dimension {}", w.ambient_dim(), space.dim())));
        }
        let field = space.field();
        let perp = orthogonal_complement(field, w);
        let keys = (0..space.size())
            .map(|x| {
                let mut v = space.decode(x);
                perp.reduce(field, &mut v);
                space.encode(&v) as u32
            })
            .collect();
        Ok(Projector { space: space.clone(), subspace: w.clone(), keys })
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn key(&self, x: usize) -> usize {
        self.keys[x] as usize
    }

    pub fn project(&self, e: &PointSet) -> Result<ProjectionImage> {
        if e.space() != &self.space {
            return Err(Error::Shape("point set lives in another space".into()));
        }
        let reps = PointSet::from_indices(&self.space, e.iter().map(|x| self.key(x)))?;
        Ok(ProjectionImage { reps })
    }

    /// Number of points of `e` in each coset, keyed by representative.
    pub fn fibre_counts(&self, e: &PointSet) -> Vec<u32> {
        let mut c = vec![0u32; self.space.size()];
        for x in e.iter() {
            c[self.key(x)] += 1;
        }
        c
    }
}

/// `pi_W(E)` as a set of canonical coset representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionImage {
    reps: PointSet,
}

impl ProjectionImage {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &PointSet {
        &self.reps
    }

    pub fn common(&self, other: &ProjectionImage) -> Result<usize> {
        self.reps.intersection_count(&other.reps)
    }
}

pub fn project(e: &PointSet, w: &Subspace) -> Result<ProjectionImage> {
    Projector::new(e.space(), w)?.project(e)
}

/// `|pi_W(E)|` for each `W` in `subspaces`.
pub fn projection_sizes(e: &PointSet, subspaces: &[Subspace]) -> Result<Vec<usize>> {
    subspaces
        .par_iter()
        .map(|w| Ok(Projector::new(e.space(), w)?.project(e)?.len()))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionRow {
    pub index: usize,
    pub subspace: Subspace,
    pub size_a: usize,
    pub size_b: usize,
    pub common: usize,
    /// Cosets of `pi_W(B)` holding at least `|A| / (100 q^m)` points of `A`.
    pub rich_cosets: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionSweep {
    pub m: usize,
    pub qm: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub rows: Vec<ProjectionRow>,
}

impl ProjectionSweep {
    pub fn grassmannian_size(&self) -> usize {
        self.rows.len()
    }

    /// Subspaces with `|pi_W(A) ∩ pi_W(B)| > q^m / 2`.
    pub fn over_half(&self) -> usize {
        self.rows.iter().filter(|r| 2 * r.common > self.qm).count()
    }

    /// Subspaces with `|pi_W(A) ∩ pi_W(B)| = q^m`.
    pub fn full(&self) -> usize {
        self.rows.iter().filter(|r| r.common == self.qm).count()
    }

    /// Subspaces with `|pi_W(A)| > q^m/10` and `|pi_W(B)| > |B|/10`.
    pub fn both_large(&self) -> usize {
        self.rows.iter().filter(|r| 10 * r.size_a > self.qm && 10 * r.size_b > self.size_b).count()
    }

    /// Subspaces with `|pi_W(A) ∩ pi_W(B)| >= |B| / 10`.
    pub fn common_tenth_of_b(&self) -> usize {
        self.rows.iter().filter(|r| 10 * r.common >= self.size_b).count()
    }

    /// Subspaces with empty common projection.
    pub fn disjoint(&self) -> usize {
        self.rows.iter().filter(|r| r.common == 0).count()
    }

    /// Upper bound `12 q^{(d-m+1)m} / min(|A|, |B|)` on the subspaces where
    /// `pi_W(A)` or `pi_W(B)` has at most `3q^m/4` cosets.
    pub fn small_projection_budget(&self, q: usize, d: usize) -> f64 {
        let s = self.size_a.min(self.size_b).max(1) as f64;
        12.0 * (q as f64).powi(((d - self.m + 1) * self.m) as i32) / s
    }

    /// One line per subspace: index, basis, `|pi_W(A)|`, `|pi_W(B)|`, common.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,basis,proj_a,proj_b,common\n");
        for r in &self.rows {
            s.push_str(&format!("{},\"{}\",{},{},{}\n", r.index, r.subspace.serialize(), r.size_a, r.size_b, r.common));
        }
        s
    }
}

/// `|pi_W(A) ∩ pi_W(B)|` for every `W` in `G(d, m)`, in canonical order.
pub fn projection_intersection_sweep(a: &PointSet, b: &PointSet, m: usize) -> Result<ProjectionSweep> {
    let space = a.space();
    if b.space() != space {
        return Err(Error::Shape("A and B live in different spaces".into()));
    }
    let grass = enumerate_grassmannian(space.field(), space.dim(), m)?;
    sweep_subspaces(a, b, &grass, m)
}

/// The same sweep restricted to the given subspaces.
pub fn sweep_subspaces(a: &PointSet, b: &PointSet, subspaces: &[Subspace], m: usize) -> Result<ProjectionSweep> {
    let space = a.space();
    let qm = space.q().pow(m as u32);
    let threshold = a.len() as f64 / (100.0 * qm as f64);
    let rows = subspaces
        .par_iter()
        .enumerate()
        .map(|(index, w)| {
            if w.dim() != m {
                return Err(Error::Shape(format!("subspace of dimension {} in a sweep over m = {m}", w.dim())));
            }
            let pr = Projector::new(space, w)?;
            let (pa, pb) = (pr.project(a)?, pr.project(b)?);
            let fa = pr.fibre_counts(a);
            let rich_cosets = pb.reps.iter().filter(|&k| fa[k] as f64 >= threshold).count();
            Ok(ProjectionRow { index, subspace: w.clone(), size_a: pa.len(), size_b: pb.len(), common: pa.common(&pb)?, rich_cosets })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectionSweep { m, qm, size_a: a.len(), size_b: b.len(), rows })
}

/// One threshold of the projection-count bound.
#[derive(Clone, Debug, PartialEq)]
pub struct CountCheck {
    pub threshold: f64,
    pub observed: usize,
    pub bound: f64,
}

impl CountCheck {
    pub fn holds(&self) -> bool {
        self.observed as f64 <= self.bound
    }
}

/// `#{W : |pi_W(E)| <= N} <= 4 q^{(d-m)m - m} N` for every integer
/// `0 <= N < |E| / 2`, given the projection sizes over all of `G(d, m)`.
pub fn projection_count_check(field: &FieldContext, d: usize, m: usize, e_size: usize, sizes: &[usize]) -> Vec<CountCheck> {
    (0..e_size)
        .take_while(|&n| 2 * n < e_size)
        .map(|n| {
            let inst = Instance::new(field, d).projection(m, n, e_size);
            let bound = Theorem::ProjectionCount.evaluate(&inst).bound.unwrap_or(f64::INFINITY);
            CountCheck { threshold: n as f64, observed: sizes.iter().filter(|&&s| s <= n).count(), bound }
        })
        .collect()
}

/// `#{W : |pi_W(E)| <= delta q^m} <= 2 delta/(1-delta) q^{m(d-m)+m} / |E|`.
pub fn projection_density_check(field: &FieldContext, d: usize, m: usize, e_size: usize, sizes: &[usize], delta: f64) -> CountCheck {
    let mut inst = Instance::new(field, d).projection(m, 0, e_size);
    inst.n = delta;
    let bound = Theorem::ProjectionDensity.evaluate(&inst).bound.unwrap_or(f64::INFINITY);
    let cut = delta * (field.q() as f64).powi(m as i32);
    CountCheck { threshold: cut, observed: sizes.iter().filter(|&&s| s as f64 <= cut).count(), bound }
}

/// An affine flat `point + direction`, with `point` reduced modulo the
/// direction so equal flats compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineFlat {
    direction: Subspace,
    point: Vec<Fq>,
}

impl AffineFlat {
    pub fn new(field: &FieldContext, point: Vec<Fq>, direction: Subspace) -> Result<AffineFlat> {
        if point.len() != direction.ambient_dim() {
            return Err(Error::Shape(format!("point of length {} for a flat in dimension {}", point.len(), direction.ambient_dim())));
        }
        let mut point = point;
        direction.reduce(field, &mut point);
        Ok(AffineFlat { direction, point })
    }

    pub fn point(field: &FieldContext, point: Vec<Fq>) -> Result<AffineFlat> {
        let d = point.len();
        AffineFlat::new(field, point, Subspace::zero(d))
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn base_point(&self) -> &[Fq] {
        &self.point
    }

    /// Whether `other ⊆ self`.
    pub fn contains_flat(&self, field: &FieldContext, other: &AffineFlat) -> bool {
        if !other.direction.is_subspace_of(field, &self.direction) {
            return false;
        }
        let diff: Vec<Fq> = other.point.iter().zip(&self.point).map(|(&x, &y)| field.sub(x, y)).collect();
        self.direction.contains(field, &diff)
    }
}

/// Every `k`-flat of the space: one per (direction, reduced base point).
pub fn all_flats(space: &Space, k: usize) -> Result<Vec<AffineFlat>> {
    let field = space.field();
    let mut out = Vec::new();
    for dir in enumerate_grassmannian(field, space.dim(), k)? {
        let mut reps: Vec<Vec<Fq>> = (0..space.size())
            .map(|x| {
                let mut v = space.decode(x);
                dir.reduce(field, &mut v);
                v
            })
            .collect();
        reps.sort();
        reps.dedup();
        out.extend(reps.into_iter().map(|point| AffineFlat { direction: dir.clone(), point }));
    }
    Ok(out)
}

/// `c_k = (2k+1) binom(k, floor(k/2))`.
pub fn flats_constant(k: usize) -> u64 {
    let mut binom: u64 = 1;
    let j = k / 2;
    for i in 0..j {
        binom = binom * (k - i) as u64 / (i + 1) as u64;
    }
    (2 * k as u64 + 1) * binom
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatsIncidence {
    pub k: usize,
    pub h: usize,
    pub count: u64,
    /// `|K||H| / q^{(d-h)(k+1)}`.
    pub main_term: f64,
    /// `sqrt(c_k) q^{((d-h)h + k(2h-d-k+1))/2} sqrt(|K||H|)`.
    pub error_term: f64,
    /// `h >= 2k + 1`.
    pub hypothesis: bool,
}

impl FlatsIncidence {
    pub fn deviation(&self) -> f64 {
        (self.count as f64 - self.main_term).abs()
    }

    /// `deviation / error_term`; at most about 1 when the hypothesis holds.
    pub fn ratio(&self) -> f64 {
        if self.error_term == 0.0 { 0.0 } else { self.deviation() / self.error_term }
    }
}

/// Number of pairs `(K, H)` with `K ⊆ H`, and the deviation from the
/// expected count.
pub fn flats_incidences(field: &FieldContext, d: usize, ks: &[AffineFlat], hs: &[AffineFlat]) -> Result<FlatsIncidence> {
    let dim_of = |flats: &[AffineFlat]| -> Result<usize> {
        let k = flats.first().map_or(0, |f| f.dim());
        if flats.iter().any(|f| f.dim() != k || f.direction.ambient_dim() != d) {
            return Err(Error::Shape("flats of mixed dimension".into()));
        }
        Ok(k)
    };
    let (k, h) = (dim_of(ks)?, dim_of(hs)?);
    let count = ks
        .par_iter()
        .map(|kf| hs.iter().filter(|hf| hf.contains_flat(field, kf)).count() as u64)
        .sum();
    let q = field.q() as f64;
    let size = ks.len() as f64 * hs.len() as f64;
    let main_term = size / q.powi(((d - h.min(d)) * (k + 1)) as i32);
    let expo = ((d as f64 - h as f64) * h as f64 + k as f64 * (2.0 * h as f64 - d as f64 - k as f64 + 1.0)) / 2.0;
    let error_term = (flats_constant(k) as f64).sqrt() * q.powf(expo) * size.sqrt();
    Ok(FlatsIncidence { k, h, count, main_term, error_term, hypothesis: h > 2 * k })
}
