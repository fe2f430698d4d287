//! Counting engine: point-pair / rigid-motion incidences, difference
//! histograms, the images `S_g(P) = {x - g y}`, the quadruple count `N(P)`,
//! the Fourier identities that express these counts through spectra, and the
//! exceptional-set and growth sweeps over the orthogonal group.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Ratio;
use crate::geometry::{PairSet, PointSet, Space};
use crate::motions::{MotionSet, OrthGroup, OrthMatrix};
use crate::spectral::{self, NormClassSums, PairNormSums, Spectrum};
use crate::theorems::{Evaluation, Flag, Instance, Theorem};

/// Cap on `|P|^2` for the pair-loop count of `N(P)`.
pub const MAX_PAIR_WORK: u128 = 1 << 36;

fn check_half(half: &Space, other: &Space) -> Result<()> {
    if half != other {
        return Err(Error::Shape(format!("{half:?} vs {other:?}")));
    }
    Ok(())
}

/// `h[z] = #{(x, y) in P : x - g y = z}`.
pub fn difference_histogram(p: &PairSet, g: &OrthMatrix) -> Vec<u32> {
    let half = p.half();
    let mut h = vec![0u32; half.size()];
    for (x, y) in p.iter() {
        h[half.sub(x, g.apply_index(half, y))] += 1;
    }
    h
}

/// Same histogram for `P = A x B`, without materialising the pair set.
fn product_histogram(a: &PointSet, b: &PointSet, g: &OrthMatrix) -> Vec<u32> {
    let space = a.space();
    let gb: Vec<usize> = b.iter().map(|y| g.apply_index(space, y)).collect();
    let mut h = vec![0u32; space.size()];
    for x in a.iter() {
        for &y in &gb {
            h[space.sub(x, y)] += 1;
        }
    }
    h
}

/// `I(P, R)` with its exact main term `|P||R| / q^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceResult {
    pub count: u64,
    pub main_term: Ratio,
    pub error_observed: Ratio,
    /// The right-hand side of a deviation bound, when one was attached.
    pub error_budget: Option<f64>,
    pub theorem: Option<Theorem>,
}

impl IncidenceResult {
    pub fn new(count: u64, size_p: usize, size_r: usize, qd: usize) -> Self {
        let main_term = Ratio::new(size_p as i128 * size_r as i128, qd as i128);
        let error_observed = Ratio::from_int(count as i128).sub(&main_term);
        IncidenceResult { count, main_term, error_observed, error_budget: None, theorem: None }
    }

    pub fn with_budget(mut self, theorem: Theorem, eval: &Evaluation) -> Self {
        self.theorem = Some(theorem);
        self.error_budget = eval.bound;
        self
    }
}

/// Incidences of each motion in `R`, in the order of `R`.
pub fn incidences_per_motion(p: &PairSet, r: &MotionSet) -> Result<Vec<u32>> {
    check_half(p.half(), r.group().space())?;
    let group = r.group();
    let per_group: Vec<Vec<u32>> = r
        .by_group()
        .par_iter()
        .map(|(g, zs)| {
            let h = difference_histogram(p, group.get(*g));
            zs.iter().map(|&z| h[z]).collect()
        })
        .collect();
    Ok(per_group.into_iter().flatten().collect())
}

/// `I(P, R) = #{(x, y, g, z) : (x, y) in P, (g, z) in R, x = g y + z}`.
///
/// For each group element the difference histogram of `P` is built once in
/// `O(|P|)`; every translation of that element is then a lookup.
pub fn count_incidences(p: &PairSet, r: &MotionSet) -> Result<IncidenceResult> {
    let per = incidences_per_motion(p, r)?;
    let count = per.iter().map(|&c| c as u64).sum();
    Ok(IncidenceResult::new(count, p.len(), r.len(), p.half().size()))
}

/// The two terms of `I(P, R) = |P||R| / q^d + q^d sum_{m != 0} sum_{(g, z)}
/// P^(-m, g^T m) chi(-m.z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierExpansion {
    pub main: f64,
    pub error: Complex64,
}

impl FourierExpansion {
    pub fn total(&self) -> Complex64 {
        self.error + self.main
    }
}

pub fn incidence_fourier_expansion(p: &PairSet, r: &MotionSet) -> Result<FourierExpansion> {
    check_half(p.half(), r.group().space())?;
    let spec = Spectrum::of_pairs(p)?;
    Ok(expansion_from_spectrum(&spec, p.len(), r))
}

/// The expansion from a precomputed spectrum of `P` on `F_q^{2d}`.
pub fn expansion_from_spectrum(spec: &Spectrum, size_p: usize, r: &MotionSet) -> FourierExpansion {
    let group = r.group();
    let half = group.space();
    let field = half.field();
    let h = half.size();
    let per_group: Vec<Complex64> = r
        .by_group()
        .par_iter()
        .map(|(g, zs)| {
            let gt = group.get(*g).transpose();
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 1..h {
                let coef = spec.at(half.neg(m) + h * gt.apply_index(half, m));
                let s: Complex64 = zs.iter().map(|&z| field.add_char(field.neg(half.dot(m, z)))).sum();
                acc += coef * s;
            }
            acc
        })
        .collect();
    let error: Complex64 = per_group.iter().sum::<Complex64>() * h as f64;
    FourierExpansion { main: size_p as f64 * r.len() as f64 / h as f64, error }
}

/// `z -> |A ∩ (g B + z)|` for a fixed `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    values: Vec<u32>,
}

impl Histogram {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn total(&self) -> u64 {
        self.values.iter().map(|&v| v as u64).sum()
    }

    /// Number of `z` with a nonempty intersection, i.e. `|A - g B|`.
    pub fn support(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0).count()
    }
}

pub fn intersection_histogram(a: &PointSet, b: &PointSet, g: &OrthMatrix) -> Result<Histogram> {
    check_half(a.space(), b.space())?;
    if g.dim() != a.space().dim() {
        return Err(Error::Shape(format!("{}x{} matrix on dimension {}", g.dim(), g.dim(), a.space().dim())));
    }
    Ok(Histogram { values: product_histogram(a, b, g) })
}

/// `S_g(P) = {x - g y : (x, y) in P}`.
pub fn sg_image(p: &PairSet, g: &OrthMatrix) -> Result<PointSet> {
    if g.dim() != p.half().dim() {
        return Err(Error::Shape("matrix and pair set dimensions differ".into()));
    }
    let h = difference_histogram(p, g);
    Ok(PointSet::from_predicate(p.half(), |z| h[z] > 0))
}

/// `A - g B`.
pub fn difference_set(a: &PointSet, b: &PointSet, g: &OrthMatrix) -> Result<PointSet> {
    let h = intersection_histogram(a, b, g)?;
    Ok(PointSet::from_predicate(a.space(), |z| h.values[z] > 0))
}

/// `nu_A(t) = #{(x, y) in A x A : ||x - y|| = t}`, indexed by `t`.
pub fn distance_counts(a: &PointSet) -> Vec<u64> {
    let space = a.space();
    let norms = space.norm_table();
    let pts: Vec<usize> = a.iter().collect();
    let mut nu = vec![0u64; space.q()];
    for &x in &pts {
        for &y in &pts {
            nu[norms[space.sub(x, y)] as usize] += 1;
        }
    }
    nu
}

/// `N(A x B) = sum_t nu_A(t) nu_B(t)`.
pub fn count_n_product(a: &PointSet, b: &PointSet) -> Result<u64> {
    check_half(a.space(), b.space())?;
    let (na, nb) = (distance_counts(a), distance_counts(b));
    Ok(na.iter().zip(&nb).map(|(x, y)| x * y).sum())
}

/// `N(P) = #{((x, y), (u, v)) in P x P : ||x - u|| = ||y - v||}` by a loop
/// over pairs of points.
pub fn count_n(p: &PairSet) -> Result<u64> {
    let work = (p.len() as u128).pow(2);
    if work > MAX_PAIR_WORK {
        return Err(Error::Resource(format!("N(P) pair loop over {work} pairs")));
    }
    let half = p.half();
    let norms = half.norm_table();
    let pts: Vec<(usize, usize)> = p.iter().collect();
    Ok(pts
        .par_iter()
        .map(|&(x, y)| {
            pts.iter()
                .filter(|&&(u, v)| norms[half.sub(x, u)] == norms[half.sub(y, v)])
                .count() as u64
        })
        .sum())
}

/// `N(A x B)` from the norm-class sums of `A` and `B`:
/// `|P|^2 / q + q^{3d-1} (q - 1) S_eq - q^{3d-1} S_neq`, where `S_eq` runs
/// over all pairs of equal norm including `(0, 0)`.
pub fn n_from_product_spectra(ta: &NormClassSums, tb: &NormClassSums, size_p: usize, half: &Space) -> f64 {
    let q = half.q() as f64;
    let d = half.dim() as i32;
    let eq = spectral::spectral_sum_equal_norms(ta, tb, spectral::ZeroTerms::All);
    let neq = spectral::spectral_sum_unequal_norms(ta, tb);
    let c = q.powi(3 * d - 1);
    (size_p as f64).powi(2) / q + c * (q - 1.0) * eq - c * neq
}

/// `N(P)` for a general pair set from its spectrum on `F_q^{2d}`:
/// `(1/q + (q-1)/q^{d+1}) |P|^2 + q^{3d-1} (q-1) S*_eq - q^{3d-1} S_neq`,
/// with `S*_eq` excluding `(0, 0)`.
pub fn n_from_pair_spectrum(sums: &PairNormSums, size_p: usize, half: &Space) -> f64 {
    let q = half.q() as f64;
    let d = half.dim() as i32;
    let c = q.powi(3 * d - 1);
    let p2 = (size_p as f64).powi(2);
    (1.0 / q + (q - 1.0) / q.powi(d + 1)) * p2 + c * (q - 1.0) * sums.equal(false) - c * sums.unequal()
}

/// `N(P) = q^{4d} sum_{(m, m')} V^(m, m') |P^(m, m')|^2` with the closed-form
/// transform of the norm variety.
pub fn n_from_variety(spec: &Spectrum, half: &Space) -> f64 {
    let h = half.size();
    let q4d = (h as f64).powi(4);
    spec.coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| spectral::variety_fourier(half, idx % h, idx / h) * c.norm_sqr())
        .sum::<f64>()
        * q4d
}

/// The quadruple count and its spectral reconstructions.
#[derive(Clone, Debug, PartialEq)]
pub struct NIdentities {
    pub n: u64,
    /// Product-set route, when `P = A x B` was given.
    pub product: Option<f64>,
    pub general: f64,
    pub variety: f64,
    /// `|N(P) - |P|^2 / q| / (q^d |P|)`.
    pub quadruple_ratio: f64,
}

impl NIdentities {
    /// Largest relative deviation of any reconstruction from `n`.
    pub fn max_relative_error(&self) -> f64 {
        let n = self.n as f64;
        let rel = |v: f64| (v - n).abs() / n.max(1.0);
        let mut e = rel(self.general).max(rel(self.variety));
        if let Some(v) = self.product {
            e = e.max(rel(v));
        }
        e
    }
}

pub fn verify_n_identities(p: &PairSet, factors: Option<(&PointSet, &PointSet)>) -> Result<NIdentities> {
    let half = p.half();
    let n = match factors {
        Some((a, b)) => count_n_product(a, b)?,
        None => count_n(p)?,
    };
    let spec = Spectrum::of_pairs(p)?;
    let general = n_from_pair_spectrum(&PairNormSums::new(&spec, half)?, p.len(), half);
    let variety = n_from_variety(&spec, half);
    let product = match factors {
        Some((a, b)) => {
            let ta = NormClassSums::new(&Spectrum::of_set(a)?);
            let tb = NormClassSums::new(&Spectrum::of_set(b)?);
            Some(n_from_product_spectra(&ta, &tb, p.len(), half))
        }
        None => None,
    };
    let q = half.q() as f64;
    let sp = p.len() as f64;
    let quadruple_ratio = if p.is_empty() { 0.0 } else { (n as f64 - sp * sp / q).abs() / (half.size() as f64 * sp) };
    Ok(NIdentities { n, product, general, variety, quadruple_ratio })
}

/// Which per-element test defines an exceptional set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Criterion {
    /// `g` is exceptional if at least `q^d / 4` translations give
    /// `|A ∩ (gB + z)| <= |A||B| / 2q^d`, or at least `q^d / 4` give
    /// `>= 3|A||B| / 2q^d`.
    Intersection,
    /// `|S_g(P)| < q^d / 2`.
    Image,
    /// `|A - g B| <= |B|^{1 + eps}`.
    Growth { eps: f64 },
}

impl Criterion {
    pub fn describe(&self) -> String {
        match self {
            Criterion::Intersection => {
                "#{z: |A∩(gB+z)| <= |A||B|/2q^d} >= q^d/4 or #{z: |A∩(gB+z)| >= 3|A||B|/2q^d} >= q^d/4".into()
            }
            Criterion::Image => "|S_g(P)| < q^d/2".into(),
            Criterion::Growth { eps } => format!("|A-gB| <= |B|^(1+{eps})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalSetReport {
    pub theorem: Theorem,
    pub predicate: String,
    /// Group indices in canonical order.
    pub members: Vec<usize>,
    pub group_order: usize,
    pub evaluation: Evaluation,
    /// `|E| / bound`.
    pub observed_constant: Option<f64>,
    /// Intersection criterion only: elements with fewer than `q^d / 2`
    /// translations inside the window `[|A||B|/2q^d, 3|A||B|/2q^d]`.
    pub window_failures: Option<usize>,
}

impl ExceptionalSetReport {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn flags(&self) -> &[Flag] {
        &self.evaluation.flags
    }

    /// Re-evaluates the same set against another bound.
    pub fn against(&self, theorem: Theorem, inst: &Instance) -> ExceptionalSetReport {
        let evaluation = theorem.evaluate(inst);
        let observed_constant = evaluation.constant(self.size() as f64);
        ExceptionalSetReport { theorem, evaluation, observed_constant, ..self.clone() }
    }
}

fn report(
    theorem: Theorem,
    criterion: Criterion,
    members: Vec<usize>,
    group: &OrthGroup,
    inst: &Instance,
    window_failures: Option<usize>,
) -> ExceptionalSetReport {
    let evaluation = theorem.evaluate(inst);
    let observed_constant = evaluation.constant(members.len() as f64);
    ExceptionalSetReport {
        theorem,
        predicate: criterion.describe(),
        members,
        group_order: group.len(),
        evaluation,
        observed_constant,
        window_failures,
    }
}

/// Counts for one group element under the intersection criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowProfile {
    pub low: usize,
    pub high: usize,
    pub inside: usize,
}

pub fn window_profile(h: &Histogram, size_a: usize, size_b: usize) -> WindowProfile {
    let ab = size_a as u64 * size_b as u64;
    let two_qd = 2 * h.values.len() as u64;
    let mut w = WindowProfile { low: 0, high: 0, inside: 0 };
    for &v in &h.values {
        let x = two_qd * v as u64;
        if x <= ab {
            w.low += 1;
        }
        if x >= 3 * ab {
            w.high += 1;
        }
        if ab <= x && x <= 3 * ab {
            w.inside += 1;
        }
    }
    w
}

/// Exceptional set for the intersection criterion, reported against the
/// general-field bound `|O(d-1)| q^{2d} / (|A||B|)`.
pub fn intersection_exceptional_set(a: &PointSet, b: &PointSet, group: &OrthGroup) -> Result<ExceptionalSetReport> {
    check_half(a.space(), b.space())?;
    check_half(a.space(), group.space())?;
    let qd = a.space().size();
    let profiles: Vec<WindowProfile> = (0..group.len())
        .into_par_iter()
        .map(|g| window_profile(&Histogram { values: product_histogram(a, b, group.get(g)) }, a.len(), b.len()))
        .collect();
    let members = (0..group.len())
        .filter(|&g| 4 * profiles[g].low >= qd || 4 * profiles[g].high >= qd)
        .collect();
    let window_failures = profiles.iter().filter(|w| 2 * w.inside < qd).count();
    let inst = Instance::new(group.field(), group.dim()).sets(a.len(), b.len());
    Ok(report(Theorem::Intersection, Criterion::Intersection, members, group, &inst, Some(window_failures)))
}

/// `|S_g(P)|` for every group element, in group order.
pub fn image_sizes(p: &PairSet, group: &OrthGroup) -> Result<Vec<usize>> {
    check_half(p.half(), group.space())?;
    Ok((0..group.len())
        .into_par_iter()
        .map(|g| difference_histogram(p, group.get(g)).iter().filter(|&&v| v > 0).count())
        .collect())
}

/// Exceptional set `{g : |S_g(P)| < q^d / 2}` against `q^{2d} |O(d-1)| / |P|`.
pub fn image_exceptional_set(p: &PairSet, group: &OrthGroup) -> Result<ExceptionalSetReport> {
    let sizes = image_sizes(p, group)?;
    let qd = p.half().size();
    let members = (0..group.len()).filter(|&g| 2 * sizes[g] < qd).collect();
    let inst = Instance::new(group.field(), group.dim()).pairs(p.len());
    Ok(report(Theorem::Image, Criterion::Image, members, group, &inst, None))
}

/// `|A - g B|` for every group element.
pub fn difference_set_sizes(a: &PointSet, b: &PointSet, group: &OrthGroup) -> Result<Vec<usize>> {
    check_half(a.space(), b.space())?;
    check_half(a.space(), group.space())?;
    Ok((0..group.len())
        .into_par_iter()
        .map(|g| product_histogram(a, b, group.get(g)).iter().filter(|&&v| v > 0).count())
        .collect())
}

/// `E = {g : |A - g B| <= |B|^{1+eps}}` against `|O(d-1)| q^d |B|^eps / |A|`.
/// Instances with `|A| > |B|` or `|B|^{1+eps} >= q^d / 2` are flagged, not
/// rejected.
pub fn growth_experiment(a: &PointSet, b: &PointSet, group: &OrthGroup, eps: f64) -> Result<ExceptionalSetReport> {
    let sizes = difference_set_sizes(a, b, group)?;
    let lambda = (b.len() as f64).powf(1.0 + eps);
    let members = (0..group.len()).filter(|&g| sizes[g] as f64 <= lambda).collect();
    let inst = Instance::new(group.field(), group.dim()).sets(a.len(), b.len()).eps(eps);
    Ok(report(Theorem::Growth, Criterion::Growth { eps }, members, group, &inst, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use std::sync::Arc;

    fn setup(p: u32, d: usize) -> (Arc<Space>, Arc<OrthGroup>) {
        let s = Space::new(Arc::new(FieldContext::new(p, 1).unwrap()), d).unwrap();
        let g = Arc::new(OrthGroup::enumerate(&s).unwrap());
        (s, g)
    }

    #[test]
    fn single_pair_meets_every_group_element_once() {
        let (s, g) = setup(3, 2);
        let p = PairSet::from_pairs(&s, [(4, 7)]).unwrap();
        let r = MotionSet::all(&g).unwrap();
        let res = count_incidences(&p, &r).unwrap();
        assert_eq!(res.count, g.len() as u64);
        assert_eq!(res.main_term, Ratio::new(72, 9));
        assert_eq!(res.error_observed, Ratio::from_int(0));
        assert_eq!(count_n(&p).unwrap(), 1);
    }

    #[test]
    fn full_space_product() {
        let (s, g) = setup(3, 2);
        let full = PointSet::full(&s);
        let p = PairSet::product(&full, &full).unwrap();
        let r = MotionSet::all(&g).unwrap();
        assert_eq!(count_incidences(&p, &r).unwrap().count, 8 * 81);
        let e = incidence_fourier_expansion(&p, &r).unwrap();
        assert!(e.error.norm() < 1e-9);
        let rep = intersection_exceptional_set(&full, &full, &g).unwrap();
        assert!(rep.members.is_empty());
        assert_eq!(rep.window_failures, Some(0));
        // nu(t) = q^d |S_t|.
        let nu = distance_counts(&full);
        let spheres: Vec<u64> = s.field().elements().map(|j| PointSet::sphere(&s, j).len() as u64 * 9).collect();
        assert_eq!(nu, spheres);
    }

    #[test]
    fn subspace_histogram() {
        let (s, g) = setup(5, 2);
        let line = PointSet::from_predicate(&s, |x| s.decode(x)[1].is_zero());
        let id = g.position(&OrthMatrix::identity(2)).unwrap();
        let h = intersection_histogram(&line, &line, g.get(id)).unwrap();
        for z in 0..s.size() {
            let expect = if line.contains(z) { 5 } else { 0 };
            assert_eq!(h.values()[z], expect);
        }
        assert_eq!(h.total(), 25);
    }

    #[test]
    fn image_of_singleton() {
        let (s, g) = setup(5, 2);
        let p = PairSet::from_pairs(&s, [(3, 11)]).unwrap();
        for m in g.elements() {
            let img = sg_image(&p, m).unwrap();
            assert_eq!(img.len(), 1);
            assert!(img.contains(s.sub(3, m.apply_index(&s, 11))));
        }
    }

    #[test]
    fn growth_trivial_threshold() {
        let (s, g) = setup(7, 2);
        let a = PointSet::from_indices(&s, [0, 1, 2]).unwrap();
        let b = PointSet::from_indices(&s, [0, 8, 16, 3]).unwrap();
        // |A - gB| >= |B| > |B|^(1 + eps) for eps < 0.
        let rep = growth_experiment(&a, &b, &g, -0.5).unwrap();
        assert!(rep.members.is_empty());
    }
}
