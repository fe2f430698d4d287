//! Fourier transforms on `F_q^n` with `f^(m) = q^{-n} sum_x chi(-m.x) f(x)`,
//! closed-form sphere and norm-variety spectra, and norm-class spectral sums.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldContext, Fq};
use crate::geometry::{PairSet, PointSet, Space};

/// Cap on `n * q^(n+1)` character multiplications per transform.
pub const MAX_DFT_WORK: u128 = 1 << 34;

/// Fourier coefficients of a function on `F_q^n`, indexed like the vectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    space: Arc<Space>,
    coeffs: Vec<Complex64>,
}

fn kernel(field: &FieldContext, sign: bool) -> Vec<Complex64> {
    let q = field.q();
    let mut k = Vec::with_capacity((q * q) as usize);
    for m in 0..q {
        for x in 0..q {
            let mx = field.mul(Fq(m), Fq(x));
            k.push(field.add_char(if sign { mx } else { field.neg(mx) }));
        }
    }
    k
}

/// One length-`q` transform along every axis in turn.
fn transform_axes(space: &Space, data: &mut [Complex64], kern: &[Complex64]) {
    let q = space.q();
    let mut stride = 1;
    for _ in 0..space.dim() {
        let block = stride * q;
        data.par_chunks_mut(block).for_each(|chunk| {
            let mut buf = vec![Complex64::new(0.0, 0.0); q];
            for lo in 0..stride {
                for (t, b) in buf.iter_mut().enumerate() {
                    *b = chunk[lo + t * stride];
                }
                for m in 0..q {
                    let row = &kern[m * q..(m + 1) * q];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, b) in row.iter().zip(&buf) {
                        acc += k * b;
                    }
                    chunk[lo + m * stride] = acc;
                }
            }
        });
        stride = block;
    }
}

fn check_budget(space: &Space) -> Result<()> {
    let work = space.dim() as u128 * (space.size() as u128) * space.q() as u128;
    if work > MAX_DFT_WORK {
        return Err(Error::Resource(format!("transform on {space:?} needs {work} multiplications")));
    }
    Ok(())
}

impl Spectrum {
    /// Transform of an arbitrary complex function given by its value table.
    pub fn of_function(space: &Arc<Space>, values: &[Complex64]) -> Result<Spectrum> {
        if values.len() != space.size() {
            return Err(Error::Shape(format!("{} values on a space of {} points", values.len(), space.size())));
        }
        check_budget(space)?;
        let mut data = values.to_vec();
        transform_axes(space, &mut data, &kernel(space.field(), false));
        let scale = 1.0 / space.size() as f64;
        for c in data.iter_mut() {
            *c *= scale;
        }
        Ok(Spectrum { space: space.clone(), coeffs: data })
    }

    pub fn of_set(set: &PointSet) -> Result<Spectrum> {
        let mut values = vec![Complex64::new(0.0, 0.0); set.space().size()];
        for x in set.iter() {
            values[x] = Complex64::new(1.0, 0.0);
        }
        Self::of_function(set.space(), &values)
    }

    pub fn of_pairs(set: &PairSet) -> Result<Spectrum> {
        Self::of_set(set.as_point_set())
    }

    #[inline]
    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn at(&self, m: usize) -> Complex64 {
        self.coeffs[m]
    }

    #[inline]
    pub fn norm_sqr(&self, m: usize) -> f64 {
        self.coeffs[m].norm_sqr()
    }

    /// `sum_m |f^(m)|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `f(x) = sum_m chi(m.x) f^(m)`.
    pub fn inverse(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        transform_axes(&self.space, &mut data, &kernel(self.space.field(), true));
        data
    }
}

/// Per-radius energies `T(j) = sum_{||m|| = j} |f^(m)|^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormClassSums {
    /// Indexed by the field element index of the radius.
    pub total: Vec<f64>,
    /// `|f^(0)|^2`, which sits in `total[0]`.
    pub zero_term: f64,
}

impl NormClassSums {
    pub fn new(spec: &Spectrum) -> Self {
        let space = spec.space();
        let q = space.q();
        let norms = space.norm_table();
        let mut total = vec![0.0; q];
        for (m, c) in spec.coeffs().iter().enumerate() {
            total[norms[m] as usize] += c.norm_sqr();
        }
        NormClassSums { total, zero_term: spec.norm_sqr(0) }
    }

    /// `T*(j)`: the same sums with `m = 0` removed.
    pub fn nonzero(&self) -> Vec<f64> {
        let mut t = self.total.clone();
        t[0] -= self.zero_term;
        t
    }

    pub fn energy(&self) -> f64 {
        self.total.iter().sum()
    }
}

/// Which terms of `sum_{||m|| = ||m'||} |A^(m)|^2 |B^(m')|^2` to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTerms {
    All,
    /// Drop the single `(m, m') = (0, 0)` term.
    ExcludeZeroPair,
    /// Drop every term with `m = 0` or `m' = 0`.
    ExcludeZeroEach,
}

/// `sum_{||m|| = ||m'||} |A^(m)|^2 |B^(m')|^2` via `sum_j T_A(j) T_B(j)`.
pub fn spectral_sum_equal_norms(a: &NormClassSums, b: &NormClassSums, variant: ZeroTerms) -> f64 {
    match variant {
        ZeroTerms::All => a.total.iter().zip(&b.total).map(|(x, y)| x * y).sum(),
        ZeroTerms::ExcludeZeroPair => {
            spectral_sum_equal_norms(a, b, ZeroTerms::All) - a.zero_term * b.zero_term
        }
        ZeroTerms::ExcludeZeroEach => a.nonzero().iter().zip(&b.nonzero()).map(|(x, y)| x * y).sum(),
    }
}

/// `sum_{||m|| != ||m'||} |A^(m)|^2 |B^(m')|^2`.
pub fn spectral_sum_unequal_norms(a: &NormClassSums, b: &NormClassSums) -> f64 {
    a.energy() * b.energy() - spectral_sum_equal_norms(a, b, ZeroTerms::All)
}

/// `(M*(A), M(A))`: the largest `T(j)` over `j != 0` and over all `j`.
pub fn restriction_maxima(t: &NormClassSums) -> (f64, f64) {
    let star = t.total[1..].iter().copied().fold(0.0, f64::max);
    (star, star.max(t.total[0]))
}

/// Energies of a spectrum on `F_q^d x F_q^d` split by the norm pair
/// `(||m||, ||m'||)`: `grid[a * q + b]`.
#[derive(Clone, Debug)]
pub struct PairNormSums {
    pub q: usize,
    pub grid: Vec<f64>,
    pub zero_term: f64,
}

impl PairNormSums {
    pub fn new(spec: &Spectrum, half: &Space) -> Result<Self> {
        let h = half.size();
        if spec.space().size() != h * h || spec.space().q() != half.q() {
            return Err(Error::Shape("spectrum is not on the pair space".into()));
        }
        let q = half.q();
        let norms = half.norm_table();
        let mut grid = vec![0.0; q * q];
        for (idx, c) in spec.coeffs().iter().enumerate() {
            let (m, mp) = (idx % h, idx / h);
            grid[norms[m] as usize * q + norms[mp] as usize] += c.norm_sqr();
        }
        Ok(PairNormSums { q, grid, zero_term: spec.norm_sqr(0) })
    }

    /// Sum over `||m|| = ||m'||`, optionally including `(0, 0)`.
    pub fn equal(&self, include_zero: bool) -> f64 {
        let s: f64 = (0..self.q).map(|a| self.grid[a * self.q + a]).sum();
        if include_zero {
            s
        } else {
            s - self.zero_term
        }
    }

    pub fn unequal(&self) -> f64 {
        let all: f64 = self.grid.iter().sum();
        all - self.equal(true)
    }
}

/// The two parts of the closed-form sphere transform:
/// `q^{-1} delta_0(m)` and the Gauss-sum correction
/// `q^{-d-1} eta^d(-1) G^d sum_{r != 0} eta^d(r) chi(j r + ||m|| / (4 r))`.
pub fn sphere_fourier_parts(space: &Space, j: Fq, m: usize) -> (Complex64, Complex64) {
    let f = space.field();
    let q = f.q() as f64;
    let d = space.dim() as u32;
    let main = if m == 0 { Complex64::new(1.0 / q, 0.0) } else { Complex64::new(0.0, 0.0) };
    let nm = space.norm(m);
    let four = f.from_int(4);
    let mut acc = Complex64::new(0.0, 0.0);
    for r in f.nonzero_elements() {
        let e = f.quad_char_pow(r, d);
        let arg = f.add(f.mul(j, r), f.div(nm, f.mul(four, r)).expect("4r is nonzero"));
        acc += f.add_char(arg) * e as f64;
    }
    let sign = f.quad_char_pow(f.neg(Fq::ONE), d) as f64;
    let g = f.gauss_sum_closed_form().powu(d);
    let correction = g * acc * (sign / q.powi(d as i32 + 1));
    (main, correction)
}

pub fn sphere_fourier_closed(space: &Space, j: Fq, m: usize) -> Complex64 {
    let (a, b) = sphere_fourier_parts(space, j, m);
    a + b
}

/// DFTs of every sphere `S_j`, `j` ranging over the field.
pub fn sphere_spectra(space: &Arc<Space>) -> Result<Vec<Spectrum>> {
    space
        .field()
        .elements()
        .map(|j| Spectrum::of_set(&PointSet::sphere(space, j)))
        .collect()
}

/// `sum_j S_j^(m) conj(S_j^(m'))` from precomputed sphere spectra.
pub fn sphere_pair_sum_dft(spheres: &[Spectrum], m: usize, mp: usize) -> Complex64 {
    spheres.iter().map(|s| s.at(m) * s.at(mp).conj()).sum()
}

/// `delta_0(m) delta_0(m') / q + q^{-d-1} sum_{s != 0} chi(s (||m|| - ||m'||))`.
pub fn sphere_pair_sum_closed(space: &Space, m: usize, mp: usize) -> Complex64 {
    let f = space.field();
    let q = f.q() as f64;
    let diff = f.sub(space.norm(m), space.norm(mp));
    let s: Complex64 = f.nonzero_elements().map(|s| f.add_char(f.mul(s, diff))).sum();
    let delta = if m == 0 && mp == 0 { 1.0 / q } else { 0.0 };
    s / q.powi(space.dim() as i32 + 1) + delta
}

/// `{(x, y) : ||x|| = ||y||}` inside `F_q^d x F_q^d`.
pub fn norm_variety(half: &Arc<Space>) -> Result<PairSet> {
    let norms = half.norm_table();
    let h = half.size();
    let pairs = (0..h).flat_map(|x| (0..h).filter(move |&y| norms[x] == norms[y]).map(move |y| (x, y)));
    PairSet::from_pairs(half, pairs)
}

/// Three-case closed form of the transform of the norm variety at `(m, m')`.
pub fn variety_fourier(half: &Space, m: usize, mp: usize) -> f64 {
    let q = half.q() as f64;
    let d = half.dim() as i32;
    let base = q.powi(d) * (q - 1.0) / q.powi(2 * d + 1);
    if half.norm(m) != half.norm(mp) {
        -1.0 / q.powi(d + 1)
    } else if m == 0 && mp == 0 {
        1.0 / q + base
    } else {
        base
    }
}

/// `sum_{alpha in F_q^k} chi(s alpha.alpha + beta.alpha)` by enumeration.
pub fn complete_square_direct(field: &FieldContext, s: Fq, beta: &[Fq]) -> Complex64 {
    let k = beta.len();
    let q = field.q() as usize;
    let mut alpha = vec![Fq::ZERO; k];
    let mut acc = Complex64::new(0.0, 0.0);
    for mut code in 0..q.pow(k as u32) {
        for a in alpha.iter_mut() {
            *a = Fq((code % q) as u32);
            code /= q;
        }
        let mut arg = Fq::ZERO;
        for (&a, &b) in alpha.iter().zip(beta) {
            arg = field.add(arg, field.mul(a, field.add(field.mul(s, a), b)));
        }
        acc += field.add_char(arg);
    }
    acc
}

/// `eta^k(s) G^k chi(||beta|| / (-4 s))`, `s != 0`.
pub fn complete_square_closed(field: &FieldContext, s: Fq, beta: &[Fq]) -> Result<Complex64> {
    let k = beta.len() as u32;
    let nb = beta.iter().fold(Fq::ZERO, |acc, &b| field.add(acc, field.square(b)));
    let arg = field.div(nb, field.neg(field.mul(field.from_int(4), s)))?;
    let g = field.gauss_sum_closed_form().powu(k);
    Ok(g * field.add_char(arg) * field.quad_char_pow(s, k) as f64)
}
