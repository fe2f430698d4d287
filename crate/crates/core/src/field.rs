//! Arithmetic in `F_q`, `q = p^ell` with `p` odd and `ell` in {1, 2}.
//!
//! Elements are stored as integer indices in `[0, q)`. For `ell = 2` the
//! index `a0 + a1 * p` denotes `a0 + a1 * t` where `t^2 = n` and `n` is the
//! smallest quadratic non-residue mod `p`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest field order for which per-element lookup tables are built.
pub const MAX_ORDER: u32 = 1 << 22;

/// A field element, relative to some [`FieldContext`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3u32;
    while (k as u64) * (k as u64) <= n as u64 {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// The arithmetic universe `F_q`. Immutable after construction.
#[derive(Clone)]
pub struct FieldContext {
    p: u32,
    ell: u32,
    q: u32,
    nonresidue: u32,
    trace: Vec<u32>,
    eta: Vec<i8>,
    inv: Vec<u32>,
    roots: Vec<Complex64>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("ell", &self.ell)
            .field("q", &self.q)
            .field("nonresidue", &self.nonresidue)
            .finish()
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ell == other.ell
    }
}

impl Eq for FieldContext {}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl FieldContext {
    /// Builds `F_{p^ell}`. For `ell = 2` the modulus is `x^2 - n` with `n` the
    /// smallest non-residue mod `p`.
    pub fn new(p: u32, ell: u32) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "characteristic must be an odd prime, got {p}"
            )));
        }
        if ell != 1 && ell != 2 {
            return Err(Error::Unsupported(format!(
                "extension degree {ell} (only 1 and 2 are implemented)"
            )));
        }
        let q64 = (p as u64).pow(ell);
        if q64 > MAX_ORDER as u64 {
            return Err(Error::Resource(format!("field order {q64} exceeds {MAX_ORDER}")));
        }
        let q = q64 as u32;
        // Euler's criterion over F_p.
        let nonresidue = (2..p)
            .find(|&n| pow_mod(n as u64, ((p - 1) / 2) as u64, p as u64) == (p - 1) as u64)
            .expect("every odd prime has a non-residue");

        let mut ctx = FieldContext {
            p,
            ell,
            q,
            nonresidue,
            trace: Vec::new(),
            eta: Vec::new(),
            inv: Vec::new(),
            roots: (0..p)
                .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64))
                .collect(),
        };

        let trace = (0..q)
            .map(|i| {
                let x = Fq(i);
                let t = ctx.add(x, ctx.frobenius(x));
                debug_assert!(t.0 < p, "trace must land in the prime field");
                t.0
            })
            .collect();
        let mut eta = vec![-1i8; q as usize];
        eta[0] = 0;
        for i in 1..q {
            let x = Fq(i);
            eta[ctx.mul(x, x).index()] = 1;
        }
        let inv = (0..q)
            .map(|i| if i == 0 { 0 } else { ctx.pow(Fq(i), (q - 2) as u64).0 })
            .collect();
        ctx.trace = trace;
        ctx.eta = eta;
        ctx.inv = inv;
        Ok(ctx)
    }

    /// Builds the field of order `q`, which must be `p` or `p^2` for an odd prime `p`.
    pub fn from_order(q: u32) -> Result<Self> {
        if is_prime(q) {
            return Self::new(q, 1);
        }
        let r = (q as f64).sqrt().round() as u32;
        if r * r == q && is_prime(r) {
            return Self::new(r, 2);
        }
        Err(Error::InvalidField(format!("{q} is not p or p^2 for a prime p")))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn ell(&self) -> u32 {
        self.ell
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// The `n` with `t^2 = n` (for `ell = 1`, the smallest non-residue mod `p`).
    pub fn nonresidue(&self) -> u32 {
        self.nonresidue
    }

    pub fn elem(&self, index: u32) -> Result<Fq> {
        if index < self.q {
            Ok(Fq(index))
        } else {
            Err(Error::Domain(format!("element index {index} out of range for q = {}", self.q)))
        }
    }

    /// Embeds an integer through `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> Fq {
        Fq(v.rem_euclid(self.p as i64) as u32)
    }

    /// `a0 + a1 t` (requires `a1 = 0` when `ell = 1`).
    pub fn from_parts(&self, a0: u32, a1: u32) -> Fq {
        debug_assert!(self.ell == 2 || a1 == 0);
        Fq(a0 % self.p + (a1 % self.p) * self.p)
    }

    #[inline]
    pub fn parts(&self, x: Fq) -> (u32, u32) {
        (x.0 % self.p, x.0 / self.p)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq> {
        (1..self.q).map(Fq)
    }

    #[inline]
    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p;
        if self.ell == 1 {
            let s = x.0 + y.0;
            Fq(if s >= p { s - p } else { s })
        } else {
            let (a0, a1) = (x.0 % p, x.0 / p);
            let (b0, b1) = (y.0 % p, y.0 / p);
            Fq((a0 + b0) % p + ((a1 + b1) % p) * p)
        }
    }

    #[inline]
    pub fn neg(&self, x: Fq) -> Fq {
        let p = self.p;
        if self.ell == 1 {
            Fq(if x.0 == 0 { 0 } else { p - x.0 })
        } else {
            let (a0, a1) = (x.0 % p, x.0 / p);
            Fq((p - a0) % p + ((p - a1) % p) * p)
        }
    }

    #[inline]
    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p as u64;
        if self.ell == 1 {
            Fq(((x.0 as u64 * y.0 as u64) % p) as u32)
        } else {
            let (a0, a1) = ((x.0 as u64) % p, (x.0 as u64) / p);
            let (b0, b1) = ((y.0 as u64) % p, (y.0 as u64) / p);
            let n = self.nonresidue as u64;
            let c0 = (a0 * b0 + n * (a1 * b1 % p)) % p;
            let c1 = (a0 * b1 + a1 * b0) % p;
            Fq((c0 + c1 * p) as u32)
        }
    }

    #[inline]
    pub fn square(&self, x: Fq) -> Fq {
        self.mul(x, x)
    }

    pub fn pow(&self, x: Fq, mut exp: u64) -> Fq {
        let mut base = x;
        let mut acc = Fq::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Fq) -> Result<Fq> {
        if x.is_zero() {
            Err(Error::Domain("inverse of zero".into()))
        } else {
            Ok(Fq(self.inv[x.index()]))
        }
    }

    pub fn div(&self, x: Fq, y: Fq) -> Result<Fq> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, x: Fq) -> Fq {
        self.pow(x, self.p as u64)
    }

    /// Absolute trace `F_q -> F_p`, returned as an element of the prime field.
    #[inline]
    pub fn trace(&self, x: Fq) -> Fq {
        if self.ell == 1 {
            x
        } else {
            Fq(self.trace[x.index()])
        }
    }

    /// The canonical additive character `exp(2 pi i Tr(x) / p)`.
    #[inline]
    pub fn add_char(&self, x: Fq) -> Complex64 {
        self.roots[self.trace(x).index()]
    }

    /// `exp(2 pi i k / p)` for `k` in `[0, p)`.
    #[inline]
    pub fn root_of_unity(&self, k: u32) -> Complex64 {
        self.roots[k as usize]
    }

    /// Quadratic character with `eta(0) = 0`.
    #[inline]
    pub fn quad_char(&self, x: Fq) -> i32 {
        self.eta[x.index()] as i32
    }

    /// `eta(x)^k` with the convention `0^0 = 1`.
    pub fn quad_char_pow(&self, x: Fq, k: u32) -> i32 {
        if k == 0 {
            1
        } else {
            self.quad_char(x).pow(k)
        }
    }

    pub fn is_square(&self, x: Fq) -> bool {
        self.quad_char(x) >= 0
    }

    /// Gauss sum `G_a = sum_{t != 0} eta(t) chi(a t)`, by direct summation.
    pub fn gauss_sum(&self, a: Fq) -> Result<Complex64> {
        if a.is_zero() {
            return Err(Error::Domain("Gauss sum G_a requires a != 0".into()));
        }
        Ok(self
            .nonzero_elements()
            .map(|t| self.add_char(self.mul(a, t)) * self.quad_char(t) as f64)
            .sum())
    }

    /// Closed form of `G_1`: `(-1)^(ell-1) sqrt(q)` when `p = 1 mod 4`,
    /// `(-1)^(ell-1) i^ell sqrt(q)` when `p = 3 mod 4`.
    pub fn gauss_sum_closed_form(&self) -> Complex64 {
        let sign = if self.ell % 2 == 1 { 1.0 } else { -1.0 };
        let root_q = (self.q as f64).sqrt();
        if self.p % 4 == 1 {
            Complex64::new(sign * root_q, 0.0)
        } else {
            Complex64::i().powu(self.ell) * (sign * root_q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_characteristic() {
        assert!(matches!(FieldContext::new(2, 1), Err(Error::InvalidField(_))));
        assert!(matches!(FieldContext::new(9, 1), Err(Error::InvalidField(_))));
        assert!(matches!(FieldContext::new(1, 1), Err(Error::InvalidField(_))));
        assert!(matches!(FieldContext::new(3, 3), Err(Error::Unsupported(_))));
        assert!(matches!(FieldContext::new(3, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn f9_uses_smallest_nonresidue() {
        // Squares mod 3 are {0, 1}, so 2 is the smallest non-residue.
        let f = FieldContext::new(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(f.nonresidue(), 2);
        let t = f.from_parts(0, 1);
        assert_eq!(f.square(t), f.from_int(2));
        let f5 = FieldContext::new(5, 2).unwrap();
        assert_eq!(f5.nonresidue(), 2);
        let f7 = FieldContext::new(7, 2).unwrap();
        assert_eq!(f7.nonresidue(), 3);
    }

    #[test]
    fn from_order_recognises_prime_squares() {
        assert_eq!(FieldContext::from_order(9).unwrap().ell(), 2);
        assert_eq!(FieldContext::from_order(7).unwrap().ell(), 1);
        assert!(FieldContext::from_order(15).is_err());
        assert!(FieldContext::from_order(27).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, ell) in [(3, 1), (5, 1), (3, 2), (5, 2)] {
            let f = FieldContext::new(p, ell).unwrap();
            for x in f.elements() {
                assert_eq!(f.add(x, f.neg(x)), Fq::ZERO);
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), Fq::ONE);
                }
                for y in f.elements() {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    for z in f.elements() {
                        assert_eq!(
                            f.mul(x, f.add(y, z)),
                            f.add(f.mul(x, y), f.mul(x, z))
                        );
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f5 = FieldContext::new(5, 1).unwrap();
        assert_eq!(f5.trace(Fq(4)), Fq(4));
        let f9 = FieldContext::new(3, 2).unwrap();
        for a in 0..3 {
            let x = f9.from_int(a);
            assert_eq!(f9.trace(x), f9.from_int(2 * a));
        }
        // t + t^3 = t + 2t = 3t = 0.
        assert_eq!(f9.trace(f9.from_parts(0, 1)), Fq::ZERO);
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        for p in [3, 5, 7, 11] {
            let f = FieldContext::new(p, 2).unwrap();
            let fixed: Vec<Fq> = f.elements().filter(|&x| f.frobenius(x) == x).collect();
            let base: Vec<Fq> = (0..p).map(Fq).collect();
            assert_eq!(fixed, base);
        }
    }

    #[test]
    fn quadratic_character_examples() {
        let f5 = FieldContext::new(5, 1).unwrap();
        assert_eq!(f5.quad_char(Fq(0)), 0);
        assert_eq!(f5.quad_char(Fq(4)), 1);
        let f3 = FieldContext::new(3, 1).unwrap();
        assert_eq!(f3.quad_char(Fq(2)), -1);
        // Every element of F_p is a square in F_{p^2}.
        let f9 = FieldContext::new(3, 2).unwrap();
        assert_eq!(f9.quad_char(f9.from_int(2)), 1);
    }

    #[test]
    fn quad_char_matches_euler_criterion() {
        for (p, ell) in [(3, 1), (7, 1), (13, 1), (3, 2), (7, 2)] {
            let f = FieldContext::new(p, ell).unwrap();
            let half = ((f.q() - 1) / 2) as u64;
            for x in f.nonzero_elements() {
                let e = f.pow(x, half);
                let expect = if e == Fq::ONE { 1 } else { -1 };
                assert_eq!(f.quad_char(x), expect);
            }
            let plus = f.nonzero_elements().filter(|&x| f.quad_char(x) == 1).count();
            assert_eq!(plus as u32, (f.q() - 1) / 2);
        }
    }

    #[test]
    fn additive_character_examples() {
        let f7 = FieldContext::new(7, 1).unwrap();
        assert!((f7.add_char(Fq::ZERO) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let s: Complex64 = f7.elements().map(|x| f7.add_char(x)).sum();
        assert!(s.norm() < 1e-12);
        let f9 = FieldContext::new(3, 2).unwrap();
        let s: Complex64 = f9.elements().map(|x| f9.add_char(x)).sum();
        assert!(s.norm() < 1e-12);
    }

    #[test]
    fn gauss_sum_small_cases() {
        let f5 = FieldContext::new(5, 1).unwrap();
        let g = f5.gauss_sum(Fq::ONE).unwrap();
        assert!((g - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-9);
        let f3 = FieldContext::new(3, 1).unwrap();
        let g = f3.gauss_sum(Fq::ONE).unwrap();
        assert!((g - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-9);
        assert!(matches!(f3.gauss_sum(Fq::ZERO), Err(Error::Domain(_))));
    }
}
