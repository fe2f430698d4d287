//! Small exact rationals for main terms like `|P||R| / q^d`, and a rounding
//! check for floating values that must be rationals with a known denominator.

use std::fmt;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Ratio {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ratio { num: s * num / g, den: s * den / g }
    }

    pub fn from_int(n: i128) -> Ratio {
        Ratio { num: n, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn add(&self, o: &Ratio) -> Ratio {
        Ratio::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    pub fn sub(&self, o: &Ratio) -> Ratio {
        Ratio::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }

    pub fn mul(&self, o: &Ratio) -> Ratio {
        Ratio::new(self.num * o.num, self.den * o.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// If `value * scale` is within `tol` of an integer, that integer.
pub fn scaled_integer(value: f64, scale: f64, tol: f64) -> Option<i128> {
    let x = value * scale;
    let r = x.round();
    ((x - r).abs() <= tol).then_some(r as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Ratio::new(6, -4);
        assert_eq!((a.num(), a.den()), (-3, 2));
        assert_eq!(a.add(&Ratio::new(1, 2)), Ratio::from_int(-1));
        assert_eq!(Ratio::new(5, 9).sub(&Ratio::new(1, 3)).to_string(), "2/9");
        assert!(Ratio::new(4, 2).is_integer());
        assert_eq!(Ratio::new(0, 7), Ratio::from_int(0));
    }

    #[test]
    fn rounding() {
        assert_eq!(scaled_integer(5.0 / 9.0 + 1e-13, 9.0, 1e-9), Some(5));
        assert_eq!(scaled_integer(0.5, 9.0, 1e-9), None);
    }
}
