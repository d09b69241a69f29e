//! Exact polynomials in `c = cos(phi)` over arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Shorthand for an exact rational scalar.
pub type Rat = BigRational;

/// `rat(p, q)` builds the exact rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer rational.
pub fn rint(p: i64) -> Rat {
    BigRational::from_integer(BigInt::from(p))
}

/// Polynomial in `c = cos(phi)` with exact rational coefficients,
/// stored densely by ascending degree, trailing zeros stripped.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyC {
    coeffs: Vec<Rat>,
}

impl PolyC {
    pub fn zero() -> Self {
        PolyC { coeffs: vec![] }
    }

    pub fn constant(r: Rat) -> Self {
        let mut p = PolyC { coeffs: vec![r] };
        p.normalize();
        p
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// The monomial `c`.
    pub fn c() -> Self {
        PolyC {
            coeffs: vec![Rat::zero(), Rat::one()],
        }
    }

    /// Builds a polynomial from coefficients in ascending degree.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = PolyC { coeffs };
        p.normalize();
        p
    }

    /// `1 - c^2`, i.e. `sin^2(phi)`.
    pub fn one_minus_c2() -> Self {
        PolyC {
            coeffs: vec![Rat::one(), Rat::zero(), -Rat::one()],
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |r| r.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// True when the polynomial is constant (degree <= 0).
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        PolyC {
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, c: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * c + a;
        }
        acc
    }

    /// Floating-point evaluation (for series/numeric agreement tests).
    pub fn eval_f64(&self, c: f64) -> f64 {
        let mut acc = 0.0;
        for a in self.coeffs.iter().rev() {
            acc = acc * c + rat_to_f64(a);
        }
        acc
    }

    /// d/dc.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * rint(k as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }
}

impl fmt::Display for PolyC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if a.is_negative() { "-" } else { "+" })?;
            } else if a.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let abs = a.abs();
            match k {
                0 => write!(f, "{}", abs)?,
                1 => {
                    if abs.is_one() {
                        write!(f, "c")?
                    } else {
                        write!(f, "{}*c", abs)?
                    }
                }
                _ => {
                    if abs.is_one() {
                        write!(f, "c^{}", k)?
                    } else {
                        write!(f, "{}*c^{}", abs, k)?
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &PolyC {
    type Output = PolyC;
    fn add(self, rhs: &PolyC) -> PolyC {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        PolyC::from_coeffs(coeffs)
    }
}

impl Sub for &PolyC {
    type Output = PolyC;
    fn sub(self, rhs: &PolyC) -> PolyC {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        PolyC::from_coeffs(coeffs)
    }
}

impl Neg for &PolyC {
    type Output = PolyC;
    fn neg(self) -> PolyC {
        PolyC {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &PolyC {
    type Output = PolyC;
    fn mul(self, rhs: &PolyC) -> PolyC {
        if self.is_zero() || rhs.is_zero() {
            return PolyC::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyC::from_coeffs(coeffs)
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Falls back to a quotient of lossy conversions for huge terms.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Formats a rational in the artifact's canonical `p/q` form (`p` when integral).
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or an integer string.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else {
        let p: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_normalization() {
        let p = PolyC::from_coeffs(vec![rint(1), rint(2), rint(0)]);
        assert_eq!(p.degree(), Some(1));
        let q = &p * &p;
        // (1 + 2c)^2 = 1 + 4c + 4c^2
        assert_eq!(q.coeff(0), rint(1));
        assert_eq!(q.coeff(1), rint(4));
        assert_eq!(q.coeff(2), rint(4));
        assert!((&q - &q).is_zero());
    }

    #[test]
    fn eval_and_derivative() {
        // 1 - c^2 at c = 1/2 is 3/4; derivative -2c at 1/2 is -1.
        let s2 = PolyC::one_minus_c2();
        assert_eq!(s2.eval(&rat(1, 2)), rat(3, 4));
        assert_eq!(s2.derivative().eval(&rat(1, 2)), rint(-1));
    }

    #[test]
    fn rational_strings_round_trip() {
        assert_eq!(parse_rat("-3/9"), Some(rat(-1, 3)));
        assert_eq!(parse_rat("7"), Some(rint(7)));
        assert_eq!(rat_string(&rat(-1, 3)), "-1/3");
        assert_eq!(rat_string(&rint(7)), "7");
        assert_eq!(parse_rat("1/0"), None);
    }
}
