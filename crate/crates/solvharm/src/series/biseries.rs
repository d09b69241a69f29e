//! Truncated power series in `t` with `PolyC` coefficients, all arithmetic exact.
//!
//! Every series carries its truncation order; binary operations require equal
//! orders (the callers construct everything at one working order). The parity
//! extension [`ExtSeries`] adjoins `xi = b*sin(phi)` with `xi^2 = b^2 (1-c^2)`,
//! which is how odd-in-phi matrix entries stay inside the rational-in-`c` ring.

use super::poly::{rat, rint, PolyC, Rat};
use num_traits::{One, Zero};

/// Truncated series `sum_k a_k(c) t^k`, `k = 0..=order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiSeries {
    coeffs: Vec<PolyC>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries {
            coeffs: vec![PolyC::zero(); order + 1],
        }
    }

    pub fn constant(p: PolyC, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = p;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(PolyC::one(), order)
    }

    pub fn from_coeffs(coeffs: Vec<PolyC>) -> Self {
        assert!(!coeffs.is_empty());
        BiSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &PolyC {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[PolyC] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, p: PolyC) {
        self.coeffs[k] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|p| !p.is_zero())
    }

    pub fn add(&self, rhs: &BiSeries) -> BiSeries {
        assert_eq!(self.order(), rhs.order());
        BiSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &BiSeries) -> BiSeries {
        assert_eq!(self.order(), rhs.order());
        BiSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> BiSeries {
        BiSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> BiSeries {
        BiSeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(r)).collect(),
        }
    }

    pub fn scale_poly(&self, p: &PolyC) -> BiSeries {
        BiSeries {
            coeffs: self.coeffs.iter().map(|a| a * p).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, rhs: &BiSeries) -> BiSeries {
        assert_eq!(self.order(), rhs.order());
        let n = self.coeffs.len();
        let mut out = vec![PolyC::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(&self.coeffs[i] * &rhs.coeffs[j]);
            }
        }
        BiSeries { coeffs: out }
    }

    /// Multiplicative inverse; requires the constant coefficient to be a
    /// nonzero rational (degree-zero polynomial), which holds for every
    /// series inverted in this crate.
    pub fn invert(&self) -> BiSeries {
        let a0 = self.coeffs[0].clone();
        assert!(
            a0.is_constant() && !a0.is_zero(),
            "series inversion needs a nonzero constant term"
        );
        let inv0 = Rat::one() / a0.coeff(0);
        let n = self.coeffs.len();
        let mut out = vec![PolyC::zero(); n];
        out[0] = PolyC::constant(inv0.clone());
        for k in 1..n {
            let mut acc = PolyC::zero();
            for j in 1..=k {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = (-&acc).scale(&inv0);
        }
        BiSeries { coeffs: out }
    }

    /// Exact division, permitting a shared power of `t`: the numerator must
    /// vanish at least as deep as the divisor. The quotient loses the shared
    /// valuation off the top, so its order is `self.order() - v(rhs)`.
    pub fn div_exact(&self, rhs: &BiSeries) -> BiSeries {
        let vd = rhs.valuation().expect("division by zero series");
        if let Some(vn) = self.valuation() {
            assert!(vn >= vd, "division would produce a pole");
        }
        self.shift_down(vd).mul(&rhs.shift_down(vd).invert())
    }

    /// Drops the first `k` coefficients (divides by `t^k`); shortens the order.
    fn shift_down(&self, k: usize) -> BiSeries {
        BiSeries {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Truncates to a lower order (keeps coefficients `0..=order`).
    pub fn truncate_to(&self, order: usize) -> BiSeries {
        assert!(order <= self.order());
        BiSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Multiplies by `t^k`, truncating at the order.
    pub fn shift_up(&self, k: usize) -> BiSeries {
        let n = self.coeffs.len();
        let mut coeffs = vec![PolyC::zero(); n];
        for i in 0..n.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i].clone();
        }
        BiSeries { coeffs }
    }

    /// Evaluates numerically at `(t, c)`.
    pub fn eval_f64(&self, t: f64, c: f64) -> f64 {
        let mut acc = 0.0;
        for p in self.coeffs.iter().rev() {
            acc = acc * t + p.eval_f64(c);
        }
        acc
    }

    /// exp(mu t) truncated.
    pub fn exp(mu: &Rat, order: usize) -> BiSeries {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Rat::one();
        coeffs.push(PolyC::constant(term.clone()));
        for k in 1..=order {
            term = term * mu / rint(k as i64);
            coeffs.push(PolyC::constant(term.clone()));
        }
        BiSeries { coeffs }
    }

    /// sinh(mu t) truncated.
    pub fn sinh(mu: &Rat, order: usize) -> BiSeries {
        let e = Self::exp(mu, order);
        let em = Self::exp(&-mu.clone(), order);
        e.sub(&em).scale(&rat(1, 2))
    }

    /// cosh(mu t) truncated.
    pub fn cosh(mu: &Rat, order: usize) -> BiSeries {
        let e = Self::exp(mu, order);
        let em = Self::exp(&-mu.clone(), order);
        e.add(&em).scale(&rat(1, 2))
    }

    /// Per-coefficient map `a_k(c) -> a_k(1)` (the `phi = 0` slice).
    pub fn at_c1(&self) -> Vec<Rat> {
        self.coeffs.iter().map(|p| p.eval(&Rat::one())).collect()
    }

    /// Per-coefficient `-(1/2) d a_k/dc |_{c=1}`, the coefficient of `phi^2`
    /// of a series in `t` whose coefficients are polynomials in `cos(phi)`.
    pub fn phi2_part(&self) -> Vec<Rat> {
        self.coeffs
            .iter()
            .map(|p| p.derivative().eval(&Rat::one()) * rat(-1, 2))
            .collect()
    }
}

/// Parity-graded series `ev + xi * od`, `xi = b sin(phi)`, `xi^2 = omega(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtSeries {
    pub ev: BiSeries,
    pub od: BiSeries,
}

impl ExtSeries {
    pub fn even(ev: BiSeries) -> Self {
        let order = ev.order();
        ExtSeries {
            ev,
            od: BiSeries::zero(order),
        }
    }

    pub fn odd(od: BiSeries) -> Self {
        let order = od.order();
        ExtSeries {
            ev: BiSeries::zero(order),
            od,
        }
    }

    pub fn zero(order: usize) -> Self {
        ExtSeries {
            ev: BiSeries::zero(order),
            od: BiSeries::zero(order),
        }
    }

    pub fn add(&self, rhs: &ExtSeries) -> ExtSeries {
        ExtSeries {
            ev: self.ev.add(&rhs.ev),
            od: self.od.add(&rhs.od),
        }
    }

    pub fn sub(&self, rhs: &ExtSeries) -> ExtSeries {
        ExtSeries {
            ev: self.ev.sub(&rhs.ev),
            od: self.od.sub(&rhs.od),
        }
    }

    pub fn neg(&self) -> ExtSeries {
        ExtSeries {
            ev: self.ev.neg(),
            od: self.od.neg(),
        }
    }

    /// Product in the extension ring: odd*odd folds back through `omega`.
    pub fn mul(&self, rhs: &ExtSeries, omega: &PolyC) -> ExtSeries {
        let cross = self.od.mul(&rhs.od).scale_poly(omega);
        ExtSeries {
            ev: self.ev.mul(&rhs.ev).add(&cross),
            od: self.ev.mul(&rhs.od).add(&self.od.mul(&rhs.ev)),
        }
    }

    pub fn scale(&self, r: &Rat) -> ExtSeries {
        ExtSeries {
            ev: self.ev.scale(r),
            od: self.od.scale(r),
        }
    }
}

/// The closed-form geodesic data as exact series (`lambda = 1`):
/// denominator `s = cosh t - c sinh t`, its inverse, `q`, and `Phi^2`.
pub struct GeodesicSeries {
    pub s: BiSeries,
    pub s_inv: BiSeries,
    pub q: BiSeries,
    pub phi2: BiSeries,
}

impl GeodesicSeries {
    pub fn new(order: usize) -> Self {
        let one = Rat::one();
        let ch = BiSeries::cosh(&one, order);
        let sh = BiSeries::sinh(&one, order);
        let s = ch.sub(&sh.scale_poly(&PolyC::c()));
        let s_inv = s.invert();
        let q = sh.neg().add(&ch.scale_poly(&PolyC::c())).mul(&s_inv);
        let phi2 = s_inv
            .mul(&s_inv)
            .scale_poly(&PolyC::one_minus_c2());
        GeodesicSeries { s, s_inv, q, phi2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinh_cosh_coefficients() {
        let sh = BiSeries::sinh(&Rat::one(), 7);
        assert_eq!(sh.coeff(0), &PolyC::zero());
        assert_eq!(sh.coeff(1), &PolyC::one());
        assert_eq!(sh.coeff(3), &PolyC::constant(rat(1, 6)));
        assert_eq!(sh.coeff(5), &PolyC::constant(rat(1, 120)));
        let ch = BiSeries::cosh(&Rat::one(), 7);
        assert_eq!(ch.coeff(0), &PolyC::one());
        assert_eq!(ch.coeff(2), &PolyC::constant(rat(1, 2)));
        assert_eq!(ch.coeff(6), &PolyC::constant(rat(1, 720)));
    }

    #[test]
    fn inversion_round_trip() {
        let g = GeodesicSeries::new(10);
        let prod = g.s.mul(&g.s_inv);
        assert_eq!(prod, BiSeries::one(10));
    }

    #[test]
    fn velocity_components_square_to_one() {
        // q^2 + Phi^2 = 1 identically in (t, c).
        let g = GeodesicSeries::new(12);
        let lhs = g.q.mul(&g.q).add(&g.phi2);
        assert_eq!(lhs, BiSeries::one(12));
    }

    #[test]
    fn phi2_leading_behavior() {
        // The phi^2 coefficient of Phi^2 is exp(2t).
        let g = GeodesicSeries::new(10);
        let phi2_of_phi2 = g.phi2.phi2_part();
        let e2t = BiSeries::exp(&rint(2), 10);
        for (k, got) in phi2_of_phi2.iter().enumerate() {
            assert_eq!(got, &e2t.coeff(k).coeff(0), "t^{}", k);
        }
        // And the phi^0 slice of q is identically 1.
        let q_at_1 = g.q.at_c1();
        assert_eq!(q_at_1[0], Rat::one());
        for r in &q_at_1[1..] {
            assert!(r.is_zero());
        }
    }

    #[test]
    fn extension_ring_squares_through_omega() {
        // (xi * 1)^2 = omega.
        let order = 6;
        let omega = PolyC::one_minus_c2().scale(&rat(4, 3));
        let x = ExtSeries::odd(BiSeries::one(order));
        let sq = x.mul(&x, &omega);
        assert!(sq.od.is_zero());
        assert_eq!(sq.ev, BiSeries::constant(omega, order));
    }

    #[test]
    fn division_strips_matching_valuation() {
        // sinh(t) / t recovers the shifted coefficients.
        let sh = BiSeries::sinh(&Rat::one(), 9);
        let t = BiSeries::one(9).shift_up(1);
        let q = sh.div_exact(&t);
        assert_eq!(q.coeff(0), &PolyC::one());
        assert_eq!(q.coeff(2), &PolyC::constant(rat(1, 6)));
        assert_eq!(q.coeff(4), &PolyC::constant(rat(1, 120)));
    }
}
