//! Exact truncated-series engine.
//!
//! Everything here is rational arithmetic: series in `t` whose coefficients
//! are polynomials in `c = cos(phi)`, with `lambda` normalized to 1 (the
//! scaling law `V_lambda(t, phi) = lambda^{-(n-1)} V_1(lambda t, phi)` is
//! exercised numerically in the density module). The module reproduces the
//! second-order-in-phi expansions of the block Jacobi solutions, decomposes
//! the resulting constraint into coth frequencies, and expands the
//! `{1/3, 2/3, 1}`-spectrum product `x * det v` far enough to exhibit its
//! phi-dependent ninth-order Taylor coefficient.

pub mod biseries;
pub mod poly;

use biseries::{BiSeries, ExtSeries, GeodesicSeries};
use num_traits::{One, Zero};
use poly::{rat, rat_string, rint, PolyC, Rat};
use std::collections::BTreeMap;
use thiserror::Error;

/// Deepest truncation order supported (the battery needs `t^9` with margin).
pub const MAX_ORDER: usize = 16;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("truncation order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("block parameter {0} is not a small rational (lambda-normalized data required)")]
    IrrationalParameter(f64),
}

/// Exact block parameters, `lambda` normalized to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalBlock {
    /// Singleton block: `x'' = (m^2 + m(1-m) Phi^2) x` with `m = lambda_j`.
    ScalarX { lambda_j: Rat },
    /// Half-eigenvalue pair after the rotation substitution:
    /// `y'' = (1/4)(1 + (1-a^2) Phi^2) y`.
    ScalarY { a2: Rat },
    /// Mixed pair `(lambda_l, 1-lambda_l)` with coupling `b` (`b^2` rational).
    MatrixV { lambda_l: Rat, b2: Rat },
}

/// Truncated solution of a block system and its first two phi-slices.
#[derive(Debug, Clone)]
pub struct OdeSeries {
    /// The scalar solution, or `det v` for the 2x2 block. Even in `phi`.
    pub full: BiSeries,
    /// t-coefficients at `phi = 0`.
    pub phi0: Vec<Rat>,
    /// t-coefficients of the `phi^2` term.
    pub phi2: Vec<Rat>,
}

/// Entrywise series solution of the 2x2 mixed block. Diagonal entries are
/// even in phi; off-diagonal entries are `b sin(phi)` times an even series.
#[derive(Debug, Clone)]
pub struct MatrixVSeries {
    pub v11: BiSeries,
    pub v22: BiSeries,
    /// Off-diagonal entries divided by `xi = b sin(phi)`.
    pub v12_over_xi: BiSeries,
    pub v21_over_xi: BiSeries,
    pub det: BiSeries,
}

fn check_order(order: usize) -> Result<(), SeriesError> {
    if order > MAX_ORDER {
        Err(SeriesError::OrderTooLarge(order))
    } else {
        Ok(())
    }
}

/// Solves `f'' = (k0 + k2 Phi^2) f`, `f(0) = 0`, `f'(0) = 1` by exact
/// coefficient recurrence.
fn scalar_series(k0: &Rat, k2: &Rat, order: usize) -> BiSeries {
    let geo = GeodesicSeries::new(order);
    let p = BiSeries::constant(PolyC::constant(k0.clone()), order)
        .add(&geo.phi2.scale(k2));
    let mut f = vec![PolyC::zero(); order + 1];
    if order >= 1 {
        f[1] = PolyC::one();
    }
    for k in 0..order.saturating_sub(1) {
        let mut acc = PolyC::zero();
        for m in 0..=k {
            if p.coeff(m).is_zero() || f[k - m].is_zero() {
                continue;
            }
            acc = &acc + &(p.coeff(m) * &f[k - m]);
        }
        let denom = rint(((k + 1) * (k + 2)) as i64);
        f[k + 2] = acc.scale(&(Rat::one() / denom));
    }
    BiSeries::from_coeffs(f)
}

/// Solves the 2x2 mixed-block system
/// `v'' + b Phi J v' + C(t) v = 0`, `v(0) = 0`, `v'(0) = I`,
/// with `J = [[0,1],[-1,0]]` and
/// `C = [[-(q^2 m^2 + m Phi^2), q Phi b m'], [-q Phi b m, -(q^2 m'^2 + m' Phi^2)]]`,
/// `m = lambda_l`, `m' = 1 - lambda_l`. Off-diagonal data carry a single
/// factor of `b sin(phi)`, tracked through the extension `xi^2 = b^2(1-c^2)`.
pub fn matrix_v_series(lambda_l: &Rat, b2: &Rat, order: usize) -> MatrixVSeries {
    let geo = GeodesicSeries::new(order);
    let omega = PolyC::one_minus_c2().scale(b2);
    let m = lambda_l.clone();
    let mp = Rat::one() - lambda_l.clone();

    let q2 = geo.q.mul(&geo.q);
    let q_sinv = geo.q.mul(&geo.s_inv);

    // Coefficient functions in the graded ring.
    let g = ExtSeries::odd(geo.s_inv.clone()); // b * Phi, in xi units
    let c11 = ExtSeries::even(
        q2.scale(&(-m.clone() * m.clone()))
            .add(&geo.phi2.scale(&-m.clone())),
    );
    let c22 = ExtSeries::even(
        q2.scale(&(-mp.clone() * mp.clone()))
            .add(&geo.phi2.scale(&-mp.clone())),
    );
    let c12 = ExtSeries::odd(q_sinv.scale(&mp)); // q Phi b m'
    let c21 = ExtSeries::odd(q_sinv.scale(&-m.clone())); // -q Phi b m

    // Entry coefficients built order by order.
    #[derive(Clone)]
    struct Ent {
        ev: Vec<PolyC>,
        od: Vec<PolyC>,
    }
    impl Ent {
        fn new(order: usize) -> Self {
            Ent {
                ev: vec![PolyC::zero(); order + 1],
                od: vec![PolyC::zero(); order + 1],
            }
        }
    }
    let mut v = vec![Ent::new(order); 4]; // v11 v12 v21 v22
    if order >= 1 {
        v[0].ev[1] = PolyC::one();
        v[3].ev[1] = PolyC::one();
    }

    // Convolution of a fixed ExtSeries coefficient list against an entry
    // (or its derivative) at index k.
    let conv = |coef: &ExtSeries, e: &Ent, k: usize, deriv: bool| -> (PolyC, PolyC) {
        let mut ev = PolyC::zero();
        let mut od = PolyC::zero();
        for mth in 0..=k {
            let idx = k - mth;
            let (bev, bod) = if deriv {
                if idx + 1 > order {
                    (PolyC::zero(), PolyC::zero())
                } else {
                    let scale = rint((idx + 1) as i64);
                    (e.ev[idx + 1].scale(&scale), e.od[idx + 1].scale(&scale))
                }
            } else {
                (e.ev[idx].clone(), e.od[idx].clone())
            };
            let aev = coef.ev.coeff(mth);
            let aod = coef.od.coeff(mth);
            // (aev + xi aod)(bev + xi bod) = aev bev + omega aod bod + xi(...)
            ev = &ev + &(&(aev * &bev) + &(&(aod * &bod) * &omega));
            od = &od + &(&(aev * &bod) + &(aod * &bev));
        }
        (ev, od)
    };

    for k in 0..order.saturating_sub(1) {
        // RHS = -G J v' - C v, entrywise.
        let rhs = |row_terms: &[(&ExtSeries, usize, bool, bool)]| -> (PolyC, PolyC) {
            let mut ev = PolyC::zero();
            let mut od = PolyC::zero();
            for (coef, entry, deriv, negate) in row_terms {
                let (tev, tod) = conv(coef, &v[*entry], k, *deriv);
                if *negate {
                    ev = &ev - &tev;
                    od = &od - &tod;
                } else {
                    ev = &ev + &tev;
                    od = &od + &tod;
                }
            }
            (ev, od)
        };
        // (J v')_11 = v'_21, _12 = v'_22, _21 = -v'_11, _22 = -v'_12.
        let r11 = rhs(&[(&g, 2, true, true), (&c11, 0, false, true), (&c12, 2, false, true)]);
        let r12 = rhs(&[(&g, 3, true, true), (&c11, 1, false, true), (&c12, 3, false, true)]);
        let r21 = rhs(&[(&g, 0, true, false), (&c21, 0, false, true), (&c22, 2, false, true)]);
        let r22 = rhs(&[(&g, 1, true, false), (&c21, 1, false, true), (&c22, 3, false, true)]);
        let denom = Rat::one() / rint(((k + 1) * (k + 2)) as i64);
        for (i, (rev, rod)) in [r11, r12, r21, r22].into_iter().enumerate() {
            v[i].ev[k + 2] = rev.scale(&denom);
            v[i].od[k + 2] = rod.scale(&denom);
        }
    }

    // The grading is a consequence of the equation, not an input; assert it.
    for (i, e) in v.iter().enumerate() {
        let diag = i == 0 || i == 3;
        for p in if diag { &e.od } else { &e.ev } {
            assert!(
                p.is_zero(),
                "parity violation in mixed-block entry {}: {}",
                i,
                p
            );
        }
    }

    let v11 = BiSeries::from_coeffs(v[0].ev.clone());
    let v22 = BiSeries::from_coeffs(v[3].ev.clone());
    let v12x = BiSeries::from_coeffs(v[1].od.clone());
    let v21x = BiSeries::from_coeffs(v[2].od.clone());
    // det v = v11 v22 - v12 v21 = v11 v22 - omega * (v12/xi)(v21/xi).
    let det = v11
        .mul(&v22)
        .sub(&v12x.mul(&v21x).scale_poly(&omega));
    MatrixVSeries {
        v11,
        v22,
        v12_over_xi: v12x,
        v21_over_xi: v21x,
        det,
    }
}

/// Exact truncated solution of a block system with its phi-slices.
/// For the mixed block the returned series is `det v`.
pub fn ode_series(block: &RationalBlock, order: usize) -> Result<OdeSeries, SeriesError> {
    check_order(order)?;
    let full = match block {
        RationalBlock::ScalarX { lambda_j } => {
            let k0 = lambda_j * lambda_j;
            let k2 = lambda_j.clone() * (Rat::one() - lambda_j.clone());
            scalar_series(&k0, &k2, order)
        }
        RationalBlock::ScalarY { a2 } => {
            let k0 = rat(1, 4);
            let k2 = (Rat::one() - a2.clone()) * rat(1, 4);
            scalar_series(&k0, &k2, order)
        }
        RationalBlock::MatrixV { lambda_l, b2 } => matrix_v_series(lambda_l, b2, order).det,
    };
    let phi0 = full.at_c1();
    let phi2 = full.phi2_part();
    Ok(OdeSeries { full, phi0, phi2 })
}

/// Finite combination `sum c_mu coth(mu t)` with positive rational
/// frequencies, canonical (zero coefficients dropped).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CothCombo {
    terms: BTreeMap<Rat, Rat>,
}

impl CothCombo {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, freq: Rat, coeff: Rat) {
        assert!(freq > Rat::zero(), "coth frequencies must be positive");
        let entry = self.terms.entry(freq.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&freq);
        }
    }

    pub fn add(&self, rhs: &CothCombo) -> CothCombo {
        let mut out = self.clone();
        for (f, c) in &rhs.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> CothCombo {
        if r.is_zero() {
            return CothCombo::zero();
        }
        CothCombo {
            terms: self
                .terms
                .iter()
                .map(|(f, c)| (f.clone(), c * r))
                .collect(),
        }
    }

    /// Linear independence of `coth(mu t)` over distinct positive frequencies
    /// makes this an exact zero test.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, freq: &Rat) -> Rat {
        self.terms.get(freq).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.terms.iter()
    }

    pub fn frequencies(&self) -> Vec<Rat> {
        self.terms.keys().cloned().collect()
    }
}

/// Canonicalizes a list of (frequency, coefficient) pairs into a combo.
pub fn coth_decompose(pairs: &[(Rat, Rat)]) -> CothCombo {
    let mut combo = CothCombo::zero();
    for (f, c) in pairs {
        combo.add_term(f.clone(), c.clone());
    }
    combo
}

/// The closed second-order coefficient of a block, as a coth combination
/// (`lambda = 1`):
///
/// - singleton: `m/(1+m) * (coth t - m coth m t)` with the shared prefactor
///   folded in, i.e. `{1: m/(1+m), m: -m^2/(1+m)}`;
/// - half pair: `{1: (1-a^2)/3, 1/2: -(1-a^2)/6}`;
/// - mixed pair: the three-frequency expression in `lambda_l, 1-lambda_l, 1`.
pub fn phi2_hat(block: &RationalBlock) -> CothCombo {
    let mut combo = CothCombo::zero();
    let one = Rat::one();
    match block {
        RationalBlock::ScalarX { lambda_j } => {
            let m = lambda_j.clone();
            let denom = one.clone() + m.clone();
            combo.add_term(one.clone(), m.clone() / denom.clone());
            combo.add_term(m.clone(), -(m.clone() * m.clone()) / denom);
        }
        RationalBlock::ScalarY { a2 } => {
            let s = one.clone() - a2.clone();
            combo.add_term(one.clone(), s.clone() * rat(1, 3));
            combo.add_term(rat(1, 2), s * rat(-1, 6));
        }
        RationalBlock::MatrixV { lambda_l, b2 } => {
            let m = lambda_l.clone();
            let mp = one.clone() - m.clone();
            let c_top = (rint(2) * (one.clone() + rint(2) * m.clone() * mp.clone())
                - rint(3) * b2.clone())
                / (rint(2) * (one.clone() + m.clone()) * (one.clone() + mp.clone()));
            combo.add_term(one.clone(), c_top);
            combo.add_term(
                m.clone(),
                m.clone() * (b2.clone() - rint(2) * m.clone())
                    / (rint(2) * (one.clone() + m.clone())),
            );
            combo.add_term(
                mp.clone(),
                mp.clone() * (b2.clone() - rint(2) * mp.clone())
                    / (rint(2) * (one.clone() + mp.clone())),
            );
        }
    }
    combo
}

/// Adapted-basis block data in exact form, `lambda = 1`.
#[derive(Debug, Clone, Default)]
pub struct RationalBlockData {
    /// Eigenvalues of singleton blocks (`J_Z` kernel directions), with
    /// repetition.
    pub x_lambdas: Vec<Rat>,
    /// `a_i^2` for the half-eigenvalue pairs.
    pub y_a2: Vec<Rat>,
    /// `(lambda_l, b_l^2)` for the mixed pairs, `lambda_l < 1/2`.
    pub v_blocks: Vec<(Rat, Rat)>,
}

impl RationalBlockData {
    pub fn blocks(&self) -> Vec<RationalBlock> {
        let mut out = Vec::new();
        for m in &self.x_lambdas {
            out.push(RationalBlock::ScalarX { lambda_j: m.clone() });
        }
        for a2 in &self.y_a2 {
            out.push(RationalBlock::ScalarY { a2: a2.clone() });
        }
        for (m, b2) in &self.v_blocks {
            out.push(RationalBlock::MatrixV {
                lambda_l: m.clone(),
                b2: b2.clone(),
            });
        }
        out
    }

    /// Multiplicity of the eigenvalue `alpha` implied by the block data,
    /// including the distinguished center direction at `alpha = 1`.
    pub fn multiplicity(&self, alpha: &Rat) -> usize {
        let mut n = self.x_lambdas.iter().filter(|m| *m == alpha).count();
        let half = rat(1, 2);
        if *alpha == half {
            n += 2 * self.y_a2.len();
        }
        for (m, _) in &self.v_blocks {
            let mp = Rat::one() - m.clone();
            if m == alpha || mp == *alpha {
                n += 1;
            }
        }
        if *alpha == Rat::one() {
            n += 1;
        }
        n
    }
}

/// One eigenvalue-pairing identity derived from a coth frequency.
#[derive(Debug, Clone)]
pub struct PairingIdentity {
    pub alpha: Rat,
    pub lhs: Rat,
    pub rhs: Rat,
    pub holds: bool,
    pub description: String,
}

/// The full second-order constraint: the total coth combination, its
/// per-frequency coefficients, and the derived pairing identities.
#[derive(Debug, Clone)]
pub struct Sum0Report {
    pub combo: CothCombo,
    pub constraints: Vec<(Rat, Rat)>,
    pub vanishes: bool,
    pub identities: Vec<PairingIdentity>,
}

/// Assembles `sum x_hat + 2 sum y_hat + sum v_hat` and the identities
/// `2 alpha n_alpha = sum b_l^2` (for `alpha != 1, 1/2`) and
/// `n_{1/2} = 2 sum a_i^2` that make its frequencies vanish.
pub fn sum0_constraints(data: &RationalBlockData) -> Sum0Report {
    let mut combo = CothCombo::zero();
    for m in &data.x_lambdas {
        combo = combo.add(&phi2_hat(&RationalBlock::ScalarX { lambda_j: m.clone() }));
    }
    for a2 in &data.y_a2 {
        combo = combo.add(
            &phi2_hat(&RationalBlock::ScalarY { a2: a2.clone() }).scale(&rint(2)),
        );
    }
    for (m, b2) in &data.v_blocks {
        combo = combo.add(&phi2_hat(&RationalBlock::MatrixV {
            lambda_l: m.clone(),
            b2: b2.clone(),
        }));
    }

    let mut identities = Vec::new();
    let mut alphas: Vec<Rat> = Vec::new();
    for m in data
        .x_lambdas
        .iter()
        .chain(data.v_blocks.iter().map(|(m, _)| m))
    {
        if !alphas.contains(m) {
            alphas.push(m.clone());
        }
        let mp = Rat::one() - m.clone();
        if !alphas.contains(&mp) {
            alphas.push(mp);
        }
    }
    alphas.sort();
    let half = rat(1, 2);
    for alpha in &alphas {
        if *alpha == Rat::one() || *alpha == half {
            continue;
        }
        let n_alpha = data.multiplicity(alpha);
        let lhs = rint(2) * alpha.clone() * rint(n_alpha as i64);
        let low = if *alpha < half {
            alpha.clone()
        } else {
            Rat::one() - alpha.clone()
        };
        let rhs: Rat = data
            .v_blocks
            .iter()
            .filter(|(m, _)| *m == low)
            .map(|(_, b2)| b2.clone())
            .fold(Rat::zero(), |acc, b2| acc + b2);
        identities.push(PairingIdentity {
            holds: lhs == rhs,
            description: format!(
                "2*{}*n_{} = {} vs sum b^2 = {}",
                rat_string(alpha),
                rat_string(alpha),
                rat_string(&lhs),
                rat_string(&rhs)
            ),
            alpha: alpha.clone(),
            lhs,
            rhs,
        });
    }
    if !data.y_a2.is_empty() || data.x_lambdas.iter().any(|m| *m == half) {
        let n_half = data.multiplicity(&half);
        let lhs = rint(n_half as i64);
        let rhs = data
            .y_a2
            .iter()
            .fold(Rat::zero(), |acc, a2| acc + a2.clone())
            * rint(2);
        identities.push(PairingIdentity {
            holds: lhs == rhs,
            description: format!(
                "n_{{1/2}} = {} vs 2 sum a^2 = {}",
                rat_string(&lhs),
                rat_string(&rhs)
            ),
            alpha: half,
            lhs,
            rhs,
        });
    }

    let constraints = combo
        .terms()
        .map(|(f, cc)| (f.clone(), cc.clone()))
        .collect();
    Sum0Report {
        vanishes: combo.is_zero(),
        constraints,
        combo,
        identities,
    }
}

/// Expands `(1/2) e^t sinh t * combo` as a rational series in `t` of the
/// given order (this is the `phi^2` coefficient of `V/V(.,0) - 1` when
/// `combo` is the total constraint).
pub fn coth_combo_series(combo: &CothCombo, order: usize) -> Vec<Rat> {
    let work = order + 1;
    let e = BiSeries::exp(&Rat::one(), work);
    let sh1 = BiSeries::sinh(&Rat::one(), work);
    let prefix = e.mul(&sh1).scale(&rat(1, 2));
    let mut total = BiSeries::zero(order);
    for (mu, cmu) in combo.terms() {
        let num = prefix.mul(&BiSeries::cosh(mu, work));
        let den = BiSeries::sinh(mu, work);
        let term = num.div_exact(&den); // order `work - 1 = order`
        total = total.add(&term.scale(cmu));
    }
    total.at_c1()
}

/// phi^2 part of `V(t, phi)/V(t, 0) - 1` through the given order, assembled
/// from the closed coth forms.
pub fn volume_taylor(data: &RationalBlockData, order: usize) -> Result<Vec<Rat>, SeriesError> {
    check_order(order)?;
    let report = sum0_constraints(data);
    Ok(coth_combo_series(&report.combo, order))
}

/// The `{1/3, 2/3, 1}` spectrum data of the exceptional case: one singleton
/// at 1/3 and one mixed pair with `b^2 = 4/3`.
pub fn thirds_block_data() -> RationalBlockData {
    RationalBlockData {
        x_lambdas: vec![rat(1, 3)],
        y_a2: vec![],
        v_blocks: vec![(rat(1, 3), rat(4, 3))],
    }
}

/// Series of `x(t, phi) * det v(t, phi)` for the `{1/3, 2/3, 1}` spectrum.
pub fn thirds_xdetv_series(order: usize) -> Result<BiSeries, SeriesError> {
    check_order(order)?;
    let x = ode_series(
        &RationalBlock::ScalarX {
            lambda_j: rat(1, 3),
        },
        order,
    )?;
    let v = matrix_v_series(&rat(1, 3), &rat(4, 3), order);
    Ok(x.full.mul(&v.det))
}

/// The ninth-order Taylor coefficient of `x * det v` for the `{1/3, 2/3, 1}`
/// spectrum, a nonconstant polynomial in `c = cos(phi)`.
pub fn thirds_t9_polynomial() -> PolyC {
    thirds_xdetv_series(9)
        .expect("order 9 is within bounds")
        .coeff(9)
        .clone()
}

/// Renders a coefficient list as canonical `p/q` strings.
pub fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_string).collect()
}

#[cfg(test)]
mod tests;
