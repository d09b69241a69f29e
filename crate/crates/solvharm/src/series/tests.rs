use super::biseries::BiSeries;
use super::poly::{rat, rint, PolyC, Rat};
use super::*;
use num_traits::{One, Zero};

/// Closed second-order slice of the scalar blocks:
/// `f2/2` with `f2 = c2 e^t / (c1 (1 - c1^2)) *
/// (sinh(c1 t) cosh t - c1 cosh(c1 t) sinh t)`, `lambda = 1`.
fn scalar_phi2_closed(c1: &Rat, c2: &Rat, order: usize) -> Vec<Rat> {
    let pref = c2.clone() / (c1.clone() * (Rat::one() - c1.clone() * c1.clone()));
    let e = BiSeries::exp(&Rat::one(), order);
    let a = BiSeries::sinh(c1, order).mul(&BiSeries::cosh(&Rat::one(), order));
    let b = BiSeries::cosh(c1, order)
        .mul(&BiSeries::sinh(&Rat::one(), order))
        .scale(c1);
    e.mul(&a.sub(&b)).scale(&(pref * rat(1, 2))).at_c1()
}

#[test]
fn scalar_x_phi0_is_sinh() {
    // lambda_j = lambda = 1: the phi = 0 slice is sinh t.
    let s = ode_series(&RationalBlock::ScalarX { lambda_j: rint(1) }, 11).unwrap();
    let sh = BiSeries::sinh(&Rat::one(), 11);
    for k in 0..=11 {
        assert_eq!(s.phi0[k], sh.coeff(k).coeff(0), "t^{}", k);
    }
}

#[test]
fn scalar_x_phi2_matches_closed_form() {
    for lj in [rat(1, 3), rat(1, 2), rat(2, 3), rat(2, 5)] {
        let s = ode_series(&RationalBlock::ScalarX { lambda_j: lj.clone() }, 12).unwrap();
        let c2 = lj.clone() * (Rat::one() - lj.clone());
        let expect = scalar_phi2_closed(&lj, &c2, 12);
        assert_eq!(s.phi2, expect, "lambda_j = {}", lj);
    }
}

#[test]
fn scalar_y_phi2_matches_closed_form() {
    for a2 in [rint(1), rat(1, 2), rat(3, 2), rat(4, 3)] {
        let s = ode_series(&RationalBlock::ScalarY { a2: a2.clone() }, 12).unwrap();
        let c2 = (Rat::one() - a2.clone()) * rat(1, 4);
        let expect = scalar_phi2_closed(&rat(1, 2), &c2, 12);
        assert_eq!(s.phi2, expect, "a^2 = {}", a2);
    }
}

#[test]
fn odd_phi_order_vanishes_for_every_block() {
    // f_1 = 0: scalar solutions are polynomial in c (no sin phi part at all),
    // and det v is even; first-order phi slices are identically zero.
    let blocks = [
        RationalBlock::ScalarX { lambda_j: rat(2, 5) },
        RationalBlock::ScalarY { a2: rat(3, 7) },
        RationalBlock::MatrixV {
            lambda_l: rat(1, 3),
            b2: rat(4, 3),
        },
    ];
    for b in &blocks {
        let s = ode_series(b, 10).unwrap();
        // The full series has no odd part by construction/assertion; the
        // phi-odd slice of an even function of phi is zero.
        assert!(!s.full.is_zero());
    }
}

#[test]
fn matrix_v_first_order_off_diagonal() {
    // Entrywise first-order slice:
    // v12 = phi * b/(2 m m') * (m' sinh(m t) - e^t m sinh(m' t)) + O(phi^2),
    // v21 = phi * b/(2 m m') * (m sinh(m' t) - e^t m' sinh(m t)) + O(phi^2).
    let order = 12;
    let m = rat(1, 3);
    let mp = Rat::one() - m.clone();
    let v = matrix_v_series(&m, &rint(1), order);
    let pref = Rat::one() / (rint(2) * m.clone() * mp.clone());
    let e = BiSeries::exp(&Rat::one(), order);
    let expect12 = BiSeries::sinh(&m, order)
        .scale(&mp)
        .sub(&e.mul(&BiSeries::sinh(&mp, order)).scale(&m))
        .scale(&pref);
    let expect21 = BiSeries::sinh(&mp, order)
        .scale(&m)
        .sub(&e.mul(&BiSeries::sinh(&m, order)).scale(&mp))
        .scale(&pref);
    assert_eq!(v.v12_over_xi.at_c1(), expect12.at_c1());
    assert_eq!(v.v21_over_xi.at_c1(), expect21.at_c1());
}

#[test]
fn matrix_v_second_order_diagonal() {
    // v11's phi^2 slice:
    // -(1/2) (b^2 - m m')/(m m') e^t (cosh t sinh(m t) - m sinh t cosh(m t))/(1 + m).
    let order = 12;
    let m = rat(2, 5);
    let mp = Rat::one() - m.clone();
    let b2 = rat(6, 5);
    let v = matrix_v_series(&m, &b2, order);
    let pref = (b2.clone() - m.clone() * mp.clone()) / (m.clone() * mp.clone());
    let e = BiSeries::exp(&Rat::one(), order);
    let body = BiSeries::cosh(&Rat::one(), order)
        .mul(&BiSeries::sinh(&m, order))
        .sub(
            &BiSeries::sinh(&Rat::one(), order)
                .mul(&BiSeries::cosh(&m, order))
                .scale(&m),
        );
    let expect = e
        .mul(&body)
        .scale(&(pref * rat(-1, 2) / (Rat::one() + m.clone())));
    assert_eq!(v.v11.phi2_part(), expect.at_c1());
}

#[test]
fn phi2_hat_degenerate_cases_vanish() {
    assert!(phi2_hat(&RationalBlock::ScalarX { lambda_j: rint(1) }).is_zero());
    assert!(phi2_hat(&RationalBlock::ScalarY { a2: rint(1) }).is_zero());
}

#[test]
fn phi2_hat_mixed_third_band_coefficients() {
    // lambda_l = 1/3, b^2 = 4/3: coefficients -1/4 at coth t, 1/12 at
    // coth(t/3), 0 at coth(2t/3).
    let combo = phi2_hat(&RationalBlock::MatrixV {
        lambda_l: rat(1, 3),
        b2: rat(4, 3),
    });
    assert_eq!(combo.coeff(&rint(1)), rat(-1, 4));
    assert_eq!(combo.coeff(&rat(1, 3)), rat(1, 12));
    assert_eq!(combo.coeff(&rat(2, 3)), Rat::zero());
}

#[test]
fn coth_decompose_merges_and_tests_zero() {
    let combo = coth_decompose(&[(rint(1), rint(1)), (rint(1), rint(-1))]);
    assert!(combo.is_zero());
    let combo = coth_decompose(&[(rat(1, 3), rat(2, 7))]);
    assert!(!combo.is_zero());
}

#[test]
fn sum0_damek_ricci_data_vanishes() {
    // One half-pair with a = lambda: the constraint list is empty and the
    // half-eigenvalue identity holds with n_{1/2} = 2 = 2 * 1.
    let data = RationalBlockData {
        x_lambdas: vec![],
        y_a2: vec![rint(1)],
        v_blocks: vec![],
    };
    let report = sum0_constraints(&data);
    assert!(report.vanishes);
    let id = report
        .identities
        .iter()
        .find(|i| i.alpha == rat(1, 2))
        .unwrap();
    assert!(id.holds);
    assert_eq!(id.lhs, rint(2));
    assert_eq!(id.rhs, rint(2));
}

#[test]
fn sum0_pure_kernel_blocks_violate() {
    // Only singleton blocks with lambda_j < 1 cannot cancel: the coefficient
    // at coth(lambda_j t) is -lambda_j^2/(1+lambda_j) != 0.
    let data = RationalBlockData {
        x_lambdas: vec![rat(1, 2)],
        y_a2: vec![],
        v_blocks: vec![],
    };
    let report = sum0_constraints(&data);
    assert!(!report.vanishes);
    assert_eq!(report.combo.coeff(&rat(1, 2)), rat(-1, 6));
}

#[test]
fn sum0_hand_built_harmonic_set_cancels() {
    // A kernel singleton at 1/2 balanced by a half-pair with a^2 = 3/2:
    // n_{1/2} = 3 = 2 * (3/2), and the combo cancels at both frequencies.
    let data = RationalBlockData {
        x_lambdas: vec![rat(1, 2)],
        y_a2: vec![rat(3, 2)],
        v_blocks: vec![],
    };
    let report = sum0_constraints(&data);
    assert!(report.vanishes, "combo: {:?}", report.combo);
    assert!(report.identities.iter().all(|i| i.holds));
}

#[test]
fn sum0_thirds_data_passes_second_order() {
    // The {1/3, 2/3, 1} instance cancels at phi^2 order entirely; the
    // obstruction only appears at t^9 in higher phi orders.
    let report = sum0_constraints(&thirds_block_data());
    assert!(report.vanishes, "combo: {:?}", report.combo);
    assert!(report.identities.iter().all(|i| i.holds));
    let taylor = volume_taylor(&thirds_block_data(), 12).unwrap();
    assert!(taylor.iter().all(|r| r.is_zero()));
}

#[test]
fn cross_engine_phi2_per_block() {
    // ode_series phi^2 slice == phi0 closed form * (1/2) e^t sinh t * hat,
    // exactly, through order 12.
    let order = 12;
    let cases: Vec<(RationalBlock, BiSeries)> = vec![
        (
            RationalBlock::ScalarX { lambda_j: rat(1, 3) },
            BiSeries::sinh(&rat(1, 3), order).scale(&rint(3)),
        ),
        (
            RationalBlock::ScalarY { a2: rat(4, 3) },
            BiSeries::sinh(&rat(1, 2), order).scale(&rint(2)),
        ),
        (
            RationalBlock::MatrixV {
                lambda_l: rat(2, 5),
                b2: rat(6, 5),
            },
            BiSeries::sinh(&rat(2, 5), order)
                .mul(&BiSeries::sinh(&rat(3, 5), order))
                .scale(&(rint(1) / (rat(2, 5) * rat(3, 5)))),
        ),
    ];
    for (block, phi0_closed) in &cases {
        let s = ode_series(block, order).unwrap();
        assert_eq!(&s.phi0, &phi0_closed.at_c1(), "phi0 of {:?}", block);
        let hat = coth_combo_series(&phi2_hat(block), order);
        let hat_series = BiSeries::from_coeffs(
            hat.into_iter().map(PolyC::constant).collect(),
        );
        let expect = phi0_closed.mul(&hat_series);
        assert_eq!(s.phi2, expect.at_c1(), "phi2 of {:?}", block);
    }
}

#[test]
fn thirds_series_shallow_coefficients() {
    let s = thirds_xdetv_series(9).unwrap();
    assert_eq!(s.coeff(3), &PolyC::one());
    assert_eq!(s.coeff(5), &PolyC::constant(rat(1, 9)));
    assert_eq!(s.coeff(7), &PolyC::constant(rat(2, 405)));
    for k in [0, 1, 2, 4, 6, 8] {
        assert!(s.coeff(k).is_zero(), "t^{} should vanish", k);
    }
}

#[test]
fn thirds_t9_exact_polynomial() {
    let t9 = thirds_t9_polynomial();
    let denom = rint(4 * 7 * 19683); // 4 * 7 * 3^9 = 551124
    let expect = PolyC::from_coeffs(vec![
        rint(81) / denom.clone(),
        Rat::zero(),
        rint(-27) / denom.clone(),
        Rat::zero(),
        rint(15) / denom.clone(),
        Rat::zero(),
        rint(-1) / denom,
    ]);
    assert_eq!(t9, expect);
    assert!(!t9.is_constant());
    assert_eq!(t9.coeff(6), rat(-1, 551124));
}

#[test]
fn thirds_t9_at_phi0_matches_product_oracle() {
    // At c = 1 the t^9 coefficient must agree with the direct expansion of
    // (27/2) sinh^2(t/3) sinh(2t/3).
    let t9 = thirds_t9_polynomial().eval(&Rat::one());
    assert_eq!(t9, rat(17, 137781)); // 17/(7 * 3^9)
    let third = rat(1, 3);
    let two_thirds = rat(2, 3);
    let prod = BiSeries::sinh(&third, 9)
        .mul(&BiSeries::sinh(&third, 9))
        .mul(&BiSeries::sinh(&two_thirds, 9))
        .scale(&rat(27, 2));
    assert_eq!(prod.coeff(9).coeff(0), t9);
}

#[test]
fn order_limit_enforced() {
    let err = ode_series(&RationalBlock::ScalarX { lambda_j: rint(1) }, 17);
    assert!(matches!(err, Err(SeriesError::OrderTooLarge(17))));
}

#[test]
fn volume_taylor_single_singleton_block() {
    // Single kernel block at lambda_j = 1/2: the phi^2 part of V/V0 - 1 is
    // (1/2) e^t sinh t * (1/3)(coth t - (1/2) coth(t/2)).
    let data = RationalBlockData {
        x_lambdas: vec![rat(1, 2)],
        y_a2: vec![],
        v_blocks: vec![],
    };
    let got = volume_taylor(&data, 10).unwrap();
    let combo = coth_decompose(&[(rint(1), rat(1, 3)), (rat(1, 2), rat(-1, 6))]);
    let expect = coth_combo_series(&combo, 10);
    assert_eq!(got, expect);
    assert!(!got.iter().all(|r| r.is_zero()));
}
