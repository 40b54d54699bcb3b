use ecf_core::cf_shifts::{
    bcf_digit, bcf_step, convergents, ecf_digit, ecf_step, expand, galois_dual, length_of_period,
    natural_extension_step, omega_matrix, omega_tilde, periodic_value, rho_length, spectral_radius,
    unit_interval_map, CfKind, CfWord, Digit,
};
use ecf_core::qi_core::{ExactOrdering, QiError};
use ecf_core::{Mat2Z, QuadValue, QuadraticIrrational, RootSign};
use num_bigint::BigInt;

fn qi(a: i64, b: i64, c: i64) -> QuadraticIrrational {
    QuadraticIrrational::from_poly(a, b, c, RootSign::Plus).unwrap()
}

fn golden() -> QuadraticIrrational {
    qi(1, -1, -1)
}

fn two_plus_sqrt3() -> QuadraticIrrational {
    qi(1, -4, 1)
}

/// (3 + √7) / 2
fn three_sqrt7_half() -> QuadraticIrrational {
    qi(2, -6, 1)
}

fn qv(x: i64, y: i64, d: i64, z: i64) -> QuadValue {
    QuadValue::new(x.into(), y.into(), d.into(), z.into())
}

fn pairs(c: &[(BigInt, BigInt)]) -> Vec<(i64, i64)> {
    c.iter()
        .map(|(p, q)| (i64::try_from(p).unwrap(), i64::try_from(q).unwrap()))
        .collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn construction() {
    assert!(close(golden().to_f64(), (1.0 + 5f64.sqrt()) / 2.0, 1e-15));
    assert!(close(two_plus_sqrt3().to_f64(), 2.0 + 3f64.sqrt(), 1e-14));
    assert_eq!(
        QuadraticIrrational::from_poly(1, 0, 4, RootSign::Plus),
        Err(QiError::DiscriminantNotPositive)
    );
    assert_eq!(
        QuadraticIrrational::from_poly(0, 1, 1, RootSign::Plus),
        Err(QiError::ZeroLeadingCoefficient)
    );
    assert_eq!(
        QuadraticIrrational::from_poly(1, -3, 2, RootSign::Plus),
        Err(QiError::DiscriminantSquare)
    );
    // sign and gcd normalization
    assert_eq!(QuadraticIrrational::from_poly(-2, 2, 2, RootSign::Minus).unwrap(), golden());
}

#[test]
fn conjugates_and_discriminants() {
    assert!(close(golden().conjugate().to_f64(), -0.6180339887, 1e-9));
    assert_eq!(two_plus_sqrt3().conjugate(), qi(1, -4, 1).conjugate());
    assert!(close(two_plus_sqrt3().conjugate().to_f64(), 2.0 - 3f64.sqrt(), 1e-14));
    assert!(close(three_sqrt7_half().conjugate().to_f64(), (3.0 - 7f64.sqrt()) / 2.0, 1e-14));
    assert_eq!(golden().conjugate().conjugate(), golden());

    assert_eq!(golden().discriminant(), 5.into());
    assert_eq!(two_plus_sqrt3().discriminant(), 12.into());
    let w = periodic_value(&CfWord::ecf(&[(2, 1), (2, -1)]).unwrap()).unwrap();
    assert_eq!(w.discriminant(), 5.into());
}

#[test]
fn floors_and_comparisons() {
    assert_eq!(golden().floor(), 1.into());
    assert_eq!(two_plus_sqrt3().floor(), 3.into());
    assert_eq!(three_sqrt7_half().floor(), 2.into());

    assert_eq!(golden().cmp_int(1), ExactOrdering::Greater);
    assert_eq!(golden().cmp_rational(&13.into(), &8.into()), ExactOrdering::Less);
    assert_eq!(
        two_plus_sqrt3().conjugate().cmp_rational(&1.into(), &3.into()),
        ExactOrdering::Less
    );
}

#[test]
fn mobius_action() {
    for w in [golden(), two_plus_sqrt3(), three_sqrt7_half()] {
        assert_eq!(w.apply_mobius(&Mat2Z::identity()).unwrap(), w);
    }
    assert_eq!(golden().apply_mobius(&Mat2Z::from_i64(3, 2, 2, 1)).unwrap(), golden());
    let swapped = two_plus_sqrt3().apply_mobius(&Mat2Z::from_i64(0, 1, 1, 0)).unwrap();
    assert_eq!(swapped, two_plus_sqrt3().conjugate());
    assert!(matches!(
        golden().apply_mobius(&Mat2Z::from_i64(2, 0, 0, 1)),
        Err(QiError::NonUnimodular)
    ));
}

#[test]
fn classification() {
    let g = golden().classify();
    assert!(g.e_reduced && g.rcf_reduced && !g.b_reduced);
    for w in [two_plus_sqrt3(), three_sqrt7_half()] {
        let c = w.classify();
        assert!(c.e_reduced && c.b_reduced && !c.rcf_reduced);
    }
    let sqrt2 = qi(1, 0, -2).classify();
    assert!(!sqrt2.e_reduced && !sqrt2.b_reduced && !sqrt2.rcf_reduced);
}

#[test]
fn ecf_digits_and_steps() {
    let sqrt2 = qi(1, 0, -2);
    assert_eq!(ecf_digit(&golden()).unwrap(), Digit::new(2, -1));
    assert_eq!(ecf_digit(&two_plus_sqrt3()).unwrap(), Digit::new(4, -1));
    assert_eq!(ecf_digit(&sqrt2).unwrap(), Digit::new(2, -1));

    assert_eq!(ecf_step(&golden()).unwrap(), qi(1, -3, 1));
    assert_eq!(ecf_step(&two_plus_sqrt3()).unwrap(), two_plus_sqrt3());
    assert_eq!(ecf_step(&sqrt2).unwrap(), qi(2, -4, 1));

    assert!(ecf_digit(&golden().conjugate()).is_err());
}

#[test]
fn bcf_digits_and_steps() {
    let w = three_sqrt7_half();
    let w2 = qi(1, -6, 2);
    assert_eq!(bcf_digit(&w).unwrap().a, 3);
    assert_eq!(bcf_step(&w).unwrap(), w2);
    assert_eq!(bcf_digit(&w2).unwrap().a, 6);
    assert_eq!(bcf_step(&w2).unwrap(), w);
    assert_eq!(bcf_digit(&golden()).unwrap().a, 2);
    assert_eq!(bcf_step(&golden()).unwrap(), qi(1, -3, 1));
}

#[test]
fn expansions() {
    let e = expand(&golden(), CfKind::Ecf).unwrap();
    assert!(e.preperiod.is_empty());
    assert_eq!(e.period, CfWord::ecf(&[(2, -1), (2, 1)]).unwrap());

    let e = expand(&qi(1, 0, -2), CfKind::Ecf).unwrap();
    assert_eq!(e.preperiod, CfWord::ecf(&[(2, -1)]).unwrap());
    assert_eq!(e.period, CfWord::ecf(&[(2, -1), (4, -1)]).unwrap());

    let e = expand(&three_sqrt7_half(), CfKind::Bcf).unwrap();
    assert!(e.preperiod.is_empty());
    assert_eq!(e.period, CfWord::bcf(&[3, 6]).unwrap());
}

#[test]
fn convergent_examples() {
    let c = convergents(&CfWord::ecf(&[(2, -1), (2, 1)]).unwrap());
    assert_eq!(pairs(&c), [(1, 0), (2, 1), (3, 2)]);
    let c = convergents(&CfWord::bcf(&[3, 6]).unwrap());
    assert_eq!(pairs(&c), [(1, 0), (3, 1), (17, 6)]);
    let c = convergents(&CfWord::ecf(&[(4, -1)]).unwrap());
    assert_eq!(pairs(&c), [(1, 0), (4, 1)]);
}

#[test]
fn period_matrices() {
    let g = CfWord::ecf(&[(2, -1), (2, 1)]).unwrap();
    assert_eq!(omega_matrix(&g), Mat2Z::from_i64(3, 2, 2, 1));
    assert_eq!(omega_tilde(&g), Mat2Z::from_i64(13, 8, 8, 5));
    let w = CfWord::ecf(&[(4, -1)]).unwrap();
    assert_eq!(omega_matrix(&w), Mat2Z::from_i64(4, -1, 1, 0));
    assert_eq!(omega_tilde(&w), omega_matrix(&w));
    let b = CfWord::bcf(&[3, 6]).unwrap();
    assert_eq!(omega_matrix(&b), Mat2Z::from_i64(17, -3, 6, -1));
    assert_eq!(omega_tilde(&b), omega_matrix(&b));
}

#[test]
fn spectral_radii() {
    let r = spectral_radius(&Mat2Z::from_i64(13, 8, 8, 5)).unwrap();
    assert!(r.same_value(&qv(9, 4, 5, 1)));
    let r = spectral_radius(&Mat2Z::from_i64(17, -3, 6, -1)).unwrap();
    assert!(r.same_value(&qv(8, 3, 7, 1)));
    let r = spectral_radius(&Mat2Z::from_i64(2, 1, 1, 1)).unwrap();
    assert!(r.same_value(&qv(3, 1, 5, 2)));
    // the degenerate word has trace 2
    assert!(spectral_radius(&Mat2Z::from_i64(2, -1, 1, 0)).is_err());
}

#[test]
fn lengths() {
    let l = rho_length(&golden(), CfKind::Ecf).unwrap();
    assert!(close(l.rho, 4.0 * (2.0 + 5f64.sqrt()).ln(), 1e-12));
    assert!(close(l.rho, 5.774542, 1e-6));
    let l = rho_length(&golden(), CfKind::Rcf).unwrap();
    assert!(close(l.rho, 4.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln(), 1e-12));
    assert!(close(l.rho, 1.92485, 1e-5));
    let l = rho_length(&three_sqrt7_half(), CfKind::Bcf).unwrap();
    assert!(close(l.rho, 2.0 * (8.0 + 3.0 * 7f64.sqrt()).ln(), 1e-12));
    assert!(close(l.rho, 5.537319, 1e-6));

    // single digit (4,-1): Ω has det +1, so Ω̃ = Ω; the squared convention doubles it
    let l = rho_length(&two_plus_sqrt3(), CfKind::Ecf).unwrap();
    assert!(close(l.rho, 2.0 * (2.0 + 3f64.sqrt()).ln(), 1e-12));
    assert!(close(l.rho_always_squared, 4.0 * (2.0 + 3f64.sqrt()).ln(), 1e-12));

    assert!(rho_length(&qi(1, 0, -2), CfKind::Ecf).is_err());
    assert!(length_of_period(&CfWord::ecf(&[(2, -1), (2, -1)]).unwrap()).is_err());
}

#[test]
fn galois_duals() {
    let d = galois_dual(&CfWord::ecf(&[(4, -1)]).unwrap()).unwrap();
    assert_eq!(d, qi(1, 4, 1));
    assert!(close(d.to_f64(), -0.2679491924, 1e-9));
    let d = galois_dual(&CfWord::ecf(&[(2, -1), (2, 1)]).unwrap()).unwrap();
    assert_eq!(d, qi(1, 1, -1));
    let w = CfWord::ecf(&[(2, 1), (2, -1)]).unwrap();
    let dual = galois_dual(&w).unwrap();
    let neg_conj = periodic_value(&w)
        .unwrap()
        .conjugate()
        .apply_mobius(&Mat2Z::from_i64(-1, 0, 0, 1))
        .unwrap();
    assert_eq!(dual, neg_conj);
}

#[test]
fn interval_maps() {
    // 1/G and 2 − G form a 2-cycle of the ECF interval map
    let x = 0.6180339887498949;
    let y = unit_interval_map(x, CfKind::Ecf).unwrap();
    assert!(close(y, 0.3819660112501051, 1e-12));
    assert!(close(unit_interval_map(y, CfKind::Ecf).unwrap(), x, 1e-12));
    assert_eq!(unit_interval_map(0.5, CfKind::Bcf).unwrap(), 0.0);
    assert!(unit_interval_map(1.5, CfKind::Ecf).is_err());

    let u = (3.0 + 7f64.sqrt()) / 2.0;
    let (u1, v1) = natural_extension_step(u, 0.0, CfKind::Bcf).unwrap();
    assert!(close(u1, 3.0 + 7f64.sqrt(), 1e-12));
    assert!(close(v1, 1.0 / 3.0, 1e-15));
    assert!(natural_extension_step(0.5, 0.0, CfKind::Bcf).is_err());
}
