use ecf_core::census::enumerate_reduced_by_disc;
use ecf_core::cf_shifts::{expand, omega_matrix, omega_tilde, CfKind};
use ecf_core::pell_theta::{
    fundamental_eps, halved_full_image, lambda_eval, pell_oracle, pell_rcf, power_decompose,
    stabilizer_from_unit, PellError, PellSolution, PellUnit,
};
use ecf_core::{Mat2Z, QuadValue, QuadraticIrrational, RootSign};
use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;

fn qi(a: i64, b: i64, c: i64) -> QuadraticIrrational {
    QuadraticIrrational::from_poly(a, b, c, RootSign::Plus).unwrap()
}

fn unit(t: i64, u: i64, d: i64) -> PellUnit {
    PellUnit::new(t, u, d).unwrap()
}

fn nonsquare(d: i64) -> bool {
    d.sqrt().pow(2) != d
}

/// Brute force where it finishes, the `√Δ` expansion otherwise.
fn oracle(delta: i64) -> PellSolution {
    let rcf = pell_rcf(delta).unwrap();
    match pell_oracle(delta, 1_000_000) {
        Ok(s) => {
            assert_eq!(s, rcf, "oracles disagree at {delta}");
            s
        }
        Err(PellError::OracleExhausted { .. }) => rcf,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn oracle_examples() {
    let s = pell_oracle(5, 1000).unwrap();
    assert_eq!(s.fundamental, unit(2, 1, 5));
    assert_eq!(s.fundamental.norm, -1);
    assert_eq!(s.plus_generator, unit(9, 4, 5));
    assert_eq!(pell_oracle(3, 1000).unwrap().fundamental, unit(2, 1, 3));
    assert_eq!(pell_oracle(8, 1000).unwrap().fundamental, unit(3, 1, 8));
    assert_eq!(pell_oracle(9, 1000), Err(PellError::BadDiscriminant));
    assert_eq!(
        pell_oracle(61, 1000),
        Err(PellError::OracleExhausted { delta: 61, bound: 1000 })
    );
    assert_eq!(pell_rcf(61).unwrap().fundamental, unit(29718, 3805, 61));
}

#[test]
fn lambda_examples() {
    let g = qi(1, -1, -1);
    let l = lambda_eval(&Mat2Z::from_i64(3, 2, 2, 1), &g).unwrap();
    assert!(l.same_value(&QuadValue::new(2.into(), 1.into(), 5.into(), 1.into())));
    assert_eq!(l.norm(), BigRational::from_integer((-1).into()));
    assert_eq!(l.trace(), BigRational::from_integer(4.into()));
    assert!(lambda_eval(&Mat2Z::identity(), &qi(2, -6, 1)).unwrap().same_value(&QuadValue::integer(1)));
}

#[test]
fn eps_examples() {
    let e = fundamental_eps(&qi(1, -1, -1)).unwrap();
    assert_eq!(e.norm, -1);
    assert!(e.value.same_value(&QuadValue::new(2.into(), 1.into(), 5.into(), 1.into())));
    let e = fundamental_eps(&qi(1, -4, 1)).unwrap();
    assert_eq!(e.unit, Some(unit(2, 1, 3)));
    // [(2,1),(2,-1)] has radius 2 + √5
    let w = qi(1, -3, 1);
    assert_eq!(expand(&w, CfKind::Ecf).unwrap().period.len(), 2);
    let e = fundamental_eps(&w).unwrap();
    assert!(e.value.same_value(&QuadValue::new(2.into(), 1.into(), 5.into(), 1.into())));
    assert_eq!(fundamental_eps(&qi(1, 0, -2)).unwrap_err(), PellError::NotEReduced);
}

#[test]
fn stabilizer_examples() {
    let g = qi(1, -1, -1);
    let s = stabilizer_from_unit(&g, &unit(2, 1, 5)).unwrap();
    assert_eq!(s, Mat2Z::from_i64(3, 2, 2, 1));
    assert!(s.is_identity_mod2());
    let s = stabilizer_from_unit(&qi(1, -4, 1), &unit(2, 1, 3)).unwrap();
    assert_eq!(s, Mat2Z::from_i64(4, -1, 1, 0));
    assert!(s.is_swap_mod2());
    let s = stabilizer_from_unit(&g, &unit(9, 4, 5)).unwrap();
    assert_eq!(s, Mat2Z::from_i64(13, 8, 8, 5));
    assert_eq!(
        stabilizer_from_unit(&g, &unit(2, 1, 3)),
        Err(PellError::WrongDiscriminantClass)
    );
}

#[test]
fn power_examples() {
    let g = qi(1, -1, -1);
    let base = Mat2Z::from_i64(3, 2, 2, 1);
    assert_eq!(power_decompose(&Mat2Z::from_i64(13, 8, 8, 5), &g).unwrap(), (base.clone(), 2));
    assert_eq!(power_decompose(&base, &g).unwrap(), (base, 1));
    let w = qi(1, -4, 1);
    let cube = Mat2Z::from_i64(4, -1, 1, 0).pow(3);
    assert_eq!(cube, Mat2Z::from_i64(56, -15, 15, -4));
    assert_eq!(power_decompose(&cube, &w).unwrap(), (Mat2Z::from_i64(4, -1, 1, 0), 3));
    let inv = Mat2Z::from_i64(3, 2, 2, 1).inverse().unwrap();
    assert_eq!(power_decompose(&inv, &g), Err(PellError::LambdaNotExpanding));
}

#[test]
fn oracles_agree() {
    let mut brute = 0;
    for delta in (2..=500).filter(|&d| nonsquare(d)) {
        if pell_oracle(delta, 100_000).is_ok() {
            brute += 1;
        }
        oracle(delta);
    }
    assert_eq!(brute, 389);
}

#[test]
fn eps_is_fundamental_plus_unit() {
    let mut compared = 0;
    for delta in (5..=500).filter(|&d| d % 4 == 1 && nonsquare(d)) {
        let plus = oracle(delta).plus_generator;
        for w in enumerate_reduced_by_disc(delta, CfKind::Ecf).unwrap() {
            let period = expand(&w, CfKind::Ecf).unwrap().period;
            // Δ ≡ 1 mod 4 forces an even period
            assert_eq!(period.len() % 2, 0, "{w}");
            if period.delta() != 1 {
                continue;
            }
            let e = fundamental_eps(&w).unwrap();
            assert_eq!(e.unit.as_ref(), Some(&plus), "{w}");
            compared += 1;
        }
    }
    assert!(compared > 1000);
}

#[test]
fn odd_discriminant_stabilizers_are_identity_mod_2() {
    for delta in (5..=500).filter(|&d| d % 4 == 1 && nonsquare(d)) {
        let s = oracle(delta);
        for w in enumerate_reduced_by_disc(delta, CfKind::Ecf).unwrap() {
            for u in [&s.fundamental, &s.plus_generator] {
                let sigma = stabilizer_from_unit(&w, u).unwrap();
                assert!(sigma.is_identity_mod2(), "{w}");
                assert!(lambda_eval(&sigma, &w).unwrap().same_value(&u.value()));
            }
        }
    }
}

#[test]
fn halved_case_reaches_full_plus_group() {
    let mut cases = 0;
    for d0 in (3..=125).step_by(2).filter(|&d| nonsquare(d)) {
        let plus = oracle(d0).plus_generator;
        for w in enumerate_reduced_by_disc(4 * d0, CfKind::Ecf).unwrap() {
            if !halved_full_image(&w) {
                continue;
            }
            let period = expand(&w, CfKind::Ecf).unwrap().period;
            let lam = lambda_eval(&omega_tilde(&period), &w).unwrap();
            assert!(lam.same_value(&plus.value()), "{w}");
            let sigma = stabilizer_from_unit(&w, &plus).unwrap();
            assert_eq!(sigma, omega_tilde(&period));
            cases += 1;
        }
    }
    assert!(cases > 50);
}

#[test]
fn lambda_is_an_injective_homomorphism() {
    for delta in [5i64, 13, 21, 12, 28, 60, 77] {
        for w in enumerate_reduced_by_disc(delta, CfKind::Ecf).unwrap() {
            let base = omega_matrix(&expand(&w, CfKind::Ecf).unwrap().period);
            let inv = base.inverse().unwrap();
            let mut values: Vec<QuadValue> = Vec::new();
            for i in -6i32..=6 {
                let si = if i >= 0 { base.pow(i as u32) } else { inv.pow((-i) as u32) };
                let li = lambda_eval(&si, &w).unwrap();
                assert!(values.iter().all(|v| !v.same_value(&li)), "{w} power {i}");
                values.push(li.clone());
                for j in -6i32..=6 {
                    let sj = if j >= 0 { base.pow(j as u32) } else { inv.pow((-j) as u32) };
                    let lj = lambda_eval(&sj, &w).unwrap();
                    let prod = lambda_eval(&(&si * &sj), &w).unwrap();
                    assert!(prod.same_value(&li.mul_same(&lj).unwrap()));
                }
            }
            let one = lambda_eval(&Mat2Z::identity(), &w).unwrap();
            assert!(one.same_value(&QuadValue::integer(BigInt::from(1))));
        }
    }
}
