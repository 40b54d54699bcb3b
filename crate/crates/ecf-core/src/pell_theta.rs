//! Stabilizers of E-reduced quadratic irrationals in the Theta group, the
//! eigenvalue map `σ ↦ cω + d`, and units of `ℤ[√Δ]` from ECF periods.

use core::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

use crate::cf_shifts::{convergents, expand, omega_matrix, CfError, CfKind};
use crate::mat2::Mat2Z;
use crate::qi_core::{is_square, QuadValue, QuadraticIrrational, RootSign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PellError {
    NotStabilizer,
    NotEReduced,
    BadDiscriminant,
    WrongDiscriminantClass,
    UnitNotApplicable,
    LambdaNotExpanding,
    NotAPower,
    /// No solution with `u ≤ bound`.
    OracleExhausted { delta: i64, bound: u64 },
    Cf(CfError),
}

impl fmt::Display for PellError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PellError::NotStabilizer => f.write_str("matrix does not fix omega"),
            PellError::NotEReduced => f.write_str("omega is not E-reduced"),
            PellError::BadDiscriminant => f.write_str("discriminant must be a positive nonsquare"),
            PellError::WrongDiscriminantClass => f.write_str("unit radicand does not match omega"),
            PellError::UnitNotApplicable => f.write_str("unit does not give a Theta-group stabilizer"),
            PellError::LambdaNotExpanding => f.write_str("eigenvalue c*omega + d is not > 1"),
            PellError::NotAPower => f.write_str("matrix is not a power of the period matrix"),
            PellError::OracleExhausted { delta, bound } => {
                write!(f, "no Pell solution for {delta} with u <= {bound}")
            }
            PellError::Cf(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PellError {}

impl From<CfError> for PellError {
    fn from(e: CfError) -> Self {
        PellError::Cf(e)
    }
}

/// `t + u√Δ` with `t² − Δu² = norm = ±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellUnit {
    pub t: BigInt,
    pub u: BigInt,
    pub delta: BigInt,
    pub norm: i8,
}

impl PellUnit {
    /// Checks `t² − Δu² = ±1`.
    pub fn new(t: impl Into<BigInt>, u: impl Into<BigInt>, delta: impl Into<BigInt>) -> Option<Self> {
        let (t, u, delta) = (t.into(), u.into(), delta.into());
        let n = &t * &t - &delta * &u * &u;
        let norm = if n.is_one() {
            1
        } else if n == -BigInt::one() {
            -1
        } else {
            return None;
        };
        Some(PellUnit { t, u, delta, norm })
    }

    pub fn value(&self) -> QuadValue {
        QuadValue::new(self.t.clone(), self.u.clone(), self.delta.clone(), BigInt::one())
    }

    pub fn mul(&self, o: &PellUnit) -> PellUnit {
        assert_eq!(self.delta, o.delta);
        PellUnit {
            t: &self.t * &o.t + &self.delta * &self.u * &o.u,
            u: &self.t * &o.u + &self.u * &o.t,
            delta: self.delta.clone(),
            norm: self.norm * o.norm,
        }
    }

    pub fn square(&self) -> PellUnit {
        self.mul(self)
    }
}

impl fmt::Display for PellUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({}) (norm {})", self.t, self.u, self.delta, self.norm)
    }
}

fn fixes(sigma: &Mat2Z, w: &QuadraticIrrational) -> bool {
    matches!(w.apply_mobius(sigma), Ok(ref x) if x == w)
}

/// `Λ_ω(σ) = cω + d` for a stabilizer `σ` of `ω`.
pub fn lambda_eval(sigma: &Mat2Z, w: &QuadraticIrrational) -> Result<QuadValue, PellError> {
    if sigma.unimodular_sign().is_none() || !fixes(sigma, w) {
        return Err(PellError::NotStabilizer);
    }
    let s = match w.root_sign() {
        RootSign::Plus => BigInt::one(),
        RootSign::Minus => -BigInt::one(),
    };
    let (a, b) = (w.a_coef(), w.b_coef());
    let two_a = BigInt::from(2) * a;
    let lam = QuadValue::new(-&sigma.c * b + &two_a * &sigma.d, &sigma.c * s, w.discriminant(), two_a);
    debug_assert_eq!(lam.norm(), num_rational::BigRational::from_integer(sigma.det()));
    debug_assert_eq!(lam.trace(), num_rational::BigRational::from_integer(sigma.trace()));
    Ok(lam)
}

/// `ε = Λ_ω(Ω_E(ω))` in closed form, plus its norm `δₙ`.
#[derive(Clone, Debug)]
pub struct Epsilon {
    pub value: QuadValue,
    pub norm: i8,
    /// `ε` as an integer unit over `Δ`, or over `Δ/4` when that fails.
    pub unit: Option<PellUnit>,
}

pub fn fundamental_eps(w: &QuadraticIrrational) -> Result<Epsilon, PellError> {
    if !w.classify().e_reduced {
        return Err(PellError::NotEReduced);
    }
    let period = expand(w, CfKind::Ecf)?.period;
    let n = period.len();
    let conv = convergents(&period);
    let en = BigInt::from(period.digits[n - 1].e);
    let t = &conv[n].0 + &conv[n - 1].1 * &en;
    let delta_n = period.delta();
    let value = QuadValue::new(t.clone(), BigInt::one(), &t * &t - BigInt::from(4 * delta_n as i32), BigInt::from(2));
    let disc = w.discriminant();
    let unit = unit_over(&value, &disc).or_else(|| {
        if (&disc % 4u32).is_zero() {
            unit_over(&value, &(&disc / 4u32))
        } else {
            None
        }
    });
    Ok(Epsilon {
        value,
        norm: delta_n,
        unit,
    })
}

fn unit_over(v: &QuadValue, delta: &BigInt) -> Option<PellUnit> {
    let (t, u) = v.as_integer_unit_over(delta)?;
    PellUnit::new(t, u, delta.clone())
}

/// Smallest `t, u > 0` with `t² − Δu² = ±1` (the generator of `𝓕_Δ`) and the
/// generator of `𝓕_Δ⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub fundamental: PellUnit,
    pub plus_generator: PellUnit,
}

impl PellSolution {
    fn from_fundamental(f: PellUnit) -> Self {
        let plus = if f.norm == 1 { f.clone() } else { f.square() };
        PellSolution {
            fundamental: f,
            plus_generator: plus,
        }
    }
}

fn check_delta(delta: i64) -> Result<(), PellError> {
    if delta <= 0 || delta.sqrt().pow(2) == delta {
        return Err(PellError::BadDiscriminant);
    }
    Ok(())
}

/// Increment `u` and test `Δu² ∓ 1` for squareness; fails loudly past `bound`.
pub fn pell_oracle(delta: i64, bound: u64) -> Result<PellSolution, PellError> {
    check_delta(delta)?;
    let d = delta as u128;
    for u in 1..=bound as u128 {
        let base = d * u * u;
        for (cand, norm) in [(base - 1, -1i8), (base + 1, 1)] {
            let t = cand.sqrt();
            if t * t == cand {
                let unit = PellUnit {
                    t: BigInt::from(t),
                    u: BigInt::from(u),
                    delta: BigInt::from(delta),
                    norm,
                };
                return Ok(PellSolution::from_fundamental(unit));
            }
        }
    }
    Err(PellError::OracleExhausted { delta, bound })
}

/// The same generator from the regular continued fraction of `√Δ`:
/// the convergent before the end of the first period.
pub fn pell_rcf(delta: i64) -> Result<PellSolution, PellError> {
    check_delta(delta)?;
    let a0 = delta.sqrt();
    let (mut m, mut d, mut a) = (0i64, 1i64, a0);
    let (mut p1, mut p0) = (BigInt::from(a0), BigInt::one());
    let (mut q1, mut q0) = (BigInt::one(), BigInt::zero());
    loop {
        if let Some(unit) = PellUnit::new(p1.clone(), q1.clone(), delta) {
            return Ok(PellSolution::from_fundamental(unit));
        }
        m = d * a - m;
        d = (delta - m * m) / d;
        a = (a0 + m) / d;
        let ab = BigInt::from(a);
        let p = &ab * &p1 + &p0;
        let q = &ab * &q1 + &q0;
        p0 = core::mem::replace(&mut p1, p);
        q0 = core::mem::replace(&mut q1, q);
    }
}

/// The stabilizer with eigenvalue `t₀ + u₀√Δ` (unit over `Δ`) or
/// `t₀ + u₀√Δ₀` (unit over `Δ₀ = Δ/4`, halved construction).
pub fn stabilizer_from_unit(w: &QuadraticIrrational, unit: &PellUnit) -> Result<Mat2Z, PellError> {
    if PellUnit::new(unit.t.clone(), unit.u.clone(), unit.delta.clone()).is_none() {
        return Err(PellError::UnitNotApplicable);
    }
    let disc = w.discriminant();
    let (a, b, c) = (w.a_coef(), w.b_coef(), w.c_coef());
    let (t, u) = (&unit.t, &unit.u);
    // the eigenvalue on the ω side is cω + d; Λ = t + u√Δ needs the + root
    let u = match w.root_sign() {
        RootSign::Plus => u.clone(),
        RootSign::Minus => -u,
    };
    let sigma = if unit.delta == disc {
        Mat2Z::new(t - b * &u, BigInt::from(-2) * c * &u, BigInt::from(2) * a * &u, t + b * &u)
    } else if (&disc % 4u32).is_zero() && unit.delta == &disc / 4u32 {
        let b0 = b / 2;
        Mat2Z::new(t - &b0 * &u, -(c * &u), a * &u, t + &b0 * &u)
    } else {
        return Err(PellError::WrongDiscriminantClass);
    };
    if !sigma.in_theta_tilde() || !fixes(&sigma, w) {
        return Err(PellError::UnitNotApplicable);
    }
    Ok(sigma)
}

/// `σ = Ω_E(ω)^k` by repeated exact division.
pub fn power_decompose(sigma: &Mat2Z, w: &QuadraticIrrational) -> Result<(Mat2Z, u32), PellError> {
    if !sigma.in_theta_tilde() {
        return Err(PellError::NotStabilizer);
    }
    let lam = lambda_eval(sigma, w)?;
    if lam.cmp_rational(&BigInt::one(), &BigInt::one()) != core::cmp::Ordering::Greater {
        return Err(PellError::LambdaNotExpanding);
    }
    if !w.classify().e_reduced {
        return Err(PellError::NotEReduced);
    }
    let base = omega_matrix(&expand(w, CfKind::Ecf)?.period);
    let inv = base.inverse().expect("unimodular");
    let mut cur = sigma.clone();
    let mut k = 0u32;
    let id = Mat2Z::identity();
    while cur != id {
        cur = &cur * &inv;
        k += 1;
        let l = lambda_eval(&cur, w)?;
        if l.cmp_rational(&BigInt::one(), &BigInt::one()) == core::cmp::Ordering::Less {
            return Err(PellError::NotAPower);
        }
    }
    Ok((base, k))
}

/// `Δ ≡ 1 (mod 4)`, used to pick the construction in reports.
pub fn is_odd_disc(w: &QuadraticIrrational) -> bool {
    (w.discriminant() % 4u32).to_i64() == Some(1)
}

/// `(A, B, C)` with `B ≡ 0 (mod 4)` and `Δ/4` odd: the halved construction's
/// full-image case.
pub fn halved_full_image(w: &QuadraticIrrational) -> bool {
    let d = w.discriminant();
    (&d % 4u32).is_zero() && (&d / 4u32).is_odd() && (w.b_coef() % 4u32).is_zero() && !is_square(&(&d / 4u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> QuadraticIrrational {
        QuadraticIrrational::from_poly(1, -1, -1, RootSign::Plus).unwrap()
    }

    fn two_plus_root3() -> QuadraticIrrational {
        QuadraticIrrational::from_poly(1, -4, 1, RootSign::Plus).unwrap()
    }

    #[test]
    fn lambda_examples() {
        let l = lambda_eval(&Mat2Z::from_i64(3, 2, 2, 1), &golden()).unwrap();
        assert_eq!(l, QuadValue::new(2.into(), 1.into(), 5.into(), 1.into()));
        assert_eq!(lambda_eval(&Mat2Z::identity(), &golden()).unwrap(), QuadValue::integer(1));
        let l = lambda_eval(&Mat2Z::from_i64(4, -1, 1, 0), &two_plus_root3()).unwrap();
        assert_eq!(l, QuadValue::new(2.into(), 1.into(), 3.into(), 1.into()));
        assert_eq!(
            lambda_eval(&Mat2Z::from_i64(2, 1, 1, 0), &golden()),
            Err(PellError::NotStabilizer)
        );
    }

    #[test]
    fn eps_examples() {
        let e = fundamental_eps(&golden()).unwrap();
        assert_eq!(e.norm, -1);
        assert_eq!(e.unit, PellUnit::new(2, 1, 5));
        let e = fundamental_eps(&two_plus_root3()).unwrap();
        assert_eq!(e.norm, 1);
        assert_eq!(e.unit, PellUnit::new(2, 1, 3));
    }

    #[test]
    fn oracle_examples() {
        let s = pell_oracle(5, 1000).unwrap();
        assert_eq!(s.fundamental, PellUnit::new(2, 1, 5).unwrap());
        assert_eq!(s.plus_generator, PellUnit::new(9, 4, 5).unwrap());
        assert_eq!(pell_oracle(3, 10).unwrap().fundamental, PellUnit::new(2, 1, 3).unwrap());
        assert_eq!(pell_oracle(8, 10).unwrap().fundamental, PellUnit::new(3, 1, 8).unwrap());
        assert_eq!(pell_oracle(61, 1000), Err(PellError::OracleExhausted { delta: 61, bound: 1000 }));
        assert_eq!(pell_rcf(61).unwrap().fundamental, PellUnit::new(29718, 3805, 61).unwrap());
        assert_eq!(pell_oracle(9, 10), Err(PellError::BadDiscriminant));
    }

    #[test]
    fn stabilizer_examples() {
        let s = stabilizer_from_unit(&golden(), &PellUnit::new(2, 1, 5).unwrap()).unwrap();
        assert_eq!(s, Mat2Z::from_i64(3, 2, 2, 1));
        assert!(s.is_identity_mod2());
        let s = stabilizer_from_unit(&two_plus_root3(), &PellUnit::new(2, 1, 3).unwrap()).unwrap();
        assert_eq!(s, Mat2Z::from_i64(4, -1, 1, 0));
        assert!(s.is_swap_mod2());
        let s = stabilizer_from_unit(&golden(), &PellUnit::new(9, 4, 5).unwrap()).unwrap();
        assert_eq!(s, Mat2Z::from_i64(13, 8, 8, 5));
    }

    #[test]
    fn power_examples() {
        let (b, k) = power_decompose(&Mat2Z::from_i64(13, 8, 8, 5), &golden()).unwrap();
        assert_eq!((b, k), (Mat2Z::from_i64(3, 2, 2, 1), 2));
        let (_, k) = power_decompose(&Mat2Z::from_i64(3, 2, 2, 1), &golden()).unwrap();
        assert_eq!(k, 1);
        let cube = Mat2Z::from_i64(4, -1, 1, 0).pow(3);
        assert_eq!(cube, Mat2Z::from_i64(56, -15, 15, -4));
        assert_eq!(power_decompose(&cube, &two_plus_root3()).unwrap().1, 3);
    }
}
