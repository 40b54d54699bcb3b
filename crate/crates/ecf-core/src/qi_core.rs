//! Exact real quadratic irrationals.
//!
//! A value is stored as a root of its primitive minimal polynomial
//! `A X² + B X + C` with `A > 0`, together with the sign in front of the
//! square root: `(−B ± √Δ) / (2A)`.  All decisions (ordering, floors,
//! reducedness) use integer arithmetic only.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::mat2::Mat2Z;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootSign {
    Plus,
    Minus,
}

impl RootSign {
    pub fn flip(self) -> RootSign {
        match self {
            RootSign::Plus => RootSign::Minus,
            RootSign::Minus => RootSign::Plus,
        }
    }

    fn as_int(self) -> i32 {
        match self {
            RootSign::Plus => 1,
            RootSign::Minus => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QiError {
    ZeroLeadingCoefficient,
    DiscriminantNotPositive,
    DiscriminantSquare,
    NonUnimodular,
}

impl fmt::Display for QiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QiError::ZeroLeadingCoefficient => "leading coefficient is zero",
            QiError::DiscriminantNotPositive => "discriminant is not positive",
            QiError::DiscriminantSquare => "discriminant is a perfect square (rational root)",
            QiError::NonUnimodular => "matrix determinant is not +1 or -1",
        };
        f.write_str(s)
    }
}

impl core::error::Error for QiError {}

/// Result of comparing a quadratic irrational with a rational: never a tie.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactOrdering {
    Less,
    Greater,
}

impl ExactOrdering {
    pub fn is_less(self) -> bool {
        self == ExactOrdering::Less
    }

    pub fn is_greater(self) -> bool {
        self == ExactOrdering::Greater
    }
}

/// Sign of `x + y √d` for `d > 0`.  Ties are only possible when `d` is a square.
pub fn sign_quad(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
    let sx = x.sign_cmp();
    let sy = y.sign_cmp();
    if sy == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    match (x * x).cmp(&(y * y * d)) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticIrrational {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    sign: RootSign,
}

/// Which of the three reduction notions a value satisfies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReducedSet {
    pub e_reduced: bool,
    pub b_reduced: bool,
    pub rcf_reduced: bool,
}

impl QuadraticIrrational {
    pub fn from_poly(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        sign: RootSign,
    ) -> Result<Self, QiError> {
        let (mut a, mut b, mut c) = (a.into(), b.into(), c.into());
        if a.is_zero() {
            return Err(QiError::ZeroLeadingCoefficient);
        }
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        if !disc.is_positive() {
            return Err(QiError::DiscriminantNotPositive);
        }
        if is_square(&disc) {
            return Err(QiError::DiscriminantSquare);
        }
        let mut sign = sign;
        if a.is_negative() {
            a = -a;
            b = -b;
            c = -c;
            sign = sign.flip();
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(QuadraticIrrational { a, b, c, sign })
    }

    pub fn a_coef(&self) -> &BigInt {
        &self.a
    }

    pub fn b_coef(&self) -> &BigInt {
        &self.b
    }

    pub fn c_coef(&self) -> &BigInt {
        &self.c
    }

    pub fn root_sign(&self) -> RootSign {
        self.sign
    }

    pub fn conjugate(&self) -> Self {
        QuadraticIrrational {
            sign: self.sign.flip(),
            ..self.clone()
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// Exact `⌊ω⌋`.
    pub fn floor(&self) -> BigInt {
        let disc = self.discriminant();
        let r = disc.sqrt();
        let two_a = BigInt::from(2) * &self.a;
        match self.sign {
            // n ≤ (−B + √Δ)/2A  ⇔  2An + B ≤ √Δ  ⇔  2An + B ≤ ⌊√Δ⌋
            RootSign::Plus => (-&self.b + r).div_floor(&two_a),
            // n ≤ (−B − √Δ)/2A  ⇔  √Δ ≤ −B − 2An  ⇔  ⌊√Δ⌋ + 1 ≤ −B − 2An
            RootSign::Minus => (-&self.b - r - BigInt::one()).div_floor(&two_a),
        }
    }

    /// Exact comparison with `num/den`.
    pub fn cmp_rational(&self, num: &BigInt, den: &BigInt) -> ExactOrdering {
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        assert!(!den.is_zero(), "zero denominator");
        // ω − n/m has the sign of −Bm − 2An ± m√Δ.
        let x = -&self.b * &den - BigInt::from(2) * &self.a * &num;
        let y = den * self.sign.as_int();
        match sign_quad(&x, &y, &self.discriminant()) {
            Ordering::Greater => ExactOrdering::Greater,
            Ordering::Less => ExactOrdering::Less,
            Ordering::Equal => unreachable!("irrational value equals a rational"),
        }
    }

    pub fn cmp_int(&self, n: i64) -> ExactOrdering {
        self.cmp_rational(&BigInt::from(n), &BigInt::one())
    }

    pub fn cmp_ratio(&self, r: &Ratio<i64>) -> ExactOrdering {
        self.cmp_rational(&BigInt::from(*r.numer()), &BigInt::from(*r.denom()))
    }

    pub fn cmp_big_ratio(&self, r: &BigRational) -> ExactOrdering {
        self.cmp_rational(r.numer(), r.denom())
    }

    /// `(aω + b) / (cω + d)` for a unimodular matrix.
    pub fn apply_mobius(&self, m: &Mat2Z) -> Result<Self, QiError> {
        let det = m.unimodular_sign().ok_or(QiError::NonUnimodular)?;
        let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
        let (pa, pb, pc) = (&self.a, &self.b, &self.c);
        // Substitute ω = (d x − b)/(−c x + a) into the minimal polynomial.
        let na = pa * d * d - pb * c * d + pc * c * c;
        let nb = BigInt::from(-2) * pa * b * d + pb * (a * d + b * c) - BigInt::from(2) * pc * a * c;
        let nc = pa * b * b - pb * a * b + pc * a * a;
        let sign = if det == 1 { self.sign } else { self.sign.flip() };
        QuadraticIrrational::from_poly(na, nb, nc, sign)
    }

    pub fn classify(&self) -> ReducedSet {
        if !self.cmp_int(1).is_greater() {
            return ReducedSet::default();
        }
        let conj = self.conjugate();
        let above_m1 = conj.cmp_int(-1).is_greater();
        let above_0 = conj.cmp_int(0).is_greater();
        let below_1 = conj.cmp_int(1).is_less();
        ReducedSet {
            e_reduced: above_m1 && below_1,
            b_reduced: above_0 && below_1,
            rcf_reduced: above_m1 && !above_0,
        }
    }

    /// The value as `(x + y√Δ)/z`.
    pub fn to_quad_value(&self) -> QuadValue {
        QuadValue::new(
            -&self.b,
            BigInt::from(self.sign.as_int()),
            self.discriminant(),
            BigInt::from(2) * &self.a,
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.to_quad_value().to_f64()
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == RootSign::Plus { '+' } else { '-' };
        write!(
            f,
            "(-({}) {} sqrt({}))/{}",
            self.b,
            s,
            self.discriminant(),
            BigInt::from(2) * &self.a
        )
    }
}

/// An element `(x + y√d) / z` of a real quadratic field, `z > 0`.
///
/// Rational values have `y = 0`.  `d` need not be squarefree.
#[derive(Clone, Debug)]
pub struct QuadValue {
    pub x: BigInt,
    pub y: BigInt,
    pub d: BigInt,
    pub z: BigInt,
}

impl QuadValue {
    pub fn new(x: BigInt, y: BigInt, d: BigInt, z: BigInt) -> Self {
        let (mut x, mut y, mut z) = if z.is_negative() { (-x, -y, -z) } else { (x, y, z) };
        if y.is_zero() || is_square(&d) {
            let r = d.sqrt();
            x += &y * r;
            y = BigInt::zero();
        }
        let g = x.gcd(&y).gcd(&z);
        if !g.is_zero() && !g.is_one() {
            x /= &g;
            y /= &g;
            z /= &g;
        }
        QuadValue { x, y, d, z }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        QuadValue::new(n.into(), BigInt::zero(), BigInt::one(), BigInt::one())
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadValue {
            y: -&self.y,
            ..self.clone()
        }
    }

    /// Field norm `(x² − y²d)/z²`.
    pub fn norm(&self) -> BigRational {
        BigRational::new(
            &self.x * &self.x - &self.y * &self.y * &self.d,
            &self.z * &self.z,
        )
    }

    /// Field trace `2x/z`.
    pub fn trace(&self) -> BigRational {
        BigRational::new(BigInt::from(2) * &self.x, self.z.clone())
    }

    /// Sign of `self − num/den`.
    pub fn cmp_rational(&self, num: &BigInt, den: &BigInt) -> Ordering {
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let x = &self.x * &den - num * &self.z;
        let y = &self.y * den;
        sign_quad(&x, &y, &self.d)
    }

    /// Exact equality as real numbers (representations may differ).
    pub fn same_value(&self, o: &QuadValue) -> bool {
        if &self.x * &o.z != &o.x * &self.z {
            return false;
        }
        if self.y.sign() != o.y.sign() {
            return false;
        }
        &self.y * &self.y * &self.d * &o.z * &o.z == &o.y * &o.y * &o.d * &self.z * &self.z
    }

    /// Product of two values over the same radicand.
    pub fn mul_same(&self, o: &QuadValue) -> Option<QuadValue> {
        if !self.is_rational() && !o.is_rational() && self.d != o.d {
            return None;
        }
        let d = if self.is_rational() { o.d.clone() } else { self.d.clone() };
        Some(QuadValue::new(
            &self.x * &o.x + &self.y * &o.y * &d,
            &self.x * &o.y + &self.y * &o.x,
            d,
            &self.z * &o.z,
        ))
    }

    /// Rewrite as `t + u√delta` with integers `t, u`, if possible.
    pub fn as_integer_unit_over(&self, delta: &BigInt) -> Option<(BigInt, BigInt)> {
        let (t, r) = self.x.div_rem(&self.z);
        if !r.is_zero() {
            return None;
        }
        if self.y.is_zero() {
            return Some((t, BigInt::zero()));
        }
        // y√d / z = u√delta  ⇔  y²d = u²z²delta
        let num = &self.y * &self.y * &self.d;
        let den = &self.z * &self.z * delta;
        let (q, r) = num.div_rem(&den);
        if !r.is_zero() || !is_square(&q) {
            return None;
        }
        let u = q.sqrt();
        Some((t, if self.y.is_negative() { -u } else { u }))
    }

    pub fn to_f64(&self) -> f64 {
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        let z = self.z.to_f64().unwrap_or(f64::NAN);
        let s = libm::sqrt(d);
        // Avoid cancellation when x and y√d nearly cancel.
        if x != 0.0 && y != 0.0 && (x > 0.0) != (y > 0.0) {
            let n = (&self.x * &self.x - &self.y * &self.y * &self.d)
                .to_f64()
                .unwrap_or(f64::NAN);
            return n / ((x - y * s) * z);
        }
        (x + y * s) / z
    }
}

impl PartialEq for QuadValue {
    fn eq(&self, o: &Self) -> bool {
        self.same_value(o)
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            if self.z.is_one() {
                return write!(f, "{}", self.x);
            }
            return write!(f, "{}/{}", self.x, self.z);
        }
        let op = if self.y.is_negative() { '-' } else { '+' };
        let yabs = self.y.abs();
        let root = if yabs.is_one() {
            alloc::format!("sqrt({})", self.d)
        } else {
            alloc::format!("{}*sqrt({})", yabs, self.d)
        };
        if self.z.is_one() {
            write!(f, "{} {} {}", self.x, op, root)
        } else {
            write!(f, "({} {} {})/{}", self.x, op, root, self.z)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(a: i64, b: i64, c: i64) -> QuadraticIrrational {
        QuadraticIrrational::from_poly(a, b, c, RootSign::Plus).unwrap()
    }

    #[test]
    fn construction_and_errors() {
        assert_eq!(
            QuadraticIrrational::from_poly(1, 0, 4, RootSign::Plus),
            Err(QiError::DiscriminantNotPositive)
        );
        assert_eq!(
            QuadraticIrrational::from_poly(1, 0, -4, RootSign::Plus),
            Err(QiError::DiscriminantSquare)
        );
        assert_eq!(
            QuadraticIrrational::from_poly(0, 1, 1, RootSign::Plus),
            Err(QiError::ZeroLeadingCoefficient)
        );
        // −2X² + 2X + 2 normalizes to X² − X − 1 with the other sign.
        let g = QuadraticIrrational::from_poly(-2, 2, 2, RootSign::Minus).unwrap();
        assert_eq!(g, qi(1, -1, -1));
    }

    #[test]
    fn floors_and_comparisons() {
        let g = qi(1, -1, -1);
        assert_eq!(g.floor(), BigInt::from(1));
        assert_eq!(g.conjugate().floor(), BigInt::from(-1));
        assert_eq!(qi(1, -4, 1).floor(), BigInt::from(3));
        assert_eq!(qi(2, -6, 1).floor(), BigInt::from(2));
        assert!(g
            .cmp_rational(&BigInt::from(13), &BigInt::from(8))
            .is_less());
        assert!(qi(1, -4, 1)
            .conjugate()
            .cmp_rational(&BigInt::from(1), &BigInt::from(3))
            .is_less());
    }

    #[test]
    fn mobius_swap_inverts() {
        let w = qi(1, -4, 1);
        let inv = w.apply_mobius(&Mat2Z::from_i64(0, 1, 1, 0)).unwrap();
        assert_eq!(inv, w.conjugate());
        assert_eq!(
            w.apply_mobius(&Mat2Z::from_i64(2, 0, 0, 1)),
            Err(QiError::NonUnimodular)
        );
    }

    #[test]
    fn quad_value_units() {
        let v = QuadValue::new(4.into(), 1.into(), 12.into(), 2.into());
        assert_eq!(v.as_integer_unit_over(&BigInt::from(3)), Some((2.into(), 1.into())));
        assert_eq!(v.as_integer_unit_over(&BigInt::from(12)), None);
        assert_eq!(v.norm(), BigRational::one());
        let sq = QuadValue::new(2.into(), 1.into(), 4.into(), 1.into());
        assert!(sq.is_rational());
        assert_eq!(sq.x, BigInt::from(4));
    }
}
