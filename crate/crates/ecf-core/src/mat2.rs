//! 2x2 integer matrices with arbitrary-precision entries.

use core::fmt;
use core::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `[[a, b], [c, d]]`, acting on reals by `x -> (a x + b) / (c x + d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Z {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2Z { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2Z::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2Z::from_i64(1, 0, 0, 1)
    }

    /// The digit matrix `M(a, e) = [[a, e], [1, 0]]`.
    pub fn digit(a: u64, e: i8) -> Self {
        Mat2Z::new(a.into(), e.into(), BigInt::one(), BigInt::zero())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// `Some(+1)` or `Some(-1)` for unimodular matrices.
    pub fn unimodular_sign(&self) -> Option<i8> {
        let det = self.det();
        if det.is_one() {
            Some(1)
        } else if det == -BigInt::one() {
            Some(-1)
        } else {
            None
        }
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Option<Mat2Z> {
        let s = self.unimodular_sign()?;
        let m = Mat2Z::new(self.d.clone(), -&self.b, -&self.c, self.a.clone());
        Some(if s == 1 { m } else { m.neg() })
    }

    pub fn neg(&self) -> Mat2Z {
        Mat2Z::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn pow(&self, k: u32) -> Mat2Z {
        let mut acc = Mat2Z::identity();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    fn parity(&self) -> [bool; 4] {
        [
            self.a.is_odd(),
            self.b.is_odd(),
            self.c.is_odd(),
            self.d.is_odd(),
        ]
    }

    /// `σ ≡ I₂ (mod 2)`.
    pub fn is_identity_mod2(&self) -> bool {
        self.parity() == [true, false, false, true]
    }

    /// `σ ≡ J₂ = [[0,1],[1,0]] (mod 2)`.
    pub fn is_swap_mod2(&self) -> bool {
        self.parity() == [false, true, true, false]
    }

    /// Membership in the extended Theta group: det ±1 and `σ ≡ I₂` or `J₂` mod 2.
    pub fn in_theta_tilde(&self) -> bool {
        self.unimodular_sign().is_some() && (self.is_identity_mod2() || self.is_swap_mod2())
    }

    /// Theta group: the det +1 part of the extended group.
    pub fn in_theta(&self) -> bool {
        self.unimodular_sign() == Some(1) && (self.is_identity_mod2() || self.is_swap_mod2())
    }

    pub fn max_abs_entry(&self) -> BigInt {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default()
    }
}

impl<'a> Mul<&'a Mat2Z> for &'a Mat2Z {
    type Output = Mat2Z;
    fn mul(self, o: &'a Mat2Z) -> Mat2Z {
        Mat2Z::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl Mul for Mat2Z {
    type Output = Mat2Z;
    fn mul(self, o: Mat2Z) -> Mat2Z {
        &self * &o
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}
