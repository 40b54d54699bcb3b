//! Dictionary between ECF/BCF digit words and integer matrices.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::cf_shifts::{omega_matrix, periodic_value, CfError, CfKind, CfWord, Digit};
use crate::mat2::Mat2Z;
use crate::qi_core::QuadraticIrrational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordMatrixError {
    NotInS,
    NotPlusWord,
    NotInSPlus,
    Cf(CfError),
}

impl fmt::Display for WordMatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordMatrixError::NotInS => f.write_str("matrix is not a product of ECF digit matrices"),
            WordMatrixError::NotPlusWord => f.write_str("word has (-e1)...(-em) = -1"),
            WordMatrixError::NotInSPlus => f.write_str("matrix is not in S+ with e = +1"),
            WordMatrixError::Cf(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for WordMatrixError {}

impl From<CfError> for WordMatrixError {
    fn from(e: CfError) -> Self {
        WordMatrixError::Cf(e)
    }
}

/// `β(w) = M(a₁,e₁)⋯M(aₘ,eₘ)`.
pub fn word_to_matrix(w: &CfWord) -> Mat2Z {
    omega_matrix(w)
}

/// The entries of `[[p′, pe], [q′, qe]]` read off with `e = sgn` of the right column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedColumns {
    pub p_prime: BigInt,
    pub q_prime: BigInt,
    pub p: BigInt,
    pub q: BigInt,
    pub e: i8,
}

/// Split `σ` as `[[p′, pe], [q′, qe]]`; needs a nonzero lower-right entry.
pub fn signed_columns(m: &Mat2Z) -> Option<SignedColumns> {
    if m.d.is_zero() {
        return None;
    }
    let e: i8 = if m.d.is_positive() { 1 } else { -1 };
    let ebig = BigInt::from(e);
    Some(SignedColumns {
        p_prime: m.a.clone(),
        q_prime: m.c.clone(),
        p: &m.b * &ebig,
        q: &m.d * &ebig,
        e,
    })
}

/// Literal membership in `𝒮`: `σ ≡ I₂` or `J₂` mod 2, `p′ > p > q > 0`, `p′ > q′ > q`.
pub fn in_s(m: &Mat2Z) -> bool {
    if !m.in_theta_tilde() {
        return false;
    }
    match signed_columns(m) {
        Some(s) => {
            s.p_prime > s.p
                && s.p > s.q
                && s.q.is_positive()
                && s.p_prime > s.q_prime
                && s.q_prime > s.q
        }
        None => false,
    }
}

fn single_digit(m: &Mat2Z) -> Option<Digit> {
    let two = BigInt::from(2);
    if m.d.is_zero()
        && m.c.is_one()
        && m.b.abs().is_one()
        && m.a >= two
        && m.a.is_even()
    {
        let a = u64::try_from(&m.a).ok()?;
        let e: i8 = if m.b.is_positive() { 1 } else { -1 };
        return Some(Digit::new(a, e));
    }
    None
}

/// Peel digit matrices off the right until a single digit matrix remains.
///
/// Accepts `𝒮` and the single-digit matrices `[[a, e], [1, 0]]`.
pub fn matrix_to_word(m: &Mat2Z) -> Result<CfWord, WordMatrixError> {
    let mut rev: Vec<Digit> = Vec::new();
    let mut cur = m.clone();
    loop {
        if let Some(d) = single_digit(&cur) {
            rev.push(d);
            break;
        }
        if !in_s(&cur) {
            return Err(WordMatrixError::NotInS);
        }
        let s = signed_columns(&cur).ok_or(WordMatrixError::NotInS)?;
        let two_q = BigInt::from(2) * &s.q;
        let a: BigInt = (&s.q_prime + &s.q).div_floor(&two_q) * BigInt::from(2);
        let next = Mat2Z::new(
            s.p.clone(),
            &s.p_prime - &a * &s.p,
            s.q.clone(),
            &s.q_prime - &a * &s.q,
        );
        assert!(next.a < cur.a, "p' must strictly decrease");
        let a = u64::try_from(&a).map_err(|_| CfError::DigitOverflow)?;
        rev.push(Digit::new(a, s.e));
        cur = next;
    }
    rev.reverse();
    let w = CfWord::new(CfKind::Ecf, rev)?;
    if word_to_matrix(&w) != *m {
        return Err(WordMatrixError::NotInS);
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SetMembership {
    pub s: bool,
    pub s_plus: bool,
    pub s_minus: bool,
    pub s_b: bool,
    pub theta: bool,
    pub theta_tilde: bool,
}

fn ge_scaled(lhs: &BigInt, r: &Ratio<i64>, rhs: &BigInt) -> bool {
    // lhs ≥ r·rhs
    lhs * BigInt::from(*r.denom()) >= BigInt::from(*r.numer()) * rhs
}

/// Evaluate every set predicate on `σ` for parameters `α, β, N`.
///
/// `s_plus` / `s_minus` are the `e = +1` / `e = −1` parts of `𝒮(α,β;N)`.
pub fn membership(m: &Mat2Z, alpha: &Ratio<i64>, beta: &Ratio<i64>, n: i64) -> SetMembership {
    let mut out = SetMembership {
        theta: m.in_theta(),
        theta_tilde: m.in_theta_tilde(),
        s: in_s(m),
        ..SetMembership::default()
    };
    let nb = BigInt::from(n);
    if out.s && m.unimodular_sign() == Some(1) {
        let s = signed_columns(m).expect("in S");
        let ok = m.trace() <= nb && ge_scaled(&s.p, alpha, &s.q) && ge_scaled(&s.p_prime, beta, &s.p);
        if ok {
            if s.e == 1 {
                out.s_plus = true;
            } else {
                out.s_minus = true;
            }
        }
    }
    out.s_b = in_s_b(m, alpha, beta, n);
    out
}

/// `[[p′,−p],[q′,−q]] ∈ SL₂(ℤ)` with `p ≥ αq`, `p′ ≥ βp`, `p′ > q′ > q ≥ 0`, `p′ − q ≤ N`.
pub fn in_s_b(m: &Mat2Z, alpha: &Ratio<i64>, beta: &Ratio<i64>, n: i64) -> bool {
    if m.unimodular_sign() != Some(1) {
        return false;
    }
    let (pp, p, qp, q) = (&m.a, -&m.b, &m.c, -&m.d);
    ge_scaled(&p, alpha, &q)
        && ge_scaled(pp, beta, &p)
        && pp > qp
        && *qp > q
        && !q.is_negative()
        && pp - &q <= BigInt::from(n)
}

/// `(ω, m / eper(ω))` for a word with `(−e₁)⋯(−eₘ) = +1`.
pub fn j_e(w: &CfWord) -> Result<(QuadraticIrrational, usize), WordMatrixError> {
    if w.kind != CfKind::Ecf {
        return Err(WordMatrixError::Cf(CfError::InvalidDigit(
            w.digits.first().copied().unwrap_or(Digit::new(0, 0)),
        )));
    }
    if w.is_empty() {
        return Err(CfError::EmptyWord.into());
    }
    if w.delta() != 1 {
        return Err(WordMatrixError::NotPlusWord);
    }
    let omega = periodic_value(w)?;
    let per = w.primitive_period();
    let base = CfWord {
        kind: CfKind::Ecf,
        digits: w.digits[..per].to_vec(),
    };
    let eper = if base.delta() == 1 { per } else { 2 * per };
    Ok((omega, w.len() / eper))
}

/// `Φ([[p′, p], [q′, q]]) = (p, p′, q)` on the `e = +1`, det `+1` part of `𝒮`.
pub fn phi_bijection(m: &Mat2Z) -> Result<(BigInt, BigInt, BigInt), WordMatrixError> {
    if !in_s(m) || m.unimodular_sign() != Some(1) || !m.d.is_positive() {
        return Err(WordMatrixError::NotInSPlus);
    }
    Ok((m.b.clone(), m.a.clone(), m.d.clone()))
}

/// Inverse of `Φ`: `q′ = (uv − 1)/m`.
pub fn phi_inverse(m: &BigInt, u: &BigInt, v: &BigInt) -> Result<Mat2Z, WordMatrixError> {
    if !m.is_positive() {
        return Err(WordMatrixError::NotInSPlus);
    }
    let (qp, r) = (u * v - BigInt::one()).div_rem(m);
    if !r.is_zero() {
        return Err(WordMatrixError::NotInSPlus);
    }
    let sigma = Mat2Z::new(u.clone(), m.clone(), qp, v.clone());
    if in_s(&sigma) && sigma.unimodular_sign() == Some(1) {
        Ok(sigma)
    } else {
        Err(WordMatrixError::NotInSPlus)
    }
}

/// Whether `σ = [[p′,−p],[q′,−q]]` is a pair of consecutive BCF convergents of `u`.
///
/// `q = 0` is allowed: it is the first pair `(a₁/1, 1/0)`.
pub fn is_consecutive_convergents(m: &Mat2Z, u: &QuadraticIrrational) -> bool {
    if m.unimodular_sign() != Some(1) {
        return false;
    }
    let (pp, p, qp, q) = (&m.a, -&m.b, &m.c, -&m.d);
    let shape = pp > qp && *qp > q && !q.is_negative() && *pp > p && p > q;
    if !shape {
        return false;
    }
    // p′ − q′u > 0  and  (p − qu) > (p′ − q′u)
    u.cmp_rational(pp, qp).is_less() && u.cmp_rational(&(pp - &p), &(qp - &q)).is_greater()
}
