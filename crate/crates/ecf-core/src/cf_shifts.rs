//! Digit maps, Gauss shifts and periodic expansions for the even (ECF),
//! backward (BCF) and regular (RCF) continued fraction algorithms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::mat2::Mat2Z;
use crate::qi_core::{QiError, QuadValue, QuadraticIrrational, RootSign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CfKind {
    Ecf,
    Bcf,
    Rcf,
}

/// One partial quotient with its sign: the digit matrix is `[[a, e], [1, 0]]`.
///
/// ECF digits have `a` even and `e = ±1`, BCF digits have `e = −1`,
/// RCF digits have `e = +1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digit {
    pub a: u64,
    pub e: i8,
}

impl Digit {
    pub const fn new(a: u64, e: i8) -> Self {
        Digit { a, e }
    }

    pub fn matrix(self) -> Mat2Z {
        Mat2Z::digit(self.a, self.e)
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfError {
    OutOfDomain,
    DigitOverflow,
    InvalidDigit(Digit),
    EmptyWord,
    DegenerateWord,
    NotReduced,
    NonHyperbolic,
    Qi(QiError),
}

impl fmt::Display for CfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CfError::OutOfDomain => f.write_str("value is outside the shift's domain (u <= 1)"),
            CfError::DigitOverflow => f.write_str("partial quotient does not fit in 64 bits"),
            CfError::InvalidDigit(d) => write!(f, "invalid digit {d} for this expansion kind"),
            CfError::EmptyWord => f.write_str("empty word"),
            CfError::DegenerateWord => f.write_str("degenerate period word (value 1)"),
            CfError::NotReduced => f.write_str("value is not reduced for this kind"),
            CfError::NonHyperbolic => f.write_str("matrix is not hyperbolic"),
            CfError::Qi(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CfError {}

impl From<QiError> for CfError {
    fn from(e: QiError) -> Self {
        CfError::Qi(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CfWord {
    pub kind: CfKind,
    pub digits: Vec<Digit>,
}

impl CfWord {
    pub fn new(kind: CfKind, digits: Vec<Digit>) -> Result<Self, CfError> {
        for &d in &digits {
            let ok = match kind {
                CfKind::Ecf => d.a >= 2 && d.a % 2 == 0 && (d.e == 1 || d.e == -1),
                CfKind::Bcf => d.a >= 2 && d.e == -1,
                CfKind::Rcf => d.a >= 1 && d.e == 1,
            };
            if !ok {
                return Err(CfError::InvalidDigit(d));
            }
        }
        Ok(CfWord { kind, digits })
    }

    pub fn ecf(pairs: &[(u64, i8)]) -> Result<Self, CfError> {
        CfWord::new(CfKind::Ecf, pairs.iter().map(|&(a, e)| Digit::new(a, e)).collect())
    }

    pub fn bcf(digits: &[u64]) -> Result<Self, CfError> {
        CfWord::new(CfKind::Bcf, digits.iter().map(|&a| Digit::new(a, -1)).collect())
    }

    pub fn rcf(digits: &[u64]) -> Result<Self, CfError> {
        CfWord::new(CfKind::Rcf, digits.iter().map(|&a| Digit::new(a, 1)).collect())
    }

    pub fn empty(kind: CfKind) -> Self {
        CfWord { kind, digits: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Words whose periodic value would be the rational 1: all `(2,−1)` (ECF) or all `2` (BCF).
    pub fn is_degenerate(&self) -> bool {
        !self.digits.is_empty()
            && matches!(self.kind, CfKind::Ecf | CfKind::Bcf)
            && self.digits.iter().all(|d| d.a == 2 && d.e == -1)
    }

    /// `(−e₁)⋯(−eₙ)`.
    pub fn delta(&self) -> i8 {
        self.digits.iter().fold(1i8, |acc, d| -acc * d.e)
    }

    /// Length of the shortest block `u` with `self = u^k`.
    pub fn primitive_period(&self) -> usize {
        minimal_period(&self.digits)
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_period() == self.len()
    }

    pub fn repeat(&self, k: usize) -> CfWord {
        CfWord {
            kind: self.kind,
            digits: self.digits.repeat(k),
        }
    }

    fn check_period(&self) -> Result<(), CfError> {
        if self.digits.is_empty() {
            return Err(CfError::EmptyWord);
        }
        if self.is_degenerate() {
            return Err(CfError::DegenerateWord);
        }
        Ok(())
    }
}

impl fmt::Display for CfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match self.kind {
                CfKind::Ecf => write!(f, "{d}")?,
                _ => write!(f, "{}", d.a)?,
            }
        }
        f.write_str("]")
    }
}

/// Shortest `d` dividing `s.len()` such that `s` is a power of its length-`d` prefix.
pub fn minimal_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut pi = alloc::vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let d = n - pi[n - 1];
    if n % d == 0 {
        d
    } else {
        n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub preperiod: CfWord,
    pub period: CfWord,
}

fn to_u64(n: &BigInt) -> Result<u64, CfError> {
    n.to_u64().ok_or(CfError::DigitOverflow)
}

fn require_above_one(u: &QuadraticIrrational) -> Result<(), CfError> {
    if u.cmp_int(1).is_greater() {
        Ok(())
    } else {
        Err(CfError::OutOfDomain)
    }
}

/// `a = 2⌊(u+1)/2⌋`, `e = sgn(u − a)`.
pub fn ecf_digit(u: &QuadraticIrrational) -> Result<Digit, CfError> {
    require_above_one(u)?;
    let a: BigInt = (u.floor() + BigInt::one()).div_floor(&BigInt::from(2)) * BigInt::from(2);
    let e = if u.cmp_rational(&a, &BigInt::one()).is_greater() { 1 } else { -1 };
    Ok(Digit::new(to_u64(&a)?, e))
}

/// `T_E(u) = e₁ / (u − a₁)`.
pub fn ecf_step(u: &QuadraticIrrational) -> Result<QuadraticIrrational, CfError> {
    let d = ecf_digit(u)?;
    let m = Mat2Z::new(BigInt::zero(), d.e.into(), BigInt::one(), -BigInt::from(d.a));
    Ok(u.apply_mobius(&m)?)
}

/// `a = 1 + ⌊u⌋`.
pub fn bcf_digit(u: &QuadraticIrrational) -> Result<Digit, CfError> {
    require_above_one(u)?;
    Ok(Digit::new(to_u64(&(u.floor() + 1))?, -1))
}

/// `T_B(u) = 1 / (a₁ − u)`.
pub fn bcf_step(u: &QuadraticIrrational) -> Result<QuadraticIrrational, CfError> {
    let d = bcf_digit(u)?;
    let m = Mat2Z::new(BigInt::zero(), BigInt::one(), -BigInt::one(), BigInt::from(d.a));
    Ok(u.apply_mobius(&m)?)
}

pub fn rcf_digit(u: &QuadraticIrrational) -> Result<Digit, CfError> {
    require_above_one(u)?;
    Ok(Digit::new(to_u64(&u.floor())?, 1))
}

/// `T(u) = 1 / (u − ⌊u⌋)`.
pub fn rcf_step(u: &QuadraticIrrational) -> Result<QuadraticIrrational, CfError> {
    let d = rcf_digit(u)?;
    let m = Mat2Z::new(BigInt::zero(), BigInt::one(), BigInt::one(), -BigInt::from(d.a));
    Ok(u.apply_mobius(&m)?)
}

pub fn digit(u: &QuadraticIrrational, kind: CfKind) -> Result<Digit, CfError> {
    match kind {
        CfKind::Ecf => ecf_digit(u),
        CfKind::Bcf => bcf_digit(u),
        CfKind::Rcf => rcf_digit(u),
    }
}

pub fn step(u: &QuadraticIrrational, kind: CfKind) -> Result<QuadraticIrrational, CfError> {
    match kind {
        CfKind::Ecf => ecf_step(u),
        CfKind::Bcf => bcf_step(u),
        CfKind::Rcf => rcf_step(u),
    }
}

/// Eventually periodic expansion, found by exact cycle detection on the orbit.
pub fn expand(u: &QuadraticIrrational, kind: CfKind) -> Result<Expansion, CfError> {
    require_above_one(u)?;
    let mut seen: BTreeMap<QuadraticIrrational, usize> = BTreeMap::new();
    let mut digits = Vec::new();
    let mut cur = u.clone();
    loop {
        if let Some(&start) = seen.get(&cur) {
            let period = digits.split_off(start);
            return Ok(Expansion {
                preperiod: CfWord { kind, digits },
                period: CfWord { kind, digits: period },
            });
        }
        seen.insert(cur.clone(), digits.len());
        digits.push(digit(&cur, kind)?);
        cur = step(&cur, kind)?;
    }
}

/// Orbit `u, T u, …, T^{n−1} u` of a purely periodic value.
pub fn periodic_orbit(u: &QuadraticIrrational, kind: CfKind) -> Result<Vec<QuadraticIrrational>, CfError> {
    let exp = expand(u, kind)?;
    if !exp.preperiod.is_empty() {
        return Err(CfError::NotReduced);
    }
    let mut out = Vec::with_capacity(exp.period.len());
    let mut cur = u.clone();
    for _ in 0..exp.period.len() {
        let next = step(&cur, kind)?;
        out.push(cur);
        cur = next;
    }
    Ok(out)
}

/// `(p_k, q_k)` for `k = 0..=n`, starting from `(1,0)` and `(a₁,1)`.
pub fn convergents(w: &CfWord) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    out.push((p1.clone(), q1.clone()));
    let mut e_prev: i8 = 1;
    for d in &w.digits {
        let a = BigInt::from(d.a);
        let p = &a * &p1 + BigInt::from(e_prev) * &p2;
        let q = &a * &q1 + BigInt::from(e_prev) * &q2;
        p2 = core::mem::replace(&mut p1, p);
        q2 = core::mem::replace(&mut q1, q);
        out.push((p1.clone(), q1.clone()));
        e_prev = d.e;
    }
    out
}

/// `M(a₁,e₁)⋯M(aₙ,eₙ)`.
pub fn omega_matrix(w: &CfWord) -> Mat2Z {
    w.digits
        .iter()
        .fold(Mat2Z::identity(), |acc, d| &acc * &d.matrix())
}

/// `Ω` if its determinant is +1, `Ω²` otherwise.
pub fn omega_tilde(w: &CfWord) -> Mat2Z {
    let m = omega_matrix(w);
    if w.delta() == 1 {
        m
    } else {
        &m * &m
    }
}

/// `(t + √(t² − 4 det)) / 2` with `t = |Tr σ|`.
pub fn spectral_radius(m: &Mat2Z) -> Result<QuadValue, CfError> {
    let det = m.unimodular_sign().ok_or(CfError::Qi(QiError::NonUnimodular))?;
    let t = m.trace().abs();
    let disc = &t * &t - BigInt::from(4 * det as i32);
    if !disc.is_positive() || crate::qi_core::is_square(&disc) {
        return Err(CfError::NonHyperbolic);
    }
    Ok(QuadValue::new(t, BigInt::one(), disc, BigInt::from(2)))
}

/// Exact spectral radius and the length `2 log 𝔯`.
#[derive(Clone, Debug)]
pub struct Length {
    pub radius: QuadValue,
    pub rho: f64,
    /// `4 log 𝔯(Ω)`, i.e. the length if `Ω` were always squared.
    pub rho_always_squared: f64,
}

pub fn rho_length(w: &QuadraticIrrational, kind: CfKind) -> Result<Length, CfError> {
    let exp = expand(w, kind)?;
    if !exp.preperiod.is_empty() {
        return Err(CfError::NotReduced);
    }
    length_of_period(&exp.period)
}

pub fn length_of_period(period: &CfWord) -> Result<Length, CfError> {
    period.check_period()?;
    let om = omega_matrix(period);
    let tilde = if period.kind == CfKind::Bcf || period.delta() == 1 {
        om.clone()
    } else {
        &om * &om
    };
    let radius = spectral_radius(&tilde)?;
    let r_om = spectral_radius(&om)?.to_f64();
    Ok(Length {
        rho: 2.0 * libm::log(radius.to_f64()),
        rho_always_squared: 4.0 * libm::log(r_om),
        radius,
    })
}

/// The fixed point `> 1` of the period matrix, i.e. the value of the purely periodic expansion.
pub fn periodic_value(w: &CfWord) -> Result<QuadraticIrrational, CfError> {
    w.check_period()?;
    let m = omega_matrix(w);
    // fixed points of [[P, P'],[Q, Q']]: Q x² + (Q' − P) x − P' = 0, Q > 0
    let v = QuadraticIrrational::from_poly(m.c.clone(), &m.d - &m.a, -m.b.clone(), RootSign::Plus)
        .map_err(|_| CfError::NonHyperbolic)?;
    if !v.cmp_int(1).is_greater() {
        return Err(CfError::NonHyperbolic);
    }
    Ok(v)
}

/// The fixed point in `(−1, 1)` of `[[q_{n−1}eₙ, p_{n−1}eₙ], [qₙ, pₙ]]`.
pub fn galois_dual(w: &CfWord) -> Result<QuadraticIrrational, CfError> {
    w.check_period()?;
    let conv = convergents(w);
    let n = w.len();
    let en = BigInt::from(w.digits[n - 1].e);
    let (pn, qn) = &conv[n];
    let (pm, qm) = &conv[n - 1];
    let (al, be, ga, de) = (qm * &en, pm * &en, qn.clone(), pn.clone());
    for sign in [RootSign::Plus, RootSign::Minus] {
        let x = QuadraticIrrational::from_poly(ga.clone(), &de - &al, -&be, sign)
            .map_err(|_| CfError::NonHyperbolic)?;
        if x.cmp_int(-1).is_greater() && x.cmp_int(1).is_less() {
            return Ok(x);
        }
    }
    Err(CfError::NonHyperbolic)
}

/// One step of the interval map induced on `(0, 1)` (floating point, diagnostic).
pub fn unit_interval_map(x: f64, kind: CfKind) -> Result<f64, CfError> {
    match kind {
        CfKind::Ecf => {
            if !(x > 0.0 && x < 1.0) {
                return Err(CfError::OutOfDomain);
            }
            Ok(libm::fabs(1.0 / x - 2.0 * libm::floor((x + 1.0) / (2.0 * x))))
        }
        CfKind::Bcf => {
            if !(0.0..1.0).contains(&x) {
                return Err(CfError::OutOfDomain);
            }
            let y = 1.0 / (1.0 - x);
            Ok(y - libm::floor(y))
        }
        CfKind::Rcf => {
            if !(x > 0.0 && x < 1.0) {
                return Err(CfError::OutOfDomain);
            }
            let y = 1.0 / x;
            Ok(y - libm::floor(y))
        }
    }
}

/// One step of the natural extension `(u, v) ↦ (T u, e₁/(v + a₁))` (ECF) or
/// `(T u, 1/(a₁ − v))` (BCF), in floating point.
pub fn natural_extension_step(u: f64, v: f64, kind: CfKind) -> Result<(f64, f64), CfError> {
    if !(u > 1.0) {
        return Err(CfError::OutOfDomain);
    }
    match kind {
        CfKind::Ecf => {
            if !(-1.0..=1.0).contains(&v) {
                return Err(CfError::OutOfDomain);
            }
            let a = 2.0 * libm::floor((u + 1.0) / 2.0);
            let e = if u > a { 1.0 } else { -1.0 };
            Ok((e / (u - a), e / (v + a)))
        }
        CfKind::Bcf => {
            if !(0.0..=1.0).contains(&v) {
                return Err(CfError::OutOfDomain);
            }
            let a = 1.0 + libm::floor(u);
            Ok((1.0 / (a - u), 1.0 / (a - v)))
        }
        CfKind::Rcf => {
            if !(0.0..=1.0).contains(&v) {
                return Err(CfError::OutOfDomain);
            }
            let a = libm::floor(u);
            Ok((1.0 / (u - a), 1.0 / (v + a)))
        }
    }
}
