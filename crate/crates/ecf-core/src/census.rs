//! Counting engines: congruence sums over matrix sets and depth-first
//! enumeration of digit words, plus the discriminant scan for reduced values.
//!
//! Kernels work in machine integers; every quantity stays far below `2^63`
//! at the scales used here, and comparisons involving `√Δ` go through `i128`
//! with a big-integer fallback.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::time::Duration;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;

use crate::cf_shifts::{CfKind, Digit};
use crate::qi_core::{sign_quad, QuadraticIrrational, RootSign};

const PI: f64 = core::f64::consts::PI;
const ZETA2: f64 = PI * PI / 6.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CensusError {
    InvalidQuery(&'static str),
    BadDiscriminant,
}

impl fmt::Display for CensusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusError::InvalidQuery(s) => write!(f, "invalid query: {s}"),
            CensusError::BadDiscriminant => {
                f.write_str("discriminant must be positive, nonsquare and 0 or 1 mod 4")
            }
        }
    }
}

impl core::error::Error for CensusError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    E,
    B,
}

/// A `β` parameter; `Infinite` restricts to `ω* < 0` (equivalently empties `𝒮₋`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Beta {
    Finite(Ratio<i64>),
    Infinite,
}

impl Beta {
    pub fn finite(self) -> Option<Ratio<i64>> {
        match self {
            Beta::Finite(r) => Some(r),
            Beta::Infinite => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    WordDfs,
    Congruence,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::WordDfs => "word_dfs",
            Method::Congruence => "congruence",
        }
    }
}

/// Count reduced `ω` with `ω ≥ α`, `ω*` in the `β`-window and `𝔯(Ω̃(ω)) ≤ M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusQuery {
    pub kind: Kind,
    pub alpha: Ratio<i64>,
    pub beta1: Beta,
    /// Ignored for `Kind::B`.
    pub beta2: Ratio<i64>,
    pub radius_bound: Ratio<i64>,
}

const PARAM_LIMIT: i64 = 1_000_000_000;

fn check_param(r: &Ratio<i64>, what: &'static str) -> Result<(), CensusError> {
    if *r < Ratio::from_integer(1) {
        return Err(CensusError::InvalidQuery(what));
    }
    if r.numer().abs() > PARAM_LIMIT || r.denom().abs() > PARAM_LIMIT {
        return Err(CensusError::InvalidQuery("parameter numerator/denominator too large"));
    }
    Ok(())
}

impl CensusQuery {
    pub fn validate(&self) -> Result<(), CensusError> {
        check_param(&self.alpha, "alpha must be >= 1")?;
        check_param(&self.beta2, "beta2 must be >= 1")?;
        if let Beta::Finite(b) = self.beta1 {
            check_param(&b, "beta1 must be >= 1")?;
        }
        if self.radius_bound <= Ratio::from_integer(1) {
            return Err(CensusError::InvalidQuery("radius bound must exceed 1"));
        }
        let one = Ratio::from_integer(1);
        match (self.kind, self.beta1) {
            (Kind::B, Beta::Infinite) => Err(CensusError::InvalidQuery("B-kind needs a finite beta")),
            (_, Beta::Finite(b)) if self.alpha == one && b == one => {
                Err(CensusError::InvalidQuery("(alpha, beta1) = (1, 1) is excluded"))
            }
            _ => Ok(()),
        }
    }

    /// `⌊M + 1/M⌋`: for det `+1` and `𝔯 > 1`, `𝔯 ≤ M ⇔ Tr ≤ M + 1/M`.
    pub fn trace_bound(&self) -> i64 {
        trace_bound(&self.radius_bound)
    }

    pub fn main_term(&self) -> f64 {
        let m = ratio_f64(&self.radius_bound);
        match self.kind {
            Kind::E => e_main_constant(&self.alpha, self.beta1, &self.beta2) * m * m,
            Kind::B => {
                let b = self.beta1.finite().expect("validated");
                main_term_s_b(&self.alpha, &b, 1) * m * m
            }
        }
    }
}

pub fn trace_bound(m: &Ratio<i64>) -> i64 {
    let (n, d) = (*m.numer() as i128, *m.denom() as i128);
    ((n * n + d * d) / (n * d)) as i64
}

fn ratio_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `C(α,β₁,β₂) = π⁻² log(((αβ₂+1)/(αβ₂)) · (αβ₁/(αβ₁−1)))`; `β₁ = ∞` drops the second factor.
pub fn e_main_constant(alpha: &Ratio<i64>, beta1: Beta, beta2: &Ratio<i64>) -> f64 {
    let ab2 = ratio_f64(alpha) * ratio_f64(beta2);
    let mut x = (ab2 + 1.0) / ab2;
    if let Beta::Finite(b1) = beta1 {
        let ab1 = ratio_f64(alpha) * ratio_f64(&b1);
        x *= ab1 / (ab1 - 1.0);
    }
    libm::log(x) / (PI * PI)
}

pub fn main_term_s_b(alpha: &Ratio<i64>, beta: &Ratio<i64>, n: i64) -> f64 {
    let ab = ratio_f64(alpha) * ratio_f64(beta);
    let n = n as f64;
    n * n / (2.0 * ZETA2) * libm::log(ab / (ab - 1.0))
}

pub fn main_term_s_plus(alpha: &Ratio<i64>, beta: &Ratio<i64>, n: i64) -> f64 {
    let ab = ratio_f64(alpha) * ratio_f64(beta);
    let n = n as f64;
    n * n / (6.0 * ZETA2) * libm::log((ab + 1.0) / ab)
}

pub fn main_term_s_minus(alpha: &Ratio<i64>, beta: &Ratio<i64>, n: i64) -> f64 {
    let ab = ratio_f64(alpha) * ratio_f64(beta);
    let n = n as f64;
    n * n / (6.0 * ZETA2) * libm::log(ab / (ab - 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub enum CensusDetail {
    None,
    /// `|𝒮₋(α,β₁;N)|` and `|𝒮₊(α,β₂;N)|`.
    SMinusPlus { s_minus: u64, s_plus: u64 },
    Dfs(DfsTally),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusResult {
    pub exact_count: u64,
    pub main_term: f64,
    /// `(exact − main) / main`.
    pub relative_deviation: f64,
    pub elapsed: Option<Duration>,
    pub method: Method,
    pub detail: CensusDetail,
}

impl CensusResult {
    pub fn new(exact_count: u64, main_term: f64, method: Method, detail: CensusDetail) -> Self {
        CensusResult {
            exact_count,
            main_term,
            relative_deviation: relative_deviation(exact_count, main_term),
            elapsed: None,
            method,
            detail,
        }
    }
}

pub fn relative_deviation(exact: u64, main: f64) -> f64 {
    if main == 0.0 {
        if exact == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (exact as f64 - main) / main
    }
}

/// Number of `x ≡ r (mod m)` with `lo ≤ x ≤ hi`.
pub fn ap_count(r: i64, m: i64, lo: i64, hi: i64) -> u64 {
    if hi < lo {
        return 0;
    }
    (Integer::div_floor(&(hi - r), &m) - Integer::div_floor(&(lo - 1 - r), &m)) as u64
}

/// Inverse of `v` modulo `m`, if `gcd(v, m) = 1`.
pub fn inv_mod(v: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (m, v.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m))
}

fn floor_div_ratio(p: i64, r: &Ratio<i64>) -> i64 {
    // ⌊p / r⌋
    Integer::div_floor(&(p as i128 * *r.denom() as i128), &(*r.numer() as i128)) as i64
}

fn ceil_mul_ratio(p: i64, r: &Ratio<i64>) -> i64 {
    // ⌈r · p⌉
    Integer::div_ceil(&(p as i128 * *r.numer() as i128), &(*r.denom() as i128)) as i64
}

/// The three matrix sets counted by congruence sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixSet {
    /// `𝒮_B(α,β;N)`.
    SB,
    /// `e = +1` part of `𝒮(α,β;N)`.
    SPlus,
    /// `e = −1` part of `𝒮(α,β;N)`.
    SMinus,
}

/// Per-`p` counter for one matrix set; `total()` sums over `1 ≤ p ≤ p_max()`.
#[derive(Clone, Copy, Debug)]
pub struct CongruenceKernel {
    pub set: MatrixSet,
    pub alpha: Ratio<i64>,
    pub beta: Ratio<i64>,
    pub n: i64,
}

impl CongruenceKernel {
    pub fn new(set: MatrixSet, alpha: Ratio<i64>, beta: Ratio<i64>, n: i64) -> Result<Self, CensusError> {
        check_param(&alpha, "alpha must be >= 1")?;
        check_param(&beta, "beta must be >= 1")?;
        if n < 1 {
            return Err(CensusError::InvalidQuery("N must be positive"));
        }
        if set != MatrixSet::SPlus && alpha * beta <= Ratio::from_integer(1) {
            return Err(CensusError::InvalidQuery("alpha*beta must exceed 1 (the set is infinite)"));
        }
        Ok(CongruenceKernel { set, alpha, beta, n })
    }

    /// Largest `p` that can contribute.
    pub fn p_max(&self) -> i64 {
        match self.set {
            MatrixSet::SPlus => floor_div_ratio(self.n, &self.beta),
            MatrixSet::SB | MatrixSet::SMinus => {
                // αN/(αβ − 1)
                let ab1 = self.alpha * self.beta - Ratio::from_integer(1);
                let x = self.alpha * Ratio::from_integer(self.n) / ab1;
                x.floor().to_integer()
            }
        }
    }

    pub fn count_at(&self, p: i64) -> u64 {
        match self.set {
            MatrixSet::SB => self.count_s_b_at(p),
            MatrixSet::SPlus => self.count_pm_at(p, 1),
            MatrixSet::SMinus => self.count_pm_at(p, -1),
        }
    }

    pub fn total(&self) -> u64 {
        (1..=self.p_max()).map(|p| self.count_at(p)).sum()
    }

    pub fn main_term(&self) -> f64 {
        match self.set {
            MatrixSet::SB => main_term_s_b(&self.alpha, &self.beta, self.n),
            MatrixSet::SPlus => main_term_s_plus(&self.alpha, &self.beta, self.n),
            MatrixSet::SMinus => main_term_s_minus(&self.alpha, &self.beta, self.n),
        }
    }

    /// `(u, v) = (p′, q)` with `uv ≡ −1 (mod p)`, `0 ≤ v ≤ p/α`, `βp ≤ u ≤ N + v`, `u(p − v) > 1`.
    fn count_s_b_at(&self, p: i64) -> u64 {
        let vmax = floor_div_ratio(p, &self.alpha).min(p - 1);
        let lo_base = ceil_mul_ratio(p, &self.beta).max(1);
        let mut total = 0;
        for v in 0..=vmax {
            let r = if p == 1 {
                0
            } else {
                match inv_mod(v, p) {
                    Some(inv) => (p - inv) % p,
                    None => continue,
                }
            };
            let lo = if p - v == 1 { lo_base.max(2) } else { lo_base };
            total += ap_count(r, p, lo, self.n + v);
        }
        total
    }

    /// `(u, v) = (p′, q)` with `uv ≡ e (mod p)` plus the parity class of `σ`,
    /// `1 ≤ v ≤ p/α`, `v < p < u`, `u ≥ βp`, `u + ev ≤ N`.
    fn count_pm_at(&self, p: i64, e: i64) -> u64 {
        if p < 2 {
            return 0;
        }
        let vmax = floor_div_ratio(p, &self.alpha).min(p - 1);
        let lo = ceil_mul_ratio(p, &self.beta).max(p + 1);
        let m2 = 2 * p;
        let mut total = 0;
        let (start, odd_p) = if p % 2 == 1 { (2, true) } else { (1, false) };
        let mut v = start;
        while v <= vmax {
            let r = if odd_p {
                // u even and uv ≡ e (mod p)
                match inv_mod(v, p) {
                    Some(inv) => {
                        let u0 = (e * inv).rem_euclid(p);
                        if u0 % 2 == 0 {
                            u0
                        } else {
                            u0 + p
                        }
                    }
                    None => {
                        v += 2;
                        continue;
                    }
                }
            } else {
                match inv_mod(v, m2) {
                    Some(inv) => (e * inv).rem_euclid(m2),
                    None => {
                        v += 2;
                        continue;
                    }
                }
            };
            let hi = self.n - e * v;
            let mut c = ap_count(r, m2, lo, hi);
            // v = 1, u = p + 1 gives q′ = q; never an S-matrix.
            if e == 1 && v == 1 && lo <= p + 1 && p + 1 <= hi && (p + 1 - r) % m2 == 0 {
                c -= 1;
            }
            total += c;
            v += 2;
        }
        total
    }
}

pub fn count_s_b_congruence(alpha: Ratio<i64>, beta: Ratio<i64>, n: i64) -> Result<CensusResult, CensusError> {
    let k = CongruenceKernel::new(MatrixSet::SB, alpha, beta, n)?;
    Ok(CensusResult::new(k.total(), k.main_term(), Method::Congruence, CensusDetail::None))
}

pub fn count_s_pm_congruence(
    alpha: Ratio<i64>,
    beta: Ratio<i64>,
    n: i64,
    sign: i8,
) -> Result<CensusResult, CensusError> {
    let set = if sign >= 0 { MatrixSet::SPlus } else { MatrixSet::SMinus };
    let k = CongruenceKernel::new(set, alpha, beta, n)?;
    Ok(CensusResult::new(k.total(), k.main_term(), Method::Congruence, CensusDetail::None))
}

/// Kernels whose totals add up to `|𝒮₋(α,β₁;N)| + |𝒮₊(α,β₂;N)|`.
pub fn e_kernels(
    alpha: Ratio<i64>,
    beta1: Beta,
    beta2: Ratio<i64>,
    n: i64,
) -> Result<(Option<CongruenceKernel>, CongruenceKernel), CensusError> {
    let plus = CongruenceKernel::new(MatrixSet::SPlus, alpha, beta2, n)?;
    let minus = match beta1 {
        Beta::Finite(b1) => Some(CongruenceKernel::new(MatrixSet::SMinus, alpha, b1, n)?),
        Beta::Infinite => None,
    };
    Ok((minus, plus))
}

pub fn theorem1_experiment(
    alpha: Ratio<i64>,
    beta1: Beta,
    beta2: Ratio<i64>,
    n: i64,
) -> Result<CensusResult, CensusError> {
    let (minus, plus) = e_kernels(alpha, beta1, beta2, n)?;
    let s_minus = minus.map_or(0, |k| k.total());
    let s_plus = plus.total();
    let main = e_main_constant(&alpha, beta1, &beta2) * (n as f64) * (n as f64);
    Ok(CensusResult::new(
        s_minus + s_plus,
        main,
        Method::Congruence,
        CensusDetail::SMinusPlus { s_minus, s_plus },
    ))
}

/// Everything the word enumeration observed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DfsTally {
    /// Words visited.
    pub nodes: u64,
    /// Words whose matrix satisfies the `𝒮₋/𝒮₊` (E) or `𝒮_B` (B) inequalities.
    pub matrix_count: u64,
    /// E only: single-digit words (`q = 0`), which meet every inequality except `q > 0`.
    pub single_digit: u64,
    /// Words whose fixed point satisfies the `ω`/`ω*` window: `Σ_k T_k`.
    pub qi_count: u64,
    /// `by_k[k]` = number of pairs `(ω, k)`; `by_k[1]` is the primitive count.
    pub by_k: Vec<u64>,
    /// Words counted by exactly one of the two conditions.
    pub disagree: u64,
    /// Disagreeing words with `min{q(q′+eq), p(p−q)} ≤ N`.
    pub disagree_on_boundary: u64,
}

impl DfsTally {
    pub fn primitive(&self) -> u64 {
        self.by_k.get(1).copied().unwrap_or(0)
    }

    pub fn max_k(&self) -> usize {
        self.by_k.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    pub fn merge(&mut self, o: &DfsTally) {
        self.nodes += o.nodes;
        self.matrix_count += o.matrix_count;
        self.single_digit += o.single_digit;
        self.qi_count += o.qi_count;
        self.disagree += o.disagree;
        self.disagree_on_boundary += o.disagree_on_boundary;
        if self.by_k.len() < o.by_k.len() {
            self.by_k.resize(o.by_k.len(), 0);
        }
        for (a, b) in self.by_k.iter_mut().zip(&o.by_k) {
            *a += b;
        }
    }
}

/// Sign of `x + y√d` with `i128` fast path.
fn sign_quad_i128(x: i128, y: i128, d: i128) -> Ordering {
    let sx = x.cmp(&0);
    let sy = y.cmp(&0);
    if sy == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    let lhs = x.checked_mul(x);
    let rhs = y.checked_mul(y).and_then(|t| t.checked_mul(d));
    match (lhs, rhs) {
        (Some(l), Some(r)) => match l.cmp(&r) {
            Ordering::Greater => sx,
            Ordering::Less => sy,
            Ordering::Equal => Ordering::Equal,
        },
        _ => sign_quad(&BigInt::from(x), &BigInt::from(y), &BigInt::from(d)),
    }
}

/// Sign of `root − rn/rd` for the root `(−B + s√Δ)/(2A)`, `A > 0`, `rd > 0`.
fn root_vs(a: i128, b: i128, disc: i128, s: i128, rn: i128, rd: i128) -> Ordering {
    sign_quad_i128(-b * rd - 2 * a * rn, s * rd, disc)
}

#[derive(Clone, Copy)]
struct Prepared {
    kind: Kind,
    nt: i64,
    an: i64,
    ad: i64,
    /// `β` for `e = −1` words (`β₁`, or the B-kind `β`).
    bm: Option<(i64, i64)>,
    /// `β₂` for `e = +1` words.
    bp: (i64, i64),
}

impl Prepared {
    fn new(q: &CensusQuery) -> Self {
        let split = |r: &Ratio<i64>| (*r.numer(), *r.denom());
        Prepared {
            kind: q.kind,
            nt: q.trace_bound(),
            an: *q.alpha.numer(),
            ad: *q.alpha.denom(),
            bm: q.beta1.finite().map(|b| split(&b)),
            bp: split(&q.beta2),
        }
    }

    /// `x / y ≥ α`
    fn ratio_ge_alpha(&self, x: i64, y: i64) -> bool {
        x as i128 * self.ad as i128 >= self.an as i128 * y as i128
    }

    /// Whether `(2,−1)^j` (E) or `2^j` (B) satisfies the matrix inequalities:
    /// matrix `[[j+1, −j], [j, −(j−1)]]`.
    fn chain_matrix_ok(&self, j: i64) -> bool {
        let Some((bn, bd)) = self.bm else {
            return false;
        };
        if self.kind == Kind::E && j < 2 {
            return false;
        }
        self.ratio_ge_alpha(j, j - 1) && (j + 1) as i128 * bd as i128 >= bn as i128 * j as i128
    }

    fn chain_may_continue(&self, j: i64) -> bool {
        // Non-chain descendants of the length-j chain have trace ≥ 2j+2 (E) / j+3 (B).
        let floor = match self.kind {
            Kind::E => 2 * j + 2,
            Kind::B => j + 3,
        };
        floor <= self.nt || self.chain_matrix_ok(j)
    }
}

#[derive(Clone, Copy)]
struct Frame {
    p1: i64,
    p0: i64,
    q1: i64,
    q0: i64,
    e: i8,
    chain: bool,
    /// Next child digit to try.
    next_a: u64,
    next_f: i8,
}

struct Walker<'a> {
    prep: &'a Prepared,
    word: Vec<Digit>,
    /// KMP prefix function of `word`.
    pi: Vec<usize>,
    /// `delta[i] = (−e₁)⋯(−e_{i+1})`.
    delta: Vec<i8>,
    tally: DfsTally,
}

impl<'a> Walker<'a> {
    fn push_digit(&mut self, d: Digit) {
        let i = self.word.len();
        self.word.push(d);
        let mut k = if i == 0 { 0 } else { self.pi[i - 1] };
        if i > 0 {
            while k > 0 && self.word[i] != self.word[k] {
                k = self.pi[k - 1];
            }
            if self.word[i] == self.word[k] {
                k += 1;
            }
        }
        self.pi.push(k);
        let prev = if i == 0 { 1 } else { self.delta[i - 1] };
        self.delta.push(-prev * d.e);
    }

    fn pop_digit(&mut self) {
        self.word.pop();
        self.pi.pop();
        self.delta.pop();
    }

    /// `(m / eper)` for the current word (which has `δ = +1`).
    fn power_index(&self) -> usize {
        let m = self.word.len();
        let d = m - self.pi[m - 1];
        let n = if m % d == 0 { d } else { m };
        let eper = if self.delta[n - 1] == 1 { n } else { 2 * n };
        m / eper
    }

    fn evaluate(&mut self, f: &Frame) {
        self.tally.nodes += 1;
        let prep = self.prep;
        let m = self.word.len();
        if self.delta[m - 1] != 1 {
            return;
        }
        let (pp, p, qp, q, e) = (f.p1, f.p0, f.q1, f.q0, f.e as i64);
        let tr = pp + e * q;
        if tr > prep.nt {
            return;
        }
        let beta = if e == 1 && prep.kind == Kind::E { Some(prep.bp) } else { prep.bm };
        let ineq = match beta {
            Some((bn, bd)) => {
                prep.ratio_ge_alpha(p, q) && pp as i128 * bd as i128 >= bn as i128 * p as i128
            }
            None => false,
        };
        let matrix_ok = match prep.kind {
            Kind::E => {
                if q == 0 {
                    if ineq {
                        self.tally.single_digit += 1;
                    }
                    false
                } else {
                    ineq
                }
            }
            Kind::B => ineq,
        };
        if matrix_ok {
            self.tally.matrix_count += 1;
        }
        let qi_ok = tr > 2 && self.qi_window(pp, p, qp, q, e, tr);
        if qi_ok {
            self.tally.qi_count += 1;
            let k = self.power_index();
            if self.tally.by_k.len() <= k {
                self.tally.by_k.resize(k + 1, 0);
            }
            self.tally.by_k[k] += 1;
        }
        if qi_ok != matrix_ok && !(prep.kind == Kind::E && q == 0) {
            self.tally.disagree += 1;
            let b1 = q as i128 * (qp + e * q) as i128 <= prep.nt as i128;
            let b2 = e == -1 && p as i128 * (p - q) as i128 <= prep.nt as i128;
            if b1 || b2 {
                self.tally.disagree_on_boundary += 1;
            }
        }
    }

    /// Window test on the fixed point of `[[p′, pe], [q′, qe]]` (det +1).
    fn qi_window(&self, pp: i64, p: i64, qp: i64, q: i64, e: i64, tr: i64) -> bool {
        let prep = self.prep;
        let a = qp as i128;
        let b = (q * e - pp) as i128;
        let disc = tr as i128 * tr as i128 - 4;
        // ω ≥ α
        if root_vs(a, b, disc, 1, prep.an as i128, prep.ad as i128) == Ordering::Less {
            return false;
        }
        let _ = p;
        // ω* ≤ 1/β₁  (or ω* < 0 when β₁ = ∞)
        let upper = match prep.bm {
            Some((bn, bd)) => root_vs(a, b, disc, -1, bd as i128, bn as i128) != Ordering::Greater,
            None => root_vs(a, b, disc, -1, 0, 1) == Ordering::Less,
        };
        if !upper {
            return false;
        }
        match prep.kind {
            // ω* ≥ −1/β₂
            Kind::E => {
                let (bn, bd) = prep.bp;
                root_vs(a, b, disc, -1, -(bd as i128), bn as i128) != Ordering::Less
            }
            // ω* > 0
            Kind::B => root_vs(a, b, disc, -1, 0, 1) == Ordering::Greater,
        }
    }

    fn child(&self, f: &Frame, d: Digit) -> Frame {
        let a = d.a as i64;
        let e = f.e as i64;
        Frame {
            p1: a * f.p1 + e * f.p0,
            p0: f.p1,
            q1: a * f.q1 + e * f.q0,
            q0: f.q1,
            e: d.e,
            chain: f.chain && d.a == 2 && d.e == -1,
            next_a: 2,
            next_f: -1,
        }
    }

    /// Some descendant value could still be `≥ α`: `max(Ω(1), Ω(∞)) ≥ α`.
    fn alpha_reachable(&self, f: &Frame) -> bool {
        let e = f.e as i64;
        self.prep.ratio_ge_alpha(f.p1, f.q1) || self.prep.ratio_ge_alpha(f.p1 + e * f.p0, f.q1 + e * f.q0)
    }

    fn run(&mut self, root: Digit) {
        let empty = Frame {
            p1: 1,
            p0: 0,
            q1: 0,
            q0: 1,
            e: 1,
            chain: true,
            next_a: 2,
            next_f: -1,
        };
        let first = self.child(&empty, root);
        if first.p1 - empty.q1 > self.prep.nt {
            return;
        }
        self.push_digit(root);
        self.evaluate(&first);
        let mut stack: Vec<Frame> = Vec::new();
        if self.expandable(&first) {
            stack.push(first);
        } else {
            self.pop_digit();
            return;
        }
        let step = match self.prep.kind {
            Kind::E => 2,
            Kind::B => 1,
        };
        while let Some(top) = stack.last_mut() {
            let a = top.next_a;
            let fsign = top.next_f;
            // advance the cursor
            match self.prep.kind {
                Kind::E if fsign == -1 => top.next_f = 1,
                _ => {
                    top.next_a += step;
                    top.next_f = -1;
                }
            }
            let parent = *top;
            let d = Digit::new(a, if self.prep.kind == Kind::E { fsign } else { -1 });
            let c = self.child(&parent, d);
            let key = c.p1 - parent.q1;
            if key > self.prep.nt {
                // keys grow with a; both signs share the key
                stack.pop();
                self.pop_digit();
                continue;
            }
            if c.chain && !self.prep.chain_may_continue(self.word.len() as i64 + 1) {
                continue;
            }
            self.push_digit(d);
            self.evaluate(&c);
            if self.expandable(&c) {
                stack.push(c);
            } else {
                self.pop_digit();
            }
        }
    }

    fn expandable(&self, f: &Frame) -> bool {
        f.chain || self.alpha_reachable(f)
    }
}

/// First digits worth exploring.
pub fn dfs_root_digits(q: &CensusQuery) -> Vec<Digit> {
    let nt = q.trace_bound();
    let mut out = Vec::new();
    match q.kind {
        Kind::E => {
            let mut a = 2;
            while a as i64 <= nt {
                out.push(Digit::new(a, -1));
                out.push(Digit::new(a, 1));
                a += 2;
            }
        }
        Kind::B => {
            for a in 2..=nt.max(1) as u64 {
                out.push(Digit::new(a, -1));
            }
        }
    }
    out
}

/// Enumerate every word starting with `root`.
pub fn dfs_subtree(q: &CensusQuery, root: Digit) -> Result<DfsTally, CensusError> {
    q.validate()?;
    let prep = Prepared::new(q);
    let mut w = Walker {
        prep: &prep,
        word: Vec::new(),
        pi: Vec::new(),
        delta: Vec::new(),
        tally: DfsTally::default(),
    };
    w.run(root);
    Ok(w.tally)
}

/// Word enumeration result for a validated query with the tally attached.
pub fn dfs_result(q: &CensusQuery, tally: DfsTally) -> CensusResult {
    CensusResult::new(tally.primitive(), q.main_term(), Method::WordDfs, CensusDetail::Dfs(tally))
}

pub fn count_reduced_word_dfs(q: &CensusQuery) -> Result<CensusResult, CensusError> {
    q.validate()?;
    let mut total = DfsTally::default();
    for d in dfs_root_digits(q) {
        total.merge(&dfs_subtree(q, d)?);
    }
    Ok(dfs_result(q, total))
}

/// All reduced values of discriminant `Δ`, by scanning `A ≤ Δ/4` and `−(2A + √Δ) < B < 0`.
pub fn enumerate_reduced_by_disc(delta: i64, kind: CfKind) -> Result<Vec<QuadraticIrrational>, CensusError> {
    if delta <= 0 || delta.rem_euclid(4) > 1 || num_integer::Roots::sqrt(&delta).pow(2) == delta {
        return Err(CensusError::BadDiscriminant);
    }
    let r = num_integer::Roots::sqrt(&delta);
    let mut out = Vec::new();
    for a in 1..=delta.max(4) / 4 {
        let mut b = -(2 * a + r + 1);
        while b < 0 {
            let t = b * b - delta;
            if (b - delta).rem_euclid(2) == 0 && t.rem_euclid(4 * a) == 0 {
                let c = t / (4 * a);
                if a.gcd(&b).gcd(&c) == 1 {
                    let w = QuadraticIrrational::from_poly(a, b, c, RootSign::Plus)
                        .expect("nonsquare discriminant");
                    let cls = w.classify();
                    let keep = match kind {
                        CfKind::Ecf => cls.e_reduced,
                        CfKind::Bcf => cls.b_reduced,
                        CfKind::Rcf => cls.rcf_reduced,
                    };
                    if keep {
                        out.push(w);
                    }
                }
            }
            b += 1;
        }
    }
    out.sort();
    Ok(out)
}
