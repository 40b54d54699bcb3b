//! Summatory functions of Euler's totient and their asymptotic main terms.
//!
//! The `E` variants sum `φ(2m)` over even `m`, i.e. `φ(4a)` over `a ≤ N/2`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// `φ(m)` for `m ≤ limit`, by a linear sieve.
#[derive(Clone, Debug)]
pub struct PhiSieve {
    limit: usize,
    phi: Vec<u32>,
}

impl PhiSieve {
    pub fn new(limit: usize) -> Self {
        let mut phi = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        if limit >= 1 {
            phi[1] = 1;
        }
        for i in 2..=limit {
            if phi[i] == 0 {
                phi[i] = (i - 1) as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if ip > limit {
                    break;
                }
                if i % p as usize == 0 {
                    phi[ip] = phi[i] * p;
                    break;
                }
                phi[ip] = phi[i] * (p - 1);
            }
        }
        PhiSieve { limit, phi }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn phi(&self, m: usize) -> u64 {
        self.phi[m] as u64
    }
}

/// Compensated (Neumaier) float accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TotientSums {
    pub n: u64,
    pub s0: u64,
    pub s0_odd: u64,
    pub s0_even: u64,
    pub s1: f64,
    pub s1_odd: f64,
    pub s1_even: f64,
    pub s2: f64,
    pub s2_odd: f64,
    pub s2_even: f64,
}

/// All nine sums at `N`; needs `sieve.limit() ≥ 2N`.
pub fn sums_with(sieve: &PhiSieve, n: u64) -> TotientSums {
    assert!(sieve.limit() as u64 >= 2 * n, "sieve too small");
    let mut out = TotientSums {
        n,
        s0: 0,
        s0_odd: 0,
        s0_even: 0,
        s1: 0.0,
        s1_odd: 0.0,
        s1_even: 0.0,
        s2: 0.0,
        s2_odd: 0.0,
        s2_even: 0.0,
    };
    let mut acc = [KahanSum::default(); 6];
    for m in 1..=n as usize {
        let f = sieve.phi(m);
        let mf = m as f64;
        out.s0 += f;
        acc[0].add(f as f64 / mf);
        acc[3].add(f as f64 / (mf * mf));
        if m % 2 == 1 {
            out.s0_odd += f;
            acc[1].add(f as f64 / mf);
            acc[4].add(f as f64 / (mf * mf));
        } else {
            let g = sieve.phi(2 * m);
            out.s0_even += g;
            acc[2].add(g as f64 / mf);
            acc[5].add(g as f64 / (mf * mf));
        }
    }
    out.s1 = acc[0].value();
    out.s1_odd = acc[1].value();
    out.s1_even = acc[2].value();
    out.s2 = acc[3].value();
    out.s2_odd = acc[4].value();
    out.s2_even = acc[5].value();
    out
}

pub fn sums(n: u64) -> TotientSums {
    sums_with(&PhiSieve::new(2 * n as usize), n)
}

/// Exact rational values of the nine sums (feasible for `N` up to a few thousand).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSums {
    pub s0: BigRational,
    pub s0_odd: BigRational,
    pub s0_even: BigRational,
    pub s1: BigRational,
    pub s1_odd: BigRational,
    pub s1_even: BigRational,
    pub s2: BigRational,
    pub s2_odd: BigRational,
    pub s2_even: BigRational,
}

pub fn exact_sums(sieve: &PhiSieve, n: u64) -> ExactSums {
    let z = || BigRational::zero();
    let mut e = ExactSums {
        s0: z(),
        s0_odd: z(),
        s0_even: z(),
        s1: z(),
        s1_odd: z(),
        s1_even: z(),
        s2: z(),
        s2_odd: z(),
        s2_even: z(),
    };
    for m in 1..=n {
        let f = BigRational::from_integer(BigInt::from(sieve.phi(m as usize)));
        let mm = BigRational::from_integer(BigInt::from(m));
        let t1 = &f / &mm;
        let t2 = &t1 / &mm;
        e.s0 += &f;
        e.s1 += &t1;
        e.s2 += &t2;
        if m % 2 == 1 {
            e.s0_odd += &f;
            e.s1_odd += &t1;
            e.s2_odd += &t2;
        } else {
            let g = BigRational::from_integer(BigInt::from(sieve.phi(2 * m as usize)));
            let g1 = &g / &mm;
            e.s0_even += &g;
            e.s2_even += &g1 / &mm;
            e.s1_even += g1;
        }
    }
    e
}

/// `S̃₂ᴼ(N) = Σ_{m ≤ N odd} φ(m)(N−m)²/m²`, exactly.
pub fn tilde_s2_odd(sieve: &PhiSieve, n: u64) -> BigRational {
    tilde(sieve, n, |m| m % 2 == 1)
}

/// `S̃₂ᴱ(N) = Σ_{m ≤ N, 4 | m} φ(m)(N−m)²/m²`, exactly.
pub fn tilde_s2_even(sieve: &PhiSieve, n: u64) -> BigRational {
    tilde(sieve, n, |m| m % 4 == 0)
}

fn tilde(sieve: &PhiSieve, n: u64, keep: impl Fn(u64) -> bool) -> BigRational {
    let mut acc = BigRational::zero();
    for m in (1..=n).filter(|&m| keep(m)) {
        let d = BigInt::from(n - m);
        acc += BigRational::new(BigInt::from(sieve.phi(m as usize)) * &d * &d, BigInt::from(m) * BigInt::from(m));
    }
    acc
}

/// Which printed/derived identities hold exactly at `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    /// `S₀ᴼ(N) = Σ_{a ≤ N/2} φ(4a)` as displayed.
    pub s0_odd_display: bool,
    /// `S₀ᴱ(N) = Σ_{a ≤ N/2} φ(4a)`.
    pub s0_even_display: bool,
    /// `S₁ᴼ(N) = Σ_{a ≤ N/2} φ(4a)/(2a)` as displayed.
    pub s1_odd_display: bool,
    /// `S₁ᴱ(N) = Σ_{a ≤ N/2} φ(4a)/(2a)`.
    pub s1_even_display: bool,
    /// `N²S₀ᴼ − 2N S₁ᴼ + S₀ᴼ = S̃₂ᴼ(N)` as displayed.
    pub odd_printed: bool,
    /// `N²S₂ᴼ − 2N S₁ᴼ + S₀ᴼ = S̃₂ᴼ(N)`, from expanding `(N−m)²`.
    pub odd_expanded: bool,
    /// `N²S₂ᴱ − 2N S₁ᴱ + S₀ᴱ = S̃₂ᴱ(2N)` as displayed.
    pub even_printed: bool,
}

/// Needs `sieve.limit() ≥ 2N`.
pub fn identity_report(sieve: &PhiSieve, n: u64) -> IdentityReport {
    let e = exact_sums(sieve, n);
    let nn = BigRational::from_integer(BigInt::from(n));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut phi4 = BigRational::zero();
    let mut phi4_over = BigRational::zero();
    for a in 1..=n / 2 {
        let f = BigRational::from_integer(BigInt::from(sieve.phi(4 * a as usize)));
        phi4_over += &f / BigRational::from_integer(BigInt::from(2 * a));
        phi4 += f;
    }
    let to = tilde_s2_odd(sieve, n);
    let te = tilde_s2_even(sieve, 2 * n);
    let combo = |s_hi: &BigRational, s1: &BigRational, s0: &BigRational| {
        &nn * &nn * s_hi - &two * &nn * s1 + s0
    };
    IdentityReport {
        s0_odd_display: e.s0_odd == phi4,
        s0_even_display: e.s0_even == phi4,
        s1_odd_display: e.s1_odd == phi4_over,
        s1_even_display: e.s1_even == phi4_over,
        odd_printed: combo(&e.s0_odd, &e.s1_odd, &e.s0_odd) == to,
        odd_expanded: combo(&e.s2_odd, &e.s1_odd, &e.s0_odd) == to,
        even_printed: combo(&e.s2_even, &e.s1_even, &e.s0_even) == te,
    }
}

/// `ζ(2)`, `γ` and `ζ′(2)/ζ(2)` by Euler–Maclaurin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticConstants {
    pub zeta2: f64,
    pub euler_gamma: f64,
    pub zeta_prime_over_zeta_at_2: f64,
}

impl AsymptoticConstants {
    pub fn compute() -> Self {
        let n = 1000u32;
        let nf = n as f64;
        let ln_n = libm::log(nf);
        let mut z = KahanSum::default();
        let mut zp = KahanSum::default();
        let mut h = KahanSum::default();
        for k in 1..n {
            let kf = k as f64;
            z.add(1.0 / (kf * kf));
            zp.add(libm::log(kf) / (kf * kf));
            h.add(1.0 / kf);
        }
        let zeta2 = z.value() + 1.0 / nf + 1.0 / (2.0 * nf * nf) + 1.0 / (6.0 * nf * nf * nf)
            - 1.0 / (30.0 * libm::pow(nf, 5.0));
        // Σ_{k ≥ n} ln k / k²
        let f = ln_n / (nf * nf);
        let f1 = (1.0 - 2.0 * ln_n) / (nf * nf * nf);
        let f3 = (26.0 - 24.0 * ln_n) / libm::pow(nf, 5.0);
        let tail = (ln_n + 1.0) / nf + f / 2.0 - f1 / 12.0 + f3 / 720.0;
        let zeta_prime = -(zp.value() + tail);
        let hn = h.value() + 1.0 / nf;
        let gamma = hn - ln_n - 1.0 / (2.0 * nf) + 1.0 / (12.0 * nf * nf) - 1.0 / (120.0 * libm::pow(nf, 4.0));
        AsymptoticConstants {
            zeta2,
            euler_gamma: gamma,
            zeta_prime_over_zeta_at_2: zeta_prime / zeta2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MainTerms {
    pub s0: f64,
    pub s0_odd: f64,
    pub s0_even: f64,
    pub s1: f64,
    pub s1_odd: f64,
    pub s1_even: f64,
    pub s2: f64,
    pub s2_odd: f64,
    pub s2_even: f64,
    /// `S₂ᴼ(N) − S₂ᴼ(N/θ)` and the same for `E`; both `2 log θ / (3ζ(2))`.
    pub s2_odd_diff: f64,
    pub s2_even_diff: f64,
    pub tilde_s2_odd: f64,
    pub tilde_s2_even: f64,
}

pub fn main_terms(n: f64, theta: f64) -> MainTerms {
    let k = AsymptoticConstants::compute();
    let z2 = k.zeta2;
    let g = k.euler_gamma;
    let zz = k.zeta_prime_over_zeta_at_2;
    let ln = libm::log(n);
    let ln2 = core::f64::consts::LN_2;
    let c = 2.0 / (3.0 * z2);
    MainTerms {
        s0: n * n / (2.0 * z2),
        s0_odd: n * n / (3.0 * z2),
        s0_even: n * n / (3.0 * z2),
        s1: n / z2,
        s1_odd: c * n,
        s1_even: c * n,
        s2: (ln + g - zz) / z2,
        s2_odd: c * (ln + g + 2.0 * ln2 / 3.0 - zz),
        s2_even: c * (ln + g - 4.0 * ln2 / 3.0 - zz),
        s2_odd_diff: c * libm::log(theta),
        s2_even_diff: c * libm::log(theta),
        tilde_s2_odd: c * n * n * (ln + g + 2.0 * ln2 / 3.0 - 1.5 - zz),
        tilde_s2_even: n * n / (6.0 * z2) * (ln + g - 7.0 * ln2 / 3.0 - 1.5 - zz),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Row {
    S0,
    S0Odd,
    S0Even,
    S1,
    S1Odd,
    S1Even,
    S2,
    S2Odd,
    S2Even,
    S2OddDiff,
    S2EvenDiff,
}

pub const ROWS: [Row; 11] = [
    Row::S0,
    Row::S0Odd,
    Row::S0Even,
    Row::S1,
    Row::S1Odd,
    Row::S1Even,
    Row::S2,
    Row::S2Odd,
    Row::S2Even,
    Row::S2OddDiff,
    Row::S2EvenDiff,
];

impl Row {
    pub fn name(self) -> &'static str {
        match self {
            Row::S0 => "S0",
            Row::S0Odd => "S0_odd",
            Row::S0Even => "S0_even",
            Row::S1 => "S1",
            Row::S1Odd => "S1_odd",
            Row::S1Even => "S1_even",
            Row::S2 => "S2",
            Row::S2Odd => "S2_odd",
            Row::S2Even => "S2_even",
            Row::S2OddDiff => "S2_odd_diff",
            Row::S2EvenDiff => "S2_even_diff",
        }
    }

    /// The error order claimed for this row.
    pub fn error_order(self, n: f64) -> f64 {
        let ln = libm::log(n);
        match self {
            Row::S0 | Row::S0Odd | Row::S0Even => n * ln,
            Row::S1 => ln,
            Row::S1Odd | Row::S1Even => ln * ln,
            Row::S2 => ln / n,
            Row::S2Odd | Row::S2Even | Row::S2OddDiff | Row::S2EvenDiff => ln * ln / n,
        }
    }
}

fn row_values(sieve: &PhiSieve, n: u64, theta_num: u64, theta_den: u64) -> [(f64, f64); 11] {
    let s = sums_with(sieve, n);
    let lo = sums_with(sieve, n * theta_den / theta_num);
    let m = main_terms(n as f64, theta_num as f64 / theta_den as f64);
    [
        (s.s0 as f64, m.s0),
        (s.s0_odd as f64, m.s0_odd),
        (s.s0_even as f64, m.s0_even),
        (s.s1, m.s1),
        (s.s1_odd, m.s1_odd),
        (s.s1_even, m.s1_even),
        (s.s2, m.s2),
        (s.s2_odd, m.s2_odd),
        (s.s2_even, m.s2_even),
        (s.s2_odd - lo.s2_odd, m.s2_odd_diff),
        (s.s2_even - lo.s2_even, m.s2_even_diff),
    ]
}

/// Per-row constants: 3 × the largest `|exact − predicted| / order(N)` over
/// 21 log-spaced `N` in `[10³, 10⁵]`.
pub fn calibrate(theta_num: u64, theta_den: u64) -> [f64; 11] {
    let sieve = PhiSieve::new(200_000);
    let mut worst = [0.0f64; 11];
    for i in 0..=20 {
        let n = libm::round(libm::pow(10.0, 3.0 + 2.0 * i as f64 / 20.0)) as u64;
        let vals = row_values(&sieve, n, theta_num, theta_den);
        for (j, (exact, pred)) in vals.iter().enumerate() {
            let e = libm::fabs(exact - pred) / ROWS[j].error_order(n as f64);
            worst[j] = worst[j].max(e);
        }
    }
    worst.map(|w| 3.0 * w)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyRow {
    pub row: Row,
    pub exact: f64,
    pub predicted: f64,
    pub abs_error: f64,
    pub bound: f64,
    /// `None` below `N = 10³`, where the asymptotics are not meaningful.
    pub pass: Option<bool>,
}

/// Compare the exact sums at `N` with their main terms; `θ = theta_num/theta_den ≥ 1`.
pub fn verify(n: u64, theta_num: u64, theta_den: u64) -> Vec<VerifyRow> {
    assert!(theta_den > 0 && theta_num >= theta_den, "theta must be >= 1");
    let sieve = PhiSieve::new(2 * n as usize);
    let cal = calibrate(theta_num, theta_den);
    let vals = row_values(&sieve, n, theta_num, theta_den);
    ROWS.iter()
        .zip(vals.iter())
        .zip(cal.iter())
        .map(|((&row, &(exact, predicted)), &c)| {
            let abs_error = libm::fabs(exact - predicted);
            let bound = c * row.error_order(n as f64);
            VerifyRow {
                row,
                exact,
                predicted,
                abs_error,
                bound,
                pass: if n >= 1000 { Some(abs_error <= bound) } else { None },
            }
        })
        .collect()
}

/// `φ(m)` by trial division, for tests and spot checks.
pub fn phi_naive(m: u64) -> u64 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}
