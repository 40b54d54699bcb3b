//! Counting lattice points `(u, v)` with `uv ≡ h (mod q)` in rectangles and
//! under lines, against the main term `φ(q)/q² · area`.

use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::census::{ap_count, inv_mod};
use crate::totient::phi_naive;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KloostermanError {
    ZeroModulus,
    NotCoprime,
    InvalidRegion(&'static str),
}

impl fmt::Display for KloostermanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KloostermanError::ZeroModulus => f.write_str("modulus must be positive"),
            KloostermanError::NotCoprime => f.write_str("h and q are not coprime"),
            KloostermanError::InvalidRegion(s) => write!(f, "invalid region: {s}"),
        }
    }
}

impl core::error::Error for KloostermanError {}

/// Half-open `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Ratio<i64>,
    pub hi: Ratio<i64>,
}

impl Interval {
    pub fn new(lo: Ratio<i64>, hi: Ratio<i64>) -> Self {
        Interval { lo, hi }
    }

    pub fn ints(lo: i64, hi: i64) -> Self {
        Interval::new(Ratio::from_integer(lo), Ratio::from_integer(hi))
    }

    pub fn len(&self) -> Ratio<i64> {
        if self.hi > self.lo {
            self.hi - self.lo
        } else {
            Ratio::from_integer(0)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    /// Integers in the interval as an inclusive range.
    fn int_bounds(&self) -> (i64, i64) {
        (self.lo.ceil().to_integer(), self.hi.ceil().to_integer() - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// `u ∈ I₁`, `v ∈ I₂`.
    Rectangle { x: Interval, y: Interval },
    /// `u ∈ I`, `0 ≤ v ≤ c + slope·u` with `slope = ±1`.
    UnderLine { x: Interval, c: Ratio<i64>, slope: i8 },
}

impl Region {
    pub fn area(&self) -> f64 {
        let f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
        match *self {
            Region::Rectangle { x, y } => f(x.len()) * f(y.len()),
            Region::UnderLine { x, c, slope } => {
                if x.is_empty() {
                    return 0.0;
                }
                let (a, b) = (f(x.lo), f(x.hi));
                f(c) * (b - a) + slope as f64 * (b * b - a * a) / 2.0
            }
        }
    }

    /// The line hypothesis: `f(I) ⊆ [0, q]` and `|I| < q`.
    pub fn validate(&self, q: i64) -> Result<(), KloostermanError> {
        if let Region::UnderLine { x, c, slope } = *self {
            if slope != 1 && slope != -1 {
                return Err(KloostermanError::InvalidRegion("slope must be +1 or -1"));
            }
            if x.len() >= Ratio::from_integer(q) {
                return Err(KloostermanError::InvalidRegion("interval longer than q"));
            }
            let zero = Ratio::from_integer(0);
            let qq = Ratio::from_integer(q);
            for end in [x.lo, x.hi] {
                let v = c + Ratio::from_integer(slope as i64) * end;
                if v < zero || v > qq {
                    return Err(KloostermanError::InvalidRegion("line leaves [0, q]"));
                }
            }
        }
        Ok(())
    }

    fn u_bounds(&self) -> (i64, i64) {
        match self {
            Region::Rectangle { x, .. } | Region::UnderLine { x, .. } => x.int_bounds(),
        }
    }

    fn v_bounds(&self, u: i64) -> (i64, i64) {
        match *self {
            Region::Rectangle { y, .. } => y.int_bounds(),
            Region::UnderLine { c, slope, .. } => {
                let top = c + Ratio::from_integer(slope as i64 * u);
                (0, top.floor().to_integer())
            }
        }
    }
}

/// `𝒩_{q,h}(Ω)`: one modular inverse per `u`, then an arithmetic progression in `v`.
pub fn count_pairs(q: i64, h: i64, region: &Region) -> Result<u64, KloostermanError> {
    if q < 1 {
        return Err(KloostermanError::ZeroModulus);
    }
    let h = h.rem_euclid(q);
    let (u0, u1) = region.u_bounds();
    let mut total = 0;
    for u in u0..=u1 {
        let (lo, hi) = region.v_bounds(u);
        if hi < lo {
            continue;
        }
        let g = u.gcd(&q);
        if h % g != 0 {
            continue;
        }
        let m = q / g;
        let r = if m == 1 {
            0
        } else {
            let inv = inv_mod((u / g).rem_euclid(m), m).expect("coprime after dividing by gcd");
            ((h / g) as i128 * inv as i128).rem_euclid(m as i128) as i64
        };
        total += ap_count(r, m, lo, hi);
    }
    Ok(total)
}

/// Double loop over every lattice point; the reference for `count_pairs`.
pub fn count_pairs_naive(q: i64, h: i64, region: &Region) -> u64 {
    let (u0, u1) = region.u_bounds();
    let mut total = 0;
    for u in u0..=u1 {
        let (lo, hi) = region.v_bounds(u);
        for v in lo..=hi {
            if (u as i128 * v as i128 - h as i128).rem_euclid(q as i128) == 0 {
                total += 1;
            }
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub count: u64,
    pub main: f64,
    /// `|count − main| / q^0.55`.
    pub normalized_error: f64,
}

pub fn main_term_deviation(q: i64, h: i64, region: &Region) -> Result<Deviation, KloostermanError> {
    if q < 1 {
        return Err(KloostermanError::ZeroModulus);
    }
    if h.gcd(&q) != 1 {
        return Err(KloostermanError::NotCoprime);
    }
    region.validate(q)?;
    let count = count_pairs(q, h, region)?;
    let qf = q as f64;
    let main = phi_naive(q as u64) as f64 / (qf * qf) * region.area();
    Ok(Deviation {
        count,
        main,
        normalized_error: libm::fabs(count as f64 - main) / libm::pow(qf, 0.55),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(q: i64) -> Region {
        Region::Rectangle {
            x: Interval::ints(0, q),
            y: Interval::ints(0, q),
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(count_pairs(5, 1, &square(5)), Ok(4));
        assert_eq!(count_pairs(7, -1, &square(7)), Ok(6));
        let r = Region::Rectangle {
            x: Interval::ints(0, 10),
            y: Interval::ints(0, 10),
        };
        assert_eq!(count_pairs(1, 3, &r), Ok(100));
        let d = main_term_deviation(2, 1, &square(2)).unwrap();
        assert_eq!(d.count, 1);
        assert!((d.main - 1.0).abs() < 1e-12);
    }

    #[test]
    fn line_main_term() {
        let q = 10007;
        let r = Region::UnderLine {
            x: Interval::ints(0, q),
            c: Ratio::from_integer(q),
            slope: -1,
        };
        assert!(r.validate(q).is_err());
        let r = Region::UnderLine {
            x: Interval::new(Ratio::from_integer(0), Ratio::new(2 * q - 1, 2)),
            c: Ratio::from_integer(q),
            slope: -1,
        };
        let d = main_term_deviation(q, 1, &r).unwrap();
        let expect = (q - 1) as f64 / 2.0;
        assert!((d.main - expect).abs() < 1.0);
        assert!(d.normalized_error < 10.0);
    }

    #[test]
    fn non_coprime_rejected() {
        assert_eq!(main_term_deviation(6, 2, &square(6)), Err(KloostermanError::NotCoprime));
    }
}
