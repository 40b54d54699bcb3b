//! Parsing of command-line values: rationals, `β` and quadratic irrationals.

use ecf_core::census::Beta;
use ecf_core::{QuadraticIrrational, RootSign};
use num_rational::Ratio;

use crate::CliError;

/// `"p/q"` or an integer.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>, CliError> {
    let bad = || CliError::Invalid(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A rational, or `inf` for the unbounded window.
pub fn parse_beta(s: &str) -> Result<Beta, CliError> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(Beta::Infinite),
        other => parse_ratio(other).map(Beta::Finite),
    }
}

/// `"A,B,C,sign"` with sign `+` or `-`.
pub fn parse_qi(s: &str) -> Result<QuadraticIrrational, CliError> {
    let bad = || CliError::Invalid(format!("expected \"A,B,C,+\" or \"A,B,C,-\", got {s:?}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let mut coef = [0i64; 3];
    for (c, p) in coef.iter_mut().zip(&parts) {
        *c = p.parse().map_err(|_| bad())?;
    }
    let sign = match parts[3] {
        "+" => RootSign::Plus,
        "-" => RootSign::Minus,
        _ => return Err(bad()),
    };
    QuadraticIrrational::from_poly(coef[0], coef[1], coef[2], sign)
        .map_err(|e| CliError::Invalid(format!("{s}: {e}")))
}

pub fn ratio_string(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn beta_string(b: &Beta) -> String {
    match b {
        Beta::Finite(r) => ratio_string(r),
        Beta::Infinite => "inf".into(),
    }
}
