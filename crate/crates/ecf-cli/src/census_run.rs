//! Parallel drivers for the census kernels; totals are summed in a fixed order.

use std::time::Instant;

use ecf_core::census::{
    dfs_result, dfs_root_digits, dfs_subtree, e_kernels, Beta, CensusDetail, CensusError,
    CensusQuery, CensusResult, CongruenceKernel, DfsTally, Kind, MatrixSet, Method,
};
use num_rational::Ratio;
use rayon::prelude::*;

/// `N` taken as both the trace bound of the matrix sets and the radius bound `M`.
pub fn query(kind: Kind, alpha: Ratio<i64>, beta1: Beta, beta2: Ratio<i64>, n: i64) -> CensusQuery {
    CensusQuery {
        kind,
        alpha,
        beta1,
        beta2,
        radius_bound: Ratio::from_integer(n),
    }
}

pub fn kernel_total(k: &CongruenceKernel) -> u64 {
    (1..=k.p_max()).into_par_iter().map(|p| k.count_at(p)).sum()
}

/// `|𝒮_B(α,β;N)|` for `Kind::B`, `|𝒮₋(α,β₁;N)| + |𝒮₊(α,β₂;N)|` for `Kind::E`.
pub fn run_congruence(q: &CensusQuery) -> Result<CensusResult, CensusError> {
    q.validate()?;
    let n = q.trace_bound();
    let start = Instant::now();
    let (count, detail) = match q.kind {
        Kind::B => {
            let beta = q.beta1.finite().expect("validated");
            let k = CongruenceKernel::new(MatrixSet::SB, q.alpha, beta, n)?;
            (kernel_total(&k), CensusDetail::None)
        }
        Kind::E => {
            let (minus, plus) = e_kernels(q.alpha, q.beta1, q.beta2, n)?;
            let s_minus = minus.map_or(0, |k| kernel_total(&k));
            let s_plus = kernel_total(&plus);
            (s_minus + s_plus, CensusDetail::SMinusPlus { s_minus, s_plus })
        }
    };
    let mut r = CensusResult::new(count, q.main_term(), Method::Congruence, detail);
    r.elapsed = Some(start.elapsed());
    Ok(r)
}

/// Word enumeration, one task per first digit, merged in digit order.
pub fn run_dfs(q: &CensusQuery) -> Result<CensusResult, CensusError> {
    q.validate()?;
    let start = Instant::now();
    let parts: Vec<DfsTally> = dfs_root_digits(q)
        .into_par_iter()
        .map(|d| dfs_subtree(q, d))
        .collect::<Result<_, _>>()?;
    let mut total = DfsTally::default();
    for t in &parts {
        total.merge(t);
    }
    let mut r = dfs_result(q, total);
    r.elapsed = Some(start.elapsed());
    Ok(r)
}

pub fn run(q: &CensusQuery, method: Method) -> Result<CensusResult, CensusError> {
    match method {
        Method::Congruence => run_congruence(q),
        Method::WordDfs => run_dfs(q),
    }
}

/// `10 / √N`.
pub fn default_tolerance(n: i64) -> f64 {
    10.0 / (n as f64).sqrt()
}
