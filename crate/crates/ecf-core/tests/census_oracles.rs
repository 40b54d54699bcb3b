use ecf_core::census::{
    count_reduced_word_dfs, enumerate_reduced_by_disc, theorem1_experiment, Beta, CensusDetail, CensusQuery,
    CongruenceKernel, Kind, MatrixSet,
};
use ecf_core::cf_shifts::{expand, omega_tilde, CfKind};
use ecf_core::word_matrix::membership;
use ecf_core::Mat2Z;
use num_bigint::BigInt;
use num_rational::Ratio;

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

fn ge(lhs: i64, x: &Ratio<i64>, rhs: i64) -> bool {
    lhs as i128 * *x.denom() as i128 >= *x.numer() as i128 * rhs as i128
}

/// Traces `p′ − q` of every `𝒮_B(α,β;∞)` matrix with `p′ ≤ pmax`.
fn s_b_traces(alpha: &Ratio<i64>, beta: &Ratio<i64>, pmax: i64) -> Vec<i64> {
    let mut out = Vec::new();
    for pp in 1..=pmax {
        for qp in 1..pp {
            for q in 0..qp {
                // p q′ = 1 + p′ q
                let num = 1 + pp * q;
                if num % qp != 0 {
                    continue;
                }
                let p = num / qp;
                if ge(p, alpha, q) && ge(pp, beta, p) {
                    out.push(pp - q);
                }
            }
        }
    }
    out
}

/// Traces of the `e`-part of `𝒮(α,β;∞)` with `p′ ≤ pmax`, read literally.
fn s_pm_traces(alpha: &Ratio<i64>, beta: &Ratio<i64>, e: i64, pmax: i64) -> Vec<i64> {
    let mut out = Vec::new();
    for pp in 1..=pmax {
        for p in 1..pp {
            for q in 1..p {
                // e(p′q − pq′) = 1
                let num = pp * q - e;
                if num % p != 0 {
                    continue;
                }
                let qp = num / p;
                if !(qp > q && qp < pp) {
                    continue;
                }
                let id = pp % 2 == 1 && p % 2 == 0 && qp % 2 == 0 && q % 2 == 1;
                let sw = pp % 2 == 0 && p % 2 == 1 && qp % 2 == 1 && q % 2 == 0;
                if (id || sw) && ge(p, alpha, q) && ge(pp, beta, p) {
                    out.push(pp + e * q);
                }
            }
        }
    }
    out
}

fn cumulative(traces: &[i64], n: i64) -> u64 {
    traces.iter().filter(|&&t| t <= n).count() as u64
}

const PARAMS: &[(i64, i64, i64, i64)] = &[(1, 1, 2, 1), (2, 1, 1, 1), (3, 2, 5, 3), (1, 1, 3, 1), (5, 2, 2, 1)];

#[test]
fn s_b_congruence_matches_brute_force_for_every_n() {
    for &(an, ad, bn, bd) in PARAMS {
        let (a, b) = (r(an, ad), r(bn, bd));
        if a * b <= r(1, 1) {
            continue;
        }
        // p′ ≤ N αβ/(αβ − 1)
        let ab = a * b;
        let pmax = (ab * 120 / (ab - 1)).ceil().to_integer();
        let traces = s_b_traces(&a, &b, pmax);
        for n in 1..=120 {
            let k = CongruenceKernel::new(MatrixSet::SB, a, b, n).unwrap();
            assert_eq!(k.total(), cumulative(&traces, n), "alpha={a} beta={b} N={n}");
        }
    }
}

#[test]
fn s_pm_congruence_matches_literal_scan_for_every_n() {
    for &(an, ad, bn, bd) in PARAMS {
        let (a, b) = (r(an, ad), r(bn, bd));
        for e in [1i64, -1] {
            if e == -1 && a * b <= r(1, 1) {
                continue;
            }
            let pmax = if e == 1 { 121 } else { 2 * 121 * 3 };
            let traces = s_pm_traces(&a, &b, e, pmax);
            let set = if e == 1 { MatrixSet::SPlus } else { MatrixSet::SMinus };
            for n in 1..=120 {
                let k = CongruenceKernel::new(set, a, b, n).unwrap();
                assert_eq!(k.total(), cumulative(&traces, n), "e={e} alpha={a} beta={b} N={n}");
            }
        }
    }
}

#[test]
fn membership_agrees_with_literal_scan() {
    let (a, b) = (r(3, 2), r(5, 3));
    let n = 40;
    let mut plus = 0;
    let mut minus = 0;
    let mut sb = 0;
    for pp in 1i64..=80 {
        for p in -80i64..=80 {
            for qp in 0..=80 {
                for q in -80i64..=80 {
                    if pp * q - p * qp != 1 {
                        continue;
                    }
                    let m = membership(&Mat2Z::from_i64(pp, p, qp, q), &a, &b, n);
                    plus += m.s_plus as u64;
                    minus += m.s_minus as u64;
                    sb += m.s_b as u64;
                }
            }
        }
    }
    assert_eq!(plus, CongruenceKernel::new(MatrixSet::SPlus, a, b, n).unwrap().total());
    assert_eq!(minus, CongruenceKernel::new(MatrixSet::SMinus, a, b, n).unwrap().total());
    assert_eq!(sb, CongruenceKernel::new(MatrixSet::SB, a, b, n).unwrap().total());
}

fn query(kind: Kind, alpha: Ratio<i64>, beta1: Beta, beta2: Ratio<i64>, n: i64) -> CensusQuery {
    CensusQuery {
        kind,
        alpha,
        beta1,
        beta2,
        radius_bound: Ratio::from_integer(n),
    }
}

fn dfs_tally(q: &CensusQuery) -> ecf_core::census::DfsTally {
    match count_reduced_word_dfs(q).unwrap().detail {
        CensusDetail::Dfs(t) => t,
        _ => unreachable!(),
    }
}

#[test]
fn word_dfs_matrix_count_equals_congruence_count() {
    let cases = [
        (r(1, 1), Beta::Finite(r(2, 1)), r(1, 1)),
        (r(2, 1), Beta::Finite(r(1, 1)), r(3, 2)),
        (r(1, 1), Beta::Infinite, r(1, 1)),
        (r(3, 2), Beta::Finite(r(5, 3)), r(2, 1)),
    ];
    for n in [7, 30, 151] {
        for &(a, b1, b2) in &cases {
            let t = dfs_tally(&query(Kind::E, a, b1, b2, n));
            let th = theorem1_experiment(a, b1, b2, n).unwrap();
            assert_eq!(t.matrix_count, th.exact_count, "E alpha={a} N={n}");
        }
        for (a, b) in [(r(1, 1), r(2, 1)), (r(2, 1), r(1, 1)), (r(3, 2), r(5, 3))] {
            let t = dfs_tally(&query(Kind::B, a, Beta::Finite(b), r(1, 1), n));
            let k = CongruenceKernel::new(MatrixSet::SB, a, b, n).unwrap();
            assert_eq!(t.matrix_count, k.total(), "B alpha={a} beta={b} N={n}");
        }
    }
}

/// `Σ_k #{ω reduced in the window : Tr(Ω̃(ω)^k) ≤ N}` by scanning discriminants.
fn window_count_by_disc(kind: CfKind, alpha: &Ratio<i64>, beta1: Beta, beta2: &Ratio<i64>, n: i64) -> (u64, u64) {
    let mut total = 0;
    let mut primitive = 0;
    let mut seen = std::collections::BTreeSet::new();
    for delta in 5..=(n * n - 4) {
        if delta % 4 > 1 || num_integer::Roots::sqrt(&delta).pow(2) == delta {
            continue;
        }
        for w in enumerate_reduced_by_disc(delta, kind).unwrap() {
            if !seen.insert(w.clone()) {
                continue;
            }
            let inside_alpha = !w.cmp_ratio(alpha).is_less();
            let c = w.conjugate();
            let upper = match beta1 {
                Beta::Finite(b) => !c.cmp_ratio(&b.recip()).is_greater(),
                Beta::Infinite => c.cmp_int(0).is_less(),
            };
            let lower = match kind {
                CfKind::Bcf => c.cmp_int(0).is_greater(),
                _ => !c.cmp_ratio(&-beta2.recip()).is_less(),
            };
            if !(inside_alpha && upper && lower) {
                continue;
            }
            let period = expand(&w, kind).unwrap().period;
            let m = omega_tilde(&period);
            let mut acc = m.clone();
            let mut k = 1;
            while acc.trace() <= BigInt::from(n) {
                total += 1;
                if k == 1 {
                    primitive += 1;
                }
                acc = &acc * &m;
                k += 1;
            }
        }
    }
    (total, primitive)
}

#[test]
fn word_dfs_matches_discriminant_scan() {
    let n = 14;
    for (a, b1, b2) in [
        (r(1, 1), Beta::Finite(r(2, 1)), r(1, 1)),
        (r(1, 1), Beta::Infinite, r(1, 1)),
        (r(3, 2), Beta::Finite(r(5, 3)), r(2, 1)),
    ] {
        let t = dfs_tally(&query(Kind::E, a, b1, b2, n));
        let (all, prim) = window_count_by_disc(CfKind::Ecf, &a, b1, &b2, n);
        assert_eq!((t.qi_count, t.primitive()), (all, prim), "E alpha={a}");
    }
    for (a, b) in [(r(1, 1), r(2, 1)), (r(2, 1), r(3, 2))] {
        let t = dfs_tally(&query(Kind::B, a, Beta::Finite(b), r(1, 1), n));
        let (all, prim) = window_count_by_disc(CfKind::Bcf, &a, Beta::Finite(b), &r(1, 1), n);
        assert_eq!((t.qi_count, t.primitive()), (all, prim), "B alpha={a} beta={b}");
    }
}

#[test]
fn reduced_scan_rejects_bad_discriminants() {
    assert!(enumerate_reduced_by_disc(16, CfKind::Ecf).is_err());
    assert!(enumerate_reduced_by_disc(7, CfKind::Ecf).is_err());
    assert!(enumerate_reduced_by_disc(-3, CfKind::Ecf).is_err());
    // only the golden ratio
    let v = enumerate_reduced_by_disc(5, CfKind::Rcf).unwrap();
    assert_eq!(v.len(), 1);
}
