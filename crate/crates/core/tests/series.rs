use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use polylim_core::lattice::{
    column_moments, diagonal_moments, enumerate_staircase, enumerate_walks, WalkModel,
};
use polylim_core::multiindex::MultiIndex;
use polylim_core::series::*;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(big(p), big(d))
}

fn catalan(n: u64) -> BigInt {
    (0..n).fold(BigInt::one(), |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

fn staircase_histogram(m: usize, max_n: usize) -> BTreeMap<(usize, Vec<u32>), BigInt> {
    let mut h = BTreeMap::new();
    for n in 2..=max_n {
        for p in enumerate_staircase(n).unwrap() {
            let mv = diagonal_moments(&p, m);
            let mut key = vec![n as u32];
            key.extend(mv.higher().iter().map(|&v| v as u32));
            *h.entry((n, key)).or_insert_with(BigInt::zero) += 1;
        }
    }
    h
}

fn walk_histogram(
    model: WalkModel,
    m: usize,
    max_len: usize,
) -> BTreeMap<(usize, Vec<u32>), BigInt> {
    let mut h = BTreeMap::new();
    for len in 0..=max_len {
        for w in enumerate_walks(model, len).unwrap() {
            let mv = w.height_moments(m);
            let mut key = vec![len as u32];
            key.extend(mv.higher().iter().map(|&v| v as u32));
            *h.entry((len, key)).or_insert_with(BigInt::zero) += 1;
        }
    }
    h
}

fn series_table<C: Coeff>(s: &SeriesPoly<C>) -> BTreeMap<(usize, Vec<u32>), C> {
    let mut t = BTreeMap::new();
    for (n, p) in s.pieces().iter().enumerate() {
        for (e, c) in p {
            t.insert((n, e.clone()), c.clone());
        }
    }
    t
}

#[test]
fn staircase_counts_at_unit_weights() {
    let g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 1, 5, None).unwrap();
    assert_eq!(
        g.counts(),
        vec![big(0), big(0), big(1), big(2), big(5), big(14)]
    );
    let g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 1, 12, None).unwrap();
    for (n, c) in g.counts().into_iter().enumerate().skip(2) {
        assert_eq!(c, catalan(n as u64 - 1));
    }
}

#[test]
fn dyck_counts_at_unit_weights() {
    let d = solve_qfe::<BigInt>(EquationModel::Dyck, 1, 4, None).unwrap();
    assert_eq!(d.counts(), vec![big(1), big(0), big(1), big(0), big(2)]);
}

#[test]
fn staircase_matches_enumeration() {
    for m in 1..=2 {
        let g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, m, 10, None).unwrap();
        assert_eq!(series_table(&g), staircase_histogram(m, 10), "M = {m}");
    }
}

#[test]
fn walks_match_enumeration() {
    for model in WalkModel::ALL {
        for m in 1..=2 {
            let s = solve_qfe::<BigInt>(model.into(), m, 14, None).unwrap();
            assert_eq!(
                series_table(&s),
                walk_histogram(model, m, 14),
                "{model:?} M = {m}"
            );
        }
    }
}

#[test]
fn column_model_matches_enumeration() {
    let y = q(1, 4);
    let h = solve_qfe::<BigRational>(EquationModel::StaircaseColumn, 2, 9, Some(&y)).unwrap();
    let mut expected: BTreeMap<(usize, Vec<u32>), BigRational> = BTreeMap::new();
    for n in 2..=9 {
        for p in enumerate_staircase(n).unwrap() {
            let c = column_moments(&p, 2);
            let mut key = vec![c.width as u32];
            key.extend(c.moments.higher().iter().map(|&v| v as u32));
            let w = num_traits::pow(y.clone(), c.height);
            *expected.entry((n, key)).or_insert_with(BigRational::zero) += w;
        }
    }
    assert_eq!(series_table(&h), expected);
}

#[test]
fn residuals_vanish_for_all_models() {
    for model in EquationModel::ALL {
        for m in 1..=2 {
            if model == EquationModel::StaircaseColumn {
                let y = q(1, 4);
                let s = solve_qfe::<BigRational>(model, m, 10, Some(&y)).unwrap();
                assert!(verify_feq(model, &s, Some(&y)).unwrap().is_zero());
            } else {
                let s = solve_qfe::<BigInt>(model, m, 10, None).unwrap();
                assert!(
                    verify_feq(model, &s, None).unwrap().is_zero(),
                    "{model} M = {m}"
                );
            }
        }
    }
}

#[test]
fn residual_detects_a_perturbed_coefficient() {
    let mut g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 1, 8, None).unwrap();
    g.add_term(6, vec![6, 8], big(1));
    assert!(!verify_feq(EquationModel::StaircaseDiagonal, &g, None)
        .unwrap()
        .is_zero());
}

#[test]
fn fixed_point_iteration_agrees() {
    for model in EquationModel::ALL {
        let y = big(1);
        let y = (model == EquationModel::StaircaseColumn).then_some(&y);
        let a = solve_qfe::<BigInt>(model, 2, 8, y).unwrap();
        let b = solve_qfe_fixed_point::<BigInt>(model, 2, 8, y).unwrap();
        assert_eq!(a, b, "{model}");
    }
}

#[test]
fn parameter_errors() {
    assert_eq!(
        solve_qfe::<BigInt>(EquationModel::StaircaseColumn, 1, 6, None).unwrap_err(),
        SeriesError::MissingHeightWeight
    );
    assert!(matches!(
        solve_qfe::<BigInt>(EquationModel::Dyck, 1, 6, Some(&big(1))),
        Err(SeriesError::UnexpectedHeightWeight(_))
    ));
    assert!(solve_qfe::<BigInt>(EquationModel::Dyck, 0, 6, None).is_err());
    assert!(solve_qfe::<BigInt>(EquationModel::Dyck, 1, 1, None).is_err());
}

#[test]
fn column_series_reduces_to_diagonal_series() {
    assert!(verify_h_equals_g(2).unwrap());
    assert!(verify_h_equals_g(10).unwrap());
    let one = big(1);
    let h = solve_qfe::<BigInt>(EquationModel::StaircaseColumn, 1, 8, Some(&one)).unwrap();
    let mut g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 1, 8, None).unwrap();
    assert!(h_matches_g(&h, &g));
    g.add_term(7, vec![7, 9], big(1));
    assert!(!h_matches_g(&h, &g));
    assert!(verify_h_equals_g(15).is_err());
}

#[test]
fn counting_series_solves_quadratic() {
    // G² - (1 - 2t) G + t² = 0 at u_1 = 1
    let g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 1, 14, None).unwrap();
    let c = g.counts();
    for n in 0..=14 {
        let mut sq = BigInt::zero();
        for i in 0..=n {
            sq += &c[i] * &c[n - i];
        }
        let lin = &c[n] - if n >= 1 { big(2) * &c[n - 1] } else { big(0) };
        let t2 = if n == 2 { big(1) } else { big(0) };
        assert_eq!(sq - lin + t2, big(0), "n = {n}");
    }
}

#[test]
fn coefficients_nonnegative_and_bounded() {
    let g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 3, 9, None).unwrap();
    for n in 0..=9 {
        assert!(g.piece(n).values().all(|c| *c > big(0)));
        for k in 1..=3 {
            assert!(g.max_exponent(n, k) as u64 <= (n as u64) * (n as u64).pow(k as u32));
        }
    }
}

#[test]
fn mean_area_generating_function() {
    // t²/(1 - 4t)
    let g1 = factorial_mgf_series(
        EquationModel::StaircaseDiagonal,
        &MultiIndex::new(vec![1]),
        20,
        None,
    )
    .unwrap();
    for n in 2..=20 {
        assert_eq!(
            g1.coeff(n),
            &BigRational::from_integer(big(4).pow(n as u32 - 2))
        );
    }
    let g0 = factorial_mgf_series(
        EquationModel::StaircaseDiagonal,
        &MultiIndex::new(vec![0]),
        10,
        None,
    )
    .unwrap();
    for n in 2..=10 {
        assert_eq!(
            g0.coeff(n),
            &BigRational::from_integer(catalan(n as u64 - 1))
        );
    }
}

#[test]
fn second_factorial_moment_matches_enumeration() {
    let g2 = factorial_mgf_series(
        EquationModel::StaircaseDiagonal,
        &MultiIndex::new(vec![2]),
        6,
        None,
    )
    .unwrap();
    let oracle: u64 = enumerate_staircase(5)
        .unwrap()
        .map(|p| p.area() * (p.area() - 1) / 2)
        .sum();
    assert_eq!(g2.coeff(5), &BigRational::from_integer(big(oracle as i64)));
}

#[test]
fn jets_agree_with_sparse_expansion() {
    for model in EquationModel::ALL
        .into_iter()
        .filter(|m| *m != EquationModel::StaircaseColumn)
    {
        let s = solve_qfe::<BigInt>(model, 2, 11, None).unwrap();
        for k in MultiIndex::graded_total(2, 3) {
            let a = factorial_mgf_from_series(&s, &k);
            let b = factorial_mgf_series(model, &k, 11, None).unwrap();
            assert_eq!(a, b, "{model} k = {k}");
        }
    }
}

#[test]
fn column_factorial_moments_use_half_perimeter() {
    let one = q(1, 1);
    let k = MultiIndex::new(vec![1]);
    let g = factorial_mgf_series(EquationModel::StaircaseColumn, &k, 10, Some(&one)).unwrap();
    // total area over all polygons of half-perimeter n, as for the diagonal model
    let d = factorial_mgf_series(EquationModel::StaircaseDiagonal, &k, 10, None).unwrap();
    assert_eq!(g, d);
}

#[test]
fn finite_mean_area() {
    for n in 2..=12usize {
        let fm = finite_moments(
            EquationModel::StaircaseDiagonal,
            &MultiIndex::new(vec![1]),
            n,
        )
        .unwrap();
        let expected = BigRational::new(big(4).pow(n as u32 - 2), catalan(n as u64 - 1));
        assert_eq!(fm.factorial, expected);
        assert_eq!(fm.ordinary, expected);
    }
}

#[test]
fn finite_moments_of_unit_square() {
    for k in MultiIndex::graded_total(2, 4) {
        let fm = finite_moments(EquationModel::StaircaseDiagonal, &k, 2).unwrap();
        assert_eq!(fm.ordinary, BigRational::one(), "k = {k}");
        assert_eq!(fm.count, big(1));
    }
}

#[test]
fn finite_second_moment_of_n2() {
    let k = MultiIndex::new(vec![0, 2]);
    let fm = finite_moments(EquationModel::StaircaseDiagonal, &k, 8).unwrap();
    let (mut sum, mut count) = (0u64, 0u64);
    for p in enumerate_staircase(8).unwrap() {
        let n2 = diagonal_moments(&p, 2).values[2];
        sum += n2 * n2;
        count += 1;
    }
    assert_eq!(
        fm.ordinary,
        BigRational::new(big(sum as i64), big(count as i64))
    );
    assert!(fm.factorial < fm.ordinary);
}

#[test]
fn finite_moments_errors() {
    assert!(matches!(
        finite_moments(EquationModel::Dyck, &MultiIndex::new(vec![1]), 5),
        Err(SeriesError::ZeroCount { n0: 5 })
    ));
    assert!(finite_moments(EquationModel::StaircaseColumn, &MultiIndex::new(vec![1]), 5).is_err());
}

#[test]
fn stirling_numbers() {
    assert_eq!(stirling2(4, 2), big(7));
    assert_eq!(stirling2(5, 3), big(25));
    assert_eq!(stirling2(3, 0), big(0));
    assert_eq!(stirling2(0, 0), big(1));
}

#[test]
fn json_export_uses_strings() {
    let g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 1, 4, None).unwrap();
    let j = series_to_json(EquationModel::StaircaseDiagonal, &g, None);
    assert_eq!(j["model"], "staircase-diagonal");
    assert_eq!(j["M"], 1);
    assert_eq!(j["terms"][0]["coeff"], "1");
    assert_eq!(j["terms"][0]["exps"], serde_json::json!([1]));
    let y = q(1, 4);
    let h = solve_qfe::<BigRational>(EquationModel::StaircaseColumn, 1, 3, Some(&y)).unwrap();
    let j = series_to_json(EquationModel::StaircaseColumn, &h, Some(&y));
    assert_eq!(j["terms"][0]["coeff"], "1/4");
    assert_eq!(j["terms"][0]["width"], 1);
}
