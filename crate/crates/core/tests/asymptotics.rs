use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use polylim_core::asymptotics::*;
use polylim_core::lattice::WalkModel;
use polylim_core::multiindex::MultiIndex;

fn r(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn k(parts: &[u32]) -> MultiIndex {
    MultiIndex::new(parts.to_vec())
}

fn walk(w: WalkModel) -> AmplitudeModel {
    AmplitudeModel::Walk(w)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

#[test]
fn universal_ratios() {
    let a = limit_moment_ratio(&k(&[2])).unwrap();
    assert_eq!(a.to_string(), "10/(3π)");
    assert!(close(a.to_f64(), 10.0 / (3.0 * PI), 1e-14));
    let b = limit_moment_ratio(&k(&[0, 2])).unwrap();
    assert_eq!(b, ExactScalar::ratio(19, 15));
}

#[test]
fn ratio_matches_moment_quotient_for_every_staircase_model() {
    let models = [
        AmplitudeModel::Diagonal,
        AmplitudeModel::Column { y: r(1, 16) },
        AmplitudeModel::Column { y: r(16, 81) },
    ];
    for model in &models {
        for idx in [k(&[2, 0]), k(&[1, 1]), k(&[0, 2]), k(&[2, 1]), k(&[0, 3])] {
            let mk = limit_moment(model, &idx).unwrap();
            let mut denom = ExactScalar::one();
            for i in 1..=2 {
                let mi = limit_moment(model, &MultiIndex::unit(2, i)).unwrap();
                denom = denom.mul(&mi.powi(idx.get(i) as i32).unwrap());
            }
            assert_eq!(
                mk.div(&denom).unwrap(),
                limit_moment_ratio(&idx).unwrap(),
                "{model} {idx}"
            );
        }
    }
}

#[test]
fn dyck_area_moments_are_the_airy_moments() {
    // Brownian excursion area: √(π/8), 5/12, 15√(2π)/128, 221/1008
    let dyck = walk(WalkModel::Dyck);
    let m1 = limit_moment(&dyck, &k(&[1])).unwrap();
    assert!(close(m1.to_f64(), (PI / 8.0).sqrt(), 1e-14));
    assert_eq!(
        limit_moment(&dyck, &k(&[2])).unwrap(),
        ExactScalar::ratio(5, 12)
    );
    let m3 = limit_moment(&dyck, &k(&[3])).unwrap();
    assert!(close(m3.to_f64(), 15.0 * (2.0 * PI).sqrt() / 128.0, 1e-14));
    assert_eq!(
        limit_moment(&dyck, &k(&[4])).unwrap(),
        ExactScalar::ratio(221, 1008)
    );
}

#[test]
fn walk_area_means() {
    // meander 3√(2π)/8, bridge ∫|B| = √(2π)/8, motion ∫|B| = (2/3)√(2/π)
    let cases = [
        (WalkModel::Meander, 3.0 * (2.0 * PI).sqrt() / 8.0),
        (WalkModel::BilateralDyck, (2.0 * PI).sqrt() / 8.0),
        (WalkModel::Bernoulli, 2.0 / 3.0 * (2.0 / PI).sqrt()),
    ];
    for (w, expected) in cases {
        let m1 = limit_moment(&walk(w), &k(&[1])).unwrap();
        assert!(close(m1.to_f64(), expected, 1e-14), "{w:?}: {m1}");
    }
    // meander area second moment 59/60
    assert_eq!(
        limit_moment(&walk(WalkModel::Meander), &k(&[2])).unwrap(),
        ExactScalar::ratio(59, 60)
    );
}

#[test]
fn zeroth_moment_is_one() {
    for model in [
        AmplitudeModel::Diagonal,
        AmplitudeModel::Column { y: r(1, 16) },
        walk(WalkModel::Meander),
    ] {
        assert_eq!(
            limit_moment(&model, &k(&[0, 0])).unwrap(),
            ExactScalar::one()
        );
    }
}

#[test]
fn diagonal_first_moment() {
    assert_eq!(
        limit_moment(&AmplitudeModel::Diagonal, &k(&[1]))
            .unwrap()
            .to_string(),
        "√π/4"
    );
}

#[test]
fn direct_recursion_agrees_with_composition() {
    for m in 1..=3 {
        let table = amplitude_table(&AmplitudeModel::Diagonal, m, 6).unwrap();
        let direct = staircase_f_direct(m, 6);
        for row in &table.rows {
            assert_eq!(&row.f, &direct[&row.k], "M={m} k={}", row.k);
        }
    }
}

#[test]
fn diagonal_leading_amplitudes() {
    let table = amplitude_table(&AmplitudeModel::Diagonal, 4, 1).unwrap();
    for i in 1..=4u32 {
        let fact: i64 = (1..=i as i64).product();
        assert_eq!(
            table.f(&MultiIndex::unit(4, i as usize)).unwrap(),
            &r(fact, 1 << (3 * (i + 1)))
        );
    }
}

#[test]
fn scaling_function_series() {
    let f = scaling_series_f0(&AmplitudeModel::Diagonal, 1, 3).unwrap();
    let expected = [r(-1, 1), r(-1, 64), r(5, 8192), r(-15, 262144)];
    for (j, e) in expected.iter().enumerate() {
        assert_eq!(&f.coeff(&k(&[j as u32])), e, "ε^{j}");
    }
}

#[test]
fn residuals_vanish() {
    let models = [
        AmplitudeModel::Diagonal,
        walk(WalkModel::Dyck),
        walk(WalkModel::BilateralDyck),
        walk(WalkModel::Meander),
        walk(WalkModel::Bernoulli),
    ];
    for model in &models {
        for (m, order) in [(1, 12), (2, 6), (3, 5)] {
            let res = verify_pde_residual(model, m, order).unwrap();
            assert!(
                res.is_zero(),
                "{model} M={m}: {:?}",
                res.terms().iter().next()
            );
        }
    }
    assert!(matches!(
        verify_pde_residual(&AmplitudeModel::Column { y: r(1, 16) }, 1, 4),
        Err(AsymptoticsError::Unsupported(_))
    ));
}

#[test]
fn meander_relation_needs_its_signs() {
    // +ε_1(½F + Σ...) with right-hand side 4 leaves a residual already at low order.
    let m = 1;
    let order = 4;
    let fm = scaling_series_f0(&walk(WalkModel::Meander), m, order).unwrap();
    let fd = scaling_series_f0(&walk(WalkModel::Dyck), m, order).unwrap();
    let op = fm.scale(&r(1, 2)).add(&fm.euler(1).scale(&r(3, 2)));
    let res = op
        .times_eps(1)
        .add(&fm.mul(&fd))
        .sub(&MPoly::constant(m, order, r(4, 1)));
    assert!(!res.is_zero());
    assert_eq!(res.coeff(&k(&[0])), r(-8, 1));
}

#[test]
fn residual_detects_a_perturbed_amplitude() {
    let f = scaling_series_f0(&AmplitudeModel::Diagonal, 2, 4).unwrap();
    let mut bumped = MPoly::zero(2, 4);
    for (idx, c) in f.terms() {
        let c = if *idx == k(&[1, 1]) {
            c + r(1, 1000)
        } else {
            c.clone()
        };
        bumped.add_term(idx.clone(), c);
    }
    let op = bumped
        .scale(&r(1, 2))
        .sub(&bumped.euler(1).scale(&r(3, 2)))
        .sub(&bumped.euler(2).scale(&r(2, 1)));
    let res = op
        .times_eps(1)
        .scale(&r(1, 16))
        .add(&bumped.raise(1).scale(&r(2, 4)))
        .add(&bumped.mul(&bumped))
        .sub(&MPoly::constant(2, 4, r(1, 1)));
    assert!(!res.is_zero());
}

#[test]
fn alpha_diagonal() {
    for kk in 1..=6 {
        let a = alpha(&AmplitudeModel::Diagonal, kk).unwrap();
        assert!(close(a.value, 2f64.powf(-4.5 * kk as f64), 1e-14));
        assert_eq!(a.squared, r(1, 1i64 << (9 * kk)));
    }
    assert!(alpha(&walk(WalkModel::Dyck), 1).is_err());
}

#[test]
fn column_constants() {
    let c = ModelConstants::column(3, &r(1, 16)).unwrap();
    assert_eq!(c.u_c, r(9, 16));
    assert_eq!(c.f0, r(-2, 1));
    assert_eq!(c.f_e, vec![r(1, 1), r(2, 1), r(6, 1)]);
    // α_k = y^{(1-k)/4} 2^{3-5k/2}
    let y = r(16, 81);
    for kk in 1..=4usize {
        let a = alpha(&AmplitudeModel::Column { y: y.clone() }, kk).unwrap();
        let expected =
            (16.0f64 / 81.0).powf((1.0 - kk as f64) / 4.0) * 2f64.powf(3.0 - 2.5 * kk as f64);
        assert!(close(a.value, expected, 1e-13), "k={kk}");
    }
    assert!(matches!(
        ModelConstants::column(1, &r(1, 4)),
        Err(AsymptoticsError::IrrationalConstant(_))
    ));
    assert!(ModelConstants::column(1, &r(2, 1)).is_err());
}

#[test]
fn float_and_exact_tables_agree() {
    let exact = c_table::<BigRational>(3, 5);
    let fast = c_table::<f32>(3, 5);
    for idx in MultiIndex::graded_total(3, 5) {
        let e = num_traits::ToPrimitive::to_f64(exact.get(&idx).unwrap()).unwrap();
        let f = *fast.get(&idx).unwrap() as f64;
        assert!((e - f).abs() <= 1e-5 * e.abs().max(1.0));
    }
}

#[test]
fn moment_growth() {
    let report = moment_growth_check(1, 20).unwrap();
    assert_eq!(report.rows.len(), 20);
    assert!(report
        .rows
        .iter()
        .all(|row| row.moment > 0.0 && row.moment.is_finite()));
    let ratios: Vec<f64> = report.rows.iter().map(|row| row.root_ratio).collect();
    assert!(ratios[19] < ratios[4]);
    assert!(ratios.iter().all(|&x| x < 1.0));
    assert!(report.rows[19].carleman > report.rows[9].carleman + 1.0);
    assert!(report.rows[19].decay[1] < report.rows[4].decay[1]);
    assert!(moment_growth_check(1, 0).is_err());
    assert!(moment_growth_check(1, MAX_GROWTH_ORDER + 1).is_err());
}

#[test]
fn exports() {
    let t = amplitude_table(&AmplitudeModel::Diagonal, 2, 2).unwrap();
    let csv = t.to_csv();
    assert!(csv.starts_with("k1,k2,gamma,c,f,f_float\n"));
    assert!(csv.contains("\n0,2,7/2,-19/2,"));
    let json = t.to_json();
    assert_eq!(json["u_c"], "1/4");
    assert_eq!(json["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn model_names_parse() {
    assert_eq!(
        "column:1/16".parse::<AmplitudeModel>().unwrap(),
        AmplitudeModel::Column { y: r(1, 16) }
    );
    assert_eq!(
        "meander".parse::<AmplitudeModel>().unwrap(),
        walk(WalkModel::Meander)
    );
    assert!("column:x".parse::<AmplitudeModel>().is_err());
}
