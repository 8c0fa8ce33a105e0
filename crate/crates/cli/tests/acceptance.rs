//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are always printed; exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use polylim_core::asymptotics::{
    alpha, amplitude_table, limit_moment_ratio, scaling_series_f0, verify_pde_residual,
    AmplitudeModel, ExactScalar,
};
use polylim_core::lattice::{diagonal_moments, enumerate_staircase, enumerate_walks, WalkModel};
use polylim_core::multiindex::MultiIndex;
use polylim_core::series::{
    finite_moments, solve_qfe, verify_feq, verify_h_equals_g, Coeff, EquationModel, SeriesPoly,
};

type Table = BTreeMap<(usize, Vec<u32>), BigInt>;

const WALKS: [WalkModel; 4] = [
    WalkModel::Dyck,
    WalkModel::BilateralDyck,
    WalkModel::Meander,
    WalkModel::Bernoulli,
];

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn catalan(n: u64) -> BigInt {
    (0..n).fold(BigInt::one(), |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

fn k(parts: &[u32]) -> MultiIndex {
    MultiIndex::new(parts.to_vec())
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn series_catalan() -> Outcome {
    let start = Instant::now();
    let g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 1, 12, None).unwrap();
    let counts = g.counts();
    let exact = counts[..2].iter().all(Zero::is_zero)
        && (2..=12).all(|n| counts[n] == catalan(n as u64 - 1));
    let t = start.elapsed();
    let shown: Vec<String> = counts[2..6].iter().map(ToString::to_string).collect();
    outcome(
        exact && within(t, 5.0),
        format!(
            "t^2..t^5 coefficients {}, C(n-1) through order 12: {exact}, {t:.2?} (< 5 s)",
            shown.join(",")
        ),
    )
}

fn staircase_histogram(m: usize, max_n: usize) -> Table {
    let mut h = Table::new();
    for n in 2..=max_n {
        for p in enumerate_staircase(n).unwrap() {
            let mut key = vec![n as u32];
            key.extend(diagonal_moments(&p, m).higher().iter().map(|&v| v as u32));
            *h.entry((n, key)).or_insert_with(BigInt::zero) += 1;
        }
    }
    h
}

fn walk_histogram(model: WalkModel, m: usize, max_len: usize) -> Table {
    let mut h = Table::new();
    for len in 0..=max_len {
        for w in enumerate_walks(model, len).unwrap() {
            let mut key = vec![len as u32];
            key.extend(w.height_moments(m).higher().iter().map(|&v| v as u32));
            *h.entry((len, key)).or_insert_with(BigInt::zero) += 1;
        }
    }
    h
}

fn series_table<C: Coeff>(s: &SeriesPoly<C>) -> BTreeMap<(usize, Vec<u32>), C> {
    let mut t = BTreeMap::new();
    for (n, piece) in s.pieces().iter().enumerate() {
        for (e, c) in piece {
            t.insert((n, e.clone()), c.clone());
        }
    }
    t
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut terms = 0;
    for m in 1..=2 {
        let s = series_table(
            &solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, m, 10, None).unwrap(),
        );
        terms += s.len();
        if s != staircase_histogram(m, 10) {
            mismatches.push(format!("staircase M={m}"));
        }
        for w in WALKS {
            let s = series_table(&solve_qfe::<BigInt>(w.into(), m, 16, None).unwrap());
            terms += s.len();
            if s != walk_histogram(w, m, 16) {
                mismatches.push(format!("{} M={m}", w.name()));
            }
        }
    }
    let t = start.elapsed();
    let pass = mismatches.is_empty() && within(t, 60.0);
    outcome(
        pass,
        format!("{terms} coefficients compared, mismatches {mismatches:?}, {t:.2?} (< 60 s)"),
    )
}

fn feq_residuals() -> Outcome {
    let start = Instant::now();
    let mut nonzero = Vec::new();
    for model in EquationModel::ALL {
        for m in 1..=2 {
            let terms = if model == EquationModel::StaircaseColumn {
                let y = q(1, 2);
                let s = solve_qfe::<BigRational>(model, m, 12, Some(&y)).unwrap();
                verify_feq(model, &s, Some(&y)).unwrap().num_terms()
            } else {
                let s = solve_qfe::<BigInt>(model, m, 12, None).unwrap();
                verify_feq(model, &s, None).unwrap().num_terms()
            };
            if terms != 0 {
                nonzero.push(format!("{model} M={m}: {terms}"));
            }
        }
    }
    let h_equals_g = verify_h_equals_g(10).unwrap();
    let t = start.elapsed();
    outcome(
        nonzero.is_empty() && h_equals_g && within(t, 30.0),
        format!("six models at N=12, M=1,2: nonzero {nonzero:?}; H = G at N=10: {h_equals_g}; {t:.2?} (< 30 s)"),
    )
}

fn scaling_series() -> Outcome {
    let start = Instant::now();
    let f = scaling_series_f0(&AmplitudeModel::Diagonal, 1, 3).unwrap();
    let expected = [q(-1, 1), q(-1, 64), q(5, 8192), q(-15, 262144)];
    let got: Vec<BigRational> = (0..4).map(|j| f.coeff(&k(&[j]))).collect();
    let t = start.elapsed();
    let shown: Vec<String> = got.iter().map(ToString::to_string).collect();
    outcome(
        got == expected && within(t, 1.0),
        format!("F0 coefficients [{}], {t:.2?} (< 1 s)", shown.join(", ")),
    )
}

fn pde_residuals() -> Outcome {
    let start = Instant::now();
    let mut cases = vec![
        (AmplitudeModel::Diagonal, 1, 12),
        (AmplitudeModel::Diagonal, 2, 6),
    ];
    for w in WALKS {
        cases.push((AmplitudeModel::Walk(w), 1, 12));
        cases.push((AmplitudeModel::Walk(w), 2, 6));
    }
    let mut nonzero = Vec::new();
    for (model, m, order) in &cases {
        let r = verify_pde_residual(model, *m, *order).unwrap();
        if !r.is_zero() {
            nonzero.push(format!("{model} M={m}"));
        }
    }
    let t = start.elapsed();
    outcome(
        nonzero.is_empty() && within(t, 10.0),
        format!("{} residuals (staircase M=1 to order 12, M=2 to order 6, four walk models), nonzero {nonzero:?}, {t:.2?} (< 10 s)", cases.len()),
    )
}

fn limit_ratios() -> Outcome {
    let r1 = limit_moment_ratio(&k(&[2])).unwrap();
    let r2 = limit_moment_ratio(&k(&[0, 2])).unwrap();
    let e1 = ExactScalar::new(q(10, 3), -2, false);
    let e2 = ExactScalar::ratio(19, 15);
    outcome(
        r1 == e1 && r2 == e2,
        format!("k=(2): {r1} = {:.6}, k=(0,2): {r2}", r1.to_f64()),
    )
}

fn cross_formulas() -> Outcome {
    let mut bad = Vec::new();
    let table = amplitude_table(&AmplitudeModel::Diagonal, 4, 1).unwrap();
    for j in 1..=4u32 {
        let a = alpha(&AmplitudeModel::Diagonal, j as usize).unwrap();
        if a.squared != BigRational::new(BigInt::one(), BigInt::from(2).pow(9 * j)) {
            bad.push(format!("alpha_{j}^2 = {}", a.squared));
        }
        let fact: BigInt = (1..=j).map(BigInt::from).product();
        let expected = BigRational::new(fact, BigInt::from(2).pow(3 * (j + 1)));
        let f = table.f(&MultiIndex::unit(4, j as usize)).unwrap();
        if *f != expected {
            bad.push(format!("f_e{j} = {f}"));
        }
    }
    for n in 2..=12usize {
        let fm = finite_moments(EquationModel::StaircaseDiagonal, &k(&[1]), n).unwrap();
        let expected = BigRational::new(BigInt::from(4).pow(n as u32 - 2), catalan(n as u64 - 1));
        if fm.ordinary != expected {
            bad.push(format!("E[area] at n={n} = {}", fm.ordinary));
        }
    }
    let a3 = alpha(&AmplitudeModel::Diagonal, 3).unwrap();
    outcome(
        bad.is_empty(),
        format!("alpha_k^2 = 2^(-9k) and f_ek = k!/2^(3k+3) for k <= 4 (alpha_3 = {}), E[area] = 4^(n-2)/C(n-1) for n <= 12; failures {bad:?}", a3.exact),
    )
}

fn walk_amplitudes() -> Outcome {
    let f0: Vec<String> = WALKS
        .iter()
        .map(|&w| {
            let t = amplitude_table(&AmplitudeModel::Walk(w), 1, 0).unwrap();
            t.f(&k(&[0])).unwrap().to_string()
        })
        .collect();
    let boundary_ok = f0 == ["-4", "1/2", "1", "1/2"];
    let mut bad = Vec::new();
    let mut checked = 0;
    for m in 1..=2 {
        let b = amplitude_table(&AmplitudeModel::Walk(WalkModel::BilateralDyck), m, 4).unwrap();
        let me = amplitude_table(&AmplitudeModel::Walk(WalkModel::Meander), m, 4).unwrap();
        let r = amplitude_table(&AmplitudeModel::Walk(WalkModel::Bernoulli), m, 4).unwrap();
        for kk in MultiIndex::graded_total(m, 4) {
            let conv = MultiIndex::graded_up_to(&kk)
                .iter()
                .fold(BigRational::zero(), |acc, j| {
                    let rest = kk.checked_sub(j).unwrap();
                    acc + b.f(j).unwrap() * me.f(&rest).unwrap()
                });
            checked += 1;
            if *r.f(&kk).unwrap() != conv {
                bad.push(format!("M={m} k={kk}"));
            }
        }
    }
    outcome(
        boundary_ok && bad.is_empty(),
        format!("f0 (dyck, bilateral, meander, bernoulli) = ({}); Cauchy product checked at {checked} indices, failures {bad:?}", f0.join(", ")),
    )
}

fn finite_size_trend() -> Outcome {
    let start = Instant::now();
    let target = 10.0 / (3.0 * std::f64::consts::PI);
    let gap = |n: usize| {
        let m1 = finite_moments(EquationModel::StaircaseDiagonal, &k(&[1]), n)
            .unwrap()
            .ordinary;
        let m2 = finite_moments(EquationModel::StaircaseDiagonal, &k(&[2]), n)
            .unwrap()
            .ordinary;
        let ratio = m2 / (&m1 * &m1);
        (polylim_core::scalar::Field::to_f64(&ratio) - target).abs()
    };
    let (g16, g64) = (gap(16), gap(64));
    let t = start.elapsed();
    outcome(
        g64 < g16 && within(t, 60.0),
        format!("|ratio - 10/(3π)| = {g16:.6} at n=16, {g64:.6} at n=64, {t:.2?} (< 60 s)"),
    )
}

fn polylim(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_polylim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv_rows(text: &str) -> Vec<BTreeMap<String, String>> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .unwrap_or_default()
        .split(',')
        .map(String::from)
        .collect();
    lines
        .map(|l| {
            header
                .iter()
                .cloned()
                .zip(l.split(',').map(String::from))
                .collect()
        })
        .collect()
}

fn mc_reproduction(dir: &Path) -> Outcome {
    let start = Instant::now();
    let mc = dir.join("mc.csv");
    let fit = dir.join("fit.csv");
    let run = polylim(&[
        "mc",
        "--n0",
        "32,64,128,256",
        "--samples",
        "100000",
        "--seed",
        "1",
        "--out",
        mc.to_str().unwrap(),
    ]);
    if !run.status.success() {
        return outcome(
            false,
            format!("mc failed: {}", String::from_utf8_lossy(&run.stderr)),
        );
    }
    let ex = polylim(&[
        "extrapolate",
        "--input",
        mc.to_str().unwrap(),
        "--out",
        fit.to_str().unwrap(),
    ]);
    if !ex.status.success() {
        return outcome(
            false,
            format!(
                "extrapolate failed: {}",
                String::from_utf8_lossy(&ex.stderr)
            ),
        );
    }
    let rows = csv_rows(&std::fs::read_to_string(&fit).unwrap());
    let t = start.elapsed();
    let mut pass = within(t, 1800.0);
    let mut parts = Vec::new();
    for (variant, kk, target, tol) in [
        ("a", "1", 1.061, 0.01),
        ("a", "2", 1.216, 0.03),
        ("b", "2", 1.309, 0.03),
    ] {
        let row = rows
            .iter()
            .find(|r| r["family"] == "diagonal-layer" && r["variant"] == variant && r["k"] == kk);
        let Some(row) = row else {
            pass = false;
            parts.push(format!("k={kk} {variant}: missing"));
            continue;
        };
        let v: f64 = row["intercept"].parse().unwrap();
        let e: f64 = row["intercept_stderr"].parse().unwrap();
        let ok = (v - target).abs() <= tol;
        pass &= ok;
        parts.push(format!(
            "k={kk} {variant}: {v:.4} ± {e:.4} (target {target} ± {tol}{})",
            if ok { "" } else { ", OUTSIDE" }
        ));
    }
    outcome(
        pass,
        format!(
            "2n0 = 64..512, 10^5 samples, seed 1: {}; {t:.1?} (<= 30 min)",
            parts.join("; ")
        ),
    )
}

fn mc_uniformity() -> Outcome {
    let start = Instant::now();
    let out = polylim(&[
        "mc",
        "--uniformity",
        "--perimeter",
        "8,12",
        "--samples",
        "1000000",
        "--seed",
        "1",
    ]);
    let rows = csv_rows(&String::from_utf8_lossy(&out.stdout));
    let t = start.elapsed();
    let parts: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "perimeter {}: {} classes, p = {}",
                r["perimeter"],
                r["classes"],
                &r["p_value"][..r["p_value"].len().min(6)]
            )
        })
        .collect();
    let pass = out.status.success() && rows.len() == 2 && within(t, 300.0);
    outcome(
        pass,
        format!(
            "{} (p in (0.001, 0.999)), {t:.1?} (< 5 min)",
            parts.join("; ")
        ),
    )
}

fn digest(out: &Path) -> String {
    let name = format!(
        "{}.manifest.json",
        out.file_name().unwrap().to_str().unwrap()
    );
    let text = std::fs::read_to_string(out.with_file_name(name)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["sha256"].as_str().unwrap().to_string())
        .collect::<Vec<_>>()
        .join("+")
}

fn determinism(dir: &Path) -> Outcome {
    let fixture = dir.join("fixture.csv");
    std::fs::write(
        &fixture,
        "n0,family,variant,k,r,estimate,stderr,samples,seed\n8,diagonal-layer,a,1,ratio,1.03,0.001,100,1\n16,diagonal-layer,a,1,ratio,1.045,0.001,100,1\n",
    )
    .unwrap();
    let fixture = fixture.to_str().unwrap().to_string();
    let commands: Vec<(&str, Vec<&str>)> = vec![
        (
            "enumerate",
            vec!["enumerate", "--model", "sap", "--perimeter", "10"],
        ),
        (
            "series",
            vec![
                "series", "--model", "meander", "--M", "2", "--N", "12", "--verify",
            ],
        ),
        (
            "limits",
            vec!["limits", "--M", "2", "--kmax", "3", "--format", "json"],
        ),
        (
            "mc",
            vec!["mc", "--n0", "32", "--samples", "1000", "--seed", "7"],
        ),
        ("extrapolate", vec!["extrapolate", "--input", &fixture]),
    ];
    let mut bad = Vec::new();
    for (name, args) in &commands {
        let digests: Vec<String> = (0..2)
            .map(|i| {
                let out = dir.join(format!("{name}{i}.out"));
                let mut a = args.clone();
                a.extend(["--out", out.to_str().unwrap()]);
                let o = polylim(&a);
                assert!(
                    o.status.success(),
                    "{name}: {}",
                    String::from_utf8_lossy(&o.stderr)
                );
                digest(&out)
            })
            .collect();
        if digests[0] != digests[1] {
            bad.push(name.to_string());
        }
    }
    let repro: Vec<String> = (0..2)
        .map(|i| {
            let out = dir.join(format!("repro{i}"));
            let o = polylim(&["repro", "--quick", "--out", out.to_str().unwrap()]);
            assert!(
                o.status.success(),
                "repro: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            let v: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap())
                    .unwrap();
            v["outputs"]
                .as_array()
                .unwrap()
                .iter()
                .map(|o| o["sha256"].as_str().unwrap().to_string())
                .collect()
        })
        .collect();
    if repro[0] != repro[1] {
        bad.push("repro".into());
    }
    outcome(bad.is_empty(), format!("enumerate, series, limits, mc, extrapolate and repro run twice each; differing digests {bad:?}"))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("exact series reproduction", Box::new(series_catalan)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("functional-equation residuals", Box::new(feq_residuals)),
        ("scaling-series reproduction", Box::new(scaling_series)),
        ("scaling-function residuals", Box::new(pde_residuals)),
        ("limit-ratio exactness", Box::new(limit_ratios)),
        ("cross-formula consistency", Box::new(cross_formulas)),
        ("walk boundary amplitudes", Box::new(walk_amplitudes)),
        ("finite-size trend", Box::new(finite_size_trend)),
        (
            "monte carlo reproduction",
            Box::new(|| mc_reproduction(dir.path())),
        ),
        ("monte carlo uniformity", Box::new(mc_uniformity)),
        ("determinism", Box::new(|| determinism(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
