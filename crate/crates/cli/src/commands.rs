use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use polylim_core::asymptotics::{
    alpha, amplitude_table, limit_moment, AmplitudeModel, ExactScalar,
};
use polylim_core::lattice::{
    column_moments, diagonal_moments, enumerate_sap, enumerate_staircase, enumerate_walks,
    layer_moments, LayerFamily, MomentVariant, WalkModel,
};
use polylim_core::montecarlo::{
    chi_square_uniformity, extrapolate as fit_line, mc_run_many, read_csv, write_csv, Fit,
    McConfig, McError, McRow, RatioSeriesPoint, RowKind,
};
use polylim_core::multiindex::MultiIndex;
use polylim_core::scalar::{parse_rational, rational_string};
use polylim_core::series::{
    factorial_mgf_series, finite_moments, series_to_json, solve_qfe, verify_feq, verify_h_equals_g,
    EquationModel,
};

use crate::output::{fmt_float, render, write_atomic, Format, Manifest, Report};
use crate::{Failure, OutputArgs};

fn input(e: impl Display) -> anyhow::Error {
    Failure::Input(e.to_string()).into()
}

/// Seed of the chain at half-perimeter `n0`.
pub fn chain_seed(seed: u64, n0: usize) -> u64 {
    seed ^ (n0 as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Desk-scale half-perimeters, i.e. perimeters 64 to 512.
pub const DEFAULT_HALF_PERIMETERS: [usize; 4] = [32, 64, 128, 256];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Diagonal,
    Vertical,
}

impl From<Family> for LayerFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Diagonal => LayerFamily::Diagonal,
            Family::Vertical => LayerFamily::Vertical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumModel {
    Staircase,
    Sap,
    Dyck,
    BilateralDyck,
    Meander,
    Bernoulli,
}

impl EnumModel {
    fn walk(self) -> Option<WalkModel> {
        match self {
            EnumModel::Dyck => Some(WalkModel::Dyck),
            EnumModel::BilateralDyck => Some(WalkModel::BilateralDyck),
            EnumModel::Meander => Some(WalkModel::Meander),
            EnumModel::Bernoulli => Some(WalkModel::Bernoulli),
            _ => None,
        }
    }
}

#[derive(Args, Clone, Serialize)]
pub struct EnumerateArgs {
    #[arg(long, value_enum, default_value = "staircase")]
    pub model: EnumModel,
    /// Half-perimeter of polygons, or walk length.
    #[arg(long)]
    pub n0: Option<usize>,
    /// Perimeter of self-avoiding polygons.
    #[arg(long)]
    pub perimeter: Option<usize>,
    /// Walk length.
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
    /// Diagonals or columns; walks ignore it.
    #[arg(long, value_enum, default_value = "diagonal")]
    pub family: Family,
    /// One row per distinct parameter vector with its count.
    #[arg(long)]
    pub histogram: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn csv_line<I: IntoIterator<Item = String>>(fields: I) -> String {
    let mut s = fields.into_iter().collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

fn quoted(s: impl Display) -> String {
    let s = s.to_string();
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s
    }
}

/// An object's printed form and its moments.
type Enumerated = (String, Vec<u64>);

pub fn enumerate(a: &EnumerateArgs) -> anyhow::Result<Report> {
    let kmax = a.kmax;
    let names = |p: &'static str| (1..=kmax).map(move |k| format!("{p}{k}"));
    let (size, columns, objects): (usize, Vec<String>, Vec<Enumerated>) = match a.model {
        EnumModel::Staircase => {
            let n0 =
                a.n0.ok_or_else(|| input("staircase enumeration needs --n0"))?;
            let objs = enumerate_staircase(n0)
                .map_err(input)?
                .map(|p| {
                    let m = match a.family {
                        Family::Diagonal => diagonal_moments(&p, kmax),
                        Family::Vertical => column_moments(&p, kmax).moments,
                    };
                    (p.to_lattice_polygon().to_string(), m.higher().to_vec())
                })
                .collect();
            (n0, names("n").collect(), objs)
        }
        EnumModel::Sap => {
            let perimeter = a
                .perimeter
                .or(a.n0.map(|n| 2 * n))
                .ok_or_else(|| input("sap enumeration needs --perimeter"))?;
            let objs = enumerate_sap(perimeter)
                .map_err(input)?
                .map(|p| {
                    let (va, vb) = layer_moments(&p, kmax, a.family.into());
                    let mut m = va.higher().to_vec();
                    m.extend_from_slice(vb.higher());
                    (p.to_string(), m)
                })
                .collect();
            (perimeter, names("a").chain(names("b")).collect(), objs)
        }
        model => {
            let walk = model.walk().expect("walk model");
            let len = a
                .length
                .or(a.n0)
                .ok_or_else(|| input("walk enumeration needs --length"))?;
            let objs = enumerate_walks(walk, len)
                .map_err(input)?
                .map(|w| (w.to_string(), w.height_moments(kmax).higher().to_vec()))
                .collect();
            (len, names("n").collect(), objs)
        }
    };
    let mut csv;
    let json;
    if a.histogram {
        let mut hist: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for (_, m) in &objects {
            *hist.entry(m.clone()).or_default() += 1;
        }
        csv = csv_line(
            ["size".to_string()]
                .into_iter()
                .chain(columns.iter().cloned())
                .chain(["count".into()]),
        );
        for (m, c) in &hist {
            csv += &csv_line(
                [size.to_string()]
                    .into_iter()
                    .chain(m.iter().map(u64::to_string))
                    .chain([c.to_string()]),
            );
        }
        json = json!({
            "model": a.model, "size": size, "columns": columns,
            "rows": hist.iter().map(|(m, c)| json!({"moments": m, "count": c})).collect::<Vec<_>>(),
        });
    } else {
        csv = csv_line(
            ["object".to_string(), "size".into()]
                .into_iter()
                .chain(columns.iter().cloned())
                .chain(["count".into()]),
        );
        for (o, m) in &objects {
            csv += &csv_line(
                [o.clone(), size.to_string()]
                    .into_iter()
                    .chain(m.iter().map(u64::to_string))
                    .chain(["1".into()]),
            );
        }
        json = json!({
            "model": a.model, "size": size, "columns": columns,
            "rows": objects.iter().map(|(o, m)| json!({"object": o, "moments": m, "count": 1})).collect::<Vec<_>>(),
        });
    }
    eprintln!("{} objects", objects.len());
    Ok(Report::new(csv, json))
}

#[derive(Args, Clone, Serialize)]
pub struct SeriesArgs {
    #[arg(long, default_value = "staircase-diagonal")]
    pub model: String,
    /// Number of moment variables.
    #[arg(long = "M", default_value_t = 1)]
    pub m: usize,
    /// Truncation order.
    #[arg(long = "N", default_value_t = 10)]
    pub n: usize,
    /// Multi-index of a factorial moment series, e.g. `1` or `0,2`. Repeatable.
    #[arg(long = "k")]
    pub k: Vec<String>,
    /// Height weight of the column model, `p/q` or decimal.
    #[arg(long)]
    pub y: Option<String>,
    /// Substitute the solution back into its functional equation.
    #[arg(long)]
    pub verify: bool,
    /// Compare the two staircase functional equations at M = 1 up to order N.
    #[arg(long = "check-h-equals-g", alias = "check-H-equals-G")]
    pub check_h_equals_g: bool,
    /// Exact finite-size moments at this size for every `--k`.
    #[arg(long)]
    pub finite: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_multi_index(s: &str) -> anyhow::Result<MultiIndex> {
    s.parse()
        .map_err(|_| input(format!("bad multi-index {s:?}")))
}

fn label(k: &MultiIndex) -> String {
    k.parts()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(":")
}

pub fn series(a: &SeriesArgs) -> anyhow::Result<Report> {
    let model: EquationModel = a.model.parse().map_err(input)?;
    let y =
        a.y.as_deref()
            .map(|s| parse_rational(s).ok_or_else(|| input(format!("bad height weight {s:?}"))))
            .transpose()?;
    let ks =
        a.k.iter()
            .map(|s| parse_multi_index(s))
            .collect::<anyhow::Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    let mut checks = serde_json::Map::new();

    if a.check_h_equals_g {
        let ok = verify_h_equals_g(a.n).map_err(input)?;
        eprintln!(
            "H = G through order {}: {}",
            a.n,
            if ok { "pass" } else { "FAIL" }
        );
        checks.insert("h_equals_g".into(), json!(ok));
        if !ok {
            failures.push(format!("H and G differ below order {}", a.n));
        }
    }

    let mut report = if let Some(n0) = a.finite {
        if ks.is_empty() {
            return Err(input("--finite needs at least one --k"));
        }
        let mut csv = csv_line(
            [
                "k",
                "n0",
                "count",
                "factorial",
                "ordinary",
                "ordinary_float",
            ]
            .map(String::from),
        );
        let mut rows = Vec::new();
        for k in &ks {
            let fm = finite_moments(model, k, n0).map_err(input)?;
            let ord = rational_string(&fm.ordinary);
            let flt = fmt_float(num_traits_to_f64(&fm.ordinary));
            csv += &csv_line([
                label(k),
                n0.to_string(),
                fm.count.to_string(),
                rational_string(&fm.factorial),
                ord.clone(),
                flt.clone(),
            ]);
            rows.push(json!({"k": k.parts(), "n0": n0, "count": fm.count.to_string(),
                "factorial": rational_string(&fm.factorial), "ordinary": ord, "ordinary_float": flt}));
        }
        Report::new(csv, json!({"model": model.name(), "finite_moments": rows}))
    } else if !ks.is_empty() {
        let cols = ks
            .iter()
            .map(|k| factorial_mgf_series(model, k, a.n, y.as_ref()).map_err(input))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let mut csv = csv_line(
            ["n".to_string()]
                .into_iter()
                .chain(ks.iter().map(|k| format!("k={}", label(k)))),
        );
        for n in 0..=a.n {
            csv += &csv_line(
                [n.to_string()]
                    .into_iter()
                    .chain(cols.iter().map(|c| rational_string(c.coeff(n)))),
            );
        }
        let json = json!({
            "model": model.name(), "N": a.n,
            "series": ks.iter().zip(&cols).map(|(k, c)| json!({"k": k.parts(), "coeffs": c.to_strings()})).collect::<Vec<_>>(),
        });
        Report::new(csv, json)
    } else {
        let s = solve_qfe(model, a.m, a.n, y.as_ref()).map_err(input)?;
        let mut csv = csv_line(
            ["n".to_string()]
                .into_iter()
                .chain((0..=a.m).map(|i| format!("a{i}")))
                .chain(["coeff".into()]),
        );
        for (n, piece) in s.pieces().iter().enumerate() {
            for (e, c) in piece {
                csv += &csv_line(
                    [n.to_string()]
                        .into_iter()
                        .chain(e.iter().map(u32::to_string))
                        .chain([rational_string(c)]),
                );
            }
        }
        Report::new(csv, series_to_json(model, &s, y.as_ref()))
    };

    if a.verify {
        let s = solve_qfe(model, a.m, a.n, y.as_ref()).map_err(input)?;
        let residual = verify_feq(model, &s, y.as_ref()).map_err(input)?;
        let terms = residual.num_terms();
        eprintln!(
            "{} residual through order {}: {}",
            model.name(),
            a.n,
            if terms == 0 {
                "0".to_string()
            } else {
                format!("{terms} nonzero terms")
            }
        );
        checks.insert("residual_terms".into(), json!(terms));
        if terms != 0 {
            failures.push(format!(
                "{} residual has {terms} nonzero terms",
                model.name()
            ));
        }
    }
    if !checks.is_empty() {
        if let serde_json::Value::Object(o) = &mut report.json {
            o.insert("checks".into(), serde_json::Value::Object(checks));
        }
    }
    if !failures.is_empty() {
        report.failure = Some(Failure::Verification(failures.join("; ")));
    }
    Ok(report)
}

fn num_traits_to_f64(q: &BigRational) -> f64 {
    polylim_core::scalar::Field::to_f64(q)
}

#[derive(Args, Clone, Serialize)]
pub struct LimitsArgs {
    /// diagonal, column (with --y), dyck, bilateral-dyck, meander or bernoulli.
    #[arg(long, default_value = "diagonal")]
    pub model: String,
    /// Number of moment variables; defaults to the dimension of a multi-index --kmax, else 1.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Either a bound K (all |k| <= K) or a single multi-index such as `0,2`.
    #[arg(long, default_value = "2")]
    pub kmax: String,
    /// Height weight of the column model; must be a fourth power in (0, 1).
    #[arg(long)]
    pub y: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn amplitude_model(name: &str, y: Option<&str>) -> anyhow::Result<AmplitudeModel> {
    let model = match (name, y) {
        ("column" | "staircase-column", Some(y)) => format!("column:{y}").parse(),
        ("column" | "staircase-column", None) => return Err(input("the column model needs --y")),
        (other, None) => other.parse(),
        (_, Some(_)) => return Err(input("--y only applies to the column model")),
    };
    model.map_err(input)
}

struct LimitRow {
    k: MultiIndex,
    gamma: String,
    c: String,
    f: String,
    f_float: f64,
    moment: ExactScalar,
    ratio: ExactScalar,
    alpha: Option<ExactScalar>,
}

pub fn limits(a: &LimitsArgs) -> anyhow::Result<Report> {
    let model = amplitude_model(&a.model, a.y.as_deref())?;
    let (m, ks, order) = if a.kmax.contains(',') || a.kmax.contains('(') {
        let k = parse_multi_index(&a.kmax)?;
        if a.m.is_some_and(|m| m != k.dim()) {
            return Err(input(format!(
                "--kmax {} has dimension {}, not --M",
                a.kmax,
                k.dim()
            )));
        }
        let order = k.total();
        (k.dim(), vec![k], order)
    } else {
        let order: u32 = a
            .kmax
            .trim()
            .parse()
            .map_err(|_| input(format!("bad --kmax {:?}", a.kmax)))?;
        let m = a.m.unwrap_or(1);
        (m, MultiIndex::graded_total(m, order), order)
    };
    if m == 0 {
        return Err(input("--M must be positive"));
    }
    let table = amplitude_table(&model, m, order).map_err(input)?;
    let units: Vec<ExactScalar> = (1..=m)
        .map(|i| limit_moment(&model, &MultiIndex::unit(m, i)))
        .collect::<Result<_, _>>()
        .map_err(input)?;
    let mut rows = Vec::new();
    for k in &ks {
        let row = table
            .row(k)
            .ok_or_else(|| input(format!("no amplitude for {k}")))?;
        let moment = limit_moment(&model, k).map_err(input)?;
        let mut denom = ExactScalar::one();
        for (i, u) in units.iter().enumerate() {
            denom = denom.mul(&u.powi(k.get(i + 1) as i32).map_err(input)?);
        }
        let ratio = moment.div(&denom).map_err(input)?;
        let unit = (k.total() == 1)
            .then(|| k.parts().iter().position(|&p| p == 1).expect("unit index") + 1);
        let alpha = match unit {
            Some(i) if model.is_staircase() => Some(alpha(&model, i).map_err(input)?.exact),
            _ => None,
        };
        rows.push(LimitRow {
            k: k.clone(),
            gamma: rational_string(&row.gamma),
            c: row.c.as_ref().map(rational_string).unwrap_or_default(),
            f: rational_string(&row.f),
            f_float: num_traits_to_f64(&row.f),
            moment,
            ratio,
            alpha,
        });
    }
    let mut csv = csv_line(
        [
            "k",
            "gamma",
            "c",
            "f",
            "f_float",
            "moment",
            "moment_float",
            "ratio",
            "ratio_float",
            "alpha",
            "alpha_float",
        ]
        .map(String::from),
    );
    for r in &rows {
        csv += &csv_line([
            quoted(&r.k),
            r.gamma.clone(),
            r.c.clone(),
            r.f.clone(),
            fmt_float(r.f_float),
            r.moment.to_string(),
            fmt_float(r.moment.to_f64()),
            r.ratio.to_string(),
            fmt_float(r.ratio.to_f64()),
            r.alpha
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_default(),
            r.alpha
                .as_ref()
                .map(|x| fmt_float(x.to_f64()))
                .unwrap_or_default(),
        ]);
    }
    let c = &table.constants;
    let json = json!({
        "model": model.name(), "M": m,
        "constants": {
            "u_c": rational_string(&c.u_c), "f0": rational_string(&c.f0),
            "f_e": c.f_e.iter().map(rational_string).collect::<Vec<_>>(),
        },
        "rows": rows.iter().map(|r| json!({
            "k": r.k.parts(), "gamma": r.gamma, "c": if r.c.is_empty() { None } else { Some(&r.c) }, "f": r.f,
            "moment": r.moment.to_string(), "moment_float": r.moment.to_f64(),
            "ratio": r.ratio.to_string(), "ratio_float": r.ratio.to_f64(),
            "alpha": r.alpha.as_ref().map(ToString::to_string),
        })).collect::<Vec<_>>(),
    });
    Ok(Report::new(csv, json))
}

#[derive(Args, Clone, Serialize)]
pub struct McArgs {
    /// Half-perimeters, comma separated. Defaults to 32,64,128,256.
    #[arg(long, value_delimiter = ',')]
    pub n0: Vec<usize>,
    /// Perimeters, as an alternative to --n0.
    #[arg(long, value_delimiter = ',', conflicts_with = "n0")]
    pub perimeter: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Proposed moves between samples, in units of n0.
    #[arg(long, default_value_t = 10)]
    pub sweep_factor: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
    #[arg(long, value_enum, default_value = "diagonal")]
    pub family: Family,
    /// Chi-square test of the chain against exhaustive enumeration instead of
    /// moment estimation; --samples is the number of measurements.
    #[arg(long)]
    pub uniformity: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn half_perimeters(n0: &[usize], perimeter: &[usize]) -> anyhow::Result<Vec<usize>> {
    if !perimeter.is_empty() {
        return perimeter
            .iter()
            .map(|&p| {
                if p % 2 == 0 {
                    Ok(p / 2)
                } else {
                    Err(input(format!("perimeter {p} is odd")))
                }
            })
            .collect();
    }
    Ok(if n0.is_empty() {
        DEFAULT_HALF_PERIMETERS.to_vec()
    } else {
        n0.to_vec()
    })
}

pub fn mc(a: &McArgs) -> anyhow::Result<Report> {
    let sizes = half_perimeters(&a.n0, &a.perimeter)?;
    if a.uniformity {
        return uniformity(a, &sizes);
    }
    let configs: Vec<McConfig> = sizes
        .iter()
        .map(|&n0| McConfig {
            half_perimeter: n0,
            samples: a.samples,
            sweep_factor: a.sweep_factor,
            seed: chain_seed(a.seed, n0),
            kmax: a.kmax,
            family: a.family.into(),
        })
        .collect();
    let runs = mc_run_many(&configs).map_err(mc_error)?;
    for r in &runs {
        eprintln!(
            "n0 = {}: {} samples, acceptance {:.3}",
            r.config.half_perimeter,
            r.samples.len(),
            r.accepted as f64 / r.proposed.max(1) as f64
        );
    }
    let rows: Vec<McRow> = runs.iter().flat_map(|r| r.rows.iter().cloned()).collect();
    let mut report = Report::new(write_csv(&rows), mc_json(&rows));
    report.seeds = configs.iter().map(|c| c.seed).collect();
    Ok(report)
}

fn mc_error(e: McError) -> anyhow::Error {
    match e {
        McError::InvalidConfig(_)
        | McError::Lattice(_)
        | McError::DegenerateFit
        | McError::Parse(_) => input(e),
    }
}

fn variant_name(v: MomentVariant) -> &'static str {
    match v {
        MomentVariant::A => "a",
        MomentVariant::B => "b",
        MomentVariant::Exact => "exact",
    }
}

fn mc_json(rows: &[McRow]) -> serde_json::Value {
    json!(rows
        .iter()
        .map(|r| json!({
            "n0": r.half_perimeter, "family": r.family.name(), "variant": variant_name(r.variant),
            "k": r.k, "r": r.kind.to_string(), "estimate": r.estimate.value, "stderr": r.estimate.stderr,
            "samples": r.estimate.n_samples, "seed": r.estimate.seed,
        }))
        .collect::<Vec<_>>())
}

/// Accepted range of chi-square p-values.
pub const P_RANGE: (f64, f64) = (0.001, 0.999);

fn uniformity(a: &McArgs, sizes: &[usize]) -> anyhow::Result<Report> {
    let mut csv = csv_line(
        [
            "perimeter",
            "classes",
            "measurements",
            "statistic",
            "dof",
            "p_value",
            "seed",
        ]
        .map(String::from),
    );
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    let mut seeds = Vec::new();
    for &n0 in sizes {
        let seed = chain_seed(a.seed, n0);
        let r = chi_square_uniformity(n0, a.samples as u64, a.sweep_factor, seed, true)
            .map_err(mc_error)?;
        eprintln!(
            "perimeter {}: {} classes, chi2 = {:.2}, p = {:.4}",
            r.perimeter, r.classes, r.statistic, r.p_value
        );
        if !(r.p_value > P_RANGE.0 && r.p_value < P_RANGE.1) {
            bad.push(format!(
                "perimeter {} has p = {:.3e}",
                r.perimeter, r.p_value
            ));
        }
        csv += &csv_line([
            r.perimeter.to_string(),
            r.classes.to_string(),
            r.measurements.to_string(),
            r.statistic.to_string(),
            r.dof.to_string(),
            r.p_value.to_string(),
            seed.to_string(),
        ]);
        rows.push(json!({"report": r, "seed": seed}));
        seeds.push(seed);
    }
    let mut report = Report::new(csv, json!(rows));
    report.seeds = seeds;
    if !bad.is_empty() {
        report.failure = Some(Failure::Statistical(bad.join("; ")));
    }
    Ok(report)
}

#[derive(Args, Clone, Serialize)]
pub struct ExtrapolateArgs {
    /// CSV written by `mc`.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

type Group = (&'static str, &'static str, usize);

/// A fitted series with its points and their standard errors.
type GroupFit = (Group, Vec<RatioSeriesPoint>, Vec<f64>, Fit);

/// Fits every ratio series of an `mc` CSV. Also returns gnuplot data blocks.
pub fn fit_groups(rows: &[McRow]) -> anyhow::Result<Vec<GroupFit>> {
    let mut groups: BTreeMap<Group, Vec<&McRow>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.kind == RowKind::Ratio) {
        groups
            .entry((r.family.name(), variant_name(r.variant), r.k))
            .or_default()
            .push(r);
    }
    if groups.is_empty() {
        return Err(input("no ratio rows to extrapolate"));
    }
    groups
        .into_iter()
        .map(|(g, mut rs)| {
            rs.sort_by_key(|r| r.half_perimeter);
            let points: Vec<_> = rs
                .iter()
                .map(|r| RatioSeriesPoint::new(r.half_perimeter, &r.estimate))
                .collect();
            let errs = rs.iter().map(|r| r.estimate.stderr).collect();
            let fit =
                fit_line(&points).map_err(|e| input(format!("{} {} k={}: {e}", g.0, g.1, g.2)))?;
            Ok((g, points, errs, fit))
        })
        .collect()
}

fn extrapolation_report(rows: &[McRow]) -> anyhow::Result<(Report, Vec<(Group, Fit)>)> {
    let fits = fit_groups(rows)?;
    let mut csv = csv_line(
        [
            "family",
            "variant",
            "k",
            "points",
            "intercept",
            "intercept_stderr",
            "slope",
            "slope_stderr",
            "residual",
        ]
        .map(String::from),
    );
    let mut dat = String::from("# x = 1/(2 n0), ratio, stderr\n");
    let mut json_rows = Vec::new();
    for ((family, variant, k), points, errs, fit) in &fits {
        csv += &csv_line([
            family.to_string(),
            variant.to_string(),
            k.to_string(),
            points.len().to_string(),
            fit.intercept.to_string(),
            fit.intercept_stderr.to_string(),
            fit.slope.to_string(),
            fit.slope_stderr.to_string(),
            fit.residual.to_string(),
        ]);
        dat += &format!(
            "# {family} {variant} k={k}: fit {} + {} * x\n",
            fit.intercept, fit.slope
        );
        for (p, e) in points.iter().zip(errs) {
            dat += &format!("{} {} {}\n", p.x, p.y, e);
        }
        dat += "\n\n";
        json_rows.push(
            json!({"family": family, "variant": variant, "k": k, "points": points, "fit": fit}),
        );
    }
    let mut report = Report::new(csv, json!(json_rows));
    report.extra.push((".dat".into(), dat));
    Ok((
        report,
        fits.into_iter().map(|(g, _, _, f)| (g, f)).collect(),
    ))
}

pub fn extrapolate(a: &ExtrapolateArgs) -> anyhow::Result<Report> {
    let text = std::fs::read_to_string(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))?;
    let rows = read_csv(&text).map_err(input)?;
    Ok(extrapolation_report(&rows)?.0)
}

#[derive(Args, Clone, Serialize)]
pub struct ReproArgs {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 10)]
    pub sweep_factor: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Small Monte Carlo run at half-perimeters 8, 16 and 32; skips the statistical check.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Target intercepts `(variant, k, value, tolerance)` of the diagonal-layer ratios.
pub const TARGETS: [(&str, usize, f64, f64); 3] = [
    ("a", 1, 1.061, 0.01),
    ("a", 2, 1.216, 0.03),
    ("b", 2, 1.309, 0.03),
];

fn default_output(format: Format) -> OutputArgs {
    OutputArgs { out: None, format }
}

pub fn repro(a: &ReproArgs, start: Instant) -> anyhow::Result<Option<Failure>> {
    let dir = &a.out;
    let ext = match a.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut written: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    let mut emit = |name: &str, contents: String| -> anyhow::Result<()> {
        let path = dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        written.push((path, contents.into_bytes()));
        Ok(())
    };
    let mut failures = Vec::new();

    let series_args = |model: &str, m: usize, n: usize, k: Vec<String>, h: bool| SeriesArgs {
        model: model.into(),
        m,
        n,
        verify: k.is_empty(),
        k,
        y: None,
        check_h_equals_g: h,
        finite: None,
        output: default_output(a.format),
    };
    let mut jobs = vec![
        (
            "series_staircase",
            series_args("staircase-diagonal", 1, 12, vec![], true),
        ),
        (
            "series_area",
            series_args("staircase-diagonal", 1, 12, vec!["1".into()], false),
        ),
    ];
    for w in ["dyck", "bilateral-dyck", "meander", "bernoulli"] {
        jobs.push((w, series_args(w, 1, 12, vec![], false)));
    }
    for (name, args) in jobs {
        let r = series(&args)?;
        if let Some(f) = r.failure.as_ref() {
            failures.push(f.to_string());
        }
        let file = if name.starts_with("series") {
            name.to_string()
        } else {
            format!("series_{}", name.replace('-', "_"))
        };
        emit(&format!("{file}.{ext}"), render(&r, a.format))?;
    }

    for (name, model, m) in [
        ("limits_m1", "diagonal", 1),
        ("limits_m2", "diagonal", 2),
        ("limits_dyck", "dyck", 1),
    ] {
        let r = limits(&LimitsArgs {
            model: model.into(),
            m: Some(m),
            kmax: "2".into(),
            y: None,
            output: default_output(a.format),
        })?;
        emit(&format!("{name}.{ext}"), render(&r, a.format))?;
    }

    let (sizes, samples) = if a.quick {
        (vec![8, 16, 32], a.samples.min(2000))
    } else {
        (DEFAULT_HALF_PERIMETERS.to_vec(), a.samples)
    };
    let mc_args = McArgs {
        n0: sizes,
        perimeter: vec![],
        samples,
        sweep_factor: a.sweep_factor,
        seed: a.seed,
        kmax: 2,
        family: Family::Diagonal,
        uniformity: false,
        output: default_output(Format::Csv),
    };
    let mc_report = mc(&mc_args)?;
    let seeds = mc_report.seeds.clone();
    emit("mc.csv", mc_report.csv.clone())?;
    let rows = read_csv(&mc_report.csv).map_err(input)?;
    let (mut ex, fits) = extrapolation_report(&rows)?;
    let dat = ex.extra.remove(0).1;
    emit(&format!("extrapolate.{ext}"), render(&ex, a.format))?;
    emit("extrapolate.dat", dat)?;

    let mut statistical = Vec::new();
    for (variant, k, target, tol) in TARGETS {
        let fit = fits
            .iter()
            .find(|(g, _)| g.0 == LayerFamily::Diagonal.name() && g.1 == variant && g.2 == k);
        let Some((_, fit)) = fit else { continue };
        let ok = (fit.intercept - target).abs() <= tol;
        eprintln!(
            "k={k} variant {variant}: intercept {:.4} ± {:.4}, target {target} ± {tol}: {}",
            fit.intercept,
            fit.intercept_stderr,
            if ok { "ok" } else { "outside" }
        );
        if !ok {
            statistical.push(format!(
                "k={k} variant {variant} intercept {:.4}",
                fit.intercept
            ));
        }
    }

    let mut manifest = Manifest::new("repro", serde_json::to_value(a)?, seeds, start.elapsed());
    for (p, c) in &written {
        manifest.record(p, c);
    }
    manifest.write(&dir.join("manifest.json"))?;

    if !failures.is_empty() {
        return Ok(Some(Failure::Verification(failures.join("; "))));
    }
    if !a.quick && !statistical.is_empty() {
        return Ok(Some(Failure::Statistical(statistical.join("; "))));
    }
    Ok(None)
}
