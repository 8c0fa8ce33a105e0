use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::stats::{batch_means, chi_square_p_value, jackknife_ratio};
use super::{McError, McEstimate, SapChain};
use crate::lattice::{enumerate_sap, LatticePolygon, LayerFamily, LayerScratch, MomentVariant};

/// Equilibration length in units of the measurement spacing.
pub const BURN_IN_SWEEPS: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct McConfig {
    pub half_perimeter: usize,
    pub samples: usize,
    /// Proposed moves between measurements, in units of `half_perimeter`.
    pub sweep_factor: usize,
    pub seed: u64,
    pub kmax: usize,
    pub family: LayerFamily,
}

impl McConfig {
    pub fn new(half_perimeter: usize, samples: usize, seed: u64) -> Self {
        Self {
            half_perimeter,
            samples,
            sweep_factor: 10,
            seed,
            kmax: 2,
            family: LayerFamily::Diagonal,
        }
    }

    pub fn validate(&self) -> Result<(), McError> {
        if self.half_perimeter < 2 {
            return Err(McError::InvalidConfig(format!(
                "half-perimeter {} < 2",
                self.half_perimeter
            )));
        }
        if self.samples == 0 {
            return Err(McError::InvalidConfig("need at least one sample".into()));
        }
        if self.sweep_factor == 0 {
            return Err(McError::InvalidConfig(
                "sweep factor must be positive".into(),
            ));
        }
        if self.kmax == 0 {
            return Err(McError::InvalidConfig("kmax must be positive".into()));
        }
        Ok(())
    }

    /// Proposed moves between consecutive measurements.
    pub fn spacing(&self) -> u64 {
        (self.sweep_factor * self.half_perimeter) as u64
    }
}

/// Moment power `r`, or the ratio `m(2) / m(1)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowKind {
    Moment(u32),
    Ratio,
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKind::Moment(r) => write!(f, "{r}"),
            RowKind::Ratio => f.write_str("ratio"),
        }
    }
}

impl FromStr for RowKind {
    type Err = McError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ratio" => Ok(RowKind::Ratio),
            r => r
                .parse()
                .map(RowKind::Moment)
                .map_err(|_| McError::Parse(format!("bad r column {r:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McRow {
    pub half_perimeter: usize,
    pub family: LayerFamily,
    pub variant: MomentVariant,
    pub k: usize,
    pub kind: RowKind,
    pub estimate: McEstimate,
}

/// Layer moments `n_0..n_kmax` of one sampled polygon, both variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct McRun {
    pub config: McConfig,
    pub samples: Vec<Sample>,
    pub rows: Vec<McRow>,
    pub proposed: u64,
    pub accepted: u64,
}

impl McRun {
    pub fn row(&self, variant: MomentVariant, k: usize, kind: RowKind) -> Option<&McRow> {
        self.rows
            .iter()
            .find(|r| r.variant == variant && r.k == k && r.kind == kind)
    }
}

/// Runs one chain: burn-in, then `samples` measurements spaced
/// `sweep_factor × n0` proposed moves apart.
pub fn mc_run(config: &McConfig) -> Result<McRun, McError> {
    config.validate()?;
    let mut chain = SapChain::new(
        &SapChain::rectangle_start(config.half_perimeter),
        config.seed,
    );
    let spacing = config.spacing();
    chain.run(BURN_IN_SWEEPS * spacing);
    let mut scratch = LayerScratch::new();
    let mut samples = Vec::with_capacity(config.samples);
    for _ in 0..config.samples {
        chain.run(spacing);
        let (a, b) = scratch.measure(chain.positions(), config.family, config.kmax);
        samples.push(Sample {
            a: a.values,
            b: b.values,
        });
    }
    chain.check();
    let rows = estimate_rows(config, &samples);
    Ok(McRun {
        config: config.clone(),
        samples,
        rows,
        proposed: chain.proposed(),
        accepted: chain.accepted(),
    })
}

fn estimate_rows(config: &McConfig, samples: &[Sample]) -> Vec<McRow> {
    let mut rows = Vec::new();
    for variant in [MomentVariant::A, MomentVariant::B] {
        for k in 1..=config.kmax {
            let n: Vec<f64> = samples
                .iter()
                .map(|s| if variant == MomentVariant::A { s.a[k] } else { s.b[k] } as f64)
                .collect();
            let n2: Vec<f64> = n.iter().map(|x| x * x).collect();
            let mk = |kind, estimate| McRow {
                half_perimeter: config.half_perimeter,
                family: config.family,
                variant,
                k,
                kind,
                estimate,
            };
            rows.push(mk(RowKind::Moment(1), batch_means(&n, config.seed)));
            rows.push(mk(RowKind::Moment(2), batch_means(&n2, config.seed)));
            rows.push(mk(RowKind::Ratio, jackknife_ratio(&n2, &n, 2, config.seed)));
        }
    }
    rows
}

/// Independent chains in parallel; results come back in input order.
pub fn mc_run_many(configs: &[McConfig]) -> Result<Vec<McRun>, McError> {
    configs.par_iter().map(mc_run).collect()
}

const CSV_HEADER: &str = "n0,family,variant,k,r,estimate,stderr,samples,seed";

fn variant_name(v: MomentVariant) -> &'static str {
    match v {
        MomentVariant::A => "a",
        MomentVariant::B => "b",
        MomentVariant::Exact => "exact",
    }
}

pub fn write_csv(rows: &[McRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.half_perimeter,
            r.family.name(),
            variant_name(r.variant),
            r.k,
            r.kind,
            r.estimate.value,
            r.estimate.stderr,
            r.estimate.n_samples,
            r.estimate.seed
        ));
    }
    out
}

pub fn read_csv(text: &str) -> Result<Vec<McRow>, McError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(McError::Parse(format!(
                "expected header {CSV_HEADER:?}, got {other:?}"
            )))
        }
    }
    let bad = |what: &str, line: &str| McError::Parse(format!("bad {what} in {line:?}"));
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 9 {
                return Err(bad("field count", line));
            }
            let family = match f[1] {
                "diagonal-layer" => LayerFamily::Diagonal,
                "vertical-layer" => LayerFamily::Vertical,
                _ => return Err(bad("family", line)),
            };
            let variant = match f[2] {
                "a" => MomentVariant::A,
                "b" => MomentVariant::B,
                _ => return Err(bad("variant", line)),
            };
            let n_samples: usize = f[7].parse().map_err(|_| bad("samples", line))?;
            Ok(McRow {
                half_perimeter: f[0].parse().map_err(|_| bad("n0", line))?,
                family,
                variant,
                k: f[3].parse().map_err(|_| bad("k", line))?,
                kind: f[4].parse()?,
                estimate: McEstimate {
                    value: f[5].parse().map_err(|_| bad("estimate", line))?,
                    stderr: f[6].parse().map_err(|_| bad("stderr", line))?,
                    n_samples,
                    n_batches: n_samples.min(50),
                    seed: f[8].parse().map_err(|_| bad("seed", line))?,
                },
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ChiSquareReport {
    pub perimeter: usize,
    pub classes: usize,
    pub measurements: u64,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub counts: Vec<u64>,
}

/// Visit frequencies of a chain at small perimeter against the uniform
/// distribution over all polygons of that perimeter.
pub fn chi_square_uniformity(
    half_perimeter: usize,
    measurements: u64,
    sweep_factor: usize,
    seed: u64,
    reflections: bool,
) -> Result<ChiSquareReport, McError> {
    if measurements == 0 || sweep_factor == 0 {
        return Err(McError::InvalidConfig(
            "need positive measurements and sweep factor".into(),
        ));
    }
    let all: Vec<LatticePolygon> = enumerate_sap(2 * half_perimeter)?.collect();
    let index: HashMap<&LatticePolygon, usize> =
        all.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut chain = SapChain::new(&SapChain::rectangle_start(half_perimeter), seed);
    if !reflections {
        chain = chain.without_reflections();
    }
    let spacing = (sweep_factor * half_perimeter) as u64;
    chain.run(BURN_IN_SWEEPS * spacing);
    let mut counts = vec![0u64; all.len()];
    for _ in 0..measurements {
        chain.run(spacing);
        counts[index[&chain.polygon()]] += 1;
    }
    let expected = measurements as f64 / all.len() as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = all.len() - 1;
    Ok(ChiSquareReport {
        perimeter: 2 * half_perimeter,
        classes: all.len(),
        measurements,
        statistic,
        dof,
        p_value: chi_square_p_value(statistic, dof),
        counts,
    })
}
