use super::McError;

/// Fewest batches used for batch-means error bars when enough samples exist.
pub const MIN_BATCHES: usize = 20;
const DEFAULT_BATCHES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub n_batches: usize,
    pub seed: u64,
}

fn batch_count(n: usize) -> usize {
    n.clamp(1, DEFAULT_BATCHES)
}

/// Batch boundaries splitting `n` samples into `b` nearly equal consecutive runs.
fn batch_ranges(n: usize, b: usize) -> impl Iterator<Item = std::ops::Range<usize>> {
    (0..b).map(move |i| (i * n / b)..((i + 1) * n / b))
}

/// Mean with batch-means standard error.
pub fn batch_means(xs: &[f64], seed: u64) -> McEstimate {
    let n = xs.len();
    let b = batch_count(n);
    let value = xs.iter().sum::<f64>() / n as f64;
    let means: Vec<f64> = batch_ranges(n, b)
        .map(|r| xs[r.clone()].iter().sum::<f64>() / r.len() as f64)
        .collect();
    let stderr = if b > 1 {
        let var = means.iter().map(|m| (m - value).powi(2)).sum::<f64>() / (b - 1) as f64;
        (var / b as f64).sqrt()
    } else {
        0.0
    };
    McEstimate {
        value,
        stderr,
        n_samples: n,
        n_batches: b,
        seed,
    }
}

/// `mean(num) / mean(den)^power` with a delete-one-batch jackknife error.
pub fn jackknife_ratio(num: &[f64], den: &[f64], power: i32, seed: u64) -> McEstimate {
    assert_eq!(num.len(), den.len());
    let n = num.len();
    let b = batch_count(n);
    let sums: Vec<(f64, f64, usize)> = batch_ranges(n, b)
        .map(|r| {
            (
                num[r.clone()].iter().sum(),
                den[r.clone()].iter().sum(),
                r.len(),
            )
        })
        .collect();
    let (tn, td): (f64, f64) = sums
        .iter()
        .fold((0.0, 0.0), |acc, s| (acc.0 + s.0, acc.1 + s.1));
    let ratio =
        |sn: f64, sd: f64, count: usize| (sn / count as f64) / (sd / count as f64).powi(power);
    let value = ratio(tn, td, n);
    let stderr = if b > 1 {
        let loo: Vec<f64> = sums
            .iter()
            .map(|&(sn, sd, c)| ratio(tn - sn, td - sd, n - c))
            .collect();
        let mean = loo.iter().sum::<f64>() / b as f64;
        (loo.iter().map(|x| (x - mean).powi(2)).sum::<f64>() * (b - 1) as f64 / b as f64).sqrt()
    } else {
        0.0
    };
    McEstimate {
        value,
        stderr,
        n_samples: n,
        n_batches: b,
        seed,
    }
}

/// One point of a finite-size series, `x = 1/(2 n_0)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RatioSeriesPoint {
    pub x: f64,
    pub y: f64,
    /// `1 / stderr^2`.
    pub weight: f64,
}

impl RatioSeriesPoint {
    pub fn new(half_perimeter: usize, estimate: &McEstimate) -> Self {
        let weight = if estimate.stderr > 0.0 {
            estimate.stderr.powi(-2)
        } else {
            f64::INFINITY
        };
        Self {
            x: 1.0 / (2 * half_perimeter) as f64,
            y: estimate.value,
            weight,
        }
    }
}

/// Weighted least-squares line `y = intercept + slope · x`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Fit {
    pub intercept: f64,
    pub slope: f64,
    /// Weighted sum of squared residuals.
    pub residual: f64,
    pub intercept_stderr: f64,
    pub slope_stderr: f64,
}

/// Weighted fit of `y = a + b x`. Falls back to equal weights when some
/// weight is not a positive finite number (for instance zero error bars).
pub fn extrapolate(points: &[RatioSeriesPoint]) -> Result<Fit, McError> {
    if points.len() < 2 || points.iter().all(|p| p.x == points[0].x) {
        return Err(McError::DegenerateFit);
    }
    let usable = points
        .iter()
        .all(|p| p.weight.is_finite() && p.weight > 0.0);
    let w = |p: &RatioSeriesPoint| if usable { p.weight } else { 1.0 };
    let (mut s, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in points {
        let wi = w(p);
        s += wi;
        sx += wi * p.x;
        sy += wi * p.y;
        sxx += wi * p.x * p.x;
        sxy += wi * p.x * p.y;
    }
    let delta = s * sxx - sx * sx;
    if delta <= 0.0 || !delta.is_finite() {
        return Err(McError::DegenerateFit);
    }
    let intercept = (sxx * sy - sx * sxy) / delta;
    let slope = (s * sxy - sx * sy) / delta;
    let residual = points
        .iter()
        .map(|p| w(p) * (p.y - intercept - slope * p.x).powi(2))
        .sum();
    Ok(Fit {
        intercept,
        slope,
        residual,
        intercept_stderr: (sxx / delta).sqrt(),
        slope_stderr: (s / delta).sqrt(),
    })
}

/// Upper tail of the chi-square distribution.
pub(crate) fn chi_square_p_value(statistic: f64, dof: usize) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    if dof == 0 {
        return 1.0;
    }
    ChiSquared::new(dof as f64)
        .expect("positive dof")
        .sf(statistic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let pts: Vec<_> = [0.1, 0.05, 0.02]
            .iter()
            .map(|&x| RatioSeriesPoint {
                x,
                y: 1.06 + 0.5 * x,
                weight: 1.0,
            })
            .collect();
        let fit = extrapolate(&pts).unwrap();
        assert!((fit.intercept - 1.06).abs() < 1e-12);
        assert!((fit.slope - 0.5).abs() < 1e-10);
        assert!(fit.residual < 1e-20);
    }

    #[test]
    fn degenerate() {
        let p = RatioSeriesPoint {
            x: 0.1,
            y: 1.0,
            weight: 1.0,
        };
        assert_eq!(extrapolate(&[p, p]), Err(McError::DegenerateFit));
        assert_eq!(extrapolate(&[p]), Err(McError::DegenerateFit));
    }

    #[test]
    fn batch_means_of_constant() {
        let e = batch_means(&[2.0; 1000], 5);
        assert_eq!(e.value, 2.0);
        assert_eq!(e.stderr, 0.0);
        assert!(e.n_batches >= MIN_BATCHES);
        assert_eq!(e.seed, 5);
    }

    #[test]
    fn jackknife_matches_plain_ratio() {
        let xs: Vec<f64> = (1..=200).map(|i| (i % 7) as f64 + 1.0).collect();
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let e = jackknife_ratio(&sq, &xs, 2, 0);
        let m1 = xs.iter().sum::<f64>() / 200.0;
        let m2 = sq.iter().sum::<f64>() / 200.0;
        assert!((e.value - m2 / (m1 * m1)).abs() < 1e-12);
        assert!(e.stderr > 0.0 && e.stderr < 0.1);
    }

    #[test]
    fn chi_square_tail() {
        assert!((chi_square_p_value(2.0, 2) - (-1.0f64).exp()).abs() < 1e-12);
        assert_eq!(chi_square_p_value(3.0, 0), 1.0);
    }
}
