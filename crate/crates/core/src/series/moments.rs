use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::jets::solve_jets;
use super::poly::{Coeff, SeriesPoly};
use super::solve::solve_qfe;
use super::{EquationModel, SeriesError};
use crate::multiindex::MultiIndex;
use crate::scalar::{int_rat, rational_string};

pub const MAX_MGF_ORDER: usize = 30;
pub const MAX_MGF_DEGREE: u32 = 6;
/// Finite moments go through Taylor jets, which stay cheap well beyond the
/// sparse expansion's range.
pub const MAX_FINITE_ORDER: usize = 160;

/// Exact rational power series `c_0 + c_1 x + ... + c_N x^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub coeffs: Vec<BigRational>,
}

impl RationalSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }
}

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `g_k` read off an expanded series: the grade-`n` coefficient is
/// `Σ coeff · Π_i binom(a_i, k_i)` over its terms.
pub fn factorial_mgf_from_series<C: Coeff>(
    series: &SeriesPoly<C>,
    k: &MultiIndex,
) -> RationalSeries {
    assert_eq!(k.dim(), series.m(), "multi-index dimension must equal M");
    let coeffs = series
        .pieces()
        .iter()
        .map(|p| {
            p.iter().fold(BigRational::zero(), |acc, (e, c)| {
                let w = k
                    .parts()
                    .iter()
                    .enumerate()
                    .fold(BigInt::one(), |w, (i, &ki)| w * binom(e[i + 1], ki));
                acc + c.to_rational() * BigRational::from_integer(w)
            })
        })
        .collect();
    RationalSeries { coeffs }
}

/// Factorial moment generating function `g_k(u_0) = (1/k!) ∂^k G |_{u_1 = ... = u_M = 1}`
/// to order `order`. For the column model the variable is the half-perimeter.
pub fn factorial_mgf_series(
    model: EquationModel,
    k: &MultiIndex,
    order: usize,
    y: Option<&BigRational>,
) -> Result<RationalSeries, SeriesError> {
    if k.total() > MAX_MGF_DEGREE || order > MAX_MGF_ORDER {
        return Err(SeriesError::InvalidParameter(format!(
            "factorial moment series need |k| <= {MAX_MGF_DEGREE} and N <= {MAX_MGF_ORDER}"
        )));
    }
    let m = k.dim();
    if model == EquationModel::StaircaseColumn {
        let s = solve_qfe::<BigRational>(model, m, order, y)?;
        return Ok(factorial_mgf_from_series(&s, k));
    }
    let jets = solve_jets(model, m, k.total(), order)?;
    let coeffs = jets
        .factorial_coefficients(k)
        .expect("index within degree")
        .into_iter()
        .map(int_rat)
        .collect();
    Ok(RationalSeries { coeffs })
}

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling2(n: u32, k: u32) -> BigInt {
    let mut row = vec![BigInt::one()];
    for i in 1..=n {
        let mut next = vec![BigInt::zero(); i as usize + 1];
        for j in 1..=i as usize {
            let keep = row.get(j).cloned().unwrap_or_default() * BigInt::from(j);
            next[j] = keep + row[j - 1].clone();
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_default()
}

/// Mixed moments of the counting parameters over all objects of size `n0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMoments {
    pub n0: usize,
    pub k: MultiIndex,
    /// Number of objects of size `n0`.
    pub count: BigInt,
    /// `E[Π (X_i)_{k_i}]` with falling factorials.
    pub factorial: BigRational,
    /// `E[Π X_i^{k_i}]`.
    pub ordinary: BigRational,
}

/// Exact finite-size moments of the parameters `(n_1, ..., n_M)` at size
/// `n0` (half-perimeter for staircase polygons, length for walks).
pub fn finite_moments(
    model: EquationModel,
    k: &MultiIndex,
    n0: usize,
) -> Result<FiniteMoments, SeriesError> {
    if model == EquationModel::StaircaseColumn {
        return Err(SeriesError::Unsupported(
            "finite moments of the column model need a height weight",
        ));
    }
    if n0 > MAX_FINITE_ORDER {
        return Err(SeriesError::InvalidParameter(format!(
            "n0 = {n0} exceeds {MAX_FINITE_ORDER}"
        )));
    }
    let jets = solve_jets(model, k.dim(), k.total(), n0.max(2))?;
    let count = jets
        .factorial_coefficients(&MultiIndex::zeros(k.dim()))
        .expect("zero index")[n0]
        .clone();
    if count.is_zero() {
        return Err(SeriesError::ZeroCount { n0 });
    }
    let count_q = int_rat(count.clone());
    let falling = |j: &MultiIndex| -> BigRational {
        let g = jets.factorial_coefficients(j).expect("index within degree");
        int_rat(g[n0].clone() * BigInt::from(j.factorial())) / &count_q
    };
    let mut ordinary = BigRational::zero();
    for j in k.sub_indices() {
        let s = k
            .parts()
            .iter()
            .zip(j.parts())
            .fold(BigInt::one(), |acc, (&ki, &ji)| acc * stirling2(ki, ji));
        if !s.is_zero() {
            ordinary += int_rat(s) * falling(&j);
        }
    }
    Ok(FiniteMoments {
        n0,
        k: k.clone(),
        count,
        factorial: falling(k),
        ordinary,
    })
}
