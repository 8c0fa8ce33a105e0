use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{
    amplitude_table, c_table, gamma, gamma_exponent, pow_half, AmplitudeModel, AsymptoticsError,
    ExactScalar,
};
use crate::multiindex::MultiIndex;
use crate::scalar::int_rat;

pub const MAX_GROWTH_ORDER: u32 = 40;

fn check_index(k: &MultiIndex) -> Result<(), AsymptoticsError> {
    if k.dim() == 0 {
        return Err(AsymptoticsError::InvalidParameter(
            "empty multi-index".into(),
        ));
    }
    Ok(())
}

/// `u_c^{γ_k - γ_0}` and `Γ(γ_0)/Γ(γ_k)` combined into
/// `m_k = k! / (f_0 u_c^{γ_k-γ_0}) · Γ(γ_0)/Γ(γ_k) · f_k`.
pub fn limit_moment(
    model: &AmplitudeModel,
    k: &MultiIndex,
) -> Result<ExactScalar, AsymptoticsError> {
    check_index(k)?;
    let table = amplitude_table(model, k.dim(), k.total())?;
    let f_k = table.f(k).expect("table covers k").clone();
    let f0 = table.constants.f0.clone();
    let zero = MultiIndex::zeros(k.dim());
    let g0 = gamma_exponent(model, &zero);
    let gk = gamma_exponent(model, k);
    let two_delta = ((&gk - &g0) * BigInt::from(2))
        .to_integer()
        .to_i64()
        .expect("small exponent");
    let u_pow = pow_half(&table.constants.u_c, -two_delta)?;
    let prefactor = ExactScalar::rational(int_rat(k.factorial()) * f_k / f0);
    prefactor.mul(&u_pow).mul(&gamma(&g0)?).div(&gamma(&gk)?)
}

/// Universal ratio `k! c_k Γ(γ_0)^{1-|k|} Π Γ(γ_{e_i})^{k_i} / Γ(γ_k)`, which equals
/// `m_k / Π m_{e_i}^{k_i}` for every staircase model.
pub fn limit_moment_ratio(k: &MultiIndex) -> Result<ExactScalar, AsymptoticsError> {
    check_index(k)?;
    let m = k.dim();
    let model = AmplitudeModel::Diagonal;
    let c = c_table::<BigRational>(m, k.total());
    let mut out =
        ExactScalar::rational(int_rat(k.factorial()) * c.get(k).expect("c table covers k"));
    let g0 = gamma(&gamma_exponent(&model, &MultiIndex::zeros(m)))?;
    out = out.mul(&g0.powi(1 - k.total() as i32)?);
    for i in 1..=m {
        let gi = gamma(&gamma_exponent(&model, &MultiIndex::unit(m, i)))?;
        out = out.mul(&gi.powi(k.get(i) as i32)?);
    }
    out.div(&gamma(&gamma_exponent(&model, k))?)
}

/// `α_k = -(f_{e_k}/f_0) 2^{3-3k/2} / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct Alpha {
    pub k: usize,
    pub exact: ExactScalar,
    /// `α_k^2`, always rational.
    pub squared: BigRational,
    pub value: f64,
}

pub fn alpha(model: &AmplitudeModel, k: usize) -> Result<Alpha, AsymptoticsError> {
    if !model.is_staircase() {
        return Err(AsymptoticsError::Unsupported(
            "alpha is defined for staircase models",
        ));
    }
    if k == 0 {
        return Err(AsymptoticsError::InvalidParameter(
            "alpha needs k >= 1".into(),
        ));
    }
    let c = super::ModelConstants::for_model(model, k)?;
    let ratio = -(&c.f_e[k - 1] / &c.f0) / int_rat(crate::multiindex::factorial(k as u32));
    let two = BigRational::from_integer(BigInt::from(2));
    let exact = ExactScalar::rational(ratio).mul(&pow_half(&two, 6 - 3 * k as i64)?);
    let squared = exact
        .square()
        .as_rational()
        .expect("square of rational times √2 power")
        .clone();
    Ok(Alpha {
        k,
        value: exact.to_f64(),
        exact,
        squared,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GrowthRow {
    pub k: u32,
    pub moment: f64,
    /// `m_k^{1/k} / k`, bounded for a distribution with an exponential tail.
    pub root_ratio: f64,
    /// Partial Carleman sum `Σ_{j≤k} m_j^{-1/(2j)}`.
    pub carleman: f64,
    /// `m_k t^k / k!` at `t = 1/2, 1, 2`.
    pub decay: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GrowthReport {
    pub m: usize,
    pub rows: Vec<GrowthRow>,
}

/// Growth of the diagonal-model moments `m_{k e_1}` for `k = 1..=kmax`.
pub fn moment_growth_check(m: usize, kmax: u32) -> Result<GrowthReport, AsymptoticsError> {
    if m == 0 || kmax == 0 || kmax > MAX_GROWTH_ORDER {
        return Err(AsymptoticsError::InvalidParameter(format!(
            "need M >= 1 and 1 <= kmax <= {MAX_GROWTH_ORDER}, got M={m}, kmax={kmax}"
        )));
    }
    let mut rows = Vec::new();
    let mut carleman = 0.0;
    let mut log_fact = 0.0;
    for k in 1..=kmax {
        let mut parts = vec![0; m];
        parts[0] = k;
        let moment = limit_moment(&AmplitudeModel::Diagonal, &MultiIndex::new(parts))?.to_f64();
        let kf = k as f64;
        log_fact += kf.ln();
        carleman += moment.powf(-1.0 / (2.0 * kf));
        let decay = [0.5f64, 1.0, 2.0].map(|t| (moment.ln() + kf * t.ln() - log_fact).exp());
        rows.push(GrowthRow {
            k,
            moment,
            root_ratio: moment.powf(1.0 / kf) / kf,
            carleman,
            decay,
        });
    }
    Ok(GrowthReport { m, rows })
}
