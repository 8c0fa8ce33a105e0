use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{fourth_root, AmplitudeModel, AsymptoticsError};
use crate::lattice::WalkModel;
use crate::multiindex::{factorial, MultiIndex};
use crate::scalar::{int_rat, rational_string, Field};

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// `γ_k = -1/2 + Σ (1 + i/2) k_i`, twice over: returns `2γ_k` as an integer.
fn two_gamma_base(k: &MultiIndex) -> i64 {
    -1 + k
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &ki)| (i as i64 + 3) * ki as i64)
        .sum::<i64>()
}

/// Critical exponent `γ_k` of the `k`-th moment generating function.
pub fn gamma_exponent(model: &AmplitudeModel, k: &MultiIndex) -> BigRational {
    let offset = match model {
        AmplitudeModel::Walk(WalkModel::BilateralDyck)
        | AmplitudeModel::Walk(WalkModel::Meander) => 2,
        AmplitudeModel::Walk(WalkModel::Bernoulli) => 3,
        _ => 0,
    };
    BigRational::new(BigInt::from(two_gamma_base(k) + offset), BigInt::from(2))
}

/// Normalised amplitudes `c_k` of the staircase recursion, for all `|k| <= order`.
#[derive(Debug, Clone)]
pub struct CTable<F> {
    m: usize,
    order: u32,
    values: HashMap<MultiIndex, F>,
}

impl<F: Field> CTable<F> {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, k: &MultiIndex) -> Option<&F> {
        self.values.get(k)
    }
}

/// `c_0 = 1`,
/// `c_k = -2γ_{k-e1} c_{k-e1} + Σ_{i<M} (k_i+1) c_{k-e_{i+1}+e_i} - 1/2 Σ'_{0<l<k} c_l c_{k-l}`.
pub fn c_table<F: Field>(m: usize, order: u32) -> CTable<F> {
    assert!(m >= 1, "need at least one moment variable");
    let mut values: HashMap<MultiIndex, F> = HashMap::new();
    let minus_half = F::from_ratio(-1, 2);
    for k in MultiIndex::graded_total(m, order) {
        if k.is_zero() {
            values.insert(k, F::one());
            continue;
        }
        let mut acc = F::zero();
        if let Some(prev) = k.minus_unit(1) {
            acc = acc - F::from_ratio(two_gamma_base(&prev), 1) * values[&prev].clone();
        }
        for i in 1..m {
            if let Some(s) = k.shift_down(i) {
                acc = acc + F::from_ratio(k.get(i) as i64 + 1, 1) * values[&s].clone();
            }
        }
        let mut conv = F::zero();
        for l in k.sub_indices() {
            if l.is_zero() || l == k {
                continue;
            }
            let rest = k.checked_sub(&l).expect("sub-index");
            conv = conv + values[&l].clone() * values[&rest].clone();
        }
        acc = acc + minus_half.clone() * conv;
        values.insert(k, acc);
    }
    CTable { m, order, values }
}

/// Critical point and leading amplitudes of a staircase model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConstants {
    pub u_c: BigRational,
    pub f0: BigRational,
    /// `f_{e_1}, ..., f_{e_M}`.
    pub f_e: Vec<BigRational>,
}

impl ModelConstants {
    /// `u_c = 1/4`, `f_0 = -1`, `f_{e_k} = k! 2^{-3(k+1)}`.
    pub fn diagonal(m: usize) -> Self {
        let f_e = (1..=m as u32)
            .map(|k| int_rat(factorial(k)) / int_rat(BigInt::from(2).pow(3 * (k + 1))))
            .collect();
        Self {
            u_c: BigRational::new(1.into(), 4.into()),
            f0: -BigRational::one(),
            f_e,
        }
    }

    /// `u_c = (1 - √y)^2`, `f_0 = -y^{-1/4}`, `f_{e_k} = k! 2^{-k} y^{-k/4}`.
    pub fn column(m: usize, y: &BigRational) -> Result<Self, AsymptoticsError> {
        if !y.is_positive() || *y >= BigRational::one() {
            return Err(AsymptoticsError::InvalidParameter(format!(
                "height weight {y} must lie in (0, 1)"
            )));
        }
        let r = fourth_root(y)?;
        let one = BigRational::one();
        let u_c = (&one - &r * &r) * (&one - &r * &r);
        let f_e = (1..=m as u32)
            .map(|k| {
                int_rat(factorial(k))
                    / int_rat(BigInt::from(2).pow(k))
                    / num_traits::pow(r.clone(), k as usize)
            })
            .collect();
        Ok(Self {
            u_c,
            f0: -r.recip(),
            f_e,
        })
    }

    pub fn for_model(model: &AmplitudeModel, m: usize) -> Result<Self, AsymptoticsError> {
        match model {
            AmplitudeModel::Diagonal => Ok(Self::diagonal(m)),
            AmplitudeModel::Column { y } => Self::column(m, y),
            AmplitudeModel::Walk(w) => {
                let table = walk_table(*w, m, 1);
                let f_e = (1..=m)
                    .map(|i| table[&MultiIndex::unit(m, i)].clone())
                    .collect();
                Ok(Self {
                    u_c: half(),
                    f0: table[&MultiIndex::zeros(m)].clone(),
                    f_e,
                })
            }
        }
    }
}

/// One row of an amplitude table.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeRow {
    pub k: MultiIndex,
    pub gamma: BigRational,
    pub c: Option<BigRational>,
    pub f: BigRational,
}

/// Amplitudes `f_k` for all `|k| <= order`, in graded order.
#[derive(Debug, Clone)]
pub struct AmplitudeTable {
    pub model: AmplitudeModel,
    pub m: usize,
    pub order: u32,
    pub constants: ModelConstants,
    pub rows: Vec<AmplitudeRow>,
    index: HashMap<MultiIndex, usize>,
}

impl AmplitudeTable {
    pub fn row(&self, k: &MultiIndex) -> Option<&AmplitudeRow> {
        self.index.get(k).map(|&i| &self.rows[i])
    }

    pub fn f(&self, k: &MultiIndex) -> Option<&BigRational> {
        self.row(k).map(|r| &r.f)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let ks: Vec<String> = (1..=self.m).map(|i| format!("k{i}")).collect();
        out.push_str(&format!("{},gamma,c,f,f_float\n", ks.join(",")));
        for row in &self.rows {
            let parts: Vec<String> = row.k.parts().iter().map(|p| p.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{},{:e}\n",
                parts.join(","),
                rational_string(&row.gamma),
                row.c.as_ref().map(rational_string).unwrap_or_default(),
                rational_string(&row.f),
                Field::to_f64(&row.f),
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "k": r.k.parts(),
                    "gamma": rational_string(&r.gamma),
                    "c": r.c.as_ref().map(rational_string),
                    "f": rational_string(&r.f),
                })
            })
            .collect();
        serde_json::json!({
            "model": self.model.name(),
            "M": self.m,
            "order": self.order,
            "u_c": rational_string(&self.constants.u_c),
            "rows": rows,
        })
    }
}

/// Amplitude table of any model up to total degree `order`.
///
/// Staircase models go through `f_k = c_k f_0^{1-|k|} Π f_{e_i}^{k_i}`; walk
/// models through their own coupled recursions.
pub fn amplitude_table(
    model: &AmplitudeModel,
    m: usize,
    order: u32,
) -> Result<AmplitudeTable, AsymptoticsError> {
    if m == 0 {
        return Err(AsymptoticsError::InvalidParameter(
            "M must be at least 1".into(),
        ));
    }
    let constants = ModelConstants::for_model(model, m)?;
    let mut rows = Vec::new();
    match model {
        AmplitudeModel::Walk(w) => {
            let f = walk_table(*w, m, order);
            for k in MultiIndex::graded_total(m, order) {
                rows.push(AmplitudeRow {
                    gamma: gamma_exponent(model, &k),
                    c: None,
                    f: f[&k].clone(),
                    k,
                });
            }
        }
        _ => {
            let c = c_table::<BigRational>(m, order);
            for k in MultiIndex::graded_total(m, order) {
                let ck = c.get(&k).expect("c table covers order").clone();
                let f = &ck
                    * pow_i(&constants.f0, 1 - k.total() as i64)
                    * f_e_power(&constants.f_e, &k);
                rows.push(AmplitudeRow {
                    gamma: gamma_exponent(model, &k),
                    c: Some(ck),
                    f,
                    k,
                });
            }
        }
    }
    let index = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.k.clone(), i))
        .collect();
    Ok(AmplitudeTable {
        model: model.clone(),
        m,
        order,
        constants,
        rows,
        index,
    })
}

fn pow_i(x: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn f_e_power(f_e: &[BigRational], k: &MultiIndex) -> BigRational {
    k.parts()
        .iter()
        .zip(f_e)
        .fold(BigRational::one(), |acc, (&ki, f)| {
            acc * num_traits::pow(f.clone(), ki as usize)
        })
}

/// Shift sum `Σ_{i<M} w_i (k_i + 1) f_{k-e_{i+1}+e_i}`.
fn shift_sum(
    k: &MultiIndex,
    f: &HashMap<MultiIndex, BigRational>,
    w: impl Fn(usize) -> BigRational,
) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 1..k.dim() {
        if let Some(s) = k.shift_down(i) {
            acc += w(i) * int_rat(k.get(i) as i64 + 1) * &f[&s];
        }
    }
    acc
}

fn previous(
    k: &MultiIndex,
    f: &HashMap<MultiIndex, BigRational>,
    gamma: impl Fn(&MultiIndex) -> BigRational,
) -> BigRational {
    k.minus_unit(1)
        .map(|p| gamma(&p) * &f[&p])
        .unwrap_or_else(BigRational::zero)
}

/// `Σ_{l ≤ k, l ∉ skip} a_l b_{k-l}`.
fn convolution(
    k: &MultiIndex,
    a: &HashMap<MultiIndex, BigRational>,
    b: &HashMap<MultiIndex, BigRational>,
    skip: impl Fn(&MultiIndex) -> bool,
) -> BigRational {
    let mut acc = BigRational::zero();
    for l in k.sub_indices() {
        if skip(&l) {
            continue;
        }
        acc += &a[&l] * &b[&k.checked_sub(&l).expect("sub-index")];
    }
    acc
}

/// Staircase amplitudes straight from the diagonal-model recursion
/// `γ_{k-e1} f_{k-e1}/16 + Σ (i+1)/4 (k_i+1) f_{k-e_{i+1}+e_i} + Σ_l f_l f_{k-l} = 0`,
/// without going through `c_k`.
pub fn staircase_f_direct(m: usize, order: u32) -> HashMap<MultiIndex, BigRational> {
    let model = AmplitudeModel::Diagonal;
    let mut f: HashMap<MultiIndex, BigRational> = HashMap::new();
    let f0 = -BigRational::one();
    let sixteenth = BigRational::new(1.into(), 16.into());
    for k in MultiIndex::graded_total(m, order) {
        if k.is_zero() {
            f.insert(k, f0.clone());
            continue;
        }
        let rest = previous(&k, &f, |p| &sixteenth * gamma_exponent(&model, p))
            + shift_sum(&k, &f, |i| BigRational::new(BigInt::from(i + 1), 4.into()))
            + convolution(&k, &f, &f, |l| l.is_zero() || *l == k);
        let v = -rest / (int_rat(2) * &f0);
        f.insert(k, v);
    }
    f
}

fn walk_table(w: WalkModel, m: usize, order: u32) -> HashMap<MultiIndex, BigRational> {
    let ks = MultiIndex::graded_total(m, order);
    let gd = |k: &MultiIndex| gamma_exponent(&AmplitudeModel::Diagonal, k);
    let two_shift = |i: usize| int_rat(2 * (i as i64 + 1));

    // Dyck: γ f_{k-e1} + 2Σ(i+1)(k_i+1) f_shift + Σ_l f_l f_{k-l} = 0, f_0 = -4.
    let mut d: HashMap<MultiIndex, BigRational> = HashMap::new();
    let d0 = int_rat(-4);
    for k in &ks {
        if k.is_zero() {
            d.insert(k.clone(), d0.clone());
            continue;
        }
        let rest = previous(k, &d, gd)
            + shift_sum(k, &d, two_shift)
            + convolution(k, &d, &d, |l| l.is_zero() || l == k);
        let v = -rest / (int_rat(2) * &d0);
        d.insert(k.clone(), v);
    }
    if w == WalkModel::Dyck {
        return d;
    }

    let g1 = |k: &MultiIndex| gd(k) + BigRational::one();
    let bilateral = || {
        // γ f_{k-e1} + 2Σ(i+1)(k_i+1) f_shift - 8 Σ_l f_l f_{k-l} = 0, f_0 = 1/2.
        let mut b: HashMap<MultiIndex, BigRational> = HashMap::new();
        let b0 = half();
        for k in &ks {
            if k.is_zero() {
                b.insert(k.clone(), b0.clone());
                continue;
            }
            let rest = previous(k, &b, g1) + shift_sum(k, &b, two_shift)
                - int_rat(8) * convolution(k, &b, &b, |l| l.is_zero() || l == k);
            let v = rest / (int_rat(16) * &b0);
            b.insert(k.clone(), v);
        }
        b
    };
    let meander = || {
        // γ f_{k-e1} + 2Σ(i+1)(k_i+1) f_shift + Σ_l f_l f^d_{k-l} = 0, f_0 = 1.
        let mut me: HashMap<MultiIndex, BigRational> = HashMap::new();
        for k in &ks {
            if k.is_zero() {
                me.insert(k.clone(), BigRational::one());
                continue;
            }
            let rest = previous(k, &me, g1)
                + shift_sum(k, &me, two_shift)
                + convolution(k, &me, &d, |l| l == k);
            let v = -rest / &d0;
            me.insert(k.clone(), v);
        }
        me
    };
    match w {
        WalkModel::Dyck => unreachable!(),
        WalkModel::BilateralDyck => bilateral(),
        WalkModel::Meander => meander(),
        WalkModel::Bernoulli => {
            let b = bilateral();
            let me = meander();
            ks.iter()
                .map(|k| (k.clone(), convolution(k, &b, &me, |_| false)))
                .collect()
        }
    }
}
