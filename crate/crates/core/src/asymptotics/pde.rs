use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{amplitude_table, AmplitudeModel, AsymptoticsError};
use crate::lattice::WalkModel;
use crate::multiindex::MultiIndex;
use crate::scalar::int_rat;

/// Polynomial in `ε_1, ..., ε_M` truncated at total degree `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly {
    m: usize,
    order: u32,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl MPoly {
    pub fn zero(m: usize, order: u32) -> Self {
        Self {
            m,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, order: u32, c: BigRational) -> Self {
        let mut p = Self::zero(m, order);
        p.add_term(MultiIndex::zeros(m), c);
        p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, k: &MultiIndex) -> BigRational {
        self.terms.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: MultiIndex, c: BigRational) {
        if k.total() > self.order || c.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry(k.clone())
            .or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn map_terms(
        &self,
        f: impl Fn(&MultiIndex, &BigRational) -> Option<(MultiIndex, BigRational)>,
    ) -> Self {
        let mut out = Self::zero(self.m, self.order);
        for (k, c) in &self.terms {
            if let Some((k2, c2)) = f(k, c) {
                out.add_term(k2, c2);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.order = self.order.min(other.order);
        out.terms.retain(|k, _| k.total() <= out.order);
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        self.map_terms(|k, c| Some((k.clone(), c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m, self.order.min(other.order));
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }

    /// `ε_i · p` (1-based `i`).
    pub fn times_eps(&self, i: usize) -> Self {
        let e = MultiIndex::unit(self.m, i);
        self.map_terms(|k, c| Some((k.add(&e), c.clone())))
    }

    /// `ε_i ∂_i p`.
    pub fn euler(&self, i: usize) -> Self {
        self.map_terms(|k, c| Some((k.clone(), c * int_rat(k.get(i) as i64))))
    }

    /// `ε_{i+1} ∂_i p`.
    pub fn raise(&self, i: usize) -> Self {
        self.map_terms(|k, c| {
            let ki = k.get(i);
            let mut parts = k.parts().to_vec();
            parts[i - 1] = ki.checked_sub(1)?;
            parts[i] += 1;
            Some((MultiIndex::new(parts), c * int_rat(ki as i64)))
        })
    }
}

/// `F_0(ε) = Σ_{|k| ≤ order} (-1)^{|k|} f_k ε^k`.
pub fn scaling_series_f0(
    model: &AmplitudeModel,
    m: usize,
    order: u32,
) -> Result<MPoly, AsymptoticsError> {
    let table = amplitude_table(model, m, order)?;
    let mut p = MPoly::zero(m, order);
    for row in &table.rows {
        let sign = if row.k.total() % 2 == 0 {
            row.f.clone()
        } else {
            -row.f.clone()
        };
        p.add_term(row.k.clone(), sign);
    }
    Ok(p)
}

/// `½F - Σ_i (1 + i/2) ε_i ∂_i F`, or with the sum added when `plus` is set.
fn scaling_operator(f: &MPoly, plus: bool) -> MPoly {
    let mut sum = MPoly::zero(f.m(), f.order());
    for i in 1..=f.m() {
        sum = sum.add(
            &f.euler(i)
                .scale(&BigRational::new((i as i64 + 2).into(), 2.into())),
        );
    }
    let half = f.scale(&BigRational::new(1.into(), 2.into()));
    if plus {
        half.add(&sum)
    } else {
        half.sub(&sum)
    }
}

/// `Σ_{i<M} w(i) ε_{i+1} ∂_i F`.
fn raise_sum(f: &MPoly, w: impl Fn(usize) -> BigRational) -> MPoly {
    let mut out = MPoly::zero(f.m(), f.order());
    for i in 1..f.m() {
        out = out.add(&f.raise(i).scale(&w(i)));
    }
    out
}

/// Residual of the differential relation satisfied by `F_0` of `model`,
/// with all terms of total degree `<= order`. It vanishes identically when
/// the amplitudes are right.
///
/// * diagonal: `(1/16) ε_1 (½F - Σ(1+i/2) ε_i ∂_i F) + Σ (i+1)/4 ε_{i+1} ∂_i F + F² - 1`
/// * Dyck: `ε_1 (½F - Σ(1+i/2) ε_i ∂_i F) + 2 Σ (i+1) ε_{i+1} ∂_i F + F² - 16`
/// * bilateral: `F^b F^d + 2`
/// * meander: `-ε_1 (½F + Σ(1+i/2) ε_i ∂_i F) + 2 Σ (i+1) ε_{i+1} ∂_i F + F F^d + 4`
/// * Bernoulli: `F^r - F^b F^m`
pub fn verify_pde_residual(
    model: &AmplitudeModel,
    m: usize,
    order: u32,
) -> Result<MPoly, AsymptoticsError> {
    let f = scaling_series_f0(model, m, order)?;
    let c = |v: i64| MPoly::constant(m, order, int_rat(v));
    let walk = |w: WalkModel| scaling_series_f0(&AmplitudeModel::Walk(w), m, order);
    Ok(match model {
        AmplitudeModel::Diagonal => scaling_operator(&f, false)
            .times_eps(1)
            .scale(&BigRational::new(1.into(), 16.into()))
            .add(&raise_sum(&f, |i| {
                BigRational::new((i as i64 + 1).into(), 4.into())
            }))
            .add(&f.mul(&f))
            .sub(&c(1)),
        AmplitudeModel::Column { .. } => {
            return Err(AsymptoticsError::Unsupported(
                "no scaling relation is implemented for the column model",
            ))
        }
        AmplitudeModel::Walk(WalkModel::Dyck) => scaling_operator(&f, false)
            .times_eps(1)
            .add(&raise_sum(&f, |i| int_rat(2 * (i as i64 + 1))))
            .add(&f.mul(&f))
            .sub(&c(16)),
        AmplitudeModel::Walk(WalkModel::BilateralDyck) => f.mul(&walk(WalkModel::Dyck)?).add(&c(2)),
        AmplitudeModel::Walk(WalkModel::Meander) => scaling_operator(&f, true)
            .times_eps(1)
            .scale(&-BigRational::one())
            .add(&raise_sum(&f, |i| int_rat(2 * (i as i64 + 1))))
            .add(&f.mul(&walk(WalkModel::Dyck)?))
            .add(&c(4)),
        AmplitudeModel::Walk(WalkModel::Bernoulli) => {
            f.sub(&walk(WalkModel::BilateralDyck)?.mul(&walk(WalkModel::Meander)?))
        }
    })
}
