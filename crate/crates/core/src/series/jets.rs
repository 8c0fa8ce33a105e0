//! Taylor jets about `u_1 = ... = u_M = 1`.
//!
//! Writing `u_k = 1 + δ_k`, the grade-`n` part of a perimeter-graded series
//! becomes a polynomial in `δ`, and its `δ^j` coefficient is exactly the
//! factorial-moment sum `Σ coeff · Π binom(a_i, j_i)`. Truncating at total
//! degree `K` keeps every part tiny, which is what makes orders far beyond
//! the reach of the sparse expansion affordable.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::solve::{solve_online, Graded};
use super::{EquationModel, SeriesError};
use crate::multiindex::MultiIndex;

pub(crate) struct JetAlgebra {
    index: Vec<MultiIndex>,
    // (a, b, a+b) for all pairs within the truncation
    products: Vec<(usize, usize, usize)>,
    // images of the monomials δ^j under δ_k ↦ v_k(1+δ) - 1
    images: Vec<Vec<BigInt>>,
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

impl JetAlgebra {
    pub(crate) fn new(m: usize, degree: u32) -> Self {
        let index = MultiIndex::graded_total(m, degree);
        let pos: HashMap<MultiIndex, usize> = index
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let mut products = Vec::new();
        for (i, a) in index.iter().enumerate() {
            for (j, b) in index.iter().enumerate() {
                if a.total() + b.total() <= degree {
                    products.push((i, j, pos[&a.add(b)]));
                }
            }
        }
        let mut alg = JetAlgebra {
            index,
            products,
            images: Vec::new(),
        };
        // w_k = Π_{l ≥ k} (1 + δ_l)^{binom(l,k)} - 1
        let w: Vec<Vec<BigInt>> = (1..=m)
            .map(|k| {
                let mut jet = alg.power_product(|l| {
                    if l >= k {
                        binom(l as u64, k as u64)
                    } else {
                        BigInt::zero()
                    }
                });
                jet[0] -= 1;
                jet
            })
            .collect();
        let images = alg
            .index
            .iter()
            .map(|j| {
                let mut acc = alg.unit();
                for (k, &e) in j.parts().iter().enumerate() {
                    for _ in 0..e {
                        acc = alg.mul(&acc, &w[k]);
                    }
                }
                acc
            })
            .collect();
        alg.images = images;
        alg
    }

    pub(crate) fn index(&self) -> &[MultiIndex] {
        &self.index
    }

    fn unit(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.index.len()];
        v[0] = BigInt::one();
        v
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.index.len()];
        for &(i, j, k) in &self.products {
            if !a[i].is_zero() && !b[j].is_zero() {
                out[k] += &a[i] * &b[j];
            }
        }
        out
    }

    /// Jet of `Π_l (1 + δ_l)^{e(l)}`: coefficient `Π_l binom(e(l), j_l)`.
    fn power_product(&self, e: impl Fn(usize) -> BigInt) -> Vec<BigInt> {
        self.index
            .iter()
            .map(|j| {
                j.parts()
                    .iter()
                    .enumerate()
                    .fold(BigInt::one(), |acc, (l, &jl)| {
                        let el = e(l + 1);
                        let el = u64::try_from(&el).expect("small exponent");
                        acc * binom(el, jl as u64)
                    })
            })
            .collect()
    }

    fn u_power(&self, e: u64) -> Vec<BigInt> {
        self.power_product(|_| BigInt::from(e))
    }
}

impl Graded for JetAlgebra {
    type P = Vec<BigInt>;

    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.index.len()]
    }

    fn one(&self) -> Vec<BigInt> {
        self.unit()
    }

    fn add_into(&self, acc: &mut Vec<BigInt>, x: &Vec<BigInt>) {
        for (a, b) in acc.iter_mut().zip(x) {
            *a += b;
        }
    }

    fn mul_add(&self, acc: &mut Vec<BigInt>, a: &Vec<BigInt>, b: &Vec<BigInt>) {
        for &(i, j, k) in &self.products {
            if !a[i].is_zero() && !b[j].is_zero() {
                acc[k] += &a[i] * &b[j];
            }
        }
    }

    fn monomial(&self, x: &Vec<BigInt>, c: i64, _a0: u32, e: u32) -> Vec<BigInt> {
        let mut out = self.mul(x, &self.u_power(e as u64));
        for v in out.iter_mut() {
            *v *= c;
        }
        out
    }

    fn times_y(&self, _x: &Vec<BigInt>) -> Result<Vec<BigInt>, SeriesError> {
        Err(SeriesError::Unsupported(
            "Taylor jets do not carry the column model's width",
        ))
    }

    fn subst(&self, x: &Vec<BigInt>, grade: usize) -> Vec<BigInt> {
        // u_0^n ↦ (u_0 u_1 ⋯ u_M)^n, and δ^j ↦ Π w_k^{j_k}
        let mut composed = self.zero();
        for (j, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (acc, w) in composed.iter_mut().zip(&self.images[j]) {
                *acc += c * w;
            }
        }
        self.mul(&composed, &self.u_power(grade as u64))
    }
}

/// Taylor coefficients of a perimeter-graded series about `u_1 = ... = u_M = 1`.
#[derive(Debug, Clone)]
pub struct JetSeries {
    index: Vec<MultiIndex>,
    grades: Vec<Vec<BigInt>>,
}

impl JetSeries {
    /// `[u_0^n] (1/k!) ∂^k G |_{u_1 = ... = u_M = 1}` for `n = 0..=order`.
    pub fn factorial_coefficients(&self, k: &MultiIndex) -> Option<Vec<BigInt>> {
        let i = self.index.iter().position(|x| x == k)?;
        Some(self.grades.iter().map(|g| g[i].clone()).collect())
    }

    pub fn order(&self) -> usize {
        self.grades.len() - 1
    }
}

/// Solves `model` to grade `order`, keeping Taylor coefficients in `u_1..u_M`
/// up to total degree `degree`.
pub fn solve_jets(
    model: EquationModel,
    m: usize,
    degree: u32,
    order: usize,
) -> Result<JetSeries, SeriesError> {
    super::solve::check_params::<BigInt>(model, m, order, None)?;
    let alg = JetAlgebra::new(m, degree);
    let grades = solve_online(&alg, model, order)?;
    Ok(JetSeries {
        index: alg.index().to_vec(),
        grades,
    })
}
