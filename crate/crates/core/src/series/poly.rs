use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

use crate::scalar::rational_string;

/// Coefficient ring of a [`SeriesPoly`]: integers for pure counts, rationals
/// once a numeric height weight `y` enters.
pub trait Coeff: Num + Clone + Debug + Display + Neg<Output = Self> + Send + Sync {
    fn from_i64(n: i64) -> Self;
    fn to_rational(&self) -> BigRational;
    /// Exact decimal or `p/q` rendering.
    fn to_exact_string(&self) -> String;
}

impl Coeff for BigInt {
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

impl Coeff for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn to_exact_string(&self) -> String {
        rational_string(self)
    }
}

/// Exponents `(a_0, a_1, ..., a_M)` of `u_0^{a_0} u_1^{a_1} ... u_M^{a_M}`.
pub type Exponents = Vec<u32>;

/// Homogeneous part of a series: sparse map from exponents to coefficients.
pub type Piece<C> = BTreeMap<Exponents, C>;

/// Power series truncated at grade `N` whose grade-`n` part is a sparse
/// polynomial in `u_0, ..., u_M`.
///
/// For perimeter-graded models (staircase diagonals, walks) the grade equals
/// the exponent of `u_0`. For the column model the grade is the half-perimeter
/// (width plus height) while `a_0` records the width.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoly<C> {
    m: usize,
    pieces: Vec<Piece<C>>,
}

pub type IntSeries = SeriesPoly<BigInt>;
pub type RatSeries = SeriesPoly<BigRational>;

impl<C: Coeff> SeriesPoly<C> {
    pub fn zero(m: usize, order: usize) -> Self {
        Self {
            m,
            pieces: vec![Piece::new(); order + 1],
        }
    }

    pub(crate) fn from_pieces(m: usize, pieces: Vec<Piece<C>>) -> Self {
        Self { m, pieces }
    }

    /// Number of moment variables `M`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn piece(&self, n: usize) -> &Piece<C> {
        &self.pieces[n]
    }

    pub fn pieces(&self) -> &[Piece<C>] {
        &self.pieces
    }

    pub fn coeff(&self, n: usize, exps: &[u32]) -> C {
        self.pieces
            .get(n)
            .and_then(|p| p.get(exps))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.values().all(|c| c.is_zero()))
    }

    pub fn num_terms(&self) -> usize {
        self.pieces.iter().map(|p| p.len()).sum()
    }

    /// Adds `c` to the coefficient of `exps` at grade `n`.
    pub fn add_term(&mut self, n: usize, exps: Exponents, c: C) {
        debug_assert_eq!(exps.len(), self.m + 1);
        if n < self.pieces.len() {
            add_coeff(&mut self.pieces[n], exps, c);
        }
    }

    /// Sum of the coefficients at each grade, i.e. the series at `u_0 = ... = u_M = 1`
    /// with the grade variable kept.
    pub fn counts(&self) -> Vec<C> {
        self.pieces
            .iter()
            .map(|p| p.values().fold(C::zero(), |a, c| a + c.clone()))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, p) in other.pieces.iter().enumerate().take(out.pieces.len()) {
            for (e, c) in p {
                add_coeff(&mut out.pieces[n], e.clone(), c.clone());
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&C::from_i64(-1)))
    }

    pub fn scale(&self, c: &C) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                p.iter()
                    .map(|(e, x)| (e.clone(), x.clone() * c.clone()))
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        Self { m: self.m, pieces }
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(self.m, order);
        for i in 0..=order {
            for j in 0..=order - i {
                piece_mul_add(&mut out.pieces[i + j], &self.pieces[i], &other.pieces[j]);
            }
        }
        out
    }

    /// Multiplies by `c · t^{shift} · u_0^{a0} · (u_1 ⋯ u_M)^{e}`, where `t` is the grade.
    pub fn mul_monomial(&self, c: &C, shift: usize, a0: u32, e: u32) -> Self {
        let mut out = Self::zero(self.m, self.order());
        for (n, p) in self.pieces.iter().enumerate() {
            if n + shift <= self.order() {
                out.pieces[n + shift] = piece_monomial(p, c, a0, e);
            }
        }
        out
    }

    /// `1 / (1 - self)`; requires a vanishing grade-0 part.
    pub fn geometric(&self) -> Self {
        assert!(
            self.pieces[0].values().all(|c| c.is_zero()),
            "geometric series needs zero constant term"
        );
        let order = self.order();
        let mut s: Vec<Piece<C>> = Vec::with_capacity(order + 1);
        s.push(unit_piece(self.m));
        for n in 1..=order {
            let mut acc = Piece::new();
            for k in 1..=n {
                piece_mul_add(&mut acc, &self.pieces[k], &s[n - k]);
            }
            s.push(acc);
        }
        Self {
            m: self.m,
            pieces: s,
        }
    }

    /// The substitution `u_k ↦ v_k(u) = Π_{l≥k} u_l^{binom(l,k)}` applied termwise.
    pub fn substitute_v(&self) -> Self {
        let pieces = self.pieces.iter().map(piece_substitute_v).collect();
        Self { m: self.m, pieces }
    }

    /// The constant series `1`.
    pub fn one(m: usize, order: usize) -> Self {
        let mut s = Self::zero(m, order);
        s.pieces[0] = unit_piece(m);
        s
    }

    /// Restricts to grades `0..=order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self {
            m: self.m,
            pieces: self.pieces[..=order.min(self.order())].to_vec(),
        }
    }

    /// Largest exponent of `u_k` (`k ≥ 1`) occurring at grade `n`.
    pub fn max_exponent(&self, n: usize, k: usize) -> u32 {
        self.pieces[n].keys().map(|e| e[k]).max().unwrap_or(0)
    }
}

pub(crate) fn unit_piece<C: Coeff>(m: usize) -> Piece<C> {
    let mut p = Piece::new();
    p.insert(vec![0; m + 1], C::one());
    p
}

pub(crate) fn add_coeff<C: Coeff>(p: &mut Piece<C>, e: Exponents, c: C) {
    if c.is_zero() {
        return;
    }
    match p.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().clone() + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

pub(crate) fn piece_add_into<C: Coeff>(acc: &mut Piece<C>, x: &Piece<C>) {
    for (e, c) in x {
        add_coeff(acc, e.clone(), c.clone());
    }
}

pub(crate) fn piece_mul_add<C: Coeff>(acc: &mut Piece<C>, a: &Piece<C>, b: &Piece<C>) {
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_coeff(acc, e, ca.clone() * cb.clone());
        }
    }
}

pub(crate) fn piece_monomial<C: Coeff>(p: &Piece<C>, c: &C, a0: u32, e: u32) -> Piece<C> {
    p.iter()
        .map(|(ex, x)| {
            let mut ex = ex.clone();
            ex[0] += a0;
            for v in ex.iter_mut().skip(1) {
                *v += e;
            }
            (ex, x.clone() * c.clone())
        })
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

/// New exponent of `u_l` is `Σ_{k=0}^{l} binom(l,k) a_k`; the `u_0` exponent is unchanged.
pub(crate) fn substitute_exponents(a: &[u32]) -> Exponents {
    let mut out = Vec::with_capacity(a.len());
    out.push(a[0]);
    for l in 1..a.len() {
        let mut binom = 1u64;
        let mut s = 0u64;
        for (k, &ak) in a.iter().enumerate().take(l + 1) {
            s += binom * ak as u64;
            binom = binom * (l - k) as u64 / (k + 1) as u64;
        }
        out.push(u32::try_from(s).expect("exponent overflow"));
    }
    out
}

pub(crate) fn piece_substitute_v<C: Coeff>(p: &Piece<C>) -> Piece<C> {
    let mut out = Piece::new();
    for (e, c) in p {
        add_coeff(&mut out, substitute_exponents(e), c.clone());
    }
    out
}
