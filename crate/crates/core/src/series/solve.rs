//! Truncated solutions of the six functional equations.
//!
//! Every equation has the shape `X = Φ(X ∘ v)` where the substitution `v`
//! preserves the grade. Writing the geometric denominators as `S = 1 + D·S`
//! makes the grade-`n` part of the solution depend only on grades below `n`,
//! so the main solver fills the series one grade at a time. A literal
//! fixed-point iteration is kept as an independent cross-check.

use super::poly::{
    piece_add_into, piece_monomial, piece_mul_add, piece_substitute_v, unit_piece, Coeff, Piece,
    SeriesPoly,
};
use super::{EquationModel, SeriesError};

/// A graded algebra in which the equations can be solved grade by grade.
pub(crate) trait Graded {
    type P: Clone;

    fn zero(&self) -> Self::P;
    fn one(&self) -> Self::P;
    fn add_into(&self, acc: &mut Self::P, x: &Self::P);
    fn mul_add(&self, acc: &mut Self::P, a: &Self::P, b: &Self::P);
    /// `c · u_0^{a0} · (u_1 ⋯ u_M)^{e} · x`.
    fn monomial(&self, x: &Self::P, c: i64, a0: u32, e: u32) -> Self::P;
    /// `y · x` for the column model.
    fn times_y(&self, x: &Self::P) -> Result<Self::P, SeriesError>;
    /// `x ∘ v` for a homogeneous part of grade `grade`.
    fn subst(&self, x: &Self::P, grade: usize) -> Self::P;
}

pub(crate) struct Sparse<'a, C> {
    pub m: usize,
    pub y: Option<&'a C>,
}

impl<C: Coeff> Graded for Sparse<'_, C> {
    type P = Piece<C>;

    fn zero(&self) -> Piece<C> {
        Piece::new()
    }

    fn one(&self) -> Piece<C> {
        unit_piece(self.m)
    }

    fn add_into(&self, acc: &mut Piece<C>, x: &Piece<C>) {
        piece_add_into(acc, x)
    }

    fn mul_add(&self, acc: &mut Piece<C>, a: &Piece<C>, b: &Piece<C>) {
        piece_mul_add(acc, a, b)
    }

    fn monomial(&self, x: &Piece<C>, c: i64, a0: u32, e: u32) -> Piece<C> {
        piece_monomial(x, &C::from_i64(c), a0, e)
    }

    fn times_y(&self, x: &Piece<C>) -> Result<Piece<C>, SeriesError> {
        let y = self.y.ok_or(SeriesError::MissingHeightWeight)?;
        Ok(piece_monomial(x, y, 0, 0))
    }

    fn subst(&self, x: &Piece<C>, _grade: usize) -> Piece<C> {
        piece_substitute_v(x)
    }
}

/// `S = 1/(1 - D)` grade by grade, where `d_at(n, S_0..S_{n-1})` yields `D_n`.
fn geometric_online<A: Graded>(
    alg: &A,
    order: usize,
    mut d_at: impl FnMut(usize, &[A::P]) -> Result<A::P, SeriesError>,
) -> Result<Vec<A::P>, SeriesError> {
    let mut s = Vec::with_capacity(order + 1);
    let mut d = Vec::with_capacity(order + 1);
    s.push(alg.one());
    d.push(alg.zero());
    for n in 1..=order {
        d.push(d_at(n, &s)?);
        let mut acc = alg.zero();
        for k in 1..=n {
            alg.mul_add(&mut acc, &d[k], &s[n - k]);
        }
        s.push(acc);
    }
    Ok(s)
}

/// Solves `model` to grade `order` in the algebra `alg`.
pub(crate) fn solve_online<A: Graded>(
    alg: &A,
    model: EquationModel,
    order: usize,
) -> Result<Vec<A::P>, SeriesError> {
    match model {
        EquationModel::StaircaseDiagonal => {
            // G = t²U·S, S = 1/(1 - 2tU - G∘v)
            let s = geometric_online(alg, order, |n, s| {
                let mut d = if n >= 2 {
                    alg.subst(&alg.monomial(&s[n - 2], 1, 2, 1), n)
                } else {
                    alg.zero()
                };
                if n == 1 {
                    alg.add_into(&mut d, &alg.monomial(&alg.one(), 2, 1, 1));
                }
                Ok(d)
            })?;
            Ok((0..=order)
                .map(|n| {
                    if n >= 2 {
                        alg.monomial(&s[n - 2], 1, 2, 1)
                    } else {
                        alg.zero()
                    }
                })
                .collect())
        }
        EquationModel::StaircaseColumn => {
            // H = y·t·E·S = y·t·(S - 1), E = H∘v + t·u_0·U, S = 1/(1 - E)
            let s = geometric_online(alg, order, |n, s| {
                let mut e = if n >= 2 {
                    alg.subst(&alg.times_y(&s[n - 1])?, n)
                } else {
                    alg.zero()
                };
                if n == 1 {
                    alg.add_into(&mut e, &alg.monomial(&alg.one(), 1, 1, 1));
                }
                Ok(e)
            })?;
            (0..=order)
                .map(|n| {
                    if n >= 2 {
                        alg.times_y(&s[n - 1])
                    } else {
                        Ok(alg.zero())
                    }
                })
                .collect()
        }
        EquationModel::Dyck => dyck(alg, order),
        EquationModel::BilateralDyck => {
            let d = dyck(alg, order)?;
            bilateral(alg, &d, order)
        }
        EquationModel::Meander => {
            let d = dyck(alg, order)?;
            Ok(meander(alg, &d, order))
        }
        EquationModel::Bernoulli => {
            let d = dyck(alg, order)?;
            let b = bilateral(alg, &d, order)?;
            let m = meander(alg, &d, order);
            Ok(extend_by_meander(alg, &b, &m, 2, order))
        }
    }
}

fn dyck<A: Graded>(alg: &A, order: usize) -> Result<Vec<A::P>, SeriesError> {
    // G = 1/(1 - t²U·G∘v)
    geometric_online(alg, order, |n, s| {
        Ok(if n >= 2 {
            alg.monomial(&alg.subst(&s[n - 2], n - 2), 1, 2, 1)
        } else {
            alg.zero()
        })
    })
}

fn bilateral<A: Graded>(alg: &A, d: &[A::P], order: usize) -> Result<Vec<A::P>, SeriesError> {
    geometric_online(alg, order, |n, _| {
        Ok(if n >= 2 {
            alg.monomial(&alg.subst(&d[n - 2], n - 2), 2, 2, 1)
        } else {
            alg.zero()
        })
    })
}

fn meander<A: Graded>(alg: &A, d: &[A::P], order: usize) -> Vec<A::P> {
    // G^m = G^d·(1 + tU·G^m∘v)
    let mut g: Vec<A::P> = Vec::with_capacity(order + 1);
    let mut shifted: Vec<A::P> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = d[n].clone();
        for j in 0..n {
            alg.mul_add(&mut acc, &d[j], &shifted[n - 1 - j]);
        }
        shifted.push(alg.monomial(&alg.subst(&acc, n), 1, 1, 1));
        g.push(acc);
    }
    g
}

/// `base·(1 + c·tU·m∘v)`.
fn extend_by_meander<A: Graded>(
    alg: &A,
    base: &[A::P],
    m: &[A::P],
    c: i64,
    order: usize,
) -> Vec<A::P> {
    let shifted: Vec<A::P> = (0..=order)
        .map(|n| alg.monomial(&alg.subst(&m[n], n), c, 1, 1))
        .collect();
    (0..=order)
        .map(|n| {
            let mut acc = base[n].clone();
            for j in 0..n {
                alg.mul_add(&mut acc, &base[j], &shifted[n - 1 - j]);
            }
            acc
        })
        .collect()
}

/// Largest truncation order accepted by [`solve_qfe`] and [`verify_feq`].
pub const MAX_SERIES_ORDER: usize = 40;

fn check_order(order: usize) -> Result<(), SeriesError> {
    if order > MAX_SERIES_ORDER {
        return Err(SeriesError::InvalidParameter(format!(
            "truncation order {order} exceeds {MAX_SERIES_ORDER}"
        )));
    }
    Ok(())
}

pub(crate) fn check_params<C>(
    model: EquationModel,
    m: usize,
    order: usize,
    y: Option<&C>,
) -> Result<(), SeriesError> {
    if m < 1 {
        return Err(SeriesError::InvalidParameter("M must be at least 1".into()));
    }
    if order < 2 {
        return Err(SeriesError::InvalidParameter(
            "truncation order N must be at least 2".into(),
        ));
    }
    match (model == EquationModel::StaircaseColumn, y.is_some()) {
        (true, false) => Err(SeriesError::MissingHeightWeight),
        (false, true) => Err(SeriesError::UnexpectedHeightWeight(model)),
        _ => Ok(()),
    }
}

/// Solves the functional equation of `model` with `M = m` moment variables to
/// grade `order`. `y` is the height weight and is required exactly for the column model.
pub fn solve_qfe<C: Coeff>(
    model: EquationModel,
    m: usize,
    order: usize,
    y: Option<&C>,
) -> Result<SeriesPoly<C>, SeriesError> {
    check_params(model, m, order, y)?;
    check_order(order)?;
    let pieces = solve_online(&Sparse { m, y }, model, order)?;
    Ok(SeriesPoly::from_pieces(m, pieces))
}

/// One application of the right-hand side `Φ` to a candidate `x`; `deps` holds
/// the solutions of the models `model` depends on (Dyck, bilateral, meander).
fn apply_rhs<C: Coeff>(
    model: EquationModel,
    x: &SeriesPoly<C>,
    deps: &Deps<C>,
    y: Option<&C>,
) -> Result<SeriesPoly<C>, SeriesError> {
    let (m, order) = (x.m(), x.order());
    let one = SeriesPoly::<C>::one(m, order);
    let c = |v: i64| C::from_i64(v);
    Ok(match model {
        EquationModel::StaircaseDiagonal => {
            let d = one.mul_monomial(&c(2), 1, 1, 1).add(&x.substitute_v());
            d.geometric().mul_monomial(&c(1), 2, 2, 1)
        }
        EquationModel::StaircaseColumn => {
            let y = y.ok_or(SeriesError::MissingHeightWeight)?;
            let e = x.substitute_v().add(&one.mul_monomial(&c(1), 1, 1, 1));
            e.mul(&e.geometric()).mul_monomial(y, 1, 0, 0)
        }
        EquationModel::Dyck => x.substitute_v().mul_monomial(&c(1), 2, 2, 1).geometric(),
        EquationModel::BilateralDyck => deps
            .dyck()?
            .substitute_v()
            .mul_monomial(&c(2), 2, 2, 1)
            .geometric(),
        EquationModel::Meander => {
            deps.dyck()?
                .mul(&one.add(&x.substitute_v().mul_monomial(&c(1), 1, 1, 1)))
        }
        EquationModel::Bernoulli => {
            let gm = deps.meander()?.substitute_v().mul_monomial(&c(2), 1, 1, 1);
            deps.bilateral()?.mul(&one.add(&gm))
        }
    })
}

struct Deps<C> {
    dyck: Option<SeriesPoly<C>>,
    bilateral: Option<SeriesPoly<C>>,
    meander: Option<SeriesPoly<C>>,
}

impl<C> Deps<C> {
    fn dyck(&self) -> Result<&SeriesPoly<C>, SeriesError> {
        self.dyck
            .as_ref()
            .ok_or(SeriesError::MissingDependency(EquationModel::Dyck))
    }

    fn bilateral(&self) -> Result<&SeriesPoly<C>, SeriesError> {
        self.bilateral
            .as_ref()
            .ok_or(SeriesError::MissingDependency(EquationModel::BilateralDyck))
    }

    fn meander(&self) -> Result<&SeriesPoly<C>, SeriesError> {
        self.meander
            .as_ref()
            .ok_or(SeriesError::MissingDependency(EquationModel::Meander))
    }
}

fn deps_for<C: Coeff>(
    model: EquationModel,
    solve: impl Fn(EquationModel) -> Result<SeriesPoly<C>, SeriesError>,
) -> Result<Deps<C>, SeriesError> {
    let needs = |w: EquationModel| -> bool {
        matches!(
            (model, w),
            (
                EquationModel::BilateralDyck | EquationModel::Meander | EquationModel::Bernoulli,
                EquationModel::Dyck
            ) | (
                EquationModel::Bernoulli,
                EquationModel::BilateralDyck | EquationModel::Meander
            )
        )
    };
    Ok(Deps {
        dyck: needs(EquationModel::Dyck)
            .then(|| solve(EquationModel::Dyck))
            .transpose()?,
        bilateral: needs(EquationModel::BilateralDyck)
            .then(|| solve(EquationModel::BilateralDyck))
            .transpose()?,
        meander: needs(EquationModel::Meander)
            .then(|| solve(EquationModel::Meander))
            .transpose()?,
    })
}

/// Literal fixed-point iteration `X ← Φ(X ∘ v)` from `X = 0`, stopping once
/// two successive iterates agree through grade `order`.
pub fn solve_qfe_fixed_point<C: Coeff>(
    model: EquationModel,
    m: usize,
    order: usize,
    y: Option<&C>,
) -> Result<SeriesPoly<C>, SeriesError> {
    check_params(model, m, order, y)?;
    check_order(order)?;
    let deps = deps_for(model, |w| solve_qfe_fixed_point::<C>(w, m, order, None))?;
    iterate_to_fixed_point(model, m, order, y, &deps, order + 2)
}

fn iterate_to_fixed_point<C: Coeff>(
    model: EquationModel,
    m: usize,
    order: usize,
    y: Option<&C>,
    deps: &Deps<C>,
    cap: usize,
) -> Result<SeriesPoly<C>, SeriesError> {
    let mut x = SeriesPoly::zero(m, order);
    for _ in 0..cap {
        let next = apply_rhs(model, &x, deps, y)?;
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(SeriesError::NonStabilized { iterations: cap })
}

/// Substitutes `series` into the cross-multiplied equation of `model` and returns
/// left minus right side through the truncation order. It vanishes for a solution.
pub fn verify_feq<C: Coeff>(
    model: EquationModel,
    series: &SeriesPoly<C>,
    y: Option<&C>,
) -> Result<SeriesPoly<C>, SeriesError> {
    let (m, order) = (series.m(), series.order());
    check_params(model, m, order, y)?;
    check_order(order)?;
    let deps = deps_for(model, |w| solve_qfe::<C>(w, m, order, None))?;
    let one = SeriesPoly::<C>::one(m, order);
    let c = |v: i64| C::from_i64(v);
    let x = series;
    Ok(match model {
        EquationModel::StaircaseDiagonal => {
            // G·(1 - 2tU - G∘v) - t²U
            let denom = one
                .sub(&one.mul_monomial(&c(2), 1, 1, 1))
                .sub(&x.substitute_v());
            x.mul(&denom).sub(&one.mul_monomial(&c(1), 2, 2, 1))
        }
        EquationModel::StaircaseColumn => {
            // H·(1 - E) - y·t·E
            let y = y.ok_or(SeriesError::MissingHeightWeight)?;
            let e = x.substitute_v().add(&one.mul_monomial(&c(1), 1, 1, 1));
            x.mul(&one.sub(&e)).sub(&e.mul_monomial(y, 1, 0, 0))
        }
        EquationModel::Dyck => x
            .mul(&one.sub(&x.substitute_v().mul_monomial(&c(1), 2, 2, 1)))
            .sub(&one),
        EquationModel::BilateralDyck => {
            let d = deps.dyck()?.substitute_v().mul_monomial(&c(2), 2, 2, 1);
            x.mul(&one.sub(&d)).sub(&one)
        }
        EquationModel::Meander => x.sub(
            &deps
                .dyck()?
                .mul(&one.add(&x.substitute_v().mul_monomial(&c(1), 1, 1, 1))),
        ),
        EquationModel::Bernoulli => {
            let gm = deps.meander()?.substitute_v().mul_monomial(&c(2), 1, 1, 1);
            x.sub(&deps.bilateral()?.mul(&one.add(&gm)))
        }
    })
}

/// Checks `H(u_0, u_1, u_0) = G(u_0, u_1)` coefficientwise for a column series
/// `h` (solved with `y = 1`) and a diagonal series `g`, both with `M = 1`.
pub fn h_matches_g<C: Coeff>(h: &SeriesPoly<C>, g: &SeriesPoly<C>) -> bool {
    if h.m() != 1 || g.m() != 1 || h.order() != g.order() {
        return false;
    }
    (0..=h.order()).all(|n| {
        // In the column series the grade already counts width plus height, so
        // setting y = u_0 only forgets the width.
        let mut collapsed: Piece<C> = Piece::new();
        for (e, c) in h.piece(n) {
            super::poly::add_coeff(&mut collapsed, vec![n as u32, e[1]], c.clone());
        }
        &collapsed == g.piece(n)
    })
}

/// Largest order accepted by [`verify_h_equals_g`].
pub const MAX_H_EQUALS_G_ORDER: usize = 14;

/// Solves both staircase models at `M = 1` to grade `order` and compares them
/// via [`h_matches_g`].
pub fn verify_h_equals_g(order: usize) -> Result<bool, SeriesError> {
    if order > MAX_H_EQUALS_G_ORDER {
        return Err(SeriesError::InvalidParameter(format!(
            "order {order} exceeds the limit {MAX_H_EQUALS_G_ORDER}"
        )));
    }
    use num_bigint::BigInt;
    let one = BigInt::from(1);
    let h = solve_qfe::<BigInt>(EquationModel::StaircaseColumn, 1, order, Some(&one))?;
    let g = solve_qfe::<BigInt>(EquationModel::StaircaseDiagonal, 1, order, None)?;
    Ok(h_matches_g(&h, &g))
}
