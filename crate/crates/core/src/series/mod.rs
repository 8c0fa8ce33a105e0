//! Exact truncated power-series solutions of the functional equations for
//! staircase polygons and directed walks, and the moments read off them.

mod jets;
mod moments;
mod poly;
mod solve;

pub use jets::{solve_jets, JetSeries};
pub use moments::{
    factorial_mgf_from_series, factorial_mgf_series, finite_moments, stirling2, FiniteMoments,
    RationalSeries, MAX_FINITE_ORDER, MAX_MGF_DEGREE, MAX_MGF_ORDER,
};
pub use poly::{Coeff, Exponents, IntSeries, Piece, RatSeries, SeriesPoly};
pub use solve::{
    h_matches_g, solve_qfe, solve_qfe_fixed_point, verify_feq, verify_h_equals_g,
    MAX_H_EQUALS_G_ORDER, MAX_SERIES_ORDER,
};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::WalkModel;

/// The six functional equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationModel {
    /// Staircase polygons by half-perimeter and diagonal length moments.
    StaircaseDiagonal,
    /// Staircase polygons by width, height (weight `y`) and column height moments.
    StaircaseColumn,
    Dyck,
    BilateralDyck,
    Meander,
    Bernoulli,
}

impl EquationModel {
    pub const ALL: [EquationModel; 6] = [
        EquationModel::StaircaseDiagonal,
        EquationModel::StaircaseColumn,
        EquationModel::Dyck,
        EquationModel::BilateralDyck,
        EquationModel::Meander,
        EquationModel::Bernoulli,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EquationModel::StaircaseDiagonal => "staircase-diagonal",
            EquationModel::StaircaseColumn => "staircase-column",
            EquationModel::Dyck => "dyck",
            EquationModel::BilateralDyck => "bilateral-dyck",
            EquationModel::Meander => "meander",
            EquationModel::Bernoulli => "bernoulli",
        }
    }

    pub fn walk(self) -> Option<WalkModel> {
        match self {
            EquationModel::Dyck => Some(WalkModel::Dyck),
            EquationModel::BilateralDyck => Some(WalkModel::BilateralDyck),
            EquationModel::Meander => Some(WalkModel::Meander),
            EquationModel::Bernoulli => Some(WalkModel::Bernoulli),
            _ => None,
        }
    }
}

impl From<WalkModel> for EquationModel {
    fn from(w: WalkModel) -> Self {
        match w {
            WalkModel::Dyck => EquationModel::Dyck,
            WalkModel::BilateralDyck => EquationModel::BilateralDyck,
            WalkModel::Meander => EquationModel::Meander,
            WalkModel::Bernoulli => EquationModel::Bernoulli,
        }
    }
}

impl fmt::Display for EquationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EquationModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "staircase" | "staircase-diagonal" | "diagonal" => Ok(EquationModel::StaircaseDiagonal),
            "staircase-column" | "column" => Ok(EquationModel::StaircaseColumn),
            "dyck" => Ok(EquationModel::Dyck),
            "bilateral-dyck" | "bilateral" => Ok(EquationModel::BilateralDyck),
            "meander" => Ok(EquationModel::Meander),
            "bernoulli" => Ok(EquationModel::Bernoulli),
            other => Err(format!("unknown model {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("fixed-point iteration did not stabilise within {iterations} iterations")]
    NonStabilized { iterations: usize },
    #[error("the column model needs a height weight y")]
    MissingHeightWeight,
    #[error("model {0} takes no height weight")]
    UnexpectedHeightWeight(EquationModel),
    #[error("missing solution of the {0} equation")]
    MissingDependency(EquationModel),
    #[error("no objects of size {n0}")]
    ZeroCount { n0: usize },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(serde::Serialize)]
struct JsonTerm {
    n0: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<u32>,
    exps: Vec<u32>,
    coeff: String,
}

#[derive(serde::Serialize)]
struct JsonSeries<'a> {
    model: &'a str,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    terms: Vec<JsonTerm>,
}

/// JSON export: `{model, M, N, terms: [{n0, exps, coeff}]}` with exact
/// coefficients as strings. Column-model terms carry their width as well.
pub fn series_to_json<C: Coeff>(
    model: EquationModel,
    series: &SeriesPoly<C>,
    y: Option<&C>,
) -> serde_json::Value {
    let column = model == EquationModel::StaircaseColumn;
    let terms = series
        .pieces()
        .iter()
        .enumerate()
        .flat_map(|(n, p)| {
            p.iter().map(move |(e, c)| JsonTerm {
                n0: n,
                width: column.then_some(e[0]),
                exps: e[1..].to_vec(),
                coeff: c.to_exact_string(),
            })
        })
        .collect();
    let doc = JsonSeries {
        model: model.name(),
        m: series.m(),
        n: series.order(),
        y: y.map(|v| v.to_exact_string()),
        terms,
    };
    serde_json::to_value(doc).expect("series serialises")
}
