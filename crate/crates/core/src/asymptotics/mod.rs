//! Dominant-balance analysis: amplitude recursions at the critical point,
//! exact limit moments and the scaling-function relations they satisfy.

mod exact;
mod gamma;
mod limits;
mod pde;
mod recursion;

pub use exact::{fourth_root, pow_half, sqrt_rational, ExactScalar};
pub use gamma::gamma;
pub use limits::{
    alpha, limit_moment, limit_moment_ratio, moment_growth_check, Alpha, GrowthReport, GrowthRow,
    MAX_GROWTH_ORDER,
};
pub use pde::{scaling_series_f0, verify_pde_residual, MPoly};
pub use recursion::{
    amplitude_table, c_table, gamma_exponent, staircase_f_direct, AmplitudeRow, AmplitudeTable,
    CTable, ModelConstants,
};

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use thiserror::Error;

use crate::lattice::WalkModel;
use crate::scalar::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptoticsError {
    #[error("cannot add {0} and {1} exactly")]
    IncompatibleTerms(String, String),
    #[error("not expressible exactly: {0}")]
    IrrationalConstant(String),
    #[error("Gamma has a pole at {0}")]
    GammaPole(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

/// Model whose critical amplitudes are computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmplitudeModel {
    /// Staircase polygons, diagonal moments.
    Diagonal,
    /// Staircase polygons, column moments, height weight `y = r^4` with `0 < r < 1`.
    Column {
        y: BigRational,
    },
    Walk(WalkModel),
}

impl AmplitudeModel {
    pub fn is_staircase(&self) -> bool {
        !matches!(self, AmplitudeModel::Walk(_))
    }

    pub fn name(&self) -> String {
        match self {
            AmplitudeModel::Diagonal => "diagonal".into(),
            AmplitudeModel::Column { y } => {
                format!("column(y={})", crate::scalar::rational_string(y))
            }
            AmplitudeModel::Walk(w) => crate::series::EquationModel::from(*w).name().into(),
        }
    }
}

impl fmt::Display for AmplitudeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for AmplitudeModel {
    type Err = String;

    /// Accepts `diagonal`, `column:<y>`, `dyck`, `bilateral-dyck`, `meander`, `bernoulli`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(y) = s.strip_prefix("column:") {
            return Ok(AmplitudeModel::Column {
                y: parse_rational(y).ok_or_else(|| format!("bad height weight {y:?}"))?,
            });
        }
        match s {
            "diagonal" | "staircase" | "staircase-diagonal" => Ok(AmplitudeModel::Diagonal),
            "dyck" => Ok(AmplitudeModel::Walk(WalkModel::Dyck)),
            "bilateral-dyck" | "bilateral" => Ok(AmplitudeModel::Walk(WalkModel::BilateralDyck)),
            "meander" => Ok(AmplitudeModel::Walk(WalkModel::Meander)),
            "bernoulli" => Ok(AmplitudeModel::Walk(WalkModel::Bernoulli)),
            other => Err(format!("unknown amplitude model {other:?}")),
        }
    }
}
