pub mod asymptotics;
pub mod lattice;
pub mod montecarlo;
pub mod multiindex;
pub mod scalar;
pub mod series;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
