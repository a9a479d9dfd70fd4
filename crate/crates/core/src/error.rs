use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("invalid contract: {0}")]
    InvalidSpec(String),
    #[error("valuation time {t} is after maturity {maturity}")]
    InvalidTime { t: f64, maturity: f64 },
    #[error("degenerate time: {0}")]
    DegenerateTime(&'static str),
    #[error("basket weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("covariance matrix: {0}")]
    Covariance(String),
    #[error("degenerate volatility: sigma_hat^2 = {sigma_hat_sq}")]
    DegenerateVolatility { sigma_hat_sq: f64 },
    #[error("series term {n} is not available (terms 0..=5 only)")]
    UnsupportedTerm { n: usize },
    #[error("expansion order {order} outside 1..=6")]
    UnsupportedOrder { order: usize },
    #[error("closed form covers one or two assets, got {n}")]
    UnsupportedAssetCount { n: usize },
    #[error("grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
