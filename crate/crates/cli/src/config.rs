//! Experiment settings layered as command-line flag, then JSON file, then
//! built-in default.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use hpm_core::{BasketOption, QuantoOption, VanillaOption, DEFAULT_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractKind {
    Single,
    Basket,
    Quanto,
}

impl ContractKind {
    pub fn name(self) -> &'static str {
        match self {
            ContractKind::Single => "single",
            ContractKind::Basket => "basket",
            ContractKind::Quanto => "quanto",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    /// Naive series, single asset only.
    Hpm1,
    /// Smoothed series.
    Hpm2,
    /// Uncorrected basket series terms, basket only.
    BasketLiteral,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Hpm1 => "hpm1",
            Method::Hpm2 => "hpm2",
            Method::BasketLiteral => "basket-literal",
        }
    }
}

/// Every tunable value. `None` means "not given at this layer".
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Contract type; positional on the command line.
    #[arg(skip)]
    pub contract: Option<ContractKind>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Number of retained series terms, 1..=6.
    #[arg(long)]
    pub order: Option<usize>,

    #[arg(long)]
    pub spot: Option<f64>,
    #[arg(long)]
    pub s1: Option<f64>,
    #[arg(long)]
    pub s2: Option<f64>,
    #[arg(long)]
    pub strike: Option<f64>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub vol: Option<f64>,
    #[arg(long)]
    pub vol1: Option<f64>,
    #[arg(long)]
    pub vol2: Option<f64>,
    /// Basket correlation between the two assets.
    #[arg(long)]
    pub corr: Option<f64>,
    /// Quanto correlation between asset and exchange rate.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Basket weight of the first asset; the second gets `1 - weight1`.
    #[arg(long)]
    pub weight1: Option<f64>,
    #[arg(long)]
    pub div1: Option<f64>,
    #[arg(long)]
    pub div2: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    /// Quanto dividend yield.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub maturity: Option<f64>,
    #[arg(long)]
    pub valuation_time: Option<f64>,

    #[arg(long)]
    pub s_min: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub s2_min: Option<f64>,
    #[arg(long)]
    pub s2_max: Option<f64>,
    #[arg(long)]
    pub s2_points: Option<usize>,
    #[arg(long)]
    pub t_points: Option<usize>,
}

macro_rules! layer {
    ($upper:expr, $lower:expr, $($field:ident),*) => {
        Settings { $($field: $upper.$field.or($lower.$field)),* }
    };
}

impl Settings {
    pub fn from_json_file(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Values from `self` win; gaps are filled from `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        layer!(
            self, lower, contract, method, order, spot, s1, s2, strike, rate, vol, vol1, vol2, corr, rho,
            weight1, div1, div2, r1, r2, q, maturity, valuation_time, s_min, s_max, points, s2_min,
            s2_max, s2_points, t_points
        )
    }
}

/// Sweep ranges. Unset ends take per-command defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.max } else { self.min + step * i as f64 })
            .collect()
    }

    fn validate(&self, name: &str) -> anyhow::Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            bail!("{name} range must be finite");
        }
        if self.points == 0 {
            bail!("{name} needs at least one point");
        }
        if self.points > 1 && !(self.min < self.max) {
            bail!("{name} range needs min < max, got [{}, {}]", self.min, self.max);
        }
        if self.min < 0.0 {
            bail!("{name} range must be non-negative");
        }
        Ok(())
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub contract: ContractKind,
    pub method: Method,
    pub order: usize,
    pub single: VanillaOption,
    pub basket: BasketOption,
    pub quanto: QuantoOption,
    pub settings: Settings,
}

pub const FIG1_VOL: f64 = 0.324336;

impl ExperimentConfig {
    pub fn resolve(s: Settings) -> anyhow::Result<Self> {
        let contract = s.contract.unwrap_or(ContractKind::Single);
        let method = s.method.unwrap_or(Method::Hpm2);
        let order = s.order.unwrap_or(DEFAULT_ORDER);
        if !(1..=DEFAULT_ORDER).contains(&order) {
            bail!("order must be between 1 and {DEFAULT_ORDER}, got {order}");
        }
        let strike = s.strike.unwrap_or(40.0);
        let maturity = s.maturity.unwrap_or(0.5);
        let valuation_time = s.valuation_time.unwrap_or(0.0);
        let rate = s.rate.unwrap_or(0.05);
        let single = VanillaOption {
            spot: s.spot.unwrap_or(40.0),
            strike,
            rate,
            vol: s.vol.unwrap_or(FIG1_VOL),
            maturity,
            valuation_time,
        };
        let (v1, v2) = (s.vol1.unwrap_or(0.1), s.vol2.unwrap_or(0.3));
        let corr = s.corr.unwrap_or(0.0);
        let w1 = s.weight1.unwrap_or(0.5);
        let basket = BasketOption {
            spots: vec![s.s1.unwrap_or(40.0), s.s2.unwrap_or(40.0)],
            weights: vec![w1, 1.0 - w1],
            dividends: vec![s.div1.unwrap_or(0.0), s.div2.unwrap_or(0.0)],
            covariance: vec![vec![v1 * v1, corr * v1 * v2], vec![corr * v1 * v2, v2 * v2]],
            rate,
            strike,
            maturity,
            valuation_time,
        };
        let quanto = QuantoOption {
            s1: s.s1.unwrap_or(40.0),
            s2: s.s2.unwrap_or(40.0),
            sigma1: v1,
            sigma2: v2,
            rho: s.rho.unwrap_or(1.0),
            r1: s.r1.unwrap_or(0.03),
            r2: s.r2.unwrap_or(0.05),
            q: s.q.unwrap_or(0.0),
            strike,
            maturity,
            valuation_time,
        };
        match (contract, method) {
            (ContractKind::Single, Method::BasketLiteral) | (ContractKind::Quanto, Method::BasketLiteral) => {
                bail!("method basket-literal applies to basket contracts only")
            }
            (ContractKind::Basket, Method::Hpm1) | (ContractKind::Quanto, Method::Hpm1) => {
                bail!("method hpm1 applies to single-asset contracts only")
            }
            _ => {}
        }
        if !(-1.0..=1.0).contains(&corr) {
            bail!("corr must lie in [-1, 1], got {corr}");
        }
        Ok(Self { contract, method, order, single, basket, quanto, settings: s })
    }

    /// Checks the chosen contract's parameters.
    pub fn validate_contract(&self) -> anyhow::Result<()> {
        match self.contract {
            ContractKind::Single => self.single.validate()?,
            ContractKind::Basket => self.basket.validate()?,
            ContractKind::Quanto => self.quanto.validate()?,
        }
        Ok(())
    }

    pub fn axis1(&self, min: f64, max: f64, points: usize) -> anyhow::Result<Axis> {
        let s = &self.settings;
        let axis = Axis { min: s.s_min.unwrap_or(min), max: s.s_max.unwrap_or(max), points: s.points.unwrap_or(points) };
        axis.validate("S")?;
        Ok(axis)
    }

    pub fn axis2(&self, min: f64, max: f64, points: usize) -> anyhow::Result<Axis> {
        let s = &self.settings;
        let axis = Axis { min: s.s2_min.unwrap_or(min), max: s.s2_max.unwrap_or(max), points: s.s2_points.unwrap_or(points) };
        axis.validate("S2")?;
        Ok(axis)
    }

    /// Valuation times `t` from 0 to maturity inclusive.
    pub fn time_axis(&self, points: usize) -> anyhow::Result<Axis> {
        let axis = Axis { min: 0.0, max: self.single.maturity, points: self.settings.t_points.unwrap_or(points) };
        axis.validate("t")?;
        Ok(axis)
    }

    /// `(key, value)` pairs describing the contract, for report headers.
    pub fn parameters(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![("contract", self.contract.name().to_string()), ("method", self.method.name().to_string())];
        if self.method != Method::Exact && self.method != Method::Hpm1 {
            out.push(("order", self.order.to_string()));
        }
        match self.contract {
            ContractKind::Single => {
                let c = &self.single;
                out.extend([
                    ("spot", c.spot.to_string()),
                    ("strike", c.strike.to_string()),
                    ("rate", c.rate.to_string()),
                    ("vol", c.vol.to_string()),
                ]);
            }
            ContractKind::Basket => {
                let c = &self.basket;
                let v1 = c.covariance[0][0].sqrt();
                let v2 = c.covariance[1][1].sqrt();
                out.extend([
                    ("s1", c.spots[0].to_string()),
                    ("s2", c.spots[1].to_string()),
                    ("strike", c.strike.to_string()),
                    ("rate", c.rate.to_string()),
                    ("vol1", v1.to_string()),
                    ("vol2", v2.to_string()),
                    ("corr", self.settings.corr.unwrap_or(0.0).to_string()),
                    ("weight1", c.weights[0].to_string()),
                    ("div1", c.dividends[0].to_string()),
                    ("div2", c.dividends[1].to_string()),
                ]);
            }
            ContractKind::Quanto => {
                let c = &self.quanto;
                out.extend([
                    ("s1", c.s1.to_string()),
                    ("s2", c.s2.to_string()),
                    ("strike", c.strike.to_string()),
                    ("vol1", c.sigma1.to_string()),
                    ("vol2", c.sigma2.to_string()),
                    ("rho", c.rho.to_string()),
                    ("r1", c.r1.to_string()),
                    ("r2", c.r2.to_string()),
                    ("q", c.q.to_string()),
                ]);
            }
        }
        let (maturity, t) = match self.contract {
            ContractKind::Single => (self.single.maturity, self.single.valuation_time),
            ContractKind::Basket => (self.basket.maturity, self.basket.valuation_time),
            ContractKind::Quanto => (self.quanto.maturity, self.quanto.valuation_time),
        };
        out.push(("maturity", maturity.to_string()));
        out.push(("valuation_time", t.to_string()));
        out
    }
}
