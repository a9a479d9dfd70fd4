//! European put pricing for vanilla, geometric-basket and quanto contracts.
//!
//! All three contracts reduce to one convection-diffusion-reaction problem
//! `u_tau = u_yy + (k1 - 1) u_y - k2 u` with pay-off `max(1 - e^y, 0)`.
//! The crate prices them from the closed-form solution, from a truncated
//! homotopy-perturbation series written in a similarity variable, and from a
//! Crank-Nicolson solver kept as an independent reference.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.
//!
//! ```
//! use hpm_core::{bs_put, price_single_hpm2, VanillaOption};
//!
//! let spec = VanillaOption { spot: 40.0, strike: 40.0, rate: 0.05, vol: 0.324336, maturity: 0.5, valuation_time: 0.0 };
//! let exact = bs_put(&spec).unwrap().value();
//! let series = price_single_hpm2(&spec, 6).unwrap().value();
//! assert!((exact - series).abs() < 1e-3);
//! ```

pub mod error;
pub mod exact;
pub mod pde;
pub mod real;
pub mod series;
pub mod special;
pub mod transforms;
pub mod validation;

pub use error::{Error, Result};
pub use exact::{
    basket_put_exact, basket_put_reduced, bs_call_from_parity, bs_put, quanto_put_exact,
    reduced_exact_u, PutPrice,
};
pub use pde::{cn_solve, cn_solve_with, fd_residual, BoundaryMode, GridSpec, InitialData, PdeSolution};
pub use real::Real;
pub use series::{
    phi_term, price_basket_hpm, price_quanto_hpm, price_single_hpm1, price_single_hpm2,
    single_asset_term, BasketVariant, HpmExpansion, DEFAULT_ORDER,
};
pub use special::{erf, erfc, erfcx, normal_cdf};
pub use transforms::{
    reduce_basket, reduce_quanto, BasketReduction, BasketSpec, GeneralizedReducedParams,
    QuantoReduction, QuantoSpec, ReducedCoordinates, SimilarityPoint, VanillaOptionSpec,
};

pub type VanillaOption = VanillaOptionSpec<f64>;
pub type BasketOption = BasketSpec<f64>;
pub type QuantoOption = QuantoSpec<f64>;
pub type ReducedParams = GeneralizedReducedParams<f64>;
pub type Price = PutPrice<f64>;
