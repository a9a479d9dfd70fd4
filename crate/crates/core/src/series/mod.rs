//! Homotopy-perturbation approximations of the put value.
//!
//! Two families live here. The naive expansion in `(x, tau)` inherits the kink
//! of the pay-off at the strike and sums to the discontinuous
//! `v = e^{-k tau} - e^x` for `x < 0`, `0` otherwise. The smoothed expansion
//! first maps to `(z, w) = (y/sqrt(tau), sqrt(tau))`, where the kink sits at
//! `z = ±inf`; each correction is then a smooth `f_n(z) w^n` and the value is
//! `v = w * sum_n f_n(y/w) w^n`.

mod terms;

pub use terms::{
    basket_term_literal, phi_term, single_asset_term, BasketLiteralTerms, GeneralizedTerms,
    SeriesTerms, SingleAssetTerms, TERM_COUNT,
};

use crate::error::{Error, Result};
use crate::exact::PutPrice;
use crate::real::Real;
use crate::transforms::{
    reduce_basket, reduce_quanto, similarity, to_dimensionless, BasketSpec,
    GeneralizedReducedParams, QuantoSpec, VanillaOptionSpec,
};

/// Default number of retained terms (all of them).
pub const DEFAULT_ORDER: usize = TERM_COUNT;

/// Clamped naive solution `max(e^{-k tau} - e^x, 0)`.
pub fn hpm1_reduced<T: Real>(x: T, tau: T, k: T) -> T {
    ((-k * tau).exp() - x.exp()).max(T::zero())
}

/// `sum_{n=1}^{terms} (-k tau)^n / n!`, the naive corrections below the strike.
pub fn naive_correction_sum<T: Real>(k_tau: T, terms: usize) -> T {
    let mut term = T::one();
    let mut sum = T::zero();
    for n in 1..=terms {
        term = term * (-k_tau) / T::count(n);
        sum = sum + term;
    }
    sum
}

/// One evaluated series term `u_n = f_n(z) w^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTermValue<T> {
    pub n: usize,
    pub value: T,
}

/// Truncated smoothed expansion with `order` retained terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpmExpansion<T> {
    pub order: usize,
    pub params: GeneralizedReducedParams<T>,
}

impl<T: Real> HpmExpansion<T> {
    pub fn new(order: usize, params: GeneralizedReducedParams<T>) -> Result<Self> {
        check_order(order)?;
        params.validate()?;
        Ok(Self { order, params })
    }

    /// The retained terms `u_0 .. u_{order-1}` at `(z, w)`.
    pub fn terms(&self, z: T, w: T) -> Result<Vec<SeriesTermValue<T>>> {
        let mut wn = T::one();
        let mut out = Vec::with_capacity(self.order);
        for n in 0..self.order {
            out.push(SeriesTermValue { n, value: phi_term(n, z, &self.params)? * wn });
            wn = wn * w;
        }
        Ok(out)
    }

    pub fn reduced_value(&self, y: T, tau: T) -> Result<T> {
        hpm_reduced_sum(y, tau, &self.params, self.order)
    }
}

fn check_order(order: usize) -> Result<()> {
    if (1..=TERM_COUNT).contains(&order) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder { order })
    }
}

/// `v(y, tau) = sqrt(tau) * sum_{n < order} f_n(y / sqrt(tau)) tau^{n/2}` for
/// any term family; the pay-off `max(1 - e^y, 0)` at `tau = 0`. Unclamped.
pub fn reduced_sum_with<T: Real, S: SeriesTerms<T> + ?Sized>(
    terms: &S,
    y: T,
    tau: T,
    order: usize,
) -> Result<T> {
    check_order(order)?;
    if y.is_nan() || tau.is_nan() {
        return Err(Error::Domain("NaN reduced coordinate"));
    }
    if tau < T::zero() {
        return Err(Error::DegenerateTime("negative reduced time"));
    }
    if tau == T::zero() {
        return Ok((T::one() - y.exp()).max(T::zero()));
    }
    if y == T::neg_infinity() {
        return Err(Error::Domain("the truncated series diverges as y -> -inf"));
    }
    let p = similarity(y, tau)?;
    // Horner in w
    let mut acc = T::zero();
    for n in (0..order).rev() {
        acc = acc * p.w + terms.term(n, p.z)?;
    }
    Ok(acc * p.w)
}

/// Smoothed reduced sum with the generalized `(k1, k2)` terms.
pub fn hpm_reduced_sum<T: Real>(
    y: T,
    tau: T,
    params: &GeneralizedReducedParams<T>,
    order: usize,
) -> Result<T> {
    params.validate()?;
    reduced_sum_with(&GeneralizedTerms(*params), y, tau, order)
}

fn clamp_price<T: Real>(v: T) -> PutPrice<T> {
    PutPrice(v.max(T::zero()))
}

/// Smoothed series price of a vanilla put ("HPM2").
pub fn price_single_hpm2<T: Real>(spec: &VanillaOptionSpec<T>, order: usize) -> Result<PutPrice<T>> {
    check_order(order)?;
    let rc = to_dimensionless(spec)?;
    let v = hpm_reduced_sum(rc.x, rc.tau, &GeneralizedReducedParams::single(rc.k), order)?;
    Ok(clamp_price(spec.strike * v))
}

/// Naive series price `K max(e^{-k tau} - S/K, 0)` ("HPM1").
pub fn price_single_hpm1<T: Real>(spec: &VanillaOptionSpec<T>) -> Result<PutPrice<T>> {
    let rc = to_dimensionless(spec)?;
    Ok(clamp_price(spec.strike * hpm1_reduced(rc.x, rc.tau, rc.k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasketVariant {
    /// Generalized terms with `(k1, k2) = (2(r - q_hat), 2r) / sigma_hat^2`.
    #[default]
    Generalized,
    /// The uncorrected basket terms, for comparison only.
    Literal,
}

pub fn price_basket_hpm<T: Real>(
    spec: &BasketSpec<T>,
    order: usize,
    variant: BasketVariant,
) -> Result<PutPrice<T>> {
    check_order(order)?;
    let red = reduce_basket(spec)?;
    let remaining = spec.remaining();
    if remaining <= T::zero() {
        return Ok(PutPrice((spec.strike - spec.geometric_spot()).max(T::zero())));
    }
    let tau = T::lit(0.5) * red.sigma_hat * red.sigma_hat * remaining;
    let v = match variant {
        BasketVariant::Generalized => hpm_reduced_sum(red.xi, tau, &red.params(spec.rate)?, order)?,
        BasketVariant::Literal => {
            let terms = BasketLiteralTerms { reduction: red, rate: spec.rate };
            reduced_sum_with(&terms, red.xi, tau, order)?
        }
    };
    Ok(clamp_price(spec.strike * v))
}

/// Quanto series price `P = S2^2 K u` with `K = E/S2` at valuation time and
/// `y = ln(S1 / E)`.
pub fn price_quanto_hpm<T: Real>(spec: &QuantoSpec<T>, order: usize) -> Result<PutPrice<T>> {
    check_order(order)?;
    let red = reduce_quanto(spec)?;
    let remaining = spec.remaining();
    if remaining <= T::zero() {
        return Ok(PutPrice(spec.s2 * (spec.strike - spec.s1).max(T::zero())));
    }
    let tau = T::lit(0.5) * red.sigma_hat_sq * remaining;
    let k = spec.strike / spec.s2;
    let y = (spec.s1 / spec.strike).ln();
    let u = hpm_reduced_sum(y, tau, &red.params(), order)?;
    Ok(clamp_price(spec.s2 * spec.s2 * k * u))
}
