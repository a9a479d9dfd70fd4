//! Method dispatch over the three contract types.

use anyhow::bail;

use hpm_core::{
    basket_put_exact, bs_put, price_basket_hpm, price_quanto_hpm, price_single_hpm1,
    price_single_hpm2, quanto_put_exact, BasketOption, BasketVariant, QuantoOption, VanillaOption,
};

use crate::config::{ExperimentConfig, Method};

/// Single-asset price, with the `S -> 0+` limits at `S = 0`.
pub fn single(spec: &VanillaOption, method: Method, order: usize) -> anyhow::Result<f64> {
    if spec.spot == 0.0 {
        return single_at_zero(spec, method, order);
    }
    Ok(match method {
        Method::Exact => bs_put(spec)?.value(),
        Method::Hpm1 => price_single_hpm1(spec)?.value(),
        Method::Hpm2 => price_single_hpm2(spec, order)?.value(),
        Method::BasketLiteral => bail!("method basket-literal applies to basket contracts only"),
    })
}

fn single_at_zero(spec: &VanillaOption, method: Method, order: usize) -> anyhow::Result<f64> {
    let discounted = spec.strike * (-spec.rate * (spec.maturity - spec.valuation_time)).exp();
    Ok(match method {
        // K e^{-k tau} = E e^{-r (T - t)}
        Method::Exact | Method::Hpm1 => discounted,
        Method::Hpm2 => {
            if spec.valuation_time >= spec.maturity {
                spec.strike
            } else if order % 2 == 0 {
                // the highest term -(z w)^N / N! drives the clamped sum to zero
                0.0
            } else {
                bail!("the order-{order} series diverges to +inf as S -> 0; use an even order or S > 0")
            }
        }
        Method::BasketLiteral => bail!("method basket-literal applies to basket contracts only"),
    })
}

pub fn basket(spec: &BasketOption, method: Method, order: usize) -> anyhow::Result<f64> {
    Ok(match method {
        Method::Exact => basket_put_exact(spec)?.value(),
        Method::Hpm2 => price_basket_hpm(spec, order, BasketVariant::Generalized)?.value(),
        Method::BasketLiteral => price_basket_hpm(spec, order, BasketVariant::Literal)?.value(),
        Method::Hpm1 => bail!("method hpm1 applies to single-asset contracts only"),
    })
}

pub fn quanto(spec: &QuantoOption, method: Method, order: usize) -> anyhow::Result<f64> {
    Ok(match method {
        Method::Exact => quanto_put_exact(spec)?.value(),
        Method::Hpm2 => price_quanto_hpm(spec, order)?.value(),
        Method::Hpm1 | Method::BasketLiteral => bail!("method {} does not apply to quanto contracts", method.name()),
    })
}

/// Price of the configured contract with `method`.
pub fn configured(cfg: &ExperimentConfig, method: Method) -> anyhow::Result<f64> {
    use crate::config::ContractKind::*;
    match cfg.contract {
        Single => single(&cfg.single, method, cfg.order),
        Basket => basket(&cfg.basket, method, cfg.order),
        Quanto => quanto(&cfg.quanto, method, cfg.order),
    }
}

pub fn basket_at(cfg: &ExperimentConfig, s1: f64, s2: f64) -> BasketOption {
    BasketOption { spots: vec![s1, s2], ..cfg.basket.clone() }
}

pub fn quanto_at(cfg: &ExperimentConfig, s1: f64, s2: f64) -> QuantoOption {
    QuantoOption { s1, s2, ..cfg.quanto }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Settings;

    #[test]
    fn zero_spot_limits() {
        let cfg = ExperimentConfig::resolve(Settings::default()).unwrap();
        let spec = VanillaOption { spot: 0.0, ..cfg.single };
        let df = 40.0 * (-0.025f64).exp();
        assert_eq!(single(&spec, Method::Exact, 6).unwrap(), df);
        assert_eq!(single(&spec, Method::Hpm1, 6).unwrap(), df);
        assert_eq!(single(&spec, Method::Hpm2, 6).unwrap(), 0.0);
        assert!(single(&spec, Method::Hpm2, 5).is_err());
        // the limit is approached from small positive spots
        let tiny = VanillaOption { spot: 1e-9, ..cfg.single };
        assert!((single(&tiny, Method::Exact, 6).unwrap() - df).abs() < 2e-9);
        assert!((single(&tiny, Method::Hpm1, 6).unwrap() - df).abs() < 2e-9);
        assert_eq!(single(&tiny, Method::Hpm2, 6).unwrap(), 0.0);
    }
}
