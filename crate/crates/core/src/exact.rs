//! Closed-form European put prices.
//!
//! Every formula here is a special case of the reduced solution
//!
//! ```text
//! u(y, tau) = e^{-k2 tau} N(-d1) - e^{y + (k1 - k2) tau} N(-d2),
//! d1 = y / sqrt(2 tau) + sqrt(tau / 2) (k1 - 1),   d2 = d1 + sqrt(2 tau),
//! ```
//!
//! of `u_tau = u_yy + (k1 - 1) u_y - k2 u` with `u(y, 0) = max(1 - e^y, 0)`,
//! obtained from the heat kernel after removing drift and discounting with
//! `u = e^{alpha tau + beta y} w`. [`reduced_exact_u`] evaluates it through
//! that route literally (the two Gaussian integrals `I1`, `I2`); the market
//! formulas are written directly in market variables.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::normal_cdf_raw;
use crate::transforms::{
    reduce_basket, reduce_quanto, BasketSpec, GeneralizedReducedParams, QuantoSpec,
    VanillaOptionSpec,
};

/// A put value in currency units; never negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct PutPrice<T>(pub T);

impl<T: Real> PutPrice<T> {
    pub fn value(self) -> T {
        self.0
    }
}

/// Clamps rounding-level negatives of a two-term difference to zero.
fn settle<T: Real>(raw: T, scale: T) -> T {
    if raw < T::zero() {
        debug_assert!(
            -raw <= T::lit(1e-16) * scale.abs() + T::epsilon() * scale.abs() * T::lit(64.0),
            "put difference went negative beyond rounding: {raw}"
        );
        T::zero()
    } else {
        raw
    }
}

#[inline]
fn ncdf<T: Real>(x: T) -> T {
    normal_cdf_raw(x)
}

pub fn bs_put<T: Real>(spec: &VanillaOptionSpec<T>) -> Result<PutPrice<T>> {
    spec.validate()?;
    let tau = spec.remaining();
    if tau <= T::zero() {
        return Ok(PutPrice((spec.strike - spec.spot).max(T::zero())));
    }
    let half = T::lit(0.5);
    let sd = spec.vol * tau.sqrt();
    let d1 = ((spec.spot / spec.strike).ln() + (spec.rate + half * spec.vol * spec.vol) * tau) / sd;
    let d2 = d1 - sd;
    let df = (-spec.rate * tau).exp();
    let raw = spec.strike * df * ncdf(-d2) - spec.spot * ncdf(-d1);
    Ok(PutPrice(settle(raw, spec.strike)))
}

/// Call value from put-call parity `C = P + S - E e^{-r(T-t)}`.
pub fn bs_call_from_parity<T: Real>(spec: &VanillaOptionSpec<T>) -> Result<T> {
    let put = bs_put(spec)?.value();
    let df = (-spec.rate * spec.remaining()).exp();
    let call = put + spec.spot - spec.strike * df;
    Ok(settle(call, spec.strike))
}

/// Two-asset (or degenerate one-asset) geometric basket put.
pub fn basket_put_exact<T: Real>(spec: &BasketSpec<T>) -> Result<PutPrice<T>> {
    let n = spec.n();
    if n > 2 {
        return Err(Error::UnsupportedAssetCount { n });
    }
    let red = reduce_basket(spec)?;
    let g = spec.geometric_spot();
    let tau = spec.remaining();
    if tau <= T::zero() {
        return Ok(PutPrice((spec.strike - g).max(T::zero())));
    }
    if !(red.sigma_hat > T::zero()) {
        return Err(Error::DegenerateVolatility { sigma_hat_sq: 0.0 });
    }
    let half = T::lit(0.5);
    let sd = red.sigma_hat * tau.sqrt();
    let d1 = ((g / spec.strike).ln() + (spec.rate - red.q_hat + half * red.sigma_hat * red.sigma_hat) * tau) / sd;
    let d2 = d1 - sd;
    let raw = spec.strike * (-spec.rate * tau).exp() * ncdf(-d2)
        - (-red.q_hat * tau).exp() * g * ncdf(-d1);
    Ok(PutPrice(settle(raw, spec.strike)))
}

/// Geometric basket put on any number of assets through the reduced solution.
pub fn basket_put_reduced<T: Real>(spec: &BasketSpec<T>) -> Result<PutPrice<T>> {
    let red = reduce_basket(spec)?;
    let tau_mkt = spec.remaining();
    if tau_mkt <= T::zero() {
        return Ok(PutPrice((spec.strike - spec.geometric_spot()).max(T::zero())));
    }
    let params = red.params(spec.rate)?;
    let tau = T::lit(0.5) * red.sigma_hat * red.sigma_hat * tau_mkt;
    let u = reduced_exact_u(red.xi, tau, &params)?;
    Ok(PutPrice(settle(spec.strike * u, spec.strike)))
}

/// Quanto put in market variables:
/// `P = E S2 e^{-r_hat tau} N(-d1) - S1 S2 e^{(q_hat - r_hat) tau} N(-d2)` with
/// `d1 = [ln(S1/E) + (q_hat - sigma_hat^2/2) tau] / (sigma_hat sqrt(tau))` and
/// `d2` using `+ sigma_hat^2/2`. Note `d1 < d2` here, the reverse of the
/// vanilla naming.
pub fn quanto_put_exact<T: Real>(spec: &QuantoSpec<T>) -> Result<PutPrice<T>> {
    let red = reduce_quanto(spec)?;
    let tau = spec.remaining();
    if tau <= T::zero() {
        return Ok(PutPrice(spec.s2 * (spec.strike - spec.s1).max(T::zero())));
    }
    let half = T::lit(0.5);
    let sigma_hat = red.sigma_hat_sq.sqrt();
    let sd = sigma_hat * tau.sqrt();
    let m = (spec.s1 / spec.strike).ln();
    let d1 = (m + (red.q_hat - half * red.sigma_hat_sq) * tau) / sd;
    let d2 = (m + (red.q_hat + half * red.sigma_hat_sq) * tau) / sd;
    let raw = spec.strike * spec.s2 * (-red.r_hat * tau).exp() * ncdf(-d1)
        - spec.s1 * spec.s2 * ((red.q_hat - red.r_hat) * tau).exp() * ncdf(-d2);
    Ok(PutPrice(settle(raw, spec.strike * spec.s2)))
}

/// Reduced exact solution `u(y, tau)` via the heat-kernel route:
/// `u = e^{alpha tau + beta y} (I1 + I2)` with `beta = -(k1 - 1)/2`,
/// `alpha = -(k1 - 1)^2/4 - k2`,
/// `I1 = e^{(k1-1) y/2 + (k1-1)^2 tau/4} N(-d1)` and
/// `I2 = -e^{(k1+1) y/2 + (k1+1)^2 tau/4} N(-d2)`.
///
/// The exponents are combined before exponentiating so that large `|k1|` does
/// not overflow the individual factors.
pub fn reduced_exact_u<T: Real>(y: T, tau: T, params: &GeneralizedReducedParams<T>) -> Result<T> {
    params.validate()?;
    if y.is_nan() || tau.is_nan() {
        return Err(Error::Domain("NaN reduced coordinate"));
    }
    if !(tau > T::zero()) {
        return Err(Error::DegenerateTime("reduced exact solution needs tau > 0"));
    }
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    let one = T::one();
    let (k1, k2) = (params.k1, params.k2);
    if y == T::infinity() {
        return Ok(T::zero());
    }
    let alpha = -quarter * (k1 - one) * (k1 - one) - k2;
    let beta = -half * (k1 - one);
    let root = (T::lit(2.0) * tau).sqrt();
    let d1 = y / root + (half * tau).sqrt() * (k1 - one);
    let d2 = y / root + (half * tau).sqrt() * (k1 + one);
    let e1 = half * (k1 - one) * y + quarter * (k1 - one) * (k1 - one) * tau;
    let e2 = half * (k1 + one) * y + quarter * (k1 + one) * (k1 + one) * tau;
    let scale = alpha * tau + beta * y;
    let i1 = (scale + e1).exp() * ncdf(-d1);
    let i2 = if y == T::neg_infinity() { T::zero() } else { -(scale + e2).exp() * ncdf(-d2) };
    Ok(i1 + i2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::to_dimensionless;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig1(spot: f64) -> VanillaOptionSpec<f64> {
        VanillaOptionSpec { spot, strike: 40.0, rate: 0.05, vol: 0.324336, maturity: 0.5, valuation_time: 0.0 }
    }

    fn fig3(s1: f64, s2: f64) -> BasketSpec<f64> {
        BasketSpec {
            spots: vec![s1, s2],
            weights: vec![0.5, 0.5],
            dividends: vec![0.0, 0.0],
            covariance: vec![vec![0.01, 0.0], vec![0.0, 0.09]],
            rate: 0.05,
            strike: 40.0,
            maturity: 0.5,
            valuation_time: 0.0,
        }
    }

    fn fig5(s1: f64, s2: f64) -> QuantoSpec<f64> {
        QuantoSpec {
            s1,
            s2,
            sigma1: 0.1,
            sigma2: 0.3,
            rho: 1.0,
            r1: 0.03,
            r2: 0.05,
            q: 0.0,
            strike: 40.0,
            maturity: 0.5,
            valuation_time: 0.0,
        }
    }

    fn random_vanilla(rng: &mut ChaCha8Rng) -> VanillaOptionSpec<f64> {
        let maturity = rng.gen_range(0.05..3.0);
        VanillaOptionSpec {
            spot: rng.gen_range(5.0..150.0),
            strike: rng.gen_range(10.0..100.0),
            rate: rng.gen_range(0.0..0.15),
            vol: rng.gen_range(0.05..0.8),
            maturity,
            valuation_time: rng.gen_range(0.0..0.9) * maturity,
        }
    }

    // Regression values; the Crank-Nicolson cross-check lives in the
    // acceptance suite (criterion 3) and in pde::tests.
    const BS_PUT_FIG1_ATM: f64 = 3.134_164_972_563_290_5;
    const BASKET_FIG3_ATM: f64 = 1.411_039_266_494_942_3;
    const QUANTO_FIG5_ATM: f64 = 96.956_041_399_409_98;

    #[test]
    fn bs_put_regression() {
        let p = bs_put(&fig1(40.0)).unwrap().value();
        assert!((p - BS_PUT_FIG1_ATM).abs() <= 1e-13, "{p}");
    }

    #[test]
    fn bs_put_limits() {
        let df = 40.0 * (-0.05f64 * 0.5).exp();
        assert!((bs_put(&fig1(1e-8)).unwrap().value() - df).abs() <= 1e-7);
        let expiry = |s| VanillaOptionSpec { valuation_time: 0.5, ..fig1(s) };
        assert_eq!(bs_put(&expiry(30.0)).unwrap().value(), 10.0);
        assert_eq!(bs_put(&expiry(50.0)).unwrap().value(), 0.0);
        assert!(bs_put(&fig1(1e4)).unwrap().value() < 1e-100);
        let p = bs_put(&fig1(400.0)).unwrap().value();
        assert!((0.0..1e-12).contains(&p));
    }

    #[test]
    fn bs_put_monotone_in_spot_and_strike() {
        let spots: Vec<f64> = (0..200).map(|i| 1.0 + i as f64 * 0.75).collect();
        let prices: Vec<f64> = spots.iter().map(|&s| bs_put(&fig1(s)).unwrap().value()).collect();
        assert!(prices.windows(2).all(|w| w[1] <= w[0]));
        let prices: Vec<f64> = spots
            .iter()
            .map(|&k| bs_put(&VanillaOptionSpec { strike: k, ..fig1(40.0) }).unwrap().value())
            .collect();
        assert!(prices.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn parity() {
        assert!(bs_call_from_parity(&fig1(1e-8)).unwrap() <= 1e-12);
        let expiry = VanillaOptionSpec { valuation_time: 0.5, ..fig1(47.0) };
        assert!((bs_call_from_parity(&expiry).unwrap() - 7.0).abs() <= 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let spec = random_vanilla(&mut rng);
            let c = bs_call_from_parity(&spec).unwrap();
            let p = bs_put(&spec).unwrap().value();
            let residual = c - p - spec.spot + spec.strike * (-spec.rate * spec.remaining()).exp();
            assert!(residual.abs() <= 1e-12, "{residual}");
        }
    }

    #[test]
    fn reduced_route_reproduces_black_scholes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let spec = random_vanilla(&mut rng);
            let rc = to_dimensionless(&spec).unwrap();
            let u = reduced_exact_u(rc.x, rc.tau, &GeneralizedReducedParams::single(rc.k)).unwrap();
            let p = bs_put(&spec).unwrap().value();
            assert!((spec.strike * u - p).abs() <= 1e-12, "{} vs {p}", spec.strike * u);
        }
    }

    #[test]
    fn reduced_exact_limits() {
        let params = GeneralizedReducedParams::new(0.95, 0.95);
        assert_eq!(reduced_exact_u(f64::INFINITY, 0.3, &params).unwrap(), 0.0);
        assert!(reduced_exact_u(40.0, 0.3, &params).unwrap() < 1e-100);
        let u = reduced_exact_u(-1.0, 1e-8, &params).unwrap();
        assert!((u - (1.0 - (-1f64).exp())).abs() <= 1e-6);
        assert!(matches!(reduced_exact_u(0.0, 0.0, &params), Err(Error::DegenerateTime(_))));
    }

    #[test]
    fn basket_regression_and_degenerations() {
        let p = basket_put_exact(&fig3(40.0, 40.0)).unwrap().value();
        assert!((p - BASKET_FIG3_ATM).abs() <= 1e-13, "{p}");
        let r = basket_put_reduced(&fig3(40.0, 40.0)).unwrap().value();
        assert!((p - r).abs() <= 1e-12);

        let mut expiry = fig3(30.0, 40.0);
        expiry.valuation_time = 0.5;
        let g = (30.0f64 * 40.0).sqrt();
        assert!((basket_put_exact(&expiry).unwrap().value() - (40.0 - g)).abs() <= 1e-13);

        let single = BasketSpec {
            spots: vec![37.0],
            weights: vec![1.0],
            dividends: vec![0.0],
            covariance: vec![vec![0.324336 * 0.324336]],
            ..fig3(0.0, 0.0)
        };
        let a = basket_put_exact(&single).unwrap().value();
        let b = bs_put(&fig1(37.0)).unwrap().value();
        assert!((a - b).abs() <= 1e-12);

        let three = BasketSpec {
            spots: vec![40.0; 3],
            weights: vec![0.2, 0.3, 0.5],
            dividends: vec![0.0; 3],
            covariance: vec![vec![0.04, 0.0, 0.0], vec![0.0, 0.04, 0.0], vec![0.0, 0.0, 0.04]],
            ..fig3(0.0, 0.0)
        };
        assert!(matches!(basket_put_exact(&three), Err(Error::UnsupportedAssetCount { n: 3 })));
        assert!(basket_put_reduced(&three).unwrap().value() > 0.0);
    }

    #[test]
    fn identical_correlated_assets_collapse_to_vanilla() {
        let v = 0.3f64 * 0.3;
        let spec = BasketSpec {
            spots: vec![36.0, 36.0],
            weights: vec![0.3, 0.7],
            dividends: vec![0.0, 0.0],
            covariance: vec![vec![v, v], vec![v, v]],
            ..fig3(0.0, 0.0)
        };
        let vanilla = VanillaOptionSpec { vol: 0.3, ..fig1(36.0) };
        let red = reduce_basket(&spec).unwrap();
        assert!(red.q_hat.abs() <= 1e-17);
        let via_reduced = basket_put_reduced(&spec).unwrap().value();
        assert!((via_reduced - bs_put(&vanilla).unwrap().value()).abs() <= 1e-12);
        assert!((basket_put_exact(&spec).unwrap().value() - via_reduced).abs() <= 1e-12);
    }

    #[test]
    fn quanto_regression_and_limits() {
        let p = quanto_put_exact(&fig5(40.0, 40.0)).unwrap().value();
        assert!((p - QUANTO_FIG5_ATM).abs() <= 1e-11, "{p}");
        let p2 = quanto_put_exact(&fig5(40.0, 80.0)).unwrap().value();
        assert_eq!(p2, 2.0 * p);
        assert!(quanto_put_exact(&fig5(1e4, 40.0)).unwrap().value() < 1e-100);
        let expiry = QuantoSpec { valuation_time: 0.5, ..fig5(30.0, 2.0) };
        assert_eq!(quanto_put_exact(&expiry).unwrap().value(), 20.0);
    }

    #[test]
    fn quanto_homogeneous_in_exchange_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let s1 = rng.gen_range(10.0..80.0);
            let s2 = rng.gen_range(0.5..60.0);
            let a = quanto_put_exact(&fig5(s1, s2)).unwrap().value();
            let b = quanto_put_exact(&fig5(s1, 2.0 * s2)).unwrap().value();
            assert_eq!(b, 2.0 * a);
        }
    }

    #[test]
    fn quanto_matches_reduced_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let spec = QuantoSpec {
                sigma1: rng.gen_range(0.05..0.6),
                sigma2: rng.gen_range(0.0..0.5),
                rho: rng.gen_range(-0.9..0.9),
                r1: rng.gen_range(0.0..0.1),
                r2: rng.gen_range(0.0..0.1),
                q: rng.gen_range(0.0..0.05),
                ..fig5(rng.gen_range(20.0..60.0), rng.gen_range(0.5..50.0))
            };
            let red = reduce_quanto(&spec).unwrap();
            let tau = 0.5 * red.sigma_hat_sq * spec.remaining();
            let y = (spec.s1 / spec.strike).ln();
            let u = reduced_exact_u(y, tau, &red.params()).unwrap();
            // v = K u with K = E/S2, P = S2^2 v
            let chain = spec.s2 * spec.s2 * (spec.strike / spec.s2) * u;
            let direct = quanto_put_exact(&spec).unwrap().value();
            assert!((chain - direct).abs() <= 1e-10 * direct, "{chain} vs {direct}");
        }
    }

    #[test]
    fn single_precision_pricing() {
        let spec = VanillaOptionSpec { spot: 40.0f32, strike: 40.0, rate: 0.05, vol: 0.324336, maturity: 0.5, valuation_time: 0.0 };
        let p = bs_put(&spec).unwrap().value() as f64;
        assert!((p - BS_PUT_FIG1_ATM).abs() <= 1e-4);
    }
}
