//! Coordinate changes: log-moneyness/time reduction, the similarity map
//! `(z, w) = (x/sqrt(tau), sqrt(tau))`, and the basket and quanto reductions
//! that bring multi-asset contracts to a single convection-diffusion-reaction
//! equation `u_tau = u_yy + (k1 - 1) u_y - k2 u`.

use crate::error::{Error, Result};
use crate::real::Real;

fn finite<T: Real>(x: T, what: &'static str) -> Result<T> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain(what))
    }
}

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_time<T: Real>(maturity: T, valuation_time: T) -> Result<()> {
    finite(maturity, "maturity must be finite")?;
    finite(valuation_time, "valuation time must be finite")?;
    if valuation_time > maturity {
        return Err(Error::InvalidTime { t: to_f64(valuation_time), maturity: to_f64(maturity) });
    }
    Ok(())
}

fn positive<T: Real>(x: T, name: &str) -> Result<()> {
    if x.is_finite() && x > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be positive and finite, got {x}")))
    }
}

/// Single-asset European put.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanillaOptionSpec<T> {
    pub spot: T,
    pub strike: T,
    pub rate: T,
    pub vol: T,
    pub maturity: T,
    pub valuation_time: T,
}

impl<T: Real> VanillaOptionSpec<T> {
    pub fn validate(&self) -> Result<()> {
        positive(self.spot, "spot")?;
        positive(self.strike, "strike")?;
        positive(self.vol, "vol")?;
        finite(self.rate, "rate must be finite")?;
        check_time(self.maturity, self.valuation_time)
    }

    /// Time to expiry `T - t`.
    pub fn remaining(&self) -> T {
        self.maturity - self.valuation_time
    }

    pub fn with_spot(self, spot: T) -> Self {
        Self { spot, ..self }
    }
}

/// Log-moneyness `x = ln(S/K)`, reduced time `tau = sigma^2 (T - t) / 2`,
/// and `k = 2r/sigma^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoordinates<T> {
    pub x: T,
    pub tau: T,
    pub k: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityPoint<T> {
    pub z: T,
    pub w: T,
}

/// Drift and discount parameters of the reduced equation. The single-asset
/// case has `k1 = k2 = 2r/sigma^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedReducedParams<T> {
    pub k1: T,
    pub k2: T,
}

impl<T: Real> GeneralizedReducedParams<T> {
    pub fn new(k1: T, k2: T) -> Self {
        Self { k1, k2 }
    }

    pub fn single(k: T) -> Self {
        Self { k1: k, k2: k }
    }

    pub fn validate(&self) -> Result<()> {
        finite(self.k1, "k1 must be finite")?;
        finite(self.k2, "k2 must be finite")?;
        Ok(())
    }
}

/// Geometric basket put on `n` assets with pay-off `max(K - prod S_i^alpha_i, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasketSpec<T> {
    pub spots: Vec<T>,
    pub weights: Vec<T>,
    pub dividends: Vec<T>,
    /// Row-major `n x n` covariance `a_ij`.
    pub covariance: Vec<Vec<T>>,
    pub rate: T,
    pub strike: T,
    pub maturity: T,
    pub valuation_time: T,
}

impl<T: Real> BasketSpec<T> {
    pub fn n(&self) -> usize {
        self.spots.len()
    }

    /// Covariance from per-asset volatilities and a correlation matrix.
    pub fn covariance_from_vols(vols: &[T], corr: &[Vec<T>]) -> Vec<Vec<T>> {
        (0..vols.len())
            .map(|i| (0..vols.len()).map(|j| corr[i][j] * vols[i] * vols[j]).collect())
            .collect()
    }

    /// Geometric average `prod S_i^alpha_i`.
    pub fn geometric_spot(&self) -> T {
        self.spots
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&s, &a)| acc + a * s.ln())
            .exp()
    }

    pub fn remaining(&self) -> T {
        self.maturity - self.valuation_time
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidSpec("basket has no assets".into()));
        }
        if self.weights.len() != n || self.dividends.len() != n || self.covariance.len() != n {
            return Err(Error::InvalidSpec(format!(
                "basket dimension mismatch: {n} spots, {} weights, {} dividends, {} covariance rows",
                self.weights.len(),
                self.dividends.len(),
                self.covariance.len()
            )));
        }
        for &s in &self.spots {
            positive(s, "basket spot")?;
        }
        positive(self.strike, "strike")?;
        finite(self.rate, "rate must be finite")?;
        for (&a, &q) in self.weights.iter().zip(&self.dividends) {
            finite(a, "weights must be finite")?;
            finite(q, "dividends must be finite")?;
        }
        check_time(self.maturity, self.valuation_time)?;
        let sum = self.weights.iter().fold(T::zero(), |a, &b| a + b);
        if (sum - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
            return Err(Error::WeightSum { sum: to_f64(sum) });
        }
        check_covariance(&self.covariance)
    }
}

/// Symmetric positive semidefinite check by Cholesky with a relative pivot
/// tolerance; rank-deficient columns must have (numerically) zero entries.
fn check_covariance<T: Real>(a: &[Vec<T>]) -> Result<()> {
    let n = a.len();
    let mut scale = T::zero();
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Covariance(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for &v in row {
            if !v.is_finite() {
                return Err(Error::Covariance("non-finite entry".into()));
            }
            scale = scale.max(v.abs());
        }
    }
    let tol = T::lit(1e-12) * scale.max(T::min_positive_value());
    for i in 0..n {
        for j in 0..i {
            if (a[i][j] - a[j][i]).abs() > tol {
                return Err(Error::Covariance(format!("not symmetric at ({i}, {j})")));
            }
        }
    }
    let mut l = vec![vec![T::zero(); n]; n];
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d = d - l[j][k] * l[j][k];
        }
        if d < -tol {
            return Err(Error::Covariance("not positive semidefinite".into()));
        }
        let zero_pivot = d <= tol;
        let root = if zero_pivot { T::zero() } else { d.sqrt() };
        l[j][j] = root;
        for i in (j + 1)..n {
            let mut s = a[i][j];
            for k in 0..j {
                s = s - l[i][k] * l[j][k];
            }
            if zero_pivot {
                if s.abs() > tol.sqrt() * scale.sqrt().max(T::one()) {
                    return Err(Error::Covariance("not positive semidefinite".into()));
                }
                l[i][j] = T::zero();
            } else {
                l[i][j] = s / root;
            }
        }
    }
    Ok(())
}

/// Quanto put paying `S2(T) max(E - S1(T), 0)`. Rates are named as in the
/// governing equation; no currency interpretation is attached to them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantoSpec<T> {
    pub s1: T,
    pub s2: T,
    pub sigma1: T,
    pub sigma2: T,
    pub rho: T,
    pub r1: T,
    pub r2: T,
    pub q: T,
    pub strike: T,
    pub maturity: T,
    pub valuation_time: T,
}

impl<T: Real> QuantoSpec<T> {
    pub fn remaining(&self) -> T {
        self.maturity - self.valuation_time
    }

    pub fn validate(&self) -> Result<()> {
        positive(self.s1, "s1")?;
        positive(self.s2, "s2")?;
        positive(self.sigma1, "sigma1")?;
        if !(self.sigma2.is_finite() && self.sigma2 >= T::zero()) {
            return Err(Error::InvalidSpec(format!("sigma2 must be non-negative, got {}", self.sigma2)));
        }
        if !(self.rho >= -T::one() && self.rho <= T::one()) {
            return Err(Error::InvalidSpec(format!("rho must lie in [-1, 1], got {}", self.rho)));
        }
        positive(self.strike, "strike")?;
        finite(self.r1, "r1 must be finite")?;
        finite(self.r2, "r2 must be finite")?;
        finite(self.q, "q must be finite")?;
        check_time(self.maturity, self.valuation_time)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasketReduction<T> {
    pub sigma_hat: T,
    pub q_hat: T,
    /// `sum alpha_i ln(S_i / K)`.
    pub xi: T,
}

impl<T: Real> BasketReduction<T> {
    /// `(k1, k2) = (2(r - q_hat)/sigma_hat^2, 2r/sigma_hat^2)`.
    pub fn params(&self, rate: T) -> Result<GeneralizedReducedParams<T>> {
        let s2 = self.sigma_hat * self.sigma_hat;
        if !(s2 > T::zero()) {
            return Err(Error::DegenerateVolatility { sigma_hat_sq: to_f64(s2) });
        }
        let two = T::lit(2.0);
        Ok(GeneralizedReducedParams::new(two * (rate - self.q_hat) / s2, two * rate / s2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantoReduction<T> {
    pub sigma_hat_sq: T,
    pub q_hat: T,
    pub r_hat: T,
    pub k1: T,
    pub k2: T,
}

impl<T: Real> QuantoReduction<T> {
    pub fn params(&self) -> GeneralizedReducedParams<T> {
        GeneralizedReducedParams::new(self.k1, self.k2)
    }
}

pub fn to_dimensionless<T: Real>(spec: &VanillaOptionSpec<T>) -> Result<ReducedCoordinates<T>> {
    spec.validate()?;
    let half = T::lit(0.5);
    let s2 = spec.vol * spec.vol;
    Ok(ReducedCoordinates {
        x: (spec.spot / spec.strike).ln(),
        tau: half * s2 * spec.remaining(),
        k: T::lit(2.0) * spec.rate / s2,
    })
}

/// Inverse of [`to_dimensionless`] for a given strike, volatility and maturity.
pub fn from_dimensionless<T: Real>(
    rc: &ReducedCoordinates<T>,
    strike: T,
    vol: T,
    maturity: T,
) -> VanillaOptionSpec<T> {
    let s2 = vol * vol;
    VanillaOptionSpec {
        spot: strike * rc.x.exp(),
        strike,
        rate: rc.k * s2 / T::lit(2.0),
        vol,
        maturity,
        valuation_time: maturity - T::lit(2.0) * rc.tau / s2,
    }
}

/// `P = K v`.
pub fn from_dimensionless_value<T: Real>(v: T, spec: &VanillaOptionSpec<T>) -> T {
    spec.strike * v
}

pub fn to_similarity<T: Real>(rc: &ReducedCoordinates<T>) -> Result<SimilarityPoint<T>> {
    similarity(rc.x, rc.tau)
}

/// `(z, w) = (y / sqrt(tau), sqrt(tau))` for any reduced pair `(y, tau)`.
pub fn similarity<T: Real>(y: T, tau: T) -> Result<SimilarityPoint<T>> {
    if tau.is_nan() || y.is_nan() {
        return Err(Error::Domain("NaN reduced coordinate"));
    }
    if !(tau > T::zero()) {
        return Err(Error::DegenerateTime("similarity map is singular at tau = 0"));
    }
    let w = tau.sqrt();
    Ok(SimilarityPoint { z: y / w, w })
}

/// Inverse similarity map; `k` is carried through unchanged.
pub fn from_similarity<T: Real>(p: &SimilarityPoint<T>, k: T) -> ReducedCoordinates<T> {
    ReducedCoordinates { x: p.z * p.w, tau: p.w * p.w, k }
}

pub fn reduce_basket<T: Real>(spec: &BasketSpec<T>) -> Result<BasketReduction<T>> {
    spec.validate()?;
    let n = spec.n();
    let half = T::lit(0.5);
    let mut s2 = T::zero();
    for i in 0..n {
        for j in 0..n {
            s2 = s2 + spec.covariance[i][j] * spec.weights[i] * spec.weights[j];
        }
    }
    // quadratic form of a PSD matrix; clip rounding noise
    let s2 = s2.max(T::zero());
    let mut q = T::zero();
    let mut xi = T::zero();
    for i in 0..n {
        q = q + spec.weights[i] * (spec.dividends[i] + half * spec.covariance[i][i]);
        xi = xi + spec.weights[i] * (spec.spots[i] / spec.strike).ln();
    }
    Ok(BasketReduction { sigma_hat: s2.sqrt(), q_hat: q - half * s2, xi })
}

pub fn reduce_quanto<T: Real>(spec: &QuantoSpec<T>) -> Result<QuantoReduction<T>> {
    spec.validate()?;
    let two = T::lit(2.0);
    let (s1, s2) = (spec.sigma1, spec.sigma2);
    let sigma_hat_sq = s1 * s1 - two * spec.rho * s1 * s2 + s2 * s2;
    if !(sigma_hat_sq > T::zero()) {
        return Err(Error::DegenerateVolatility { sigma_hat_sq: to_f64(sigma_hat_sq) });
    }
    let q_hat = two * spec.r2 - spec.r1 - spec.q - s2 * s2;
    let r_hat = spec.r1 - two * spec.r2 + s2 * s2;
    Ok(QuantoReduction {
        sigma_hat_sq,
        q_hat,
        r_hat,
        k1: two * q_hat / sigma_hat_sq,
        k2: two * r_hat / sigma_hat_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1(spot: f64) -> VanillaOptionSpec<f64> {
        VanillaOptionSpec {
            spot,
            strike: 40.0,
            rate: 0.05,
            vol: 0.324336,
            maturity: 0.5,
            valuation_time: 0.0,
        }
    }

    fn two_asset(s1: f64, s2: f64, a12: f64) -> BasketSpec<f64> {
        BasketSpec {
            spots: vec![s1, s2],
            weights: vec![0.5, 0.5],
            dividends: vec![0.0, 0.0],
            covariance: vec![vec![0.01, a12], vec![a12, 0.09]],
            rate: 0.05,
            strike: 40.0,
            maturity: 0.5,
            valuation_time: 0.0,
        }
    }

    fn fig5() -> QuantoSpec<f64> {
        QuantoSpec {
            s1: 40.0,
            s2: 40.0,
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

    #[test]
    fn dimensionless_examples() {
        let at_expiry = VanillaOptionSpec { valuation_time: 0.5, ..fig1(40.0) };
        let rc = to_dimensionless(&at_expiry).unwrap();
        assert_eq!(rc.x, 0.0);
        assert_eq!(rc.tau, 0.0);
        assert_eq!(rc.k, 0.1 / (0.324336 * 0.324336));

        let rc = to_dimensionless(&fig1(40.0)).unwrap();
        let s2 = 0.324336f64 * 0.324336;
        assert!((rc.k - 0.1 / s2).abs() <= 1e-15 * rc.k);
        assert!((rc.tau - 0.5 * s2 * 0.5).abs() <= 1e-17);

        let rc = to_dimensionless(&fig1(80.0)).unwrap();
        assert!((rc.x - 2f64.ln()).abs() <= 1e-16);
    }

    #[test]
    fn invalid_time_is_rejected() {
        let late = VanillaOptionSpec { valuation_time: 0.6, ..fig1(40.0) };
        assert!(matches!(to_dimensionless(&late), Err(Error::InvalidTime { .. })));
        assert!(to_dimensionless(&fig1(-1.0)).is_err());
        assert!(to_dimensionless(&VanillaOptionSpec { vol: 0.0, ..fig1(40.0) }).is_err());
    }

    #[test]
    fn dimensionless_value_examples() {
        let spec = fig1(40.0);
        assert_eq!(from_dimensionless_value(0.0, &spec), 0.0);
        assert_eq!(from_dimensionless_value(1.0, &spec), 40.0);
        // far-field reduced solution e^{-k tau} - e^x reverts to the S = 0 boundary
        let rc = to_dimensionless(&spec).unwrap();
        let far = (-rc.k * rc.tau).exp() - (-50f64).exp();
        let p = from_dimensionless_value(far, &spec);
        assert!((p - 40.0 * (-0.05f64 * 0.5).exp()).abs() <= 1e-12);
    }

    #[test]
    fn similarity_examples() {
        let p = similarity(0.0, 0.25).unwrap();
        assert_eq!((p.z, p.w), (0.0, 0.5));
        let p = similarity(-1.0, 1.0).unwrap();
        assert_eq!((p.z, p.w), (-1.0, 1.0));
        assert!(matches!(similarity(1.0, 0.0), Err(Error::DegenerateTime(_))));
    }

    proptest! {
        #[test]
        fn similarity_round_trip(x in -5.0f64..5.0, tau in 1e-6f64..4.0, k in -3.0f64..3.0) {
            let rc = ReducedCoordinates { x, tau, k };
            let back = from_similarity(&to_similarity(&rc).unwrap(), k);
            prop_assert!((back.x - x).abs() <= 1e-15 * x.abs().max(1e-300) * 4.0);
            prop_assert!((back.tau - tau).abs() <= 1e-15 * tau * 2.0);
        }

        #[test]
        fn dimensionless_round_trip(
            spot in 1.0f64..200.0, strike in 1.0f64..200.0, rate in -0.05f64..0.2,
            vol in 0.05f64..1.0, maturity in 0.01f64..5.0, frac in 0.0f64..1.0,
        ) {
            let spec = VanillaOptionSpec { spot, strike, rate, vol, maturity, valuation_time: frac * maturity };
            let rc = to_dimensionless(&spec).unwrap();
            let back = from_dimensionless(&rc, strike, vol, maturity);
            prop_assert!(((back.spot - spot) / spot).abs() <= 1e-15 * 4.0);
            prop_assert!((back.rate - rate).abs() <= 1e-15 * rate.abs().max(1e-3) * 4.0);
            prop_assert!((back.valuation_time - spec.valuation_time).abs() <= 1e-15 * maturity * 4.0);
        }

        #[test]
        fn single_asset_basket_has_zero_q_hat(vol in 0.01f64..1.5, s in 1.0f64..100.0) {
            let spec = BasketSpec {
                spots: vec![s], weights: vec![1.0], dividends: vec![0.0],
                covariance: vec![vec![vol * vol]], rate: 0.05, strike: 40.0,
                maturity: 1.0, valuation_time: 0.0,
            };
            let red = reduce_basket(&spec).unwrap();
            prop_assert_eq!(red.q_hat, 0.0);
            prop_assert!((red.sigma_hat - vol).abs() <= 1e-15 * vol * 2.0);
        }

        #[test]
        fn basket_variance_is_nonnegative(
            seed in proptest::collection::vec(-1.0f64..1.0, 9),
            w in proptest::collection::vec(0.01f64..1.0, 3),
        ) {
            // a = L L^T is PSD for any L
            let l: Vec<Vec<f64>> = (0..3).map(|i| seed[3 * i..3 * i + 3].to_vec()).collect();
            let cov: Vec<Vec<f64>> = (0..3)
                .map(|i| (0..3).map(|j| (0..3).map(|k| l[i][k] * l[j][k]).sum()).collect())
                .collect();
            let total: f64 = w.iter().sum();
            let weights: Vec<f64> = w.iter().map(|x| x / total).collect();
            let spec = BasketSpec {
                spots: vec![40.0; 3], weights, dividends: vec![0.0; 3], covariance: cov,
                rate: 0.05, strike: 40.0, maturity: 1.0, valuation_time: 0.0,
            };
            let red = reduce_basket(&spec).unwrap();
            prop_assert!(red.sigma_hat >= 0.0);
        }

        #[test]
        fn quanto_q_hat_plus_r_hat_is_minus_q(
            s1 in 0.01f64..1.0, s2 in 0.0f64..1.0, rho in -1.0f64..0.9,
            r1 in -0.1f64..0.2, r2 in -0.1f64..0.2, q in 0.0f64..0.1,
        ) {
            let spec = QuantoSpec { sigma1: s1, sigma2: s2, rho, r1, r2, q, ..fig5() };
            let red = reduce_quanto(&spec).unwrap();
            let lhs = red.q_hat + red.r_hat;
            let rhs = -q;
            // the rate and sigma2^2 terms cancel up to rounding of the two sums
            prop_assert!((lhs - rhs).abs() <= 8.0 * f64::EPSILON * (r1.abs() + 2.0 * r2.abs() + q + s2 * s2 + 1e-300));
        }
    }

    #[test]
    fn basket_examples() {
        let one = BasketSpec {
            spots: vec![40.0],
            weights: vec![1.0],
            dividends: vec![0.0],
            covariance: vec![vec![0.324336 * 0.324336]],
            rate: 0.05,
            strike: 40.0,
            maturity: 0.5,
            valuation_time: 0.0,
        };
        let red = reduce_basket(&one).unwrap();
        assert!((red.sigma_hat - 0.324336f64).abs() <= 1e-16);
        assert_eq!(red.q_hat, 0.0);

        let red = reduce_basket(&two_asset(40.0, 40.0, 0.0)).unwrap();
        assert!((red.sigma_hat * red.sigma_hat - 0.025).abs() <= 1e-17);
        assert!((red.q_hat - 0.0125).abs() <= 1e-17);
        assert_eq!(red.xi, 0.0);

        let v = 0.3 * 0.3;
        for alpha in [0.1, 0.5, 0.8] {
            let spec = BasketSpec {
                weights: vec![alpha, 1.0 - alpha],
                covariance: vec![vec![v, v], vec![v, v]],
                ..two_asset(40.0, 40.0, 0.0)
            };
            let red = reduce_basket(&spec).unwrap();
            assert!((red.sigma_hat - 0.3).abs() <= 1e-15);
        }
    }

    #[test]
    fn basket_constraint_errors() {
        let spec = BasketSpec { weights: vec![0.5, 0.6], ..two_asset(40.0, 40.0, 0.0) };
        assert!(matches!(reduce_basket(&spec), Err(Error::WeightSum { .. })));
        // |a12| > sqrt(a11 a22)
        let spec = two_asset(40.0, 40.0, 0.05);
        assert!(matches!(reduce_basket(&spec), Err(Error::Covariance(_))));
        let mut spec = two_asset(40.0, 40.0, 0.0);
        spec.covariance[0][1] = 0.001;
        assert!(matches!(reduce_basket(&spec), Err(Error::Covariance(_))));
        // singular but PSD
        let spec = BasketSpec {
            covariance: vec![vec![0.04, 0.04], vec![0.04, 0.04]],
            ..two_asset(40.0, 40.0, 0.0)
        };
        assert!(reduce_basket(&spec).is_ok());
    }

    #[test]
    fn quanto_examples() {
        let red = reduce_quanto(&fig5()).unwrap();
        assert!((red.sigma_hat_sq - 0.04).abs() <= 1e-16);
        assert!((red.q_hat + 0.02).abs() <= 1e-16);
        assert!((red.r_hat - 0.02).abs() <= 1e-16);
        assert!((red.k1 + 1.0).abs() <= 1e-14);
        assert!((red.k2 - 1.0).abs() <= 1e-14);

        for rho in [-0.5, 0.0, 0.7] {
            let spec = QuantoSpec { sigma2: 0.0, rho, r2: 0.11, ..fig5() };
            assert!((reduce_quanto(&spec).unwrap().sigma_hat_sq - 0.01).abs() <= 1e-17);
        }

        let degenerate = QuantoSpec { sigma1: 0.3, sigma2: 0.3, rho: 1.0, ..fig5() };
        assert!(matches!(reduce_quanto(&degenerate), Err(Error::DegenerateVolatility { .. })));
    }
}
