//! The z-dependent factors `f_n` of the series terms `u_n(z, w) = f_n(z) w^n`.
//!
//! Every factor has the shape `A_n(z) G(z) + B_n(z) R(z)` with polynomial
//! `A_n`, `B_n`, the Gaussian `G(z) = e^{-z^2/4}/sqrt(pi)` and the tail
//! `R(z) = erf(z/2) - 1 = -erfc(z/2)`. For `z > 0` both pieces are formed as
//! `e^{-z^2/4}` times an `erfcx` expression so nothing underflows into 0 * inf.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::{erfc_raw, erfcx_raw};
use crate::transforms::{BasketReduction, GeneralizedReducedParams};

/// Number of available series terms, `f_0 ..= f_5`.
pub const TERM_COUNT: usize = 6;

/// `(G(z), R(z))`.
pub(crate) fn gauss_and_tail<T: Real>(z: T) -> (T, T) {
    let quarter = T::lit(0.25);
    let inv_sqrt_pi = T::FRAC_2_SQRT_PI() * T::lit(0.5);
    let half_z = z * T::lit(0.5);
    if z.is_infinite() {
        return if z > T::zero() { (T::zero(), T::zero()) } else { (T::zero(), -T::lit(2.0)) };
    }
    let g = (-quarter * z * z).exp();
    if z > T::zero() {
        (g * inv_sqrt_pi, -g * erfcx_raw(half_z))
    } else {
        (g * inv_sqrt_pi, -erfc_raw(half_z))
    }
}

fn check_term<T: Real>(n: usize, z: T) -> Result<()> {
    if n >= TERM_COUNT {
        return Err(Error::UnsupportedTerm { n });
    }
    if z.is_nan() {
        return Err(Error::Domain("NaN similarity coordinate"));
    }
    Ok(())
}

/// A family of series factors `f_n`, `0 <= n < TERM_COUNT`.
pub trait SeriesTerms<T: Real>: Sync {
    fn term(&self, n: usize, z: T) -> Result<T>;
}

impl<T: Real, F> SeriesTerms<T> for F
where
    F: Fn(usize, T) -> Result<T> + Sync,
{
    fn term(&self, n: usize, z: T) -> Result<T> {
        self(n, z)
    }
}

/// Factors for free `(k1, k2)`, the terms that multi-asset reductions use.
///
/// These solve `2 f_n'' + z f_n' - (n+1) f_n + 2(k1-1) f_{n-1}' - 2 k2 f_{n-2} = 0`
/// with `f_n -> 0` at `+inf` and leading behaviour `-z^{n+1}/(n+1)!` at `-inf`.
pub fn phi_term<T: Real>(n: usize, xi: T, params: &GeneralizedReducedParams<T>) -> Result<T> {
    check_term(n, xi)?;
    params.validate()?;
    if xi == T::infinity() {
        return Ok(T::zero());
    }
    let (g, r) = gauss_and_tail(xi);
    let (a, b) = (params.k1, params.k2);
    let z = xi;
    let l = T::lit;
    let z2 = z * z;
    let value = match n {
        0 => g + l(0.5) * z * r,
        1 => (l(2.0) * z * g + (z2 + l(2.0) * a) * r) / l(4.0),
        2 => {
            let pa = l(2.0) * z2 + l(3.0) * a * a + l(6.0) * a - l(12.0) * b - l(1.0);
            let pb = z * (z2 + l(6.0) * a - l(6.0) * b);
            (pa * g + pb * r) / l(12.0)
        }
        3 => {
            let pa = l(2.0) * z * (z2 - a * a * a + l(3.0) * a * a + l(9.0) * a - l(12.0) * b - l(1.0));
            let pb = z2 * z2 + l(12.0) * (a - b) * z2 + l(12.0) * a * (a - l(2.0) * b);
            (pa * g + pb * r) / l(48.0)
        }
        4 => {
            let a2 = a * a;
            let a3 = a2 * a;
            let a4 = a3 * a;
            let c2 = l(5.0) * a4 - l(20.0) * a3 + l(30.0) * a2 + l(140.0) * a - l(160.0) * b - l(11.0);
            let c0 = -l(10.0) * a4 + l(120.0) * a3 + l(180.0) * a2 - l(40.0) * a
                - l(240.0) * (a2 + l(2.0) * a) * b
                + l(480.0) * b * b
                + l(80.0) * b
                + l(6.0);
            let pa = l(8.0) * z2 * z2 + c2 * z2 + c0;
            let d = a - b;
            let pb = l(4.0) * z * (z2 * z2 + l(20.0) * d * z2 + l(60.0) * d * d);
            (pa * g + pb * r) / l(960.0)
        }
        5 => {
            let a2 = a * a;
            let a3 = a2 * a;
            let a4 = a3 * a;
            let a5 = a4 * a;
            let c3 = l(3.0) * a5 - l(15.0) * a4 + l(30.0) * a3 - l(30.0) * a2 - l(225.0) * a
                + l(240.0) * b
                + l(13.0);
            let c1 = l(18.0) * a5 - l(150.0) * a4 + l(420.0) * a3 + l(900.0) * a2 - l(150.0) * a
                + (l(240.0) * a3 - l(720.0) * a2 - l(2160.0) * a) * b
                + l(240.0) * b
                + l(1440.0) * b * b
                + l(18.0);
            let pa = z * (l(8.0) * z2 * z2 - c3 * z2 + c1);
            let d = a - b;
            let pb = l(4.0)
                * (z2 * z2 * z2 + l(30.0) * d * z2 * z2 + l(180.0) * d * d * z2
                    + l(120.0) * a * (a2 - l(3.0) * a * b + l(3.0) * b * b));
            (pa * g + pb * r) / l(5760.0)
        }
        _ => unreachable!(),
    };
    Ok(value)
}

/// Single-asset factors with `k = 2r/sigma^2`, written out as their own
/// polynomials (they coincide with [`phi_term`] at `k1 = k2 = k`).
pub fn single_asset_term<T: Real>(n: usize, z: T, k: T) -> Result<T> {
    check_term(n, z)?;
    if !k.is_finite() {
        return Err(Error::Domain("k must be finite"));
    }
    if z == T::infinity() {
        return Ok(T::zero());
    }
    let (g, r) = gauss_and_tail(z);
    let l = T::lit;
    let z2 = z * z;
    let k2 = k * k;
    let k3 = k2 * k;
    let k4 = k3 * k;
    let k5 = k4 * k;
    let value = match n {
        0 => g + z / l(2.0) * r,
        1 => (l(2.0) * z * g + (z2 + l(2.0) * k) * r) / l(4.0),
        2 => (g * (l(2.0) * z2 + l(3.0) * k2 - l(6.0) * k - l(1.0)) + z2 * z * r) / l(12.0),
        3 => {
            let pa = l(2.0) * z * (z2 - k3 + l(3.0) * k2 - l(3.0) * k - l(1.0));
            (pa * g + (z2 * z2 - l(12.0) * k2) * r) / l(48.0)
        }
        4 => {
            let c2 = l(5.0) * k4 - l(20.0) * k3 + l(30.0) * k2 - l(20.0) * k - l(11.0);
            let c0 = -l(10.0) * k4 - l(120.0) * k3 + l(180.0) * k2 + l(40.0) * k + l(6.0);
            let pa = l(8.0) * z2 * z2 + c2 * z2 + c0;
            (pa * g + l(4.0) * z2 * z2 * z * r) / l(960.0)
        }
        5 => {
            let c3 = l(3.0) * k5 - l(15.0) * k4 + l(30.0) * k3 - l(30.0) * k2 + l(15.0) * k + l(13.0);
            let c1 = l(18.0) * k5 + l(90.0) * k4 - l(300.0) * k3 + l(180.0) * k2 + l(90.0) * k + l(18.0);
            let pa = l(8.0) * z2 * z2 * z - c3 * z2 * z + c1 * z;
            let pb = l(4.0) * z2 * z2 * z2 + l(480.0) * k3;
            (pa * g + pb * r) / l(5760.0)
        }
        _ => unreachable!(),
    };
    Ok(value)
}

/// Uncorrected basket factors written directly in their `sigma_hat`, `q_hat`, `r`
/// coefficients. They do not solve the reduced recursion (see the residual
/// diagnostics in `pde`) and are kept out of the default pricing path.
pub fn basket_term_literal<T: Real>(n: usize, z: T, red: &BasketReduction<T>, r: T) -> Result<T> {
    check_term(n, z)?;
    let s2 = red.sigma_hat * red.sigma_hat;
    if !(s2 > T::zero()) {
        return Err(Error::DegenerateVolatility { sigma_hat_sq: 0.0 });
    }
    if z == T::infinity() {
        return Ok(T::zero());
    }
    let (g, tail) = gauss_and_tail(z);
    let q = red.q_hat;
    let l = T::lit;
    let z2 = z * z;
    let s4 = s2 * s2;
    let s6 = s4 * s2;
    let s8 = s6 * s2;
    let s10 = s8 * s2;
    let dq = q - r;
    let value = match n {
        0 => g + l(0.5) * z * tail,
        1 => (l(2.0) * g * z + (s2 * z2 - l(4.0) * (q - r)) / (l(4.0) * s2) * tail) / l(4.0),
        2 => {
            let pa = s4 * (l(2.0) * z2 - l(1.0)) - l(12.0) * q * (s2 + l(2.0) * r) - l(12.0) * s2 * r
                + l(12.0) * q * q
                + l(12.0) * r * r;
            let pb = z / s2 * (s2 * z2 - l(12.0) * q);
            (g / s4 * pa + pb * tail) / l(12.0)
        }
        3 => {
            let inner = s6 * z2 - l(2.0) * q * (l(9.0) * s2 - l(6.0) * s2 * q - l(4.0) * q * q)
                - l(6.0) * r * (s2 + l(2.0) * q)
                + l(12.0) * r * r * (s2 + l(2.0) * q)
                - s6
                - l(8.0) * r * r * r;
            let pa = l(2.0) * g / s6 * z * inner;
            let pb = (s4 * z2 * z2 - l(24.0) * s2 * q * z2 + l(48.0) * q - l(48.0) * r * r) / s4;
            (pa + pb * tail) / l(48.0)
        }
        4 => {
            let c2 = l(11.0) * s8 + l(40.0) * s6 * (l(7.0) * q + r) - l(120.0) * s4 * dq * dq
                - l(160.0) * s2 * dq * dq * dq
                - l(80.0) * dq.powi(4);
            let c0 = l(6.0) * s8
                + l(80.0) * s6 * (q + r)
                + l(240.0) * s4 * (l(3.0) * q * q + l(2.0) * q * r + l(3.0) * r * r)
                - l(960.0) * s2 * dq * dq * (q + r)
                - l(160.0) * dq.powi(4);
            let pa = g / s8 * (l(8.0) * s8 * z2 * z2 - c2 * z2 + c0);
            let pb = l(4.0) / s4 * z * (s4 * z2 * z2 - l(40.0) * s2 * q * z2 + l(240.0) * q * q);
            (pa + pb * tail) / l(960.0)
        }
        5 => {
            let c3 = l(13.0) * s10 + l(30.0) * s8 * (l(15.0) * q + r) - l(120.0) * s6 * dq * dq
                - l(240.0) * s4 * dq.powi(3)
                - l(240.0) * s2 * dq.powi(4)
                - l(96.0) * dq.powi(5);
            let c1 = l(18.0) * s10
                + l(60.0) * s8 * (l(5.0) * q + l(3.0) * r)
                + l(720.0) * s6 * (l(5.0) * q * q + l(2.0) * q * r + r * r)
                - l(480.0) * s4 * dq * dq * (l(7.0) * q + l(5.0) * r)
                - l(480.0) * s2 * dq.powi(3) * (l(5.0) * q + l(3.0) * r)
                - l(576.0) * dq.powi(5);
            let pa = g / s10 * (l(8.0) * s10 * z2 * z2 * z - c3 * z2 * z + c1 * z);
            let pb = l(4.0) / s6
                * (s6 * z2 * z2 * z2 - l(60.0) * s4 * q * z2 * z2 + l(720.0) * s2 * q * q * z2
                    - l(960.0) * q * q * q
                    + l(960.0) * r * r * r);
            (pa + pb * tail) / l(5760.0)
        }
        _ => unreachable!(),
    };
    Ok(value)
}

/// [`phi_term`] bound to fixed parameters.
#[derive(Debug, Clone, Copy)]
pub struct GeneralizedTerms<T>(pub GeneralizedReducedParams<T>);

impl<T: Real> SeriesTerms<T> for GeneralizedTerms<T> {
    fn term(&self, n: usize, z: T) -> Result<T> {
        phi_term(n, z, &self.0)
    }
}

/// [`single_asset_term`] bound to a fixed `k`.
#[derive(Debug, Clone, Copy)]
pub struct SingleAssetTerms<T>(pub T);

impl<T: Real> SeriesTerms<T> for SingleAssetTerms<T> {
    fn term(&self, n: usize, z: T) -> Result<T> {
        single_asset_term(n, z, self.0)
    }
}

/// [`basket_term_literal`] bound to a reduction and rate.
#[derive(Debug, Clone, Copy)]
pub struct BasketLiteralTerms<T> {
    pub reduction: BasketReduction<T>,
    pub rate: T,
}

impl<T: Real> SeriesTerms<T> for BasketLiteralTerms<T> {
    fn term(&self, n: usize, z: T) -> Result<T> {
        basket_term_literal(n, z, &self.reduction, self.rate)
    }
}
