//! Error-function family and the standard normal CDF.
//!
//! The rational approximations are W. J. Cody's near-minimax fits (Math. Comp.
//! 1969, as packaged in the SPECFUN `CALERF` routine). Three intervals are
//! used: `|x| <= 0.46875` (erf directly), `0.46875 < |x| <= 4` (erfcx form)
//! and `|x| > 4`, where a rational function of `1/x^2` gives the asymptotic
//! tail of `erfcx` without forming `exp(-x^2)` until the very end.

use crate::error::{Error, Result};
use crate::real::Real;

const THRESH: f64 = 0.46875;
const SPLIT: f64 = 4.0;

const A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_6e2,
    3.774_852_376_853_020_2e2,
    3.209_377_589_138_469_5e3,
    1.857_777_061_846_031_5e-1,
];
const B: [f64; 4] = [
    2.360_129_095_234_412_1e1,
    2.440_246_379_344_441_7e2,
    1.282_616_526_077_372_3e3,
    2.844_236_833_439_170_6e3,
];
const C: [f64; 9] = [
    5.641_884_969_886_701e-1,
    8.883_149_794_388_376e0,
    6.611_919_063_714_163e1,
    2.986_351_381_974_001_3e2,
    8.819_522_212_417_691e2,
    1.712_047_612_634_070_6e3,
    2.051_078_377_826_071_5e3,
    1.230_339_354_797_997_2e3,
    2.153_115_354_744_038_5e-8,
];
const D: [f64; 8] = [
    1.574_492_611_070_983_5e1,
    1.176_939_508_913_125e2,
    5.371_811_018_620_098_6e2,
    1.621_389_574_566_690_2e3,
    3.290_799_235_733_459_6e3,
    4.362_619_090_143_247e3,
    3.439_367_674_143_721_6e3,
    1.230_339_354_803_749_4e3,
];
const P: [f64; 6] = [
    3.053_266_349_612_323_4e-1,
    3.603_448_999_498_044_4e-1,
    1.257_817_261_112_292_5e-1,
    1.608_378_514_874_227_7e-2,
    6.587_491_615_298_378e-4,
    1.631_538_713_730_209_8e-2,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822_4e0,
    1.872_952_849_923_460_5e0,
    5.279_051_029_514_284e-1,
    6.051_834_131_244_132e-2,
    2.335_204_976_268_691_8e-3,
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Erf,
    Erfc,
    Erfcx,
}

/// `exp(-y^2)` evaluated as `exp(-ysq^2) * exp(-del)` with `ysq` truncated to
/// sixteenths, which keeps the exponent argument exact for large `y`.
#[inline]
fn exp_neg_sq<T: Real>(y: T) -> T {
    let sixteen = T::lit(16.0);
    let ysq = (y * sixteen).trunc() / sixteen;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp()
}

#[inline]
fn exp_pos_sq<T: Real>(y: T) -> T {
    let sixteen = T::lit(16.0);
    let ysq = (y * sixteen).trunc() / sixteen;
    let del = (y - ysq) * (y + ysq);
    (ysq * ysq).exp() * del.exp()
}

fn calerf<T: Real>(x: T, kind: Kind) -> T {
    let half = T::lit(0.5);
    let one = T::one();
    let two = T::lit(2.0);
    let inv_sqrt_pi = T::FRAC_2_SQRT_PI() * half;
    let xsmall = T::epsilon() * half;
    let xhuge = half / xsmall.sqrt();

    let y = x.abs();
    let mut result;
    if y <= T::lit(THRESH) {
        let ysq = if y > xsmall { y * y } else { T::zero() };
        let mut xnum = T::lit(A[4]) * ysq;
        let mut xden = ysq;
        for i in 0..3 {
            xnum = (xnum + T::lit(A[i])) * ysq;
            xden = (xden + T::lit(B[i])) * ysq;
        }
        result = x * (xnum + T::lit(A[3])) / (xden + T::lit(B[3]));
        if kind != Kind::Erf {
            result = one - result;
        }
        if kind == Kind::Erfcx {
            result = ysq.exp() * result;
        }
        return result;
    } else if y <= T::lit(SPLIT) {
        let mut xnum = T::lit(C[8]) * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + T::lit(C[i])) * y;
            xden = (xden + T::lit(D[i])) * y;
        }
        // erfcx(y) on this interval
        result = (xnum + T::lit(C[7])) / (xden + T::lit(D[7]));
    } else if y >= xhuge {
        result = inv_sqrt_pi / y;
    } else {
        let ysq = one / (y * y);
        let mut xnum = T::lit(P[5]) * ysq;
        let mut xden = ysq;
        for i in 0..4 {
            xnum = (xnum + T::lit(P[i])) * ysq;
            xden = (xden + T::lit(Q[i])) * ysq;
        }
        result = ysq * (xnum + T::lit(P[4])) / (xden + T::lit(Q[4]));
        result = (inv_sqrt_pi - result) / y;
    }

    // `result` holds erfcx(|x|) here.
    match kind {
        Kind::Erf => {
            let erfc_abs = if y.is_infinite() { T::zero() } else { exp_neg_sq(y) * result };
            let v = (half - erfc_abs) + half;
            if x < T::zero() {
                -v
            } else {
                v
            }
        }
        Kind::Erfc => {
            let erfc_abs = if y.is_infinite() { T::zero() } else { exp_neg_sq(y) * result };
            if x < T::zero() {
                two - erfc_abs
            } else {
                erfc_abs
            }
        }
        Kind::Erfcx => {
            if x < T::zero() {
                let e = exp_pos_sq(x);
                if e.is_infinite() {
                    T::infinity()
                } else {
                    (e + e) - result
                }
            } else if y.is_infinite() {
                T::zero()
            } else {
                result
            }
        }
    }
}

#[inline]
fn check<T: Real>(x: T) -> Result<T> {
    if x.is_nan() {
        Err(Error::Domain("NaN argument to special function"))
    } else {
        Ok(x)
    }
}

pub(crate) fn erf_raw<T: Real>(x: T) -> T {
    calerf(x, Kind::Erf)
}

pub(crate) fn erfc_raw<T: Real>(x: T) -> T {
    calerf(x, Kind::Erfc)
}

pub(crate) fn erfcx_raw<T: Real>(x: T) -> T {
    calerf(x, Kind::Erfcx)
}

/// `N(v) = erfc(-v/sqrt 2) / 2`, evaluated without cancellation in either tail.
pub(crate) fn normal_cdf_raw<T: Real>(v: T) -> T {
    let half = T::lit(0.5);
    half * erfc_raw(-v * T::FRAC_1_SQRT_2())
}

/// Gauss error function. `erf(±inf) = ±1`; NaN is rejected.
pub fn erf<T: Real>(x: T) -> Result<T> {
    check(x).map(erf_raw)
}

/// Complementary error function `1 - erf(x)`, accurate in the far right tail
/// (it underflows to zero only where the true value does, near `x ≈ 26.5`).
pub fn erfc<T: Real>(x: T) -> Result<T> {
    check(x).map(erfc_raw)
}

/// Scaled complement `exp(x^2) erfc(x)`. Overflows to `+inf` for `x < -26.6`.
pub fn erfcx<T: Real>(x: T) -> Result<T> {
    check(x).map(erfcx_raw)
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf<T: Real>(v: T) -> Result<T> {
    check(v).map(normal_cdf_raw)
}
