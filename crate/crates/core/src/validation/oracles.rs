//! Independent reference computations used by the checks.
//!
//! None of these share code with the production evaluators: the normal CDF
//! is integrated by composite Gauss-Legendre, `erf` is summed from its
//! Maclaurin series and the far-field series coefficients come from a direct
//! power-series product.

use std::f64::consts::PI;

const PANEL_WIDTH: f64 = 1.0 / 16.0;
const LOWER_LIMIT: f64 = -40.0;

/// Five-point Gauss-Legendre nodes and weights on `[-1, 1]` from their
/// closed forms `x = (1/3) sqrt(5 -+ 2 sqrt(10/7))`, `w = (322 +- 13 sqrt 70)/900`.
pub fn gauss_legendre_5() -> ([f64; 5], [f64; 5]) {
    let a = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let b = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let wa = (322.0 + 13.0 * 70.0f64.sqrt()) / 900.0;
    let wb = (322.0 - 13.0 * 70.0f64.sqrt()) / 900.0;
    ([-b, -a, 0.0, a, b], [wb, wa, 128.0 / 225.0, wa, wb])
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `(2 pi)^{-1/2} int_{-40}^{v} e^{-s^2/2} ds` by composite five-point
/// Gauss-Legendre on panels of width at most 1/16.
///
/// Only the smaller piece of mass is integrated: the lower tail for
/// `v < -1`, the strip between 0 and `v` added to 1/2 for `|v| <= 1`, and the
/// upper tail subtracted from one for `v > 1`.
pub fn normal_cdf_quadrature(v: f64) -> f64 {
    if v <= LOWER_LIMIT {
        0.0
    } else if v < -1.0 {
        gaussian_mass(LOWER_LIMIT, v)
    } else if v < 0.0 {
        0.5 - gaussian_mass(v, 0.0)
    } else if v <= 1.0 {
        0.5 + gaussian_mass(0.0, v)
    } else {
        1.0 - gaussian_mass(v, -LOWER_LIMIT)
    }
}

fn gaussian_mass(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let (nodes, weights) = gauss_legendre_5();
    let panels = ((hi - lo) / PANEL_WIDTH).ceil() as usize;
    let width = (hi - lo) / panels as f64;
    let half = 0.5 * width;
    let norm = 1.0 / (2.0 * PI).sqrt();
    // offsets are measured from the end nearer the origin, where the mass
    // sits, so the node abscissae carry no rounding from the far limit
    let anchor_low = lo.abs() <= hi.abs();
    let parts = (0..panels).map(|p| {
        let offset = (p as f64 + 0.5) * width;
        let mid = if anchor_low { lo + offset } else { hi - offset };
        compensated_sum(nodes.iter().zip(&weights).map(|(x, w)| {
            let s = mid + half * x;
            w * (-0.5 * s * s).exp()
        }))
    });
    norm * half * compensated_sum(parts)
}

/// `erf(x) = 2/sqrt(pi) sum_{n<terms} (-1)^n x^{2n+1} / (n! (2n+1))`.
pub fn erf_series(x: f64, terms: usize) -> f64 {
    let mut power = x;
    let mut sum = 0.0;
    for n in 0..terms {
        sum += power / (2 * n + 1) as f64;
        power *= -x * x / (n + 1) as f64;
    }
    2.0 / PI.sqrt() * sum
}

/// `erfc(x)` for `x > 0` from the Laplace continued fraction, evaluated
/// bottom-up with `depth` levels.
pub fn erfc_continued_fraction(x: f64, depth: usize) -> f64 {
    // erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut tail = x;
    for k in (1..=depth).rev() {
        tail = x + (k as f64 * 0.5) / tail;
    }
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    (-hi).exp() * (-lo).exp() / PI.sqrt() / tail
}

/// Coefficient of `w^n` in `(e^{-k2 w^2} - e^{z w + (k1 - k2) w^2}) / w`, the
/// far-field value of the `n`-th smoothed series term as `z -> -inf`.
pub fn far_field_term(n: usize, z: f64, k1: f64, k2: f64) -> f64 {
    let p = n + 1;
    let mut value = 0.0;
    if p % 2 == 0 {
        let m = p / 2;
        value += (-k2).powi(m as i32) / factorial(m);
    }
    let c = k1 - k2;
    for m in 0..=p / 2 {
        let j = p - 2 * m;
        value -= z.powi(j as i32) / factorial(j) * c.powi(m as i32) / factorial(m);
    }
    value
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre_5();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
        let i8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((i8 - 2.0 / 9.0).abs() < 1e-15);
        let i10: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((i10 - 2.0 / 11.0).abs() > 1e-4);
    }

    #[test]
    fn quadrature_known_values() {
        assert!((normal_cdf_quadrature(0.0) - 0.5).abs() <= 2e-16);
        // Phi(1.96) = 0.9750021048517795
        assert!((normal_cdf_quadrature(1.96) - 0.975_002_104_851_779_5).abs() <= 2.3e-16);
        // Phi(-3) = 1.3498980316300946e-3
        assert!((normal_cdf_quadrature(-3.0) - 1.349_898_031_630_094_6e-3).abs() <= 1e-18);
    }

    #[test]
    fn series_and_fraction_agree() {
        assert!((erf_series(0.5, 30) - 0.520_499_877_813_046_5).abs() < 1e-16);
        let cf = erfc_continued_fraction(3.0, 200);
        assert!((cf - 2.209_049_699_858_544e-5).abs() < 1e-19);
    }

    #[test]
    fn far_field_leading_order() {
        // n = 0: 1 - (1 + z) = -z at leading order
        assert_eq!(far_field_term(0, -3.0, 0.7, 1.1), 3.0);
        // n = 1: -k2 - z^2/2 - (k1 - k2)
        let v = far_field_term(1, -3.0, 0.7, 1.1);
        assert!((v - (-1.1 - 4.5 + 0.4)).abs() < 1e-15);
    }
}
