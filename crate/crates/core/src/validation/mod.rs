//! The acceptance checks, runnable from tests and from the command line.
//!
//! Each check compares one measured quantity against a bound and reports
//! the outcome rather than panicking, so a caller can print the whole table.
//! Random inputs come from fixed ChaCha8 seeds; every run measures the same
//! numbers.

pub mod oracles;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exact::{basket_put_exact, bs_put, quanto_put_exact, reduced_exact_u};
use crate::pde::{cn_solve, richardson_residual, fd_residual_with, GridSpec};
use crate::series::{
    basket_term_literal, naive_correction_sum, phi_term, price_basket_hpm, price_quanto_hpm,
    price_single_hpm1, price_single_hpm2, single_asset_term, BasketVariant, TERM_COUNT,
};
use crate::special::{erf, normal_cdf};
use crate::transforms::{
    reduce_basket, reduce_quanto, to_dimensionless, BasketSpec, GeneralizedReducedParams,
    QuantoSpec, VanillaOptionSpec,
};

/// Signature of a generalized term evaluator `f_n(z; k1, k2)`.
pub type TermFn = fn(usize, f64, &GeneralizedReducedParams<f64>) -> Result<f64>;

/// Max |order-6 smoothed price - exact| on the vanilla sweep, S in [1, 100].
pub const EPSILON_1: f64 = 38.012_396_481_133;
/// Max |order-6 basket price - exact| on [20, 60]^2.
pub const EPSILON_2: f64 = 2.993_299_913_0e-4;
/// Max |order-6 quanto price - exact| on [20, 60]^2.
pub const EPSILON_3: f64 = 2.926_208_673_0e-3;
/// Base step of the extrapolated residual estimate.
pub const RESIDUAL_STEP: f64 = 0.05;
/// Multiplier on the frozen regression constants.
pub const REGRESSION_SLACK: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Default,
    /// Absolute tolerances divided by ten. Frozen regression constants keep
    /// their slack, and the uncorrected basket terms are reported as warnings.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Warn,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    /// Criterion number, `C1` .. `C11`.
    pub id: &'static str,
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub comparison: Comparison,
    pub status: Status,
    pub note: String,
}

impl CheckResult {
    fn judged(id: &'static str, name: impl Into<String>, measured: f64, bound: f64, comparison: Comparison) -> Self {
        let ok = match comparison {
            Comparison::AtMost => measured <= bound,
            Comparison::AtLeast => measured >= bound,
        };
        Self {
            id,
            name: name.into(),
            measured,
            bound,
            comparison,
            status: if ok { Status::Pass } else { Status::Fail },
            note: String::new(),
        }
    }

    fn at_most(id: &'static str, name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::judged(id, name, measured, bound, Comparison::AtMost)
    }

    fn at_least(id: &'static str, name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::judged(id, name, measured, bound, Comparison::AtLeast)
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Downgrades a failure to `status`; passes stay passes.
    fn soften(mut self, status: Status) -> Self {
        if self.status == Status::Fail {
            self.status = status;
        }
        self
    }

    fn errored(id: &'static str, name: impl Into<String>, err: crate::Error) -> Self {
        Self {
            id,
            name: name.into(),
            measured: f64::NAN,
            bound: f64::NAN,
            comparison: Comparison::AtMost,
            status: Status::Fail,
            note: err.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// One line, `PASS C3 vanilla ...: measured 1.2e-5 <= 1.0e-4`.
    pub fn line(&self) -> String {
        let op = match self.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        let mut s = format!("{} {} {}: measured {:.6e} {} {:.6e}", self.status, self.id, self.name, self.measured, op, self.bound);
        if !self.note.is_empty() {
            s.push_str(" (");
            s.push_str(&self.note);
            s.push(')');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub profile: Profile,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn render_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(5);
        let mut out = format!("{:<6} {:<4} {:<width$} {:>14} {:>2} {:>14}\n", "status", "id", "check", "measured", "", "bound");
        for c in &self.checks {
            let op = if c.comparison == Comparison::AtMost { "<=" } else { ">=" };
            out.push_str(&format!(
                "{:<6} {:<4} {:<width$} {:>14.6e} {:>2} {:>14.6e}",
                c.status.to_string(),
                c.id,
                c.name,
                c.measured,
                op,
                c.bound
            ));
            if !c.note.is_empty() {
                out.push_str("  ");
                out.push_str(&c.note);
            }
            out.push('\n');
        }
        out
    }
}

/// Fig. 1 vanilla contract at spot `s`.
pub fn fig1_spec(spot: f64) -> VanillaOptionSpec<f64> {
    VanillaOptionSpec { spot, strike: 40.0, rate: 0.05, vol: 0.324336, maturity: 0.5, valuation_time: 0.0 }
}

/// Basket contract of Figs. 3-4 with zero correlation.
pub fn fig3_spec(s1: f64, s2: f64) -> BasketSpec<f64> {
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

/// Quanto contract of Figs. 5-6 with `q = 0`.
pub fn fig5_spec(s1: f64, s2: f64) -> QuantoSpec<f64> {
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

/// The surface grid of Figs. 3-6: 41 points on `[20, 60]`.
pub fn surface_axis() -> Vec<f64> {
    (0..=40).map(|i| 20.0 + i as f64).collect()
}

/// `phi_term` with the `n = 2` term scaled by `1.001`, for mutation testing.
pub fn corrupted_phi2(n: usize, z: f64, p: &GeneralizedReducedParams<f64>) -> Result<f64> {
    let v = phi_term(n, z, p)?;
    Ok(if n == 2 { 1.001 * v } else { v })
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn random_vanilla(rng: &mut ChaCha8Rng) -> VanillaOptionSpec<f64> {
    VanillaOptionSpec {
        spot: uniform(rng, 10.0, 120.0),
        strike: uniform(rng, 20.0, 80.0),
        rate: uniform(rng, 0.005, 0.12),
        vol: uniform(rng, 0.1, 0.6),
        maturity: uniform(rng, 0.1, 2.0),
        valuation_time: 0.0,
    }
}

fn random_quanto(rng: &mut ChaCha8Rng) -> QuantoSpec<f64> {
    loop {
        let strike = uniform(rng, 20.0, 80.0);
        let spec = QuantoSpec {
            s1: strike * uniform(rng, 0.6, 1.5),
            s2: uniform(rng, 10.0, 80.0),
            sigma1: uniform(rng, 0.05, 0.6),
            sigma2: uniform(rng, 0.0, 0.5),
            rho: uniform(rng, -1.0, 1.0),
            r1: uniform(rng, 0.0, 0.1),
            r2: uniform(rng, 0.0, 0.1),
            q: uniform(rng, 0.0, 0.05),
            strike,
            maturity: uniform(rng, 0.1, 2.0),
            valuation_time: 0.0,
        };
        let s = spec.sigma1 * spec.sigma1 + spec.sigma2 * spec.sigma2
            - 2.0 * spec.rho * spec.sigma1 * spec.sigma2;
        if s > 1e-4 {
            return spec;
        }
    }
}

/// Runs the checks. The generalized term evaluator is replaceable so that a
/// deliberately broken one can be shown to fail.
#[derive(Debug, Clone, Copy)]
pub struct Validator {
    pub profile: Profile,
    generalized: TermFn,
}

impl Default for Validator {
    fn default() -> Self {
        Self::new(Profile::Default)
    }
}

impl Validator {
    pub fn new(profile: Profile) -> Self {
        Self { profile, generalized: phi_term::<f64> }
    }

    pub fn with_generalized_terms(mut self, f: TermFn) -> Self {
        self.generalized = f;
        self
    }

    fn tol(&self, x: f64) -> f64 {
        match self.profile {
            Profile::Default => x,
            Profile::Strict => x / 10.0,
        }
    }

    pub fn run_all(&self) -> Report {
        let mut checks = Vec::new();
        checks.extend(self.specialization());
        checks.extend(self.recursion_residuals());
        checks.extend(self.pde_cross_validation());
        checks.extend(self.quanto_consistency());
        checks.extend(self.degenerations());
        checks.extend(self.hpm2_accuracy());
        checks.extend(self.smoothness_contrast());
        checks.extend(self.error_surfaces());
        checks.extend(self.special_functions());
        checks.extend(self.partial_sums());
        checks.extend(self.boundary_asymptotics());
        Report { profile: self.profile, checks }
    }

    /// C1: generalized terms at `k1 = k2 = k` against the single-asset terms.
    pub fn specialization(&self) -> Vec<CheckResult> {
        let name = "generalized terms at k1 = k2 vs single-asset terms";
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let xi = uniform(&mut rng, -10.0, 10.0);
            let k = uniform(&mut rng, 0.1, 3.0);
            let p = GeneralizedReducedParams::single(k);
            for n in 0..TERM_COUNT {
                let diff = (|| Ok::<_, crate::Error>(((self.generalized)(n, xi, &p)? - single_asset_term(n, xi, k)?).abs()))();
                match diff {
                    Ok(d) => worst = worst.max(if d.is_nan() { f64::INFINITY } else { d }),
                    Err(e) => return vec![CheckResult::errored("C1", name, e)],
                }
            }
        }
        vec![CheckResult::at_most("C1", name, worst, self.tol(1e-12))]
    }

    /// C2: Richardson-extrapolated recursion residuals, and the observed order
    /// of the plain central-difference estimator.
    pub fn recursion_residuals(&self) -> Vec<CheckResult> {
        let name = "extrapolated recursion residual, all terms";
        let order_name = "residual estimator convergence order";
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        let mut worst = 0.0f64;
        let mut orders: Vec<f64> = Vec::new();
        for _pair in 0..10 {
            let p = GeneralizedReducedParams::new(uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
            let gen = self.generalized;
            let terms = move |n: usize, z: f64| gen(n, z, &p);
            for _ in 0..100 {
                let z = uniform(&mut rng, -4.0, 4.0);
                let w = uniform(&mut rng, 0.1, 1.0);
                for n in 0..TERM_COUNT {
                    match richardson_residual(&terms, n, &p, z, w, RESIDUAL_STEP) {
                        Ok(r) => worst = worst.max(if r.is_nan() { f64::INFINITY } else { r.abs() }),
                        Err(e) => return vec![CheckResult::errored("C2", name, e)],
                    }
                }
            }
            // plain estimator on a fixed point; truncation error only
            let (z, w) = (0.7, 0.6);
            for n in 1..TERM_COUNT {
                let est = |h: f64| fd_residual_with(&terms, n, &p, z, w, h);
                match (est(0.08), est(0.04), est(0.02)) {
                    (Ok(a), Ok(b), Ok(c)) => {
                        // differences cancel any nonzero limit
                        orders.push(((a - b) / (b - c)).abs().log2());
                    }
                    (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                        return vec![CheckResult::errored("C2", order_name, e)];
                    }
                }
            }
        }
        let (lo, hi) = orders
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &o| (lo.min(o), hi.max(o)));
        let lo = if lo.is_nan() { f64::NEG_INFINITY } else { lo };
        let hi = if hi.is_nan() { f64::INFINITY } else { hi };
        vec![
            CheckResult::at_most("C2", name, worst, self.tol(1e-8)),
            CheckResult::at_least("C2", format!("{order_name} (min)"), lo, 1.8),
            CheckResult::at_most("C2", format!("{order_name} (max)"), hi, 2.2),
        ]
    }

    fn cn_at_origin(&self, params: &GeneralizedReducedParams<f64>, tau: f64) -> Result<f64> {
        let half_width = (8.0 * (2.0 * tau).sqrt()).max(0.5);
        let grid = GridSpec::symmetric(half_width, 800, 800);
        cn_solve(params, tau, &grid)?.value_at(0.0)
    }

    /// C3: closed forms against the finite-difference solution at `y = 0`.
    pub fn pde_cross_validation(&self) -> Vec<CheckResult> {
        let bound = self.tol(1e-4);
        let mut out = Vec::new();

        let vanilla = (|| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(303);
            let mut specs = vec![fig1_spec(40.0)];
            for _ in 0..5 {
                let s = random_vanilla(&mut rng);
                specs.push(VanillaOptionSpec { spot: s.strike, ..s });
            }
            let mut worst = 0.0f64;
            for spec in specs {
                let rc = to_dimensionless(&spec)?;
                let exact = bs_put(&spec)?.value() / spec.strike;
                let fd = self.cn_at_origin(&GeneralizedReducedParams::single(rc.k), rc.tau)?;
                worst = worst.max((exact - fd).abs());
            }
            Ok(worst)
        })();
        out.push(match vanilla {
            Ok(m) => CheckResult::at_most("C3", "vanilla closed form vs finite differences (6 sets)", m, bound),
            Err(e) => CheckResult::errored("C3", "vanilla closed form vs finite differences", e),
        });

        let quanto = (|| -> Result<f64> {
            let spec = fig5_spec(40.0, 40.0);
            let red = reduce_quanto(&spec)?;
            let tau = 0.5 * red.sigma_hat_sq * spec.remaining();
            let exact = quanto_put_exact(&spec)?.value() / (spec.strike * spec.s2);
            Ok((exact - self.cn_at_origin(&red.params(), tau)?).abs())
        })();
        out.push(match quanto {
            Ok(m) => CheckResult::at_most("C3", "quanto closed form vs finite differences", m, bound),
            Err(e) => CheckResult::errored("C3", "quanto closed form vs finite differences", e),
        });

        let basket = (|| -> Result<f64> {
            let spec = fig3_spec(40.0, 40.0);
            let red = reduce_basket(&spec)?;
            let tau = 0.5 * red.sigma_hat * red.sigma_hat * spec.remaining();
            let exact = basket_put_exact(&spec)?.value() / spec.strike;
            Ok((exact - self.cn_at_origin(&red.params(spec.rate)?, tau)?).abs())
        })();
        out.push(match basket {
            Ok(m) => CheckResult::at_most("C3", "basket closed form vs finite differences", m, bound),
            Err(e) => CheckResult::errored("C3", "basket closed form vs finite differences", e),
        });
        out
    }

    /// C4: the market-variable quanto formula against the reduced route.
    pub fn quanto_consistency(&self) -> Vec<CheckResult> {
        let name = "quanto closed form vs reduced solution (relative)";
        let run = || -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(404);
            let mut worst = 0.0f64;
            for _ in 0..1000 {
                let spec = random_quanto(&mut rng);
                let red = reduce_quanto(&spec)?;
                let tau = 0.5 * red.sigma_hat_sq * spec.remaining();
                let y = (spec.s1 / spec.strike).ln();
                let via_u = spec.strike * spec.s2 * reduced_exact_u(y, tau, &red.params())?;
                let direct = quanto_put_exact(&spec)?.value();
                let rel = (via_u - direct).abs() / direct.abs();
                worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
            }
            Ok(worst)
        };
        vec![match run() {
            Ok(m) => CheckResult::at_most("C4", name, m, self.tol(1e-10)),
            Err(e) => CheckResult::errored("C4", name, e),
        }]
    }

    /// C5: one-asset basket and `k1 = k2` reduced solution against Black-Scholes.
    pub fn degenerations(&self) -> Vec<CheckResult> {
        let bound = self.tol(1e-12);
        let basket_name = "one-asset basket vs Black-Scholes";
        let reduced_name = "reduced solution at k1 = k2 vs Black-Scholes";
        let run = || -> Result<(f64, f64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(505);
            let (mut wb, mut wr) = (0.0f64, 0.0f64);
            for _ in 0..1000 {
                let spec = random_vanilla(&mut rng);
                let bs = bs_put(&spec)?.value();
                let basket = BasketSpec {
                    spots: vec![spec.spot],
                    weights: vec![1.0],
                    dividends: vec![0.0],
                    covariance: vec![vec![spec.vol * spec.vol]],
                    rate: spec.rate,
                    strike: spec.strike,
                    maturity: spec.maturity,
                    valuation_time: spec.valuation_time,
                };
                wb = wb.max((basket_put_exact(&basket)?.value() - bs).abs());
                let rc = to_dimensionless(&spec)?;
                let u = reduced_exact_u(rc.x, rc.tau, &GeneralizedReducedParams::single(rc.k))?;
                wr = wr.max((spec.strike * u - bs).abs());
            }
            Ok((wb, wr))
        };
        match run() {
            Ok((b, r)) => vec![
                CheckResult::at_most("C5", basket_name, b, bound),
                CheckResult::at_most("C5", reduced_name, r, bound),
            ],
            Err(e) => vec![CheckResult::errored("C5", "degenerations", e)],
        }
    }

    /// Max |smoothed series - exact| over the vanilla sweep at each order 1..=6.
    pub fn hpm2_errors_by_order() -> Result<Vec<f64>> {
        (1..=TERM_COUNT)
            .map(|order| {
                let mut worst = 0.0f64;
                for i in 0..=200 {
                    let spec = fig1_spec(1.0 + 99.0 * i as f64 / 200.0);
                    let e = (price_single_hpm2(&spec, order)?.value() - bs_put(&spec)?.value()).abs();
                    worst = worst.max(e);
                }
                Ok(worst)
            })
            .collect()
    }

    /// C6: frozen order-6 error on the vanilla sweep and its decrease in order.
    pub fn hpm2_accuracy(&self) -> Vec<CheckResult> {
        match Self::hpm2_errors_by_order() {
            Ok(errs) => {
                let rise = errs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
                let listing = errs.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>().join(", ");
                vec![
                    CheckResult::at_most("C6", "vanilla series max error, order 6", errs[TERM_COUNT - 1], REGRESSION_SLACK * EPSILON_1),
                    CheckResult::at_most("C6", "largest rise of max error from order N to N+1", rise, 0.0)
                        .with_note(format!("orders 1..6: {listing}")),
                ]
            }
            Err(e) => vec![CheckResult::errored("C6", "vanilla series accuracy", e)],
        }
    }

    /// C7: the naive series has a slope jump at its kink; the smoothed one has
    /// a bounded, grid-convergent second difference at the strike.
    pub fn smoothness_contrast(&self) -> Vec<CheckResult> {
        let run = || -> Result<Vec<CheckResult>> {
            let rc = to_dimensionless(&fig1_spec(40.0))?;
            let kink = 40.0 * (-rc.k * rc.tau).exp();
            let h = 0.5;
            let p1 = |s: f64| price_single_hpm1(&fig1_spec(s)).map(|p| p.value());
            let left = p1(kink)? - p1(kink - h)?;
            let right = p1(kink + h)? - p1(kink)?;
            let jump = (right - left).abs();

            let p2 = |s: f64| price_single_hpm2(&fig1_spec(s), TERM_COUNT).map(|p| p.value());
            let d2 = |h: f64| -> Result<f64> { Ok((p2(40.0 + h)? - 2.0 * p2(40.0)? + p2(40.0 - h)?) / (h * h)) };
            let (a, b, c) = (d2(1.0)?, d2(0.5)?, d2(0.25)?);
            let ratio = (b - c).abs() / (a - b).abs();
            Ok(vec![
                CheckResult::at_least("C7", "naive series first-difference jump at kink (h = 0.5)", jump, 0.1),
                CheckResult::at_most("C7", "smoothed series |second difference| at strike", c.abs(), 1.0),
                CheckResult::at_most("C7", "second difference change ratio under halving h", if ratio.is_nan() { f64::INFINITY } else { ratio }, 0.5),
            ])
        };
        run().unwrap_or_else(|e| vec![CheckResult::errored("C7", "smoothness contrast", e)])
    }

    /// Max |series - exact| over the basket surface for a variant.
    pub fn basket_surface_error(variant: BasketVariant) -> Result<f64> {
        let axis = surface_axis();
        let mut worst = 0.0f64;
        for &s1 in &axis {
            for &s2 in &axis {
                let spec = fig3_spec(s1, s2);
                let e = (price_basket_hpm(&spec, TERM_COUNT, variant)?.value() - basket_put_exact(&spec)?.value()).abs();
                worst = worst.max(if e.is_nan() { f64::INFINITY } else { e });
            }
        }
        Ok(worst)
    }

    pub fn quanto_surface_error() -> Result<f64> {
        let axis = surface_axis();
        let mut worst = 0.0f64;
        for &s1 in &axis {
            for &s2 in &axis {
                let spec = fig5_spec(s1, s2);
                let e = (price_quanto_hpm(&spec, TERM_COUNT)?.value() - quanto_put_exact(&spec)?.value()).abs();
                worst = worst.max(if e.is_nan() { f64::INFINITY } else { e });
            }
        }
        Ok(worst)
    }

    /// C8: frozen surface errors, the uncorrected basket terms as a diagnostic,
    /// and monotonicity of the quanto price in the exchange rate.
    pub fn error_surfaces(&self) -> Vec<CheckResult> {
        let mut out = Vec::new();
        out.push(match Self::basket_surface_error(BasketVariant::Generalized) {
            Ok(m) => CheckResult::at_most("C8", "basket series max error on [20,60]^2", m, REGRESSION_SLACK * EPSILON_2),
            Err(e) => CheckResult::errored("C8", "basket series max error", e),
        });
        out.push(match Self::quanto_surface_error() {
            Ok(m) => CheckResult::at_most("C8", "quanto series max error on [20,60]^2", m, REGRESSION_SLACK * EPSILON_3),
            Err(e) => CheckResult::errored("C8", "quanto series max error", e),
        });
        let literal_status = match self.profile {
            Profile::Default => Status::Info,
            Profile::Strict => Status::Warn,
        };
        out.push(match Self::basket_surface_error(BasketVariant::Literal) {
            Ok(m) => CheckResult::at_most("C8", "uncorrected basket terms max error (diagnostic)", m, REGRESSION_SLACK * EPSILON_2)
                .soften(literal_status),
            Err(e) => CheckResult::errored("C8", "uncorrected basket terms max error", e).soften(literal_status),
        });

        let monotone = || -> Result<f64> {
            let axis = surface_axis();
            let mut violations = 0usize;
            for i in 0..10 {
                let s1 = 20.0 + 2.0 * i as f64;
                let mut prev = f64::NEG_INFINITY;
                for &s2 in &axis {
                    let p = quanto_put_exact(&fig5_spec(s1, s2))?.value();
                    if !(p > prev) {
                        violations += 1;
                    }
                    prev = p;
                }
            }
            Ok(violations as f64)
        };
        out.push(match monotone() {
            Ok(v) => CheckResult::at_most("C8", "quanto price increases with S2 for S1 < E (violations)", v, 0.0),
            Err(e) => CheckResult::errored("C8", "quanto monotonicity", e),
        });
        out
    }

    /// C9: normal CDF against quadrature and erf against its series.
    pub fn special_functions(&self) -> Vec<CheckResult> {
        let run = || -> Result<(f64, f64)> {
            let mut cdf = 0.0f64;
            for i in 0..=400 {
                let v = -8.0 + 16.0 * i as f64 / 400.0;
                cdf = cdf.max((normal_cdf(v)? - oracles::normal_cdf_quadrature(v)).abs());
            }
            let mut e = 0.0f64;
            for i in 0..=200 {
                let x = -1.0 + 2.0 * i as f64 / 200.0;
                e = e.max((erf(x)? - oracles::erf_series(x, 30)).abs());
            }
            Ok((cdf, e))
        };
        match run() {
            Ok((cdf, e)) => vec![
                CheckResult::at_most("C9", "normal CDF vs quadrature on [-8, 8]", cdf, self.tol(1e-15)),
                CheckResult::at_most("C9", "erf vs 30-term series on [-1, 1]", e, self.tol(1e-14)),
            ],
            Err(e) => vec![CheckResult::errored("C9", "special functions", e)],
        }
    }

    /// C10: the naive corrections sum to `e^{-k tau} - 1`.
    pub fn partial_sums(&self) -> Vec<CheckResult> {
        let worst = [0.1f64, 1.0, 2.0, 5.0]
            .iter()
            .map(|&kt| (naive_correction_sum(kt, 30) - ((-kt).exp() - 1.0)).abs())
            .fold(0.0, f64::max);
        vec![CheckResult::at_most("C10", "30-term correction sum vs e^{-k tau} - 1", worst, self.tol(1e-12))]
    }

    /// C11: tails of every term family at `z = ±12`.
    ///
    /// The left-tail check compares with the single leading power
    /// `-z^{n+1}/(n+1)!`, which omits lower-order polynomial pieces of the
    /// true asymptote; it is kept as stated and fails. The far-field check
    /// compares with the complete polynomial asymptote.
    pub fn boundary_asymptotics(&self) -> Vec<CheckResult> {
        let run = || -> Result<(f64, f64, f64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(1111);
            let mut families: Vec<(Box<dyn Fn(usize, f64) -> Result<f64>>, Option<(f64, f64)>)> = Vec::new();
            for _ in 0..2 {
                let p = GeneralizedReducedParams::new(uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
                let gen = self.generalized;
                families.push((Box::new(move |n, z| gen(n, z, &p)), Some((p.k1, p.k2))));
            }
            for _ in 0..2 {
                let k = uniform(&mut rng, 0.1, 3.0);
                families.push((Box::new(move |n, z| single_asset_term(n, z, k)), Some((k, k))));
            }
            let red = reduce_basket(&fig3_spec(40.0, 40.0))?;
            families.push((Box::new(move |n, z| basket_term_literal(n, z, &red, 0.05)), None));

            let (mut right, mut left, mut far) = (0.0f64, 0.0f64, 0.0f64);
            let nan_inf = |x: f64| if x.is_nan() { f64::INFINITY } else { x };
            for (f, ks) in &families {
                for n in 0..TERM_COUNT {
                    right = right.max(nan_inf(f(n, 12.0)?.abs()));
                    let lead = (-12.0f64).powi(n as i32 + 1) / oracles::factorial(n + 1);
                    let at = f(n, -12.0)?;
                    left = left.max(nan_inf((at + lead).abs()));
                    if let Some((k1, k2)) = ks {
                        far = far.max(nan_inf((at - oracles::far_field_term(n, -12.0, *k1, *k2)).abs()));
                    }
                }
            }
            Ok((right, left, far))
        };
        match run() {
            Ok((right, left, far)) => vec![
                CheckResult::at_most("C11", "|f_n(12)| over all families", right, self.tol(1e-12)),
                CheckResult::at_most("C11", "|f_n(-12) + (-12)^(n+1)/(n+1)!| over all families", left, self.tol(1e-8))
                    .with_note("leading power only; lower-order terms of the asymptote are not subtracted"),
                CheckResult::at_most("C11", "|f_n(-12) - full far-field polynomial|", far, self.tol(1e-8)),
            ],
            Err(e) => vec![CheckResult::errored("C11", "boundary asymptotics", e)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_render() {
        let c = CheckResult::at_most("C1", "x", 1e-13, 1e-12);
        assert_eq!(c.status, Status::Pass);
        assert!(c.line().starts_with("PASS C1 x: measured"));
        let f = CheckResult::at_least("C7", "y", 0.05, 0.1);
        assert_eq!(f.status, Status::Fail);
        assert_eq!(f.clone().soften(Status::Warn).status, Status::Warn);
        assert_eq!(CheckResult::at_most("C1", "z", f64::NAN, 1.0).status, Status::Fail);
    }

    #[test]
    fn mutation_breaks_residuals() {
        let v = Validator::default().with_generalized_terms(corrupted_phi2);
        let checks = v.recursion_residuals();
        assert_eq!(checks[0].status, Status::Fail, "{}", checks[0].line());
    }

    #[test]
    fn strict_profile_tightens() {
        let d = Validator::new(Profile::Default).partial_sums();
        let s = Validator::new(Profile::Strict).partial_sums();
        assert!((s[0].bound - d[0].bound / 10.0).abs() < 1e-30);
    }
}
