//! Numerical ground truth for the reduced equation
//! `u_tau = u_yy + (k1 - 1) u_y - k2 u`, `u(y, 0) = max(1 - e^y, 0)`,
//! and finite-difference residuals of the series recursion.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::exact::reduced_exact_u;
use crate::real::Real;
use crate::series::{GeneralizedTerms, SeriesTerms, TERM_COUNT};
use crate::transforms::GeneralizedReducedParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub y_min: T,
    pub y_max: T,
    /// Interior node count; the solution carries `ny + 2` nodes.
    pub ny: usize,
    pub n_steps: usize,
    /// 0 explicit, 1/2 Crank-Nicolson, 1 fully implicit.
    pub theta: T,
}

impl<T: Real> GridSpec<T> {
    pub fn crank_nicolson(y_min: T, y_max: T, ny: usize, n_steps: usize) -> Self {
        Self { y_min, y_max, ny, n_steps, theta: T::lit(0.5) }
    }

    /// Symmetric domain `[-half_width, half_width]`.
    pub fn symmetric(half_width: T, ny: usize, n_steps: usize) -> Self {
        Self::crank_nicolson(-half_width, half_width, ny, n_steps)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.y_min.is_finite() && self.y_max.is_finite()) {
            return Err(Error::Grid("bounds must be finite".into()));
        }
        if !(self.y_min < T::zero() && T::zero() < self.y_max) {
            return Err(Error::Grid(format!("need y_min < 0 < y_max, got [{}, {}]", self.y_min, self.y_max)));
        }
        if self.ny < 16 {
            return Err(Error::Grid(format!("ny = {} is below the minimum of 16", self.ny)));
        }
        if self.n_steps < 1 {
            return Err(Error::Grid("n_steps must be at least 1".into()));
        }
        if !(self.theta >= T::zero() && self.theta <= T::one()) {
            return Err(Error::Grid(format!("theta = {} outside [0, 1]", self.theta)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> T {
        (self.y_max - self.y_min) / T::count(self.ny + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryMode {
    /// Dirichlet values from the closed-form reduced solution.
    #[default]
    Exact,
    /// `e^{-k2 tau} - e^{y + (k1 - k2) tau}` at `y_min`, zero at `y_max`.
    PayoffAsymptote,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData<T> {
    Payoff,
    /// `u = c` everywhere, with boundaries following `c e^{-k2 tau}`.
    Constant(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeSolution<T> {
    pub grid: GridSpec<T>,
    pub params: GeneralizedReducedParams<T>,
    /// Node coordinates, boundary nodes included.
    pub nodes: Vec<T>,
    pub dtau: T,
    /// `values[m][i]` at `tau = m * dtau`, `y = nodes[i]`.
    pub values: Vec<Vec<T>>,
    /// Stability and positivity diagnostics; empty when nothing looked off.
    pub warnings: Vec<String>,
}

impl<T: Real> PdeSolution<T> {
    pub fn tau_final(&self) -> T {
        self.dtau * T::count(self.grid.n_steps)
    }

    pub fn final_row(&self) -> &[T] {
        &self.values[self.grid.n_steps]
    }

    /// Cubic Lagrange interpolation of time row `step` at `y`.
    pub fn value_at_step(&self, step: usize, y: T) -> Result<T> {
        let row = self
            .values
            .get(step)
            .ok_or_else(|| Error::Grid(format!("time step {step} out of range")))?;
        let n = self.nodes.len();
        let (lo, hi) = (self.nodes[0], self.nodes[n - 1]);
        if !(y >= lo && y <= hi) {
            return Err(Error::Grid(format!("y = {y} outside solved domain [{lo}, {hi}]")));
        }
        let h = self.nodes[1] - self.nodes[0];
        let pos = ((y - lo) / h).floor().to_usize().unwrap_or(0);
        let start = pos.saturating_sub(1).min(n - 4);
        let xs = &self.nodes[start..start + 4];
        let ys = &row[start..start + 4];
        let mut acc = T::zero();
        for i in 0..4 {
            let mut basis = T::one();
            for j in 0..4 {
                if i != j {
                    basis = basis * (y - xs[j]) / (xs[i] - xs[j]);
                }
            }
            acc = acc + basis * ys[i];
        }
        Ok(acc)
    }

    pub fn value_at(&self, y: T) -> Result<T> {
        self.value_at_step(self.grid.n_steps, y)
    }

    /// Long-format CSV dump with header `y,tau,u`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "y,tau,u")?;
        for (m, row) in self.values.iter().enumerate() {
            let tau = self.dtau * T::count(m);
            for (y, u) in self.nodes.iter().zip(row) {
                writeln!(out, "{:.11e},{:.11e},{:.11e}", y, tau, u)?;
            }
        }
        Ok(())
    }
}

/// Thomas algorithm for `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`
/// (`sub[0]` and `sup[n-1]` are ignored).
pub fn solve_tridiagonal<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n || n == 0 {
        return Err(Error::Grid("tridiagonal system has inconsistent lengths".into()));
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut denom = diag[0];
    if denom == T::zero() {
        return Err(Error::Grid("zero pivot in tridiagonal solve".into()));
    }
    c[0] = sup[0] / denom;
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i] * c[i - 1];
        if denom == T::zero() {
            return Err(Error::Grid("zero pivot in tridiagonal solve".into()));
        }
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    Ok(d)
}

/// Crank-Nicolson (or general theta) solve with exact Dirichlet boundaries.
pub fn cn_solve<T: Real>(
    params: &GeneralizedReducedParams<T>,
    tau_final: T,
    grid: &GridSpec<T>,
) -> Result<PdeSolution<T>> {
    cn_solve_with(params, tau_final, grid, BoundaryMode::Exact, InitialData::Payoff)
}

pub fn cn_solve_with<T: Real>(
    params: &GeneralizedReducedParams<T>,
    tau_final: T,
    grid: &GridSpec<T>,
    boundary: BoundaryMode,
    initial: InitialData<T>,
) -> Result<PdeSolution<T>> {
    params.validate()?;
    grid.validate()?;
    if !(tau_final.is_finite() && tau_final > T::zero()) {
        return Err(Error::Domain("tau_final must be positive and finite"));
    }
    let half = T::lit(0.5);
    let one = T::one();
    let (k1, k2) = (params.k1, params.k2);
    let h = grid.spacing();
    let total = grid.ny + 2;

    // shift so that y = 0 sits midway between two nodes
    let cells = -grid.y_min / h;
    let frac = cells - cells.floor();
    let offset = (frac - half) * h;
    let nodes: Vec<T> = (0..total).map(|i| grid.y_min + offset + T::count(i) * h).collect();

    let dtau = tau_final / T::count(grid.n_steps);
    let theta = grid.theta;

    let mut warnings = Vec::new();
    let mesh_ratio = dtau / (h * h);
    if theta < half && (one - T::lit(2.0) * theta) * mesh_ratio > half {
        warnings.push(format!("explicit part unstable: (1 - 2 theta) dtau/h^2 = {}", (one - T::lit(2.0) * theta) * mesh_ratio));
    }
    if theta == half && mesh_ratio > one {
        warnings.push(format!("dtau/h^2 = {mesh_ratio} may leave oscillations from the pay-off kink"));
    }
    let peclet = (k1 - one).abs() * h * half;
    if peclet > one {
        warnings.push(format!("cell Peclet number {peclet} > 1; central convection may oscillate"));
    }

    let boundary_value = |y: T, tau: T| -> Result<T> {
        match initial {
            InitialData::Constant(c) => Ok(c * (-k2 * tau).exp()),
            InitialData::Payoff => {
                if tau == T::zero() {
                    return Ok((one - y.exp()).max(T::zero()));
                }
                match boundary {
                    BoundaryMode::Exact => reduced_exact_u(y, tau, params),
                    BoundaryMode::PayoffAsymptote => {
                        if y < T::zero() {
                            Ok((-k2 * tau).exp() - (y + (k1 - k2) * tau).exp())
                        } else {
                            Ok(T::zero())
                        }
                    }
                }
            }
        }
    };

    let first: Vec<T> = match initial {
        InitialData::Payoff => nodes.iter().map(|&y| (one - y.exp()).max(T::zero())).collect(),
        InitialData::Constant(c) => vec![c; total],
    };

    // L u_i = lo u_{i-1} + mid u_i + up u_{i+1}
    let inv_h2 = one / (h * h);
    let conv = (k1 - one) / (T::lit(2.0) * h);
    let lo = inv_h2 - conv;
    let mid = -T::lit(2.0) * inv_h2 - k2;
    let up = inv_h2 + conv;

    let m = grid.ny;
    let imp = theta * dtau;
    let exp_w = (one - theta) * dtau;
    let sub = vec![-imp * lo; m];
    let diag = vec![one - imp * mid; m];
    let sup = vec![-imp * up; m];

    let mut values = Vec::with_capacity(grid.n_steps + 1);
    values.push(first);
    let mut rhs = vec![T::zero(); m];
    for step in 1..=grid.n_steps {
        let prev = &values[step - 1];
        let tau_new = dtau * T::count(step);
        let left_new = boundary_value(nodes[0], tau_new)?;
        let right_new = boundary_value(nodes[total - 1], tau_new)?;
        for i in 0..m {
            let j = i + 1;
            let lu = lo * prev[j - 1] + mid * prev[j] + up * prev[j + 1];
            rhs[i] = prev[j] + exp_w * lu;
        }
        rhs[0] = rhs[0] + imp * lo * left_new;
        rhs[m - 1] = rhs[m - 1] + imp * up * right_new;
        let interior = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;
        let mut row = Vec::with_capacity(total);
        row.push(left_new);
        row.extend(interior);
        row.push(right_new);
        values.push(row);
    }

    if let InitialData::Payoff = initial {
        let floor = -T::lit(1e-12);
        let min = values.iter().flatten().fold(T::infinity(), |a, &b| a.min(b));
        if min < floor {
            warnings.push(format!("solution dipped to {min}, below zero"));
        }
    }

    Ok(PdeSolution { grid: *grid, params: *params, nodes, dtau, values, warnings })
}

/// Central-difference estimate of the recursion residual of term `n`,
///
/// `R_n = 2 u_n,zz + z u_n,z - (w u_n)_w + 2(k1 - 1) w u_{n-1},z - 2 k2 w^2 u_{n-2}`,
///
/// with `u_n = f_n(z) w^n` taken from `terms`. Second order in `h`.
pub fn fd_residual_with<T: Real, S: SeriesTerms<T> + ?Sized>(
    terms: &S,
    term_index: usize,
    params: &GeneralizedReducedParams<T>,
    z: T,
    w: T,
    h: T,
) -> Result<T> {
    if term_index >= TERM_COUNT {
        return Err(Error::UnsupportedTerm { n: term_index });
    }
    if !(h > T::zero() && w > h) {
        return Err(Error::Domain("need 0 < h < w for the residual stencil"));
    }
    let two = T::lit(2.0);
    let n = term_index;
    let u = |idx: usize, zz: T, ww: T| -> Result<T> { Ok(terms.term(idx, zz)? * ww.powi(idx as i32)) };
    let c = u(n, z, w)?;
    let zp = u(n, z + h, w)?;
    let zm = u(n, z - h, w)?;
    let uzz = (zp - two * c + zm) / (h * h);
    let uz = (zp - zm) / (two * h);
    let dw = ((w + h) * u(n, z, w + h)? - (w - h) * u(n, z, w - h)?) / (two * h);
    let mut r = two * uzz + z * uz - dw;
    if n >= 1 {
        let prev_z = (u(n - 1, z + h, w)? - u(n - 1, z - h, w)?) / (two * h);
        r = r + two * (params.k1 - T::one()) * w * prev_z;
    }
    if n >= 2 {
        r = r - two * params.k2 * w * w * u(n - 2, z, w)?;
    }
    Ok(r)
}

/// [`fd_residual_with`] for the generalized terms.
pub fn fd_residual<T: Real>(
    term_index: usize,
    params: &GeneralizedReducedParams<T>,
    z: T,
    w: T,
    h: T,
) -> Result<T> {
    params.validate()?;
    fd_residual_with(&GeneralizedTerms(*params), term_index, params, z, w, h)
}

/// Two levels of Richardson extrapolation of the residual estimate over
/// steps `h`, `h/2`, `h/4`; the truncation error drops to `O(h^6)`, which
/// allows a step large enough to keep cancellation in the second
/// differences small.
pub fn richardson_residual<T: Real, S: SeriesTerms<T> + ?Sized>(
    terms: &S,
    term_index: usize,
    params: &GeneralizedReducedParams<T>,
    z: T,
    w: T,
    h: T,
) -> Result<T> {
    let half = T::lit(0.5);
    let r1 = fd_residual_with(terms, term_index, params, z, w, h)?;
    let r2 = fd_residual_with(terms, term_index, params, z, w, h * half)?;
    let r4 = fd_residual_with(terms, term_index, params, z, w, h * half * half)?;
    let three = T::lit(3.0);
    let a = (T::lit(4.0) * r2 - r1) / three;
    let b = (T::lit(4.0) * r4 - r2) / three;
    Ok((T::lit(16.0) * b - a) / T::lit(15.0))
}
