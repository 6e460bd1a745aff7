//! Inversion of the projections `F = π∘ρ` and `G = π^r∘ρ`: the ruled surface
//! as a left intrinsic graph `u` on `D` and a right intrinsic graph `u^r` on `D^r`.
//!
//! Along a slice `{y = const}` the ruling parameter is `h_y(s)`, and the
//! slice is swept monotonically by `τ_y(s)` (left) or `τ̃_y(s) = τ_y(s) + 4y·ρ1`
//! (right), so every sample is a one-dimensional bracketed root solve.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Gate, Result};
use crate::heisenberg::{project_left, project_right, WPoint};
use crate::roots;
use crate::ruling::PlateauProblem;

/// `J_y` together with the slice `D_y` it sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JInterval {
    pub s_lo: f64,
    pub s_hi: f64,
    /// `τ_y(s_lo)`, `τ_y(s_hi)`: the endpoints of `D_y`.
    pub t_lo: f64,
    pub t_hi: f64,
    /// `y` is the extreme value of `γ1` or `γ2`: `J_y` degenerates to a point.
    pub at_extremum: bool,
}

/// Ruling quantities along a slice at one `s`, with `s`-derivatives.
#[derive(Debug, Clone, Copy)]
struct Profile {
    h: f64,
    tau: f64,
    dtau: f64,
    rho1: f64,
    drho1: f64,
}

/// Result of inverting a projection at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inversion {
    pub h: f64,
    pub s: f64,
    pub u: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl PlateauProblem {
    /// `h_y(s) = (y − γ1(s)) / (γ2(λ(s)) − γ1(s))` for `s ∈ J_y`.
    pub fn h_y(&self, s: f64, y: f64) -> Result<f64> {
        let lam = self.solve_lambda_at(s)?;
        let g1 = self.domain().gamma1().value(s);
        let g2 = self.domain().gamma2().value(lam);
        if !(g1 < y && y < g2) {
            return Err(Error::Precondition(format!("s = {s} is not in J_y for y = {y}")));
        }
        Ok((y - g1) / (g2 - g1))
    }

    /// `J_y = {s : γ1(s) < y < γ2(λ(s))}`.
    pub fn interval_j_y(&self, y: f64) -> Result<JInterval> {
        let d = self.domain();
        let slice = d.slice(y)?;
        let at_extremum = slice.is_empty();
        let (s_lo, s_hi) = if y <= 0.0 {
            (slice.lo, slice.hi)
        } else {
            (self.lambda_inverse(slice.lo)?, self.lambda_inverse(slice.hi)?)
        };
        Ok(JInterval { s_lo, s_hi, t_lo: slice.lo, t_hi: slice.hi, at_extremum })
    }

    /// `τ_y(s) = (1 − h)s + hλ(s) + 2h(1 − h)E(s)`, `E = (γ2(λ) − γ1)(φ2(λ) − φ1)`.
    pub fn tau_y(&self, s: f64, y: f64) -> Result<f64> {
        self.h_y(s, y)?;
        Ok(self.profile(s, y)?.tau)
    }

    /// `τ̃_y(s) = τ_y(s) + 4y·ρ1(h_y(s), s)`, the `t`-coordinate of `G = π^r∘ρ`.
    pub fn tau_tilde_y(&self, s: f64, y: f64) -> Result<f64> {
        self.h_y(s, y)?;
        let p = self.profile(s, y)?;
        Ok(p.tau + 4.0 * y * p.rho1)
    }

    fn profile(&self, s: f64, y: f64) -> Result<Profile> {
        let (lam, dlam) = self.lambda_with_slope(s)?;
        let (g1f, g2f) = (self.domain().gamma1(), self.domain().gamma2());
        let (p1f, p2f) = (&self.datum().phi1, &self.datum().phi2);
        let (g1, dg1) = (g1f.value(s), g1f.derivative(s));
        let (g2, dg2) = (g2f.value(lam), g2f.derivative(lam) * dlam);
        let (p1, dp1) = (p1f.value(s), p1f.derivative(s));
        let (p2, dp2) = (p2f.value(lam), p2f.derivative(lam) * dlam);
        let gap = g2 - g1;
        let dgap = dg2 - dg1;
        let h = (y - g1) / gap;
        let dh = (-dg1 - h * dgap) / gap;
        let e = gap * (p2 - p1);
        let de = dgap * (p2 - p1) + gap * (dp2 - dp1);
        let tau = (1.0 - h) * s + h * lam + 2.0 * h * (1.0 - h) * e;
        let dtau = (1.0 - h) + h * dlam + dh * (lam - s) + 2.0 * dh * (1.0 - 2.0 * h) * e + 2.0 * h * (1.0 - h) * de;
        let rho1 = (1.0 - h) * p1 + h * p2;
        let drho1 = dh * (p2 - p1) + (1.0 - h) * dp1 + h * dp2;
        Ok(Profile { h, tau, dtau, rho1, drho1 })
    }

    /// Ruling data at an endpoint of `J_y`, where the ruling meets `∂D`.
    fn endpoint(&self, y: f64, s: f64, t: f64) -> Inversion {
        // y < 0: the lower boundary (h = 0); y > 0: the upper one (h = 1);
        // y = 0: a pinch, where every h gives the same point.
        let h = if y > 0.0 { 1.0 } else { 0.0 };
        Inversion { h, s, u: self.datum().at_boundary(y, t), residual: 0.0 }
    }

    /// `F⁻¹`: the ruling `(h, s)` through `(y, t) ∈ D̄` and `u(y, t) = ρ1(h, s)`.
    pub fn invert_left(&self, y: f64, t: f64) -> Result<Inversion> {
        self.require(Gate::Left)?;
        self.invert(y, t, Side::Left)
    }

    /// `G⁻¹`: the ruling through `(η, τ) ∈ D^r` and `u^r(η, τ) = ρ1(h, s)`.
    pub fn invert_right(&self, eta: f64, tau: f64) -> Result<Inversion> {
        self.require(Gate::Right)?;
        self.invert(eta, tau, Side::Right)
    }

    fn invert(&self, y: f64, target: f64, side: Side) -> Result<Inversion> {
        let j = self.interval_j_y(y).map_err(|_| Error::PointOutsideDomain { y, t: target })?;
        let (lo, hi) = match side {
            Side::Left => (j.t_lo, j.t_hi),
            Side::Right => {
                let d = self.datum();
                (j.t_lo + 4.0 * y * d.at_boundary(y, j.t_lo), j.t_hi + 4.0 * y * d.at_boundary(y, j.t_hi))
            }
        };
        let slack = self.tol();
        if !(target >= lo - slack && target <= hi + slack) {
            return Err(Error::PointOutsideDomain { y, t: target });
        }
        if target <= lo || j.at_extremum {
            return Ok(self.endpoint(y, j.s_lo, j.t_lo));
        }
        if target >= hi {
            return Ok(self.endpoint(y, j.s_hi, j.t_hi));
        }
        let eval = |s: f64| -> (f64, f64) {
            match self.profile(s, y) {
                Ok(p) => match side {
                    Side::Left => (p.tau - target, p.dtau),
                    Side::Right => (p.tau + 4.0 * y * p.rho1 - target, p.dtau + 4.0 * y * p.drho1),
                },
                Err(_) => (f64::NAN, f64::NAN),
            }
        };
        let root = roots::newton_bracketed(eval, j.s_lo, lo - target, j.s_hi, hi - target)
            .map_err(|_| Error::PointOutsideDomain { y, t: target })?;
        if root.x <= j.s_lo || root.x >= j.s_hi {
            let (s, t) = if root.x <= j.s_lo { (j.s_lo, j.t_lo) } else { (j.s_hi, j.t_hi) };
            let mut e = self.endpoint(y, s, t);
            e.residual = root.fx.abs();
            return Ok(e);
        }
        let p = self.profile(root.x, y)?;
        let residual = root.fx.abs();
        if !(residual <= self.tol()) {
            return Err(Error::NoConvergence {
                what: format!("{side:?} inversion at ({y}, {target})"),
                residual,
                tol: self.tol(),
            });
        }
        Ok(Inversion { h: p.h, s: root.x, u: p.rho1, residual })
    }
}

/// A y-major grid on a domain given by per-row intervals: row `i` at
/// `ys[i]` carries `n_t` nodes `t = lo + σ(hi − lo)`, `σ` uniform on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappedGrid {
    pub ys: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub n_t: usize,
    /// Index of the `y = 0` row, where the slice endpoints have a kink.
    pub zero_row: Option<usize>,
    /// `Y_D`; the tips themselves are not rows.
    pub y_range: (f64, f64),
}

impl MappedGrid {
    /// `n_y` rows on `(y_min, y_max)` with `y = 0` as a row; each side uniform.
    pub fn rows(y_min: f64, y_max: f64, n_y: usize) -> (Vec<f64>, Option<usize>) {
        let n_y = n_y.max(3);
        let k_neg = (n_y - 1) / 2;
        let k_pos = n_y - 1 - k_neg;
        let dn = -y_min / (k_neg + 1) as f64;
        let dp = y_max / (k_pos + 1) as f64;
        let mut ys: Vec<f64> = (1..=k_neg).rev().map(|m| -(m as f64) * dn).collect();
        ys.push(0.0);
        ys.extend((1..=k_pos).map(|m| m as f64 * dp));
        (ys, Some(k_neg))
    }

    pub fn n_y(&self) -> usize {
        self.ys.len()
    }

    pub fn len(&self) -> usize {
        self.ys.len() * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_t + j
    }

    pub fn sigma(&self, j: usize) -> f64 {
        if j == self.n_t - 1 {
            1.0
        } else {
            j as f64 / (self.n_t - 1) as f64
        }
    }

    pub fn t_at(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = self.intervals[i];
        if j == 0 {
            lo
        } else if j == self.n_t - 1 {
            hi
        } else {
            lo + self.sigma(j) * (hi - lo)
        }
    }

    pub fn node(&self, k: usize) -> (f64, f64) {
        let (i, j) = (k / self.n_t, k % self.n_t);
        (self.ys[i], self.t_at(i, j))
    }

    pub fn is_boundary(&self, k: usize) -> bool {
        let j = k % self.n_t;
        j == 0 || j == self.n_t - 1
    }

    /// Rows `i, i + 1` bracketing `y` and the blend weight of row `i + 1`.
    fn bracket_rows(&self, y: f64) -> Option<(usize, f64)> {
        let n = self.ys.len();
        if n < 2 || !(y >= self.ys[0] && y <= self.ys[n - 1]) {
            return None;
        }
        let i = self.ys.partition_point(|&v| v <= y).clamp(1, n - 1) - 1;
        let w = (y - self.ys[i]) / (self.ys[i + 1] - self.ys[i]);
        Some((i, w))
    }

    /// Linear interpolation of row `i`'s values at `t` (σ clamped to `[0, 1]`).
    fn interp_row(&self, values: &[f64], i: usize, t: f64) -> f64 {
        let (lo, hi) = self.intervals[i];
        let sigma = if hi > lo { ((t - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.0 };
        let x = sigma * (self.n_t - 1) as f64;
        let j = (x.floor() as usize).min(self.n_t - 2);
        let w = x - j as f64;
        let row = &values[i * self.n_t..(i + 1) * self.n_t];
        (1.0 - w) * row[j] + w * row[j + 1]
    }

    /// Bilinear interpolation in `(y, σ)`; `None` outside the row range.
    pub fn interpolate(&self, values: &[f64], y: f64, t: f64) -> Option<f64> {
        let (i, w) = self.bracket_rows(y)?;
        let a = self.interp_row(values, i, t);
        let b = self.interp_row(values, i + 1, t);
        Some((1.0 - w) * a + w * b)
    }

    /// Whether `(y, t)` lies between the interpolated row intervals, inset by
    /// `inset` cells of the local row spacing.
    pub fn contains(&self, y: f64, t: f64, inset: f64) -> bool {
        let Some((i, w)) = self.bracket_rows(y) else {
            return false;
        };
        let (a, b) = (self.intervals[i], self.intervals[i + 1]);
        let lo = (1.0 - w) * a.0 + w * b.0;
        let hi = (1.0 - w) * a.1 + w * b.1;
        let cell = (hi - lo) / (self.n_t - 1) as f64;
        t > lo + inset * cell && t < hi - inset * cell
    }
}

/// Samples of a graph function on a [`MappedGrid`].
#[derive(Debug, Clone, Serialize)]
pub struct GraphFunction {
    pub side: Side,
    pub grid: MappedGrid,
    pub values: Vec<f64>,
    /// Ruling parameters `(h, s)` per node, when the samples come from the surface.
    pub params: Option<Vec<(f64, f64)>>,
    /// `max |u − φ|` over boundary nodes.
    pub boundary_residual: f64,
    /// Largest difference quotient over grid-neighbour pairs.
    pub lip_estimate: f64,
    /// Largest inversion residual over all nodes.
    pub residual_max: f64,
}

impl GraphFunction {
    /// Wraps plain samples (e.g. a competitor) with no ruling parameters.
    pub fn from_values(side: Side, grid: MappedGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Precondition(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Consistency(format!("non-finite value at node {k}")));
        }
        let lip_estimate = lipschitz_estimate(&grid, &values);
        Ok(Self { side, grid, values, params: None, boundary_residual: f64::NAN, lip_estimate, residual_max: 0.0 })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn interpolate(&self, y: f64, t: f64) -> Option<f64> {
        self.grid.interpolate(&self.values, y, t)
    }

    /// `(y, t, u)` triples in grid order.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.grid.len()).map(|k| {
            let (y, t) = self.grid.node(k);
            (y, t, self.values[k])
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn lipschitz_estimate(grid: &MappedGrid, values: &[f64]) -> f64 {
    let mut lip = 0.0f64;
    for k in 0..grid.len() {
        let (y, t) = grid.node(k);
        let (i, j) = (k / grid.n_t, k % grid.n_t);
        let mut nbrs = Vec::with_capacity(2);
        if j + 1 < grid.n_t {
            nbrs.push(grid.index(i, j + 1));
        }
        if i + 1 < grid.n_y() {
            nbrs.push(grid.index(i + 1, j));
        }
        for n in nbrs {
            let (y2, t2) = grid.node(n);
            let dist = (y2 - y).hypot(t2 - t);
            if dist > 0.0 {
                lip = lip.max((values[n] - values[k]).abs() / dist);
            }
        }
    }
    lip
}

fn sample_graph(problem: &PlateauProblem, grid: MappedGrid, side: Side) -> Result<GraphFunction> {
    let inv: Vec<Inversion> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (y, t) = grid.node(k);
            match side {
                Side::Left => problem.invert_left(y, t),
                Side::Right => problem.invert_right(y, t),
            }
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = inv.iter().map(|v| v.u).collect();
    let params = inv.iter().map(|v| (v.h, v.s)).collect();
    let residual_max = inv.iter().fold(0.0f64, |m, v| m.max(v.residual));
    let datum = problem.datum();
    let mut boundary_residual = 0.0f64;
    for (i, &y) in grid.ys.iter().enumerate() {
        let (lo, hi) = problem.domain().slice(y)?.into();
        for (j, t) in [(0, lo), (grid.n_t - 1, hi)] {
            let k = grid.index(i, j);
            boundary_residual = boundary_residual.max((values[k] - datum.at_boundary(y, t)).abs());
        }
    }
    let lip_estimate = lipschitz_estimate(&grid, &values);
    Ok(GraphFunction { side, grid, values, params: Some(params), boundary_residual, lip_estimate, residual_max })
}

impl From<crate::domain::Slice> for (f64, f64) {
    fn from(s: crate::domain::Slice) -> Self {
        (s.lo, s.hi)
    }
}

/// `u` on an `n_y × n_t` mapped grid of `D`.
pub fn left_graph(problem: &PlateauProblem, n_y: usize, n_t: usize) -> Result<GraphFunction> {
    problem.require(Gate::Left)?;
    if n_t < 3 {
        return Err(Error::Precondition(format!("need at least 3 nodes per row, got {n_t}")));
    }
    let d = problem.domain();
    let (ys, zero_row) = MappedGrid::rows(d.y_min(), d.y_max(), n_y);
    let intervals = ys.iter().map(|&y| d.slice(y).map(Into::into)).collect::<Result<Vec<_>>>()?;
    let grid = MappedGrid { ys, intervals, n_t, zero_row, y_range: (d.y_min(), d.y_max()) };
    sample_graph(problem, grid, Side::Left)
}

/// `t ↦ β^v_y(t) = t + 4y·v(y, t)`.
#[derive(Debug, Clone, Copy)]
pub struct BetaCurve<'a> {
    pub v: &'a GraphFunction,
    pub y: f64,
}

pub fn beta_curve(v: &GraphFunction, y: f64) -> BetaCurve<'_> {
    BetaCurve { v, y }
}

impl BetaCurve<'_> {
    pub fn eval(&self, t: f64) -> Option<f64> {
        Some(t + 4.0 * self.y * self.v.interpolate(self.y, t)?)
    }

    /// Smallest discrete slope along `v`'s row at `y` (interpolated between rows).
    pub fn min_slope(&self) -> f64 {
        let g = &self.v.grid;
        if let Some(i) = g.ys.iter().position(|&r| r == self.y) {
            return row_min_beta_slope(self.v, i);
        }
        let Some((i, w)) = g.bracket_rows(self.y) else {
            return f64::NAN;
        };
        let (a, b) = (g.intervals[i], g.intervals[i + 1]);
        let lo = (1.0 - w) * a.0 + w * b.0;
        let hi = (1.0 - w) * a.1 + w * b.1;
        let n = g.n_t;
        let ts: Vec<f64> = (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect();
        let bs: Vec<f64> = ts.iter().map(|&t| self.eval(t).unwrap_or(f64::NAN)).collect();
        (0..n - 1).map(|j| (bs[j + 1] - bs[j]) / (ts[j + 1] - ts[j])).fold(f64::INFINITY, f64::min)
    }
}

/// Minimal discrete slope of `β^v_y` along row `i`.
pub fn row_min_beta_slope(v: &GraphFunction, i: usize) -> f64 {
    let g = &v.grid;
    let y = g.ys[i];
    let mut m = f64::INFINITY;
    for j in 0..g.n_t - 1 {
        let (t0, t1) = (g.t_at(i, j), g.t_at(i, j + 1));
        if t1 > t0 {
            let slope = 1.0 + 4.0 * y * (v.value(i, j + 1) - v.value(i, j)) / (t1 - t0);
            m = m.min(slope);
        }
    }
    m
}

/// `D^r` as per-row intervals `(β^u_y(t_y^−), β^u_y(t_y^+))`.
#[derive(Debug, Clone, Serialize)]
pub struct RightDomainTable {
    pub ys: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub zero_row: Option<usize>,
    pub y_range: (f64, f64),
    /// Smallest discrete slope of `β^u_y` over all rows.
    pub min_beta_slope: f64,
}

impl RightDomainTable {
    pub fn grid(&self, n_t: usize) -> MappedGrid {
        MappedGrid {
            ys: self.ys.clone(),
            intervals: self.intervals.clone(),
            n_t,
            zero_row: self.zero_row,
            y_range: self.y_range,
        }
    }

    /// Membership with an inset of `inset` cells of an `n_t`-node row.
    pub fn contains(&self, eta: f64, tau: f64, n_t: usize, inset: f64) -> bool {
        self.grid(n_t.max(2)).contains(eta, tau, inset)
    }
}

pub fn right_domain(problem: &PlateauProblem, u: &GraphFunction) -> Result<RightDomainTable> {
    if u.side != Side::Left {
        return Err(Error::Precondition("right domain is built from the left graph".into()));
    }
    let g = &u.grid;
    let min_beta_slope = (0..g.n_y()).map(|i| row_min_beta_slope(u, i)).fold(f64::INFINITY, f64::min);
    if !(min_beta_slope > 0.0) {
        return Err(Error::GateViolated { gate: Gate::Right, zeta: problem.zeta().zeta });
    }
    let datum = problem.datum();
    let intervals =
        g.ys.iter()
            .zip(&g.intervals)
            .map(|(&y, &(lo, hi))| (lo + 4.0 * y * datum.at_boundary(y, lo), hi + 4.0 * y * datum.at_boundary(y, hi)))
            .collect();
    Ok(RightDomainTable { ys: g.ys.clone(), intervals, zero_row: g.zero_row, y_range: g.y_range, min_beta_slope })
}

/// `u^r` on the rows of `table` with `n_t` nodes per row.
pub fn right_graph(problem: &PlateauProblem, table: &RightDomainTable, n_t: usize) -> Result<GraphFunction> {
    problem.require(Gate::Right)?;
    if n_t < 3 {
        return Err(Error::Precondition(format!("need at least 3 nodes per row, got {n_t}")));
    }
    sample_graph(problem, table.grid(n_t), Side::Right)
}

/// Worst disagreement, over interior nodes of `u`, between the left-graph
/// point `Φ_u(y, t)` and the right graph through its `π^r` image.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RoundTrip {
    /// `max |π(lift) − (y, t)|`.
    pub left_identity: f64,
    /// `max |u^r(π^r(p)) − u(y, t)|`.
    pub value: f64,
    /// `max |s_right − s_left|`.
    pub param: f64,
    pub samples: usize,
}

pub fn round_trip(problem: &PlateauProblem, u: &GraphFunction) -> Result<RoundTrip> {
    let params = u.params.as_ref().ok_or_else(|| Error::Precondition("round trip needs ruling parameters".into()))?;
    let g = &u.grid;
    let ks: Vec<usize> = (0..g.len()).filter(|&k| !g.is_boundary(k)).collect();
    let rows: Vec<(f64, f64, f64)> = ks
        .par_iter()
        .map(|&k| {
            let (y, t) = g.node(k);
            let p = crate::heisenberg::lift_left(WPoint::new(y, t), u.values[k]);
            let back = project_left(p);
            let w = project_right(p);
            let r = problem.invert_right(w.y, w.t)?;
            Ok(((back.y - y).abs().max((back.t - t).abs()), (r.u - u.values[k]).abs(), (r.s - params[k].1).abs()))
        })
        .collect::<Result<_>>()?;
    let mut out = RoundTrip { left_identity: 0.0, value: 0.0, param: 0.0, samples: rows.len() };
    for (a, b, c) in rows {
        out.left_identity = out.left_identity.max(a);
        out.value = out.value.max(b);
        out.param = out.param.max(c);
    }
    Ok(out)
}

/// Discrete slope floors of `τ_y` and `τ̃_y` over the interior of every row,
/// sampled at `n` uniform points of `J_y`.
pub fn tau_slope_minima(problem: &PlateauProblem, ys: &[f64], n: usize) -> Result<(f64, f64)> {
    let per_row: Vec<(f64, f64)> = ys
        .par_iter()
        .map(|&y| {
            let j = problem.interval_j_y(y)?;
            if j.at_extremum {
                return Ok((f64::INFINITY, f64::INFINITY));
            }
            let ss: Vec<f64> = (1..n).map(|k| j.s_lo + (j.s_hi - j.s_lo) * k as f64 / n as f64).collect();
            let taus = ss.iter().map(|&s| problem.tau_y(s, y)).collect::<Result<Vec<_>>>()?;
            let tildes = ss.iter().map(|&s| problem.tau_tilde_y(s, y)).collect::<Result<Vec<_>>>()?;
            let slope = |v: &[f64]| {
                (0..ss.len() - 1).map(|k| (v[k + 1] - v[k]) / (ss[k + 1] - ss[k])).fold(f64::INFINITY, f64::min)
            };
            Ok((slope(&taus), slope(&tildes)))
        })
        .collect::<Result<_>>()?;
    Ok(per_row.iter().fold((f64::INFINITY, f64::INFINITY), |(a, b), &(x, y)| (a.min(x), b.min(y))))
}

/// Whether distinct nodes of `u` come from distinct rulings and each
/// node's ruling projects back onto it: a sampled injectivity witness for `F`.
pub fn injectivity_witness(problem: &PlateauProblem, u: &GraphFunction) -> Result<bool> {
    let params = u.params.as_ref().ok_or_else(|| Error::Precondition("injectivity needs ruling parameters".into()))?;
    let g = &u.grid;
    let dy = g.ys.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    for (k, &(h, s)) in params.iter().enumerate() {
        let (y, t) = g.node(k);
        if g.is_boundary(k) && (s == 0.0 || s == problem.t_bar()) {
            continue;
        }
        let w = project_left(problem.rho(h, s)?);
        if (w.y - y).abs() > 0.5 * dy || (w.t - t).abs() > 1e-9 {
            return Ok(false);
        }
    }
    let mut sorted: Vec<(f64, f64)> = params.clone();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));
    let interior_dupes = sorted.windows(2).filter(|w| w[0] == w[1] && w[0].1 > 0.0 && w[0].1 < problem.t_bar()).count();
    Ok(interior_dupes == 0)
}
