//! The ruling map `λ` and the horizontally ruled surface
//! `ρ(h, s) = (1 − h)·p1(s) + h·p2(λ(s))`.

use log::debug;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{zeta_report, BoundaryDatum, LenticularDomain, ZetaOptions, ZetaReport};
use crate::error::{Error, Gate, Result};
use crate::heisenberg::{horizontality_residual, HPoint, HVector};
use crate::roots;

/// Domain, datum and the derived `ζ` report, plus the root residual tolerance.
#[derive(Debug, Clone)]
pub struct PlateauProblem {
    domain: LenticularDomain,
    datum: BoundaryDatum,
    zeta: ZetaReport,
    tol: f64,
}

pub fn default_tol(t_bar: f64) -> f64 {
    1e-12 * (1.0 + t_bar)
}

impl PlateauProblem {
    pub fn new(domain: LenticularDomain, datum: BoundaryDatum) -> Result<Self> {
        Self::with_options(domain, datum, ZetaOptions::default(), None)
    }

    pub fn with_options(
        domain: LenticularDomain,
        datum: BoundaryDatum,
        zeta_opts: ZetaOptions,
        tol: Option<f64>,
    ) -> Result<Self> {
        for (name, f) in [("phi1", &datum.phi1), ("phi2", &datum.phi2)] {
            if (f.t_bar() - domain.t_bar()).abs() > 1e-15 * domain.t_bar() {
                return Err(Error::InvalidFunction(format!(
                    "{name} is defined on [0, {}] but t_bar = {}",
                    f.t_bar(),
                    domain.t_bar()
                )));
            }
        }
        let zeta = zeta_report(&domain, &datum, zeta_opts)?;
        let tol = tol.unwrap_or_else(|| default_tol(domain.t_bar()));
        if !(tol > 0.0) {
            return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { domain, datum, zeta, tol })
    }

    pub fn domain(&self) -> &LenticularDomain {
        &self.domain
    }

    pub fn datum(&self) -> &BoundaryDatum {
        &self.datum
    }

    pub fn zeta(&self) -> &ZetaReport {
        &self.zeta
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn t_bar(&self) -> f64 {
        self.domain.t_bar()
    }

    pub fn require(&self, gate: Gate) -> Result<()> {
        self.zeta.require(gate)
    }

    /// `Q_φ(s, λ) = λ − s + 2(γ2(λ) − γ1(s))(φ2(λ) + φ1(s))`.
    pub fn q_phi(&self, s: f64, lam: f64) -> f64 {
        let (g1, g2) = (self.domain.gamma1(), self.domain.gamma2());
        let (p1, p2) = (&self.datum.phi1, &self.datum.phi2);
        lam - s + 2.0 * (g2.value(lam) - g1.value(s)) * (p2.value(lam) + p1.value(s))
    }

    /// `(Q, ∂Q/∂λ, ∂Q/∂s)`.
    fn q_with_partials(&self, s: f64, lam: f64) -> (f64, f64, f64) {
        let (g1, g2) = (self.domain.gamma1(), self.domain.gamma2());
        let (p1, p2) = (&self.datum.phi1, &self.datum.phi2);
        let gap = g2.value(lam) - g1.value(s);
        let sum = p2.value(lam) + p1.value(s);
        let q = lam - s + 2.0 * gap * sum;
        let q_lam = 1.0 + 2.0 * g2.derivative(lam) * sum + 2.0 * gap * p2.derivative(lam);
        let q_s = -1.0 - 2.0 * g1.derivative(s) * sum + 2.0 * gap * p1.derivative(s);
        (q, q_lam, q_s)
    }

    fn check_param(&self, s: f64) -> Result<()> {
        let t_bar = self.t_bar();
        if s.is_finite() && (0.0..=t_bar).contains(&s) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { t: s, t_bar })
        }
    }

    /// `λ(s)`: the root of `Q_φ(s, ·)` on `[0, t̄]`, exact at the endpoints.
    pub fn solve_lambda_at(&self, s: f64) -> Result<f64> {
        self.require(Gate::Interp)?;
        self.check_param(s)?;
        let t_bar = self.t_bar();
        if s == 0.0 || s == t_bar {
            return Ok(s);
        }
        let q_lo = self.q_phi(s, 0.0);
        let q_hi = self.q_phi(s, t_bar);
        if q_lo >= 0.0 || q_hi <= 0.0 {
            return Err(Error::BracketFailure { s, q_lo, q_hi });
        }
        let root = roots::newton_bracketed(
            |lam| {
                let (q, q_lam, _) = self.q_with_partials(s, lam);
                (q, q_lam)
            },
            0.0,
            q_lo,
            t_bar,
            q_hi,
        )
        .map_err(|_| Error::BracketFailure { s, q_lo, q_hi })?;
        if root.fx.abs() > self.tol {
            return Err(Error::NoConvergence { what: format!("lambda({s})"), residual: root.fx.abs(), tol: self.tol });
        }
        Ok(root.x)
    }

    /// `λ(s)` and `λ′(s) = −∂_s Q / ∂_λ Q`.
    pub fn lambda_with_slope(&self, s: f64) -> Result<(f64, f64)> {
        let lam = self.solve_lambda_at(s)?;
        let (_, q_lam, q_s) = self.q_with_partials(s, lam);
        Ok((lam, -q_s / q_lam))
    }

    /// `λ⁻¹(t)`: the root in `s` of `Q_φ(s, t)`, which is decreasing in `s`.
    pub fn lambda_inverse(&self, t: f64) -> Result<f64> {
        self.require(Gate::Interp)?;
        self.check_param(t)?;
        let t_bar = self.t_bar();
        if t == 0.0 || t == t_bar {
            return Ok(t);
        }
        let q_lo = self.q_phi(0.0, t);
        let q_hi = self.q_phi(t_bar, t);
        let root = roots::newton_bracketed(
            |s| {
                let (q, _, q_s) = self.q_with_partials(s, t);
                (q, q_s)
            },
            0.0,
            q_lo,
            t_bar,
            q_hi,
        )
        .map_err(|_| Error::BracketFailure { s: t, q_lo, q_hi })?;
        if root.fx.abs() > self.tol {
            return Err(Error::NoConvergence {
                what: format!("lambda^-1({t})"),
                residual: root.fx.abs(),
                tol: self.tol,
            });
        }
        Ok(root.x)
    }

    /// `p1(s) = (φ1(s), γ1(s), s + 2γ1(s)φ1(s))`.
    pub fn p1(&self, s: f64) -> HPoint {
        let (x, y) = (self.datum.phi1.value(s), self.domain.gamma1().value(s));
        HPoint::new(x, y, s + 2.0 * y * x)
    }

    /// `p2(s) = (φ2(s), γ2(s), s + 2γ2(s)φ2(s))`.
    pub fn p2(&self, s: f64) -> HPoint {
        let (x, y) = (self.datum.phi2.value(s), self.domain.gamma2().value(s));
        HPoint::new(x, y, s + 2.0 * y * x)
    }

    /// `(ᾱ, β̄) = (φ2(λ) − φ1(s), γ2(λ) − γ1(s))` on the open interval.
    pub fn ruling_direction(&self, s: f64) -> Result<(f64, f64)> {
        let t_bar = self.t_bar();
        if !(s > 0.0 && s < t_bar) {
            return Err(Error::Precondition(format!("ruling direction needs 0 < s < {t_bar}, got {s}")));
        }
        let lam = self.solve_lambda_at(s)?;
        let dir = self.direction_given_lambda(s, lam);
        if !(dir.1 > 0.0) {
            return Err(Error::Consistency(format!("beta_bar = {} <= 0 at s = {s}", dir.1)));
        }
        Ok(dir)
    }

    pub(crate) fn direction_given_lambda(&self, s: f64, lam: f64) -> (f64, f64) {
        (
            self.datum.phi2.value(lam) - self.datum.phi1.value(s),
            self.domain.gamma2().value(lam) - self.domain.gamma1().value(s),
        )
    }

    /// `ρ(h, s)`.
    pub fn rho(&self, h: f64, s: f64) -> Result<HPoint> {
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::Precondition(format!("h = {h} outside [0, 1]")));
        }
        let lam = self.solve_lambda_at(s)?;
        Ok(self.p1(s).lerp(&self.p2(lam), h))
    }

    pub fn build_lambda_map(&self, n: usize) -> Result<LambdaMap> {
        LambdaMap::build(self, n)
    }
}

/// `λ` sampled on a uniform `s` grid with its discrete bi-Lipschitz certificate.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaMap {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Slope range over interior cells (the two endpoint cells are excluded).
    pub lip_lo: f64,
    pub lip_hi: f64,
    /// Slopes of the first and last cell, reported separately.
    pub endpoint_slopes: (f64, f64),
    pub residual_max: f64,
    pub zeta: f64,
    pub window: (f64, f64),
    pub eps_grid: f64,
    pub certified: bool,
}

impl LambdaMap {
    pub fn build(problem: &PlateauProblem, n: usize) -> Result<Self> {
        problem.require(Gate::Interp)?;
        if n < 16 {
            return Err(Error::Precondition(format!("lambda grid needs at least 16 nodes, got {n}")));
        }
        let t_bar = problem.t_bar();
        let grid = uniform_grid(t_bar, n);
        let values = grid.par_iter().map(|&s| problem.solve_lambda_at(s)).collect::<Result<Vec<_>>>()?;
        let residual_max = grid.iter().zip(&values).map(|(&s, &l)| problem.q_phi(s, l).abs()).fold(0.0, f64::max);
        let h = t_bar / (n - 1) as f64;
        let slopes: Vec<f64> =
            grid.windows(2).zip(values.windows(2)).map(|(s, l)| (l[1] - l[0]) / (s[1] - s[0])).collect();
        if let Some(i) = slopes.iter().position(|&k| !(k > 0.0)) {
            return Err(Error::Consistency(format!(
                "lambda not increasing on [{}, {}]: zeta may be underestimated",
                grid[i],
                grid[i + 1]
            )));
        }
        let interior = &slopes[1..slopes.len() - 1];
        let lip_lo = interior.iter().copied().fold(f64::INFINITY, f64::min);
        let lip_hi = interior.iter().copied().fold(0.0, f64::max);
        let window = problem.zeta().lambda_window();
        let eps_grid = 2.0 * problem.tol() / h;
        let certified = lip_lo >= window.0 - eps_grid && lip_hi <= window.1 + eps_grid;
        debug!("lambda map: n = {n}, slopes in [{lip_lo}, {lip_hi}], window {window:?}");
        Ok(Self {
            grid,
            values,
            lip_lo,
            lip_hi,
            endpoint_slopes: (slopes[0], slopes[slopes.len() - 1]),
            residual_max,
            zeta: problem.zeta().zeta,
            window,
            eps_grid,
            certified,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Slope range of `λ⁻¹` over interior cells.
    pub fn inverse_lip(&self) -> (f64, f64) {
        (1.0 / self.lip_hi, 1.0 / self.lip_lo)
    }

    pub fn endpoints_exact(&self) -> bool {
        self.values.first() == self.grid.first() && self.values.last() == self.grid.last()
    }

    pub fn strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }
}

/// `n` uniform nodes on `[0, t̄]` with both endpoints exact.
pub fn uniform_grid(t_bar: f64, n: usize) -> Vec<f64> {
    let h = t_bar / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { t_bar } else { i as f64 * h }).collect()
}

/// The ruled surface sampled on `h_j × s_i`.
#[derive(Debug, Clone, Serialize)]
pub struct RuledSurface {
    pub lambda: LambdaMap,
    pub p1: Vec<HPoint>,
    pub p2: Vec<HPoint>,
    /// `(ᾱ, β̄)` per `s` node; `(0, 0)` at the pinches.
    pub directions: Vec<(f64, f64)>,
    pub h_grid: Vec<f64>,
    /// `ρ(h_j, s_i)` at index `j·n_s + i`.
    pub mesh: Vec<HPoint>,
    pub horizontality_max: f64,
}

impl RuledSurface {
    pub fn build(problem: &PlateauProblem, n_s: usize, n_h: usize) -> Result<Self> {
        if n_h < 2 {
            return Err(Error::Precondition(format!("need at least 2 h nodes, got {n_h}")));
        }
        let lambda = LambdaMap::build(problem, n_s)?;
        let n_s = lambda.len();
        let p1: Vec<HPoint> = lambda.grid.iter().map(|&s| problem.p1(s)).collect();
        let p2: Vec<HPoint> = lambda.values.iter().map(|&l| problem.p2(l)).collect();
        let mut directions = Vec::with_capacity(n_s);
        for i in 0..n_s {
            if i == 0 || i == n_s - 1 {
                directions.push((0.0, 0.0));
                continue;
            }
            let d = problem.direction_given_lambda(lambda.grid[i], lambda.values[i]);
            if !(d.1 > 0.0) {
                return Err(Error::Consistency(format!("beta_bar = {} <= 0 at s = {}", d.1, lambda.grid[i])));
            }
            directions.push(d);
        }
        let h_grid = uniform_grid(1.0, n_h);
        let mut mesh = Vec::with_capacity(n_h * n_s);
        for &h in &h_grid {
            for i in 0..n_s {
                mesh.push(p1[i].lerp(&p2[i], h));
            }
        }
        let mut surface = Self { lambda, p1, p2, directions, h_grid, mesh, horizontality_max: 0.0 };
        surface.horizontality_max = surface.horizontality_at(&surface.h_grid.clone());
        Ok(surface)
    }

    pub fn n_s(&self) -> usize {
        self.lambda.len()
    }

    pub fn n_h(&self) -> usize {
        self.h_grid.len()
    }

    pub fn vertex(&self, j: usize, i: usize) -> HPoint {
        self.mesh[j * self.n_s() + i]
    }

    pub fn chord(&self, i: usize) -> HVector {
        self.p2[i].sub(&self.p1[i])
    }

    /// Max over `s` nodes and the given `h` of the Cartesian horizontality
    /// residual of the ruling chord at `ρ(h, s)`.
    pub fn horizontality_at(&self, hs: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n_s() {
            let v = self.chord(i);
            for &h in hs {
                let p = self.p1[i].lerp(&self.p2[i], h);
                worst = worst.max(horizontality_residual(p, v).abs());
            }
        }
        worst
    }

    /// Largest distance of a boundary mesh node from the boundary lifts.
    pub fn boundary_mismatch(&self) -> f64 {
        let n = self.n_s();
        let last = self.n_h() - 1;
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max(self.vertex(0, i).max_dist(&self.p1[i]));
            worst = worst.max(self.vertex(last, i).max_dist(&self.p2[i]));
        }
        for j in 0..self.n_h() {
            worst = worst.max(self.vertex(j, 0).max_dist(&self.p1[0]));
            worst = worst.max(self.vertex(j, n - 1).max_dist(&self.p1[n - 1]));
        }
        worst
    }
}
