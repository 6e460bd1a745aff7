//! The calibration `ω = λ̄(π^r p) X + μ̄(π^r p) Y`, stored on `D^r`.
//!
//! `(λ̄, μ̄) = (β, −α)` where `(α, β)` is the unit ruling direction of the
//! ruling through the point; the field is constant along `X^r` fibres, so a
//! table on `D^r` plus the `π^r` lookup is the whole object.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphFunction, RightDomainTable};
use crate::heisenberg::{lift_left, project_right, HPoint, WPoint};
use crate::numerics::diff_weights3;
use crate::ruling::PlateauProblem;

/// `ν_{E_u} = β X − α Y` in frame components, with `(α, β)` the normalised
/// ruling direction at `s`.
pub fn normal_at(problem: &PlateauProblem, s: f64) -> Result<(f64, f64)> {
    let (a, b) = problem.ruling_direction(s)?;
    let n = a.hypot(b);
    if !(n > 0.0) {
        return Err(Error::Consistency(format!("degenerate ruling at s = {s}")));
    }
    Ok((b / n, -a / n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub eta: (f64, f64),
    pub tau: (f64, f64),
}

/// Largest axis-parallel rectangle whose rows all fit inside the table.
pub fn inscribed_rect(table: &RightDomainTable) -> Option<Rect> {
    let n = table.ys.len();
    let mut best: Option<(f64, Rect)> = None;
    for i in 0..n {
        let (mut lo, mut hi) = table.intervals[i];
        for k in i + 1..n {
            lo = lo.max(table.intervals[k].0);
            hi = hi.min(table.intervals[k].1);
            if hi <= lo {
                break;
            }
            let area = (table.ys[k] - table.ys[i]) * (hi - lo);
            if best.as_ref().is_none_or(|b| area > b.0) {
                best = Some((area, Rect { eta: (table.ys[i], table.ys[k]), tau: (lo, hi) }));
            }
        }
    }
    best.map(|b| b.1)
}

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationField {
    pub rect: Rect,
    pub etas: Vec<f64>,
    pub taus: Vec<f64>,
    /// Node `(i, j)` at index `i·n_tau + j`.
    pub lambda_bar: Vec<f64>,
    pub mu_bar: Vec<f64>,
    /// Ruling parameter of each node.
    pub s: Vec<f64>,
    /// Fault injection: added to every `μ̄` the field reports.
    pub mu_bar_offset: f64,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect()
}

impl CalibrationField {
    /// Samples the field on an `n × n` grid of the rectangle inscribed in
    /// `D^r`, shrunk by one cell on every side.
    pub fn build(problem: &PlateauProblem, table: &RightDomainTable, n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::Precondition(format!("calibration grid needs at least 5 nodes, got {n}")));
        }
        let r =
            inscribed_rect(table).ok_or_else(|| Error::Consistency("right domain has no interior rectangle".into()))?;
        let ce = (r.eta.1 - r.eta.0) / (n - 1) as f64;
        let ct = (r.tau.1 - r.tau.0) / (n - 1) as f64;
        let rect = Rect { eta: (r.eta.0 + ce, r.eta.1 - ce), tau: (r.tau.0 + ct, r.tau.1 - ct) };
        let etas = linspace(rect.eta.0, rect.eta.1, n);
        let taus = linspace(rect.tau.0, rect.tau.1, n);
        let nodes: Vec<(f64, f64, f64)> = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (eta, tau) = (etas[k / n], taus[k % n]);
                let inv = problem.invert_right(eta, tau)?;
                let (l, m) = normal_at(problem, inv.s)?;
                Ok((l, m, inv.s))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            rect,
            etas,
            taus,
            lambda_bar: nodes.iter().map(|v| v.0).collect(),
            mu_bar: nodes.iter().map(|v| v.1).collect(),
            s: nodes.iter().map(|v| v.2).collect(),
            mu_bar_offset: 0.0,
        })
    }

    pub fn with_mu_bar_offset(mut self, offset: f64) -> Self {
        self.mu_bar_offset = offset;
        self
    }

    pub fn n_eta(&self) -> usize {
        self.etas.len()
    }

    pub fn n_tau(&self) -> usize {
        self.taus.len()
    }

    /// `(λ̄, μ̄)` at node `k`, offset included.
    pub fn node(&self, k: usize) -> (f64, f64) {
        (self.lambda_bar[k], self.mu_bar[k] + self.mu_bar_offset)
    }

    /// `(λ̄, μ̄)(η, τ)` at an arbitrary point of `D^r`, by exact inversion.
    pub fn lookup(&self, problem: &PlateauProblem, eta: f64, tau: f64) -> Result<(f64, f64)> {
        let inv = problem.invert_right(eta, tau)?;
        let (l, m) = normal_at(problem, inv.s)?;
        Ok((l, m + self.mu_bar_offset))
    }

    /// Frame components of `ω(p)`; depends on `p` only through `π^r(p)`.
    pub fn omega(&self, problem: &PlateauProblem, p: HPoint) -> Result<(f64, f64)> {
        let w = project_right(p);
        self.lookup(problem, w.y, w.t)
    }

    pub fn unit_norm_residual(&self) -> f64 {
        (0..self.lambda_bar.len())
            .map(|k| {
                let (l, m) = (self.lambda_bar[k], self.mu_bar[k]);
                (l * l + m * m - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `sup |(λ̄, μ̄) − (1, 0)|`.
    pub fn deviation_from_x(&self) -> f64 {
        (0..self.lambda_bar.len())
            .map(|k| {
                let (l, m) = self.node(k);
                (l - 1.0).abs().max(m.abs())
            })
            .fold(0.0, f64::max)
    }

    /// `div ω = ∂_η μ̄ + 4η ∂_τ λ̄` by three-point differences (one-sided on
    /// the outer ring).
    pub fn divergence_residual(&self) -> DivergenceResidual {
        let (ne, nt) = (self.n_eta(), self.n_tau());
        let deriv = |xs: &[f64], k: usize, f: &dyn Fn(usize) -> f64| -> f64 {
            let n = xs.len();
            let c = k.clamp(1, n - 2);
            let w = diff_weights3(xs[k], [xs[c - 1], xs[c], xs[c + 1]]);
            // The weights sum to zero, so difference against the centre value.
            let mid = f(c);
            w[0] * (f(c - 1) - mid) + w[2] * (f(c + 1) - mid)
        };
        let values: Vec<f64> = (0..ne * nt)
            .map(|k| {
                let (i, j) = (k / nt, k % nt);
                let d_mu = deriv(&self.etas, i, &|r| self.mu_bar[r * nt + j] + self.mu_bar_offset);
                let d_lam = deriv(&self.taus, j, &|c| self.lambda_bar[i * nt + c]);
                d_mu + 4.0 * self.etas[i] * d_lam
            })
            .collect();
        let (mut interior, mut ring) = (0.0f64, 0.0f64);
        for (k, v) in values.iter().enumerate() {
            let (i, j) = (k / nt, k % nt);
            if i == 0 || j == 0 || i == ne - 1 || j == nt - 1 {
                ring = ring.max(v.abs());
            } else {
                interior = interior.max(v.abs());
            }
        }
        DivergenceResidual { values, max_interior: interior, max_boundary_ring: ring }
    }

    /// `(η, τ, λ̄, μ̄, div)` rows in node order.
    pub fn rows(&self) -> Vec<[f64; 5]> {
        let div = self.divergence_residual();
        let nt = self.n_tau();
        (0..self.lambda_bar.len())
            .map(|k| {
                let (l, m) = self.node(k);
                [self.etas[k / nt], self.taus[k % nt], l, m, div.values[k]]
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceResidual {
    pub values: Vec<f64>,
    pub max_interior: f64,
    /// Outer ring, reported separately.
    pub max_boundary_ring: f64,
}

/// `max |ω(π^r p) − ν_{E_u}(p)|` over interior surface samples `p` of `u`.
pub fn normal_agreement(problem: &PlateauProblem, field: &CalibrationField, u: &GraphFunction) -> Result<f64> {
    let params =
        u.params.as_ref().ok_or_else(|| Error::Precondition("normal agreement needs ruling parameters".into()))?;
    let g = &u.grid;
    let ks: Vec<usize> =
        (0..g.len()).filter(|&k| !g.is_boundary(k) && params[k].1 > 0.0 && params[k].1 < problem.t_bar()).collect();
    let devs: Vec<f64> = ks
        .par_iter()
        .map(|&k| {
            let (y, t) = g.node(k);
            let p = lift_left(WPoint::new(y, t), u.values[k]);
            let nu = normal_at(problem, params[k].1)?;
            let w = field.omega(problem, p)?;
            Ok((w.0 - nu.0).abs().max((w.1 - nu.1).abs()))
        })
        .collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{left_graph, right_domain};
    use crate::heisenberg::flow_xr;
    use crate::ruling::tests::{c1, flat};
    use proptest::prelude::*;

    fn field_for(p: &PlateauProblem, n: usize) -> (GraphFunction, CalibrationField) {
        let u = left_graph(p, 65, 65).unwrap();
        let table = right_domain(p, &u).unwrap();
        let f = CalibrationField::build(p, &table, n).unwrap();
        (u, f)
    }

    #[test]
    fn normal_examples() {
        assert_eq!(normal_at(&flat(), 0.7).unwrap(), (1.0, 0.0));
        let (a, b) = normal_at(&c1(), 1.0).unwrap();
        assert!((a - 0.999_982_000_323_994_5).abs() < 1e-15);
        assert!((b - 0.005_999_919_001_336_479).abs() < 1e-16);
        // (1, −B u)/√(1 + B u²) = (β, −α).
        let bu = crate::area::burgers_on_ruling(&c1(), 1.0).unwrap();
        let k = (1.0 + bu * bu).sqrt();
        assert!((1.0 / k - a).abs() < 1e-15 && (-bu / k - b).abs() < 1e-15);
    }

    #[test]
    fn flat_field_is_x() {
        let f = flat();
        let (u, field) = field_for(&f, 17);
        assert!(field.lambda_bar.iter().all(|&l| l == 1.0));
        assert!(field.mu_bar.iter().all(|&m| m == 0.0));
        assert_eq!(field.divergence_residual().max_interior, 0.0);
        assert_eq!(normal_agreement(&f, &field, &u).unwrap(), 0.0);
    }

    #[test]
    fn c1_field_properties() {
        let c = c1();
        let (u, field) = field_for(&c, 33);
        assert!(field.unit_norm_residual() <= 1e-12);
        assert!(field.deviation_from_x() <= c.zeta().zeta);
        assert!(normal_agreement(&c, &field, &u).unwrap() <= 1e-8);
        let faulty = field.clone().with_mu_bar_offset(0.01);
        assert!(normal_agreement(&c, &faulty, &u).unwrap() >= 0.009);
    }

    #[test]
    fn field_is_constant_along_a_ruling_image() {
        let c = c1();
        let (_, field) = field_for(&c, 9);
        let s = 0.9;
        let want = normal_at(&c, s).unwrap();
        for h in [0.3, 0.5, 0.7] {
            let got = field.omega(&c, c.rho(h, s).unwrap()).unwrap();
            assert!((got.0 - want.0).abs() < 1e-13 && (got.1 - want.1).abs() < 1e-13);
        }
    }

    #[test]
    fn divergence_decays_under_refinement() {
        let c = c1();
        let u = left_graph(&c, 65, 65).unwrap();
        let table = right_domain(&c, &u).unwrap();
        let r1 = CalibrationField::build(&c, &table, 33).unwrap().divergence_residual().max_interior;
        let r2 = CalibrationField::build(&c, &table, 65).unwrap().divergence_residual().max_interior;
        assert!(r2 <= 0.6 * r1, "{r1} -> {r2}");
    }

    #[test]
    fn constant_field_has_zero_divergence() {
        let c = c1();
        let (_, mut field) = field_for(&c, 9);
        field.lambda_bar.iter_mut().for_each(|v| *v = 0.6);
        field.mu_bar.iter_mut().for_each(|v| *v = 0.8);
        assert_eq!(field.divergence_residual().max_interior, 0.0);
    }

    #[test]
    fn inscribed_rect_fits_rows() {
        let c = c1();
        let u = left_graph(&c, 33, 33).unwrap();
        let t = right_domain(&c, &u).unwrap();
        let r = inscribed_rect(&t).unwrap();
        for (y, iv) in t.ys.iter().zip(&t.intervals) {
            if *y >= r.eta.0 && *y <= r.eta.1 {
                assert!(iv.0 <= r.tau.0 && iv.1 >= r.tau.1);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn field_is_constant_on_xr_fibres(y in -0.1..0.1f64, t in 0.6..1.4f64, x in -0.01..0.01f64, s in -3.0..3.0f64) {
            let c = c1();
            let field = CalibrationField::build(&c, &right_domain(&c, &left_graph(&c, 17, 17).unwrap()).unwrap(), 5).unwrap();
            let p = HPoint::new(x, y, t);
            let a = field.omega(&c, p).unwrap();
            let b = field.omega(&c, flow_xr(p, s)).unwrap();
            prop_assert!((a.0 - b.0).abs() <= 1e-12 && (a.1 - b.1).abs() <= 1e-12);
        }

        #[test]
        fn calibration_pairing_is_bounded(theta in 0.0..std::f64::consts::TAU, s in 0.05..1.95f64) {
            let c = c1();
            let (l, m) = normal_at(&c, s).unwrap();
            let pairing = l * theta.cos() + m * theta.sin();
            prop_assert!(pairing <= 1.0 + 1e-15);
            prop_assert!((l * l + m * m - 1.0).abs() <= 1e-15);
        }
    }
}
