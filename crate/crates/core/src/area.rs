//! The Burgers operator `B u = ∂_y u − 2∂_t(u²)` and the H-area
//! `A_H(u) = ∫_D √(1 + (B u)²)`, computed over the domain and over the ruled surface.

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::LenticularDomain;
use crate::error::{Error, Result};
use crate::graph::{GraphFunction, MappedGrid};
use crate::heisenberg::{frame_x, frame_y, project_left, HPoint};
use crate::numerics::{diff_weights3, NeumaierSum};
use crate::ruling::{PlateauProblem, RuledSurface};

/// Values on the nodes of a [`MappedGrid`].
#[derive(Debug, Clone, Serialize)]
pub struct ScalarField2D {
    pub grid: MappedGrid,
    pub values: Vec<f64>,
}

impl ScalarField2D {
    pub fn interpolate(&self, y: f64, t: f64) -> Option<f64> {
        self.grid.interpolate(&self.values, y, t)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `y`-derivative stencil for row `i` as `(row, weight)` pairs. Rows at the
/// ends and at the kink row `y = 0` use one-sided three-point formulas; the
/// kink row averages the two sides.
fn y_stencil(grid: &MappedGrid, i: usize) -> Vec<(usize, f64)> {
    let ys = &grid.ys;
    let n = ys.len();
    let one_sided = |rows: [usize; 3]| -> Vec<(usize, f64)> {
        let w = diff_weights3(ys[i], [ys[rows[0]], ys[rows[1]], ys[rows[2]]]);
        rows.iter().copied().zip(w).collect()
    };
    if i == 0 {
        return one_sided([0, 1, 2]);
    }
    if i == n - 1 {
        return one_sided([n - 3, n - 2, n - 1]);
    }
    if grid.zero_row == Some(i) && i >= 2 && i + 2 < n {
        let mut st = one_sided([i - 2, i - 1, i]);
        st.extend(one_sided([i, i + 1, i + 2]));
        return st.into_iter().map(|(r, w)| (r, 0.5 * w)).collect();
    }
    one_sided([i - 1, i, i + 1])
}

/// `σ`-derivative (per unit `σ`) of a row at node `j`.
fn sigma_diff(row: &[f64], j: usize, dsig: f64) -> f64 {
    let n = row.len();
    if j == 0 {
        (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * dsig)
    } else if j == n - 1 {
        (3.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]) / (2.0 * dsig)
    } else {
        (row[j + 1] - row[j - 1]) / (2.0 * dsig)
    }
}

/// `B u` by finite differences on the mapped grid. With `U(y, σ) = u(y, t(y, σ))`,
/// `B u = U_y − U_σ t_y / t_σ − 2 (U²)_σ / t_σ`.
pub fn burgers_fd(u: &GraphFunction) -> Result<ScalarField2D> {
    let g = &u.grid;
    if g.n_t < 3 || g.n_y() < 3 {
        return Err(Error::Precondition(format!(
            "Burgers stencil needs at least 3 x 3 nodes, got {} x {}",
            g.n_y(),
            g.n_t
        )));
    }
    let n_t = g.n_t;
    let dsig = 1.0 / (n_t - 1) as f64;
    let squares: Vec<f64> = u.values.iter().map(|v| v * v).collect();
    let rows: Vec<Vec<f64>> = (0..g.n_y())
        .into_par_iter()
        .map(|i| {
            let st = y_stencil(g, i);
            let (lo, hi) = g.intervals[i];
            let t_sig = hi - lo;
            let row = &u.values[i * n_t..(i + 1) * n_t];
            let row2 = &squares[i * n_t..(i + 1) * n_t];
            (0..n_t)
                .map(|j| {
                    let mut u_y = 0.0;
                    let mut t_y = 0.0;
                    for &(r, w) in &st {
                        u_y += w * u.values[r * n_t + j];
                        t_y += w * g.t_at(r, j);
                    }
                    let u_sig = sigma_diff(row, j, dsig);
                    let u2_sig = sigma_diff(row2, j, dsig);
                    u_y - (u_sig * t_y + 2.0 * u2_sig) / t_sig
                })
                .collect()
        })
        .collect();
    Ok(ScalarField2D { grid: g.clone(), values: rows.concat() })
}

/// `B u = ᾱ/β̄`, constant along the ruling through `p1(s)`.
pub fn burgers_on_ruling(problem: &PlateauProblem, s: f64) -> Result<f64> {
    let (a, b) = problem.ruling_direction(s)?;
    Ok(a / b)
}

/// `√(1 + b²) − 1` without cancellation.
fn excess_density(b: f64) -> f64 {
    b * b / ((1.0 + b * b).sqrt() + 1.0)
}

/// `∫ (√(1 + B²) − 1)`: trapezoid in `σ` on each row times the slice length,
/// then trapezoid in `y` with the two tips (zero-length slices) as end nodes.
pub fn excess_integral(field: &ScalarField2D) -> f64 {
    let g = &field.grid;
    let n_t = g.n_t;
    let dsig = 1.0 / (n_t - 1) as f64;
    let row_integrals: Vec<f64> = (0..g.n_y())
        .map(|i| {
            let (lo, hi) = g.intervals[i];
            let mut acc = NeumaierSum::default();
            for j in 0..n_t {
                let w = if j == 0 || j == n_t - 1 { 0.5 } else { 1.0 };
                acc.add(w * excess_density(field.values[i * n_t + j]));
            }
            acc.total() * dsig * (hi - lo)
        })
        .collect();
    let mut ys = Vec::with_capacity(g.n_y() + 2);
    let mut fs = Vec::with_capacity(g.n_y() + 2);
    ys.push(g.y_range.0);
    fs.push(0.0);
    ys.extend_from_slice(&g.ys);
    fs.extend_from_slice(&row_integrals);
    ys.push(g.y_range.1);
    fs.push(0.0);
    let mut acc = NeumaierSum::default();
    for k in 0..ys.len() - 1 {
        acc.add(0.5 * (ys[k + 1] - ys[k]) * (fs[k] + fs[k + 1]));
    }
    acc.total()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DomainArea {
    pub area: f64,
    pub lebesgue: f64,
    pub excess: f64,
}

/// `A_H(u) = |D| + ∫_D (√(1 + (B u)²) − 1)` with `B u` from [`burgers_fd`].
pub fn h_area_domain(domain: &LenticularDomain, u: &GraphFunction) -> Result<DomainArea> {
    let field = burgers_fd(u)?;
    Ok(h_area_from_field(domain, &field))
}

pub fn h_area_from_field(domain: &LenticularDomain, field: &ScalarField2D) -> DomainArea {
    let lebesgue = domain.lebesgue_area();
    let excess = excess_integral(field);
    DomainArea { area: lebesgue + excess, lebesgue, excess }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SurfaceArea {
    /// `|D| + Σ (|N_E| − |⟨N, X⟩|)·ΔhΔs`.
    pub area: f64,
    /// Plain midpoint sum `Σ |N_E|·ΔhΔs`.
    pub raw: f64,
    pub lebesgue: f64,
    pub excess: f64,
    pub skipped_cells: usize,
    /// Euclidean area bound of the skipped cells.
    pub skipped_bound: f64,
}

/// `P_H = ∫_Q |N_E| dh ds` with `N = ρ_h × ρ_s` and `N_E = (⟨N, X⟩, ⟨N, Y⟩)`.
///
/// `⟨N, X⟩` is the Jacobian of `π∘ρ`, whose integral is `|D|`; only the
/// excess over it is summed on the cells.
pub fn h_area_surface(domain: &LenticularDomain, surf: &RuledSurface) -> SurfaceArea {
    let n_s = surf.n_s();
    let hs = &surf.h_grid;
    let ss = &surf.lambda.grid;
    let per_col: Vec<(f64, f64, usize, f64)> = (0..n_s - 1)
        .into_par_iter()
        .map(|i| {
            let ds = ss[i + 1] - ss[i];
            let (mut raw, mut exc) = (NeumaierSum::default(), NeumaierSum::default());
            let (mut skipped, mut bound) = (0usize, 0.0);
            for j in 0..hs.len() - 1 {
                let dh = hs[j + 1] - hs[j];
                let (a, b) = (surf.vertex(j, i), surf.vertex(j, i + 1));
                let (c, d) = (surf.vertex(j + 1, i), surf.vertex(j + 1, i + 1));
                let rho_h = c.sub(&a).add(&d.sub(&b)).scale(0.5 / dh);
                let rho_s = b.sub(&a).add(&d.sub(&c)).scale(0.5 / ds);
                let mid = HPoint::new(
                    0.25 * (a.x + b.x + c.x + d.x),
                    0.25 * (a.y + b.y + c.y + d.y),
                    0.25 * (a.t + b.t + c.t + d.t),
                );
                let n = rho_h.cross(&rho_s);
                let (nx, ny) = (n.dot(&frame_x(mid)), n.dot(&frame_y(mid)));
                let cell = dh * ds;
                if !(n.norm() > 0.0) || !nx.is_finite() || !ny.is_finite() {
                    skipped += 1;
                    bound += rho_h.norm() * rho_s.norm() * cell;
                    continue;
                }
                let mag = nx.hypot(ny);
                raw.add(mag * cell);
                exc.add(ny * ny / (mag + nx.abs()) * cell);
            }
            (raw.total(), exc.total(), skipped, bound)
        })
        .collect();
    let (mut raw, mut exc, mut bound) = (NeumaierSum::default(), NeumaierSum::default(), 0.0);
    let mut skipped = 0;
    for (r, e, k, b) in per_col {
        raw.add(r);
        exc.add(e);
        skipped += k;
        bound += b;
    }
    let lebesgue = domain.lebesgue_area();
    SurfaceArea {
        area: lebesgue + exc.total(),
        raw: raw.total(),
        lebesgue,
        excess: exc.total(),
        skipped_cells: skipped,
        skipped_bound: bound,
    }
}

/// Finite-difference `B u` along rulings against the ruling formula `ᾱ/β̄`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RulingConsistency {
    /// Largest spread (max − min) of interpolated `B u` along one ruling.
    pub spread_max: f64,
    /// Largest deviation of interpolated `B u` from `ᾱ/β̄`.
    pub formula_dev_max: f64,
    pub rulings: usize,
}

/// Samples the rulings through `s ∈ ss` at the given `h` values, projects
/// them to `D` and reads the field by interpolation.
pub fn ruling_consistency(
    problem: &PlateauProblem,
    field: &ScalarField2D,
    ss: &[f64],
    hs: &[f64],
) -> Result<RulingConsistency> {
    let rows: Vec<(f64, f64)> = ss
        .par_iter()
        .map(|&s| {
            let exact = burgers_on_ruling(problem, s)?;
            let (mut lo, mut hi, mut dev) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
            for &h in hs {
                let w = project_left(problem.rho(h, s)?);
                let b = field.interpolate(w.y, w.t).ok_or(Error::PointOutsideDomain { y: w.y, t: w.t })?;
                lo = lo.min(b);
                hi = hi.max(b);
                dev = dev.max((b - exact).abs());
            }
            Ok((hi - lo, dev))
        })
        .collect::<Result<_>>()?;
    Ok(RulingConsistency {
        spread_max: rows.iter().fold(0.0, |m, r| m.max(r.0)),
        formula_dev_max: rows.iter().fold(0.0, |m, r| m.max(r.1)),
        rulings: rows.len(),
    })
}
