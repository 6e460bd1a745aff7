//! Minimality checks: bump competitors, the first variation, and the local
//! regularity probe on lens subdomains.

use log::warn;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::area::h_area_domain;
use crate::domain::{BoundaryDatum, LenticularDomain};
use crate::error::{Error, Gate, Result};
use crate::function::ScalarFn1D;
use crate::graph::{left_graph, row_min_beta_slope, GraphFunction, MappedGrid, Side};
use crate::heisenberg::WPoint;
use crate::ruling::PlateauProblem;

/// `w(y, t) = A·max(0, 1 − q)²` with `q = ((y − y0)/ry)² + ((t − t0)/rt)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpSpec {
    pub center: (f64, f64),
    pub radii: (f64, f64),
    pub amplitude: f64,
}

impl BumpSpec {
    pub fn new(center: (f64, f64), radii: (f64, f64), amplitude: f64) -> Self {
        Self { center, radii, amplitude }
    }

    pub fn eval(&self, y: f64, t: f64) -> f64 {
        let dy = (y - self.center.0) / self.radii.0;
        let dt = (t - self.center.1) / self.radii.1;
        let m = (1.0 - dy * dy - dt * dt).max(0.0);
        self.amplitude * m * m
    }

    /// Closed-form bounds on `|∂_y w|` and `|∂_t w|`: `max 4A·m·|d|/r` over
    /// the disc is attained at `|d| = 1/√3`.
    pub fn lip_bounds(&self) -> (f64, f64) {
        let c = 8.0 / (3.0 * 3f64.sqrt()) * self.amplitude.abs();
        (c / self.radii.0, c / self.radii.1)
    }

    /// Whether the support, grown by `margin` in each radius, lies in `D`.
    pub fn fits(&self, domain: &LenticularDomain, margin: (f64, f64)) -> bool {
        let (ry, rt) = (self.radii.0 + margin.0, self.radii.1 + margin.1);
        (0..720).all(|k| {
            let a = std::f64::consts::TAU * k as f64 / 720.0;
            domain.contains(self.center.0 + ry * a.cos(), self.center.1 + rt * a.sin())
        })
    }
}

/// Largest row spacing and largest `t` spacing of the grid.
pub fn cell_size(grid: &MappedGrid) -> (f64, f64) {
    let dy = grid.ys.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let dt = grid.intervals.iter().map(|iv| (iv.1 - iv.0) / (grid.n_t - 1) as f64).fold(0.0, f64::max);
    (dy, dt)
}

/// `v = u + eps·w` on `u`'s grid. The bump's support must stay a cell away
/// from `∂D`, so `v = φ` on the boundary automatically.
pub fn make_competitor(
    domain: &LenticularDomain,
    u: &GraphFunction,
    bump: &BumpSpec,
    eps: f64,
) -> Result<GraphFunction> {
    if !bump.fits(domain, cell_size(&u.grid)) {
        return Err(Error::Precondition(format!(
            "bump at ({}, {}) with radii ({}, {}) is within a grid cell of the boundary",
            bump.center.0, bump.center.1, bump.radii.0, bump.radii.1
        )));
    }
    let values = u.samples().map(|(y, t, v)| v + eps * bump.eval(y, t)).collect();
    GraphFunction::from_values(Side::Left, u.grid.clone(), values)
}

/// Smallest discrete slope of `β^v_y` over all rows; admissible iff positive.
pub fn check_admissible(v: &GraphFunction) -> (bool, f64) {
    let m = (0..v.grid.n_y()).map(|i| row_min_beta_slope(v, i)).fold(f64::INFINITY, f64::min);
    (m > 0.0, m)
}

#[derive(Debug, Clone, Serialize)]
pub struct CompetitorReport {
    pub bump: Option<BumpSpec>,
    pub epsilon: f64,
    pub admissible: bool,
    pub min_beta_slope: f64,
    pub area_u: f64,
    pub area_v: f64,
    pub margin: f64,
    pub sup_diff: f64,
}

/// `A_H(v) − A_H(u)` on the shared grid, with the admissibility flag.
pub fn compare_areas(domain: &LenticularDomain, u: &GraphFunction, v: &GraphFunction) -> Result<CompetitorReport> {
    let area_u = h_area_domain(domain, u)?.area;
    compare_with_area(domain, area_u, u, v)
}

fn compare_with_area(
    domain: &LenticularDomain,
    area_u: f64,
    u: &GraphFunction,
    v: &GraphFunction,
) -> Result<CompetitorReport> {
    let (admissible, min_beta_slope) = check_admissible(v);
    let area_v = h_area_domain(domain, v)?.area;
    let sup_diff = u.values.iter().zip(&v.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(CompetitorReport {
        bump: None,
        epsilon: 0.0,
        admissible,
        min_beta_slope,
        area_u,
        area_v,
        margin: area_v - area_u,
        sup_diff,
    })
}

/// `1e−9·(1 + A_H(u))`.
pub fn area_tolerance(area_u: f64) -> f64 {
    1e-9 * (1.0 + area_u)
}

/// `count` bumps drawn from a seeded ChaCha8 stream; each fits in `D` with a
/// one-cell margin.
pub fn random_bumps(domain: &LenticularDomain, grid: &MappedGrid, seed: u64, count: usize) -> Result<Vec<BumpSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = cell_size(grid);
    let (y_lo, y_hi) = (domain.y_min(), domain.y_max());
    let t_bar = domain.t_bar();
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        if tries > 10_000 * count.max(1) {
            return Err(Error::Precondition("domain too small for random bumps".into()));
        }
        let ry = rng.random_range(0.15..0.5) * (y_hi - y_lo) / 2.0;
        let rt = rng.random_range(0.05..0.2) * t_bar;
        let b = BumpSpec::new(
            (rng.random_range(y_lo..y_hi), rng.random_range(0.0..t_bar)),
            (ry, rt),
            rng.random_range(0.5..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
        );
        if b.fits(domain, margin) {
            out.push(b);
        }
    }
    Ok(out)
}

/// Reports for every (bump, eps) pair, bump-major, in submission order.
pub fn compete(
    domain: &LenticularDomain,
    u: &GraphFunction,
    bumps: &[BumpSpec],
    epsilons: &[f64],
) -> Result<Vec<CompetitorReport>> {
    let area_u = h_area_domain(domain, u)?.area;
    let jobs: Vec<(BumpSpec, f64)> = bumps.iter().flat_map(|b| epsilons.iter().map(move |&e| (*b, e))).collect();
    jobs.par_iter()
        .map(|(b, e)| {
            let v = make_competitor(domain, u, b, *e)?;
            let mut r = compare_with_area(domain, area_u, u, &v)?;
            r.bump = Some(*b);
            r.epsilon = *e;
            Ok(r)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StationarityReport {
    pub bump: BumpSpec,
    pub ladder: Vec<f64>,
    /// Central difference per rung; `None` when the rung was dropped.
    pub slopes: Vec<Option<f64>>,
    pub extrapolated: f64,
}

/// Neville extrapolation to `x = 0` of values sampled at `xs`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// `(A_H(u + εw) − A_H(u − εw))/(2ε)` per rung, extrapolated in `ε²` to 0.
pub fn stationarity_slope(
    domain: &LenticularDomain,
    u: &GraphFunction,
    bump: &BumpSpec,
    ladder: &[f64],
) -> Result<StationarityReport> {
    let slopes: Vec<Option<f64>> = ladder
        .par_iter()
        .map(|&eps| {
            let plus = make_competitor(domain, u, bump, eps)?;
            let minus = make_competitor(domain, u, bump, -eps)?;
            if !(check_admissible(&plus).0 && check_admissible(&minus).0) {
                warn!("stationarity rung eps = {eps} is inadmissible; dropped");
                return Ok(None);
            }
            let d = h_area_domain(domain, &plus)?.excess - h_area_domain(domain, &minus)?.excess;
            Ok(Some(d / (2.0 * eps)))
        })
        .collect::<Result<_>>()?;
    let kept: Vec<(f64, f64)> = ladder.iter().zip(&slopes).filter_map(|(e, s)| s.map(|s| (e * e, s))).collect();
    if kept.is_empty() {
        return Err(Error::Precondition("every stationarity rung is inadmissible".into()));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = kept.into_iter().unzip();
    Ok(StationarityReport { bump: *bump, ladder: ladder.to_vec(), slopes, extrapolated: extrapolate_to_zero(&xs, &ys) })
}

/// `γ_{r,ρ}(s) = (ρ/r²)·s·(2r − s)` on `(0, 2r)`.
pub fn lens_gamma(r: f64, rho: f64) -> Result<ScalarFn1D> {
    ScalarFn1D::polynomial(vec![0.0, 2.0 * rho / r, -rho / (r * r)], 2.0 * r)
}

/// Whether `(y, t)` lies in the lens `D_{r,ρ}(w0)`.
pub fn in_lens(w0: WPoint, r: f64, rho: f64, y: f64, t: f64) -> bool {
    let s = t - w0.t + r;
    s > 0.0 && s < 2.0 * r && (y - w0.y).abs() < rho / (r * r) * s * (2.0 * r - s)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRung {
    pub rho: f64,
    pub ell: f64,
    pub rho_ell: f64,
    /// `8(1 + 2r)/r·[ρ‖v‖ + (1 + 2ρ/r)·ρℓ]`.
    pub zeta_bound: f64,
    pub gate_right: bool,
    /// `ζ` of the sampled local datum, when the local problem was built.
    pub zeta_local: Option<f64>,
    /// `max |v − u_local|` over the local grid, when re-solved.
    pub deviation: Option<f64>,
    pub skip_reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityProbeReport {
    pub w0: (f64, f64),
    pub r: f64,
    /// `sup |v|` over `B_r(w0) ∩ D`.
    pub v_sup: f64,
    pub rungs: Vec<ProbeRung>,
    /// Least-squares slope of `log(ρℓ)` against `log ρ`.
    pub trend_slope: f64,
    pub rho_ell_decreasing: bool,
    pub any_resolved: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct ProbeOptions {
    /// Points sampled along each lens boundary arc.
    pub n_datum: usize,
    /// Rows and columns of the local re-solve grid.
    pub n_local: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self { n_datum: 513, n_local: 65 }
    }
}

/// `ℓ^v_r(ρ; w0)`: the discrete Lipschitz constant of `v` over grid-neighbour
/// pairs inside each half ball minus the lens (both restricted to `v`'s grid).
pub fn ell(v: &GraphFunction, w0: WPoint, r: f64, rho: f64) -> f64 {
    let g = &v.grid;
    let region = |k: usize| -> Option<bool> {
        let (y, t) = g.node(k);
        let inside = (y - w0.y).hypot(t - w0.t) < r && y != w0.y && !in_lens(w0, r, rho, y, t);
        inside.then_some(y > w0.y)
    };
    let mut lip = 0.0f64;
    for k in 0..g.len() {
        let Some(side) = region(k) else { continue };
        let (i, j) = (k / g.n_t, k % g.n_t);
        let (y, t) = g.node(k);
        let mut nbrs = Vec::with_capacity(2);
        if j + 1 < g.n_t {
            nbrs.push(g.index(i, j + 1));
        }
        if i + 1 < g.n_y() {
            nbrs.push(g.index(i + 1, j));
        }
        for n in nbrs {
            if region(n) != Some(side) {
                continue;
            }
            let (y2, t2) = g.node(n);
            let dist = (y2 - y).hypot(t2 - t);
            if dist > 0.0 {
                lip = lip.max((v.values[n] - v.values[k]).abs() / dist);
            }
        }
    }
    lip
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// The ruled solution on `D_{r,ρ}(w0)` with datum `v|∂`, in local
/// coordinates `(y − y0, t − t0 + r)`. Left translation by `(0, y0, t0 − r)`
/// acts on `𝕎` as a plain translation and leaves graph values unchanged.
pub fn local_problem(v: &GraphFunction, w0: WPoint, r: f64, rho: f64, n_datum: usize) -> Result<PlateauProblem> {
    let gamma = lens_gamma(r, rho)?;
    let domain = LenticularDomain::new(2.0 * r, gamma.negated(), gamma.clone())?;
    let ss: Vec<f64> = (0..n_datum).map(|k| 2.0 * r * k as f64 / (n_datum - 1) as f64).collect();
    let sample = |sign: f64| -> Result<Vec<f64>> {
        ss.iter()
            .map(|&s| {
                let (y, t) = (w0.y + sign * gamma.value(s), w0.t - r + s);
                v.interpolate(y, t).ok_or(Error::PointOutsideDomain { y, t })
            })
            .collect()
    };
    let (v1, v2) = (sample(-1.0)?, sample(1.0)?);
    let phi1 = ScalarFn1D::samples(ss.clone(), v1, 2.0 * r)?;
    let phi2 = ScalarFn1D::samples(ss, v2, 2.0 * r)?;
    PlateauProblem::new(domain, BoundaryDatum::new(phi1, phi2))
}

/// Runs the probe over the `ρ` ladder (largest first).
pub fn regularity_probe(
    v: &GraphFunction,
    w0: WPoint,
    r: f64,
    rho_ladder: &[f64],
    opts: ProbeOptions,
) -> Result<RegularityProbeReport> {
    if rho_ladder.iter().any(|&rho| !(rho > 0.0 && rho < r)) {
        return Err(Error::Precondition(format!("every rung needs 0 < rho < r = {r}")));
    }
    let v_sup =
        v.samples().filter(|(y, t, _)| (y - w0.y).hypot(t - w0.t) < r).fold(0.0f64, |m, (_, _, x)| m.max(x.abs()));
    let rungs: Vec<ProbeRung> = rho_ladder
        .par_iter()
        .map(|&rho| {
            let l = ell(v, w0, r, rho);
            let zeta_bound = 8.0 * (1.0 + 2.0 * r) / r * (rho * v_sup + (1.0 + 2.0 * rho / r) * rho * l);
            let gate_right = zeta_bound < Gate::Right.threshold();
            let mut rung = ProbeRung {
                rho,
                ell: l,
                rho_ell: rho * l,
                zeta_bound,
                gate_right,
                zeta_local: None,
                deviation: None,
                skip_reason: None,
            };
            if !gate_right {
                rung.skip_reason = Some(format!(
                    "gate {} fails: zeta bound {zeta_bound} violates {}",
                    Gate::Right.name(),
                    Gate::Right.closed_form()
                ));
                return rung;
            }
            match resolve_rung(v, w0, r, rho, opts) {
                Ok((z, dev)) => {
                    rung.zeta_local = Some(z);
                    rung.deviation = Some(dev);
                }
                Err(e) => rung.skip_reason = Some(e.to_string()),
            }
            rung
        })
        .collect();
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        rungs.iter().filter(|g| g.rho_ell > 0.0).map(|g| (g.rho.ln(), g.rho_ell.ln())).unzip();
    let trend_slope = if lx.len() >= 2 { least_squares_slope(&lx, &ly) } else { f64::NAN };
    let mut order: Vec<&ProbeRung> = rungs.iter().collect();
    order.sort_by(|a, b| b.rho.total_cmp(&a.rho));
    let rho_ell_decreasing = order.windows(2).all(|w| w[1].rho_ell < w[0].rho_ell);
    let any_resolved = rungs.iter().any(|g| g.deviation.is_some());
    Ok(RegularityProbeReport { w0: (w0.y, w0.t), r, v_sup, rungs, trend_slope, rho_ell_decreasing, any_resolved })
}

fn resolve_rung(v: &GraphFunction, w0: WPoint, r: f64, rho: f64, opts: ProbeOptions) -> Result<(f64, f64)> {
    let local = local_problem(v, w0, r, rho, opts.n_datum)?;
    let u_local = left_graph(&local, opts.n_local, opts.n_local)?;
    let mut dev = 0.0f64;
    for (y, t, ul) in u_local.samples() {
        let (gy, gt) = (w0.y + y, w0.t - r + t);
        let vv = v.interpolate(gy, gt).ok_or(Error::PointOutsideDomain { y: gy, t: gt })?;
        dev = dev.max((vv - ul).abs());
    }
    Ok((local.zeta().zeta, dev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruling::tests::{c1, flat};
    use proptest::prelude::*;

    const STAT_BUMP: BumpSpec = BumpSpec { center: (0.0, 1.0), radii: (0.1, 0.3), amplitude: 1.0 };

    #[test]
    fn bump_profile() {
        assert_eq!(STAT_BUMP.eval(0.0, 1.0), 1.0);
        assert_eq!(STAT_BUMP.eval(0.1, 1.0), 0.0);
        assert!((STAT_BUMP.eval(0.05, 1.15) - 0.25).abs() < 1e-15);
        let (ly, lt) = STAT_BUMP.lip_bounds();
        let h = 1e-7;
        let mut gy = 0.0f64;
        for k in 0..400 {
            let y = -0.1 + 0.2 * k as f64 / 399.0;
            gy = gy.max((STAT_BUMP.eval(y + h, 1.0) - STAT_BUMP.eval(y, 1.0)).abs() / h);
        }
        assert!(gy <= ly && gy > 0.99 * ly, "{gy} {ly}");
        assert!((lt * 0.3 - ly * 0.1).abs() < 1e-15);
    }

    #[test]
    fn competitor_examples() {
        let c = c1();
        let u = left_graph(&c, 65, 65).unwrap();
        let v0 = make_competitor(c.domain(), &u, &STAT_BUMP, 0.0).unwrap();
        assert_eq!(v0.values, u.values);
        let v = make_competitor(c.domain(), &u, &STAT_BUMP, 1e-3).unwrap();
        let k = u.grid.index(u.grid.zero_row.unwrap(), 32);
        assert_eq!(u.grid.node(k), (0.0, 1.0));
        let diff: Vec<f64> = u.values.iter().zip(&v.values).map(|(a, b)| b - a).collect();
        assert!(diff.iter().all(|d| d.abs() <= 1e-3 + 1e-18));
        assert!((diff[k] - 1e-3).abs() < 1e-18);
        let bad = BumpSpec::new((0.0, 0.2), (0.1, 0.3), 1.0);
        assert!(matches!(make_competitor(c.domain(), &u, &bad, 1e-3), Err(Error::Precondition(_))));
    }

    #[test]
    fn admissibility() {
        let f = flat();
        let z = left_graph(&f, 33, 33).unwrap();
        assert_eq!(check_admissible(&z), (true, 1.0));
        let c = c1();
        let u = left_graph(&c, 65, 65).unwrap();
        let v = make_competitor(c.domain(), &u, &STAT_BUMP, 1e-2).unwrap();
        let (ok, m) = check_admissible(&v);
        let bound = 1.0 - 4.0 * 0.1 * (1e-2 * STAT_BUMP.lip_bounds().1 + u.lip_estimate);
        assert!(ok && m >= bound, "{m} {bound}");
        // ∂_t v = −1.5/(4y) on the rows with y > 0 drives β's slope to −1/2.
        let vals = u.samples().map(|(y, t, x)| if y > 0.0 { x - 1.5 * t / (4.0 * y) } else { x }).collect();
        let bad = GraphFunction::from_values(Side::Left, u.grid.clone(), vals).unwrap();
        let (ok, m) = check_admissible(&bad);
        assert!(!ok && (m + 0.5).abs() < 0.05, "{m}");
    }

    #[test]
    fn margins() {
        let c = c1();
        let u = left_graph(&c, 65, 65).unwrap();
        let same = compare_areas(c.domain(), &u, &u).unwrap();
        assert_eq!(same.margin, 0.0);
        let bumps = random_bumps(c.domain(), &u.grid, 7, 4).unwrap();
        let reps = compete(c.domain(), &u, &bumps, &[1e-3, 1e-2]).unwrap();
        assert_eq!(reps.len(), 8);
        for r in &reps {
            assert!(r.admissible);
            assert!(r.margin >= -area_tolerance(r.area_u), "{r:?}");
        }
        let f = flat();
        let z = left_graph(&f, 65, 65).unwrap();
        for r in compete(f.domain(), &z, &bumps, &[1e-3, -1e-2]).unwrap() {
            assert!(r.margin > 0.0);
        }
    }

    #[test]
    fn random_bumps_are_seeded() {
        let c = c1();
        let g = left_graph(&c, 33, 33).unwrap().grid;
        let a = random_bumps(c.domain(), &g, 42, 5).unwrap();
        assert_eq!(a, random_bumps(c.domain(), &g, 42, 5).unwrap());
        assert_ne!(a, random_bumps(c.domain(), &g, 43, 5).unwrap());
        assert!(a.iter().all(|b| b.fits(c.domain(), cell_size(&g))));
    }

    #[test]
    fn neville_matches_richardson() {
        let f = |e: f64| 0.25 + 3.0 * e * e - 7.0 * e.powi(4);
        let ladder = [1e-2, 5e-3, 2.5e-3];
        let xs: Vec<f64> = ladder.iter().map(|e| e * e).collect();
        let ys: Vec<f64> = ladder.iter().map(|&e| f(e)).collect();
        assert!((extrapolate_to_zero(&xs, &ys) - 0.25).abs() < 1e-15);
        let r1 = [(4.0 * ys[1] - ys[0]) / 3.0, (4.0 * ys[2] - ys[1]) / 3.0];
        let r2 = (16.0 * r1[1] - r1[0]) / 15.0;
        assert!((extrapolate_to_zero(&xs, &ys) - r2).abs() < 1e-15);
    }

    #[test]
    fn flat_is_stationary() {
        let f = flat();
        let z = left_graph(&f, 65, 65).unwrap();
        let rep = stationarity_slope(f.domain(), &z, &STAT_BUMP, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!(rep.slopes.iter().all(|s| s.unwrap() == 0.0));
        assert_eq!(rep.extrapolated, 0.0);
    }

    #[test]
    fn lens_geometry() {
        let w0 = WPoint::new(0.0, 1.0);
        assert!(in_lens(w0, 0.5, 0.1, 0.0, 1.0));
        assert!(in_lens(w0, 0.5, 0.1, 0.099, 1.0));
        assert!(!in_lens(w0, 0.5, 0.1, 0.101, 1.0));
        assert!(!in_lens(w0, 0.5, 0.1, 0.0, 1.5));
        let g = lens_gamma(0.5, 0.1).unwrap();
        assert!((g.value(0.5) - 0.1).abs() < 1e-16);
        assert!((g.sup_and_lip(4097).1 - 0.4).abs() < 1e-12);
    }

    #[test]
    fn probe_on_flat() {
        let f = flat();
        let z = left_graph(&f, 65, 65).unwrap();
        let rep = regularity_probe(&z, WPoint::new(0.0, 1.0), 0.5, &[0.1, 0.05], ProbeOptions::default()).unwrap();
        for g in &rep.rungs {
            assert!(g.gate_right);
            assert_eq!(g.deviation, Some(0.0));
        }
    }

    #[test]
    fn probe_detects_a_kink() {
        let c = c1();
        let u = left_graph(&c, 129, 129).unwrap();
        let vals = u.samples().map(|(y, _, x)| x + 0.01 * y.abs()).collect();
        let v = GraphFunction::from_values(Side::Left, u.grid.clone(), vals).unwrap();
        let opts = ProbeOptions { n_datum: 257, n_local: 33 };
        let rep = regularity_probe(&v, WPoint::new(0.0, 1.0), 0.5, &[0.025, 0.0125], opts).unwrap();
        for g in &rep.rungs {
            let d = g.deviation.unwrap_or_else(|| panic!("{g:?}"));
            assert!(d > 0.5 * 0.01 * g.rho, "{g:?}");
        }
    }

    #[test]
    fn probe_rejects_bad_ladder() {
        let z = left_graph(&flat(), 17, 17).unwrap();
        assert!(regularity_probe(&z, WPoint::new(0.0, 1.0), 0.5, &[0.6], ProbeOptions::default()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn flat_margins_are_positive(seed in 0u64..1000, eps in 1e-3..1e-2f64) {
            let f = flat();
            let z = left_graph(&f, 33, 33).unwrap();
            let bumps = random_bumps(f.domain(), &z.grid, seed, 1).unwrap();
            let r = &compete(f.domain(), &z, &bumps, &[eps]).unwrap()[0];
            prop_assert!(r.admissible && r.margin > 0.0);
        }
    }
}
