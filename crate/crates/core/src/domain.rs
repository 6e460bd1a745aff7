//! The lenticular domain `D = {(y, t) : 0 < t < t̄, γ1(t) < y < γ2(t)}`, the
//! boundary datum `(φ1, φ2)` and the smallness parameter `ζ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Gate, Result};
use crate::function::ScalarFn1D;
use crate::roots;

/// Default sampling for sup/Lipschitz estimates: 4096 cells, so the midpoint is a node.
pub const DEFAULT_LIP_GRID: usize = 4097;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LenticularDomain {
    t_bar: f64,
    gamma1: ScalarFn1D,
    gamma2: ScalarFn1D,
    /// `(argmin γ1, min γ1)`.
    lower_tip: (f64, f64),
    /// `(argmax γ2, max γ2)`.
    upper_tip: (f64, f64),
}

/// The boundary values carried as the two compositions `φ1 = φ(γ1(s), s)`,
/// `φ2 = φ(γ2(s), s)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryDatum {
    pub phi1: ScalarFn1D,
    pub phi2: ScalarFn1D,
}

/// A horizontal slice `D_y = (lo, hi)`; `lo == hi` at a tip of the lens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slice {
    pub lo: f64,
    pub hi: f64,
}

impl Slice {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

impl LenticularDomain {
    pub fn new(t_bar: f64, gamma1: ScalarFn1D, gamma2: ScalarFn1D) -> Result<Self> {
        if !(t_bar.is_finite() && t_bar > 0.0) {
            return Err(Error::InvalidFunction(format!("t_bar must be positive, got {t_bar}")));
        }
        for (name, g) in [("gamma1", &gamma1), ("gamma2", &gamma2)] {
            if (g.t_bar() - t_bar).abs() > 1e-15 * t_bar {
                return Err(Error::InvalidFunction(format!(
                    "{name} is defined on [0, {}] but t_bar = {t_bar}",
                    g.t_bar()
                )));
            }
        }
        let lower_tip = extremum(&gamma1, t_bar, 1.0);
        let upper_tip = extremum(&gamma2, t_bar, -1.0);
        Ok(Self { t_bar, gamma1, gamma2, lower_tip, upper_tip })
    }

    /// The symmetric quadratic lens `γ2 = −γ1 = (4·half_width/t̄²)·t(t̄ − t)`.
    pub fn symmetric_quadratic(t_bar: f64, half_width: f64) -> Result<Self> {
        let k = 4.0 * half_width / (t_bar * t_bar);
        let g2 = ScalarFn1D::polynomial(vec![0.0, k * t_bar, -k], t_bar)?;
        Self::new(t_bar, g2.negated(), g2)
    }

    pub fn t_bar(&self) -> f64 {
        self.t_bar
    }

    pub fn gamma1(&self) -> &ScalarFn1D {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &ScalarFn1D {
        &self.gamma2
    }

    /// `min γ1`, the lower end of `Y_D`.
    pub fn y_min(&self) -> f64 {
        self.lower_tip.1
    }

    /// `max γ2`, the upper end of `Y_D`.
    pub fn y_max(&self) -> f64 {
        self.upper_tip.1
    }

    pub fn lower_tip(&self) -> (f64, f64) {
        self.lower_tip
    }

    pub fn upper_tip(&self) -> (f64, f64) {
        self.upper_tip
    }

    pub fn width(&self, t: f64) -> f64 {
        self.gamma2.value(t) - self.gamma1.value(t)
    }

    pub fn contains(&self, y: f64, t: f64) -> bool {
        t > 0.0 && t < self.t_bar && self.gamma1.value(t) < y && y < self.gamma2.value(t)
    }

    /// `D_y`. For `y < 0` the endpoints solve `γ1 = y` on either side of the
    /// minimum, for `y > 0` they solve `γ2 = y`; `D_0 = (0, t̄)`.
    pub fn slice(&self, y: f64) -> Result<Slice> {
        let (y_min, y_max) = (self.y_min(), self.y_max());
        if !(y >= y_min && y <= y_max) {
            return Err(Error::OutsideSliceRange { y, y_min, y_max });
        }
        if y == 0.0 {
            return Ok(Slice { lo: 0.0, hi: self.t_bar });
        }
        let (g, (t_tip, y_tip)) = if y < 0.0 { (&self.gamma1, self.lower_tip) } else { (&self.gamma2, self.upper_tip) };
        if y == y_tip {
            return Ok(Slice { lo: t_tip, hi: t_tip });
        }
        let f = |t: f64| g.value(t) - y;
        let lo = roots::bisect(f, 0.0, t_tip);
        let hi = roots::bisect(f, t_tip, self.t_bar);
        Ok(Slice { lo, hi })
    }

    /// Exact-for-quadratics area `∫ (γ2 − γ1)`: composite Simpson on
    /// polynomial boundaries, trapezoid on the union of sample nodes otherwise.
    pub fn lebesgue_area(&self) -> f64 {
        let width = |t: f64| self.width(t);
        match (self.gamma1.repr(), self.gamma2.repr()) {
            (crate::function::Repr::Polynomial { .. }, crate::function::Repr::Polynomial { .. }) => {
                simpson(width, 0.0, self.t_bar, 4096)
            }
            _ => {
                let mut nodes = self.breakpoints();
                nodes.dedup();
                let mut acc = crate::numerics::NeumaierSum::default();
                for w in nodes.windows(2) {
                    acc.add(0.5 * (w[1] - w[0]) * (width(w[0]) + width(w[1])));
                }
                acc.total()
            }
        }
    }

    /// Sorted union of sample nodes of both boundary curves (and `0`, `t̄`).
    fn breakpoints(&self) -> Vec<f64> {
        let mut nodes = vec![0.0, self.t_bar];
        for g in [&self.gamma1, &self.gamma2] {
            if let crate::function::Repr::PiecewiseLinear { ts, .. } = g.repr() {
                nodes.extend_from_slice(ts);
            }
        }
        nodes.sort_by(f64::total_cmp);
        nodes
    }
}

impl BoundaryDatum {
    pub fn new(phi1: ScalarFn1D, phi2: ScalarFn1D) -> Self {
        Self { phi1, phi2 }
    }

    pub fn zero(t_bar: f64) -> Result<Self> {
        Ok(Self::new(ScalarFn1D::zero(t_bar)?, ScalarFn1D::zero(t_bar)?))
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.phi1.scaled(k), self.phi2.scaled(k))
    }

    /// Datum value at a boundary point `(y, t)` of `D`: points with `y < 0`
    /// lie on `γ1`, points with `y > 0` on `γ2`, and `y = 0` only at the pinches.
    pub fn at_boundary(&self, y: f64, t: f64) -> f64 {
        if y > 0.0 {
            self.phi2.value(t)
        } else {
            self.phi1.value(t)
        }
    }
}

/// Minimum of `sign·g`, located on a grid and refined by bisecting `g′`.
/// Returns `(t, g(t))`.
fn extremum(g: &ScalarFn1D, t_bar: f64, sign: f64) -> (f64, f64) {
    if let crate::function::Repr::PiecewiseLinear { ts, vs } = g.repr() {
        let i = (0..ts.len()).min_by(|&a, &b| (sign * vs[a]).total_cmp(&(sign * vs[b]))).unwrap_or(0);
        return (ts[i], vs[i]);
    }
    let n = 4096;
    let h = t_bar / n as f64;
    let f = |t: f64| sign * g.value(t);
    let best = (0..=n)
        .map(|i| if i == n { t_bar } else { i as f64 * h })
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap_or(0.0);
    let (a, b) = ((best - h).max(0.0), (best + h).min(t_bar));
    let df = |t: f64| g.derivative(t);
    let t = if (df(a) < 0.0) != (df(b) < 0.0) { roots::bisect(df, a, b) } else { best };
    let t = if f(best) <= f(t) { best } else { t };
    (t, g.value(t))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n_even: usize) -> f64 {
    let n = n_even + n_even % 2;
    let h = (b - a) / n as f64;
    let mut acc = crate::numerics::NeumaierSum::default();
    acc.add(f(a));
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * f(a + i as f64 * h));
    }
    acc.add(f(b));
    acc.total() * h / 3.0
}

/// Options for the sup/Lipschitz estimates entering `ζ`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ZetaOptions {
    pub n_grid: usize,
    /// Multiplies every Lipschitz estimate.
    pub lip_safety: f64,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        Self { n_grid: DEFAULT_LIP_GRID, lip_safety: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub gamma_sup: f64,
    pub gamma_lip: f64,
    pub phi_sup: f64,
    pub phi_lip: f64,
    pub zeta: f64,
    pub gate_interp: bool,
    pub gate_left: bool,
    pub gate_right: bool,
}

impl ZetaReport {
    pub fn from_norms(gamma_sup: f64, gamma_lip: f64, phi_sup: f64, phi_lip: f64) -> Self {
        let zeta = 4.0 * (gamma_sup + gamma_lip) * (phi_sup + phi_lip);
        Self {
            gamma_sup,
            gamma_lip,
            phi_sup,
            phi_lip,
            zeta,
            gate_interp: zeta < Gate::Interp.threshold(),
            gate_left: zeta < Gate::Left.threshold(),
            gate_right: zeta < Gate::Right.threshold(),
        }
    }

    pub fn passes(&self, gate: Gate) -> bool {
        match gate {
            Gate::Interp => self.gate_interp,
            Gate::Left => self.gate_left,
            Gate::Right => self.gate_right,
        }
    }

    pub fn require(&self, gate: Gate) -> Result<()> {
        if self.passes(gate) {
            Ok(())
        } else {
            Err(Error::GateViolated { gate, zeta: self.zeta })
        }
    }

    /// `(1 − ζ)/(1 + ζ)` and its reciprocal: the bi-Lipschitz window of the ruling map.
    pub fn lambda_window(&self) -> (f64, f64) {
        let z = self.zeta;
        ((1.0 - z) / (1.0 + z), (1.0 + z) / (1.0 - z))
    }

    /// Lower bound on `τ_y′` behind left graphicality.
    pub fn tau_slope_bound(&self) -> f64 {
        let z = self.zeta;
        (1.0 - z * (2.0 + (1.0 + z) / (1.0 - z))) * (1.0 - z) / (1.0 + z)
    }

    /// Lower bound on the slope of the right-projection profile `τ̃_y`.
    pub fn tau_tilde_slope_bound(&self) -> f64 {
        let z = self.zeta;
        self.tau_slope_bound() - 5.0 * z * (1.0 + z) / (1.0 - z)
    }
}

/// `ζ = 4(‖γ‖∞ + Lip γ)(‖φ‖∞ + Lip φ)` after validating domain and datum.
pub fn zeta_report(domain: &LenticularDomain, datum: &BoundaryDatum, opts: ZetaOptions) -> Result<ZetaReport> {
    let validation = validate(domain, datum, opts.n_grid.max(8));
    if !validation.passed() {
        return Err(Error::Validation(validation.failures()));
    }
    Ok(zeta_unchecked(domain, datum, opts))
}

/// `ζ` without the shape checks.
pub fn zeta_unchecked(domain: &LenticularDomain, datum: &BoundaryDatum, opts: ZetaOptions) -> ZetaReport {
    let (g1s, g1l) = domain.gamma1.sup_and_lip(opts.n_grid);
    let (g2s, g2l) = domain.gamma2.sup_and_lip(opts.n_grid);
    let (p1s, p1l) = datum.phi1.sup_and_lip(opts.n_grid);
    let (p2s, p2l) = datum.phi2.sup_and_lip(opts.n_grid);
    ZetaReport::from_norms(g1s.max(g2s), opts.lip_safety * g1l.max(g2l), p1s.max(p2s), opts.lip_safety * p1l.max(p2l))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Node with the largest violation (or closest call when passing).
    pub worst_t: f64,
    pub worst_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} fails at t = {} (value {:e})", c.name, c.worst_t, c.worst_value))
            .collect()
    }
}

/// Grid checks of the lens shape and corner compatibility of the datum.
pub fn validate(domain: &LenticularDomain, datum: &BoundaryDatum, n_grid: usize) -> ValidationReport {
    let n = n_grid.max(8);
    let t_bar = domain.t_bar;
    let h = t_bar / (n - 1) as f64;
    let node = |i: usize| if i == n - 1 { t_bar } else { i as f64 * h };
    let (g1, g2) = (&domain.gamma1, &domain.gamma2);
    let gsup = g1.sup_and_lip(n).0.max(g2.sup_and_lip(n).0);
    let curv_tol = 1e-10 * (1.0 + gsup);
    let pinch_tol = 1e-12 * (1.0 + gsup);

    // Keeps the most negative margin; a check passes iff its worst margin is ≥ 0.
    let scan = |name: &str, range: std::ops::Range<usize>, margin: &dyn Fn(usize) -> f64| {
        let (mut worst_t, mut worst) = (f64::NAN, f64::INFINITY);
        for i in range {
            let m = margin(i);
            if m < worst {
                worst = m;
                worst_t = node(i);
            }
        }
        Check { name: name.into(), passed: worst >= 0.0, worst_t, worst_value: worst }
    };

    let sign = scan("sign", 1..n - 1, &|i| {
        let t = node(i);
        let m = (-g1.value(t)).min(g2.value(t));
        if m > 0.0 {
            m
        } else {
            m - f64::MIN_POSITIVE
        }
    });
    let pinch = {
        let ends = [(0.0, g1.value(0.0)), (t_bar, g1.value(t_bar)), (0.0, g2.value(0.0)), (t_bar, g2.value(t_bar))];
        let (t, v) = ends.iter().copied().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap_or((0.0, 0.0));
        Check { name: "pinch".into(), passed: v.abs() <= pinch_tol, worst_t: t, worst_value: v }
    };
    let second_diff = |g: &ScalarFn1D, i: usize| g.value(node(i - 1)) - 2.0 * g.value(node(i)) + g.value(node(i + 1));
    let convex = scan("convexity_gamma1", 1..n - 1, &|i| second_diff(g1, i) + curv_tol);
    let concave = scan("concavity_gamma2", 1..n - 1, &|i| curv_tol - second_diff(g2, i));
    let corner = {
        let d0 = datum.phi1.value(0.0) - datum.phi2.value(0.0);
        let d1 = datum.phi1.value(t_bar) - datum.phi2.value(t_bar);
        let (t, v) = if d0.abs() >= d1.abs() { (0.0, d0) } else { (t_bar, d1) };
        let tol = 1e-12 * (1.0 + datum.phi1.value(0.0).abs() + datum.phi1.value(t_bar).abs());
        Check { name: "corner_compatibility".into(), passed: v.abs() <= tol, worst_t: t, worst_value: v }
    };
    ValidationReport { checks: vec![sign, pinch, convex, concave, corner] }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn c1() -> (LenticularDomain, BoundaryDatum) {
        let d = LenticularDomain::symmetric_quadratic(2.0, 0.25).unwrap();
        let phi1 = ScalarFn1D::polynomial(vec![0.0, 0.006, -0.003], 2.0).unwrap();
        (d, BoundaryDatum::new(phi1, ScalarFn1D::zero(2.0).unwrap()))
    }

    #[test]
    fn lens_extremes_and_slices() {
        let (d, _) = c1();
        assert_eq!(d.y_min(), -0.25);
        assert_eq!(d.y_max(), 0.25);
        assert_eq!(d.lower_tip().0, 1.0);
        let s = d.slice(-0.125).unwrap();
        let r = 0.5f64.sqrt();
        assert!((s.lo - (1.0 - r)).abs() < 1e-14 && (s.hi - (1.0 + r)).abs() < 1e-14);
        assert_eq!(d.slice(0.0).unwrap(), Slice { lo: 0.0, hi: 2.0 });
        assert!(d.slice(-0.25).unwrap().is_empty());
        assert!(matches!(d.slice(0.3), Err(Error::OutsideSliceRange { .. })));
        assert!(d.contains(0.0, 1.0) && !d.contains(0.2, 0.1));
    }

    #[test]
    fn zeta_examples() {
        let (d, phi) = c1();
        let zero = BoundaryDatum::zero(2.0).unwrap();
        let z0 = zeta_report(&d, &zero, ZetaOptions::default()).unwrap();
        assert_eq!(z0.zeta, 0.0);
        assert!(z0.gate_interp && z0.gate_left && z0.gate_right);

        // ‖γ‖ = 0.25, Lip γ = 0.5, ‖φ‖ = 0.003, Lip φ = 0.006.
        let z = zeta_report(&d, &phi, ZetaOptions::default()).unwrap();
        assert_eq!((z.gamma_sup, z.gamma_lip, z.phi_sup, z.phi_lip), (0.25, 0.5, 0.003, 0.006));
        assert!((z.zeta - 0.027).abs() < 1e-15);
        assert!(z.gate_interp && z.gate_left && z.gate_right);

        let big = BoundaryDatum::new(
            ScalarFn1D::polynomial(vec![0.0, 0.1, -0.05], 2.0).unwrap(),
            ScalarFn1D::zero(2.0).unwrap(),
        );
        let z = zeta_report(&d, &big, ZetaOptions::default()).unwrap();
        assert!((z.zeta - 0.45).abs() < 1e-14);
        assert!(z.gate_interp && !z.gate_left && !z.gate_right);
    }

    #[test]
    fn zeta_scales_linearly_with_datum() {
        let (d, phi) = c1();
        let z1 = zeta_report(&d, &phi, ZetaOptions::default()).unwrap().zeta;
        for k in [0.0, 0.5, 3.0, 10.0] {
            let zk = zeta_report(&d, &phi.scaled(k), ZetaOptions::default()).unwrap().zeta;
            assert!((zk - k * z1).abs() <= 1e-15 * (1.0 + k));
        }
    }

    #[test]
    fn validation_examples() {
        let (d, phi) = c1();
        assert!(validate(&d, &phi, 257).passed());

        // Concave table that does not come back to zero at t̄.
        let ts: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).collect();
        let mut vs: Vec<f64> = ts.iter().map(|t| 0.25 * (std::f64::consts::PI * t / 2.0).sin()).collect();
        *vs.last_mut().unwrap() = 0.1;
        let g2 = ScalarFn1D::samples(ts, vs, 2.0).unwrap();
        let bad = LenticularDomain::new(2.0, d.gamma1().clone(), g2).unwrap();
        let r = validate(&bad, &phi, 257);
        let pinch = r.check("pinch").unwrap();
        assert!(!pinch.passed);
        assert_eq!(pinch.worst_t, 2.0);
        assert!(matches!(zeta_report(&bad, &phi, ZetaOptions::default()), Err(Error::Validation(_))));
    }

    #[test]
    fn convexity_oracle_on_sample_table() {
        let ts = vec![0.0, 1.0, 1.5, 2.0];
        let vs = vec![0.0, -1.0, -0.2, 0.0];
        // Independent oracle: a piecewise-linear table is convex iff its
        // segment slopes are nondecreasing.
        let slopes: Vec<f64> = (0..3).map(|i| (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])).collect();
        let oracle_convex = slopes.windows(2).all(|w| w[1] >= w[0]);
        assert_eq!(slopes, vec![-1.0, 1.6000000000000001, 0.4]);
        assert!(!oracle_convex);

        let g1 = ScalarFn1D::samples(ts, vs, 2.0).unwrap();
        let g2 = g1.negated();
        let d = LenticularDomain::new(2.0, g1, g2).unwrap();
        let r = validate(&d, &BoundaryDatum::zero(2.0).unwrap(), 257);
        let c = r.check("convexity_gamma1").unwrap();
        assert_eq!(c.passed, oracle_convex);
        assert!((c.worst_t - 1.5).abs() < 2.0 / 256.0);
    }

    #[test]
    fn corner_compatibility_is_checked() {
        let (d, _) = c1();
        let phi = BoundaryDatum::new(ScalarFn1D::polynomial(vec![0.01], 2.0).unwrap(), ScalarFn1D::zero(2.0).unwrap());
        assert!(!validate(&d, &phi, 64).check("corner_compatibility").unwrap().passed);
    }

    #[test]
    fn lebesgue_area_examples() {
        let (d, _) = c1();
        assert!((d.lebesgue_area() - 2.0 / 3.0).abs() < 1e-15);
        let z = ScalarFn1D::zero(2.0).unwrap();
        let flat = LenticularDomain::new(2.0, z.clone(), z).unwrap();
        assert_eq!(flat.lebesgue_area(), 0.0);
    }

    #[test]
    fn lebesgue_area_ramped_table_matches_riemann_sum() {
        let eps = 0.05;
        let ts = vec![0.0, eps, 2.0 - eps, 2.0];
        let g2 = ScalarFn1D::samples(ts.clone(), vec![0.0, 1.0, 1.0, 0.0], 2.0).unwrap();
        let g1 = ScalarFn1D::samples(ts, vec![0.0, -1e-3, -1e-3, 0.0], 2.0).unwrap();
        let d = LenticularDomain::new(2.0, g1, g2).unwrap();
        // Midpoint Riemann sum of the width; exact up to O(h²) at the two ramp kinks.
        let n = 2_000_000usize;
        let h = 2.0 / n as f64;
        let riemann: f64 = (0..n).map(|i| d.width((i as f64 + 0.5) * h)).sum::<f64>() * h;
        assert!((d.lebesgue_area() - riemann).abs() < 1e-8);
    }
}
