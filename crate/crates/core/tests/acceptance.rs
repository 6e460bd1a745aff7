//! Acceptance suite. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::Instant;

use plateau_core::area::{burgers_fd, h_area_domain, h_area_from_field, h_area_surface, ruling_consistency};
use plateau_core::calibration::{normal_agreement, CalibrationField};
use plateau_core::cli::{consistency_samples, orders};
use plateau_core::domain::{BoundaryDatum, LenticularDomain};
use plateau_core::graph::{left_graph, right_domain, right_graph, round_trip, GraphFunction};
use plateau_core::harness::{
    area_tolerance, compete, random_bumps, regularity_probe, stationarity_slope, BumpSpec, ProbeOptions,
};
use plateau_core::heisenberg::WPoint;
use plateau_core::numerics::extrapolate_observed;
use plateau_core::ruling::{LambdaMap, PlateauProblem, RuledSurface};
use plateau_core::{Error, Gate, ScalarFn1D};

const SEED: u64 = 20260101;

fn case(amplitude: f64) -> PlateauProblem {
    let d = LenticularDomain::symmetric_quadratic(2.0, 0.25).unwrap();
    let phi1 = ScalarFn1D::polynomial(vec![0.0, 2.0 * amplitude, -amplitude], 2.0).unwrap();
    PlateauProblem::new(d, BoundaryDatum::new(phi1, ScalarFn1D::zero(2.0).unwrap())).unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn sup(u: &GraphFunction) -> f64 {
    u.sup_norm()
}

fn flat_exactness() -> Outcome {
    let start = Instant::now();
    let p = case(0.0);
    let lam = LambdaMap::build(&p, 257).unwrap();
    let ident = lam.grid.iter().zip(&lam.values).map(|(s, l)| (s - l).abs()).fold(0.0, f64::max);
    let u = left_graph(&p, 257, 257).unwrap();
    let table = right_domain(&p, &u).unwrap();
    let ur = right_graph(&p, &table, 257).unwrap();
    let dom = h_area_domain(p.domain(), &u).unwrap().area;
    let surf = h_area_surface(p.domain(), &RuledSurface::build(&p, 257, 257).unwrap()).area;
    let secs = start.elapsed().as_secs_f64();
    let exact = 2.0 / 3.0;
    let passed = lam.residual_max <= 1e-12
        && ident <= 1e-12
        && sup(&u) <= 1e-12
        && sup(&ur) <= 1e-12
        && (dom - exact).abs() <= 1e-6
        && (surf - exact).abs() <= 1e-6
        && secs <= 5.0;
    outcome(
        passed,
        format!(
            "|lambda - id| {ident:.1e}, residual {:.1e}, sup|u| {:.1e}, sup|u^r| {:.1e}, areas {dom:.12} / {surf:.12}, {secs:.2} s",
            lam.residual_max,
            sup(&u),
            sup(&ur)
        ),
    )
}

fn lambda_certificate(c1: &PlateauProblem) -> Outcome {
    let start = Instant::now();
    let lam = LambdaMap::build(c1, 257).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let (lo, hi) = (lam.window.0 - lam.eps_grid, lam.window.1 + lam.eps_grid);
    let passed = (c1.zeta().zeta - 0.027).abs() <= 1e-12
        && lam.lip_lo >= lo
        && lam.lip_hi <= hi
        && lam.residual_max <= 1e-11
        && lam.strictly_increasing()
        && lam.endpoints_exact()
        && secs <= 2.0;
    outcome(
        passed,
        format!(
            "slopes [{:.6}, {:.6}] in [{lo:.6}, {hi:.6}], max |Q| {:.1e}, {secs:.3} s",
            lam.lip_lo, lam.lip_hi, lam.residual_max
        ),
    )
}

fn horizontality(c1: &PlateauProblem) -> Outcome {
    let surf = RuledSurface::build(c1, 257, 5).unwrap();
    let r = surf.horizontality_at(&[0.0, 0.25, 0.5, 0.75, 1.0]);
    outcome(r <= 1e-10, format!("max residual {r:.2e}"))
}

fn round_trip_check(c1: &PlateauProblem, u: &GraphFunction) -> Outcome {
    let rt = round_trip(c1, u).unwrap();
    let dev = rt.value.max(rt.left_identity);
    let passed = dev <= 1e-9 && u.boundary_residual <= 1e-9;
    outcome(
        passed,
        format!(
            "round trip {dev:.2e} over {} samples (param {:.1e}), boundary {:.1e}",
            rt.samples, rt.param, u.boundary_residual
        ),
    )
}

struct Ladder {
    grids: Vec<usize>,
    spread: Vec<f64>,
    formula: Vec<f64>,
    gap: Vec<f64>,
    dom: Vec<f64>,
    surf: Vec<f64>,
}

fn ladder(c1: &PlateauProblem) -> Ladder {
    let grids = vec![129, 257, 513];
    let (ss, hs) = consistency_samples(c1.t_bar(), 33);
    let mut l =
        Ladder { grids: grids.clone(), spread: vec![], formula: vec![], gap: vec![], dom: vec![], surf: vec![] };
    for &n in &grids {
        let u = left_graph(c1, n, n).unwrap();
        let field = burgers_fd(&u).unwrap();
        let rc = ruling_consistency(c1, &field, &ss, &hs).unwrap();
        let d = h_area_from_field(c1.domain(), &field).area;
        let s = h_area_surface(c1.domain(), &RuledSurface::build(c1, n, n).unwrap()).area;
        l.spread.push(rc.spread_max);
        l.formula.push(rc.formula_dev_max);
        l.gap.push((d - s).abs());
        l.dom.push(d);
        l.surf.push(s);
    }
    l
}

fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

fn burgers_consistency(l: &Ladder) -> Outcome {
    let os = orders(&l.grids, &l.spread);
    let of = orders(&l.grids, &l.formula);
    let cs: Vec<f64> = l.grids.iter().zip(&l.spread).map(|(&n, e)| e * (n - 1) as f64 / 2.0).collect();
    let passed = min(&os) >= 0.9 && min(&of) >= 0.9;
    outcome(
        passed,
        format!(
            "spread {:.2e} orders {os:.3?} (spread/h {}), formula dev {:.2e} orders {of:.3?}",
            l.spread[2],
            sci(&cs),
            l.formula[2]
        ),
    )
}

fn area_agreement(l: &Ladder) -> Outcome {
    let o = orders(&l.grids, &l.gap);
    let de = extrapolate_observed(l.dom[0], l.dom[1], l.dom[2]);
    let se = extrapolate_observed(l.surf[0], l.surf[1], l.surf[2]);
    let passed = min(&o) >= 0.9 && (de - se).abs() <= 1e-6;
    outcome(
        passed,
        format!("gaps {} orders {o:.3?}, extrapolated {de:.12} vs {se:.12} ({:.1e})", sci(&l.gap), (de - se).abs()),
    )
}

fn calibration(c1: &PlateauProblem, u: &GraphFunction) -> Outcome {
    let table = right_domain(c1, u).unwrap();
    let f1 = CalibrationField::build(c1, &table, 129).unwrap();
    let f2 = CalibrationField::build(c1, &table, 257).unwrap();
    let unit = f1.unit_norm_residual().max(f2.unit_norm_residual());
    let (r1, r2) = (f1.divergence_residual().max_interior, f2.divergence_residual().max_interior);
    let order = orders(&[129, 257], &[r1, r2])[0];
    let agree = normal_agreement(c1, &f2, u).unwrap();
    let faulty = normal_agreement(c1, &f2.clone().with_mu_bar_offset(0.01), u).unwrap();
    let passed = unit <= 1e-12 && order >= 0.9 && agree <= 1e-8 && faulty > 1e-8;
    outcome(
        passed,
        format!(
            "unit {unit:.1e}, divergence {r1:.2e} -> {r2:.2e} (order {order:.3}), agreement {agree:.1e}, fault 0.01 -> {faulty:.2e}"
        ),
    )
}

fn minimality(c1: &PlateauProblem, u: &GraphFunction) -> Outcome {
    let start = Instant::now();
    let eps = [1e-3, 1e-2];
    let bumps = random_bumps(c1.domain(), &u.grid, SEED, 20).unwrap();
    let reps = compete(c1.domain(), u, &bumps, &eps).unwrap();
    let tol = area_tolerance(reps[0].area_u);
    let worst = reps.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let all_ok = reps.iter().all(|r| r.admissible && r.margin >= -tol);
    let flat = case(0.0);
    let z = left_graph(&flat, 257, 257).unwrap();
    let fbumps = random_bumps(flat.domain(), &z.grid, SEED, 20).unwrap();
    let freps = compete(flat.domain(), &z, &fbumps, &eps).unwrap();
    let fworst = freps.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let strict = freps.iter().all(|r| r.admissible && r.margin > 0.0);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        all_ok && strict && secs <= 60.0,
        format!(
            "{} competitors, min margin {worst:.2e} (tol {tol:.1e}); flat min margin {fworst:.2e}; {secs:.1} s",
            reps.len()
        ),
    )
}

fn stationarity(c1: &PlateauProblem, u: &GraphFunction) -> Outcome {
    let bump = BumpSpec::new((0.0, 1.0), (0.1, 0.3), 1.0);
    let st = stationarity_slope(c1.domain(), u, &bump, &[1e-2, 5e-3, 2.5e-3]).unwrap();
    let slopes: Vec<f64> = st.slopes.iter().map(|s| s.unwrap_or(f64::NAN)).collect();
    let passed = st.slopes.iter().all(Option::is_some) && st.extrapolated.abs() <= 1e-6;
    outcome(passed, format!("rungs {}, extrapolated {:.2e}", sci(&slopes), st.extrapolated))
}

fn gating() -> Outcome {
    let p = case(0.05);
    let z = *p.zeta();
    let lam_ok = LambdaMap::build(&p, 129).is_ok();
    let left_refused = matches!(left_graph(&p, 33, 33), Err(Error::GateViolated { gate: Gate::Left, .. }));
    let right_refused = matches!(p.invert_right(0.0, 1.0), Err(Error::GateViolated { gate: Gate::Right, .. }));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("case.cfg");
    std::fs::write(
        &cfg,
        "t_bar = 2\ngamma1 = poly(0, -0.5, 0.25)\ngamma2 = poly(0, 0.5, -0.25)\nphi1 = poly(0, 0.1, -0.05)\ngrid = 65\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let run = Command::new(env!("CARGO_BIN_EXE_plateau"))
        .args(["solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    let code = run.status.code();
    let zeta_json = std::fs::read_to_string(out.join("zeta.json")).unwrap_or_default();
    let stdout = String::from_utf8_lossy(&run.stdout);
    let forms = [Gate::Left.closed_form(), Gate::Right.closed_form()];
    let named = forms.iter().all(|f| zeta_json.contains(f) && stdout.contains(f));
    let files = out.join("lambda.csv").exists() && !out.join("u.csv").exists() && !out.join("u_right.csv").exists();
    let passed = (z.zeta - 0.45).abs() <= 1e-12
        && z.passes(Gate::Interp)
        && !z.passes(Gate::Left)
        && !z.passes(Gate::Right)
        && lam_ok
        && left_refused
        && right_refused
        && code == Some(2)
        && named
        && files;
    outcome(
        passed,
        format!(
            "zeta {:.4}, lambda built {lam_ok}, graphs refused {left_refused}/{right_refused}, exit {code:?}, gates named {named} ({} ; {})",
            z.zeta, forms[0], forms[1]
        ),
    )
}

fn probe(u: &GraphFunction) -> Outcome {
    let rep = regularity_probe(u, WPoint::new(0.0, 1.0), 0.5, &[0.1, 0.05, 0.025], ProbeOptions::default()).unwrap();
    let devs: Vec<f64> = rep.rungs.iter().filter_map(|g| g.deviation).collect();
    let smallest = rep.rungs.iter().min_by(|a, b| a.rho.total_cmp(&b.rho)).unwrap();
    let rho_ell: Vec<f64> = rep.rungs.iter().map(|g| g.rho_ell).collect();
    let passed = smallest.deviation.is_some() && devs.iter().all(|&d| d <= 1e-6) && rep.rho_ell_decreasing;
    outcome(
        passed,
        format!(
            "{} of {} rungs re-solved, max deviation {:.2e}, rho*ell {}, trend slope {:.3}",
            devs.len(),
            rep.rungs.len(),
            devs.iter().copied().fold(0.0, f64::max),
            sci(&rho_ell),
            rep.trend_slope
        ),
    )
}

#[test]
fn acceptance() {
    let c1 = case(0.003);
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |n: usize, name: &'static str, o: Outcome| {
        println!("{} {n:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };
    report(1, "flat-case exactness", flat_exactness());
    report(2, "lambda certificate", lambda_certificate(&c1));
    report(3, "horizontality", horizontality(&c1));
    let u = left_graph(&c1, 257, 257).unwrap();
    report(4, "graphicality round trip", round_trip_check(&c1, &u));
    let l = ladder(&c1);
    report(5, "Burgers consistency", burgers_consistency(&l));
    report(6, "area-route agreement", area_agreement(&l));
    report(7, "calibration", calibration(&c1, &u));
    report(8, "minimality", minimality(&c1, &u));
    report(9, "stationarity", stationarity(&c1, &u));
    report(10, "threshold gating", gating());
    report(11, "regularity probe self-consistency", probe(&u));
    let failed: Vec<String> = results.iter().filter(|r| !r.2.passed).map(|r| format!("{} {}", r.0, r.1)).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
