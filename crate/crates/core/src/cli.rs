//! Command-line front end: `plateau solve|verify|compete|probe|export`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use crate::area::{burgers_fd, h_area_domain, h_area_surface, ruling_consistency, DomainArea, SurfaceArea};
use crate::calibration::{normal_agreement, CalibrationField};
use crate::config::{load_config, CaseConfig};
use crate::domain::ZetaReport;
use crate::error::{Error, Gate, Result};
use crate::graph::{left_graph, right_domain, right_graph, round_trip, GraphFunction};
use crate::harness::{
    area_tolerance, check_admissible, compete, random_bumps, regularity_probe, stationarity_slope, BumpSpec,
    CompetitorReport, ProbeOptions, RegularityProbeReport, StationarityReport,
};
use crate::heisenberg::WPoint;
use crate::mesh::{export_mesh, write_csv_file};
use crate::numerics::extrapolate_observed;
use crate::report::write_json;
use crate::ruling::{PlateauProblem, RuledSurface};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_GATE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Largest `|v − u_local|` accepted on a re-solved probe rung.
pub const PROBE_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "plateau", version, about = "Horizontally ruled minimal surfaces in the Heisenberg group")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for λ, the ruled surface, u and u^r; write CSV, OBJ and JSON artifacts.
    Solve(RunArgs),
    /// Run the invariant suite and write verify.json.
    Verify(RunArgs),
    /// Compare areas against seeded bump competitors.
    Compete(RunArgs),
    /// Run the local regularity probe on the solver output.
    Probe(RunArgs),
    /// Write the surface mesh and the calibration field.
    Export(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    /// Overrides n_s, n_y and n_t.
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Fault injection, e.g. `mu_bar_offset=0.01`.
    #[arg(long, value_name = "K=V")]
    pub fault: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Faults {
    pub mu_bar_offset: f64,
}

impl Faults {
    pub fn parse(specs: &[String]) -> Result<Self> {
        let mut f = Faults::default();
        for spec in specs {
            let (k, v) =
                spec.split_once('=').ok_or_else(|| Error::Precondition(format!("fault `{spec}` is not K=V")))?;
            let v: f64 =
                v.trim().parse().map_err(|_| Error::Precondition(format!("fault value `{v}` is not a number")))?;
            match k.trim() {
                "mu_bar_offset" => f.mu_bar_offset = v,
                other => return Err(Error::Precondition(format!("unknown fault `{other}`"))),
            }
        }
        Ok(f)
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    let (name, args) = match &cli.command {
        Command::Solve(a) => ("solve", a),
        Command::Verify(a) => ("verify", a),
        Command::Compete(a) => ("compete", a),
        Command::Probe(a) => ("probe", a),
        Command::Export(a) => ("export", a),
    };
    let result = prepare(args).and_then(|(cfg, faults, out)| match name {
        "solve" => cmd_solve(&cfg, &out),
        "verify" => cmd_verify(&cfg, faults, &out),
        "compete" => cmd_compete(&cfg, &out),
        "probe" => cmd_probe(&cfg, &out),
        _ => cmd_export(&cfg, faults, &out),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("plateau {name}: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::GateViolated { .. } => EXIT_GATE,
        _ => EXIT_ERROR,
    }
}

fn prepare(args: &RunArgs) -> Result<(CaseConfig, Faults, PathBuf)> {
    let mut cfg = load_config(&args.config)?;
    if let Some(n) = args.grid {
        cfg.set_grid(n);
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let faults = Faults::parse(&args.fault)?;
    let out = args.out.clone().unwrap_or_else(|| cfg.out.clone());
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    Ok((cfg, faults, out))
}

#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub name: &'static str,
    pub closed_form: &'static str,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub stage: &'static str,
    pub status: &'static str,
    pub reason: Option<String>,
}

impl Stage {
    fn ran(stage: &'static str) -> Self {
        Self { stage, status: "ran", reason: None }
    }

    fn skipped(stage: &'static str, reason: String) -> Self {
        Self { stage, status: "skipped", reason: Some(reason) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaJson {
    #[serde(flatten)]
    pub zeta: ZetaReport,
    pub gates: Vec<GateReport>,
    pub stages: Vec<Stage>,
}

pub fn gate_reports(z: &ZetaReport) -> Vec<GateReport> {
    [Gate::Interp, Gate::Left, Gate::Right]
        .into_iter()
        .map(|g| GateReport {
            name: g.name(),
            closed_form: g.closed_form(),
            threshold: g.threshold(),
            passed: z.passes(g),
        })
        .collect()
}

fn gate_reason(z: &ZetaReport, g: Gate) -> String {
    format!("gate {} failed: zeta = {} violates {} = {:.10}", g.name(), z.zeta, g.closed_form(), g.threshold())
}

fn print_gates(z: &ZetaReport) {
    println!("zeta = {:.16e}", z.zeta);
    for g in gate_reports(z) {
        println!(
            "  gate {:<6} {} (threshold {:.10}): {}",
            g.name,
            g.closed_form,
            g.threshold,
            if g.passed { "pass" } else { "FAIL" }
        );
    }
}

fn graph_rows(u: &GraphFunction) -> Vec<Vec<f64>> {
    u.samples()
        .enumerate()
        .map(|(k, (y, t, v))| {
            let (h, s) = u.params.as_ref().map(|p| p[k]).unwrap_or((f64::NAN, f64::NAN));
            vec![y, t, v, h, s]
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct AreaJson {
    pub lebesgue: f64,
    pub domain_route: Option<DomainArea>,
    pub surface_route: SurfaceArea,
    pub route_difference: Option<f64>,
}

pub fn cmd_solve(cfg: &CaseConfig, out: &Path) -> Result<i32> {
    let problem = cfg.problem()?;
    let z = *problem.zeta();
    print_gates(&z);
    let mut stages = Vec::new();
    let write_zeta =
        |stages: Vec<Stage>| write_json(&out.join("zeta.json"), &ZetaJson { zeta: z, gates: gate_reports(&z), stages });
    if !z.passes(Gate::Interp) {
        let why = gate_reason(&z, Gate::Interp);
        for s in ["lambda", "surface", "left_graph", "right_graph"] {
            stages.push(Stage::skipped(s, why.clone()));
        }
        eprintln!("{why}; every stage skipped");
        write_zeta(stages)?;
        return Ok(EXIT_GATE);
    }

    let surface = RuledSurface::build(&problem, cfg.n_s, cfg.n_h)?;
    let lam = &surface.lambda;
    write_csv_file(
        &out.join("lambda.csv"),
        &["s", "lambda"],
        lam.grid.iter().zip(&lam.values).map(|(&s, &l)| vec![s, l]),
    )?;
    stages.push(Stage::ran("lambda"));
    export_mesh(&surface, &out.join("surface.obj"), &out.join("surface_bu.csv"))?;
    stages.push(Stage::ran("surface"));
    info!("lambda: residual {:e}, slopes [{}, {}]", lam.residual_max, lam.lip_lo, lam.lip_hi);

    let mut code = EXIT_OK;
    let u = if z.passes(Gate::Left) {
        let u = left_graph(&problem, cfg.n_y, cfg.n_t)?;
        write_csv_file(&out.join("u.csv"), &["y", "t", "u", "h", "s"], graph_rows(&u))?;
        stages.push(Stage::ran("left_graph"));
        Some(u)
    } else {
        let why = gate_reason(&z, Gate::Left);
        eprintln!("{why}; left graph skipped");
        stages.push(Stage::skipped("left_graph", why));
        code = EXIT_GATE;
        None
    };
    match &u {
        Some(u) if z.passes(Gate::Right) => {
            let table = right_domain(&problem, u)?;
            let ur = right_graph(&problem, &table, cfg.n_t)?;
            write_csv_file(&out.join("u_right.csv"), &["eta", "tau", "u", "h", "s"], graph_rows(&ur))?;
            stages.push(Stage::ran("right_graph"));
        }
        _ => {
            let why = gate_reason(&z, Gate::Right);
            eprintln!("{why}; right graph skipped");
            stages.push(Stage::skipped("right_graph", why));
            code = EXIT_GATE;
        }
    }

    let surface_route = h_area_surface(problem.domain(), &surface);
    let domain_route = u.as_ref().map(|u| h_area_domain(problem.domain(), u)).transpose()?;
    let area = AreaJson {
        lebesgue: problem.domain().lebesgue_area(),
        domain_route,
        surface_route,
        route_difference: domain_route.map(|d| d.area - surface_route.area),
    };
    write_json(&out.join("area.json"), &area)?;
    write_zeta(stages)?;
    println!("surface area (surface route) = {:.16e}", surface_route.area);
    if let Some(d) = domain_route {
        println!("surface area (domain route)  = {:.16e}", d.area);
    }
    Ok(code)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Refinement {
    pub quantity: &'static str,
    pub grids: Vec<usize>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyJson {
    pub zeta: f64,
    pub gates: Vec<GateReport>,
    pub faults: Faults,
    pub checks: Vec<VerifyCheck>,
    pub refinement: Vec<Refinement>,
    pub all_passed: bool,
}

fn check(name: &str, passed: bool, value: f64, tolerance: f64) -> VerifyCheck {
    VerifyCheck { name: name.to_string(), passed, value, tolerance, detail: None }
}

/// Observed orders between successive grids `n` (spacing `∝ 1/(n − 1)`).
pub fn orders(grids: &[usize], errors: &[f64]) -> Vec<f64> {
    (1..grids.len())
        .map(|k| (errors[k - 1] / errors[k]).ln() / ((grids[k] - 1) as f64 / (grids[k - 1] - 1) as f64).ln())
        .collect()
}

/// Passes when every observed order reaches `min_order`, or the finest
/// error is already at round-off.
pub fn decay_passes(errors: &[f64], orders: &[f64], min_order: f64) -> bool {
    errors.last().is_some_and(|&e| e <= 1e-13) || orders.iter().all(|&p| p >= min_order)
}

/// Rulings sampled for the Burgers consistency check.
pub fn consistency_samples(t_bar: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let ss = (0..n).map(|k| t_bar * (0.05 + 0.9 * k as f64 / (n - 1) as f64)).collect();
    (ss, vec![0.1, 0.3, 0.5, 0.7, 0.9])
}

/// Centre `(0, t̄/2)`, radii `(0.4·ȳ, 0.15·t̄)` with `ȳ = min(−y_min, y_max)`.
pub fn stationarity_bump(problem: &PlateauProblem) -> BumpSpec {
    let d = problem.domain();
    let ybar = (-d.y_min()).min(d.y_max());
    BumpSpec::new((0.0, d.t_bar() / 2.0), (0.4 * ybar, 0.15 * d.t_bar()), 1.0)
}

fn refinement_ladder(n: usize) -> Vec<usize> {
    let mut g = vec![n];
    while g.len() < 3 && (g[0] - 1) % 2 == 0 && (g[0] - 1) / 2 + 1 >= 17 {
        g.insert(0, (g[0] - 1) / 2 + 1);
    }
    g
}

pub fn cmd_verify(cfg: &CaseConfig, faults: Faults, out: &Path) -> Result<i32> {
    let problem = cfg.problem()?;
    let z = *problem.zeta();
    print_gates(&z);
    let mut checks = Vec::new();
    let mut refinement = Vec::new();
    let validation = crate::domain::validate(problem.domain(), problem.datum(), cfg.lip_grid);
    checks.push(VerifyCheck {
        name: "domain_validation".into(),
        passed: validation.passed(),
        value: validation.checks.iter().filter(|c| !c.passed).count() as f64,
        tolerance: 0.0,
        detail: (!validation.passed()).then(|| validation.failures().join("; ")),
    });
    let gates_ok = z.passes(Gate::Right);
    for g in gate_reports(&z) {
        checks.push(check(&format!("gate_{}", g.name), g.passed, z.zeta, g.threshold));
    }
    if !gates_ok {
        let v = VerifyJson { zeta: z.zeta, gates: gate_reports(&z), faults, checks, refinement, all_passed: false };
        write_json(&out.join("verify.json"), &v)?;
        eprintln!("{}; invariant suite not run", gate_reason(&z, Gate::Right));
        return Ok(EXIT_GATE);
    }

    let domain = problem.domain();
    let surface = RuledSurface::build(&problem, cfg.n_s, cfg.n_h)?;
    let lam = &surface.lambda;
    checks.push(check("lambda_residual", lam.residual_max <= 1e-11, lam.residual_max, 1e-11));
    let mut c = check("lambda_slope_window", lam.certified, lam.lip_lo, lam.window.0 - lam.eps_grid);
    c.detail = Some(format!(
        "interior slopes [{}, {}] against window [{}, {}] +- {}",
        lam.lip_lo, lam.lip_hi, lam.window.0, lam.window.1, lam.eps_grid
    ));
    checks.push(c);
    let mono = lam.strictly_increasing() && lam.endpoints_exact();
    checks.push(check("lambda_monotone_endpoint_exact", mono, mono as u8 as f64, 1.0));
    let horiz = surface.horizontality_at(&[0.0, 0.25, 0.5, 0.75, 1.0]);
    checks.push(check("horizontality", horiz <= 1e-10, horiz, 1e-10));

    let u = left_graph(&problem, cfg.n_y, cfg.n_t)?;
    checks.push(check("boundary_residual", u.boundary_residual <= 1e-9, u.boundary_residual, 1e-9));
    let rt = round_trip(&problem, &u)?;
    let rt_max = rt.value.max(rt.left_identity);
    checks.push(check("graph_round_trip", rt_max <= 1e-9, rt_max, 1e-9));
    let (adm, slope) = check_admissible(&u);
    checks.push(check("beta_monotone", adm, slope, 0.0));

    let ladder = refinement_ladder(cfg.n_y.min(cfg.n_t));
    let (ss, hs) = consistency_samples(problem.t_bar(), 17);
    let mut spread = Vec::new();
    let mut fdev = Vec::new();
    let mut gap = Vec::new();
    let mut dom = Vec::new();
    let mut surf = Vec::new();
    for &n in &ladder {
        let un = if n == cfg.n_y && n == cfg.n_t { u.clone() } else { left_graph(&problem, n, n)? };
        let field = burgers_fd(&un)?;
        let rc = ruling_consistency(&problem, &field, &ss, &hs)?;
        spread.push(rc.spread_max);
        fdev.push(rc.formula_dev_max);
        let d = crate::area::h_area_from_field(domain, &field).area;
        let s = h_area_surface(domain, &RuledSurface::build(&problem, n, n)?).area;
        gap.push((d - s).abs());
        dom.push(d);
        surf.push(s);
    }
    for (name, errors) in [("burgers_spread", &spread), ("burgers_formula", &fdev), ("area_route_gap", &gap)] {
        let ord = orders(&ladder, errors);
        let passed = ladder.len() >= 2 && decay_passes(errors, &ord, 0.9);
        let mut c = check(&format!("{name}_order"), passed, ord.iter().copied().fold(f64::INFINITY, f64::min), 0.9);
        c.detail = Some(format!("errors {errors:?} on grids {ladder:?}"));
        checks.push(c);
        refinement.push(Refinement { quantity: name, grids: ladder.clone(), errors: errors.clone(), orders: ord });
    }
    if ladder.len() == 3 {
        let de = extrapolate_observed(dom[0], dom[1], dom[2]);
        let se = extrapolate_observed(surf[0], surf[1], surf[2]);
        checks.push(check("area_extrapolated_agreement", (de - se).abs() <= 1e-6, (de - se).abs(), 1e-6));
    }

    let table = right_domain(&problem, &u)?;
    let cg = cfg.calib_grid;
    let coarse = CalibrationField::build(&problem, &table, (cg - 1) / 2 + 1)?.with_mu_bar_offset(faults.mu_bar_offset);
    let field = CalibrationField::build(&problem, &table, cg)?.with_mu_bar_offset(faults.mu_bar_offset);
    let unit = field.unit_norm_residual().max(coarse.unit_norm_residual());
    checks.push(check("calibration_unit_norm", unit <= 1e-12, unit, 1e-12));
    let cgrids = [coarse.n_eta(), field.n_eta()];
    let divs = [coarse.divergence_residual().max_interior, field.divergence_residual().max_interior];
    let dord = orders(&cgrids, &divs);
    let mut c = check("calibration_divergence_order", decay_passes(&divs, &dord, 0.9), dord[0], 0.9);
    c.detail = Some(format!("interior residuals {divs:?} on grids {cgrids:?}"));
    checks.push(c);
    refinement.push(Refinement {
        quantity: "calibration_divergence",
        grids: cgrids.to_vec(),
        errors: divs.to_vec(),
        orders: dord,
    });
    let agree = normal_agreement(&problem, &field, &u)?;
    checks.push(check("calibration_normal_agreement", agree <= 1e-8, agree, 1e-8));

    let bump = stationarity_bump(&problem);
    match stationarity_slope(domain, &u, &bump, &cfg.stationarity_ladder) {
        Ok(st) => checks.push(check("stationarity", st.extrapolated.abs() <= 1e-6, st.extrapolated, 1e-6)),
        Err(e) => {
            let mut c = check("stationarity", false, f64::NAN, 1e-6);
            c.detail = Some(e.to_string());
            checks.push(c);
        }
    }

    let all_passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        println!("{} {:<34} {:.6e} (tol {:.1e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.tolerance);
    }
    let v = VerifyJson { zeta: z.zeta, gates: gate_reports(&z), faults, checks, refinement, all_passed };
    write_json(&out.join("verify.json"), &v)?;
    Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompeteJson {
    pub seed: u64,
    pub area_u: f64,
    pub tol_area: f64,
    pub reports: Vec<CompetitorReport>,
    pub stationarity: Option<StationarityReport>,
    pub all_margins_ok: bool,
}

fn solved_u(cfg: &CaseConfig, problem: &PlateauProblem) -> Result<GraphFunction> {
    problem.require(Gate::Right)?;
    left_graph(problem, cfg.n_y, cfg.n_t)
}

pub fn cmd_compete(cfg: &CaseConfig, out: &Path) -> Result<i32> {
    let problem = cfg.problem()?;
    let u = solved_u(cfg, &problem)?;
    let domain = problem.domain();
    let area_u = h_area_domain(domain, &u)?.area;
    let tol_area = area_tolerance(area_u);
    let bumps = random_bumps(domain, &u.grid, cfg.seed, cfg.bumps)?;
    let reports = compete(domain, &u, &bumps, &cfg.epsilons)?;
    let all_margins_ok = reports.iter().all(|r| !r.admissible || r.margin >= -tol_area);
    let stationarity = stationarity_slope(domain, &u, &stationarity_bump(&problem), &cfg.stationarity_ladder).ok();
    let n_adm = reports.iter().filter(|r| r.admissible).count();
    let worst = reports.iter().filter(|r| r.admissible).map(|r| r.margin).fold(f64::INFINITY, f64::min);
    println!("{} competitors, {n_adm} admissible, smallest margin {worst:.6e} (tol {tol_area:.3e})", reports.len());
    write_json(
        &out.join("compete.json"),
        &CompeteJson { seed: cfg.seed, area_u, tol_area, reports, stationarity, all_margins_ok },
    )?;
    Ok(if all_margins_ok { EXIT_OK } else { EXIT_VERIFY })
}

pub fn cmd_probe(cfg: &CaseConfig, out: &Path) -> Result<i32> {
    let problem = cfg.problem()?;
    problem.require(Gate::Left)?;
    let u = left_graph(&problem, cfg.n_y, cfg.n_t)?;
    let w0 = WPoint::new(cfg.probe_w0.0, cfg.probe_w0.1);
    let rep: RegularityProbeReport = regularity_probe(&u, w0, cfg.probe_r, &cfg.probe_rhos, ProbeOptions::default())?;
    for g in &rep.rungs {
        match (g.deviation, &g.skip_reason) {
            (Some(d), _) => println!(
                "rho {:<8} rho*ell {:.6e}  zeta bound {:.6e}  max|v - u_local| {d:.6e}",
                g.rho, g.rho_ell, g.zeta_bound
            ),
            (None, Some(why)) => println!("rho {:<8} rho*ell {:.6e}  skipped: {why}", g.rho, g.rho_ell),
            (None, None) => {}
        }
    }
    println!("trend slope of rho*ell: {:.4}", rep.trend_slope);
    write_json(&out.join("probe.json"), &rep)?;
    if !rep.any_resolved {
        eprintln!("no rung passed the local gate {}", Gate::Right.closed_form());
        return Ok(EXIT_GATE);
    }
    let consistent = rep.rungs.iter().filter_map(|g| g.deviation).all(|d| d <= PROBE_TOL);
    Ok(if consistent { EXIT_OK } else { EXIT_VERIFY })
}

pub fn cmd_export(cfg: &CaseConfig, faults: Faults, out: &Path) -> Result<i32> {
    let problem = cfg.problem()?;
    problem.require(Gate::Interp)?;
    let surface = RuledSurface::build(&problem, cfg.n_s, cfg.n_h)?;
    export_mesh(&surface, &out.join("surface.obj"), &out.join("surface_bu.csv"))?;
    if !problem.zeta().passes(Gate::Right) {
        eprintln!("{}; calibration field skipped", gate_reason(problem.zeta(), Gate::Right));
        return Ok(EXIT_GATE);
    }
    let u = left_graph(&problem, cfg.n_y, cfg.n_t)?;
    let table = right_domain(&problem, &u)?;
    let field = CalibrationField::build(&problem, &table, cfg.calib_grid)?.with_mu_bar_offset(faults.mu_bar_offset);
    write_csv_file(
        &out.join("field.csv"),
        &["eta", "tau", "lambda_bar", "mu_bar", "div"],
        field.rows().into_iter().map(|r| r.to_vec()),
    )?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faults() {
        assert_eq!(Faults::parse(&[]).unwrap().mu_bar_offset, 0.0);
        assert_eq!(Faults::parse(&["mu_bar_offset=0.01".into()]).unwrap().mu_bar_offset, 0.01);
        assert!(Faults::parse(&["nope=1".into()]).is_err());
        assert!(Faults::parse(&["mu_bar_offset".into()]).is_err());
    }

    #[test]
    fn ladders_and_orders() {
        assert_eq!(refinement_ladder(257), vec![65, 129, 257]);
        assert_eq!(refinement_ladder(33), vec![17, 33]);
        assert_eq!(refinement_ladder(40), vec![40]);
        let o = orders(&[65, 129, 257], &[4e-4, 1e-4, 2.5e-5]);
        assert!(o.iter().all(|p| (p - 2.0).abs() < 1e-12));
        assert!(decay_passes(&[1.0, 0.5], &[1.0], 0.9));
        assert!(!decay_passes(&[1.0, 0.9], &[0.15], 0.9));
        assert!(decay_passes(&[0.0, 0.0], &[f64::NAN], 0.9));
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(main_with_args(["plateau", "solve"]), EXIT_ERROR);
        assert_eq!(main_with_args(["plateau", "frobnicate"]), EXIT_ERROR);
        assert_eq!(main_with_args(["plateau", "--help"]), EXIT_OK);
    }
}
