//! `key = value` case files.
//!
//! ```text
//! # canonical case
//! t_bar  = 2
//! gamma1 = poly(0, -0.5, 0.25)
//! gamma2 = poly(0, 0.5, -0.25)
//! phi1   = poly(0, 0.006, -0.003)
//! phi2   = poly(0)
//! grid   = 129
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::domain::{BoundaryDatum, LenticularDomain, ZetaOptions};
use crate::error::{Error, Result};
use crate::function::{parse_function_expr, ScalarFn1D};
use crate::ruling::PlateauProblem;

const KEYS: &[&str] = &[
    "t_bar",
    "gamma1",
    "gamma2",
    "phi1",
    "phi2",
    "grid",
    "n_s",
    "n_y",
    "n_t",
    "n_h",
    "calib_grid",
    "tol",
    "lip_grid",
    "lip_safety",
    "seed",
    "out",
    "bumps",
    "epsilons",
    "stationarity_ladder",
    "probe_w0",
    "probe_r",
    "probe_rhos",
];

#[derive(Debug, Clone, Serialize)]
pub struct CaseConfig {
    pub t_bar: f64,
    /// Source expressions, kept for reports.
    pub exprs: BTreeMap<String, String>,
    #[serde(skip)]
    pub gamma1: ScalarFn1D,
    #[serde(skip)]
    pub gamma2: ScalarFn1D,
    #[serde(skip)]
    pub phi1: ScalarFn1D,
    #[serde(skip)]
    pub phi2: ScalarFn1D,
    pub n_s: usize,
    pub n_y: usize,
    pub n_t: usize,
    pub n_h: usize,
    pub calib_grid: usize,
    pub tol: Option<f64>,
    pub lip_grid: usize,
    pub lip_safety: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub bumps: usize,
    pub epsilons: Vec<f64>,
    pub stationarity_ladder: Vec<f64>,
    pub probe_w0: (f64, f64),
    pub probe_r: f64,
    pub probe_rhos: Vec<f64>,
}

struct Entry {
    line: usize,
    col: usize,
    value: String,
}

impl CaseConfig {
    /// Every grid size at once.
    pub fn set_grid(&mut self, n: usize) {
        self.n_s = n;
        self.n_y = n;
        self.n_t = n;
    }

    pub fn domain(&self) -> Result<LenticularDomain> {
        LenticularDomain::new(self.t_bar, self.gamma1.clone(), self.gamma2.clone())
    }

    pub fn datum(&self) -> BoundaryDatum {
        BoundaryDatum::new(self.phi1.clone(), self.phi2.clone())
    }

    pub fn zeta_options(&self) -> ZetaOptions {
        ZetaOptions { n_grid: self.lip_grid, lip_safety: self.lip_safety }
    }

    pub fn problem(&self) -> Result<PlateauProblem> {
        PlateauProblem::with_options(self.domain()?, self.datum(), self.zeta_options(), self.tol)
    }
}

pub fn load_config(path: &Path) -> Result<CaseConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, &path.display().to_string(), base)
}

/// Parses a case file. All problems are collected and returned together;
/// `source` names the file in diagnostics and `base_dir` resolves `samples(...)`.
pub fn parse_config(text: &str, source: &str, base_dir: &Path) -> Result<CaseConfig> {
    let mut errors = Vec::new();
    let err = |line: usize, col: usize, msg: String| Error::Parse { path: source.to_string(), line, col, msg };
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            errors.push(err(line, 1, format!("expected `key = value`, got `{}`", content.trim())));
            continue;
        };
        let key = content[..eq].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        if !KEYS.contains(&key) {
            errors.push(err(line, key_col, format!("unknown key {key}")));
            continue;
        }
        let rest = &content[eq + 1..];
        let col = eq + 2 + (rest.len() - rest.trim_start().len());
        if let Some(prev) = entries.get(key) {
            errors.push(err(line, key_col, format!("duplicate key {key} (first set on line {})", prev.line)));
            continue;
        }
        entries.insert(key.to_string(), Entry { line, col, value: rest.trim().to_string() });
    }

    let number = |key: &str, errors: &mut Vec<Error>| -> Option<f64> {
        let e = entries.get(key)?;
        match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                errors.push(err(e.line, e.col, format!("malformed number `{}` for {key}", e.value)));
                None
            }
        }
    };
    let count = |key: &str, min: u64, errors: &mut Vec<Error>| -> Option<u64> {
        let e = entries.get(key)?;
        match e.value.parse::<u64>() {
            Ok(v) if v >= min => Some(v),
            _ => {
                errors.push(err(e.line, e.col, format!("{key} must be an integer >= {min}, got `{}`", e.value)));
                None
            }
        }
    };
    let list = |key: &str, len: Option<usize>, errors: &mut Vec<Error>| -> Option<Vec<f64>> {
        let e = entries.get(key)?;
        let parsed: std::result::Result<Vec<f64>, _> = e.value.split(',').map(|p| p.trim().parse::<f64>()).collect();
        match parsed {
            Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) && len.is_none_or(|n| v.len() == n) => Some(v),
            _ => {
                errors.push(err(e.line, e.col, format!("malformed list `{}` for {key}", e.value)));
                None
            }
        }
    };

    let t_bar = match number("t_bar", &mut errors) {
        Some(t) if t > 0.0 => Some(t),
        Some(t) => {
            let e = &entries["t_bar"];
            errors.push(err(e.line, e.col, format!("t_bar must be positive, got {t}")));
            None
        }
        None if !entries.contains_key("t_bar") => {
            errors.push(err(0, 0, "missing required key t_bar".into()));
            None
        }
        None => None,
    };

    let mut exprs = BTreeMap::new();
    let mut functions = Vec::new();
    for key in ["gamma1", "gamma2", "phi1", "phi2"] {
        let required = key.starts_with("gamma");
        let f = match (entries.get(key), t_bar) {
            (None, _) if required => {
                errors.push(err(0, 0, format!("missing required key {key}")));
                None
            }
            (None, Some(t)) => {
                exprs.insert(key.to_string(), "poly(0)".to_string());
                ScalarFn1D::zero(t).ok()
            }
            (Some(e), Some(t)) => {
                exprs.insert(key.to_string(), e.value.clone());
                match parse_function_expr(&e.value, t, base_dir) {
                    Ok(f) => Some(f),
                    Err(x) => {
                        errors.push(err(e.line, e.col + x.col, x.msg));
                        None
                    }
                }
            }
            (_, None) => None,
        };
        functions.push(f);
    }

    let grid = count("grid", 3, &mut errors);
    let n_s = count("n_s", 16, &mut errors).or(grid).unwrap_or(257) as usize;
    let n_y = count("n_y", 3, &mut errors).or(grid).unwrap_or(257) as usize;
    let n_t = count("n_t", 3, &mut errors).or(grid).unwrap_or(257) as usize;
    let n_h = count("n_h", 2, &mut errors).unwrap_or(9) as usize;
    let calib_grid = count("calib_grid", 5, &mut errors).unwrap_or(65) as usize;
    let tol = number("tol", &mut errors);
    let lip_grid = count("lip_grid", 2, &mut errors).unwrap_or(ZetaOptions::default().n_grid as u64) as usize;
    let lip_safety = number("lip_safety", &mut errors).unwrap_or(ZetaOptions::default().lip_safety);
    let seed = count("seed", 0, &mut errors).unwrap_or(0);
    let out = entries.get("out").map(|e| base_dir.join(&e.value)).unwrap_or_else(|| PathBuf::from("out"));
    let bumps = count("bumps", 0, &mut errors).unwrap_or(20) as usize;
    let epsilons = list("epsilons", None, &mut errors).unwrap_or_else(|| vec![1e-3, 1e-2]);
    let stationarity_ladder =
        list("stationarity_ladder", None, &mut errors).unwrap_or_else(|| vec![1e-2, 5e-3, 2.5e-3]);
    let tb = t_bar.unwrap_or(1.0);
    let probe_w0 = list("probe_w0", Some(2), &mut errors).map(|v| (v[0], v[1])).unwrap_or((0.0, tb / 2.0));
    let probe_r = number("probe_r", &mut errors).unwrap_or(tb / 4.0);
    let probe_rhos =
        list("probe_rhos", None, &mut errors).unwrap_or_else(|| vec![0.2 * probe_r, 0.1 * probe_r, 0.05 * probe_r]);
    for (key, ok) in [
        ("tol", tol.is_none_or(|t| t > 0.0)),
        ("lip_safety", lip_safety >= 1.0),
        ("probe_r", probe_r > 0.0),
        ("stationarity_ladder", stationarity_ladder.iter().all(|&e| e > 0.0)),
    ] {
        if !ok {
            let e = &entries[key];
            errors.push(err(e.line, e.col, format!("invalid value `{}` for {key}", e.value)));
        }
    }

    if !errors.is_empty() {
        return Err(if errors.len() == 1 { errors.pop().unwrap() } else { Error::ParseErrors(errors) });
    }
    let mut fs = functions.into_iter().map(Option::unwrap);
    Ok(CaseConfig {
        t_bar: tb,
        exprs,
        gamma1: fs.next().unwrap(),
        gamma2: fs.next().unwrap(),
        phi1: fs.next().unwrap(),
        phi2: fs.next().unwrap(),
        n_s,
        n_y,
        n_t,
        n_h,
        calib_grid,
        tol,
        lip_grid,
        lip_safety,
        seed,
        out,
        bumps,
        epsilons,
        stationarity_ladder,
        probe_w0,
        probe_r,
        probe_rhos,
    })
}
