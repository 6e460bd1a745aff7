//! Real functions on `[0, t̄]`: polynomials and piecewise-linear sample tables.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points within this distance outside `[0, t̄]` are clamped instead of rejected.
pub const CLAMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Repr {
    /// `Σ cᵢ tⁱ`.
    Polynomial { coeffs: Vec<f64> },
    /// Linear interpolation between strictly increasing nodes.
    PiecewiseLinear { ts: Vec<f64>, vs: Vec<f64> },
}

/// An evaluable function on `[0, t̄]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarFn1D {
    repr: Repr,
    t_bar: f64,
}

impl ScalarFn1D {
    pub fn polynomial(coeffs: Vec<f64>, t_bar: f64) -> Result<Self> {
        check_t_bar(t_bar)?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidFunction("non-finite polynomial coefficient".into()));
        }
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Ok(Self { repr: Repr::Polynomial { coeffs }, t_bar })
    }

    pub fn zero(t_bar: f64) -> Result<Self> {
        Self::polynomial(vec![0.0], t_bar)
    }

    /// Piecewise-linear interpolant of `(ts[i], vs[i])`. The nodes must be
    /// strictly increasing and cover `0` and `t̄` (to within [`CLAMP_TOL`]).
    pub fn samples(ts: Vec<f64>, vs: Vec<f64>, t_bar: f64) -> Result<Self> {
        check_t_bar(t_bar)?;
        if ts.len() != vs.len() {
            return Err(Error::InvalidFunction(format!("{} abscissae but {} values", ts.len(), vs.len())));
        }
        if ts.len() < 2 {
            return Err(Error::InvalidFunction("need at least two samples".into()));
        }
        if ts.iter().chain(vs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction("non-finite sample".into()));
        }
        if let Some(i) = ts.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidFunction(format!("sample abscissae not strictly increasing at index {}", i + 1)));
        }
        let (first, last) = (ts[0], ts[ts.len() - 1]);
        if first.abs() > CLAMP_TOL || (last - t_bar).abs() > CLAMP_TOL * (1.0 + t_bar) {
            return Err(Error::InvalidFunction(format!(
                "samples cover [{first}, {last}] but the domain is [0, {t_bar}]"
            )));
        }
        let mut ts = ts;
        ts[0] = 0.0;
        let n = ts.len();
        ts[n - 1] = t_bar;
        Ok(Self { repr: Repr::PiecewiseLinear { ts, vs }, t_bar })
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn t_bar(&self) -> f64 {
        self.t_bar
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.repr, Repr::Polynomial { .. })
    }

    /// Checked evaluation; points slightly outside the domain are clamped.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= -CLAMP_TOL && t <= self.t_bar + CLAMP_TOL * (1.0 + self.t_bar)) {
            return Err(Error::OutOfDomain { t, t_bar: self.t_bar });
        }
        if t < 0.0 || t > self.t_bar {
            log::warn!("clamping t = {t:e} into [0, {}]", self.t_bar);
        }
        Ok(self.value(t))
    }

    /// Evaluation with silent clamping into `[0, t̄]`.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.t_bar);
        match &self.repr {
            Repr::Polynomial { coeffs } => horner(coeffs, t),
            Repr::PiecewiseLinear { ts, vs } => {
                let n = ts.len();
                if t >= ts[n - 1] {
                    return vs[n - 1];
                }
                // First node strictly greater than t; the segment starts one before.
                let i = ts.partition_point(|&x| x <= t) - 1;
                if t == ts[i] {
                    return vs[i];
                }
                vs[i] + (t - ts[i]) * (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])
            }
        }
    }

    /// Derivative (right derivative at piecewise-linear nodes, left at `t̄`).
    #[inline]
    pub fn derivative(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.t_bar);
        match &self.repr {
            Repr::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * t + k as f64 * c;
                }
                acc
            }
            Repr::PiecewiseLinear { ts, vs } => {
                let n = ts.len();
                let i = (ts.partition_point(|&x| x <= t)).clamp(1, n - 1) - 1;
                (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])
            }
        }
    }

    /// Second derivative; zero between piecewise-linear nodes.
    pub fn second_derivative(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.t_bar);
        match &self.repr {
            Repr::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for (k, c) in coeffs.iter().enumerate().skip(2).rev() {
                    acc = acc * t + (k * (k - 1)) as f64 * c;
                }
                acc
            }
            Repr::PiecewiseLinear { .. } => 0.0,
        }
    }

    /// `k · f`, same representation.
    pub fn scaled(&self, k: f64) -> Self {
        let repr = match &self.repr {
            Repr::Polynomial { coeffs } => Repr::Polynomial { coeffs: coeffs.iter().map(|c| k * c).collect() },
            Repr::PiecewiseLinear { ts, vs } => {
                Repr::PiecewiseLinear { ts: ts.clone(), vs: vs.iter().map(|v| k * v).collect() }
            }
        };
        Self { repr, t_bar: self.t_bar }
    }

    /// `−f`.
    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Sup-norm and Lipschitz estimate.
    ///
    /// Piecewise-linear input is handled exactly (extremes and slopes live on
    /// the nodes). For polynomials both quantities are sampled on `n_grid`
    /// uniform nodes, and the slope estimate takes the larger of the chord
    /// slopes and `|f′|` at the nodes. This can under-estimate by `O(h²)`.
    pub fn sup_and_lip(&self, n_grid: usize) -> (f64, f64) {
        match &self.repr {
            Repr::PiecewiseLinear { ts, vs } => {
                let sup = vs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let lip = ts
                    .windows(2)
                    .zip(vs.windows(2))
                    .map(|(t, v)| ((v[1] - v[0]) / (t[1] - t[0])).abs())
                    .fold(0.0f64, f64::max);
                (sup, lip)
            }
            Repr::Polynomial { .. } => {
                let n = n_grid.max(2);
                let h = self.t_bar / (n - 1) as f64;
                let node = |i: usize| if i == n - 1 { self.t_bar } else { i as f64 * h };
                let mut sup = 0.0f64;
                let mut lip = 0.0f64;
                let mut prev = self.value(0.0);
                for i in 0..n {
                    let t = node(i);
                    let v = self.value(t);
                    sup = sup.max(v.abs());
                    lip = lip.max(self.derivative(t).abs());
                    if i > 0 {
                        lip = lip.max(((v - prev) / (t - node(i - 1))).abs());
                    }
                    prev = v;
                }
                (sup, lip)
            }
        }
    }
}

fn check_t_bar(t_bar: f64) -> Result<()> {
    if t_bar.is_finite() && t_bar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidFunction(format!("t_bar must be positive, got {t_bar}")))
    }
}

#[inline]
fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

impl fmt::Display for ScalarFn1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Polynomial { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(|c| format!("{c}")).collect();
                write!(f, "poly({})", parts.join(", "))
            }
            Repr::PiecewiseLinear { ts, .. } => write!(f, "samples(<{} nodes>)", ts.len()),
        }
    }
}

/// Parse error inside a function expression: byte column (0-based) and message.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

/// Parse `poly(c0, c1, ..., cn)` or `samples(path.csv)`. Relative sample paths
/// resolve against `base_dir`.
pub fn parse_function_expr(expr: &str, t_bar: f64, base_dir: &Path) -> std::result::Result<ScalarFn1D, ExprError> {
    let lead = expr.len() - expr.trim_start().len();
    let body = expr.trim();
    let err = |col: usize, msg: String| ExprError { col: lead + col, msg };
    let open = body.find('(').ok_or_else(|| err(0, format!("expected `poly(...)` or `samples(...)`, got `{body}`")))?;
    if !body.ends_with(')') {
        return Err(err(body.len(), "missing closing `)`".into()));
    }
    let head = body[..open].trim();
    let inner = &body[open + 1..body.len() - 1];
    match head {
        "poly" => {
            let mut coeffs = Vec::new();
            let mut offset = open + 1;
            for piece in inner.split(',') {
                let trimmed = piece.trim();
                let col = offset + (piece.len() - piece.trim_start().len());
                let c: f64 = trimmed.parse().map_err(|_| err(col, format!("malformed coefficient `{trimmed}`")))?;
                if !c.is_finite() {
                    return Err(err(col, format!("non-finite coefficient `{trimmed}`")));
                }
                coeffs.push(c);
                offset += piece.len() + 1;
            }
            ScalarFn1D::polynomial(coeffs, t_bar).map_err(|e| err(0, e.to_string()))
        }
        "samples" => {
            let rel = inner.trim();
            if rel.is_empty() {
                return Err(err(open + 1, "empty sample path".into()));
            }
            let path = base_dir.join(rel);
            let (ts, vs) = read_samples_csv(&path).map_err(|e| err(open + 1, e.to_string()))?;
            ScalarFn1D::samples(ts, vs, t_bar).map_err(|e| err(open + 1, e.to_string()))
        }
        other => Err(err(0, format!("unknown function kind `{other}`"))),
    }
}

/// Two-column `t,value` CSV without header; `#` lines and blank lines are skipped.
pub fn read_samples_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let shown = path.display().to_string();
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse_err = |col: usize, msg: String| Error::Parse { path: shown.clone(), line: lineno + 1, col, msg };
        if cols.len() != 2 {
            return Err(parse_err(1, format!("expected 2 columns, found {}", cols.len())));
        }
        let t: f64 = cols[0].parse().map_err(|_| parse_err(1, format!("malformed number `{}`", cols[0])))?;
        let v: f64 =
            cols[1].parse().map_err(|_| parse_err(cols[0].len() + 2, format!("malformed number `{}`", cols[1])))?;
        if let Some(&prev) = ts.last() {
            if t <= prev {
                return Err(parse_err(1, format!("t = {t} not strictly increasing")));
            }
        }
        ts.push(t);
        vs.push(v);
    }
    Ok((ts, vs))
}
