//! Small numerical helpers: compensated summation and refinement-study arithmetic.

/// Neumaier's compensated sum. Order-dependent, so callers feed it in index order.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::default();
    for x in xs {
        acc.add(x);
    }
    acc.total()
}

/// Observed convergence order between consecutive entries of an error
/// sequence on grids whose spacing shrinks by `ratio` each step.
pub fn observed_orders(errors: &[f64], ratio: f64) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).ln() / ratio.ln()).collect()
}

/// Richardson extrapolation of `coarse`/`fine` values (spacing ratio 2)
/// assuming an error term of order `p`.
pub fn richardson(coarse: f64, fine: f64, p: f64) -> f64 {
    let k = 2f64.powf(p);
    (k * fine - coarse) / (k - 1.0)
}

/// Richardson step on three successive grids (spacing ratio 2) with the
/// order read off the data; falls back to the finest value when the
/// differences do not shrink monotonically.
pub fn extrapolate_observed(v0: f64, v1: f64, v2: f64) -> f64 {
    let (d1, d2) = (v1 - v0, v2 - v1);
    if d1 * d2 > 0.0 && d2.abs() < d1.abs() {
        richardson(v1, v2, (d1 / d2).log2())
    } else {
        v2
    }
}

/// Three-point derivative weights at `x0` for nodes `xs` (Fornberg, first derivative).
pub fn diff_weights3(x0: f64, xs: [f64; 3]) -> [f64; 3] {
    let [a, b, c] = xs;
    [
        (2.0 * x0 - b - c) / ((a - b) * (a - c)),
        (2.0 * x0 - a - c) / ((b - a) * (b - c)),
        (2.0 * x0 - a - b) / ((c - a) * (c - b)),
    ]
}
