//! Bracketed scalar root finding.
//!
//! Every solver here keeps a sign-change bracket and only accepts a Newton
//! step when it lands strictly inside it. Iteration stops at machine
//! resolution of the bracket, not at a user tolerance: callers check their
//! own residual tolerance on the returned point.

/// A root estimate together with the function value there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// The function does not change sign on the supplied bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoSignChange {
    pub fa: f64,
    pub fb: f64,
}

const MAX_ITER: usize = 2000;

fn resolved(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs());
    b - a <= 4.0 * f64::EPSILON * scale || b - a <= f64::MIN_POSITIVE
}

/// Safeguarded Newton on `[a, b]` given the endpoint values.
///
/// `f` returns `(value, derivative)`; a non-finite derivative forces a
/// bisection step, so passing `f64::NAN` gives plain bisection.
pub fn newton_bracketed<F>(f: F, a: f64, fa: f64, b: f64, fb: f64) -> Result<Root, NoSignChange>
where
    F: Fn(f64) -> (f64, f64),
{
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, iterations: 0 });
    }
    if !(fa.is_finite() && fb.is_finite()) || (fa < 0.0) == (fb < 0.0) {
        return Err(NoSignChange { fa, fb });
    }
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    // Orientation: is f negative at `lo`?
    let neg_lo = if a <= b { fa < 0.0 } else { fb < 0.0 };
    let mut best =
        if fa.abs() <= fb.abs() { Root { x: a, fx: fa, iterations: 0 } } else { Root { x: b, fx: fb, iterations: 0 } };
    let mut x = 0.5 * (lo + hi);
    // Step sizes of the last two iterations (Numerical Recipes' rtsafe rule).
    let mut dx = hi - lo;
    let mut dx_old = dx;
    for it in 1..=MAX_ITER {
        let (fx, dfx) = f(x);
        if fx.abs() < best.fx.abs() {
            best = Root { x, fx, iterations: it };
        }
        best.iterations = it;
        if fx == 0.0 {
            return Ok(best);
        }
        if (fx < 0.0) == neg_lo {
            lo = x;
        } else {
            hi = x;
        }
        if resolved(lo, hi) {
            return Ok(best);
        }
        let newton = x - fx / dfx;
        // Bisect when Newton leaves the bracket or does not halve the step.
        let next = if newton.is_finite() && newton > lo && newton < hi && (2.0 * fx).abs() <= (dx_old * dfx).abs() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        dx_old = dx;
        dx = next - x;
        if dx.abs() <= 2.0 * f64::EPSILON * x.abs() {
            return Ok(best);
        }
        x = next;
    }
    Ok(best)
}

/// Plain bisection on `[a, b]`. Without a sign change the endpoint with the
/// smaller `|f|` is returned.
pub fn bisect(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    match newton_bracketed(|x| (f(x), f64::NAN), a, fa, b, fb) {
        Ok(r) => r.x,
        Err(_) => {
            if fa.abs() <= fb.abs() {
                a
            } else {
                b
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_newton_and_bisection() {
        let f = |x: f64| (x * x - 2.0, 2.0 * x);
        let r = newton_bracketed(f, 0.0, -2.0, 2.0, 2.0).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() <= 2.0 * f64::EPSILON);
        assert!(r.iterations < 12);
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0);
        assert!((x - 2f64.sqrt()).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn decreasing_function_and_reversed_bracket() {
        let f = |x: f64| (1.0 - x.exp(), -x.exp());
        let r = newton_bracketed(f, 2.0, f(2.0).0, -1.0, f(-1.0).0).unwrap();
        assert!(r.x.abs() < 1e-15);
    }

    #[test]
    fn endpoint_roots_are_exact() {
        let r = newton_bracketed(|x| (x, 1.0), 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(r.x, 0.0);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn missing_sign_change_is_reported() {
        let e = newton_bracketed(|x| (x * x + 1.0, 2.0 * x), -1.0, 2.0, 1.0, 2.0).unwrap_err();
        assert_eq!(e, NoSignChange { fa: 2.0, fb: 2.0 });
        assert_eq!(bisect(|x| x + 5.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn bad_derivative_falls_back_to_bisection() {
        // A wildly wrong derivative must not break convergence.
        let r = newton_bracketed(|x| (x.powi(3) - 0.3, 1e-9), 0.0, -0.3, 1.0, 0.7).unwrap();
        assert!((r.x - 0.3f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn kinked_function() {
        let f = |x: f64| if x < 0.25 { x - 0.25 } else { 10.0 * (x - 0.25) };
        assert!((bisect(f, 0.0, 1.0) - 0.25).abs() < 1e-16);
    }
}
