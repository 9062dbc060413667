//! Bracketed scalar root finding (Brent's method).

use crate::error::{Error, Result};

/// Finds a root of `f` in `[a, b]` given values of opposite sign at the ends.
///
/// Returns as soon as a function value is exactly zero or the bracket is
/// narrower than `xtol`.
pub fn brent<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidInput(format!(
            "root not bracketed: f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    let (lo, hi) = if b < c { (b, c) } else { (c, b) };
    Err(Error::NotConverged { iterations: max_iter, lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let r = brent(f, 0.0, 2.0, -2.0, 6.0, 1e-14, 100).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 2.0, 2.0, 1e-12, 50).is_err());
    }

    #[test]
    fn reports_best_bracket_on_budget() {
        let err = brent(|x: f64| Ok(x.tanh()), -5.0, 3.0, -1.0, 1.0, 0.0, 2).unwrap_err();
        assert!(matches!(err, Error::NotConverged { iterations: 2, .. }));
    }
}
