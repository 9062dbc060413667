//! Dormand–Prince 5(4) embedded pair for two-dimensional first-order systems.
//!
//! The radial equations are linear and homogeneous, so the step controller
//! measures errors against the current solution magnitude (scale invariant)
//! and the state may be rescaled between steps without changing the path.

use crate::error::{Error, Result};

pub type State = [f64; 2];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order weights minus fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, max_steps: 2_000_000 }
    }
}

/// One accepted point of the trajectory: `x`, state, and its derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accepted {
    pub x: f64,
    pub y: State,
    pub dy: State,
}

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1 > x0`.
///
/// `on_step` is called for the initial point and after every accepted step;
/// it may rescale the state in place (the derivative is rescaled to match by
/// the caller returning the factor it applied).
pub fn integrate<F, S>(
    f: F,
    x0: f64,
    y0: State,
    x1: f64,
    h0: f64,
    ctl: &StepControl,
    mut on_step: S,
) -> Result<State>
where
    F: Fn(f64, &State) -> State,
    S: FnMut(&Accepted) -> f64,
{
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let scale = on_step(&Accepted { x, y, dy: k1 });
    if scale != 1.0 {
        rescale(&mut y, &mut k1, scale);
    }
    let span = x1 - x0;
    let mut h = h0.min(span).max(span * 1e-14);
    let mut steps = 0usize;
    let mut last_rejected = false;

    while x < x1 {
        if steps >= ctl.max_steps {
            return Err(Error::IntegrationFailure { radius: x, reason: "step budget exhausted" });
        }
        if x + h >= x1 || x + 1.01 * h >= x1 {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            x + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            x + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let x_new = if h == x1 - x { x1 } else { x + h };
        let k7 = f(x_new, &y_new);

        let norm = y[0].abs().max(y[1].abs()).max(y_new[0].abs().max(y_new[1].abs()));
        let mut err2 = 0.0;
        for i in 0..2 {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = ctl.atol * norm + ctl.rtol * y[i].abs().max(y_new[i].abs());
            let sc = if sc > 0.0 { sc } else { f64::MIN_POSITIVE };
            err2 += (e / sc) * (e / sc);
        }
        let err = (0.5 * err2).sqrt();
        if !err.is_finite() {
            h *= 0.1;
            last_rejected = true;
            if h <= 1e-14 * x.abs().max(1e-300) {
                return Err(Error::IntegrationFailure { radius: x, reason: "non-finite state" });
            }
            continue;
        }

        steps += 1;
        if err <= 1.0 {
            x = x_new;
            y = y_new;
            k1 = k7;
            let scale = on_step(&Accepted { x, y, dy: k1 });
            if scale != 1.0 {
                rescale(&mut y, &mut k1, scale);
            }
            let mut fac = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h *= fac;
            last_rejected = false;
        } else {
            let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            h *= fac;
            last_rejected = true;
        }
        if h <= 1e-15 * x.abs().max(1e-300) {
            return Err(Error::IntegrationFailure { radius: x, reason: "step size underflow" });
        }
    }
    Ok(y)
}

fn rescale(y: &mut State, dy: &mut State, factor: f64) {
    y[0] *= factor;
    y[1] *= factor;
    dy[0] *= factor;
    dy[1] *= factor;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_full_period() {
        let ctl = StepControl::default();
        let mut count = 0;
        let y = integrate(
            |_, y| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            2.0 * std::f64::consts::PI,
            0.01,
            &ctl,
            |_| {
                count += 1;
                1.0
            },
        )
        .unwrap();
        assert!(y[0].abs() < 1e-8, "{y:?}");
        assert!((y[1] - 1.0).abs() < 1e-8);
        assert!(count > 10);
    }

    #[test]
    fn fifth_order_convergence_on_exponential() {
        // Error should fall by roughly the tolerance ratio.
        let run = |tol: f64| {
            let ctl = StepControl { rtol: tol, atol: tol, max_steps: 1_000_000 };
            let y = integrate(|_, y| [y[1], y[0]], 0.0, [1.0, 1.0], 3.0, 0.1, &ctl, |_| 1.0).unwrap();
            (y[0] - 3.0f64.exp()).abs() / 3.0f64.exp()
        };
        let e1 = run(1e-6);
        let e2 = run(1e-10);
        assert!(e2 < 1e-8, "{e2}");
        assert!(e2 < e1);
    }

    #[test]
    fn rescaling_does_not_change_direction() {
        let ctl = StepControl::default();
        let plain =
            integrate(|_, y| [y[1], 4.0 * y[0]], 0.0, [1.0, 0.0], 10.0, 0.01, &ctl, |_| 1.0).unwrap();
        let mut total = 1.0;
        let scaled = integrate(
            |_, y| [y[1], 4.0 * y[0]],
            0.0,
            [1.0, 0.0],
            10.0,
            0.01,
            &ctl,
            |p| {
                let n = p.y[0].abs().max(p.y[1].abs());
                if n > 1e3 {
                    total *= 1.0 / n;
                    1.0 / n
                } else {
                    1.0
                }
            },
        )
        .unwrap();
        assert!((scaled[0] / total - plain[0]).abs() / plain[0] < 1e-9);
        assert!((scaled[1] / scaled[0] - plain[1] / plain[0]).abs() < 1e-9);
    }

    #[test]
    fn step_budget_is_reported() {
        let ctl = StepControl { rtol: 1e-12, atol: 1e-12, max_steps: 5 };
        let err = integrate(|_, y| [y[1], -y[0]], 0.0, [0.0, 1.0], 100.0, 0.01, &ctl, |_| 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::IntegrationFailure { .. }));
    }
}
