//! Independent finite-difference eigenvalue oracle.
//!
//! The weighted quadratic form `∫ (g'² + V g²) J + α Σ g² J` against
//! `∫ g² J` is discretized on a uniform grid with piecewise-linear
//! differences and lumped (dual-cell) mass. The pencil `A - λM` is
//! tridiagonal with diagonal `M`, so Sylvester's law of inertia turns the
//! count of negative LDLᵀ pivots into the number of eigenvalues below `λ`,
//! and bisection on that count isolates any eigenvalue. The pivots are
//! carried in differential form `d_i = w_{i+1/2} + e_i`, which avoids the
//! cancellation of the naive recurrence when `1/h²` is large.
//!
//! The scheme is second order; [`oracle_extrapolated`] combines grids `N`
//! and `2N` by Richardson extrapolation.

use crate::error::{Error, Result};
use crate::quadrature::GaussRule;
use crate::radial::RobinProblem;

struct Pencil {
    /// Edge weights `w_{i+1/2}` between consecutive unknowns; the last entry
    /// is zero (no right neighbour).
    w: Vec<f64>,
    /// Weight carried into the first unknown from an eliminated Dirichlet node.
    w_left: f64,
    q: Vec<f64>,
    mass: Vec<f64>,
}

fn assemble(problem: &RobinProblem, n: usize) -> Pencil {
    let space = problem.space;
    let a = problem.domain.inner;
    let b = problem.domain.outer;
    let h = (b - a) / n as f64;
    let rule = GaussRule::new(3);
    let node = |i: usize| if i == n { b } else { a + i as f64 * h };

    // Weight of every element [r_i, r_{i+1}].
    let elem: Vec<f64> = (0..n)
        .map(|i| rule.integrate(node(i), node(i + 1), |r| space.density(r)) / (h * h))
        .collect();

    let dirichlet = problem.domain.is_ball() && problem.ell == 1;
    let first = usize::from(dirichlet);
    let count = n + 1 - first;
    let mut w = Vec::with_capacity(count);
    let mut q = Vec::with_capacity(count);
    let mut mass = Vec::with_capacity(count);
    for i in first..=n {
        let r = node(i);
        let lo = if i == 0 { a } else { r - 0.5 * h };
        let hi = if i == n { b } else { r + 0.5 * h };
        let mut m_i = 0.0;
        let mut q_i = 0.0;
        for (x0, x1) in [(lo, r), (r, hi)] {
            if x1 > x0 {
                m_i += rule.integrate(x0, x1, |t| space.density(t));
                if problem.ell == 1 {
                    q_i += rule.integrate(x0, x1, |t| problem.potential(t) * space.density(t));
                }
            }
        }
        if i == n {
            q_i += problem.alpha * space.density(b);
        }
        if i == 0 && !problem.domain.is_ball() {
            q_i += problem.alpha * space.density(a);
        }
        mass.push(m_i);
        q.push(q_i);
        w.push(if i < n { elem[i] } else { 0.0 });
    }
    Pencil { w, w_left: if dirichlet { elem[0] } else { 0.0 }, q, mass }
}

impl Pencil {
    /// Number of eigenvalues strictly below `lambda`.
    fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut carry = self.w_left;
        for i in 0..self.q.len() {
            let e = carry + self.q[i] - lambda * self.mass[i];
            let mut d = e + self.w[i];
            if d == 0.0 {
                d = -f64::EPSILON * (self.w[i].abs() + self.q[i].abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
            // Next carry: w e / (w + e) with d = w + e.
            carry = self.w[i] * ((d - self.w[i]) / d);
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let len = self.q.len();
        for i in 0..len {
            let left = if i == 0 { self.w_left } else { self.w[i - 1] };
            let off_left = if i == 0 { 0.0 } else { self.w[i - 1] };
            let diag = left + self.w[i] + self.q[i];
            let radius = off_left + self.w[i];
            lo = lo.min((diag - radius) / self.mass[i]);
            hi = hi.max((diag + radius) / self.mass[i]);
        }
        (lo, hi)
    }
}

/// `index`-th eigenvalue of the discretized problem on `n` cells.
pub fn oracle_eigen(problem: &RobinProblem, index: usize, n: usize) -> Result<f64> {
    if n < 100 {
        return Err(Error::InvalidInput(format!("oracle grid needs N >= 100, got {n}")));
    }
    let pencil = assemble(problem, n);
    if index == 0 || index > pencil.q.len() {
        return Err(Error::InvalidInput(format!("eigenvalue index {index} out of range")));
    }
    let (mut lo, mut hi) = pencil.gershgorin();
    lo -= 1e-12 * lo.abs().max(1.0);
    hi += 1e-12 * hi.abs().max(1.0);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-3) {
            return Ok(mid);
        }
        if pencil.count_below(mid) >= index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NotConverged { iterations: 400, lo, hi })
}

/// Richardson extrapolation `(4 λ_{2N} - λ_N) / 3` of [`oracle_eigen`].
pub fn oracle_extrapolated(problem: &RobinProblem, index: usize, n: usize) -> Result<f64> {
    let coarse = oracle_eigen(problem, index, n)?;
    let fine = oracle_eigen(problem, index, 2 * n)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_space, FieldKind};
    use crate::radial::RadialDomain;

    #[test]
    fn constant_mode_is_zero() {
        let s = make_space(FieldKind::Quaternion, 2).unwrap();
        let p = RobinProblem::new(s, RadialDomain::ball(1.0).unwrap(), 0.0, 0).unwrap();
        assert!(oracle_eigen(&p, 1, 4000).unwrap().abs() < 1e-6);
    }

    #[test]
    fn rejects_small_grids() {
        let s = make_space(FieldKind::Real, 2).unwrap();
        let p = RobinProblem::new(s, RadialDomain::ball(1.0).unwrap(), 0.0, 0).unwrap();
        assert!(oracle_eigen(&p, 1, 50).is_err());
        assert!(oracle_eigen(&p, 0, 500).is_err());
    }

    #[test]
    fn second_order_convergence() {
        let s = make_space(FieldKind::Complex, 2).unwrap();
        let p = RobinProblem::new(s, RadialDomain::ball(1.0).unwrap(), -0.3, 1).unwrap();
        let l1 = oracle_eigen(&p, 1, 500).unwrap();
        let l2 = oracle_eigen(&p, 1, 1000).unwrap();
        let l4 = oracle_eigen(&p, 1, 2000).unwrap();
        let ratio = (l1 - l2) / (l2 - l4);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn euclidean_limit_of_small_disc() {
        // On a tiny disc the first Neumann harmonic eigenvalue approaches
        // (j'_{1,1}/R)^2 with j'_{1,1} = 1.8411837813406593.
        let s = make_space(FieldKind::Real, 2).unwrap();
        let r = 1e-3;
        let p = RobinProblem::new(s, RadialDomain::ball(r).unwrap(), 0.0, 1).unwrap();
        let lam = oracle_extrapolated(&p, 1, 2000).unwrap();
        let exact = (1.841_183_781_340_659_3f64 / r).powi(2);
        assert!((lam - exact).abs() / exact < 1e-5, "{lam} vs {exact}");
    }

    fn tol() -> crate::tolerances::Tolerances {
        crate::tolerances::Tolerances::default()
    }

    #[test]
    fn shooting_at_oracle_value_meets_boundary_condition() {
        let s = make_space(FieldKind::Real, 3).unwrap();
        let p = RobinProblem::new(s, RadialDomain::ball(1.0).unwrap(), 0.0, 1).unwrap();
        let mu = oracle_extrapolated(&p, 1, 20_000).unwrap();
        let shot = crate::radial::shoot(&p, mu, &tol()).unwrap();
        assert!(shot.mismatch.abs() < 1e-8, "{}", shot.mismatch);
        assert_eq!(shot.nodes, 0);
    }

    #[test]
    fn oracle_value_bracketed_by_shooting() {
        let s = make_space(FieldKind::Real, 3).unwrap();
        let p = RobinProblem::new(s, RadialDomain::ball(1.0).unwrap(), -0.2, 1).unwrap();
        let mu = oracle_extrapolated(&p, 1, 10_000).unwrap();
        let below = crate::radial::shoot(&p, mu * (1.0 - 1e-6), &tol()).unwrap();
        let above = crate::radial::shoot(&p, mu * (1.0 + 1e-6), &tol()).unwrap();
        assert!(below.mismatch > 0.0 && above.mismatch < 0.0);
    }

    #[test]
    fn real_plane_first_harmonic_matches_shooting() {
        let s = make_space(FieldKind::Real, 2).unwrap();
        let p = RobinProblem::new(s, RadialDomain::ball(1.0).unwrap(), 0.0, 1).unwrap();
        let o = oracle_extrapolated(&p, 1, 20_000).unwrap();
        let e = crate::radial::eigen_radial(&p, 1, &tol()).unwrap();
        assert!((e.lambda - o).abs() <= 1e-6 * o);
        // Both methods agree on 2.96139662963 to the printed digits.
        assert!((o - 2.961_396_629_63).abs() < 1e-9, "{o}");
    }
}
