//! Separated radial eigenvalue problems on geodesic balls and annuli.
//!
//! Mode `ell = 0` solves `-f'' - H f' = τ f`; mode `ell = 1` solves
//! `-g'' - H g' + λ₁(S_r) g = μ g`. The Robin condition `u' + α u = 0` is
//! imposed at the outer radius and, for annuli, `-u' + α u = 0` at the inner
//! one (the outward normal points inwards there). Balls use the regular
//! behaviour at the origin.
//!
//! Eigenvalues are located by shooting. The Prüfer-type phase
//! `θ(R) = nodes·π + atan2(g, g')` is continuous and strictly increasing in
//! the trial eigenvalue, so the `i`-th eigenvalue is the unique root of
//! `θ(R) - (i-1)π - arccot(-α)`; its eigenfunction has `i - 1` interior zeros.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::geometry::{self, SpaceParams};
use crate::ode::{self, Accepted};
use crate::quadrature::GaussRule;
use crate::roots;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Ball,
    Annulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialDomain {
    pub shape: Shape,
    pub inner: f64,
    pub outer: f64,
}

impl RadialDomain {
    pub fn ball(radius: f64) -> Result<Self> {
        require_positive("ball radius", radius)?;
        Ok(Self { shape: Shape::Ball, inner: 0.0, outer: radius })
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        require_positive("inner radius", inner)?;
        if !(outer > inner) || !outer.is_finite() {
            return Err(Error::InvalidInput(format!(
                "annulus needs 0 < R1 < R2, got [{inner}, {outer}]"
            )));
        }
        Ok(Self { shape: Shape::Annulus, inner, outer })
    }

    pub fn is_ball(&self) -> bool {
        self.shape == Shape::Ball
    }

    pub fn volume(&self, space: &SpaceParams) -> Result<f64> {
        geometry::shell_volume(space, self.inner, self.outer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinProblem {
    pub space: SpaceParams,
    pub domain: RadialDomain,
    pub alpha: f64,
    /// Angular mode: 0 (radial) or 1 (first spherical harmonic).
    pub ell: u8,
}

impl RobinProblem {
    pub fn new(space: SpaceParams, domain: RadialDomain, alpha: f64, ell: u8) -> Result<Self> {
        if ell > 1 {
            return Err(Error::InvalidInput(format!("angular mode must be 0 or 1, got {ell}")));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain { what: "robin parameter", value: alpha });
        }
        Ok(Self { space, domain, alpha, ell })
    }

    /// Potential of the mode: zero or `λ₁(S_r)`.
    #[inline]
    pub fn potential(&self, r: f64) -> f64 {
        if self.ell == 0 {
            0.0
        } else {
            self.space.sphere_eigenvalue(r)
        }
    }

    #[inline]
    fn rhs(&self, lambda: f64, r: f64, y: &ode::State) -> ode::State {
        let h = self.space.mean_curvature(r);
        [y[1], -h * y[1] - (lambda - self.potential(r)) * y[0]]
    }

    fn left_end(&self, tol: &Tolerances) -> f64 {
        match self.domain.shape {
            Shape::Ball => tol.shoot_start.min(1e-3 * self.domain.outer),
            Shape::Annulus => self.domain.inner,
        }
    }

    /// Initial state at the left end, with its (exact) value at r = 0 for balls.
    fn initial_data(&self, lambda: f64, r0: f64) -> ode::State {
        match (self.domain.shape, self.ell) {
            (Shape::Ball, 0) => [1.0, -lambda * r0 / self.space.m_f()],
            (Shape::Ball, _) => [r0, 1.0],
            (Shape::Annulus, _) => [1.0, self.alpha],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `g'(0) = 1` (first harmonic on a ball).
    UnitSlopeAtOrigin,
    /// Value 1 at the left end point.
    UnitValueAtLeft,
}

/// Eigenfunction samples at the accepted integration radii together with
/// first and second derivatives; evaluated in between by quintic Hermite
/// interpolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub second: Vec<f64>,
    pub normalization: Normalization,
}

impl RadialProfile {
    pub fn left(&self) -> f64 {
        self.grid[0]
    }

    pub fn right(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    fn segment(&self, r: f64) -> usize {
        let n = self.grid.len();
        match self.grid.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// `(g(r), g'(r))`; `r` is clamped into the sampled range.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let r = r.clamp(self.left(), self.right());
        let i = self.segment(r);
        self.eval_in(i, r)
    }

    fn eval_in(&self, i: usize, r: f64) -> (f64, f64) {
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 0.5 * (t3 - 2.0 * t4 + t5);
        let d0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let d1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let d2 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
        let d4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let d5 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
        let (p0, q0, s0) = (self.values[i], self.derivs[i], self.second[i]);
        let (p1, q1, s1) = (self.values[i + 1], self.derivs[i + 1], self.second[i + 1]);
        let g = h0 * p0 + h * h1 * q0 + h * h * h2 * s0 + h3 * p1 + h * h4 * q1 + h * h * h5 * s1;
        let gp = (d0 * (p0 - p1)) / h + d1 * q0 + h * d2 * s0 + d4 * q1 + h * d5 * s1;
        (g, gp)
    }

    /// `∫_a^b w(r, g(r), g'(r)) dr` with a Gauss rule on every sampled step.
    pub fn integrate<F>(&self, a: f64, b: f64, rule: &GaussRule, mut w: F) -> f64
    where
        F: FnMut(f64, f64, f64) -> f64,
    {
        let a = a.max(self.left());
        let b = b.min(self.right());
        if b <= a {
            return 0.0;
        }
        let first = self.segment(a);
        let mut total = 0.0;
        let mut i = first;
        while i + 1 < self.grid.len() && self.grid[i] < b {
            let lo = self.grid[i].max(a);
            let hi = self.grid[i + 1].min(b);
            if hi > lo {
                total += rule.integrate(lo, hi, |r| {
                    let (g, gp) = self.eval_in(i, r);
                    w(r, g, gp)
                });
            }
            i += 1;
        }
        total
    }
}

/// Outcome of a single shooting pass at a trial eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Shot {
    /// `(g'(R) + α g(R)) / |(g(R), g'(R))|`.
    pub mismatch: f64,
    /// Interior sign changes of the solution.
    pub nodes: usize,
    /// Continuous phase `nodes·π + atan2(g(R), g'(R))`.
    pub phase: f64,
    /// Phase at which the Robin condition holds, in (0, π).
    pub target: f64,
    pub profile: RadialProfile,
}

impl Shot {
    /// Signed distance from the `index`-th eigenvalue condition; increasing in λ.
    pub fn phase_error(&self, index: usize) -> f64 {
        self.phase - (index as f64 - 1.0) * PI - self.target
    }
}

/// Integrates the radial equation at trial eigenvalue `lambda`.
pub fn shoot(problem: &RobinProblem, lambda: f64, tol: &Tolerances) -> Result<Shot> {
    let r0 = problem.left_end(tol);
    let r1 = problem.domain.outer;
    let y0 = problem.initial_data(lambda, r0);
    let ctl = tol.step_control();
    let h0 = (0.05 * r0).min((r1 - r0) / 20.0);

    let is_ball = problem.domain.is_ball();
    let mut grid = Vec::with_capacity(512);
    let mut values = Vec::with_capacity(512);
    let mut derivs = Vec::with_capacity(512);
    let mut second = Vec::with_capacity(512);
    if is_ball {
        // Exact data at the origin extends the profile over [0, r0].
        let (g, gp, gpp) = if problem.ell == 0 {
            (1.0, 0.0, -lambda / problem.space.m_f())
        } else {
            (0.0, 1.0, 0.0)
        };
        grid.push(0.0);
        values.push(g);
        derivs.push(gp);
        second.push(gpp);
    }

    let mut scale = 1.0_f64;
    let mut nodes = 0usize;
    let mut last_sign = 1.0_f64;
    let renorm = tol.renorm;

    let end = ode::integrate(
        |r, y| problem.rhs(lambda, r, y),
        r0,
        y0,
        r1,
        h0,
        &ctl,
        |p: &Accepted| {
            grid.push(p.x);
            values.push(p.y[0] * scale);
            derivs.push(p.y[1] * scale);
            second.push(p.dy[1] * scale);
            if p.y[0] != 0.0 {
                let s = p.y[0].signum();
                if s != last_sign {
                    nodes += 1;
                    last_sign = s;
                }
            }
            let norm = p.y[0].abs().max(p.y[1].abs());
            if norm > renorm || (norm < 1.0 / renorm && norm > 0.0) {
                let f = 1.0 / norm;
                scale /= f;
                f
            } else {
                1.0
            }
        },
    )?;

    let (g, gp) = (end[0], end[1]);
    let norm = g.hypot(gp);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::IntegrationFailure { radius: r1, reason: "degenerate end state" });
    }
    let s = if nodes % 2 == 0 { 1.0 } else { -1.0 };
    let phase = nodes as f64 * PI + (s * g).max(0.0).atan2(s * gp);
    let target = 1.0_f64.atan2(-problem.alpha);
    let normalization = if is_ball && problem.ell == 1 {
        Normalization::UnitSlopeAtOrigin
    } else {
        Normalization::UnitValueAtLeft
    };
    Ok(Shot {
        mismatch: (gp + problem.alpha * g) / norm,
        nodes,
        phase,
        target,
        profile: RadialProfile { grid, values, derivs, second, normalization },
    })
}

/// One eigenpair of a radial mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub lambda: f64,
    pub ell: u8,
    pub index: usize,
    pub nodes: usize,
    pub bc_residual: f64,
    #[serde(skip)]
    pub profile: RadialProfile,
}

/// The `index`-th (1-based) eigenvalue of the given mode.
pub fn eigen_radial(problem: &RobinProblem, index: usize, tol: &Tolerances) -> Result<EigenResult> {
    if index == 0 {
        return Err(Error::InvalidInput("eigenvalue index is 1-based".into()));
    }
    let phase_error = |lam: f64| -> Result<f64> { Ok(shoot(problem, lam, tol)?.phase_error(index)) };

    let width = problem.domain.outer - problem.domain.inner;
    let base = 1.0 / (width * width);
    let mut lo = -base;
    let mut hi = base;
    let mut f_lo = phase_error(lo)?;
    let mut f_hi;
    let mut iterations = 0;
    if f_lo > 0.0 {
        // Step down geometrically until the phase falls below the target.
        loop {
            hi = lo;
            f_hi = f_lo;
            lo *= 4.0;
            f_lo = phase_error(lo)?;
            iterations += 1;
            if f_lo <= 0.0 {
                break;
            }
            if iterations > tol.max_iter {
                return Err(Error::NotConverged { iterations, lo, hi });
            }
        }
    } else {
        f_hi = phase_error(hi)?;
        while f_hi < 0.0 {
            lo = hi;
            f_lo = f_hi;
            hi *= 4.0;
            f_hi = phase_error(hi)?;
            iterations += 1;
            if iterations > tol.max_iter {
                return Err(Error::NotConverged { iterations, lo, hi });
            }
        }
    }

    let lambda = if f_lo == 0.0 {
        lo
    } else if f_hi == 0.0 {
        hi
    } else {
        let xtol = tol.eig_xtol(lo.abs().min(hi.abs()));
        roots::brent(phase_error, lo, hi, f_lo, f_hi, xtol, tol.max_iter)?
    };

    let shot = shoot(problem, lambda, tol)?;
    if shot.nodes != index - 1 {
        return Err(Error::ProfileMismatch(format!(
            "eigenvalue {lambda} of index {index} has {} interior zeros",
            shot.nodes
        )));
    }
    Ok(EigenResult {
        lambda,
        ell: problem.ell,
        index,
        nodes: shot.nodes,
        bc_residual: shot.mismatch.abs(),
        profile: shot.profile,
    })
}

/// Rayleigh quotient of a profile in the weighted form
/// `(∫ (g'² + V g²) J + α Σ_boundary g² J) / ∫ g² J`.
pub fn rayleigh_quotient(problem: &RobinProblem, profile: &RadialProfile, tol: &Tolerances) -> f64 {
    let space = problem.space;
    let rule = GaussRule::new(tol.quad_points);
    let a = problem.domain.inner;
    let b = problem.domain.outer;
    let energy = profile.integrate(a, b, &rule, |r, g, gp| {
        (gp * gp + problem.potential(r) * g * g) * space.density(r)
    });
    let mass = profile.integrate(a, b, &rule, |r, g, _| g * g * space.density(r));
    let (gb, _) = profile.eval(b);
    let mut boundary = gb * gb * space.density(b);
    if !problem.domain.is_ball() {
        let (ga, _) = profile.eval(a);
        boundary += ga * ga * space.density(a);
    }
    (energy + problem.alpha * boundary) / mass
}

/// First nonzero Steklov eigenvalue of the ball `B_R`: the harmonic first
/// spherical harmonic mode gives `σ₁ = g'(R)/g(R)`.
pub fn steklov_first(space: &SpaceParams, radius: f64, tol: &Tolerances) -> Result<f64> {
    let problem = RobinProblem::new(*space, RadialDomain::ball(radius)?, 0.0, 1)?;
    let shot = shoot(&problem, 0.0, tol)?;
    let i = shot.profile.len() - 1;
    Ok(shot.profile.derivs[i] / shot.profile.values[i])
}

/// `σ₁(B_R)` as the root `s > 0` of `μ₁(α = -s) = 0`.
pub fn steklov_by_alpha_root(space: &SpaceParams, radius: f64, tol: &Tolerances) -> Result<f64> {
    let ball = RadialDomain::ball(radius)?;
    let mu1 = |s: f64| -> Result<f64> {
        let p = RobinProblem::new(*space, ball, -s, 1)?;
        Ok(eigen_radial(&p, 1, tol)?.lambda)
    };
    let lo = 0.0;
    let f_lo = mu1(lo)?;
    let mut hi = 1.0 / radius;
    let mut f_hi = mu1(hi)?;
    let mut it = 0;
    while f_hi > 0.0 {
        hi *= 2.0;
        f_hi = mu1(hi)?;
        it += 1;
        if it > 60 {
            return Err(Error::NotConverged { iterations: it, lo, hi });
        }
    }
    roots::brent(mu1, lo, hi, f_lo, f_hi, 1e-14 / radius, tol.max_iter)
}
