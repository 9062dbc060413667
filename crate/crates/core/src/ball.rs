//! Second Robin eigenvalue of geodesic balls, the extended first-harmonic
//! profile and the auxiliary function
//! `F = g'² - H'g² + 2αgg' + αHg²`.
//!
//! For `α ≤ 0` the second eigenvalue of `B_R` is `μ₁`, the lowest eigenvalue
//! of the first spherical-harmonic mode; the lowest radial eigenvalue above
//! the ground state, `τ₂`, is always computed alongside as a guard.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{require_positive, Error, Result};
use crate::geometry::SpaceParams;
use crate::quadrature::{self, GaussRule};
use crate::radial::{
    eigen_radial, steklov_by_alpha_root, steklov_first, EigenResult, Normalization, RadialDomain,
    RadialProfile, RobinProblem,
};
use crate::tolerances::Tolerances;

/// Finite-difference step for `F'`.
pub const FD_STEP: f64 = 1e-5;

/// Slack when testing `α ∈ [-σ₁, 0]`, relative to `σ₁`.
const ALPHA_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallSecond {
    /// `λ₂ = μ₁`, with its profile normalized by `g'(0) = 1`.
    pub result: EigenResult,
    pub tau2: f64,
}

impl BallSecond {
    pub fn lambda(&self) -> f64 {
        self.result.lambda
    }
}

/// `λ_{2,α}(B_R)` for `α ≤ 0`.
pub fn lambda2_ball(space: &SpaceParams, radius: f64, alpha: f64, tol: &Tolerances) -> Result<BallSecond> {
    require_positive("ball radius", radius)?;
    if !(alpha <= 0.0) {
        return Err(Error::AlphaOutOfRange { alpha, lo: f64::NEG_INFINITY, hi: 0.0 });
    }
    let ball = RadialDomain::ball(radius)?;
    let (mu, tau) = rayon::join(
        || eigen_radial(&RobinProblem::new(*space, ball, alpha, 1)?, 1, tol),
        || eigen_radial(&RobinProblem::new(*space, ball, alpha, 0)?, 2, tol),
    );
    let (mu, tau2) = (mu?, tau?.lambda);
    if mu.lambda >= tau2 {
        return Err(Error::PropositionViolation(format!(
            "mu_1 = {} is not below tau_2 = {tau2} on {} ball R = {radius}, alpha = {alpha}",
            mu.lambda,
            space.label()
        )));
    }
    Ok(BallSecond { result: mu, tau2 })
}

/// The first-harmonic profile on `(0, R]`, continued by
/// `g(r) = g(R) e^{-α(r-R)}` for `r > R`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedProfile {
    pub base: RadialProfile,
    pub radius: f64,
    pub alpha: f64,
    g_radius: f64,
}

impl ExtendedProfile {
    /// `g(R)`.
    pub fn boundary_value(&self) -> f64 {
        self.g_radius
    }

    /// `(g(r), g'(r))` for `r ≥ 0`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        if r <= self.radius {
            self.base.eval(r)
        } else {
            let g = self.g_radius * (-self.alpha * (r - self.radius)).exp();
            (g, -self.alpha * g)
        }
    }
}

/// Tolerance of the C¹ match at `R`, relative to `|(g(R), g'(R))|`.
pub const C1_TOL: f64 = 1e-8;

pub fn extend_profile(result: &EigenResult, alpha: f64) -> Result<ExtendedProfile> {
    let base = &result.profile;
    if result.ell != 1 || result.index != 1 || base.normalization != Normalization::UnitSlopeAtOrigin {
        return Err(Error::InvalidInput(
            "extension needs the first eigenfunction of the first harmonic mode on a ball".into(),
        ));
    }
    let radius = base.right();
    let (g, gp) = base.eval(radius);
    let mismatch = (gp + alpha * g).abs() / g.hypot(gp);
    if !(mismatch <= C1_TOL) {
        return Err(Error::ProfileMismatch(format!(
            "g'(R-) = {gp} differs from -alpha g(R) = {} (relative {mismatch:e})",
            -alpha * g
        )));
    }
    Ok(ExtendedProfile { base: base.clone(), radius, alpha, g_radius: g })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityRecord {
    pub r: f64,
    #[serde(rename = "F")]
    pub f: f64,
    /// Finite-difference derivative.
    #[serde(rename = "Fp")]
    pub fp: f64,
    /// Exact derivative of the tail expression, for `r > R`.
    #[serde(rename = "Fp_closed")]
    pub fp_closed: Option<f64>,
    /// Decay bound on `F'` for `r > R`.
    pub bound: Option<f64>,
}

impl MonotonicityRecord {
    /// `F' ≤ bound` up to `slack`, when the bound applies.
    pub fn within_bound(&self, slack: f64) -> bool {
        match self.bound {
            Some(b) => self.fp_closed.unwrap_or(self.fp) - b <= slack,
            None => true,
        }
    }
}

/// `F(r)`; the limit `F(0⁺) = m` is returned at `r = 0`.
pub fn f_value(space: &SpaceParams, ext: &ExtendedProfile, r: f64) -> f64 {
    if r <= 0.0 {
        return space.m_f();
    }
    let (g, gp) = ext.eval(r);
    f_from(space, ext.alpha, r, g, gp)
}

/// Estimate of `lim_{r→0⁺} F(r)` from the profile at `r = 10⁻⁴` and `2·10⁻⁴`.
///
/// `F(r) = m + α(m+1) r + O(r²)`, so a single probe is biased by `α(m+1)r`;
/// linear extrapolation removes that term.
pub fn f_origin_limit(space: &SpaceParams, ext: &ExtendedProfile) -> f64 {
    let h = 1e-4;
    2.0 * f_value(space, ext, h) - f_value(space, ext, 2.0 * h)
}

fn f_from(space: &SpaceParams, alpha: f64, r: f64, g: f64, gp: f64) -> f64 {
    let lam1 = space.sphere_eigenvalue(r);
    gp * gp + lam1 * g * g + alpha * (2.0 * g * gp + space.mean_curvature(r) * g * g)
}

/// `(2α³ - H'' + 3αH' - 2α²H) g²` on the tail.
fn tail_derivative(space: &SpaceParams, ext: &ExtendedProfile, r: f64) -> f64 {
    let a = ext.alpha;
    let (g, _) = ext.eval(r);
    let hp = -space.sphere_eigenvalue(r);
    (2.0 * a * a * a - space.mean_curvature_second(r) + 3.0 * a * hp - 2.0 * a * a * space.mean_curvature(r)) * g * g
}

/// `-(7/8)[(m-k)/sinh³r + (k-1)/(sinh³r cosh³r)] g²(R)`.
pub fn decay_bound(space: &SpaceParams, r: f64, g_radius: f64) -> f64 {
    let s3 = r.sinh().powi(3);
    let c3 = r.cosh().powi(3);
    -0.875 * ((space.m_f() - space.k_f()) / s3 + (space.k_f() - 1.0) / (s3 * c3)) * g_radius * g_radius
}

pub fn monotonicity_f(space: &SpaceParams, ext: &ExtendedProfile, r: f64) -> Result<MonotonicityRecord> {
    require_positive("radius", r)?;
    let h = FD_STEP;
    let big_r = ext.radius;
    let f = |x: f64| f_value(space, ext, x);
    // Central differences, replaced by one-sided ones next to the origin and
    // when the stencil straddles R (F' has a jump there).
    let fp = if r - h <= 0.0 || (r - h < big_r && r > big_r) {
        (-3.0 * f(r) + 4.0 * f(r + h) - f(r + 2.0 * h)) / (2.0 * h)
    } else if r <= big_r && r + h > big_r {
        (3.0 * f(r) - 4.0 * f(r - h) + f(r - 2.0 * h)) / (2.0 * h)
    } else {
        (f(r + h) - f(r - h)) / (2.0 * h)
    };
    let (fp_closed, bound) = if r > big_r {
        (Some(tail_derivative(space, ext, r)), Some(decay_bound(space, r, ext.g_radius)))
    } else {
        (None, None)
    };
    Ok(MonotonicityRecord { r, f: f(r), fp, fp_closed, bound })
}

/// `∫_a^b F J / ∫_a^b g² J` over radii with `0 ≤ a < b`.
///
/// On the ball the quotient equals `λ₂(B_R)`; on another radially symmetric
/// domain it bounds the second eigenvalue from above.
pub fn f_quotient(space: &SpaceParams, ext: &ExtendedProfile, a: f64, b: f64, tol: &Tolerances) -> f64 {
    let rule = GaussRule::new(tol.quad_points);
    let big_r = ext.radius;
    let alpha = ext.alpha;
    let mut num = 0.0;
    let mut den = 0.0;
    if a < big_r {
        let hi = b.min(big_r);
        num += ext
            .base
            .integrate(a, hi, &rule, |r, g, gp| f_from(space, alpha, r, g, gp) * space.density(r));
        den += ext.base.integrate(a, hi, &rule, |r, g, _| g * g * space.density(r));
    }
    if b > big_r {
        let lo = a.max(big_r);
        let rel = 1e-13;
        num += quadrature::integrate(|r| f_value(space, ext, r) * space.density(r), lo, b, rel);
        den += quadrature::integrate(
            |r| {
                let (g, _) = ext.eval(r);
                g * g * space.density(r)
            },
            lo,
            b,
            rel,
        );
    }
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub holds: bool,
    /// Worst slack of the inequality; positive when it holds strictly.
    pub margin: f64,
}

impl Check {
    fn strict(margin: f64) -> Self {
        Self { holds: margin > 0.0, margin }
    }
}

/// Sample count for the pointwise profile checks on `(0, R)`.
pub const CHECK_POINTS: usize = 2000;

/// Tolerance on `λ₂ ≥ 0`, which is an equality at `α = -σ₁`.
pub const LAMBDA2_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionReport {
    pub space: SpaceParams,
    pub radius: f64,
    pub alpha: f64,
    pub sigma1: f64,
    pub lambda2: f64,
    pub tau2: f64,
    /// `g' > 0` on `(0, R)`.
    pub slope_positive: Check,
    /// `g'/g ≥ -α` on `(0, R)`.
    pub log_slope: Check,
    /// `λ₂ ≥ 0`; the margin is `λ₂` itself.
    pub lambda2_nonnegative: Check,
    /// `μ₁ < τ₂`.
    pub mu1_below_tau2: Check,
    /// `σ₁ ≤ 1/R`.
    pub steklov_bound: Check,
}

impl PropositionReport {
    pub fn all_hold(&self) -> bool {
        self.slope_positive.holds
            && self.log_slope.holds
            && self.lambda2_nonnegative.holds
            && self.mu1_below_tau2.holds
            && self.steklov_bound.holds
    }
}

/// `σ₁(B_R)` by the direct ratio, checked against the root of `μ₁(-s) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteklovPair {
    pub direct: f64,
    pub alpha_root: f64,
}

pub fn steklov_pair(space: &SpaceParams, radius: f64, tol: &Tolerances) -> Result<SteklovPair> {
    let (direct, alpha_root) = rayon::join(
        || steklov_first(space, radius, tol),
        || steklov_by_alpha_root(space, radius, tol),
    );
    Ok(SteklovPair { direct: direct?, alpha_root: alpha_root? })
}

/// Checks the sign and ordering properties of the second eigenpair of `B_R`
/// for `α ∈ [-σ₁(B_R), 0]`.
pub fn check_propositions(space: &SpaceParams, radius: f64, alpha: f64, tol: &Tolerances) -> Result<PropositionReport> {
    let sigma1 = steklov_first(space, radius, tol)?;
    check_with_sigma(space, radius, alpha, sigma1, tol)
}

/// [`check_propositions`] with a precomputed `σ₁(B_R)`.
pub fn check_with_sigma(
    space: &SpaceParams,
    radius: f64,
    alpha: f64,
    sigma1: f64,
    tol: &Tolerances,
) -> Result<PropositionReport> {
    let lo = -sigma1 * (1.0 + ALPHA_SLACK);
    if !(alpha >= lo && alpha <= 0.0) {
        return Err(Error::AlphaOutOfRange { alpha, lo: -sigma1, hi: 0.0 });
    }
    let second = lambda2_ball(space, radius, alpha, tol)?;
    let profile = &second.result.profile;
    let mut slope = f64::INFINITY;
    let mut log_slope = f64::INFINITY;
    for i in 1..CHECK_POINTS {
        let r = radius * i as f64 / CHECK_POINTS as f64;
        let (g, gp) = profile.eval(r);
        slope = slope.min(gp);
        log_slope = log_slope.min(gp / g + alpha);
    }
    let lambda2 = second.lambda();
    Ok(PropositionReport {
        space: *space,
        radius,
        alpha,
        sigma1,
        lambda2,
        tau2: second.tau2,
        slope_positive: Check::strict(slope),
        log_slope: Check::strict(log_slope),
        lambda2_nonnegative: Check { holds: lambda2 >= -LAMBDA2_TOL, margin: lambda2 },
        mu1_below_tau2: Check::strict(second.tau2 - lambda2),
        steklov_bound: Check::strict(1.0 / radius - sigma1),
    })
}

/// `count` equally spaced values from `-σ₁` to `0`.
pub fn alpha_grid(sigma1: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count)
            .map(|j| if j == count - 1 { 0.0 } else { -sigma1 * (1.0 - j as f64 / (count - 1) as f64) })
            .collect(),
    }
}

/// [`check_propositions`] over an `α` grid in `[-σ₁, 0]`.
pub fn check_alpha_grid(
    space: &SpaceParams,
    radius: f64,
    count: usize,
    tol: &Tolerances,
) -> Result<Vec<PropositionReport>> {
    let sigma1 = steklov_first(space, radius, tol)?;
    alpha_grid(sigma1, count)
        .into_par_iter()
        .map(|a| check_with_sigma(space, radius, a, sigma1, tol))
        .collect()
}
