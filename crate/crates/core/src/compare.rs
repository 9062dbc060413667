//! Comparison of the second Robin eigenvalue of concentric annuli with that
//! of the geodesic ball of the same volume.
//!
//! The annulus spectrum is restricted to the modes `ell ≤ 1`, which gives a
//! value no smaller than the true second eigenvalue. Asymmetry is measured
//! against the concentric ball of equal volume, an upper bound for the
//! infimum over all centres.

use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{extend_profile, f_quotient, lambda2_ball, ExtendedProfile};
use crate::error::{require_positive, Error, Result};
use crate::geometry::{ball_volume, radius_for_volume, SpaceParams};
use crate::radial::{eigen_radial, steklov_first, EigenResult, RadialDomain, RobinProblem};
use crate::roots;
use crate::tolerances::Tolerances;

/// Rows with `gap` at or below this value abort a sweep.
pub const GAP_ABORT: f64 = -1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnulusMode {
    /// Second radial eigenvalue `τ₂`.
    Tau2,
    /// First harmonic eigenvalue `μ₁`.
    Mu1,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnulusSecond {
    pub result: EigenResult,
    pub mode: AnnulusMode,
    pub tau1: f64,
    pub tau2: f64,
    pub mu1: f64,
}

impl AnnulusSecond {
    pub fn lambda(&self) -> f64 {
        self.result.lambda
    }
}

/// Second smallest of `τ₁, τ₂, μ₁` on the annulus `R1 ≤ r ≤ R2`.
pub fn lambda2_annulus(
    space: &SpaceParams,
    inner: f64,
    outer: f64,
    alpha: f64,
    tol: &Tolerances,
) -> Result<AnnulusSecond> {
    if !(alpha <= 0.0) {
        return Err(Error::AlphaOutOfRange { alpha, lo: f64::NEG_INFINITY, hi: 0.0 });
    }
    let dom = RadialDomain::annulus(inner, outer)?;
    let radial = RobinProblem::new(*space, dom, alpha, 0)?;
    let harmonic = RobinProblem::new(*space, dom, alpha, 1)?;
    let ((tau1, tau2), mu1) = rayon::join(
        || rayon::join(|| eigen_radial(&radial, 1, tol), || eigen_radial(&radial, 2, tol)),
        || eigen_radial(&harmonic, 1, tol),
    );
    let (tau1, tau2, mu1) = (tau1?, tau2?, mu1?);
    let (t1, t2, m1) = (tau1.lambda, tau2.lambda, mu1.lambda);
    // τ₁ < τ₂, and τ₁ < μ₁ because the harmonic potential is positive.
    let mut ranked = [(t1, None), (t2, Some(AnnulusMode::Tau2)), (m1, Some(AnnulusMode::Mu1))];
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mode = ranked[1].1.ok_or_else(|| {
        Error::ProfileMismatch(format!("ground state {t1} is not the lowest annulus eigenvalue"))
    })?;
    let result = match mode {
        AnnulusMode::Tau2 => tau2,
        AnnulusMode::Mu1 => mu1,
    };
    Ok(AnnulusSecond { result, mode, tau1: t1, tau2: t2, mu1: m1 })
}

/// Radius of the ball with the volume of the annulus `R1 ≤ r ≤ R2`.
pub fn matched_radius(space: &SpaceParams, inner: f64, outer: f64) -> Result<f64> {
    RadialDomain::annulus(inner, outer)?;
    radius_for_volume(space, ball_volume(space, outer)? - ball_volume(space, inner)?)
}

/// Outer radius of the annulus with inner radius `R1` and the given volume.
pub fn outer_for_volume(space: &SpaceParams, inner: f64, volume: f64) -> Result<f64> {
    require_positive("volume", volume)?;
    radius_for_volume(space, volume + ball_volume(space, inner)?)
}

/// Fraenkel asymmetry `2 V(R1) / V(R)` against the concentric ball of equal
/// volume; both set differences have volume `V(R1)`.
pub fn fraenkel_asymmetry_annulus(space: &SpaceParams, inner: f64, outer: f64) -> Result<f64> {
    let r = matched_radius(space, inner, outer)?;
    if !(inner < r && r < outer) {
        return Err(Error::ProfileMismatch(format!(
            "matched radius {r} not strictly between {inner} and {outer}"
        )));
    }
    Ok(2.0 * ball_volume(space, inner)? / ball_volume(space, r)?)
}

/// Rayleigh-type upper bound `∫ F J / ∫ g² J` over the domain, built from the
/// second eigenfunction of the ball of equal volume.
pub fn rayleigh_bound(space: &SpaceParams, domain: &RadialDomain, alpha: f64, tol: &Tolerances) -> Result<f64> {
    let radius = radius_for_volume(space, domain.volume(space)?)?;
    let sigma1 = steklov_first(space, radius, tol)?;
    if !(alpha >= -sigma1 * (1.0 + 1e-9) && alpha <= 0.0) {
        return Err(Error::AlphaOutOfRange { alpha, lo: -sigma1, hi: 0.0 });
    }
    let ball = lambda2_ball(space, radius, alpha, tol)?;
    let ext = extend_profile(&ball.result, alpha)?;
    Ok(f_quotient(space, &ext, domain.inner, domain.outer, tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremRow {
    pub domain: RadialDomain,
    pub lambda2_domain: f64,
    pub mode: AnnulusMode,
    pub lambda2_ball: f64,
    pub gap: f64,
    pub asymmetry: f64,
    pub rayleigh_bound: f64,
}

impl TheoremRow {
    /// `λ₂(Ω) ≤ bound ≤ λ₂(B)` up to `rel` relative slack.
    pub fn sandwich_holds(&self, rel: f64) -> bool {
        let slack = |x: f64| rel * x.abs().max(1e-3);
        self.lambda2_domain <= self.rayleigh_bound + slack(self.rayleigh_bound)
            && self.rayleigh_bound <= self.lambda2_ball + slack(self.lambda2_ball)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub space: SpaceParams,
    /// Matched volume, without the constant angular factor.
    pub volume: f64,
    pub ball_radius: f64,
    pub sigma1_ball: f64,
    pub alpha: f64,
    pub rows: Vec<TheoremRow>,
    /// `min gap / 𝒜²` over the rows whose gap is resolved above numerical noise.
    pub fitted_constant: f64,
    /// Rows at which the gap decreases as the inner radius grows.
    pub gap_non_monotone_at: Vec<usize>,
}

/// Gaps below this multiple of `max(|λ₂(B)|, 1)` are treated as unresolved.
pub const GAP_RESOLUTION: f64 = 1e-9;

/// Sweeps annuli of the given volume and compares them with the ball.
pub fn verify_theorem(
    space: &SpaceParams,
    volume: f64,
    alpha: f64,
    inner_radii: &[f64],
    tol: &Tolerances,
) -> Result<TheoremReport> {
    require_positive("volume", volume)?;
    if inner_radii.is_empty() {
        return Err(Error::InvalidInput("no inner radii given".into()));
    }
    let ball_radius = radius_for_volume(space, volume)?;
    let sigma1 = steklov_first(space, ball_radius, tol)?;
    if !(alpha >= -sigma1 * (1.0 + 1e-9) && alpha <= 0.0) {
        return Err(Error::AlphaOutOfRange { alpha, lo: -sigma1, hi: 0.0 });
    }
    let ball = lambda2_ball(space, ball_radius, alpha, tol)?;
    let ext = extend_profile(&ball.result, alpha)?;
    let lambda_ball = ball.lambda();

    let rows: Vec<TheoremRow> = inner_radii
        .par_iter()
        .map(|&r1| theorem_row(space, volume, alpha, r1, lambda_ball, &ext, tol))
        .collect::<Result<_>>()?;

    if let Some(bad) = rows.iter().find(|row| row.gap <= GAP_ABORT) {
        return Err(Error::TheoremViolation(format!(
            "{} annulus [{}, {}], alpha = {alpha}: lambda2 = {} exceeds ball value {} (gap {})",
            space.label(),
            bad.domain.inner,
            bad.domain.outer,
            bad.lambda2_domain,
            bad.lambda2_ball,
            bad.gap
        )));
    }
    let noise = GAP_RESOLUTION * lambda_ball.abs().max(1.0);
    let fitted_constant = rows
        .iter()
        .filter(|row| row.gap > noise)
        .map(|row| row.gap / (row.asymmetry * row.asymmetry))
        .fold(f64::NAN, f64::min);

    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].domain.inner.total_cmp(&rows[b].domain.inner));
    let gap_non_monotone_at = order
        .windows(2)
        .filter(|w| rows[w[1]].gap < rows[w[0]].gap - noise)
        .map(|w| w[1])
        .collect();

    Ok(TheoremReport {
        space: *space,
        volume,
        ball_radius,
        sigma1_ball: sigma1,
        alpha,
        rows,
        fitted_constant,
        gap_non_monotone_at,
    })
}

fn theorem_row(
    space: &SpaceParams,
    volume: f64,
    alpha: f64,
    inner: f64,
    lambda_ball: f64,
    ext: &ExtendedProfile,
    tol: &Tolerances,
) -> Result<TheoremRow> {
    require_positive("inner radius", inner)?;
    let outer = outer_for_volume(space, inner, volume)?;
    let domain = RadialDomain::annulus(inner, outer)?;
    let annulus = lambda2_annulus(space, inner, outer, alpha, tol)?;
    let asymmetry = 2.0 * ball_volume(space, inner)? / volume;
    let rayleigh_bound = f_quotient(space, ext, inner, outer, tol);
    Ok(TheoremRow {
        domain,
        lambda2_domain: annulus.lambda(),
        mode: annulus.mode,
        lambda2_ball: lambda_ball,
        gap: lambda_ball - annulus.lambda(),
        asymmetry,
        rayleigh_bound,
    })
}

/// `n` geometrically spaced values from `a` to `b`.
pub fn geometric_range(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    require_positive("range start", a)?;
    require_positive("range end", b)?;
    match n {
        0 => Err(Error::InvalidInput("empty range".into())),
        1 => Ok(vec![a]),
        _ => {
            let ratio = (b / a).ln() / (n - 1) as f64;
            Ok((0..n)
                .map(|i| if i == n - 1 { b } else { a * (ratio * i as f64).exp() })
                .collect())
        }
    }
}

/// First nonzero Steklov eigenvalue of the annulus, as `-α` at the zero of
/// its second Robin eigenvalue (restricted to the modes `ell ≤ 1`).
pub fn steklov_annulus(space: &SpaceParams, inner: f64, outer: f64, tol: &Tolerances) -> Result<f64> {
    let lam2 = |s: f64| -> Result<f64> { Ok(lambda2_annulus(space, inner, outer, -s, tol)?.lambda()) };
    let f_lo = lam2(0.0)?;
    let mut hi = 1.0 / (outer - inner).max(1e-3);
    let mut f_hi = lam2(hi)?;
    let mut it = 0;
    while f_hi > 0.0 {
        hi *= 2.0;
        f_hi = lam2(hi)?;
        it += 1;
        if it > 60 {
            return Err(Error::NotConverged { iterations: it, lo: 0.0, hi });
        }
    }
    roots::brent(lam2, 0.0, hi, f_lo, f_hi, 1e-13 * hi, tol.max_iter)
}
