//! Radial geometry of the non-compact rank-1 symmetric spaces 𝕂Hⁿ in
//! geodesic polar coordinates.
//!
//! The metric is normalized so that sectional curvatures lie in {-1, -4}.
//! Everything a radial eigenvalue problem needs is a scalar function of the
//! geodesic radius `r`:
//!
//! * density `J(r) = sinh^{m-1} r · cosh^{k-1} r`,
//! * mean curvature of the distance sphere `H(r) = (log J)'`,
//! * first nonzero eigenvalue of the distance sphere `λ₁(S_r) = -H'(r)`.
//!
//! Volumes are radial volumes `∫₀ᴿ J dr`; the constant area of the unit
//! sphere is left out since only volume ratios and matched volumes are used.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::error::{require_positive, Error, Result};
use crate::quadrature;

/// Above this radius density values are formed from their logarithm.
pub const LOG_SCALE_RADIUS: f64 = 30.0;

/// Relative tolerance used for radial volume quadrature.
pub const VOLUME_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FieldKind {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl FieldKind {
    /// Real dimension of the (skew-)field.
    pub fn real_dim(self) -> u32 {
        match self {
            FieldKind::Real => 1,
            FieldKind::Complex => 2,
            FieldKind::Quaternion => 4,
            FieldKind::Octonion => 8,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FieldKind::Real => "R",
            FieldKind::Complex => "C",
            FieldKind::Quaternion => "H",
            FieldKind::Octonion => "O",
        }
    }

    pub const ALL: [FieldKind; 4] = [
        FieldKind::Real,
        FieldKind::Complex,
        FieldKind::Quaternion,
        FieldKind::Octonion,
    ];
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" | "real" | "Real" => Ok(FieldKind::Real),
            "C" | "c" | "complex" | "Complex" => Ok(FieldKind::Complex),
            "H" | "h" | "quaternion" | "Quaternion" => Ok(FieldKind::Quaternion),
            "O" | "o" | "octonion" | "Octonion" => Ok(FieldKind::Octonion),
            other => Err(Error::InvalidSpace(format!("unknown field kind '{other}'"))),
        }
    }
}

/// The space 𝕂Hⁿ with real dimension `m = k·n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SpaceParams {
    pub kind: FieldKind,
    pub n: u32,
    pub k: u32,
    pub m: u32,
}

/// Validates `(kind, n)` against the classification of non-compact ROSS.
pub fn make_space(kind: FieldKind, n: u32) -> Result<SpaceParams> {
    let k = kind.real_dim();
    if kind == FieldKind::Octonion && n != 2 {
        return Err(Error::InvalidSpace(format!(
            "the octonionic hyperbolic space exists only for n = 2, got n = {n}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidSpace(format!(
            "{kind}H^{n}: need n >= 2"
        )));
    }
    Ok(SpaceParams { kind, n, k, m: k * n })
}

impl SpaceParams {
    pub fn m_f(&self) -> f64 {
        self.m as f64
    }

    pub fn k_f(&self) -> f64 {
        self.k as f64
    }

    pub fn label(&self) -> String {
        format!("{}H^{}", self.kind, self.n)
    }

    /// `log J(r)`, finite for every r > 0.
    pub fn log_density(&self, r: f64) -> f64 {
        (self.m_f() - 1.0) * ln_sinh(r) + (self.k_f() - 1.0) * ln_cosh(r)
    }

    pub fn density(&self, r: f64) -> f64 {
        if r > LOG_SCALE_RADIUS {
            self.log_density(r).exp()
        } else {
            let (s, c) = (r.sinh(), r.cosh());
            s.powi(self.m as i32 - 1) * c.powi(self.k as i32 - 1)
        }
    }

    pub fn mean_curvature(&self, r: f64) -> f64 {
        (self.m_f() - 1.0) / r.tanh() + (self.k_f() - 1.0) * r.tanh()
    }

    /// `λ₁(S_r) = (m-1)/sinh²r - (k-1)/cosh²r`.
    pub fn sphere_eigenvalue(&self, r: f64) -> f64 {
        let s = r.sinh();
        let c = r.cosh();
        (self.m_f() - 1.0) / (s * s) - (self.k_f() - 1.0) / (c * c)
    }

    /// `H''(r) = 2(m-k) cosh r / sinh³r + 2(k-1)(cosh²r + sinh²r)/(sinh³r cosh³r)`.
    pub fn mean_curvature_second(&self, r: f64) -> f64 {
        let s = r.sinh();
        let c = r.cosh();
        let t = r.tanh();
        let isc = 1.0 / (s * c);
        2.0 * (self.m_f() - self.k_f()) / (s * s * t)
            + 2.0 * (self.k_f() - 1.0) * isc * (1.0 / (s * s) + 1.0 / (c * c))
    }
}

/// `ln sinh r` for r > 0 without overflow.
pub fn ln_sinh(r: f64) -> f64 {
    if r < 1.0 {
        r.sinh().ln()
    } else {
        r + (-(-2.0 * r).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// `ln cosh r` without overflow.
pub fn ln_cosh(r: f64) -> f64 {
    let a = r.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Geometry scalars at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicPolarData {
    pub r: f64,
    pub j: f64,
    pub log_j: f64,
    pub h: f64,
    pub hp: f64,
    pub hpp: f64,
    pub lam1: f64,
}

pub fn polar_data(space: &SpaceParams, r: f64) -> Result<GeodesicPolarData> {
    require_positive("radius", r)?;
    let lam1 = space.sphere_eigenvalue(r);
    let log_j = space.log_density(r);
    Ok(GeodesicPolarData {
        r,
        j: space.density(r),
        log_j,
        h: space.mean_curvature(r),
        hp: -lam1,
        hpp: space.mean_curvature_second(r),
        lam1,
    })
}

/// `λ₁(S_r)` written as `(m-k)/sinh²r + (k-1)/(sinh²r cosh²r)`; used to
/// cross-check [`SpaceParams::sphere_eigenvalue`].
pub fn lam1_alt_form(space: &SpaceParams, r: f64) -> Result<f64> {
    require_positive("radius", r)?;
    let s2 = r.sinh().powi(2);
    let c2 = r.cosh().powi(2);
    Ok((space.m_f() - space.k_f()) / s2 + (space.k_f() - 1.0) / (s2 * c2))
}

/// Radial volume `∫₀ᴿ J(r) dr` of the geodesic ball of radius `R`.
pub fn ball_volume(space: &SpaceParams, radius: f64) -> Result<f64> {
    require_positive("radius", radius)?;
    Ok(quadrature::integrate(
        |r| space.density(r),
        0.0,
        radius,
        VOLUME_REL_TOL,
    ))
}

/// Radial volume of the shell `R1 <= r <= R2`.
pub fn shell_volume(space: &SpaceParams, inner: f64, outer: f64) -> Result<f64> {
    if inner <= 0.0 {
        return ball_volume(space, outer);
    }
    if !(outer > inner) {
        return Err(Error::InvalidInput(format!(
            "shell needs inner < outer, got [{inner}, {outer}]"
        )));
    }
    Ok(quadrature::integrate(
        |r| space.density(r),
        inner,
        outer,
        VOLUME_REL_TOL,
    ))
}

/// Inverts [`ball_volume`] by bracketing followed by safeguarded Newton steps.
pub fn radius_for_volume(space: &SpaceParams, volume: f64) -> Result<f64> {
    require_positive("volume", volume)?;
    let vol = |r: f64| ball_volume(space, r);

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut v_hi = vol(hi)?;
    while v_hi < volume {
        lo = hi;
        hi *= 2.0;
        v_hi = vol(hi)?;
    }
    if lo == 0.0 {
        // Shrink towards the origin so the bracket is tight for tiny volumes.
        loop {
            let cand = 0.5 * hi;
            let v = vol(cand)?;
            if v < volume {
                lo = cand;
                break;
            }
            hi = cand;
            if hi < 1e-300 {
                return Err(Error::Domain { what: "volume", value: volume });
            }
        }
    }

    // Newton on log V, whose derivative J/V stays bounded for large radii;
    // steps leaving the bracket fall back to bisection.
    let target = volume.ln();
    let mut r = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v_r = vol(r)?;
        let resid = v_r - volume;
        if resid.abs() <= 1e-13 * volume {
            return Ok(r);
        }
        if resid > 0.0 {
            hi = r;
        } else {
            lo = r;
        }
        let newton = r - (v_r.ln() - target) * v_r / space.density(r);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == r || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        r = next;
    }
    Err(Error::NotConverged { iterations: 200, lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spaces() -> Vec<SpaceParams> {
        FieldKind::ALL
            .iter()
            .map(|&kind| make_space(kind, 2).unwrap())
            .chain([make_space(FieldKind::Real, 3).unwrap()])
            .collect()
    }

    #[test]
    fn make_space_fills_dimensions() {
        let s = make_space(FieldKind::Real, 3).unwrap();
        assert_eq!((s.k, s.m), (1, 3));
        let o = make_space(FieldKind::Octonion, 2).unwrap();
        assert_eq!((o.k, o.m), (8, 16));
        assert!(matches!(
            make_space(FieldKind::Octonion, 3),
            Err(Error::InvalidSpace(_))
        ));
        assert!(make_space(FieldKind::Real, 1).is_err());
        assert!(make_space(FieldKind::Complex, 1).is_err());
        assert_eq!(make_space(FieldKind::Quaternion, 3).unwrap().m, 12);
    }

    #[test]
    fn real_hyperbolic_three_space() {
        let s = make_space(FieldKind::Real, 3).unwrap();
        for r in [0.1, 0.7, 2.5] {
            let d = polar_data(&s, r).unwrap();
            assert_relative_eq!(d.j, r.sinh().powi(2), max_relative = 1e-14);
            assert_relative_eq!(d.h, 2.0 / r.tanh(), max_relative = 1e-14);
            assert_relative_eq!(d.lam1, 2.0 / r.sinh().powi(2), max_relative = 1e-14);
            assert_eq!(d.hp, -d.lam1);
        }
    }

    #[test]
    fn density_reference_values() {
        // 50-digit references.
        let c2 = make_space(FieldKind::Complex, 2).unwrap();
        assert_relative_eq!(
            polar_data(&c2, 1.0).unwrap().j,
            2.504_524_547_679_214_4,
            max_relative = 1e-14
        );
        let o2 = make_space(FieldKind::Octonion, 2).unwrap();
        assert_relative_eq!(o2.density(0.5), 1.314_961_031_668_820_8e-4, max_relative = 1e-13);
        // r = 40 goes through the logarithmic branch.
        assert_relative_eq!(
            o2.log_density(40.0),
            864.750_762_027_681_2,
            max_relative = 1e-14
        );
    }

    #[test]
    fn small_radius_asymptotics() {
        for s in spaces() {
            let r = 1e-4;
            let d = polar_data(&s, r).unwrap();
            assert_relative_eq!(d.j, r.powi(s.m as i32 - 1), max_relative = 1e-6);
            assert_relative_eq!(d.lam1 * r * r, s.m_f() - 1.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn large_radius_stays_finite() {
        let o2 = make_space(FieldKind::Octonion, 2).unwrap();
        let d = polar_data(&o2, 400.0).unwrap();
        assert!(d.log_j.is_finite());
        assert_relative_eq!(d.h, 22.0, max_relative = 1e-12);
        assert!(d.lam1.abs() < 1e-300 || d.lam1.is_finite());
        assert!(d.hpp.is_finite() && d.hpp >= 0.0);
    }

    #[test]
    fn rejects_nonpositive_radius() {
        let s = make_space(FieldKind::Real, 2).unwrap();
        assert!(polar_data(&s, 0.0).is_err());
        assert!(lam1_alt_form(&s, -1.0).is_err());
        assert!(ball_volume(&s, 0.0).is_err());
        assert!(radius_for_volume(&s, 0.0).is_err());
    }

    #[test]
    fn sphere_eigenvalue_closed_forms_agree() {
        for s in spaces() {
            for i in 1..=300 {
                let r = 0.1 * i as f64;
                let a = s.sphere_eigenvalue(r);
                let b = lam1_alt_form(&s, r).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
        let c2 = make_space(FieldKind::Complex, 2).unwrap();
        assert_relative_eq!(
            c2.sphere_eigenvalue(1.0),
            lam1_alt_form(&c2, 1.0).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let step = 1e-5;
        for s in spaces() {
            for i in 1..=60 {
                let r = 0.5 * i as f64;
                let d = polar_data(&s, r).unwrap();
                let dlogj = (s.log_density(r + step) - s.log_density(r - step)) / (2.0 * step);
                assert!(((dlogj - d.h) / d.h).abs() < 1e-6, "{} r={r}", s.label());
                let dh = (s.mean_curvature(r + step) - s.mean_curvature(r - step)) / (2.0 * step);
                let scale = d.hp.abs().max(1e-12);
                assert!((dh - d.hp).abs() <= 1e-6 * scale + 1e-9, "{} r={r}", s.label());
                assert!(d.hpp > 0.0);
                if r < 10.0 {
                    let dhp = (s.sphere_eigenvalue(r - step) - s.sphere_eigenvalue(r + step))
                        / (2.0 * step);
                    assert!((dhp - d.hpp).abs() <= 1e-6 * d.hpp + 1e-9, "{} r={r}", s.label());
                }
            }
        }
    }

    #[test]
    fn volume_closed_forms() {
        let r2 = make_space(FieldKind::Real, 2).unwrap();
        for radius in [0.01, 0.5, 1.0, 3.0, 8.0] {
            assert_relative_eq!(
                ball_volume(&r2, radius).unwrap(),
                radius.cosh() - 1.0,
                max_relative = 1e-10
            );
        }
        let r3 = make_space(FieldKind::Real, 3).unwrap();
        assert_relative_eq!(
            ball_volume(&r3, 1.0).unwrap(),
            0.406_715_101_961_754_69,
            max_relative = 1e-12
        );
        // k = 2: J = sinh^{m-1} cosh integrates to sinh^m / m.
        let c2 = make_space(FieldKind::Complex, 2).unwrap();
        assert_relative_eq!(
            ball_volume(&c2, 1.0).unwrap(),
            1.0f64.sinh().powi(4) / 4.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            ball_volume(&c2, 1.0).unwrap(),
            0.476_857_814_740_061_27,
            max_relative = 1e-12
        );
        let h2 = make_space(FieldKind::Quaternion, 2).unwrap();
        assert_relative_eq!(
            ball_volume(&h2, 1.0).unwrap(),
            0.957_270_752_499_841_35,
            max_relative = 1e-12
        );
        // k = 8: J = sinh^15 cosh (1 + sinh^2)^3.
        let o2 = make_space(FieldKind::Octonion, 2).unwrap();
        let s = 0.7f64.sinh();
        let exact: f64 = [(1.0, 16), (3.0, 18), (3.0, 20), (1.0, 22)]
            .iter()
            .map(|&(c, p)| c * s.powi(p) / p as f64)
            .sum();
        assert_relative_eq!(ball_volume(&o2, 0.7).unwrap(), exact, max_relative = 1e-12);
        assert_relative_eq!(
            ball_volume(&o2, 1.0).unwrap(),
            9.246_712_717_080_999,
            max_relative = 1e-12
        );
    }

    #[test]
    fn radius_inversion() {
        let r2 = make_space(FieldKind::Real, 2).unwrap();
        let r = radius_for_volume(&r2, 1.0f64.cosh() - 1.0).unwrap();
        assert!((r - 1.0).abs() < 1e-10);

        // k = 2 inverts in closed form: R = asinh((m v)^{1/m}).
        let c3 = make_space(FieldKind::Complex, 3).unwrap();
        let r = radius_for_volume(&c3, 1.0).unwrap();
        assert!((r - 1.107_385_083_925_402_1).abs() < 1e-9);

        for s in spaces() {
            for r0 in [0.1, 1.0, 5.0] {
                let v = ball_volume(&s, r0).unwrap();
                let back = radius_for_volume(&s, v).unwrap();
                assert!((back - r0).abs() < 1e-9, "{} {r0} -> {back}", s.label());
                let v_back = ball_volume(&s, back).unwrap();
                assert!((v_back - v).abs() <= 1e-10 * v);
            }
        }
    }

    #[test]
    fn radius_for_tiny_volume() {
        let o2 = make_space(FieldKind::Octonion, 2).unwrap();
        let v = ball_volume(&o2, 1e-3).unwrap();
        let r = radius_for_volume(&o2, v).unwrap();
        assert!((r - 1e-3).abs() < 1e-12);
    }
}
