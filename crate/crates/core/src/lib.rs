//! Robin, Neumann and Steklov eigenvalues of geodesic balls and annuli in
//! the non-compact rank-1 symmetric spaces ℝHⁿ, ℂHⁿ, ℍHⁿ and 𝕆H², together
//! with numerical checks of the second-eigenvalue comparison between
//! domains and the geodesic ball of the same volume.

pub mod ball;
pub mod cli;
pub mod compare;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod oracle;
pub mod quadrature;
pub mod radial;
pub mod roots;
pub mod tolerances;

pub use error::{Error, Result};
pub use geometry::{make_space, FieldKind, GeodesicPolarData, SpaceParams};
pub use radial::{EigenResult, RadialDomain, RadialProfile, RobinProblem};
pub use tolerances::Tolerances;
