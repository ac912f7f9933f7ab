//! Radii of concavity (and one radius of convexity) for classes of
//! normalized univalent functions, with tools to check them numerically.
//!
//! Class members are built exactly from polynomial Schwarz maps, so every
//! sampled function provably belongs to its class; the concavity operators
//! are then evaluated on polar grids inside the computed radius.

pub mod class;
pub mod error;
pub mod operators;
pub mod poly;
pub mod radii;
pub mod schwarz;
pub mod verify;

pub use num_complex::Complex64;

pub use class::{ClassKind, ClassSpec, Param, Params};
pub use error::{Error, Result};
pub use operators::{
    closed_extremal_t, extremal_presch, p_of, p_of_guarded, presch_for, t_of, u_functional,
    u_functional_of, Extremal, PreSchwarzian,
};
pub use poly::CPoly;
pub use radii::{least_root_in, polynomial_for, radius_for, RPoly, RadiusMethod, RadiusResult};
pub use schwarz::{sample_schwarz, sample_schwarz_pinned, SchwarzCert};
pub use verify::{
    disc_min_real, identity_checks, sample_verify, sharpness_check, GridSpec, IdentityCheck,
    SharpnessReport, VerifyReport, Witness,
};
