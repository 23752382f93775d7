//! Numerical Presnov decomposition of vector fields on R^n.
//!
//! Every field `X` splits as `X = grad H_X + u` with
//! `H_X(x) = ∫_0^1 <X(tx), x> dt` and `<u(x), x> = 0`. The crate evaluates
//! both parts by quadrature and finite differences, verifies the identities
//! pointwise, probes radial coercivity, and locates equilibria inside balls
//! whose boundary certifies them.
//!
//! ```
//! use presnov_core::{catalog_lookup, decompose, CatalogParams, QuadratureConfig};
//!
//! let (field, _) = catalog_lookup("rotation2d", None, &CatalogParams::default()).unwrap();
//! let s = decompose(&field, &[1.0, 2.0], &QuadratureConfig::default()).unwrap();
//! assert!(s.potential.abs() < 1e-12);
//! assert!((s.sphere_invariant[0] + 2.0).abs() < 1e-8);
//! ```

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod equilibria;
pub mod error;
pub mod expr;
pub mod field;
pub mod presnov;
pub mod quadrature;
pub mod radial;
pub mod sampling;
pub mod vector;

pub use catalog::{catalog_lookup, CatalogEntry, CatalogField, CatalogParams, Coercivity, Polynomial, SquareMatrix, CATALOG_NAMES};
pub use equilibria::{
    find_equilibrium, find_equilibrium_conservative, perturbed_existence, EquilibriumResult, PerturbationConfig,
    PerturbedExistence, SolveStatus, SolverConfig, Target,
};
pub use error::{Error, Result};
pub use expr::{parse_expr, parse_field, parse_field_infer_dim, Expr, ParseError, ParseErrorKind};
pub use field::{Domain, FieldSpec, Point, VectorField};
pub use presnov::{
    compute_potential, conservative_field, decompose, decompose_all, gradient_potential, gradient_potential_integral,
    sphere_invariant_field, verify_decomposition, DecompositionSample, PotentialEstimate, VerificationReport,
    VerifyConfig,
};
pub use quadrature::QuadratureConfig;
pub use radial::{
    boundary_certificate, coercivity_probe, paired_probe, radial_profile, BoundaryCertificate, CertificateConfig,
    PairedProbeReport, ProbeConfig, RadialProbeReport, Verdict, VerdictKind,
};
