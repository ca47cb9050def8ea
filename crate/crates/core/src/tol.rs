//! Numerical tolerances shared across the crate.

/// Allowed deviation of `ad - bc` from 1, scaled by the squared largest entry.
pub const DET_TOL: f64 = 1e-12;

/// Band around `|trace| = 2` inside which an isometry counts as parabolic.
pub const TRACE_BAND: f64 = 1e-9;

/// Results within this multiple of [`TRACE_BAND`] carry the `marginal` flag.
pub const MARGINAL_FACTOR: f64 = 10.0;

/// Entrywise distance from the identity below which an isometry is trivial.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Tolerance for algebraic identities (group laws, isometry invariance).
pub const IDENTITY_CHECK: f64 = 1e-10;

/// Maximum entrywise residual of the surface-group relator.
pub const RELATOR_TOL: f64 = 1e-8;

/// Slack added to enumeration radii so boundary elements are kept.
pub const RADIUS_EPS: f64 = 1e-9;

/// Relative tolerance on the Gauss–Bonnet area when certifying a
/// Dirichlet polygon.
pub const AREA_REL_TOL: f64 = 1e-7;

/// Tolerance, in sinh-of-distance units, for half-plane side tests.
pub const SIDE_TOL: f64 = 1e-11;

/// Default cap on enumerated group elements.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// Translation lengths closer than this are treated as one spectrum value.
pub const LENGTH_CLUSTER_TOL: f64 = 1e-7;
