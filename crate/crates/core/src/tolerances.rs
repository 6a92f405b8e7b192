//! Numerical thresholds shared by the library, its tests and the CLI.

/// Cayley-Bacharach relation residual (Frobenius norm).
pub const RELATION: f64 = 1e-8;

/// Slack allowed in inequality checks `lhs ≤ rhs + SLACK`.
pub const SLACK: f64 = 1e-9;

/// Values below this count as negative evaluations.
pub const NEGATIVITY: f64 = -1e-10;

/// Coefficient-wise mismatch allowed in a Gram reconstruction.
pub const GRAM_RESIDUAL: f64 = 1e-7;

/// Smallest eigenvalue tolerated in a reported PSD matrix.
pub const PSD_FLOOR: f64 = -1e-8;

/// A sphere scan below this certifies non-convexity.
pub const SCAN_NEGATIVE: f64 = -1e-6;

/// Default interior-point tolerance.
pub const SDP_TOL: f64 = 1e-8;

/// Accepted range for a user supplied solver tolerance.
pub const SDP_TOL_RANGE: (f64, f64) = (1e-12, 1e-2);

/// Largest admissible symmetric-matrix asymmetry.
pub const SYMMETRY: f64 = 1e-12;

/// Float agreement for identities evaluated in double precision.
pub const IDENTITY_F64: f64 = 1e-10;

/// A Gram margin `t*` above `−MARGIN · scale` counts as membership.
pub const MARGIN: f64 = 1e-7;
