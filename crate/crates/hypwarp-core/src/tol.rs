//! Central tolerance constants.
//!
//! Everything downstream validates against these; no module carries its own
//! ad-hoc thresholds.

/// Pointwise hyperboloid / tangency residuals (`|⟨p,p⟩ + 1|`, `|⟨p,v⟩|`, unit
/// norms). Two orders of magnitude above accumulated f64 rounding in chained
/// exp/log/transport operations.
pub const TAU_POINT: f64 = 1e-9;

/// Residual of the Minkowski-form invariance `MᵀJM = J` for isometries built
/// from frames, which chain one matrix product per construction step.
pub const TAU_ISO: f64 = 1e-8;

/// Developing-map defects: chart chains compose ~n frame solves, each
/// contributing ~`TAU_ISO`.
pub const TAU_DEV: f64 = 1e-8;

/// Polygon realization closure and chord-comparison slack. Hyperbolic trig
/// identities hold to ~1e-12 in f64; this leaves headroom for chained
/// law-of-cosines inductions.
pub const TAU_POLY: f64 = 1e-8;

/// Relative agreement demanded between the closed-form sectional curvature
/// and the finite-difference Riemann oracle.
pub const TAU_FD: f64 = 1e-5;

/// Slack allowed on the grid minimum of `(−1 − K)` before a curvature-bound
/// certificate is failed.
pub const TAU_MARGIN: f64 = 1e-9;
