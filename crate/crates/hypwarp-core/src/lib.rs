//! Numerical toolkit for hyperbolic geometry in the hyperboloid model,
//! centered on three verification tasks:
//!
//! - warped-product metrics `f²(t)·g_hyp + dt²` on `S × ℝ` with a certified
//!   sectional-curvature upper bound `K ≤ −1`, cross-checked by an
//!   independent finite-difference Riemann oracle ([`warped`]);
//! - developing maps that flatten the boundary of a hypercube with totally
//!   geodesic faces into `Hⁿ`, with holonomy and embedding checks
//!   ([`developing`]);
//! - Rauch-style polygon comparison between curvature `−1` and curvature
//!   `≤ −1` data ([`comparison`]).
//!
//! Supporting layers: the hyperboloid model itself ([`hyperboloid`]),
//! totally geodesic hyperplanes and model hypercubes ([`region`]), and
//! Grassmann-distance / cube-chain distribution checks ([`distribution`]).
//!
//! All geometry lives on the upper sheet of `⟨x,x⟩ = −1` in Minkowski space
//! `ℝ^{n,1}` with the form `⟨x,y⟩ = −x₀y₀ + Σᵢ xᵢyᵢ`. Everything is plain
//! `f64`; constructors validate their invariants against the tolerances in
//! [`tol`].

pub mod comparison;
pub mod developing;
pub mod distribution;
pub mod error;
pub mod hyperboloid;
pub mod region;
pub mod tol;
pub mod warped;

pub use error::GeomError;
