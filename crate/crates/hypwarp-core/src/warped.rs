//! Warped-product metrics `g = f²(t)·g_hyp + dt²` on `S × ℝ` and their
//! sectional-curvature certificates.
//!
//! The warp profile is
//!
//! `f(t) = (1/ℓ)·cosh(ℓt) + χ(t)·(1 − 1/ℓ)`,
//!
//! where χ is an even C² cutoff equal to 1 on `[−t₀, t₀]` and 0 outside
//! `[−M, M]`, with certified bounds on `|χ′|` and `|χ″|`. Against a
//! curvature −1 fiber, the sectional curvature through a plane with
//! `mix = g(X,∂t)² + g(Y,∂t)²` is
//!
//! `K = (−1 − f′²)/f² + ((1 + f′² − f″f)/f²)·mix`,
//!
//! linear in `mix`. At `t = 0` the fiber is totally geodesic (`f′(0) = 0`,
//! `f(0) = 1`) with `K = −1`; outside the cutoff support the metric is the
//! constant-curvature `−ℓ²` space. (The radial curvature there is `−f″/f`;
//! both routes give `−ℓ²`, which is what this module reports.)
//!
//! `verify_bound` sweeps a grid in `(t, mix)` for the margin `−1 − K ≥ 0`
//! and also evaluates the two sufficient inequalities behind the bound: the
//! χ-free monotonicity inequality on `|t| < t₀` and the tail inequality
//! `1 ≤ ℓ²cosh(ℓt)/(cosh(ℓt)+ℓ−1) + χ″(t)(ℓ−1)/(cosh(ℓt)+ℓ−1)` on
//! `|t| > t₀`. A grid pass is strong evidence, not a proof; the sweep is
//! deterministic and parallelizable.
//!
//! Everything force-evaluates through exponentially scaled quantities
//! (`cosh(ℓt)·e^{−|ℓt|}` and friends), so certificates stay finite for
//! cutoffs with very large support where `cosh(ℓt)` itself overflows f64.
//! The independent finite-difference Riemann oracle works on the raw chart
//! metric and is therefore range-limited; it reports an error rather than
//! returning garbage when `f²` leaves the representable range.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::tol::TAU_MARGIN;

/// Smoothstep bound constants: max |d/ds| and |d²/ds²| of
/// `s ↦ 6s⁵ − 15s⁴ + 10s³` on [0,1].
const SMOOTHSTEP_D1_MAX: f64 = 1.875;
fn smoothstep_d2_max() -> f64 {
    10.0 / 3.0f64.sqrt()
}

/// How the cutoff interpolates between its plateau and its support end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutoffProfile {
    /// C² quintic smoothstep `χ = 1 − (6s⁵ − 15s⁴ + 10s³)` in
    /// `s = (|t| − t₀)/(M − t₀)`, mirrored in t.
    QuinticSmoothstep,
}

/// An even C² cutoff: 1 on `[−t₀, t₀]`, 0 outside `[−M, M]`, with a
/// closed-form certified bound on `max(|χ′|, |χ″|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub t0: f64,
    pub m_end: f64,
    pub profile: CutoffProfile,
    pub derivative_bound: f64,
}

impl CutoffSpec {
    pub fn new(t0: f64, m_end: f64) -> Result<Self> {
        if !(t0 > 0.0 && m_end > t0) {
            return Err(GeomError::InvalidParameter(format!(
                "cutoff needs 0 < t0 < M, got t0 = {t0}, M = {m_end}"
            )));
        }
        let width = m_end - t0;
        let derivative_bound =
            (SMOOTHSTEP_D1_MAX / width).max(smoothstep_d2_max() / (width * width));
        Ok(CutoffSpec {
            t0,
            m_end,
            profile: CutoffProfile::QuinticSmoothstep,
            derivative_bound,
        })
    }

    /// Smallest M for which the certified derivative bound meets `target`.
    pub fn auto_m(t0: f64, target: f64) -> Result<Self> {
        if !(target > 0.0) {
            return Err(GeomError::InvalidParameter(format!(
                "derivative bound target must be positive, got {target}"
            )));
        }
        let width = (SMOOTHSTEP_D1_MAX / target).max((smoothstep_d2_max() / target).sqrt());
        CutoffSpec::new(t0, t0 + width)
    }
}

/// `χ(t), χ′(t), χ″(t)`.
pub fn chi(spec: &CutoffSpec, t: f64) -> (f64, f64, f64) {
    let u = t.abs();
    if u <= spec.t0 {
        return (1.0, 0.0, 0.0);
    }
    if u >= spec.m_end {
        return (0.0, 0.0, 0.0);
    }
    let width = spec.m_end - spec.t0;
    let s = (u - spec.t0) / width;
    let p = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    let dp = 30.0 * s * s * (s - 1.0) * (s - 1.0);
    let ddp = s * (60.0 + s * (-180.0 + 120.0 * s));
    let sign = if t >= 0.0 { 1.0 } else { -1.0 };
    (1.0 - p, -dp * sign / width, -ddp / (width * width))
}

/// The warped metric parameters: `f(t) = (1/ℓ)cosh(ℓt) + χ(t)(1 − 1/ℓ)` on
/// an n-dimensional total space with hyperbolic fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpedMetric {
    pub ell: f64,
    pub cutoff: CutoffSpec,
    pub n: usize,
}

impl WarpedMetric {
    pub fn new(ell: f64, cutoff: CutoffSpec) -> Result<Self> {
        if !(ell >= 1.0) {
            return Err(GeomError::InvalidParameter(format!(
                "warp parameter ℓ must be ≥ 1, got {ell}"
            )));
        }
        Ok(WarpedMetric { ell, cutoff, n: 3 })
    }

    /// ℓ = 2 with t₀ = 0.5 and M chosen so the certified cutoff derivative
    /// bound is ≤ 0.01.
    pub fn default_counterexample() -> Self {
        WarpedMetric::new(2.0, CutoffSpec::auto_m(0.5, 0.01).expect("valid defaults"))
            .expect("valid defaults")
    }
}

/// `f(t), f′(t), f″(t)` in raw form. Overflows f64 once `|ℓt|` passes ~709;
/// the curvature routines below use scaled evaluation instead and stay
/// finite.
pub fn warp_f(m: &WarpedMetric, t: f64) -> (f64, f64, f64) {
    let (c, d1, d2) = chi(&m.cutoff, t);
    let w = 1.0 - 1.0 / m.ell;
    let lt = m.ell * t;
    (
        lt.cosh() / m.ell + c * w,
        lt.sinh() + d1 * w,
        m.ell * lt.cosh() + d2 * w,
    )
}

/// Scaled warp data at `t`: everything multiplied by `e^{−|ℓt|}` so ratios
/// and `1/f²` are computable at any t.
struct ScaledWarp {
    /// `f·e^{−a}, f′·e^{−a}, f″·e^{−a}` for `a = |ℓt|`.
    f: f64,
    f1: f64,
    f2: f64,
    /// `e^{−a}`.
    shrink: f64,
}

fn warp_scaled(m: &WarpedMetric, t: f64) -> ScaledWarp {
    let (c, d1, d2) = chi(&m.cutoff, t);
    let w = 1.0 - 1.0 / m.ell;
    let a = (m.ell * t).abs();
    let e2 = (-2.0 * a).exp();
    let shrink = (-a).exp();
    let cosh_s = 0.5 * (1.0 + e2);
    let sinh_s = 0.5 * (1.0 - e2) * if t >= 0.0 { 1.0 } else { -1.0 };
    ScaledWarp {
        f: cosh_s / m.ell + c * w * shrink,
        f1: sinh_s + d1 * w * shrink,
        f2: m.ell * cosh_s + d2 * w * shrink,
        shrink,
    }
}

/// A tangent 2-plane described by its position `t` along the warp axis and
/// `mix = g(X,∂t)² + g(Y,∂t)²` for an orthonormal spanning pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneAtPoint {
    pub t: f64,
    pub mix: f64,
}

impl PlaneAtPoint {
    pub fn new(t: f64, mix: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mix) {
            return Err(GeomError::InvalidParameter(format!(
                "mix must lie in [0,1], got {mix}"
            )));
        }
        Ok(PlaneAtPoint { t, mix })
    }
}

/// Closed-form sectional curvature through the plane, with fiber curvature
/// −1: `K = (−1 − f′²)/f² + ((1 + f′² − f″f)/f²)·mix`.
pub fn sectional_curvature(m: &WarpedMetric, p: PlaneAtPoint) -> f64 {
    let (a, b) = curvature_coefficients(m, p.t);
    a + b * p.mix
}

/// `K(t, mix) = A(t) + B(t)·mix`; returns `(A, B)` evaluated stably.
pub fn curvature_coefficients(m: &WarpedMetric, t: f64) -> (f64, f64) {
    let s = warp_scaled(m, t);
    let r1 = s.f1 / s.f;
    let r2 = s.f2 / s.f;
    let inv_f2 = (s.shrink / s.f) * (s.shrink / s.f);
    (-inv_f2 - r1 * r1, inv_f2 + r1 * r1 - r2)
}

/// `|f′(0)/f(0)|`, the second-fundamental-form scale of the t = 0 fiber;
/// zero iff the fiber is totally geodesic.
pub fn totally_geodesic_check(m: &WarpedMetric) -> f64 {
    let (f, f1, _) = warp_f(m, 0.0);
    (f1 / f).abs()
}

/// χ-free part of the derivative inequality controlling the mix = 0 margin
/// on the plateau, evaluated in scaled form; nonpositive for t > 0 and
/// nonnegative for t < 0 when the bound mechanism holds.
fn plateau_inequality_expr(m: &WarpedMetric, t: f64) -> f64 {
    let (c, _, _) = chi(&m.cutoff, t);
    let a = (m.ell * t).abs();
    let e2 = (-2.0 * a).exp();
    let sech = 2.0 * (-a).exp() / (1.0 + e2);
    let tanh = (1.0 - e2) / (1.0 + e2) * if t >= 0.0 { 1.0 } else { -1.0 };
    // sinh·(−2cosh² − 2ℓ·cosh·χ(1−1/ℓ) + 1 + sinh²) / cosh³
    tanh * (-2.0 - 2.0 * m.ell * c * (1.0 - 1.0 / m.ell) * sech
        + sech * sech
        + tanh * tanh)
}

/// Tail inequality `1 ≤ ℓ²cosh/(cosh+ℓ−1) + χ″(ℓ−1)/(cosh+ℓ−1)` evaluated
/// in scaled form; returns the right-hand side.
fn tail_inequality_rhs(m: &WarpedMetric, t: f64) -> f64 {
    let (_, _, d2) = chi(&m.cutoff, t);
    let a = (m.ell * t).abs();
    let e2 = (-2.0 * a).exp();
    let sech = 2.0 * (-a).exp() / (1.0 + e2);
    let denom = 1.0 + (m.ell - 1.0) * sech;
    (m.ell * m.ell + d2 * (m.ell - 1.0) * sech) / denom
}

/// A grid cell where the curvature bound (or an inequality) failed.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Violation {
    pub t: f64,
    pub mix: f64,
    pub curvature: f64,
}

/// Grid-sweep certificate for `K ≤ −1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub ell: f64,
    pub t0: f64,
    pub m_end: f64,
    pub derivative_bound: f64,
    pub t_range: (f64, f64),
    pub grid_t: usize,
    pub grid_mix: usize,
    /// Minimum over the grid of `−1 − K`.
    pub margin_min: f64,
    pub argmin: (f64, f64),
    /// Closed-form `K(0, 0)`.
    pub k_at_fiber: f64,
    pub ineq3_pass: bool,
    pub ineq3_first_violation: Option<(f64, f64)>,
    pub eqn22_pass: bool,
    pub eqn22_first_violation: Option<(f64, f64)>,
    /// Up to 16 failing cells, in scan order.
    pub violations: Vec<Violation>,
    /// Thinned `(t, mix, K)` triples for report inspection.
    pub samples: Vec<(f64, f64, f64)>,
    pub pass: bool,
}

/// Per-t partial result of the sweep, merged in t order.
struct RowResult {
    min_margin: f64,
    argmin_mix: f64,
    violations: Vec<Violation>,
    ineq3_violation: Option<(f64, f64)>,
    eqn22_violation: Option<(f64, f64)>,
}

/// Sweeps `(t, mix)` over the requested grid (t = 0 is always included) and
/// reports the margin minimum, the sufficient inequalities, and localized
/// violations. The grid must resolve at least 10³ points in t and 10² in
/// mix.
pub fn verify_bound(
    m: &WarpedMetric,
    t_range: (f64, f64),
    grid_t: usize,
    grid_mix: usize,
) -> Result<CertificateReport> {
    if grid_t < 1000 || grid_mix < 100 {
        return Err(GeomError::InvalidParameter(format!(
            "grid must be at least 1000×100, got {grid_t}×{grid_mix}"
        )));
    }
    let (lo, hi) = t_range;
    if !(hi > lo) {
        return Err(GeomError::InvalidParameter(format!(
            "empty t range [{lo}, {hi}]"
        )));
    }
    let mut ts: Vec<f64> = (0..grid_t)
        .map(|i| lo + (hi - lo) * i as f64 / (grid_t - 1) as f64)
        .collect();
    if lo < 0.0 && hi > 0.0 && !ts.contains(&0.0) {
        ts.push(0.0);
        ts.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    }
    let mixes: Vec<f64> = (0..grid_mix)
        .map(|j| j as f64 / (grid_mix - 1) as f64)
        .collect();

    let rows: Vec<RowResult> = ts
        .par_iter()
        .map(|&t| {
            let (ka, kb) = curvature_coefficients(m, t);
            let mut min_margin = f64::INFINITY;
            let mut argmin_mix = 0.0;
            let mut violations = Vec::new();
            for &mix in &mixes {
                let k = ka + kb * mix;
                let margin = -1.0 - k;
                if margin < min_margin {
                    min_margin = margin;
                    argmin_mix = mix;
                }
                if margin < -TAU_MARGIN && violations.len() < 4 {
                    violations.push(Violation {
                        t,
                        mix,
                        curvature: k,
                    });
                }
            }
            let ineq3_violation = if t.abs() < m.cutoff.t0 && t != 0.0 {
                let v = plateau_inequality_expr(m, t) * t.signum();
                (v > TAU_MARGIN).then_some((t, v))
            } else {
                None
            };
            let eqn22_violation = if t.abs() > m.cutoff.t0 {
                let rhs = tail_inequality_rhs(m, t);
                (rhs < 1.0 - TAU_MARGIN).then_some((t, rhs))
            } else {
                None
            };
            RowResult {
                min_margin,
                argmin_mix,
                violations,
                ineq3_violation,
                eqn22_violation,
            }
        })
        .collect();

    let mut margin_min = f64::INFINITY;
    let mut argmin = (ts[0], 0.0);
    let mut violations = Vec::new();
    let mut ineq3_first = None;
    let mut eqn22_first = None;
    for (i, row) in rows.iter().enumerate() {
        if row.min_margin < margin_min {
            margin_min = row.min_margin;
            argmin = (ts[i], row.argmin_mix);
        }
        for v in &row.violations {
            if violations.len() < 16 {
                violations.push(*v);
            }
        }
        if ineq3_first.is_none() {
            ineq3_first = row.ineq3_violation;
        }
        if eqn22_first.is_none() {
            eqn22_first = row.eqn22_violation;
        }
    }

    let stride = (ts.len() / 8).max(1);
    let samples: Vec<(f64, f64, f64)> = ts
        .iter()
        .step_by(stride)
        .flat_map(|&t| {
            [0.0, 0.5, 1.0].into_iter().map(move |mix| (t, mix))
        })
        .map(|(t, mix)| {
            (
                t,
                mix,
                sectional_curvature(m, PlaneAtPoint { t, mix }),
            )
        })
        .collect();

    let k_at_fiber = sectional_curvature(m, PlaneAtPoint { t: 0.0, mix: 0.0 });
    let pass = margin_min >= -TAU_MARGIN;
    Ok(CertificateReport {
        ell: m.ell,
        t0: m.cutoff.t0,
        m_end: m.cutoff.m_end,
        derivative_bound: m.cutoff.derivative_bound,
        t_range,
        grid_t,
        grid_mix,
        margin_min,
        argmin,
        k_at_fiber,
        ineq3_pass: ineq3_first.is_none(),
        ineq3_first_violation: ineq3_first,
        eqn22_pass: eqn22_first.is_none(),
        eqn22_first_violation: eqn22_first,
        violations,
        samples,
        pass,
    })
}

/// Dense `(t, mix, K)` sweep for CSV export, decimated by `stride` in t.
pub fn curvature_sweep(
    m: &WarpedMetric,
    t_range: (f64, f64),
    grid_t: usize,
    grid_mix: usize,
    stride: usize,
) -> Vec<(f64, f64, f64)> {
    let (lo, hi) = t_range;
    let stride = stride.max(1);
    (0..grid_t)
        .step_by(stride)
        .flat_map(|i| {
            let t = lo + (hi - lo) * i as f64 / (grid_t - 1) as f64;
            let (ka, kb) = curvature_coefficients(m, t);
            (0..grid_mix).map(move |j| {
                let mix = j as f64 / (grid_mix - 1) as f64;
                (t, mix, ka + kb * mix)
            })
        })
        .collect()
}

/// An explicit 2-plane in the product chart `(r, θ, t)`: base point and two
/// spanning coordinate vectors (not necessarily orthonormal).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChartPlane {
    pub r: f64,
    pub theta: f64,
    pub x: [f64; 3],
    pub y: [f64; 3],
}

/// Finite-difference step for the chart derivatives; fourth-order stencils
/// keep truncation ~h⁴ while staying far above rounding.
const FD_STEP: f64 = 5e-3;

/// Chart metric `diag(f², f²·sinh²r, 1)` in coordinates `(r, θ, t)` for a
/// polar chart `dr² + sinh²(r)dθ²` on the hyperbolic fiber.
fn chart_metric(m: &WarpedMetric, x: [f64; 3]) -> [[f64; 3]; 3] {
    let (f, _, _) = warp_f(m, x[2]);
    let f2 = f * f;
    [
        [f2, 0.0, 0.0],
        [0.0, f2 * x[0].sinh().powi(2), 0.0],
        [0.0, 0.0, 1.0],
    ]
}

fn invert3(g: [[f64; 3]; 3]) -> Result<[[f64; 3]; 3]> {
    let m = nalgebra::Matrix3::from_fn(|i, j| g[i][j]);
    let inv = m
        .try_inverse()
        .ok_or_else(|| GeomError::InvalidParameter("chart metric is singular".into()))?;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = inv[(i, j)];
        }
    }
    Ok(out)
}

/// Fourth-order central difference of a 3×3-matrix-valued chart function.
fn d4<Fm: Fn([f64; 3]) -> [[f64; 3]; 3]>(
    f: &Fm,
    x: [f64; 3],
    dir: usize,
    h: f64,
) -> [[f64; 3]; 3] {
    let shift = |delta: f64| {
        let mut y = x;
        y[dir] += delta;
        f(y)
    };
    let (m2, m1, p1, p2) = (
        shift(-2.0 * h),
        shift(-h),
        shift(h),
        shift(2.0 * h),
    );
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] =
                (m2[i][j] - 8.0 * m1[i][j] + 8.0 * p1[i][j] - p2[i][j]) / (12.0 * h);
        }
    }
    out
}

fn christoffel(m: &WarpedMetric, x: [f64; 3], h: f64) -> Result<[[[f64; 3]; 3]; 3]> {
    let g = chart_metric(m, x);
    let ginv = invert3(g)?;
    let metric = |y: [f64; 3]| chart_metric(m, y);
    let dg: Vec<[[f64; 3]; 3]> = (0..3).map(|d| d4(&metric, x, d, h)).collect();
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for l in 0..3 {
                    acc += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                }
                gamma[k][i][j] = 0.5 * acc;
            }
        }
    }
    Ok(gamma)
}

/// Sectional curvature through an explicit chart plane at warp position `t`,
/// from finite-difference Christoffel symbols and the Riemann tensor. The
/// raw chart metric must stay in f64 range, which bounds `|ℓt|` to ~350.
pub fn fd_riemann_oracle(m: &WarpedMetric, t: f64, plane: &ChartPlane) -> Result<f64> {
    let x = [plane.r, plane.theta, t];
    if plane.r <= 2.5 * FD_STEP {
        return Err(GeomError::InvalidParameter(
            "polar chart is singular near r = 0; pick r > 0.0125".into(),
        ));
    }
    let (f, _, _) = warp_f(m, t + 2.0 * FD_STEP);
    if !(f * f * x[0].sinh().powi(2)).is_finite() {
        return Err(GeomError::InvalidParameter(format!(
            "chart metric leaves f64 range at t = {t}; the scaled closed form \
             remains available"
        )));
    }

    let h = FD_STEP;
    let g = chart_metric(m, x);
    let gamma = christoffel(m, x, h)?;
    // ∂Γ by the same fourth-order stencil, one slice per derivative axis.
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for d in 0..3 {
        let shift = |delta: f64| -> Result<[[[f64; 3]; 3]; 3]> {
            let mut y = x;
            y[d] += delta;
            christoffel(m, y, h)
        };
        let (m2, m1, p1, p2) = (
            shift(-2.0 * h)?,
            shift(-h)?,
            shift(h)?,
            shift(2.0 * h)?,
        );
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    dgamma[d][k][i][j] = (m2[k][i][j] - 8.0 * m1[k][i][j]
                        + 8.0 * p1[k][i][j]
                        - p2[k][i][j])
                        / (12.0 * h);
                }
            }
        }
    }

    // R^ρ_{σμν} = ∂_μ Γ^ρ_{νσ} − ∂_ν Γ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}
    let mut riemann = [[[[0.0; 3]; 3]; 3]; 3];
    for rho in 0..3 {
        for sig in 0..3 {
            for mu in 0..3 {
                for nu in 0..3 {
                    let mut val = dgamma[mu][rho][nu][sig] - dgamma[nu][rho][mu][sig];
                    for lam in 0..3 {
                        val += gamma[rho][mu][lam] * gamma[lam][nu][sig]
                            - gamma[rho][nu][lam] * gamma[lam][mu][sig];
                    }
                    riemann[rho][sig][mu][nu] = val;
                }
            }
        }
    }

    // Lower the first index and contract with the plane.
    let xv = plane.x;
    let yv = plane.y;
    let mut num = 0.0;
    for rho in 0..3 {
        for sig in 0..3 {
            for mu in 0..3 {
                for nu in 0..3 {
                    let mut lowered = 0.0;
                    for lam in 0..3 {
                        lowered += g[rho][lam] * riemann[lam][sig][mu][nu];
                    }
                    num += lowered * xv[rho] * yv[sig] * xv[mu] * yv[nu];
                }
            }
        }
    }
    let gxx = quad(&g, &xv, &xv);
    let gyy = quad(&g, &yv, &yv);
    let gxy = quad(&g, &xv, &yv);
    let denom = gxx * gyy - gxy * gxy;
    if denom.abs() < 1e-30 {
        return Err(GeomError::InvalidParameter(
            "plane vectors are linearly dependent".into(),
        ));
    }
    Ok(num / denom)
}

fn quad(g: &[[f64; 3]; 3], a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += g[i][j] * a[i] * b[j];
        }
    }
    acc
}

/// `mix = g(X,∂t)² + g(Y,∂t)²` of a chart plane after orthonormalizing
/// its spanning pair in the chart metric; pairs the FD oracle with the
/// closed-form curvature.
pub fn chart_plane_mix(m: &WarpedMetric, t: f64, plane: &ChartPlane) -> Result<f64> {
    let g = chart_metric(m, [plane.r, plane.theta, t]);
    let mut x = plane.x;
    let nx = quad(&g, &x, &x).sqrt();
    if !(nx > 0.0) {
        return Err(GeomError::DegenerateDirection);
    }
    for c in &mut x {
        *c /= nx;
    }
    let mut y = plane.y;
    let xy = quad(&g, &x, &y);
    for i in 0..3 {
        y[i] -= xy * x[i];
    }
    let ny = quad(&g, &y, &y).sqrt();
    if !(ny > 0.0) {
        return Err(GeomError::DegenerateDirection);
    }
    for c in &mut y {
        *c /= ny;
    }
    // g(·, ∂t) is just the t-component (g is block diagonal with g_tt = 1).
    Ok(x[2] * x[2] + y[2] * y[2])
}
