//! The hyperboloid model of hyperbolic n-space.
//!
//! Points live on the upper sheet of `⟨x,x⟩ = −1` in `ℝ^{n,1}`, tangent
//! vectors are Minkowski-orthogonal to their base point, and isometries are
//! Lorentz matrices preserving the upper sheet. Geodesics have the closed
//! form `cosh(t)·p + sinh(t)·v`, so exp, log, distance, angle and parallel
//! transport are all elementary; the only care taken is domain clamping of
//! `acosh`/`acos` and re-projection onto the sheet after each step so that
//! long verification chains do not drift.
//!
//! The dimension n is a runtime parameter (n ≥ 2); a vector of length n+1
//! carries it implicitly.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::tol::{TAU_ISO, TAU_POINT};

/// A raw vector in Minkowski space `ℝ^{n,1}`, signature `(−,+,…,+)`.
///
/// Carries no normalization of its own; it can represent a point candidate,
/// a tangent direction, or a hyperplane normal depending on the sign of
/// `⟨x,x⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiVec(pub Vec<f64>);

impl MinkowskiVec {
    pub fn new(coords: Vec<f64>) -> Self {
        MinkowskiVec(coords)
    }

    /// Ambient dimension n+1 of the vector.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Spatial dimension n of the hyperbolic space this vector lives over.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn zeros(len: usize) -> Self {
        MinkowskiVec(vec![0.0; len])
    }

    /// Standard basis vector `e_i` (index 0 is the timelike direction).
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = vec![0.0; len];
        v[i] = 1.0;
        MinkowskiVec(v)
    }

    pub fn scale(&self, s: f64) -> Self {
        MinkowskiVec(self.0.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        MinkowskiVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        MinkowskiVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `a + s·b` in one pass.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        MinkowskiVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }
}

/// Minkowski bilinear form `⟨x,y⟩ = −x₀y₀ + Σᵢ xᵢyᵢ`.
pub fn mink_inner(x: &MinkowskiVec, y: &MinkowskiVec) -> Result<f64> {
    if x.len() != y.len() {
        return Err(GeomError::DimensionMismatch(x.len(), y.len()));
    }
    Ok(mink_inner_unchecked(x, y))
}

/// Euclidean square sum of the coordinates, floored at 1. Validation
/// residuals of the Minkowski form scale like this times machine epsilon,
/// so invariant checks are measured against a scale-aware tolerance.
pub(crate) fn coord_scale(v: &MinkowskiVec) -> f64 {
    v.0.iter().map(|x| x * x).sum::<f64>().max(1.0)
}

/// Scale-aware tolerance: the stated tolerance at unit scale, opening up to
/// the inherent f64 rounding level (with headroom for chained operations)
/// when coordinates are large.
pub(crate) fn scaled_tol(tau: f64, scale: f64) -> f64 {
    tau.max(scale * f64::EPSILON * 128.0)
}

/// Same as [`mink_inner`] without the dimension check, for internal hot paths
/// where lengths are known equal.
pub(crate) fn mink_inner_unchecked(x: &MinkowskiVec, y: &MinkowskiVec) -> f64 {
    let mut acc = -x.0[0] * y.0[0];
    for i in 1..x.len() {
        acc += x.0[i] * y.0[i];
    }
    acc
}

/// A point on the upper sheet: `⟨p,p⟩ = −1`, `p₀ > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    vec: MinkowskiVec,
}

impl HPoint {
    /// Validates the sheet condition within [`TAU_POINT`].
    pub fn new(vec: MinkowskiVec) -> Result<Self> {
        let inner = mink_inner_unchecked(&vec, &vec);
        if (inner + 1.0).abs() > scaled_tol(TAU_POINT, coord_scale(&vec)) || vec.0[0] <= 0.0 {
            return Err(GeomError::NotAPoint {
                inner,
                time_component: vec.0[0],
            });
        }
        Ok(HPoint { vec })
    }

    /// Rescales the timelike component so that `⟨p,p⟩ = −1` holds exactly in
    /// floating point, then wraps. Used after exp/transport to stop drift.
    pub fn project(mut vec: MinkowskiVec) -> Result<Self> {
        let spatial_sq: f64 = vec.0[1..].iter().map(|x| x * x).sum();
        if vec.0[0] <= 0.0 {
            return Err(GeomError::NotAPoint {
                inner: mink_inner_unchecked(&vec, &vec),
                time_component: vec.0[0],
            });
        }
        vec.0[0] = (1.0 + spatial_sq).sqrt();
        Ok(HPoint { vec })
    }

    /// The basepoint `(1, 0, …, 0)` of `Hⁿ`.
    pub fn basepoint(n: usize) -> Self {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        HPoint {
            vec: MinkowskiVec(v),
        }
    }

    pub fn vec(&self) -> &MinkowskiVec {
        &self.vec
    }

    pub fn dim(&self) -> usize {
        self.vec.dim()
    }
}

/// A tangent vector at a point: `⟨base, dir⟩ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HTangent {
    base: HPoint,
    dir: MinkowskiVec,
}

impl HTangent {
    /// Validates tangency within [`TAU_POINT`]. The direction need not be
    /// unit; see [`HTangent::new_unit`].
    pub fn new(base: HPoint, dir: MinkowskiVec) -> Result<Self> {
        if base.vec.len() != dir.len() {
            return Err(GeomError::DimensionMismatch(base.vec.len(), dir.len()));
        }
        let t = mink_inner_unchecked(base.vec(), &dir);
        let scale = (coord_scale(base.vec()) * coord_scale(&dir)).sqrt();
        if t.abs() > scaled_tol(TAU_POINT, scale) {
            return Err(GeomError::NotTangent(t));
        }
        Ok(HTangent { base, dir })
    }

    /// Validates tangency and `⟨dir,dir⟩ = 1` within [`TAU_POINT`].
    pub fn new_unit(base: HPoint, dir: MinkowskiVec) -> Result<Self> {
        let v = Self::new(base, dir)?;
        let sq = mink_inner_unchecked(&v.dir, &v.dir);
        if (sq - 1.0).abs() > scaled_tol(TAU_POINT, coord_scale(&v.dir)) {
            return Err(GeomError::NotUnit(sq));
        }
        Ok(v)
    }

    /// Projects `dir` onto the tangent space at `base` (removing any
    /// component along the base point) and normalizes to unit length.
    pub fn project_unit(base: HPoint, dir: &MinkowskiVec) -> Result<Self> {
        if base.vec.len() != dir.len() {
            return Err(GeomError::DimensionMismatch(base.vec.len(), dir.len()));
        }
        // ⟨base,base⟩ = −1, so adding ⟨v,base⟩·base kills the base component.
        let t = mink_inner_unchecked(base.vec(), dir);
        let proj = dir.add_scaled(base.vec(), t);
        let sq = mink_inner_unchecked(&proj, &proj);
        if sq <= TAU_POINT * TAU_POINT {
            return Err(GeomError::DegenerateDirection);
        }
        Ok(HTangent {
            base,
            dir: proj.scale(1.0 / sq.sqrt()),
        })
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    pub fn dir(&self) -> &MinkowskiVec {
        &self.dir
    }

    pub fn norm(&self) -> f64 {
        mink_inner_unchecked(&self.dir, &self.dir).max(0.0).sqrt()
    }

    pub fn negated(&self) -> Self {
        HTangent {
            base: self.base.clone(),
            dir: self.dir.scale(-1.0),
        }
    }
}

/// Distance `arccosh(−⟨p,q⟩)`, with the argument clamped to `≥ 1` so that
/// rounding cannot push it outside the domain.
pub fn dist(p: &HPoint, q: &HPoint) -> f64 {
    let c = -mink_inner_unchecked(p.vec(), q.vec());
    c.max(1.0).acosh()
}

/// Minkowski chord length `√⟨p−q, p−q⟩ = √(2·(cosh d − 1))`.
///
/// Agrees with `dist` to third order for small separations but stays
/// accurate down to machine noise, where `dist` bottoms out at ~1e-8
/// because `acosh` near 1 amplifies rounding by a square root. Defect and
/// displacement measurements use this.
pub fn chord_dist(p: &HPoint, q: &HPoint) -> f64 {
    let d = p.vec().sub(q.vec());
    mink_inner_unchecked(&d, &d).max(0.0).sqrt()
}

/// Max coordinate difference. Used for "same base point" checks, where
/// `dist` is unsuitable for the same reason as in [`chord_dist`].
pub fn coordinate_gap(p: &HPoint, q: &HPoint) -> f64 {
    p.vec()
        .0
        .iter()
        .zip(&q.vec().0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Geodesic flow: `exp_p(t·v) = cosh(t)·p + sinh(t)·v` for unit `v`,
/// re-projected onto the sheet.
pub fn exp_map(v: &HTangent, t: f64) -> Result<HPoint> {
    let sq = mink_inner_unchecked(v.dir(), v.dir());
    if (sq - 1.0).abs() > scaled_tol(TAU_POINT, coord_scale(v.dir())) {
        return Err(GeomError::NotUnit(sq));
    }
    let raw = v.base.vec().scale(t.cosh()).add_scaled(v.dir(), t.sinh());
    HPoint::project(raw)
}

/// Unit tangent at `p` pointing toward `q`. Inverse of [`exp_map`] in the
/// sense that `exp_map(log_map(p,q), dist(p,q)) = q`.
pub fn log_map(p: &HPoint, q: &HPoint) -> Result<HTangent> {
    if coordinate_gap(p, q) <= TAU_POINT {
        return Err(GeomError::DegenerateDirection);
    }
    // Component of q orthogonal to p: w = q + ⟨p,q⟩·p, with ⟨w,w⟩ = sinh²d.
    let c = mink_inner_unchecked(p.vec(), q.vec());
    let w = q.vec().add_scaled(p.vec(), c);
    let sq = mink_inner_unchecked(&w, &w);
    if sq <= 0.0 {
        return Err(GeomError::DegenerateDirection);
    }
    Ok(HTangent {
        base: p.clone(),
        dir: w.scale(1.0 / sq.sqrt()),
    })
}

/// Angle in `[0, π]` between two unit tangents at the same base point.
pub fn angle(u: &HTangent, v: &HTangent) -> Result<f64> {
    let d = coordinate_gap(u.base(), v.base());
    if d > scaled_tol(TAU_POINT, coord_scale(u.base().vec()).sqrt()) {
        return Err(GeomError::BaseMismatch(d));
    }
    let c = mink_inner_unchecked(u.dir(), v.dir());
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// A geodesic segment with its length cached; the constructor pins
/// `length = dist(start, end)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSegment {
    pub start: HPoint,
    pub end: HPoint,
    pub length: f64,
}

impl GeodesicSegment {
    pub fn new(start: HPoint, end: HPoint) -> Result<Self> {
        if start.vec.len() != end.vec.len() {
            return Err(GeomError::DimensionMismatch(start.vec.len(), end.vec.len()));
        }
        let length = dist(&start, &end);
        Ok(GeodesicSegment { start, end, length })
    }
}

/// Parallel transport of `v` along a geodesic segment starting at its base.
///
/// Decomposes `v` into the component along the geodesic tangent `u` (which is
/// carried to the tangent at the far end) and the orthogonal complement
/// (which is constant in Minkowski coordinates). The result is
/// re-orthogonalized against the endpoint.
pub fn parallel_transport(v: &HTangent, along: &GeodesicSegment) -> Result<HTangent> {
    let d = coordinate_gap(v.base(), &along.start);
    if d > scaled_tol(TAU_POINT, coord_scale(along.start.vec()).sqrt()) {
        return Err(GeomError::BaseMismatch(d));
    }
    let u = log_map(&along.start, &along.end)?;
    let len = along.length;
    let a = mink_inner_unchecked(v.dir(), u.dir());
    // v′ = v + a·(sinh(L)·p + (cosh(L) − 1)·u)
    let mut dir = v
        .dir()
        .add_scaled(along.start.vec(), a * len.sinh())
        .add_scaled(u.dir(), a * (len.cosh() - 1.0));
    // Kill any residual component along the endpoint.
    let t = mink_inner_unchecked(along.end.vec(), &dir);
    dir = dir.add_scaled(along.end.vec(), t);
    HTangent::new(along.end.clone(), dir)
}

/// A complete unit-speed geodesic `s ↦ cosh(s)·p + sinh(s)·v`, determined by
/// a base point and a unit tangent there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompleteGeodesic {
    tangent: HTangent,
}

impl CompleteGeodesic {
    pub fn new(tangent: HTangent) -> Result<Self> {
        let sq = mink_inner_unchecked(tangent.dir(), tangent.dir());
        if (sq - 1.0).abs() > scaled_tol(TAU_POINT, coord_scale(tangent.dir())) {
            return Err(GeomError::NotUnit(sq));
        }
        Ok(CompleteGeodesic { tangent })
    }

    pub fn tangent(&self) -> &HTangent {
        &self.tangent
    }

    pub fn point_at(&self, s: f64) -> HPoint {
        let raw = self
            .tangent
            .base()
            .vec()
            .scale(s.cosh())
            .add_scaled(self.tangent.dir(), s.sinh());
        HPoint::project(raw).expect("geodesic flow stays on the upper sheet")
    }

    /// Unit tangent of the geodesic at parameter `s`, pointing forward.
    pub fn tangent_at(&self, s: f64) -> HTangent {
        let p = self.point_at(s);
        let dir = self
            .tangent
            .base()
            .vec()
            .scale(s.sinh())
            .add_scaled(self.tangent.dir(), s.cosh());
        let t = mink_inner_unchecked(p.vec(), &dir);
        let dir = dir.add_scaled(p.vec(), t);
        let sq = mink_inner_unchecked(&dir, &dir);
        HTangent {
            base: p,
            dir: dir.scale(1.0 / sq.sqrt()),
        }
    }

    /// Ideal endpoints as null vectors `p ± v`, fixed up to positive scale.
    pub fn ideal_endpoints(&self) -> (MinkowskiVec, MinkowskiVec) {
        let fwd = self.tangent.base().vec().add(self.tangent.dir());
        let bwd = self.tangent.base().vec().sub(self.tangent.dir());
        (fwd, bwd)
    }
}

/// A Lorentz matrix preserving the Minkowski form and the upper sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    matrix: DMatrix<f64>,
}

impl Isometry {
    /// Validates `MᵀJM = J` within [`TAU_ISO`] and `M₀₀ > 0`.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let residual = form_residual(&matrix);
        let fro_sq: f64 = matrix.iter().map(|x| x * x).sum();
        let scale = (fro_sq / matrix.nrows() as f64).max(1.0);
        if residual > scaled_tol(TAU_ISO, scale) {
            return Err(GeomError::NotIsometry(residual));
        }
        if matrix[(0, 0)] <= 0.0 {
            return Err(GeomError::NotIsometry(f64::INFINITY));
        }
        Ok(Isometry { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Isometry {
            matrix: DMatrix::identity(n + 1, n + 1),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn apply_vec(&self, v: &MinkowskiVec) -> MinkowskiVec {
        let n1 = self.matrix.nrows();
        let mut out = vec![0.0; n1];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for c in 0..n1 {
                acc += self.matrix[(r, c)] * v.0[c];
            }
            *slot = acc;
        }
        MinkowskiVec(out)
    }

    pub fn apply_point(&self, p: &HPoint) -> Result<HPoint> {
        HPoint::project(self.apply_vec(p.vec()))
    }

    pub fn apply_tangent(&self, v: &HTangent) -> Result<HTangent> {
        let base = self.apply_point(v.base())?;
        let dir = self.apply_vec(v.dir());
        // Re-orthogonalize against the mapped base.
        let t = mink_inner_unchecked(base.vec(), &dir);
        let dir = dir.add_scaled(base.vec(), t);
        HTangent::new(base, dir)
    }

    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        Isometry::new(&self.matrix * &other.matrix)
    }

    /// Inverse via the form identity `M⁻¹ = J Mᵀ J`; no linear solve needed.
    pub fn inverse(&self) -> Isometry {
        let n1 = self.matrix.nrows();
        let mut inv = self.matrix.transpose();
        for r in 1..n1 {
            inv[(r, 0)] = -inv[(r, 0)];
        }
        for c in 1..n1 {
            inv[(0, c)] = -inv[(0, c)];
        }
        Isometry { matrix: inv }
    }

    /// Max displacement from the identity measured on a probe point set, in
    /// the chordal metric (see [`chord_dist`]).
    pub fn displacement_on(&self, probes: &[HPoint]) -> f64 {
        probes
            .iter()
            .filter_map(|p| self.apply_point(p).ok().map(|q| chord_dist(p, &q)))
            .fold(0.0, f64::max)
    }
}

/// Residual of `MᵀJM − J`, the defect of being a Lorentz matrix.
pub fn form_residual(m: &DMatrix<f64>) -> f64 {
    let n1 = m.nrows();
    let mut j = DMatrix::identity(n1, n1);
    j[(0, 0)] = -1.0;
    let g = m.transpose() * &j * m - j;
    g.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn frame_matrix(p: &HPoint, frame: &[HTangent]) -> Result<DMatrix<f64>> {
    let n = p.dim();
    if frame.len() != n {
        return Err(GeomError::DimensionMismatch(frame.len(), n));
    }
    let mut cols: Vec<f64> = Vec::with_capacity((n + 1) * (n + 1));
    cols.extend_from_slice(&p.vec().0);
    for f in frame {
        let d = coordinate_gap(f.base(), p);
        if d > scaled_tol(TAU_POINT, coord_scale(p.vec()).sqrt()) {
            return Err(GeomError::BaseMismatch(d));
        }
        cols.extend_from_slice(&f.dir().0);
    }
    Ok(DMatrix::from_vec(n + 1, n + 1, cols))
}

/// The unique isometry sending `p → q` and the orthonormal frame at `p` to
/// the one at `q`.
///
/// With frame matrices `B = [p | f₁ … fₙ]` satisfying `BᵀJB = J`, the map is
/// `M = B_q · J B_pᵀ J`.
pub fn isometry_from_frames(
    p: &HPoint,
    frame_p: &[HTangent],
    q: &HPoint,
    frame_q: &[HTangent],
) -> Result<Isometry> {
    let bp = frame_matrix(p, frame_p)?;
    let bq = frame_matrix(q, frame_q)?;
    for b in [&bp, &bq] {
        let residual = form_residual(b);
        let fro_sq: f64 = b.iter().map(|x| x * x).sum();
        if residual > scaled_tol(TAU_ISO, (fro_sq / b.nrows() as f64).max(1.0)) {
            return Err(GeomError::NonOrthonormalFrame(residual));
        }
    }
    // bp⁻¹ = J bpᵀ J
    let n1 = bp.nrows();
    let mut j = DMatrix::identity(n1, n1);
    j[(0, 0)] = -1.0;
    let m = bq * &j * bp.transpose() * &j;
    Isometry::new(m)
}

/// Minkowski Gram–Schmidt over the tangent space at `p`: projects the given
/// ambient vectors to `T_p`, orthonormalizes, and drops near-dependent ones.
pub fn orthonormal_tangent_frame(p: &HPoint, seeds: &[MinkowskiVec]) -> Result<Vec<HTangent>> {
    let mut frame: Vec<HTangent> = Vec::new();
    for s in seeds {
        if s.len() != p.vec().len() {
            return Err(GeomError::DimensionMismatch(s.len(), p.vec().len()));
        }
        let t = mink_inner_unchecked(p.vec(), s);
        let mut w = s.add_scaled(p.vec(), t);
        for f in &frame {
            let c = mink_inner_unchecked(&w, f.dir());
            w = w.add_scaled(f.dir(), -c);
        }
        let sq = mink_inner_unchecked(&w, &w);
        if sq > 1e-12 {
            frame.push(HTangent {
                base: p.clone(),
                dir: w.scale(1.0 / sq.sqrt()),
            });
        }
    }
    Ok(frame)
}

/// The standard coordinate frame completed to an orthonormal tangent frame
/// at `p` (taking the spatial basis vectors as seeds).
pub fn coordinate_frame(p: &HPoint) -> Result<Vec<HTangent>> {
    let n1 = p.vec().len();
    let seeds: Vec<MinkowskiVec> = (1..n1).map(|i| MinkowskiVec::basis(n1, i)).collect();
    let frame = orthonormal_tangent_frame(p, &seeds)?;
    if frame.len() != n1 - 1 {
        return Err(GeomError::DegenerateDirection);
    }
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp() -> HPoint {
        HPoint::basepoint(3)
    }

    #[test]
    fn mink_inner_basics() {
        let e0 = MinkowskiVec::basis(4, 0);
        let e1 = MinkowskiVec::basis(4, 1);
        assert_eq!(mink_inner(&e0, &e0).unwrap(), -1.0);
        assert_eq!(mink_inner(&e0, &e1).unwrap(), 0.0);
        // Direct evaluation of the bilinear form on a boosted point.
        let p = MinkowskiVec(vec![1.0f64.cosh(), 1.0f64.sinh(), 0.0, 0.0]);
        let v = mink_inner(&p, &e0).unwrap();
        assert!((v - (-1.0f64.cosh())).abs() < 1e-12);
        assert!((v + 1.543_080_634_815_243_7).abs() < 1e-12);
    }

    #[test]
    fn mink_inner_dimension_mismatch() {
        let a = MinkowskiVec::zeros(4);
        let b = MinkowskiVec::zeros(3);
        assert!(matches!(
            mink_inner(&a, &b),
            Err(GeomError::DimensionMismatch(4, 3))
        ));
    }

    #[test]
    fn dist_closed_forms() {
        let p = bp();
        assert_eq!(dist(&p, &p), 0.0);
        let q = HPoint::new(MinkowskiVec(vec![2.0f64.cosh(), 2.0f64.sinh(), 0.0, 0.0])).unwrap();
        assert!((dist(&p, &q) - 2.0).abs() < 1e-12);
        let r = HPoint::new(MinkowskiVec(vec![1.0f64.cosh(), 0.0, 1.0f64.sinh(), 0.0])).unwrap();
        assert!((dist(&p, &r) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_map_closed_form() {
        let p = bp();
        let v = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 1)).unwrap();
        let q = exp_map(&v, 0.0).unwrap();
        assert!(dist(&p, &q) < 1e-15);
        let q = exp_map(&v, 2.0).unwrap();
        assert!((q.vec().0[0] - 2.0f64.cosh()).abs() < 1e-12);
        assert!((q.vec().0[1] - 2.0f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn exp_map_rejects_non_unit() {
        let v = HTangent::new(bp(), MinkowskiVec(vec![0.0, 2.0, 0.0, 0.0])).unwrap();
        assert!(matches!(exp_map(&v, 1.0), Err(GeomError::NotUnit(_))));
    }

    #[test]
    fn log_map_degenerate() {
        let p = bp();
        assert!(matches!(
            log_map(&p, &p),
            Err(GeomError::DegenerateDirection)
        ));
    }

    #[test]
    fn exp_log_round_trip() {
        let p = bp();
        let v = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 2)).unwrap();
        let q = exp_map(&v, 1.7).unwrap();
        let w = log_map(&p, &q).unwrap();
        let q2 = exp_map(&w, dist(&p, &q)).unwrap();
        assert!(dist(&q, &q2) < TAU_POINT);
    }

    #[test]
    fn angle_basics() {
        let p = bp();
        let u = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 1)).unwrap();
        let v = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 2)).unwrap();
        assert!(angle(&u, &u).unwrap() < 1e-9);
        assert!((angle(&u, &v).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn angle_base_mismatch() {
        let p = bp();
        let u = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 1)).unwrap();
        let q = exp_map(&u, 1.0).unwrap();
        let w = log_map(&q, &p).unwrap();
        assert!(matches!(angle(&u, &w), Err(GeomError::BaseMismatch(_))));
    }

    #[test]
    fn transport_carries_geodesic_tangent() {
        let p = bp();
        let u = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 1)).unwrap();
        let q = exp_map(&u, 1.3).unwrap();
        let seg = GeodesicSegment::new(p.clone(), q.clone()).unwrap();
        let carried = parallel_transport(&u, &seg).unwrap();
        // Auto-parallel: the carried tangent is the geodesic's tangent at q.
        let expect = log_map(&q, &exp_map(&u, 2.6).unwrap()).unwrap();
        assert!((angle(&carried, &expect).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn transport_round_trip_and_orthogonality() {
        let p = bp();
        let u = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 1)).unwrap();
        let w = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 3)).unwrap();
        let q = exp_map(&u, 0.9).unwrap();
        let fwd = GeodesicSegment::new(p.clone(), q.clone()).unwrap();
        let bwd = GeodesicSegment::new(q.clone(), p.clone()).unwrap();
        let w_q = parallel_transport(&w, &fwd).unwrap();
        // Orthogonal to the geodesic stays orthogonal.
        let u_q = log_map(&q, &exp_map(&u, 2.0).unwrap()).unwrap();
        assert!(mink_inner_unchecked(w_q.dir(), u_q.dir()).abs() < TAU_POINT);
        let w_back = parallel_transport(&w_q, &bwd).unwrap();
        assert!(mink_inner_unchecked(&w_back.dir().sub(w.dir()), &w_back.dir().sub(w.dir())) < TAU_POINT);
    }

    #[test]
    fn frame_isometry_maps_frames() {
        let p = bp();
        let frame_p = coordinate_frame(&p).unwrap();
        let v = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 1)).unwrap();
        let q = exp_map(&v, 1.1).unwrap();
        let frame_q = coordinate_frame(&q).unwrap();
        let m = isometry_from_frames(&p, &frame_p, &q, &frame_q).unwrap();
        assert!(dist(&m.apply_point(&p).unwrap(), &q) < TAU_POINT);
        for (fp, fq) in frame_p.iter().zip(&frame_q) {
            let mapped = m.apply_tangent(fp).unwrap();
            assert!(angle(&mapped, fq).unwrap() < 1e-7);
        }
        // Inverse undoes it.
        let id = m.inverse().compose(&m).unwrap();
        assert!(id.displacement_on(&[p, q]) < TAU_POINT);
    }

    #[test]
    fn frame_isometry_rejects_bad_frame() {
        let p = bp();
        let mut frame = coordinate_frame(&p).unwrap();
        frame[0] = HTangent::new(p.clone(), frame[0].dir().scale(1.5)).unwrap();
        let q = p.clone();
        let frame_q = coordinate_frame(&q).unwrap();
        assert!(matches!(
            isometry_from_frames(&p, &frame, &q, &frame_q),
            Err(GeomError::NonOrthonormalFrame(_))
        ));
    }
}
