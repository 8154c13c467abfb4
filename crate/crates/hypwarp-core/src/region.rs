//! Totally geodesic hyperplanes, model hypercubes and shape comparison.
//!
//! A hyperplane is encoded by a unit spacelike Minkowski normal `u`; its
//! point set is `{x ∈ Hⁿ : ⟨x,u⟩ = 0}` and `arcsinh⟨x,u⟩` is the signed
//! distance to it. Two hyperplanes intersect in `Hⁿ` iff `|⟨u,v⟩| < 1`.
//!
//! The model hypercube `Box_model(ε)` is bounded by the 2n hyperplanes
//! orthogonal to the frame axes at distance ±ε from a center. Its face
//! normals, taken outward, are `u_i^± = sinh(ε)·c ± cosh(ε)·E_i`, so any two
//! non-opposite faces satisfy `⟨u,u'⟩ = −sinh²ε` and opposite faces satisfy
//! `⟨u⁺,u⁻⟩ = −cosh(2ε)` (disjoint). Vertices are cut out by n face
//! conditions plus the sheet equation.
//!
//! Hypercube shapes (edge lengths and vertex angles) are compared by
//! `delta_close`, which minimizes the worst discrepancy over the `2ⁿ·n!`
//! combinatorial relabelings of the cube graph. Co-orientations are ignored:
//! shapes are compared as unoriented metric data.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hyperboloid::{
    angle, coordinate_gap, dist, log_map, mink_inner_unchecked, CompleteGeodesic,
    GeodesicSegment, HPoint, HTangent, Isometry, MinkowskiVec,
};
use crate::tol::TAU_POINT;

/// A totally geodesic hyperplane `{x : ⟨x,u⟩ = 0}` with unit spacelike
/// normal. Negating the normal gives the same hyperplane with opposite
/// co-orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    normal: MinkowskiVec,
}

impl Hyperplane {
    pub fn new(normal: MinkowskiVec) -> Result<Self> {
        let sq = mink_inner_unchecked(&normal, &normal);
        let scale = crate::hyperboloid::coord_scale(&normal);
        if (sq - 1.0).abs() > crate::hyperboloid::scaled_tol(TAU_POINT, scale) {
            return Err(GeomError::BadHyperplaneNormal(sq));
        }
        Ok(Hyperplane { normal })
    }

    pub fn normal(&self) -> &MinkowskiVec {
        &self.normal
    }

    pub fn flipped(&self) -> Self {
        Hyperplane {
            normal: self.normal.scale(-1.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Whether the two normals encode the same hyperplane (up to sign).
    pub fn same_locus(&self, other: &Hyperplane, tol: f64) -> bool {
        let d_plus: f64 = self
            .normal
            .0
            .iter()
            .zip(&other.normal.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let d_minus: f64 = self
            .normal
            .0
            .iter()
            .zip(&other.normal.0)
            .map(|(a, b)| (a + b).abs())
            .fold(0.0, f64::max);
        d_plus.min(d_minus) <= tol
    }

    /// Reflection `x ↦ x − 2⟨x,u⟩u`, an isometry fixing the hyperplane
    /// pointwise.
    pub fn reflection(&self) -> Result<Isometry> {
        let n1 = self.normal.len();
        let mut m = DMatrix::identity(n1, n1);
        // x − 2 (xᵀ J u) u  =  (I − 2 u (Ju)ᵀ) x
        for r in 0..n1 {
            for c in 0..n1 {
                let ju_c = if c == 0 {
                    -self.normal.0[0]
                } else {
                    self.normal.0[c]
                };
                m[(r, c)] -= 2.0 * self.normal.0[r] * ju_c;
            }
        }
        Isometry::new(m)
    }
}

/// The geodesic hyperplane through `p` orthogonal to the unit tangent
/// `normal_dir` at `p`. Since `⟨p, normal_dir⟩ = 0`, the direction vector
/// itself is the unit spacelike normal.
pub fn hyperplane_through(p: &HPoint, normal_dir: &HTangent) -> Result<Hyperplane> {
    let d = coordinate_gap(p, normal_dir.base());
    if d > TAU_POINT {
        return Err(GeomError::BaseMismatch(d));
    }
    let sq = mink_inner_unchecked(normal_dir.dir(), normal_dir.dir());
    if (sq - 1.0).abs() > TAU_POINT {
        return Err(GeomError::NotUnit(sq));
    }
    Hyperplane::new(normal_dir.dir().clone())
}

/// Signed distance `arcsinh⟨p,u⟩`; the sign follows the co-orientation of
/// the normal.
pub fn signed_dist(p: &HPoint, h: &Hyperplane) -> f64 {
    mink_inner_unchecked(p.vec(), h.normal()).asinh()
}

/// Incidence slack for "vertex lies on its defining faces" at unit scale;
/// widened by `scaled_tol` when vertex and normal coordinates are large.
const VERTEX_ON_FACE_TOL: f64 = 1e-9;

fn incidence_tol(v: &MinkowskiVec, u: &MinkowskiVec) -> f64 {
    let scale =
        (crate::hyperboloid::coord_scale(v) * crate::hyperboloid::coord_scale(u)).sqrt();
    crate::hyperboloid::scaled_tol(VERTEX_ON_FACE_TOL, scale)
}

/// Face index: axis `i` with sign `+` is `2i`, sign `−` is `2i+1`.
pub fn face_index(axis: usize, minus: bool) -> usize {
    2 * axis + usize::from(minus)
}

/// Inverse of [`face_index`].
pub fn face_axis_sign(face: usize) -> (usize, bool) {
    (face / 2, face % 2 == 1)
}

/// A combinatorial hypercube bounded by 2n hyperplanes.
///
/// Face normals are stored co-oriented outward (the interior is on the
/// strictly negative side of every face). Vertices are indexed by sign
/// bitmask: bit `i` set means the vertex lies on face `(i,−)`, clear means
/// `(i,+)`. Two vertices are adjacent iff their masks differ in one bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HCube {
    n: usize,
    faces: Vec<Hyperplane>,
    vertices: Vec<HPoint>,
    edges: Vec<(usize, usize)>,
}

/// Flat JSON record for cube interchange: `{n, faces, vertices}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubeRecord {
    pub n: usize,
    pub faces: Vec<Vec<f64>>,
    pub vertices: Vec<Vec<f64>>,
}

impl HCube {
    /// Builds a cube from n opposite-face hyperplane pairs
    /// (`pairs[i] = (H_i^+, H_i^−)`), solving all 2ⁿ vertices and checking
    /// the embeddedness conditions:
    ///
    /// - every vertex solve succeeds and lands on the upper sheet,
    /// - opposite faces are disjoint (`|⟨u⁺,u⁻⟩| > 1`),
    /// - after outward orientation, every vertex lies on its n defining
    ///   faces and strictly inside all others.
    pub fn from_opposite_pairs(pairs: Vec<(Hyperplane, Hyperplane)>) -> Result<Self> {
        let n = pairs.len();
        if n < 2 {
            return Err(GeomError::DegenerateCube("need at least 2 axes".into()));
        }
        let n1 = pairs[0].0.normal().len();
        if n1 != n + 1 {
            return Err(GeomError::DegenerateCube(format!(
                "{n} axes need normals of length {}, got {n1}",
                n + 1
            )));
        }
        for (a, b) in &pairs {
            if a.normal().len() != n1 || b.normal().len() != n1 {
                return Err(GeomError::DimensionMismatch(a.normal().len(), n1));
            }
            let c = mink_inner_unchecked(a.normal(), b.normal());
            if c.abs() <= 1.0 {
                return Err(GeomError::DegenerateCube(format!(
                    "opposite faces intersect: |⟨u⁺,u⁻⟩| = {} ≤ 1",
                    c.abs()
                )));
            }
        }

        // Solve the 2ⁿ vertices. Vertex `mask` lies on face (i, −) when bit
        // i of mask is set, (i, +) otherwise.
        let mut vertices = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            let chosen: Vec<&Hyperplane> = (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        &pairs[i].1
                    } else {
                        &pairs[i].0
                    }
                })
                .collect();
            let v = solve_vertex(&chosen)?;
            vertices.push(v);
        }

        // Outward orientation: flip each normal so a central witness point is
        // on the negative side.
        let mut witness = MinkowskiVec::zeros(n1);
        for v in &vertices {
            witness = witness.add(v.vec());
        }
        let wsq = mink_inner_unchecked(&witness, &witness);
        if wsq >= 0.0 {
            return Err(GeomError::DegenerateCube(
                "vertex barycenter is not timelike".into(),
            ));
        }
        let witness = HPoint::project(witness.scale(1.0 / (-wsq).sqrt()))
            .map_err(|_| GeomError::DegenerateCube("barycenter below the sheet".into()))?;

        let mut faces = Vec::with_capacity(2 * n);
        for (hp, hm) in pairs {
            for h in [hp, hm] {
                let s = mink_inner_unchecked(witness.vec(), h.normal());
                if s.abs() <= incidence_tol(witness.vec(), h.normal()) {
                    return Err(GeomError::DegenerateCube(
                        "interior witness lies on a face hyperplane".into(),
                    ));
                }
                faces.push(if s > 0.0 { h.flipped() } else { h });
            }
        }

        let edges = (0..(1usize << n))
            .flat_map(|mask| {
                (0..n).filter_map(move |i| {
                    let other = mask ^ (1 << i);
                    (mask < other).then_some((mask, other))
                })
            })
            .collect();

        let cube = HCube {
            n,
            faces,
            vertices,
            edges,
        };
        cube.check_embedded()?;
        Ok(cube)
    }

    fn check_embedded(&self) -> Result<()> {
        for (mask, v) in self.vertices.iter().enumerate() {
            for f in 0..2 * self.n {
                let (axis, minus) = face_axis_sign(f);
                let s = mink_inner_unchecked(v.vec(), self.faces[f].normal());
                let tol = incidence_tol(v.vec(), self.faces[f].normal());
                let defining = (mask >> axis & 1 == 1) == minus;
                if defining {
                    if s.abs() > tol {
                        return Err(GeomError::DegenerateCube(format!(
                            "vertex {mask} misses its defining face {f} by {s}"
                        )));
                    }
                } else if s >= -tol {
                    return Err(GeomError::DegenerateCube(format!(
                        "vertex {mask} is not strictly inside face {f} (⟨v,u⟩ = {s})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[Hyperplane] {
        &self.faces
    }

    pub fn face(&self, axis: usize, minus: bool) -> &Hyperplane {
        &self.faces[face_index(axis, minus)]
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertices incident to a face, i.e. those whose mask matches its sign.
    pub fn face_vertices(&self, face: usize) -> Vec<usize> {
        let (axis, minus) = face_axis_sign(face);
        (0..(1usize << self.n))
            .filter(|mask| (mask >> axis & 1 == 1) == minus)
            .collect()
    }

    /// Whether a point (assumed on the face's hyperplane) lies within the
    /// face, i.e. on the interior side of all other faces.
    pub fn point_in_face(&self, face: usize, p: &HPoint) -> bool {
        self.faces.iter().enumerate().all(|(f, h)| {
            f == face
                || mink_inner_unchecked(p.vec(), h.normal())
                    <= incidence_tol(p.vec(), h.normal())
        })
    }

    /// Whether a point lies in the closed solid cube.
    pub fn contains(&self, p: &HPoint) -> bool {
        self.faces.iter().all(|h| {
            mink_inner_unchecked(p.vec(), h.normal()) <= incidence_tol(p.vec(), h.normal())
        })
    }

    /// Normalized vertex barycenter, a point in the interior.
    pub fn interior_point(&self) -> HPoint {
        let mut w = MinkowskiVec::zeros(self.n + 1);
        for v in &self.vertices {
            w = w.add(v.vec());
        }
        let sq = mink_inner_unchecked(&w, &w);
        HPoint::project(w.scale(1.0 / (-sq).sqrt())).expect("interior barycenter")
    }

    /// Max over vertices of the residual against their defining hyperplanes;
    /// the planarity defect of the stored data.
    pub fn planarity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (mask, v) in self.vertices.iter().enumerate() {
            for axis in 0..self.n {
                let minus = mask >> axis & 1 == 1;
                let h = self.face(axis, minus);
                worst = worst.max(mink_inner_unchecked(v.vec(), h.normal()).abs());
            }
        }
        worst
    }

    pub fn to_record(&self) -> CubeRecord {
        CubeRecord {
            n: self.n,
            faces: self.faces.iter().map(|h| h.normal().0.clone()).collect(),
            vertices: self.vertices.iter().map(|v| v.vec().0.clone()).collect(),
        }
    }

    /// Rebuilds (and re-validates) a cube from its face normals; the record's
    /// vertex list is checked against the solved vertices.
    pub fn from_record(rec: &CubeRecord) -> Result<Self> {
        if rec.faces.len() != 2 * rec.n {
            return Err(GeomError::DegenerateCube(format!(
                "expected {} faces, got {}",
                2 * rec.n,
                rec.faces.len()
            )));
        }
        let mut pairs = Vec::with_capacity(rec.n);
        for i in 0..rec.n {
            let plus = Hyperplane::new(MinkowskiVec(rec.faces[2 * i].clone()))?;
            let minus = Hyperplane::new(MinkowskiVec(rec.faces[2 * i + 1].clone()))?;
            pairs.push((plus, minus));
        }
        let cube = HCube::from_opposite_pairs(pairs)?;
        if rec.vertices.len() != cube.vertices.len() {
            return Err(GeomError::DegenerateCube(
                "vertex count does not match 2ⁿ".into(),
            ));
        }
        Ok(cube)
    }

    /// Applies an isometry to every face normal and vertex.
    pub fn transformed(&self, g: &Isometry) -> Result<HCube> {
        let faces = self
            .faces
            .iter()
            .map(|h| Hyperplane::new(g.apply_vec(h.normal())))
            .collect::<Result<Vec<_>>>()?;
        let vertices = self
            .vertices
            .iter()
            .map(|v| g.apply_point(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(HCube {
            n: self.n,
            faces,
            vertices,
            edges: self.edges.clone(),
        })
    }
}

/// Kernel vector of the n incidence conditions `⟨v, u_i⟩ = 0` via the
/// generalized cross product (cofactor expansion), intersected with the
/// upper sheet.
fn solve_vertex(faces: &[&Hyperplane]) -> Result<HPoint> {
    let n = faces.len();
    let n1 = n + 1;
    // Row r of the linear system is (J u_r)ᵀ.
    let rows: Vec<Vec<f64>> = faces
        .iter()
        .map(|h| {
            let mut r = h.normal().0.clone();
            r[0] = -r[0];
            r
        })
        .collect();
    let mut w = vec![0.0; n1];
    for (j, slot) in w.iter_mut().enumerate() {
        let mut minor = DMatrix::zeros(n, n);
        for (r, row) in rows.iter().enumerate() {
            let mut cc = 0;
            for (c, val) in row.iter().enumerate() {
                if c != j {
                    minor[(r, cc)] = *val;
                    cc += 1;
                }
            }
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign * minor.determinant();
    }
    let w = MinkowskiVec(w);
    let scale = w.0.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale < 1e-300 {
        return Err(GeomError::DegenerateCube(
            "face normals are linearly dependent".into(),
        ));
    }
    let w = w.scale(1.0 / scale);
    let sq = mink_inner_unchecked(&w, &w);
    if sq >= -1e-12 {
        return Err(GeomError::DegenerateCube(
            "face intersection misses the hyperboloid".into(),
        ));
    }
    let mut v = w.scale(1.0 / (-sq).sqrt());
    if v.0[0] < 0.0 {
        v = v.scale(-1.0);
    }
    HPoint::project(v).map_err(|_| GeomError::DegenerateCube("vertex below the sheet".into()))
}

/// The model hypercube bounded by hyperplanes orthogonal to the frame axes
/// at signed distance ±ε from the center.
///
/// Errors when ε is too large for the faces to bound an embedded cube
/// (at runtime this is exactly the failure of the vertex solves or of the
/// side conditions).
pub fn box_model(center: &HPoint, frame: &[HTangent], eps: f64) -> Result<HCube> {
    let n = center.dim();
    if frame.len() != n {
        return Err(GeomError::DimensionMismatch(frame.len(), n));
    }
    if !(eps > 0.0) {
        return Err(GeomError::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    check_orthonormal(center, frame)?;
    let mut pairs = Vec::with_capacity(n);
    for f in frame {
        // Outward normals: u_i^± = sinh(ε)·c ± cosh(ε)·E_i.
        let plus = Hyperplane::new(center.vec().scale(eps.sinh()).add_scaled(f.dir(), eps.cosh()))?;
        let minus =
            Hyperplane::new(center.vec().scale(eps.sinh()).add_scaled(f.dir(), -eps.cosh()))?;
        pairs.push((plus, minus));
    }
    HCube::from_opposite_pairs(pairs)
}

fn check_orthonormal(base: &HPoint, frame: &[HTangent]) -> Result<()> {
    let mut residual = 0.0f64;
    let mut scale = crate::hyperboloid::coord_scale(base.vec());
    for (i, a) in frame.iter().enumerate() {
        let d = coordinate_gap(a.base(), base);
        if d > crate::hyperboloid::scaled_tol(TAU_POINT, scale.sqrt()) {
            return Err(GeomError::BaseMismatch(d));
        }
        scale = scale.max(crate::hyperboloid::coord_scale(a.dir()));
        for (j, b) in frame.iter().enumerate() {
            let g = mink_inner_unchecked(a.dir(), b.dir());
            let want = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((g - want).abs());
        }
    }
    if residual > crate::hyperboloid::scaled_tol(TAU_POINT, scale) {
        return Err(GeomError::NonOrthonormalFrame(residual));
    }
    Ok(())
}

/// Largest ε for which `box_model` succeeds at the given dimension, found by
/// bisection against the constructor itself.
pub fn eps_max(n: usize) -> f64 {
    let center = HPoint::basepoint(n);
    let frame = crate::hyperboloid::coordinate_frame(&center).expect("coordinate frame");
    let ok = |eps: f64| box_model(&center, &frame, eps).is_ok();
    let mut lo = 1e-6;
    let mut hi = 4.0;
    if !ok(lo) {
        return 0.0;
    }
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Metric shape data of a hypercube: every edge length and every vertex
/// angle, indexed combinatorially so relabelings can be scanned.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubeShape {
    n: usize,
    /// `edge[mask][i]` = length of the edge from vertex `mask` along axis `i`.
    edge: Vec<Vec<f64>>,
    /// `angle[mask][pair(i,j)]` = interior angle at vertex `mask` between the
    /// edges along axes `i < j`.
    angle: Vec<Vec<f64>>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // Index of (i,j), i<j, in lexicographic order.
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl CubeShape {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.edge.iter().flatten().copied()
    }

    pub fn vertex_angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.angle.iter().flatten().copied()
    }
}

/// Edge lengths and vertex angles of a cube.
pub fn cube_shape(c: &HCube) -> Result<CubeShape> {
    let n = c.n();
    let mut edge = Vec::with_capacity(1 << n);
    let mut angles = Vec::with_capacity(1 << n);
    for mask in 0..(1usize << n) {
        let v = &c.vertices()[mask];
        let mut lens = Vec::with_capacity(n);
        let mut dirs = Vec::with_capacity(n);
        for i in 0..n {
            let w = &c.vertices()[mask ^ (1 << i)];
            lens.push(dist(v, w));
            dirs.push(log_map(v, w)?);
        }
        let mut vangles = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                vangles.push(angle(&dirs[i], &dirs[j])?);
            }
        }
        edge.push(lens);
        angles.push(vangles);
    }
    Ok(CubeShape {
        n,
        edge,
        angle: angles,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// Shape distance between two hypercubes: the minimum over the `2ⁿ·n!`
/// relabelings compatible with the hypercube graph of the worst edge-length
/// or vertex-angle discrepancy. The cubes are δ-close iff this is `< δ`.
pub fn delta_close(a: &HCube, b: &HCube) -> Result<f64> {
    if a.n() != b.n() {
        return Err(GeomError::DimensionMismatch(a.n(), b.n()));
    }
    let n = a.n();
    let sa = cube_shape(a)?;
    let sb = cube_shape(b)?;
    let perms = permutations(n);
    let mut best = f64::INFINITY;
    // A relabeling is (axis permutation π, sign mask m): vertex mask v of `a`
    // corresponds to the vertex of `b` whose bit π(i) equals bit i of v ⊕ m.
    for perm in &perms {
        for m in 0..(1usize << n) {
            let mut worst = 0.0f64;
            'mask: for v in 0..(1usize << n) {
                let src = v ^ m;
                let mut w = 0usize;
                for i in 0..n {
                    if src >> i & 1 == 1 {
                        w |= 1 << perm[i];
                    }
                }
                for i in 0..n {
                    let d = (sa.edge[v][i] - sb.edge[w][perm[i]]).abs();
                    worst = worst.max(d);
                    if worst >= best {
                        break 'mask;
                    }
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        let (pi, pj) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                        let d = (sa.angle[v][pair_index(n, i, j)]
                            - sb.angle[w][pair_index(n, pi, pj)])
                        .abs();
                        worst = worst.max(d);
                        if worst >= best {
                            break 'mask;
                        }
                    }
                }
            }
            best = best.min(worst);
        }
    }
    Ok(best)
}

/// A geodesic/hyperplane crossing: the point, the incidence angle in
/// `[0, π/2]` between the geodesic tangent and the hyperplane (π/2 is an
/// orthogonal crossing), and the arc-length parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Crossing {
    pub point: HPoint,
    pub angle: f64,
    pub param: f64,
}

/// Threshold below which the pairing coefficients are treated as zero, i.e.
/// the geodesic is declared contained in the hyperplane.
const CONTAINMENT_TOL: f64 = 1e-12;

fn crossing_param(a: f64, b: f64) -> Result<Option<f64>> {
    // ⟨γ(s), u⟩ = a·cosh s + b·sinh s vanishes iff tanh s = −a/b.
    if b.abs() <= CONTAINMENT_TOL {
        if a.abs() <= CONTAINMENT_TOL {
            return Err(GeomError::ContainedInHyperplane);
        }
        return Ok(None);
    }
    let r = -a / b;
    if r.abs() >= 1.0 {
        return Ok(None);
    }
    Ok(Some(r.atanh()))
}

/// Intersection of a complete geodesic with a hyperplane.
///
/// Equivalently: the geodesic crosses iff its two ideal endpoints pair with
/// the normal with opposite signs.
pub fn geodesic_hits_hyperplane(
    gamma: &CompleteGeodesic,
    h: &Hyperplane,
) -> Result<Option<Crossing>> {
    let a = mink_inner_unchecked(gamma.tangent().base().vec(), h.normal());
    let b = mink_inner_unchecked(gamma.tangent().dir(), h.normal());
    let Some(s) = crossing_param(a, b)? else {
        return Ok(None);
    };
    let point = gamma.point_at(s);
    let tangent = gamma.tangent_at(s);
    let pairing = mink_inner_unchecked(tangent.dir(), h.normal());
    Ok(Some(Crossing {
        point,
        angle: pairing.clamp(-1.0, 1.0).abs().asin(),
        param: s,
    }))
}

/// Intersection of a geodesic segment with a hyperplane; the crossing must
/// land within the segment (parameter in `[0, length]`).
pub fn segment_hits_hyperplane(
    seg: &GeodesicSegment,
    h: &Hyperplane,
) -> Result<Option<Crossing>> {
    let dir = log_map(&seg.start, &seg.end)?;
    let gamma = CompleteGeodesic::new(dir)?;
    let Some(hit) = geodesic_hits_hyperplane(&gamma, h)? else {
        return Ok(None);
    };
    if hit.param < -TAU_POINT || hit.param > seg.length + TAU_POINT {
        return Ok(None);
    }
    Ok(Some(hit))
}

/// Sample points on a cube face: the face's vertices, its center, and edge
/// midpoints, all of which stay on the face hyperplane because normalized
/// combinations of points with `⟨x,u⟩ = 0` do.
pub fn face_sample_points(c: &HCube, face: usize, want: usize) -> Vec<HPoint> {
    let verts = c.face_vertices(face);
    let mut pts: Vec<HPoint> = verts.iter().map(|&v| c.vertices()[v].clone()).collect();
    let combine = |list: &[&HPoint]| -> HPoint {
        let mut w = MinkowskiVec::zeros(c.n() + 1);
        for p in list {
            w = w.add(p.vec());
        }
        let sq = mink_inner_unchecked(&w, &w);
        HPoint::project(w.scale(1.0 / (-sq).sqrt())).expect("face combination")
    };
    // Face center.
    let all: Vec<&HPoint> = verts.iter().map(|&v| &c.vertices()[v]).collect();
    pts.push(combine(&all));
    // Edge midpoints within the face.
    'outer: for (i, &va) in verts.iter().enumerate() {
        for &vb in verts.iter().skip(i + 1) {
            if (va ^ vb).count_ones() == 1 {
                pts.push(combine(&[&c.vertices()[va], &c.vertices()[vb]]));
                if pts.len() >= want {
                    break 'outer;
                }
            }
        }
    }
    pts.truncate(want.max(verts.len() + 1));
    pts
}

/// Foot of the common perpendicular between two disjoint hyperplanes, on the
/// first one. This is the "center" of a cube face relative to its opposite
/// face.
pub fn common_perpendicular_foot(on: &Hyperplane, other: &Hyperplane) -> Result<HPoint> {
    let c = mink_inner_unchecked(on.normal(), other.normal());
    if c.abs() <= 1.0 {
        return Err(GeomError::InvalidParameter(
            "hyperplanes are not disjoint".into(),
        ));
    }
    // Solve p = α·u + β·w with ⟨p,u⟩ = 0, ⟨p,p⟩ = −1 in span{u, w}.
    let beta = 1.0 / (c * c - 1.0).sqrt();
    let alpha = -beta * c;
    let p = on.normal().scale(alpha).add_scaled(other.normal(), beta);
    let p = if p.0[0] > 0.0 { p } else { p.scale(-1.0) };
    HPoint::project(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperboloid::{coordinate_frame, exp_map};

    fn frame3() -> (HPoint, Vec<HTangent>) {
        let p = HPoint::basepoint(3);
        let f = coordinate_frame(&p).unwrap();
        (p, f)
    }

    #[test]
    fn hyperplane_through_basepoint() {
        let (p, f) = frame3();
        let h = hyperplane_through(&p, &f[0]).unwrap();
        assert_eq!(h.normal().0, vec![0.0, 1.0, 0.0, 0.0]);
        assert!(signed_dist(&p, &h).abs() < 1e-15);
    }

    #[test]
    fn hyperplane_at_distance_closed_form() {
        let (p, f) = frame3();
        let eps: f64 = 0.37;
        let q = exp_map(&f[1], eps).unwrap();
        let seg = GeodesicSegment::new(p.clone(), q.clone()).unwrap();
        let moved = crate::hyperboloid::parallel_transport(&f[1], &seg).unwrap();
        let h = hyperplane_through(&q, &moved).unwrap();
        // u = sinh(ε)·P + cosh(ε)·E_i
        let expect = p.vec().scale(eps.sinh()).add_scaled(f[1].dir(), eps.cosh());
        for (a, b) in h.normal().0.iter().zip(&expect.0) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((signed_dist(&p, &h).abs() - eps).abs() < 1e-12);
    }

    #[test]
    fn box_model_combinatorics_and_normals() {
        let (p, f) = frame3();
        let eps = 0.1;
        let c = box_model(&p, &f, eps).unwrap();
        assert_eq!(c.faces().len(), 6);
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.edges().len(), 12);
        // Adjacent-face normal pairing −sinh²ε; opposite pairing −cosh 2ε.
        for i in 0..6 {
            for j in (i + 1)..6 {
                let g = mink_inner_unchecked(c.faces()[i].normal(), c.faces()[j].normal());
                if i / 2 == j / 2 {
                    assert!((g + (2.0 * eps).cosh()).abs() < 1e-12);
                } else {
                    assert!((g + eps.sinh().powi(2)).abs() < 1e-12);
                }
            }
        }
        // Center at signed distance exactly −ε from every outward face.
        for h in c.faces() {
            assert!((signed_dist(&p, h) + eps).abs() < 1e-12);
        }
    }

    #[test]
    fn box_model_eps_too_large() {
        let (p, f) = frame3();
        // tanh(ε) ≥ 1/√3 kills the vertex solve in H³.
        assert!(box_model(&p, &f, 0.9).is_err());
        let e = eps_max(3);
        assert!(box_model(&p, &f, e - 1e-3).is_ok());
        assert!(box_model(&p, &f, e + 1e-3).is_err());
    }

    #[test]
    fn box_model_symmetry() {
        let (p, f) = frame3();
        let c = box_model(&p, &f, 0.2).unwrap();
        let s = cube_shape(&c).unwrap();
        let lens: Vec<f64> = s.edge_lengths().collect();
        let angs: Vec<f64> = s.vertex_angles().collect();
        for l in &lens {
            assert!((l - lens[0]).abs() < TAU_POINT);
        }
        for a in &angs {
            assert!((a - angs[0]).abs() < TAU_POINT);
        }
    }

    #[test]
    fn box_model_edge_length_closed_form() {
        // Vertices are a·c + b·Σ σᵢEᵢ with a = 1/√(1 − n·tanh²ε),
        // b = a·tanh ε; adjacent vertices differ in one sign, so
        // cosh(edge) = a² − (n−2)·b².
        let (p, f) = frame3();
        let eps = 0.1;
        let c = box_model(&p, &f, eps).unwrap();
        let t2 = eps.tanh().powi(2);
        let a2 = 1.0 / (1.0 - 3.0 * t2);
        let b2 = a2 * t2;
        let expect = (a2 - b2).acosh();
        let s = cube_shape(&c).unwrap();
        for l in s.edge_lengths() {
            assert!((l - expect).abs() < 1e-10, "edge {l} vs {expect}");
        }
    }

    #[test]
    fn reflection_fixes_face() {
        let (p, f) = frame3();
        let c = box_model(&p, &f, 0.15).unwrap();
        let h = c.face(0, false);
        let r = h.reflection().unwrap();
        for q in face_sample_points(&c, 0, 10) {
            let rq = r.apply_point(&q).unwrap();
            assert!(dist(&q, &rq) < TAU_POINT);
        }
    }

    #[test]
    fn delta_close_identity_and_isometry() {
        let (p, f) = frame3();
        let c = box_model(&p, &f, 0.1).unwrap();
        assert!(delta_close(&c, &c).unwrap() < 1e-12);
        // Move the cube by a frame isometry and compare.
        let v = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 1)).unwrap();
        let q = exp_map(&v, 0.8).unwrap();
        let g = crate::hyperboloid::isometry_from_frames(
            &p,
            &coordinate_frame(&p).unwrap(),
            &q,
            &coordinate_frame(&q).unwrap(),
        )
        .unwrap();
        let moved = c.transformed(&g).unwrap();
        assert!(delta_close(&c, &moved).unwrap() < 1e-9);
    }

    #[test]
    fn delta_close_detects_size_difference() {
        // Oracle: closed-form edge length and vertex angle of Box_model(ε).
        let (p, f) = frame3();
        let shape_oracle = |eps: f64| {
            let t2: f64 = eps.tanh().powi(2);
            let a2 = 1.0 / (1.0 - 3.0 * t2);
            let b2 = a2 * t2;
            let edge: f64 = (a2 - b2).acosh();
            let diag: f64 = (a2 + b2).acosh(); // flip two signs: a² − (n−4)b²
            let cos_angle =
                (edge.cosh() * edge.cosh() - diag.cosh()) / (edge.sinh() * edge.sinh());
            (edge, cos_angle.clamp(-1.0, 1.0).acos())
        };
        let (e1, a1) = shape_oracle(0.1);
        let (e2, a2) = shape_oracle(0.11);
        let expect = (e1 - e2).abs().max((a1 - a2).abs());
        let c1 = box_model(&p, &f, 0.1).unwrap();
        let c2 = box_model(&p, &f, 0.11).unwrap();
        let d = delta_close(&c1, &c2).unwrap();
        assert!(d > 0.0);
        assert!((d - expect).abs() < 1e-9, "delta {d} vs oracle {expect}");
    }

    #[test]
    fn vertex_angles_approach_right_angle() {
        let (p, f) = frame3();
        let c = box_model(&p, &f, 1e-3).unwrap();
        let s = cube_shape(&c).unwrap();
        for a in s.vertex_angles() {
            assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
        }
    }

    #[test]
    fn geodesic_hyperplane_incidence() {
        let (p, f) = frame3();
        let gamma = CompleteGeodesic::new(f[0].clone()).unwrap();
        // Hyperplane orthogonal to the geodesic at parameter 0.7.
        let u = p.vec().scale(0.7f64.sinh()).add_scaled(f[0].dir(), 0.7f64.cosh());
        let h = Hyperplane::new(u).unwrap();
        let hit = geodesic_hits_hyperplane(&gamma, &h).unwrap().unwrap();
        assert!((hit.param - 0.7).abs() < 1e-12);
        assert!((hit.angle - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        // A hyperplane containing the geodesic is flagged.
        let h2 = Hyperplane::new(MinkowskiVec::basis(4, 2)).unwrap();
        assert!(matches!(
            geodesic_hits_hyperplane(&gamma, &h2),
            Err(GeomError::ContainedInHyperplane)
        ));
        // A far-off parallel hyperplane misses.
        let far = Hyperplane::new(
            p.vec().scale(1.0f64.sinh()).add_scaled(f[1].dir(), 1.0f64.cosh()),
        )
        .unwrap();
        assert!(geodesic_hits_hyperplane(&gamma, &far).unwrap().is_none());
    }

    #[test]
    fn segment_respects_endpoints() {
        let (p, f) = frame3();
        let q = exp_map(&f[0], 0.5).unwrap();
        let seg = GeodesicSegment::new(p.clone(), q).unwrap();
        let u = p.vec().scale(0.7f64.sinh()).add_scaled(f[0].dir(), 0.7f64.cosh());
        let h = Hyperplane::new(u).unwrap();
        // Crossing at 0.7 is outside the [0, 0.5] segment.
        assert!(segment_hits_hyperplane(&seg, &h).unwrap().is_none());
    }

    #[test]
    fn cube_record_round_trip() {
        let (p, f) = frame3();
        let c = box_model(&p, &f, 0.12).unwrap();
        let rec = c.to_record();
        let c2 = HCube::from_record(&rec).unwrap();
        assert!(delta_close(&c, &c2).unwrap() < 1e-12);
    }

    #[test]
    fn common_perpendicular_foot_is_face_center() {
        let (p, f) = frame3();
        let eps = 0.25;
        let c = box_model(&p, &f, eps).unwrap();
        let foot = common_perpendicular_foot(c.face(0, false), c.face(0, true)).unwrap();
        // The face center of Box_model is the axis point exp(center, E₁, ε).
        let expect = exp_map(&f[0], eps).unwrap();
        assert!(dist(&foot, &expect) < 1e-9);
    }
}
