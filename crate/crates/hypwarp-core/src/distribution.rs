//! Distribution checks: Grassmann distances between tangent hyperplanes,
//! ε-density of plane samples, and chains of shape-controlled hypercubes
//! enclosing a geodesic.
//!
//! The Grassmann metric used here combines base-point distance with the
//! principal angles between the planes after parallel transport along the
//! connecting geodesic: `d = √(d_base² + Σθᵢ²)`. The construction is the
//! standard one; nothing here depends on a particular normalization beyond
//! symmetry and vanishing on equal samples.
//!
//! The cube-chain machinery certifies, for one geodesic and a finite
//! hyperplane arrangement, the conditions that make a family of hypercubes
//! enclose the geodesic: each cube is δ-close in shape to `Box_model(ε)`,
//! meets the geodesic in exactly two points on opposite faces, its other
//! face hyperplanes miss the geodesic entirely, the crossings are within δ
//! of the face centers and within δ of orthogonal incidence, consecutive
//! cubes interlock (the previous top hyperplane separates the next cube's
//! top and bottom), and the crossing separation exceeds ε/4. Search order is
//! lexicographic over hyperplane indices, so reports are reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hyperboloid::{
    coordinate_frame, coordinate_gap, dist, log_map, mink_inner_unchecked, parallel_transport,
    CompleteGeodesic, GeodesicSegment, HPoint, HTangent,
};
use crate::region::{
    box_model, common_perpendicular_foot, delta_close, face_axis_sign, geodesic_hits_hyperplane,
    signed_dist, Crossing, CubeRecord, HCube, Hyperplane,
};
use crate::tol::TAU_POINT;

/// An unoriented tangent (n−1)-plane: a base point and an orthonormal frame
/// spanning the plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneSample {
    base: HPoint,
    plane: Vec<HTangent>,
}

impl PlaneSample {
    pub fn new(base: HPoint, plane: Vec<HTangent>) -> Result<Self> {
        if plane.len() + 1 != base.dim() {
            return Err(GeomError::DimensionMismatch(plane.len() + 1, base.dim()));
        }
        let mut residual = 0.0f64;
        let mut scale = crate::hyperboloid::coord_scale(base.vec());
        for (i, a) in plane.iter().enumerate() {
            let gap = coordinate_gap(a.base(), &base);
            if gap > crate::hyperboloid::scaled_tol(TAU_POINT, scale.sqrt()) {
                return Err(GeomError::BaseMismatch(gap));
            }
            scale = scale.max(crate::hyperboloid::coord_scale(a.dir()));
            for (j, b) in plane.iter().enumerate() {
                let g = mink_inner_unchecked(a.dir(), b.dir());
                let want = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((g - want).abs());
            }
        }
        if residual > crate::hyperboloid::scaled_tol(TAU_POINT, scale) {
            return Err(GeomError::NonOrthonormalFrame(residual));
        }
        Ok(PlaneSample { base, plane })
    }

    /// The plane orthogonal to a unit normal direction at its base point.
    pub fn from_normal(normal: &HTangent) -> Result<Self> {
        let base = normal.base().clone();
        let n1 = base.vec().len();
        let mut seeds = vec![normal.dir().clone()];
        for i in 0..n1 {
            seeds.push(crate::hyperboloid::MinkowskiVec::basis(n1, i));
        }
        let frame = crate::hyperboloid::orthonormal_tangent_frame(&base, &seeds)?;
        if frame.len() != n1 - 1 {
            return Err(GeomError::DegenerateDirection);
        }
        PlaneSample::new(base, frame[1..].to_vec())
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    pub fn plane(&self) -> &[HTangent] {
        &self.plane
    }
}

/// Principal angles below this are snapped to zero: `arccos` near 1 cannot
/// resolve angles under ~1e-6 anyway, and the snap makes the distance of a
/// sample to itself exactly zero.
const ANGLE_SNAP: f64 = 1e-12;

/// Grassmann distance `√(d_base² + Σθᵢ²)`: base distance plus the principal
/// angles between `b.plane` and `a.plane` parallel-transported to `b.base`.
pub fn grassmann_dist(a: &PlaneSample, b: &PlaneSample) -> Result<f64> {
    if a.base.dim() != b.base.dim() {
        return Err(GeomError::DimensionMismatch(a.base.dim(), b.base.dim()));
    }
    let same_base = coordinate_gap(&a.base, &b.base)
        <= crate::hyperboloid::scaled_tol(
            TAU_POINT,
            crate::hyperboloid::coord_scale(a.base.vec()).sqrt(),
        );
    let d_base = if same_base { 0.0 } else { dist(&a.base, &b.base) };
    let moved: Vec<HTangent> = if same_base {
        a.plane.clone()
    } else {
        let seg = GeodesicSegment::new(a.base.clone(), b.base.clone())?;
        a.plane
            .iter()
            .map(|v| parallel_transport(v, &seg))
            .collect::<Result<Vec<_>>>()?
    };
    let k = a.plane.len();
    let mut c = nalgebra::DMatrix::zeros(k, k);
    for (r, u) in moved.iter().enumerate() {
        for (s, v) in b.plane.iter().enumerate() {
            c[(r, s)] = mink_inner_unchecked(u.dir(), v.dir());
        }
    }
    let svd = c.svd(false, false);
    let mut angle_sq = 0.0;
    for sigma in svd.singular_values.iter() {
        let clamped = sigma.min(1.0);
        if clamped < 1.0 - ANGLE_SNAP {
            let theta = clamped.acos();
            angle_sq += theta * theta;
        }
    }
    Ok((d_base * d_base + angle_sq).sqrt())
}

/// Max over probes of the min over samples of the Grassmann distance; the
/// samples are ε-dense over the probes iff this is ≤ ε.
pub fn eps_density(samples: &[PlaneSample], probes: &[PlaneSample]) -> Result<f64> {
    Ok(eps_density_detail(samples, probes)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Per-probe min distance to the sample set.
pub fn eps_density_detail(samples: &[PlaneSample], probes: &[PlaneSample]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(GeomError::EmptySamples);
    }
    probes
        .iter()
        .map(|p| {
            let mut best = f64::INFINITY;
            for s in samples {
                best = best.min(grassmann_dist(p, s)?);
            }
            Ok(best)
        })
        .collect()
}

/// A finite set of hyperplanes; duplicates up to normal sign are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Arrangement {
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        for i in 0..hyperplanes.len() {
            for j in (i + 1)..hyperplanes.len() {
                if hyperplanes[i].same_locus(&hyperplanes[j], TAU_POINT) {
                    return Err(GeomError::DuplicateHyperplane(i, j));
                }
            }
        }
        Ok(Arrangement { hyperplanes })
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }
}

/// A cube found by the enclosing search, with its two geodesic crossings
/// ordered along the geodesic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnclosingCube {
    pub cube: HCube,
    pub bottom_face: usize,
    pub top_face: usize,
    pub entry: Crossing,
    pub exit: Crossing,
}

/// Searches n-subsets of the arrangement pairing into opposite faces for a
/// cube that contains the point `γ(s)` and satisfies the enclosing
/// conditions:
///
/// 1. exactly two faces meet γ, and they are opposite;
/// 2. the other face hyperplanes miss γ entirely;
/// 3. both crossings are within δ of the face centers (the feet of the
///    common perpendicular between the opposite pair);
/// 4. both incidence angles are within δ of π/2;
///
/// and whose shape is δ-close to `Box_model(ε)`. Candidates are scanned in
/// lexicographic hyperplane-index order and the first hit is returned.
pub fn enclosing_cube_search(
    arr: &Arrangement,
    gamma: &CompleteGeodesic,
    eps: f64,
    delta: f64,
    s: f64,
) -> Result<Option<EnclosingCube>> {
    enclosing_cube_search_with(arr, gamma, eps, delta, s, &|_| true)
}

/// [`enclosing_cube_search`] with an extra acceptance predicate, used by the
/// chain builder to impose the crossing-separation condition.
pub fn enclosing_cube_search_with(
    arr: &Arrangement,
    gamma: &CompleteGeodesic,
    eps: f64,
    delta: f64,
    s: f64,
    accept: &dyn Fn(&EnclosingCube) -> bool,
) -> Result<Option<EnclosingCube>> {
    let x0 = gamma.point_at(s);
    let n = x0.dim();

    // Shape reference and a pruning radius: every face plane of a qualifying
    // cube passes within a couple of circumradii of the contained point.
    let model_center = HPoint::basepoint(n);
    let model_frame = coordinate_frame(&model_center)?;
    let model = box_model(&model_center, &model_frame, eps)?;
    let circum = model
        .vertices()
        .iter()
        .map(|v| dist(&model_center, v))
        .fold(0.0, f64::max);
    let prune = 2.0 * circum + 0.5;

    // Candidate hyperplanes near the point, oriented so x0 is on the
    // negative side.
    let mut candidates: Vec<(usize, Hyperplane)> = Vec::new();
    for (i, h) in arr.hyperplanes().iter().enumerate() {
        let sd = signed_dist(&x0, h);
        if sd.abs() <= prune {
            candidates.push((i, if sd > 0.0 { h.flipped() } else { h.clone() }));
        }
    }

    // Opposite-face pairs: disjoint hyperplanes with x0 strictly between.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..candidates.len() {
        for b in (a + 1)..candidates.len() {
            let g = mink_inner_unchecked(candidates[a].1.normal(), candidates[b].1.normal());
            if g < -1.0 {
                pairs.push((a, b));
            }
        }
    }

    // Lexicographic combinations of n pairs with distinct hyperplanes.
    let mut combo = vec![0usize; n];
    let found = search_combos(&mut combo, 0, 0, &pairs, &candidates, n, &|chosen| {
        try_candidate(chosen, gamma, delta, &model, &x0, accept)
    });
    Ok(found)
}

fn search_combos(
    combo: &mut Vec<usize>,
    depth: usize,
    start: usize,
    pairs: &[(usize, usize)],
    candidates: &[(usize, Hyperplane)],
    n: usize,
    eval: &dyn Fn(&[(Hyperplane, Hyperplane)]) -> Option<EnclosingCube>,
) -> Option<EnclosingCube> {
    if depth == n {
        let chosen: Vec<(Hyperplane, Hyperplane)> = combo
            .iter()
            .map(|&p| {
                (
                    candidates[pairs[p].0].1.clone(),
                    candidates[pairs[p].1].1.clone(),
                )
            })
            .collect();
        return eval(&chosen);
    }
    for p in start..pairs.len() {
        // All 2n hyperplanes must be distinct.
        let (a, b) = pairs[p];
        let clash = combo[..depth]
            .iter()
            .any(|&q| [pairs[q].0, pairs[q].1].iter().any(|&x| x == a || x == b));
        if clash {
            continue;
        }
        combo[depth] = p;
        if let Some(hit) =
            search_combos(combo, depth + 1, p + 1, pairs, candidates, n, eval)
        {
            return Some(hit);
        }
    }
    None
}

fn try_candidate(
    chosen: &[(Hyperplane, Hyperplane)],
    gamma: &CompleteGeodesic,
    delta: f64,
    model: &HCube,
    x0: &HPoint,
    accept: &dyn Fn(&EnclosingCube) -> bool,
) -> Option<EnclosingCube> {
    let cube = HCube::from_opposite_pairs(chosen.to_vec()).ok()?;
    if !cube.contains(x0) {
        return None;
    }
    if delta_close(&cube, model).ok()? >= delta {
        return None;
    }

    // Face crossings: the geodesic must meet exactly two faces, on an
    // opposite pair; every other face hyperplane must miss the geodesic.
    let mut face_hits: Vec<(usize, Crossing)> = Vec::new();
    for (f, h) in cube.faces().iter().enumerate() {
        match geodesic_hits_hyperplane(gamma, h) {
            Ok(Some(hit)) => {
                if cube.point_in_face(f, &hit.point) {
                    face_hits.push((f, hit));
                } else {
                    // The hyperplane is crossed outside the face: condition
                    // (2) fails for this cube.
                    return None;
                }
            }
            Ok(None) => {}
            Err(_) => return None,
        }
    }
    if face_hits.len() != 2 {
        return None;
    }
    let (fa, fb) = (face_hits[0].0, face_hits[1].0);
    if face_axis_sign(fa).0 != face_axis_sign(fb).0 {
        return None;
    }

    // Crossings near the face centers and near-orthogonal.
    for (f, hit) in &face_hits {
        let axis = face_axis_sign(*f).0;
        let opposite = if *f % 2 == 0 { *f + 1 } else { *f - 1 };
        let _ = axis;
        let center =
            common_perpendicular_foot(&cube.faces()[*f], &cube.faces()[opposite]).ok()?;
        if dist(&hit.point, &center) >= delta {
            return None;
        }
        if (hit.angle - std::f64::consts::FRAC_PI_2).abs() >= delta {
            return None;
        }
    }

    let (mut entry, mut exit) = (face_hits[0].clone(), face_hits[1].clone());
    if entry.1.param > exit.1.param {
        std::mem::swap(&mut entry, &mut exit);
    }
    let found = EnclosingCube {
        cube,
        bottom_face: entry.0,
        top_face: exit.0,
        entry: entry.1,
        exit: exit.1,
    };
    accept(&found).then_some(found)
}

/// Directed interlocking: the hyperplane of `prev`'s top face lies strictly
/// between the hyperplanes of `next`'s top and bottom faces. Tested via
/// disjointness of the planes plus the sign of `next`'s outward normals at a
/// witness point on the middle plane.
pub fn interlocking(prev: &HCube, next: &HCube, gamma: &CompleteGeodesic) -> Result<bool> {
    let prev_hits = cube_crossings(prev, gamma)?;
    let next_hits = cube_crossings(next, gamma)?;
    let top = &prev.faces()[prev_hits.1 .0];
    interlocking_planes(
        top,
        &prev_hits.1 .1.point,
        &next.faces()[next_hits.0 .0],
        &next.faces()[next_hits.1 .0],
    )
}

fn interlocking_planes(
    middle: &Hyperplane,
    witness: &HPoint,
    bottom: &Hyperplane,
    top: &Hyperplane,
) -> Result<bool> {
    for bound in [bottom, top] {
        let g = mink_inner_unchecked(middle.normal(), bound.normal());
        if g.abs() <= 1.0 {
            return Ok(false);
        }
    }
    // Outward normals: inside the slab means strictly negative on both.
    Ok(mink_inner_unchecked(witness.vec(), bottom.normal()) < -TAU_POINT
        && mink_inner_unchecked(witness.vec(), top.normal()) < -TAU_POINT)
}

/// Entry and exit face crossings of a geodesic through a cube, ordered by
/// parameter; errors unless there are exactly two on an opposite face pair.
fn cube_crossings(
    cube: &HCube,
    gamma: &CompleteGeodesic,
) -> Result<((usize, Crossing), (usize, Crossing))> {
    let mut hits: Vec<(usize, Crossing)> = Vec::new();
    for (f, h) in cube.faces().iter().enumerate() {
        if let Some(hit) = geodesic_hits_hyperplane(gamma, h)? {
            if cube.point_in_face(f, &hit.point) {
                hits.push((f, hit));
            }
        }
    }
    if hits.len() != 2 || face_axis_sign(hits[0].0).0 != face_axis_sign(hits[1].0).0 {
        return Err(GeomError::CubeGeodesicIncidence);
    }
    let (mut a, mut b) = (hits[0].clone(), hits[1].clone());
    if a.1.param > b.1.param {
        std::mem::swap(&mut a, &mut b);
    }
    Ok((a, b))
}

/// Result of marching a cube chain along a geodesic arc.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainReport {
    pub cubes: Vec<CubeRecord>,
    /// Directed interlocking flags between consecutive cubes.
    pub interlocking_flags: Vec<bool>,
    /// Arc-length coverage interval `[entry, exit]` of each cube.
    pub coverage: Vec<(f64, f64)>,
    pub covered: bool,
    pub success: bool,
    /// Arc-length parameter at which the march failed, if it did.
    pub failure_at: Option<f64>,
    pub message: String,
}

/// Greedy march from `s₀`: find a qualifying cube at the current point,
/// advance to its exit crossing, find the next cube containing the exit
/// with crossing separation > ε/4, check interlocking, repeat until the arc
/// `[s₀, s₁]` is covered. Failure is reported, not thrown.
pub fn chain_cover(
    arr: &Arrangement,
    gamma: &CompleteGeodesic,
    arc: (f64, f64),
    eps: f64,
    delta: f64,
) -> Result<ChainReport> {
    let (s0, s1) = arc;
    if !(s1 > s0) {
        return Err(GeomError::InvalidParameter(format!(
            "empty arc [{s0}, {s1}]"
        )));
    }
    let mut cubes = Vec::new();
    let mut flags = Vec::new();
    let mut coverage: Vec<(f64, f64)> = Vec::new();
    let max_steps = (((s1 - s0) / (eps / 4.0)).ceil() as usize) + 8;

    let mut current = match enclosing_cube_search(arr, gamma, eps, delta, s0)? {
        Some(c) => c,
        None => {
            return Ok(ChainReport {
                cubes,
                interlocking_flags: flags,
                coverage,
                covered: false,
                success: false,
                failure_at: Some(s0),
                message: format!("no qualifying cube contains the arc start s = {s0}"),
            })
        }
    };
    cubes.push(current.cube.to_record());
    coverage.push((current.entry.param, current.exit.param));

    for _ in 0..max_steps {
        if current.exit.param >= s1 {
            let covered = coverage_ok(&coverage, s0, s1);
            return Ok(ChainReport {
                cubes,
                interlocking_flags: flags.clone(),
                coverage,
                covered,
                success: covered && flags.iter().all(|&f| f),
                failure_at: None,
                message: "arc covered".into(),
            });
        }
        let handoff = current.exit.param;
        let sep = eps / 4.0;
        let next = enclosing_cube_search_with(arr, gamma, eps, delta, handoff, &|cand| {
            (cand.entry.param - handoff).abs() > sep && (cand.exit.param - handoff).abs() > sep
        })?;
        let Some(next) = next else {
            return Ok(ChainReport {
                cubes,
                interlocking_flags: flags,
                coverage,
                covered: false,
                success: false,
                failure_at: Some(handoff),
                message: format!(
                    "no qualifying cube contains the crossing at s = {handoff} \
                     with separation > ε/4"
                ),
            });
        };
        let lock = interlocking(&current.cube, &next.cube, gamma)?;
        flags.push(lock);
        cubes.push(next.cube.to_record());
        coverage.push((next.entry.param, next.exit.param));
        if !lock {
            return Ok(ChainReport {
                cubes,
                interlocking_flags: flags,
                coverage,
                covered: false,
                success: false,
                failure_at: Some(handoff),
                message: format!("interlocking fails at s = {handoff}"),
            });
        }
        current = next;
    }
    let failure = coverage.last().map(|c| c.1);
    Ok(ChainReport {
        cubes,
        interlocking_flags: flags,
        coverage,
        covered: false,
        success: false,
        failure_at: failure,
        message: "step limit exceeded before covering the arc".into(),
    })
}

fn coverage_ok(coverage: &[(f64, f64)], s0: f64, s1: f64) -> bool {
    // Intervals are produced in march order with overlapping handoffs.
    let mut reach = s0;
    for (a, b) in coverage {
        if *a > reach {
            return false;
        }
        reach = reach.max(*b);
    }
    reach >= s1
}

/// The tangent plane of a totally geodesic hyperplane at a point on it: the
/// sample whose plane is the orthogonal complement of the hyperplane normal
/// in the tangent space.
pub fn hyperplane_tangent_sample(h: &Hyperplane, at: &HPoint) -> Result<PlaneSample> {
    let normal = HTangent::project_unit(at.clone(), h.normal())?;
    PlaneSample::from_normal(&normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperboloid::{exp_map, MinkowskiVec};

    fn base3() -> (HPoint, Vec<HTangent>) {
        let p = HPoint::basepoint(3);
        let f = coordinate_frame(&p).unwrap();
        (p, f)
    }

    fn plane(p: &HPoint, a: &HTangent, b: &HTangent) -> PlaneSample {
        PlaneSample::new(p.clone(), vec![a.clone(), b.clone()]).unwrap()
    }

    #[test]
    fn grassmann_zero_on_self() {
        let (p, f) = base3();
        let s = plane(&p, &f[0], &f[1]);
        assert_eq!(grassmann_dist(&s, &s).unwrap(), 0.0);
    }

    #[test]
    fn grassmann_single_rotation_angle() {
        let (p, f) = base3();
        let s = plane(&p, &f[0], &f[1]);
        let theta: f64 = 0.4;
        let rotated = HTangent::new_unit(
            p.clone(),
            f[1].dir().scale(theta.cos()).add_scaled(f[2].dir(), theta.sin()),
        )
        .unwrap();
        let t = plane(&p, &f[0], &rotated);
        let d = grassmann_dist(&s, &t).unwrap();
        assert!((d - theta).abs() < 1e-9, "d = {d}");
        // Symmetry.
        let d2 = grassmann_dist(&t, &s).unwrap();
        assert!((d - d2).abs() < TAU_POINT);
    }

    #[test]
    fn grassmann_parallel_translation() {
        let (p, f) = base3();
        let s = plane(&p, &f[1], &f[2]);
        // Transport the plane one unit along the E₁ geodesic (E₂, E₃ are
        // constant along it), so the only contribution is the base distance.
        let q = exp_map(&f[0], 1.0).unwrap();
        let fq = coordinate_frame(&q).unwrap();
        let t = plane(&q, &fq[1], &fq[2]);
        let d = grassmann_dist(&s, &t).unwrap();
        assert!((d - 1.0).abs() < 1e-9, "d = {d}");
    }

    #[test]
    fn grassmann_coordinate_planes_probe() {
        // Three coordinate hyperplane tangent planes at the basepoint,
        // probed by a 15°-rotated plane: min distance is π/12.
        let (p, f) = base3();
        let samples = vec![
            plane(&p, &f[0], &f[1]),
            plane(&p, &f[0], &f[2]),
            plane(&p, &f[1], &f[2]),
        ];
        let phi = std::f64::consts::PI / 12.0;
        let rotated = HTangent::new_unit(
            p.clone(),
            f[1].dir().scale(phi.cos()).add_scaled(f[2].dir(), phi.sin()),
        )
        .unwrap();
        let probe = plane(&p, &f[0], &rotated);
        let d = eps_density(&samples, &[probe]).unwrap();
        assert!((d - phi).abs() < 1e-9, "min distance {d}");
    }

    #[test]
    fn eps_density_zero_and_monotone() {
        let (p, f) = base3();
        let q = exp_map(&f[0], 0.7).unwrap();
        let fq = coordinate_frame(&q).unwrap();
        let samples = vec![plane(&p, &f[0], &f[1]), plane(&q, &fq[1], &fq[2])];
        // Probes ⊆ samples → exactly zero.
        assert_eq!(eps_density(&samples, &samples).unwrap(), 0.0);
        // Adding samples never increases the value.
        let probe = vec![plane(&p, &f[1], &f[2])];
        let with_two = eps_density(&samples, &probe).unwrap();
        let with_one = eps_density(&samples[..1].to_vec(), &probe).unwrap();
        assert!(with_two <= with_one + 1e-15);
        assert!(matches!(
            eps_density(&[], &probe),
            Err(GeomError::EmptySamples)
        ));
    }

    /// Axis-aligned Box_model(ε) faces translated along the E₁ geodesic.
    fn translated_box_faces(eps: f64, centers: &[f64]) -> Vec<Hyperplane> {
        let (p, _) = base3();
        let gamma = CompleteGeodesic::new(
            HTangent::new_unit(p, MinkowskiVec::basis(4, 1)).unwrap(),
        )
        .unwrap();
        let mut faces = Vec::new();
        for &s in centers {
            let c = gamma.point_at(s);
            let tangent = gamma.tangent_at(s);
            let frame = crate::hyperboloid::orthonormal_tangent_frame(
                &c,
                &[
                    tangent.dir().clone(),
                    MinkowskiVec::basis(4, 2),
                    MinkowskiVec::basis(4, 3),
                ],
            )
            .unwrap();
            let cube = box_model(&c, &frame, eps).unwrap();
            faces.extend(cube.faces().iter().cloned());
        }
        faces
    }

    fn axis_geodesic() -> CompleteGeodesic {
        let (p, f) = base3();
        CompleteGeodesic::new(f[0].clone()).unwrap()
    }

    #[test]
    fn arrangement_rejects_duplicates() {
        let faces = translated_box_faces(0.3, &[0.0]);
        let mut doubled = faces.clone();
        doubled.push(faces[2].flipped());
        assert!(matches!(
            Arrangement::new(doubled),
            Err(GeomError::DuplicateHyperplane(_, _))
        ));
    }

    #[test]
    fn enclosing_search_finds_centered_cube() {
        let eps = 0.3;
        let arr = Arrangement::new(translated_box_faces(eps, &[0.0])).unwrap();
        let gamma = axis_geodesic();
        let found = enclosing_cube_search(&arr, &gamma, eps, 0.1, 0.0)
            .unwrap()
            .expect("centered cube qualifies");
        // Crossings at ±ε with orthogonal incidence.
        assert!((found.entry.param + eps).abs() < 1e-9);
        assert!((found.exit.param - eps).abs() < 1e-9);
        assert!((found.entry.angle - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn enclosing_search_rejects_tilted_geodesic() {
        let eps = 0.3;
        let arr = Arrangement::new(translated_box_faces(eps, &[0.0])).unwrap();
        let (p, f) = base3();
        // 30° off-axis through the cube center: the angle window (δ = 0.1)
        // rejects it.
        let tilt: f64 = std::f64::consts::PI / 6.0;
        let dir = HTangent::new_unit(
            p,
            f[0].dir().scale(tilt.cos()).add_scaled(f[1].dir(), tilt.sin()),
        )
        .unwrap();
        let gamma = CompleteGeodesic::new(dir).unwrap();
        assert!(enclosing_cube_search(&arr, &gamma, eps, 0.1, 0.0)
            .unwrap()
            .is_none());
    }

    #[test]
    fn enclosing_search_needs_all_faces() {
        let eps = 0.3;
        let mut faces = translated_box_faces(eps, &[0.0]);
        faces.remove(3); // drop one side hyperplane
        let arr = Arrangement::new(faces).unwrap();
        let gamma = axis_geodesic();
        assert!(enclosing_cube_search(&arr, &gamma, eps, 0.1, 0.0)
            .unwrap()
            .is_none());
    }

    #[test]
    fn interlocking_directed() {
        let eps = 0.3;
        let step = 0.45;
        let arr0 = translated_box_faces(eps, &[0.0]);
        let arr1 = translated_box_faces(eps, &[step]);
        let gamma = axis_geodesic();
        let a = HCube::from_opposite_pairs(
            (0..3).map(|i| (arr0[2 * i].clone(), arr0[2 * i + 1].clone())).collect(),
        )
        .unwrap();
        let b = HCube::from_opposite_pairs(
            (0..3).map(|i| (arr1[2 * i].clone(), arr1[2 * i + 1].clone())).collect(),
        )
        .unwrap();
        // a's top (at ε) lies between b's faces (at step ± ε).
        assert!(interlocking(&a, &b, &gamma).unwrap());
        // The reverse does not hold: b's top (at step + ε) is beyond a's top.
        assert!(!interlocking(&b, &a, &gamma).unwrap());
    }

    #[test]
    fn chain_cover_succeeds_and_localizes_failure() {
        let eps = 0.3;
        let step = 0.45;
        let centers: Vec<f64> = (0..24).map(|i| i as f64 * step).collect();
        let faces = translated_box_faces(eps, &centers);
        let arr = Arrangement::new(faces.clone()).unwrap();
        let gamma = axis_geodesic();
        let report = chain_cover(&arr, &gamma, (0.0, 10.0), eps, 0.02).unwrap();
        assert!(report.success, "chain failed: {}", report.message);
        assert!(report.covered);
        assert!(report.interlocking_flags.iter().all(|&f| f));

        // Remove one axis hyperplane mid-chain: the march stalls there.
        let victim = faces
            .iter()
            .position(|h| {
                let hit = geodesic_hits_hyperplane(&gamma, h);
                matches!(hit, Ok(Some(c)) if (c.param - (10.0 * step / 2.0 + eps)).abs() < 1e-6)
            })
            .expect("an axis face crosses mid-arc");
        let mut broken = faces.clone();
        broken.remove(victim);
        let arr2 = Arrangement::new(broken).unwrap();
        let report2 = chain_cover(&arr2, &gamma, (0.0, 10.0), eps, 0.02).unwrap();
        assert!(!report2.success);
        let fail_at = report2.failure_at.expect("failure is localized");
        assert!(fail_at > 0.0 && fail_at < 10.0);
    }
}
