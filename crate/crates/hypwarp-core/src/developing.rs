//! Developing the boundary of a hypercube into `Hⁿ`.
//!
//! Each face of a cube with totally geodesic faces carries an isometric
//! chart into `Hⁿ`. A chart on one face extends across a shared ridge to the
//! adjacent face: the extension is pinned by matching the ridge pointwise
//! and reproducing the measured dihedral angle, which is constant along the
//! ridge precisely because the faces are totally geodesic. Charts are
//! propagated from a seed face along a spanning tree of the face-adjacency
//! (dual) graph; the development is globally consistent iff re-developing
//! around every closed dual-graph loop returns the starting chart. That
//! holonomy defect, together with disjointness of the developed opposite
//! faces, is what upgrades the local isometry to an embedding of the whole
//! boundary.
//!
//! The extension is built from measured data only (ridge anchor, adapted
//! orthonormal frames, sampled dihedral), so inconsistent input surfaces as
//! a failed planarity check or a large defect rather than being silently
//! absorbed.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hyperboloid::{
    dist, isometry_from_frames, mink_inner_unchecked, orthonormal_tangent_frame, HPoint,
    HTangent, Isometry, MinkowskiVec,
};
use crate::region::{face_axis_sign, face_sample_points, HCube};
use crate::tol::TAU_DEV;

/// An isometric placement of one cube face into the target copy of `Hⁿ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DevelopedChart {
    pub source_face: usize,
    pub placement: Isometry,
}

/// Outcome of developing a cube boundary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DevelopmentResult {
    pub charts: Vec<DevelopedChart>,
    /// Max over closed dual-graph loops of the displacement of the
    /// re-developed chart from the original, measured on face sample points.
    pub holonomy_defect: f64,
    /// Per axis: distance between the developed opposite face hyperplanes
    /// (`arccosh|⟨û⁺,û⁻⟩|` when disjoint; `|⟨û⁺,û⁻⟩| − 1 ≤ 0` when not).
    pub opposite_face_gap: Vec<f64>,
    /// Per face: max sampled pairwise-distance distortion under its chart.
    pub face_isometry_defect: Vec<f64>,
}

/// Interior dihedral angle along the ridge shared by two adjacent faces.
///
/// Measured at 5 sampled ridge points from the face normals projected to the
/// tangent space there; the samples must agree within [`TAU_DEV`]. Input
/// whose vertices have drifted off the face hyperplanes fails here instead
/// of being developed.
pub fn dihedral_angle(c: &HCube, face_a: usize, face_b: usize) -> Result<f64> {
    let (axis_a, _) = face_axis_sign(face_a);
    let (axis_b, _) = face_axis_sign(face_b);
    if axis_a == axis_b || face_a == face_b {
        return Err(GeomError::NonAdjacentFaces(face_a, face_b));
    }
    let samples = ridge_samples(c, face_a, face_b, 5)?;
    let mut angles = Vec::with_capacity(samples.len());
    for x in &samples {
        // Residual of the sample against both hyperplanes: planarity guard.
        let ra = mink_inner_unchecked(x.vec(), c.faces()[face_a].normal()).abs();
        let rb = mink_inner_unchecked(x.vec(), c.faces()[face_b].normal()).abs();
        if ra > TAU_DEV || rb > TAU_DEV {
            return Err(GeomError::NonPlanarFaces(ra.max(rb)));
        }
        let na = project_normal(x, c.faces()[face_a].normal())?;
        let nb = project_normal(x, c.faces()[face_b].normal())?;
        let cos_outward = mink_inner_unchecked(na.dir(), nb.dir()).clamp(-1.0, 1.0);
        // Interior angle is the supplement of the outward-normal angle.
        angles.push(std::f64::consts::PI - cos_outward.acos());
    }
    let lo = angles.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > TAU_DEV {
        return Err(GeomError::NonPlanarFaces(hi - lo));
    }
    Ok(angles.iter().sum::<f64>() / angles.len() as f64)
}

/// Extends a chart across the ridge shared with `to_face`, reproducing the
/// given dihedral angle. The result agrees with `from` on the ridge and
/// places `to_face`'s hyperplane at that angle on the matching side.
pub fn chart_extension(
    c: &HCube,
    from: &DevelopedChart,
    to_face: usize,
    dihedral: f64,
) -> Result<DevelopedChart> {
    if !(dihedral > 0.0 && dihedral < std::f64::consts::PI) {
        return Err(GeomError::InvalidParameter(format!(
            "dihedral angle must lie in (0,π), got {dihedral}"
        )));
    }
    let generator = extension_generator(c, from.source_face, to_face, dihedral)?;
    Ok(DevelopedChart {
        source_face: to_face,
        placement: from.placement.compose(&generator)?,
    })
}

/// The identity-chart extension isometry `G` for a directed adjacent face
/// pair: a chart `M` on `face_a` extends to `M ∘ G` on `face_b`.
fn extension_generator(
    c: &HCube,
    face_a: usize,
    face_b: usize,
    dihedral: f64,
) -> Result<Isometry> {
    let (axis_a, _) = face_axis_sign(face_a);
    let (axis_b, _) = face_axis_sign(face_b);
    if axis_a == axis_b || face_a == face_b {
        return Err(GeomError::NonAdjacentFaces(face_a, face_b));
    }
    let anchor = ridge_anchor(c, face_a, face_b)?;
    let n = c.n();

    let n_a = project_normal(&anchor, c.faces()[face_a].normal())?;
    let n_b = project_normal(&anchor, c.faces()[face_b].normal())?;
    // In-face directions orthogonal to the ridge, pointing into each face.
    let w_a = into_face_dir(&anchor, &n_a, &n_b)?;
    let w_b = into_face_dir(&anchor, &n_b, &n_a)?;

    // Ridge tangents: complete [n̂_a, w_a] to a full orthonormal frame; the
    // added vectors are orthogonal to span{n̂_a, n̂_b}, hence ridge-tangent.
    let mut seeds: Vec<MinkowskiVec> = vec![n_a.dir().clone(), w_a.dir().clone()];
    for i in 0..=n {
        seeds.push(MinkowskiVec::basis(n + 1, i));
    }
    let full = orthonormal_tangent_frame(&anchor, &seeds)?;
    if full.len() != n {
        return Err(GeomError::DegenerateCube(
            "could not frame the ridge".into(),
        ));
    }
    let ridge_tangents = &full[2..];

    // Source frame adapted to face_b: [ridge…, w_b, n̂_b].
    let mut source_frame: Vec<HTangent> = ridge_tangents.to_vec();
    source_frame.push(w_b);
    source_frame.push(n_b.clone());

    // Target frame: rotate the face_a pair (w_a, n̂_a) by the supplement of
    // the dihedral angle within their 2-plane.
    let alpha = std::f64::consts::PI - dihedral;
    let (sin_a, cos_a) = alpha.sin_cos();
    let w_b_target = w_a.dir().scale(-cos_a).add_scaled(n_a.dir(), -sin_a);
    let n_b_target = w_a.dir().scale(-sin_a).add_scaled(n_a.dir(), cos_a);
    let mut target_frame: Vec<HTangent> = ridge_tangents.to_vec();
    target_frame.push(HTangent::new(anchor.clone(), w_b_target)?);
    target_frame.push(HTangent::new(anchor.clone(), n_b_target)?);

    isometry_from_frames(&anchor, &source_frame, &anchor, &target_frame)
}

/// Develops the whole boundary from a seed chart: spanning-tree propagation,
/// then holonomy over every simple dual-graph loop, opposite-face gaps, and
/// per-face isometry checks.
pub fn develop_boundary(
    c: &HCube,
    seed_face: usize,
    seed_placement: &Isometry,
) -> Result<DevelopmentResult> {
    let n = c.n();
    let planarity = c.planarity_defect();
    if planarity > TAU_DEV {
        return Err(GeomError::NonPlanarFaces(planarity));
    }
    let seed_defect = chart_distortion(c, seed_face, seed_placement);
    if seed_defect > TAU_DEV {
        return Err(GeomError::SeedNotIsometric(seed_defect));
    }

    // Extension generators for every directed adjacent pair, from measured
    // dihedral angles.
    let faces = 2 * n;
    let mut gen: Vec<Vec<Option<Isometry>>> = vec![vec![None; faces]; faces];
    for a in 0..faces {
        for b in 0..faces {
            if a != b && face_axis_sign(a).0 != face_axis_sign(b).0 {
                let theta = dihedral_angle(c, a, b)?;
                gen[a][b] = Some(extension_generator(c, a, b, theta)?);
            }
        }
    }

    // Breadth-first spanning tree from the seed, neighbors in index order.
    let mut charts: Vec<Option<Isometry>> = vec![None; faces];
    charts[seed_face] = Some(seed_placement.clone());
    let mut queue = std::collections::VecDeque::from([seed_face]);
    while let Some(a) = queue.pop_front() {
        for b in 0..faces {
            if charts[b].is_none() {
                if let Some(g) = &gen[a][b] {
                    let chart_a = charts[a].clone().expect("queued face has a chart");
                    charts[b] = Some(chart_a.compose(g)?);
                    queue.push_back(b);
                }
            }
        }
    }
    let charts: Vec<Isometry> = charts
        .into_iter()
        .map(|m| m.expect("dual graph is connected"))
        .collect();

    // Holonomy over every simple loop: compose generators around the loop
    // and measure the displacement on the start face's sample points.
    let mut holonomy = 0.0f64;
    for cycle in simple_cycles(n) {
        let mut loop_iso = Isometry::identity(n);
        for w in cycle.windows(2) {
            loop_iso = loop_iso.compose(gen[w[0]][w[1]].as_ref().expect("cycle edge"))?;
        }
        let probes = face_sample_points(c, cycle[0], 10);
        holonomy = holonomy.max(loop_iso.displacement_on(&probes));
    }

    let opposite_face_gap = (0..n)
        .map(|axis| {
            let up = charts[2 * axis].apply_vec(c.faces()[2 * axis].normal());
            let um = charts[2 * axis + 1].apply_vec(c.faces()[2 * axis + 1].normal());
            let g = mink_inner_unchecked(&up, &um).abs();
            if g > 1.0 {
                g.acosh()
            } else {
                g - 1.0
            }
        })
        .collect();

    let face_isometry_defect = (0..faces)
        .map(|f| chart_distortion(c, f, &charts[f]))
        .collect();

    Ok(DevelopmentResult {
        charts: charts
            .into_iter()
            .enumerate()
            .map(|(f, placement)| DevelopedChart {
                source_face: f,
                placement,
            })
            .collect(),
        holonomy_defect: holonomy,
        opposite_face_gap,
        face_isometry_defect,
    })
}

/// Max pairwise-distance distortion of a face's 10-point sample under a
/// placement.
fn chart_distortion(c: &HCube, face: usize, placement: &Isometry) -> f64 {
    let pts = face_sample_points(c, face, 10);
    let mapped: Vec<HPoint> = pts
        .iter()
        .filter_map(|p| placement.apply_point(p).ok())
        .collect();
    if mapped.len() != pts.len() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            worst = worst.max((dist(&pts[i], &pts[j]) - dist(&mapped[i], &mapped[j])).abs());
        }
    }
    worst
}

/// Unit normal of a face hyperplane as a tangent vector at `x`.
fn project_normal(x: &HPoint, u: &MinkowskiVec) -> Result<HTangent> {
    HTangent::project_unit(x.clone(), u)
}

/// Unit tangent at the ridge anchor lying in face `a`'s hyperplane,
/// orthogonal to the ridge, pointing into face `a` (the interior side of
/// `b`'s hyperplane).
fn into_face_dir(x: &HPoint, n_a: &HTangent, n_b: &HTangent) -> Result<HTangent> {
    let c = mink_inner_unchecked(n_b.dir(), n_a.dir());
    let w = n_b.dir().add_scaled(n_a.dir(), -c);
    let sq = mink_inner_unchecked(&w, &w);
    if sq <= 1e-18 {
        return Err(GeomError::DegenerateCube(
            "face normals are parallel at the ridge".into(),
        ));
    }
    HTangent::new(x.clone(), w.scale(-1.0 / sq.sqrt()))
}

/// Anchor point on the ridge shared by two faces: the normalized sum of the
/// shared vertices (a combination of on-plane vectors stays on both planes).
fn ridge_anchor(c: &HCube, face_a: usize, face_b: usize) -> Result<HPoint> {
    let (axis_a, minus_a) = face_axis_sign(face_a);
    let (axis_b, minus_b) = face_axis_sign(face_b);
    let mut sum = MinkowskiVec::zeros(c.n() + 1);
    let mut count = 0;
    for (mask, v) in c.vertices().iter().enumerate() {
        if (mask >> axis_a & 1 == 1) == minus_a && (mask >> axis_b & 1 == 1) == minus_b {
            sum = sum.add(v.vec());
            count += 1;
        }
    }
    if count == 0 {
        return Err(GeomError::NonAdjacentFaces(face_a, face_b));
    }
    let sq = mink_inner_unchecked(&sum, &sum);
    if sq >= 0.0 {
        return Err(GeomError::DegenerateCube(
            "ridge barycenter not timelike".into(),
        ));
    }
    HPoint::project(sum.scale(1.0 / (-sq).sqrt()))
}

/// Ridge sample points: normalized weighted combinations of the shared
/// vertices, spread deterministically.
fn ridge_samples(c: &HCube, face_a: usize, face_b: usize, want: usize) -> Result<Vec<HPoint>> {
    let (axis_a, minus_a) = face_axis_sign(face_a);
    let (axis_b, minus_b) = face_axis_sign(face_b);
    if axis_a == axis_b {
        return Err(GeomError::NonAdjacentFaces(face_a, face_b));
    }
    let verts: Vec<&HPoint> = c
        .vertices()
        .iter()
        .enumerate()
        .filter_map(|(mask, v)| {
            ((mask >> axis_a & 1 == 1) == minus_a && (mask >> axis_b & 1 == 1) == minus_b)
                .then_some(v)
        })
        .collect();
    if verts.is_empty() {
        return Err(GeomError::NonAdjacentFaces(face_a, face_b));
    }
    let mut out = Vec::with_capacity(want);
    for k in 0..want {
        let mut sum = MinkowskiVec::zeros(c.n() + 1);
        for (i, v) in verts.iter().enumerate() {
            // Positive weights varying with k spread the samples over the
            // ridge simplex.
            let w = 1.0 + (k * (i + 1)) as f64 / (want as f64);
            sum = sum.add_scaled(v.vec(), w);
        }
        let sq = mink_inner_unchecked(&sum, &sum);
        if sq >= 0.0 {
            return Err(GeomError::DegenerateCube(
                "ridge sample not timelike".into(),
            ));
        }
        out.push(HPoint::project(sum.scale(1.0 / (-sq).sqrt()))?);
    }
    Ok(out)
}

/// All simple cycles of the cube's dual graph (faces adjacent iff on
/// different axes), each listed once: the start is the smallest face index
/// in the cycle and the second entry is smaller than the last, fixing the
/// direction.
fn simple_cycles(n: usize) -> Vec<Vec<usize>> {
    let faces = 2 * n;
    let adjacent = |a: usize, b: usize| a != b && a / 2 != b / 2;
    let mut cycles = Vec::new();
    let mut path = Vec::new();

    fn dfs(
        path: &mut Vec<usize>,
        start: usize,
        faces: usize,
        adjacent: &dyn Fn(usize, usize) -> bool,
        cycles: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().expect("path is nonempty");
        for next in 0..faces {
            if next == start && path.len() >= 3 && adjacent(last, next) {
                if path[1] < last {
                    let mut cyc = path.clone();
                    cyc.push(start);
                    cycles.push(cyc);
                }
                continue;
            }
            if next > start && !path.contains(&next) && adjacent(last, next) {
                path.push(next);
                dfs(path, start, faces, adjacent, cycles);
                path.pop();
            }
        }
    }

    for start in 0..faces {
        path.clear();
        path.push(start);
        dfs(&mut path, start, faces, &adjacent, &mut cycles);
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperboloid::{chord_dist, coordinate_frame, exp_map, HTangent};
    use crate::region::box_model;

    fn cube3(eps: f64) -> HCube {
        let p = HPoint::basepoint(3);
        let f = coordinate_frame(&p).unwrap();
        box_model(&p, &f, eps).unwrap()
    }

    #[test]
    fn dihedral_closed_form() {
        // Interior dihedral of Box_model(ε): cos θ = −⟨u_a,u_b⟩ = sinh²ε.
        for eps in [0.05f64, 0.1, 0.3] {
            let c = cube3(eps);
            let theta = dihedral_angle(&c, 0, 2).unwrap();
            let expect = (eps.sinh().powi(2)).acos();
            assert!((theta - expect).abs() < 1e-10, "θ {theta} vs {expect}");
        }
        // ε → 0 limit: right angles.
        let c = cube3(1e-4);
        let theta = dihedral_angle(&c, 0, 2).unwrap();
        assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn dihedral_rejects_opposite_faces() {
        let c = cube3(0.1);
        assert!(matches!(
            dihedral_angle(&c, 0, 1),
            Err(GeomError::NonAdjacentFaces(0, 1))
        ));
    }

    #[test]
    fn dihedral_isometry_invariant() {
        let c = cube3(0.2);
        let p = HPoint::basepoint(3);
        let v = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 2)).unwrap();
        let q = exp_map(&v, 1.2).unwrap();
        let g = isometry_from_frames(
            &p,
            &coordinate_frame(&p).unwrap(),
            &q,
            &coordinate_frame(&q).unwrap(),
        )
        .unwrap();
        let moved = c.transformed(&g).unwrap();
        let a = dihedral_angle(&c, 0, 4).unwrap();
        let b = dihedral_angle(&moved, 0, 4).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn extension_is_identity_for_consistent_cube() {
        let c = cube3(0.1);
        let theta = dihedral_angle(&c, 0, 2).unwrap();
        let chart = DevelopedChart {
            source_face: 0,
            placement: Isometry::identity(3),
        };
        let ext = chart_extension(&c, &chart, 2, theta).unwrap();
        let probes = face_sample_points(&c, 2, 10);
        assert!(ext.placement.displacement_on(&probes) < 1e-11);
    }

    #[test]
    fn develop_box_model_trivial_holonomy() {
        let c = cube3(0.1);
        let result = develop_boundary(&c, 0, &Isometry::identity(3)).unwrap();
        assert!(
            result.holonomy_defect <= 1e-9,
            "holonomy {}",
            result.holonomy_defect
        );
        for (axis, gap) in result.opposite_face_gap.iter().enumerate() {
            assert!(*gap > 0.0);
            // Box_model gap between opposite hyperplanes is exactly 2ε.
            assert!((gap - 0.2).abs() < 1e-9, "axis {axis} gap {gap}");
        }
        for d in &result.face_isometry_defect {
            assert!(*d <= 1e-8);
        }
    }

    #[test]
    fn develop_two_paths_agree() {
        // Opposite faces 0 and 1 via two disjoint 3-chart paths.
        let c = cube3(0.1);
        let theta = |a, b| dihedral_angle(&c, a, b).unwrap();
        let seed = DevelopedChart {
            source_face: 0,
            placement: Isometry::identity(3),
        };
        let via = |mid: usize| {
            let step = chart_extension(&c, &seed, mid, theta(0, mid)).unwrap();
            chart_extension(&c, &step, 1, theta(mid, 1)).unwrap()
        };
        let through_2 = via(2);
        let through_4 = via(4);
        let probes = face_sample_points(&c, 1, 10);
        let mut worst = 0.0f64;
        for p in &probes {
            let a = through_2.placement.apply_point(p).unwrap();
            let b = through_4.placement.apply_point(p).unwrap();
            worst = worst.max(chord_dist(&a, &b));
        }
        assert!(worst < 1e-9, "path disagreement {worst}");
    }

    #[test]
    fn develop_equivariance() {
        let c = cube3(0.12);
        let p = HPoint::basepoint(3);
        let v = HTangent::new_unit(p.clone(), MinkowskiVec::basis(4, 1)).unwrap();
        let q = exp_map(&v, 0.9).unwrap();
        let g = isometry_from_frames(
            &p,
            &coordinate_frame(&p).unwrap(),
            &q,
            &coordinate_frame(&q).unwrap(),
        )
        .unwrap();
        let moved = c.transformed(&g).unwrap();
        // Matched seeds: identity on c, g⁻¹ on g·c.
        let r1 = develop_boundary(&c, 0, &Isometry::identity(3)).unwrap();
        let r2 = develop_boundary(&moved, 0, &g.inverse()).unwrap();
        assert!((r1.holonomy_defect - r2.holonomy_defect).abs() < 1e-9);
        for (a, b) in r1.opposite_face_gap.iter().zip(&r2.opposite_face_gap) {
            assert!((a - b).abs() < 1e-9);
        }
        // The developed images coincide chart by chart.
        for f in 0..6 {
            let probes = face_sample_points(&c, f, 6);
            for p in &probes {
                let img1 = r1.charts[f].placement.apply_point(p).unwrap();
                let moved_p = g.apply_point(p).unwrap();
                let img2 = r2.charts[f].placement.apply_point(&moved_p).unwrap();
                assert!(chord_dist(&img1, &img2) < 1e-8);
            }
        }
    }

    #[test]
    fn chart_extension_rejects_bad_dihedral() {
        let c = cube3(0.1);
        let chart = DevelopedChart {
            source_face: 0,
            placement: Isometry::identity(3),
        };
        assert!(chart_extension(&c, &chart, 2, 0.0).is_err());
        assert!(chart_extension(&c, &chart, 1, 1.5).is_err());
    }

    #[test]
    fn cycle_enumeration_is_sane() {
        // Dual graph of the 3-cube is the octahedron K_{2,2,2}: 8 triangles,
        // 15 4-cycles, 24 5-cycles, 16 6-cycles; 63 simple cycles in all.
        let cycles = simple_cycles(3);
        let mut by_len = std::collections::HashMap::new();
        for c in &cycles {
            *by_len.entry(c.len() - 1).or_insert(0usize) += 1;
        }
        assert_eq!(by_len.get(&3), Some(&8));
        assert_eq!(by_len.get(&4), Some(&15));
        assert_eq!(by_len.get(&5), Some(&24));
        assert_eq!(by_len.get(&6), Some(&16));
        assert_eq!(cycles.len(), 63);
    }
}
