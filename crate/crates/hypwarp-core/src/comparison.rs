//! Space-form trigonometry and Rauch-style polygon comparison.
//!
//! Working in the hyperbolic plane of curvature −k (k ≥ 1), realized as the
//! standard hyperboloid with lengths scaled by 1/√k. The law of cosines
//!
//! `cosh(√k·c) = cosh(√k·a)·cosh(√k·b) − sinh(√k·a)·sinh(√k·b)·cos γ`
//!
//! is monotone in k: matched side/angle data produces longer third sides in
//! more negative curvature, with equality exactly at k = 1. That is the
//! model-space comparison this module exercises at polygon scale: given a
//! polygon realizable at curvature −1, its chords are computed by iterated
//! law of cosines with the fan-angle bookkeeping (each interior angle splits
//! subadditively across the chords at that vertex), and a provider supplies
//! the chord lengths of the matched polygon living in a curvature ≤ −1
//! context. Every provider chord must be at least the model chord; the
//! verdict records where equality first fails.
//!
//! The provider for a general `K ≤ −1` manifold is abstract; the test
//! instantiation traces the same side/angle data in the curvature −k space
//! form (an open polyline for k > 1) and measures chords there. Geodesic
//! convexity of the region supplying provider chords is assumed, not
//! checked.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hyperboloid::{chord_dist, dist, exp_map, HPoint, HTangent, MinkowskiVec};
use crate::tol::TAU_POLY;

/// The hyperbolic plane of constant curvature −k, k ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpace {
    k: f64,
}

impl ModelSpace {
    pub fn new(k: f64) -> Result<Self> {
        if !(k >= 1.0) {
            return Err(GeomError::InvalidParameter(format!(
                "curvature parameter k must be ≥ 1, got {k}"
            )));
        }
        Ok(ModelSpace { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    fn s(&self) -> f64 {
        self.k.sqrt()
    }
}

/// Third side from two sides and the included angle, in curvature −k.
pub fn law_of_cosines(space: ModelSpace, a: f64, b: f64, gamma: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(GeomError::InvalidParameter(format!(
            "side lengths must be positive, got {a}, {b}"
        )));
    }
    if !(gamma > 0.0 && gamma < std::f64::consts::PI) {
        return Err(GeomError::InvalidParameter(format!(
            "included angle must lie in (0,π), got {gamma}"
        )));
    }
    let s = space.s();
    let ch = (s * a).cosh() * (s * b).cosh() - (s * a).sinh() * (s * b).sinh() * gamma.cos();
    Ok(ch.max(1.0).acosh() / s)
}

/// Angle opposite side `c` from three sides, in curvature −k.
pub fn law_of_cosines_angle(space: ModelSpace, a: f64, b: f64, c: f64) -> Result<f64> {
    let s = space.s();
    let denom = (s * a).sinh() * (s * b).sinh();
    if denom <= 0.0 {
        return Err(GeomError::InvalidParameter(
            "degenerate triangle sides".into(),
        ));
    }
    let cos_gamma = ((s * a).cosh() * (s * b).cosh() - (s * c).cosh()) / denom;
    Ok(cos_gamma.clamp(-1.0, 1.0).acos())
}

/// Third sides of the matched triangle at curvature −1 and −k, with the
/// equality flag of the comparison (equal within [`TAU_POLY`] iff k = 1).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TriangleComparison {
    pub c_model: f64,
    pub c_k: f64,
    pub equality: bool,
}

pub fn triangle_compare(
    space: ModelSpace,
    a: f64,
    b: f64,
    gamma: f64,
) -> Result<TriangleComparison> {
    let c_model = law_of_cosines(ModelSpace::new(1.0)?, a, b, gamma)?;
    let c_k = law_of_cosines(space, a, b, gamma)?;
    Ok(TriangleComparison {
        c_model,
        c_k,
        equality: (c_k - c_model).abs() <= TAU_POLY,
    })
}

/// Side lengths and interior angles of a polygon, `sides[i]` joining vertex
/// i to vertex i+1 (mod ℓ) and `angles[i]` the interior angle at vertex i.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonPolygon {
    pub sides: Vec<f64>,
    pub angles: Vec<f64>,
}

impl ComparisonPolygon {
    pub fn new(sides: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        if sides.len() != angles.len() || sides.len() < 3 {
            return Err(GeomError::InvalidParameter(format!(
                "need matching side/angle lists of length ≥ 3, got {}/{}",
                sides.len(),
                angles.len()
            )));
        }
        if let Some(s) = sides.iter().find(|s| !(**s > 0.0)) {
            return Err(GeomError::InvalidParameter(format!(
                "side lengths must be positive, got {s}"
            )));
        }
        if let Some(a) = angles
            .iter()
            .find(|a| !(**a > 0.0 && **a < std::f64::consts::PI))
        {
            return Err(GeomError::InvalidParameter(format!(
                "interior angles must lie in (0,π), got {a}"
            )));
        }
        Ok(ComparisonPolygon { sides, angles })
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }
}

/// Unit tangent orthogonal to `t` at its base, oriented by the Lorentzian
/// cross product; the trace turns consistently toward this side.
fn turn_normal(t: &HTangent) -> MinkowskiVec {
    let p = t.base().vec();
    let d = t.dir();
    // J(p ×_E d) in signature (−,+,+).
    MinkowskiVec(vec![
        -(p.0[1] * d.0[2] - p.0[2] * d.0[1]),
        p.0[2] * d.0[0] - p.0[0] * d.0[2],
        p.0[0] * d.0[1] - p.0[1] * d.0[0],
    ])
}

fn rotate_tangent(t: &HTangent, phi: f64) -> Result<HTangent> {
    let n = turn_normal(t);
    let dir = t.dir().scale(phi.cos()).add_scaled(&n, phi.sin());
    HTangent::project_unit(t.base().clone(), &dir)
}

/// Traces the side/angle data in the curvature −1 hyperboloid plane without
/// requiring closure. Returns the ℓ+1 traced points (last ≈ first when the
/// data closes) and the final heading.
fn trace(p: &ComparisonPolygon, scale: f64) -> Result<(Vec<HPoint>, HTangent)> {
    let start = HPoint::basepoint(2);
    let mut heading = HTangent::new_unit(start.clone(), MinkowskiVec::basis(3, 1))?;
    let mut points = vec![start];
    let ell = p.len();
    for i in 0..ell {
        let here = points.last().expect("trace start").clone();
        let next = exp_map(&heading, scale * p.sides[i])?;
        // Forward continuation of the geodesic at the arrival point.
        let carried = here
            .vec()
            .scale((scale * p.sides[i]).sinh())
            .add_scaled(heading.dir(), (scale * p.sides[i]).cosh());
        let carried = HTangent::project_unit(next.clone(), &carried)?;
        let alpha = p.angles[(i + 1) % ell];
        heading = rotate_tangent(&carried, std::f64::consts::PI - alpha)?;
        points.push(next);
    }
    Ok((points, heading))
}

/// Realizes the polygon in the hyperboloid model of H²: traces the data and
/// demands closure within [`TAU_POLY`] in both position and heading.
pub fn realize_polygon(p: &ComparisonPolygon) -> Result<Vec<HPoint>> {
    let (mut points, heading) = trace(p, 1.0)?;
    let defect_pos = chord_dist(&points[0], points.last().expect("trace end"));
    let start_heading = HTangent::new_unit(points[0].clone(), MinkowskiVec::basis(3, 1))?;
    // Compare the final heading to the initial one at the (nearly) same base.
    let defect_dir: f64 = heading
        .dir()
        .0
        .iter()
        .zip(&start_heading.dir().0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let defect = defect_pos.max(defect_dir);
    if defect > TAU_POLY {
        return Err(GeomError::NonRealizablePolygon(defect));
    }
    points.pop();
    Ok(points)
}

/// The same side/angle data traced in the curvature −k space form. For
/// k > 1 the polyline does not close; chords are measured between traced
/// vertices and rescaled back to −k lengths.
#[derive(Debug, Clone)]
pub struct SpaceFormPolygon {
    space: ModelSpace,
    points: Vec<HPoint>,
}

impl SpaceFormPolygon {
    pub fn trace(p: &ComparisonPolygon, space: ModelSpace) -> Result<Self> {
        let (mut points, _) = trace(p, space.s())?;
        points.pop();
        Ok(SpaceFormPolygon { space, points })
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }
}

/// Supplies chord lengths `|v_i v_j|` of a polygon with the model's side and
/// angle data, living in a curvature ≤ −1 context.
pub trait ChordProvider {
    fn chord_length(&self, i: usize, j: usize) -> f64;
}

impl ChordProvider for SpaceFormPolygon {
    fn chord_length(&self, i: usize, j: usize) -> f64 {
        dist(&self.points[i], &self.points[j]) / self.space.s()
    }
}

impl<F: Fn(usize, usize) -> f64> ChordProvider for F {
    fn chord_length(&self, i: usize, j: usize) -> f64 {
        self(i, j)
    }
}

/// One compared chord.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChordVerdict {
    pub i: usize,
    pub j: usize,
    pub model_length: f64,
    pub test_length: f64,
    pub equality: bool,
}

/// Outcome of the polygon chord comparison: one verdict per vertex pair and
/// the first chord (in induction order) where strict inequality appeared.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub chords: Vec<ChordVerdict>,
    pub first_strict: Option<(usize, usize)>,
    pub all_equal: bool,
}

/// Runs the finite chord induction: for each base vertex and increasing
/// span, the model chord is built by the law of cosines on the previous
/// chord, the next side, and the remaining fan angle at the shared vertex
/// (the interior angle minus the angles already consumed by earlier chords).
/// Provider chords are compared against these model chords; a provider chord
/// shorter than the model beyond [`TAU_POLY`] violates the comparison
/// hypothesis and is an error.
pub fn polygon_chord_induction(
    p: &ComparisonPolygon,
    provider: &dyn ChordProvider,
) -> Result<ComparisonVerdict> {
    let ell = p.len();
    let model = ModelSpace::new(1.0)?;
    // model_chords[i][j−i] for 1 ≤ j−i ≤ ℓ−1.
    let mut verdicts = Vec::new();
    let mut first_strict = None;
    let mut record = |i: usize, j: usize, model_len: f64| -> Result<()> {
        let test_len = provider.chord_length(i, j);
        if test_len < model_len - TAU_POLY {
            return Err(GeomError::ComparisonHypothesisViolated {
                i,
                j,
                test: test_len,
                model: model_len,
            });
        }
        let equality = (test_len - model_len).abs() <= TAU_POLY;
        if !equality && first_strict.is_none() {
            first_strict = Some((i, j));
        }
        verdicts.push(ChordVerdict {
            i,
            j,
            model_length: model_len,
            test_length: test_len,
            equality,
        });
        Ok(())
    };

    // Span 1 chords are the sides themselves.
    for i in 0..ell {
        let j = (i + 1) % ell;
        if i < j {
            record(i, j, p.sides[i])?;
        }
    }
    // Fan from each base vertex: chord to span 2, 3, … with the angle
    // bookkeeping at the moving vertex.
    for i in 0..ell {
        let mut chord = p.sides[i];
        // Angle at vertex m between the chord back to i and the side onward
        // to m+1; initially the full interior angle at i+1.
        let mut fan_angle = p.angles[(i + 1) % ell];
        for m in (i + 1)..(ell - 1).min(i + ell - 1) {
            if m >= ell {
                break;
            }
            let next = m + 1;
            if next >= ell {
                break;
            }
            if fan_angle <= 0.0 || fan_angle >= std::f64::consts::PI {
                return Err(GeomError::InvalidParameter(format!(
                    "fan angle left (0,π) at vertex {m}; polygon is not convex \
                     from vertex {i}"
                )));
            }
            let new_chord = law_of_cosines(model, chord, p.sides[m], fan_angle)?;
            record(i, next, new_chord)?;
            // Angle consumed at the new vertex by the triangle (i, m, m+1).
            let consumed = law_of_cosines_angle(model, p.sides[m], new_chord, chord)?;
            fan_angle = p.angles[next] - consumed;
            chord = new_chord;
        }
    }

    let all_equal = verdicts.iter().all(|v| v.equality);
    Ok(ComparisonVerdict {
        chords: verdicts,
        first_strict,
        all_equal,
    })
}

/// Measures the side/angle data of a realized convex polygon given by its
/// vertices; the inverse of [`realize_polygon`] for generating test data.
pub fn measure_polygon(vertices: &[HPoint]) -> Result<ComparisonPolygon> {
    let ell = vertices.len();
    if ell < 3 {
        return Err(GeomError::InvalidParameter(
            "need at least 3 vertices".into(),
        ));
    }
    let mut sides = Vec::with_capacity(ell);
    let mut angles = Vec::with_capacity(ell);
    for i in 0..ell {
        sides.push(dist(&vertices[i], &vertices[(i + 1) % ell]));
        let prev = &vertices[(i + ell - 1) % ell];
        let next = &vertices[(i + 1) % ell];
        let to_prev = crate::hyperboloid::log_map(&vertices[i], prev)?;
        let to_next = crate::hyperboloid::log_map(&vertices[i], next)?;
        angles.push(crate::hyperboloid::angle(&to_prev, &to_next)?);
    }
    ComparisonPolygon::new(sides, angles)
}
