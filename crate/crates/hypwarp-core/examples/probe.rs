// scratch probe for search timing
use hypwarp_core::distribution::*;
use hypwarp_core::hyperboloid::*;
use hypwarp_core::region::*;
use std::time::Instant;

fn main() {
    let p = HPoint::basepoint(3);
    let f = coordinate_frame(&p).unwrap();
    let gamma = CompleteGeodesic::new(f[0].clone()).unwrap();
    let eps = 0.3;
    let step = 0.45;
    let mut faces = Vec::new();
    for j in 0..24 {
        let s = j as f64 * step;
        let c = gamma.point_at(s);
        let tangent = gamma.tangent_at(s);
        let frame = orthonormal_tangent_frame(
            &c,
            &[tangent.dir().clone(), MinkowskiVec::basis(4, 2), MinkowskiVec::basis(4, 3)],
        ).unwrap();
        let cube = box_model(&c, &frame, eps).unwrap();
        faces.extend(cube.faces().iter().cloned());
    }
    println!("faces: {}", faces.len());
    let arr = Arrangement::new(faces).unwrap();
    for s in [0.0, 2.1, 5.0, 9.9] {
        let t = Instant::now();
        let r = enclosing_cube_search(&arr, &gamma, eps, 0.02, s).unwrap();
        println!("search at {s}: {:?} in {:?}", r.map(|e| (e.entry.param, e.exit.param)), t.elapsed());
    }
    let t = Instant::now();
    let rep = chain_cover(&arr, &gamma, (0.0, 10.0), eps, 0.02).unwrap();
    println!("chain: success={} cubes={} in {:?}", rep.success, rep.cubes.len(), t.elapsed());
}
