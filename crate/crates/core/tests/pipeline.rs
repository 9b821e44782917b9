//! End-to-end checks across modules: constants feed the branches, the
//! branches generate the IFS, and the IFS cloud is measured.

use std::f64::consts::FRAC_PI_2;

use zorich_core::bounds::{lower_bound_dimension, IfsSpec};
use zorich_core::branches::{Branches, LatticeIndex};
use zorich_core::dynamics::{auto_scales, box_counting_dimension, chaos_game, ChaosParams};
use zorich_core::geom::HemisphereParam;
use zorich_core::zorich::ZorichMap;

#[test]
fn ifs_maps_are_compositions_of_branches() {
    let f = ZorichMap::calibrated(HemisphereParam::new(3, 1.0).unwrap(), 0.5, 128).unwrap();
    let ifs = IfsSpec::build(12.0, f.constants(), 3, 1.0, 12).unwrap();
    let br = Branches::new(&f, 12.0).unwrap();
    let y = zorich_core::Point::from_slice(&[3.0, -4.0, 20.0]).unwrap();
    let r = LatticeIndex::new(vec![4, -2]);
    let s = LatticeIndex::new(vec![1, 1]);
    let x = br.invert(&r, &br.invert(&s, &y).unwrap()).unwrap();
    assert!(ifs.in_ball(x.coords(), 0.0));
    let back = f.eval_shifted(12.0, &f.eval_shifted(12.0, &x));
    assert!(back.distance(&y) < 1e-9);
}

#[test]
fn planar_cloud_dimension_exceeds_moran_floor() {
    let f = ZorichMap::calibrated(HemisphereParam::planar(), 0.5, 64).unwrap();
    let a = 6.0;
    let lb = lower_bound_dimension(a, f.constants(), 2, FRAC_PI_2, Some(8), 10_000).unwrap();
    let ifs = IfsSpec::build(a, f.constants(), 2, FRAC_PI_2, 8).unwrap();
    assert_eq!(lb.root, ifs.solve().unwrap());
    let params = ChaosParams {
        n_points: 50_000,
        burn_in: 20,
        seed: 2,
        streams: 2,
    };
    let cloud = chaos_game(&f, &ifs, &params).unwrap();
    let anchor = [-ifs.radius, ifs.level];
    let scales = auto_scales(&cloud.coords, 2, &anchor).unwrap();
    let est = box_counting_dimension(&cloud.coords, 2, &anchor, &scales).unwrap();
    assert!(est.estimate >= lb.root.t - 0.2, "{} vs {}", est.estimate, lb.root.t);
}
