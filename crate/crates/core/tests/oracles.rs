//! Large direct computations, run with `cargo test --release -- --ignored`.

use fatpoints::cokernel::{ideal_component, PointConfiguration};
use fatpoints::exactla::PrimeField;
use fatpoints::lattice::FatPointScheme;
use fatpoints::linsys::expected_h0;

#[test]
#[ignore = "dense elimination of a 5368 x 5460 matrix"]
fn ten_point_ideal_in_degree_103() {
    let z: FatPointScheme = "50,50,38,38,26,26,22,18,14,14".parse().unwrap();
    let field = PrimeField::default();
    let pts = PointConfiguration::random(field, z.n(), 1, 0).points;
    let dim = ideal_component(field, &pts, 103, z.mults(), usize::MAX).unwrap().len();
    assert_eq!(dim, 92);
    assert_eq!(expected_h0(&z.class_of(103)), 92);
}
