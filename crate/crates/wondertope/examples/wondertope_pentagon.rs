//! The triangle with two of its vertices blown up is a pentagon: five boundary divisors.

use wondertope::blowup::verify_wondertope;
use wondertope::buildingset_geom::{predicted_boundary, GeomBuildingSet};
use wondertope::polytope::{ipoint, shapes};
use wondertope::LinearSubspace;

fn main() -> wondertope::Result<()> {
    let t = shapes::triangle();
    let point = |p: &[i64]| LinearSubspace::span_of_points(2, &[ipoint(p)]);
    let b = GeomBuildingSet::new(2, vec![point(&[0, 0]), point(&[1, 0]), LinearSubspace::empty(2)])?;
    println!("predicted boundary: {:?}", predicted_boundary(&t, &b));
    let report = verify_wondertope(&t, &b)?;
    println!("{report}");

    let m05 = wondertope::m0n::verify_m05_pentagon()?;
    println!("{m05}");
    Ok(())
}
