//! Families that fail the hypotheses of the wondertope construction, with the witnesses
//! reported by each check.

use wondertope::algebra::Rat;
use wondertope::buildingset_geom::{check_building_set, check_face_condition, check_well_adapted, GeomBuildingSet};
use wondertope::polytope::{ipoint, shapes};
use wondertope::LinearSubspace;

fn main() -> wondertope::Result<()> {
    let mid = LinearSubspace::span_of_points(2, &[vec![Rat::new(1.into(), 2.into()), Rat::from_integer(0.into())]]);
    let b = GeomBuildingSet::new(2, vec![mid])?;
    println!("{}", check_face_condition(&shapes::triangle(), &b));

    let apex = ipoint(&[0, 0, 1]);
    let y = LinearSubspace::span_of_points(3, &[apex.clone(), ipoint(&[0, 1, 0])]);
    let y2 = LinearSubspace::span_of_points(3, &[apex, ipoint(&[1, 0, 0])]);
    println!("{}", check_building_set(&GeomBuildingSet::new(3, vec![y, y2])?));

    let f1 = LinearSubspace::span_of_points(4, &[ipoint(&[0, 1, 0, 0]), ipoint(&[0, 0, 1, 0]), ipoint(&[0, 0, 0, 1])]);
    let f2 = LinearSubspace::span_of_points(4, &[ipoint(&[1, 0, 0, 0]), ipoint(&[0, 0, 1, 0]), ipoint(&[1, 0, 0, 1])]);
    let s = GeomBuildingSet::new(4, vec![f1, f2])?;
    println!("{}", check_building_set(&s));
    println!("{}", check_well_adapted(&shapes::schlegel_polytope(), &s));
    Ok(())
}
