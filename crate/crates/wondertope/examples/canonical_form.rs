//! Canonical forms of a few polytopes, and the recursive residue check on each.

use wondertope::canonical_form::{polytope_form, verify_recursion};
use wondertope::polytope::shapes;

fn main() -> wondertope::Result<()> {
    for (name, p) in [
        ("triangle", shapes::triangle()),
        ("square", shapes::unit_cube(2)),
        ("pentagon", shapes::pentagon()),
        ("square pyramid", shapes::square_pyramid()),
    ] {
        let form = polytope_form(&p)?;
        let report = verify_recursion(&p)?;
        println!("{name:>15}  {form}");
        println!("{:>15}  residue recursion: {} checks, {} failing", "", report.checks.len(), report.summary.fail);
    }
    Ok(())
}
