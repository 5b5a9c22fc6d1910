//! Blow up the 3-cube along the line through one of its edges and take the residue of
//! the pulled-back form along the exceptional divisor.

use wondertope::blowup::fundamental;
use wondertope::polytope::{ipoint, shapes};
use wondertope::LinearSubspace;

fn main() -> wondertope::Result<()> {
    let cube = shapes::unit_cube(3);
    let edge = LinearSubspace::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let f = fundamental(&cube, &edge, 0)?;
    println!("chart       {}", f.chart.map());
    println!("pullback    {}", f.pullback);
    println!("pole order  {}", f.pole_order);
    if let Some(res) = &f.residue {
        println!("residue     {res}");
    }
    println!("{}", f.report);

    // a line meeting the cube only in a vertex: the pullback has no pole along E
    let vertex_line = LinearSubspace::span_of_points(3, &[ipoint(&[0, 0, 0]), ipoint(&[1, -1, 0])]);
    println!("vertex line pole order {}", fundamental(&cube, &vertex_line, 0)?.pole_order);
    Ok(())
}
