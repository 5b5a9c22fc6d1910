//! The canonical form of the simplex region of M_{0,n}, written in the z coordinates.

use wondertope::m0n::{divisor_count, parke_taylor, verify_parke_taylor};

fn main() -> wondertope::Result<()> {
    for n in 3..=6 {
        let report = verify_parke_taylor(n)?;
        let d = divisor_count(n)?;
        println!("n = {n}: {}", parke_taylor(n)?);
        println!("       {} checks passed, {} boundary divisors", report.summary.pass, d.count);
    }
    Ok(())
}
