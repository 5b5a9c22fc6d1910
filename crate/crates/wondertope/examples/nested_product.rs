//! Nested set complexes of the partition lattice and the product decomposition of a link.

use wondertope::matroid::{link, minimal_building_set, nested_set_complex, restrict_contract, verify_product_theorem, FlatLattice};

fn main() -> wondertope::Result<()> {
    let l = FlatLattice::partition(6)?;
    let b = minimal_building_set(&l);
    let n = nested_set_complex(&l, &b)?;
    println!("{l}: |B^min| = {}, f-vector {:?}", b.len(), n.f_vector());

    let f = l.parse_flat("123|4|5|6")?;
    let rc = restrict_contract(&l, &b, f)?;
    println!("F = {}", l.label(f));
    println!("  B^F      {:?}", rc.restriction.labels(&l));
    println!("  (B_F)_1  {:?}", rc.first.iter().map(|&x| l.label(x)).collect::<Vec<_>>());
    println!("  (B_F)_2  {:?}", rc.second.iter().map(|&x| l.label(x)).collect::<Vec<_>>());
    println!("  link has {} vertices", link(&l, &b, &n, f)?.vertices.len());
    println!("{}", verify_product_theorem(&l, &b, f)?);
    Ok(())
}
