//! Finite groups as multiplication tables and their group algebras.

use std::sync::Arc;

use ncmult::algebra::AlgebraElement;
use ncmult::group::{FiniteGroup, GroupSubset};
use ncmult::lp::plancherel_trace;

fn main() -> ncmult::Result<()> {
    for d in ["cyclic:12", "dihedral:6", "heisenberg:3", "product:cyclic:2,dihedral:3"] {
        let g = FiniteGroup::parse(d)?;
        println!(
            "{:<30} order {:>3}  abelian {:<5}  center {:?}  associative {}",
            g.label(),
            g.order(),
            g.is_abelian(),
            g.center(),
            g.check_associativity(None)
        );
    }

    let g = Arc::new(FiniteGroup::parse("dihedral:4")?);
    let r = AlgebraElement::delta(&g, 1);
    let s = AlgebraElement::delta(&g, 4);
    println!("\nD4: r*s = δ_{:?}, s*r = δ_{:?}", r.convolve(&s)?.support(), s.convolve(&r)?.support());

    let ball = GroupSubset::ball(&g, 1)?;
    let k = AlgebraElement::indicator(&ball);
    println!("ball of radius 1 = {}, symmetric {}", ball.spec(), ball.is_symmetric());
    println!("τ(1_B * 1_B) = {:.3}", plancherel_trace(&k.convolve(&k)?).re);
    println!("regular matrix of 1_B is {}×{}", k.regular_matrix().nrows(), k.regular_matrix().ncols());
    println!("\n{}", FiniteGroup::parse("cyclic:3")?.to_json());
    Ok(())
}
