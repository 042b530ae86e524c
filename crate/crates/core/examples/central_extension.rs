//! The central extension A ×_η A: products, commutators and the center test.

use contraction_groups::cocycle::{CocycleSpec, QuadTerm};
use contraction_groups::extension::{
    center_test, equivalence_map, guaranteed_probe, CenterVerdict, Extension,
};
use contraction_groups::{Modulus, Result, TruncSeries};

fn main() -> Result<()> {
    let ring = Modulus::new(2, 1)?;
    let ext = Extension::new(CocycleSpec::eta("101")?, ring);

    let u = ext.parse_element("(t^0 ; t^-1 + t^1)")?;
    let v = ext.parse_element("(0 ; t^1)")?;
    println!("u        = {u}");
    println!("v        = {v}");
    println!("u v      = {}", u.mul(&v)?);
    println!("v u      = {}", v.mul(&u)?);
    println!("u^-1     = {}", u.inv()?);
    println!("[u, v]   = {}", u.commutator(&v)?);
    println!("α^3(u)   = {}", u.alpha(3));

    let probe = guaranteed_probe(&u).expect("g is nonzero");
    match center_test(&u, &[probe])? {
        CenterVerdict::Fail { probe, witness } => {
            println!("u is not central: δ(g, t^{probe}) = {witness}")
        }
        CenterVerdict::Pass => println!("u passed at t^{probe}"),
    }
    let central = ext.iota(TruncSeries::t_pow(ring, 5))?;
    println!("center test on {central}: {:?}", center_test(&central, &[0, 1, 2, 3])?);

    // Changing the cocycle by a coboundary gives an isomorphic group.
    let f = vec![QuadTerm::new(1, TruncSeries::one(ring))];
    let (fu, fv) = (equivalence_map(&f, &u)?, equivalence_map(&f, &v)?);
    println!("φ(u v)   = {}", equivalence_map(&f, &u.mul(&v)?)?);
    println!("φ(u)φ(v) = {}", fu.mul(&fv)?);
    Ok(())
}
