//! Torsion tables, composition data and the contractivity tests for linear
//! blocks.

use contraction_groups::classify::{
    canonicalize_spec, composition_data, element_order, iso_test, primary_decompose, schur_cohn,
    omega_p_contractive, ContractionSpec, RationalPoly,
};
use contraction_groups::{Modulus, Result, TruncSeries};

fn main() -> Result<()> {
    let z4 = primary_decompose(&[4])?;
    let klein = primary_decompose(&[2, 2])?;
    println!("Z/4: {z4}   Z/2 x Z/2: {klein}   isomorphic: {}", iso_test(&z4, &klein));
    let six = primary_decompose(&[6])?;
    let two_three = primary_decompose(&[2, 3])?;
    println!("Z/6: {six}   Z/2 x Z/3: {two_three}   isomorphic: {}", iso_test(&six, &two_three));

    let t = primary_decompose(&[12, 8, 9, 2])?;
    println!("{t}: length {} delta {}", t.length(), t.delta());

    let data = composition_data(3, 3)?;
    println!("Z/27((t)): length {} delta {}", data.length, data.delta);
    let x = TruncSeries::parse("9*t^0 + 18*t^4", Modulus::new(3, 3)?)?;
    println!("{x} has order p^{}", element_order(&x)?);

    for text in ["x - 1/2", "x^2 - 1/2*x + 1/8", "x^2 + 1", "x^3 - 2*x + 4"] {
        let f = RationalPoly::parse(text)?;
        println!(
            "{f}: real place {}, 2-adic {}",
            schur_cohn(&f),
            omega_p_contractive(&f, 2)
        );
    }

    let spec = ContractionSpec::from_json(
        r#"{"format":1,"blocks":[
            {"place":"inf","poly":"x - 1/3","n":1,"mult":1},
            {"place":"p:2","poly":"x^2 - 2","n":2,"mult":1},
            {"place":"inf","poly":"x - 1/3","n":1,"mult":2}],
          "torsion":[{"p":3,"n":2,"nu":1}]}"#,
    )?;
    println!("{}", canonicalize_spec(&spec)?.to_json());
    Ok(())
}
