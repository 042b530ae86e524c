//! Evaluate the standard cocycles and check the cocycle identity and shift
//! equivariance on seeded random inputs.

use contraction_groups::cocycle::{
    antisymmetrize, b_map, check_cocycle_identity, check_equivariance, eval, parse_spec,
};
use contraction_groups::{random, Modulus, Result, TruncSeries};

fn main() -> Result<()> {
    let ring = Modulus::new(2, 1)?;
    let one = TruncSeries::one(ring);
    let t2 = TruncSeries::t_pow(ring, 2);

    for text in ["omega:1", "eta:1", "eta:101", "xform(eta:11;a=t^0 + t^1;b=t^0;cob=0:t^1)"] {
        let spec = parse_spec(text, ring)?;
        println!("{spec}");
        println!("  ω(1, t^2)     = {}", eval(&spec, &one, &t2)?);
        println!("  δ(1, t^2)     = {}", antisymmetrize(&spec, &one, &t2)?);

        let mut rng = random::rng(7);
        let triples: Vec<_> = (0..200)
            .map(|_| {
                (
                    random::series(&mut rng, ring, -3, 5),
                    random::series(&mut rng, ring, -3, 5),
                    random::series(&mut rng, ring, -3, 5),
                )
            })
            .collect();
        let pairs: Vec<_> = triples.iter().map(|(x, y, _)| (x.clone(), y.clone())).collect();
        let mut report = check_cocycle_identity(&spec, &triples);
        report.merge(check_equivariance(&spec, &pairs, -4..=4));
        println!("  checks        = {} checked, {} failed", report.checked, report.failed);

        let a = b_map(&spec, ring, 0, 4)?;
        let params: Vec<String> = (0..=4).map(|m| a.get(m).unwrap().to_string()).collect();
        println!("  a_0..a_4      = [{}]", params.join(", "));
    }
    Ok(())
}
