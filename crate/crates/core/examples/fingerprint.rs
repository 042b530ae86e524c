//! Recover the bit window of η_s from a disguised cocycle
//! a · η_s(b x, b y) + (coboundary), and compare two cocycles on a window.

use contraction_groups::cocycle::{BitSeq, CocycleSpec};
use contraction_groups::fingerprint::{
    delta_profile, DeltaEntry, equivalent_on_window, probe_check, recover_bits,
};
use contraction_groups::{random, Modulus, Result};

fn main() -> Result<()> {
    let ring = Modulus::new(2, 1)?;
    let mut rng = random::rng(2024);

    let s = BitSeq::from_bits("1011001")?;
    let disguised = random::transformed_eta(&mut rng, ring, s.clone(), 2, 3);
    println!("spec     = {disguised}");

    let profile = delta_profile(&disguised, ring, s.len() as i64, None)?;
    for e in &profile.entries {
        match e {
            DeltaEntry::Exact { m, v } => println!("  m={m}  v(δ_m)={v}"),
            DeltaEntry::Bound { m, bound } => println!("  m={m}  v(δ_m)>{bound}"),
        }
    }
    let rec = recover_bits(&profile);
    println!("c        = {:?}", rec.c);
    println!("bits     = {}", rec.bits.as_ref().map_or("?".into(), |b| b.to_bit_string()));
    println!("expected = {}", s.to_bit_string());
    println!("status   = {:?}", rec.status);

    let report = probe_check(&disguised, ring, &rec, 50, &mut rng)?;
    println!("probes   = {} checked, {} failed", report.checked, report.failed);

    let other = CocycleSpec::eta("1011000")?;
    println!(
        "vs {other}: {:?}",
        equivalent_on_window(&disguised, &other, ring, s.len() as i64, None)?
    );
    Ok(())
}
