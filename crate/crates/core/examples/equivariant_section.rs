//! Sections σ of a quotient q: G → H with q∘σ = id and σ∘β = α∘σ, built
//! digit by digit from lifts of the constant representatives.

use contraction_groups::cocycle::CocycleSpec;
use contraction_groups::section::{make_ext_projection_ctx, make_mod_reduction_ctx};
use contraction_groups::{random, Result, TruncSeries};

fn main() -> Result<()> {
    // Z/9((t)) → Z/3((t)).
    let ctx = make_mod_reduction_ctx(3, 2, 1)?;
    let h = TruncSeries::parse("2*t^-2 + 1*t^0 + 2*t^3", ctx.h_ring())?;
    let (level, digits) = ctx.digit_expand(&h, 6)?;
    println!("h = {h}");
    println!("digits from t^{level}: {digits:?}");
    let s = ctx.build_section(&h, 6)?;
    println!("σ(h) = {}  agrees-through=t^{}", s.value, s.through);

    // A ×_η A → A, (a, g) ↦ g.
    let ctx = make_ext_projection_ctx(CocycleSpec::eta("101")?, 2)?;
    let h = TruncSeries::parse("t^-1 + t^0 + t^4", ctx.h_ring())?;
    let s = ctx.build_section(&h, 8)?;
    println!("σ({h}) = {}  agrees-through=t^{}", s.value, s.through);
    println!("q(σ(h)) = {}", ctx.project(&s.value)?);

    let mut rng = random::rng(5);
    let samples: Vec<_> = (0..100).map(|_| random::series(&mut rng, ctx.h_ring(), -4, 10)).collect();
    let report = ctx.verify_section(&samples, 24);
    println!("verify: {} checked, {} failed", report.checked, report.failed);
    Ok(())
}
