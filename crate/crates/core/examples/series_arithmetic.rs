//! Truncated Laurent series over Z/p^m: parsing, arithmetic and precision.

use contraction_groups::{Modulus, Result, TruncSeries};

fn main() -> Result<()> {
    let ring = Modulus::new(3, 2)?;
    let x = TruncSeries::parse("2*t^-1 + 5*t^0 + O(t^3)", ring)?;
    let y = TruncSeries::parse("1*t^-1 + 4*t^2", ring)?;

    println!("x       = {x}");
    println!("y       = {y}");
    println!("x + y   = {}", x.add(&y)?);
    println!("-x      = {}", x.neg());
    println!("3x      = {}", x.int_mul(3));
    println!("t^4 x   = {}", x.shift(4));
    println!("x * y   = {}", x.ring_mul(&y)?);
    println!("|x|     = {}", x.abs_val());

    // A truncated zero only bounds the absolute value.
    let tiny = TruncSeries::zero_to(ring, 7);
    println!("|{tiny}| = {}", tiny.abs_val());

    // Changing the coefficient ring reduces mod p^k.
    let field = Modulus::prime_field(3)?;
    println!("x mod 3 = {}", x.change_ring(field)?);
    Ok(())
}
