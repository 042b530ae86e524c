//! Reference computations that share no code with the library paths they
//! check: dense coefficient loops, a floating-point root finder and matrix
//! powers.

use num::complex::Complex64;
use num::{BigRational, ToPrimitive};

use crate::cocycle::BitSeq;
use crate::series::TruncSeries;

fn span(xs: &[&TruncSeries]) -> (i64, i64) {
    let lo = xs.iter().map(|x| x.start()).min().unwrap_or(0);
    let hi = xs.iter().map(|x| x.end()).max().unwrap_or(0);
    (lo, hi)
}

/// `ω_n(x, y)` coefficient by coefficient, for exact `x, y`.
pub fn basis_omega(n: i64, x: &TruncSeries, y: &TruncSeries) -> TruncSeries {
    let ring = x.ring();
    let q = ring.order() as u128;
    let coeffs: Vec<i64> = (x.start()..x.end())
        .map(|i| {
            let xi = x.coeff(i).unwrap() as u128;
            let yi = y.coeff(i + n).unwrap() as u128;
            ((xi * yi) % q) as i64
        })
        .collect();
    TruncSeries::new(ring, x.start(), &coeffs, None).unwrap()
}

/// `η_s(x, y)` at each degree `d` as `Σ_n s_n x_{d-n} y_{d+n}`, for exact
/// `x, y` and a finitely supported `s`.
pub fn eta(s: &BitSeq, x: &TruncSeries, y: &TruncSeries) -> TruncSeries {
    let ring = x.ring();
    let q = ring.order() as u128;
    let l = s.len() as i64;
    let (lo, hi) = span(&[x, y]);
    let coeff = |z: &TruncSeries, i: i64| z.coeff(i).unwrap() as u128;
    let coeffs: Vec<i64> = (lo - l..=hi + l)
        .map(|d| {
            let mut acc = 0u128;
            for n in 1..=l {
                if s.bit(n as usize) == Some(true) {
                    acc = (acc + coeff(x, d - n) * coeff(y, d + n)) % q;
                }
            }
            acc as i64
        })
        .collect();
    TruncSeries::new(ring, lo - l, &coeffs, None).unwrap()
}

/// `Σ_j z_j t^j x` with integer lifts `z_j` of the coefficients of `z`.
pub fn theta(x: &TruncSeries, z: &TruncSeries) -> TruncSeries {
    let mut acc = TruncSeries::zero(x.ring());
    for (i, &c) in z.coeffs().iter().enumerate() {
        let j = z.start() + i as i64;
        acc = acc.add(&x.shift(j).int_mul(c as i64)).unwrap();
    }
    acc
}

/// Complex roots of `x^d + a_{d-1} x^{d-1} + ... + a_0` by Durand–Kerner
/// iteration followed by Newton polishing.
pub fn roots(lower: &[BigRational]) -> Vec<Complex64> {
    let d = lower.len();
    let mut c: Vec<f64> = lower.iter().map(|a| a.to_f64().unwrap()).collect();
    c.push(1.0);
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let deriv = |z: Complex64| {
        c.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, &a)| acc * z + a * i as f64)
    };
    let radius = 1.0 + c[..d].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..5 {
            let dv = deriv(*zi);
            if dv.norm() == 0.0 {
                break;
            }
            *zi -= eval(*zi) / dv;
        }
    }
    z
}

/// Whether the companion matrix of the monic integer polynomial with lower
/// coefficients `lower` is nilpotent mod `p`, by computing its `d`-th power.
pub fn companion_nilpotent_mod_p(lower: &[i64], p: u64) -> bool {
    let d = lower.len();
    let p = p as i64;
    let mut c = vec![vec![0i64; d]; d];
    for i in 1..d {
        c[i][i - 1] = 1;
    }
    for (i, &a) in lower.iter().enumerate() {
        c[i][d - 1] = (-a).rem_euclid(p);
    }
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| {
        let mut out = vec![vec![0i64; d]; d];
        for i in 0..d {
            for k in 0..d {
                if a[i][k] == 0 {
                    continue;
                }
                for j in 0..d {
                    out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
                }
            }
        }
        out
    };
    let mut power = c.clone();
    for _ in 1..d {
        power = mul(&power, &c);
    }
    power.iter().all(|row| row.iter().all(|&v| v == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Modulus;

    #[test]
    fn oracles_on_known_values() {
        let r = Modulus::new(2, 1).unwrap();
        let one = TruncSeries::one(r);
        let t2 = TruncSeries::t_pow(r, 2);
        let s = BitSeq::from_bits("1").unwrap();
        assert_eq!(eta(&s, &one, &t2), TruncSeries::t_pow(r, 1));
        assert_eq!(basis_omega(2, &one, &t2), one);
        let z = roots(&[BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into())]);
        let mut re: Vec<f64> = z.iter().map(|c| c.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // x^2 - 3x + 1/2 has roots (3 ± √7) / 2.
        assert!((re[0] - (3.0 - 7f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(companion_nilpotent_mod_p(&[2, 4], 2));
        assert!(!companion_nilpotent_mod_p(&[2, 3], 2));
    }
}
