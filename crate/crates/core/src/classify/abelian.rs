//! Torsion data: `ν(p, n)` tables, composition lengths, and the embeddings
//! `θ_x` of `F_{p^k}((t))` onto `⟨x⟩_α` inside `F_{p^m}((t))`.

use std::collections::BTreeMap;
use std::fmt;

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{is_prime, TruncSeries};

/// Multiplicities `ν(p, n)` of the factors `F_{p^n}((t))`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NuTable {
    entries: BTreeMap<(u64, u32), u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuEntry {
    pub p: u64,
    pub n: u32,
    pub nu: u64,
}

impl NuTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `(p, n, ν)` triples, summing repeats and dropping zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = NuEntry>) -> Result<Self> {
        let mut table = Self::new();
        for NuEntry { p, n, nu } in entries {
            if !is_prime(p) {
                return Err(Error::MalformedInput(format!("{p} is not prime")));
            }
            if n == 0 {
                return Err(Error::MalformedInput("exponent n must be positive".into()));
            }
            table.add(p, n, nu);
        }
        Ok(table)
    }

    fn add(&mut self, p: u64, n: u32, nu: u64) {
        if nu > 0 {
            *self.entries.entry((p, n)).or_insert(0) += nu;
        }
    }

    pub fn get(&self, p: u64, n: u32) -> u64 {
        self.entries.get(&(p, n)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in ascending `(p, n)` order.
    pub fn entries(&self) -> Vec<NuEntry> {
        self.entries
            .iter()
            .map(|(&(p, n), &nu)| NuEntry { p, n, nu })
            .collect()
    }

    /// The table of the direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for e in other.entries() {
            out.add(e.p, e.n, e.nu);
        }
        out
    }

    /// Composition length `ℓ = Σ n ν(p, n)`.
    pub fn length(&self) -> u64 {
        self.entries.iter().map(|(&(_, n), &nu)| n as u64 * nu).sum()
    }

    /// Modular function value `Δ(α⁻¹) = Π p^{n ν(p, n)}`.
    pub fn delta(&self) -> BigUint {
        self.entries
            .iter()
            .map(|(&(p, n), &nu)| BigUint::from(p).pow(n * nu as u32))
            .product()
    }
}

impl fmt::Display for NuTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{}):{}", e.p, e.n, e.nu)?;
        }
        f.write_str("}")
    }
}

/// Splits each cyclic order into prime powers and tallies them.
pub fn primary_decompose(orders: &[u64]) -> Result<NuTable> {
    let mut table = NuTable::new();
    for &order in orders {
        if order < 2 {
            return Err(Error::MalformedInput(format!(
                "cyclic factor orders must be at least 2, got {order}"
            )));
        }
        let mut rest = order;
        let mut d = 2u64;
        while d * d <= rest {
            let mut n = 0;
            while rest % d == 0 {
                rest /= d;
                n += 1;
            }
            if n > 0 {
                table.add(d, n, 1);
            }
            d += 1;
        }
        if rest > 1 {
            table.add(rest, 1, 1);
        }
    }
    Ok(table)
}

/// Whether two tables describe isomorphic torsion contraction groups.
pub fn iso_test(t1: &NuTable, t2: &NuTable) -> bool {
    t1 == t2
}

/// The chain `p^m F ⊂ p^{m-1} F ⊂ ... ⊂ F` for `F = F_{p^m}((t))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionData {
    /// Exponents `e` of the members `p^e F`, from the trivial subgroup up.
    pub chain: Vec<u32>,
    pub length: u64,
    pub delta: BigUint,
}

pub fn composition_data(p: u64, m: u32) -> Result<CompositionData> {
    if !is_prime(p) || m == 0 {
        return Err(Error::BadParams(format!("need a prime p and m >= 1, got p={p}, m={m}")));
    }
    let table = NuTable::from_entries([NuEntry { p, n: m, nu: 1 }])?;
    Ok(CompositionData {
        chain: (0..=m).rev().collect(),
        length: table.length(),
        delta: table.delta(),
    })
}

fn require_exact(x: &TruncSeries) -> Result<()> {
    if x.is_exact() {
        Ok(())
    } else {
        Err(Error::NotExact(x.to_string()))
    }
}

/// The exponent `k` of the order `p^k` of `x`: `m` minus the least `p`-adic
/// valuation of a coefficient.
pub fn element_order(x: &TruncSeries) -> Result<u32> {
    require_exact(x)?;
    let ring = x.ring();
    let least = x
        .coeffs()
        .iter()
        .filter(|&&c| c != 0)
        .map(|&c| ring.valuation(c))
        .min();
    Ok(least.map_or(0, |v| ring.m() - v))
}

/// `k` with `⟨x⟩_α = p^{m-k} F_{p^m}((t))`.
pub fn stable_subgroup_locate(x: &TruncSeries) -> Result<u32> {
    let k = element_order(x)?;
    let ring = x.ring();
    debug_assert!(x.coeffs().iter().all(|&c| ring.valuation(c) >= ring.m() - k));
    Ok(k)
}

/// `θ_x(z) = Σ_j z_j α^j(x)` for `z` over `Z/p^k` where `p^k` is the order of `x`.
///
/// This is the product of `x` with any lift of `z` to `Z/p^m((t))`.
pub fn theta_x(x: &TruncSeries, z: &TruncSeries) -> Result<TruncSeries> {
    let k = element_order(x)?;
    if z.ring().p() != x.ring().p() {
        return Err(Error::RingMismatch {
            left: x.ring(),
            right: z.ring(),
        });
    }
    if z.ring().m() != k {
        return Err(Error::OrderMismatch {
            expected: k,
            found: z.ring().m(),
        });
    }
    z.change_ring(x.ring())?.ring_mul(x)
}
