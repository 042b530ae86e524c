//! Canonical descriptions of abelian contraction groups: linear blocks
//! `E_{f^n}` at a place with multiplicity `μ`, plus a torsion table `ν`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::abelian::{NuEntry, NuTable};
use super::poly::{omega_p_contractive, schur_cohn, RationalPoly};
use crate::error::{Error, Result};
use crate::series::is_prime;

/// `Q_p` or `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Place::Infinity);
        }
        let p = s
            .strip_prefix("p:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| Error::MalformedInput(format!("place `{s}` is not `inf` or `p:<prime>`")))?;
        if !is_prime(p) {
            return Err(Error::MalformedInput(format!("{p} is not prime")));
        }
        Ok(Place::Prime(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "p:{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// Name of the contractivity test used at a place.
pub fn test_name(place: Place) -> &'static str {
    match place {
        Place::Infinity => "schur-cohn",
        Place::Prime(_) => "p-adic-valuation",
    }
}

/// Runs the contractivity test of `place` on `f`.
pub fn is_contractive(place: Place, f: &RationalPoly) -> bool {
    match place {
        Place::Infinity => schur_cohn(f),
        Place::Prime(p) => omega_p_contractive(f, p),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    pub place: Place,
    pub poly: RationalPoly,
    pub n: u32,
    pub mult: u64,
}

impl Block {
    fn key(&self) -> (Place, usize, &RationalPoly, u32) {
        (self.place, self.poly.degree(), &self.poly, self.n)
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key()).then(self.mult.cmp(&other.mult))
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContractionSpec {
    pub blocks: Vec<Block>,
    pub torsion: NuTable,
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    format: u32,
    #[serde(default)]
    blocks: Vec<BlockFile>,
    #[serde(default)]
    torsion: Vec<NuEntry>,
}

#[derive(Serialize, Deserialize)]
struct BlockFile {
    place: String,
    poly: String,
    n: u32,
    mult: u64,
}

impl ContractionSpec {
    pub fn from_json(json: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(json)
            .map_err(|e| Error::MalformedInput(format!("spec JSON: {e}")))?;
        if file.format != 1 {
            return Err(Error::MalformedInput(format!("unsupported spec format {}", file.format)));
        }
        let blocks = file
            .blocks
            .into_iter()
            .map(|b| {
                Ok(Block {
                    place: b.place.parse()?,
                    poly: RationalPoly::parse(&b.poly)?,
                    n: b.n,
                    mult: b.mult,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            blocks,
            torsion: NuTable::from_entries(file.torsion)?,
        })
    }

    pub fn to_json(&self) -> String {
        let file = SpecFile {
            format: 1,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockFile {
                    place: b.place.to_string(),
                    poly: b.poly.to_string(),
                    n: b.n,
                    mult: b.mult,
                })
                .collect(),
            torsion: self.torsion.entries(),
        };
        serde_json::to_string(&file).expect("spec JSON serializes")
    }
}

/// Checks every block, merges repeated blocks, drops zero multiplicities and
/// sorts by place, degree, coefficients, then `n`.
pub fn canonicalize_spec(spec: &ContractionSpec) -> Result<ContractionSpec> {
    let mut merged: BTreeMap<(Place, usize, RationalPoly, u32), u64> = BTreeMap::new();
    for b in &spec.blocks {
        if b.n == 0 {
            return Err(Error::MalformedInput(format!("block {} has n = 0", b.poly)));
        }
        if !is_contractive(b.place, &b.poly) {
            return Err(Error::NotContractive {
                place: b.place.to_string(),
                poly: b.poly.to_string(),
                test: test_name(b.place),
            });
        }
        *merged
            .entry((b.place, b.poly.degree(), b.poly.clone(), b.n))
            .or_insert(0) += b.mult;
    }
    let blocks = merged
        .into_iter()
        .filter(|(_, mult)| *mult > 0)
        .map(|((place, _, poly, n), mult)| Block { place, poly, n, mult })
        .collect();
    Ok(ContractionSpec {
        blocks,
        torsion: spec.torsion.clone(),
    })
}

/// Equality of canonical forms.
pub fn spec_iso_test(s1: &ContractionSpec, s2: &ContractionSpec) -> Result<bool> {
    Ok(canonicalize_spec(s1)? == canonicalize_spec(s2)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(place: &str, poly: &str, n: u32, mult: u64) -> Block {
        Block {
            place: place.parse().unwrap(),
            poly: RationalPoly::parse(poly).unwrap(),
            n,
            mult,
        }
    }

    #[test]
    fn permutations_agree() {
        let a = ContractionSpec {
            blocks: vec![block("inf", "x - 1/2", 1, 1), block("p:2", "x^2 - 2", 1, 2)],
            torsion: NuTable::new(),
        };
        let b = ContractionSpec {
            blocks: vec![
                block("p:2", "x^2 - 2", 1, 1),
                block("inf", "x - 1/2", 1, 1),
                block("p:2", "x^2 - 2", 1, 1),
                block("inf", "x - 1/3", 1, 0),
            ],
            torsion: NuTable::new(),
        };
        assert!(spec_iso_test(&a, &b).unwrap());
        let c = ContractionSpec {
            blocks: vec![block("inf", "x - 1/2", 2, 1), block("p:2", "x^2 - 2", 1, 2)],
            torsion: NuTable::new(),
        };
        assert!(!spec_iso_test(&a, &c).unwrap());
    }

    #[test]
    fn rejects_non_contractive() {
        let s = ContractionSpec {
            blocks: vec![block("inf", "x - 2", 1, 1)],
            torsion: NuTable::new(),
        };
        assert!(matches!(
            canonicalize_spec(&s),
            Err(Error::NotContractive { test: "schur-cohn", .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"format":1,"blocks":[{"place":"p:3","poly":"x - 3","n":1,"mult":1},{"place":"inf","poly":"x^2 - 1/2*x + 1/8","n":1,"mult":1}],"torsion":[{"p":2,"n":1,"nu":2}]}"#;
        let s = ContractionSpec::from_json(json).unwrap();
        let canon = canonicalize_spec(&s).unwrap();
        let again = ContractionSpec::from_json(&canon.to_json()).unwrap();
        assert_eq!(canon, again);
        assert_eq!(canon.blocks[0].place, Place::Prime(3));
        assert!(ContractionSpec::from_json(r#"{"format":2}"#).is_err());
        assert!("p:4".parse::<Place>().is_err());
    }
}
