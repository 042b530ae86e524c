//! Text forms of cocycle descriptions.
//!
//! ```text
//! spec := "omega:" INT
//!       | "eta:" BITS ["..."]
//!       | "param:@" PATH | "param:" JSON
//!       | "cob:" INT ":" series ("," INT ":" series)*
//!       | "xform(" spec ";a=" series ";b=" series [";cob=" INT ":" series ("," ...)*] ")"
//! ```
//!
//! A trailing `...` on the bits marks the bits past the window as unknown
//! (without it they are zero). Parameter files are JSON:
//! `{"format":1,"window":[lo,hi],"tail":"zero"|"unknown","entries":[{"n":1,"a":"1*t^0"}]}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BitSeq, CocycleSpec, ParamSeq, QuadTerm, Tail};
use crate::error::{Error, Result};
use crate::series::{Modulus, TruncSeries};

pub const SPEC_GRAMMAR: &str = "spec := omega:<n> | eta:<bits>[...] | param:@<file> | param:<json>\n\
        | cob:<k>:<series>[,<k>:<series>...]\n\
        | xform(<spec>;a=<series>;b=<series>[;cob=<k>:<series>,...])";

#[derive(Serialize, Deserialize)]
struct ParamFile {
    format: u32,
    window: [i64; 2],
    #[serde(default = "default_tail")]
    tail: String,
    entries: Vec<ParamEntry>,
}

#[derive(Serialize, Deserialize)]
struct ParamEntry {
    n: i64,
    a: String,
}

fn default_tail() -> String {
    "zero".into()
}

/// Reads a parameter sequence from its JSON form.
pub fn parse_param_json(json: &str, ring: Modulus) -> Result<ParamSeq> {
    let file: ParamFile = serde_json::from_str(json)
        .map_err(|e| Error::MalformedInput(format!("parameter JSON: {e}")))?;
    if file.format != 1 {
        return Err(Error::MalformedInput(format!(
            "unsupported parameter format {}",
            file.format
        )));
    }
    let tail = match file.tail.as_str() {
        "zero" => Tail::Zero,
        "unknown" => Tail::Unknown,
        other => return Err(Error::MalformedInput(format!("unknown tail `{other}`"))),
    };
    let mut entries = BTreeMap::new();
    for e in file.entries {
        let a = TruncSeries::parse(&e.a, ring)?;
        if entries.insert(e.n, a).is_some() {
            return Err(Error::MalformedInput(format!("entry a_{} given twice", e.n)));
        }
    }
    ParamSeq::new(ring, file.window[0], file.window[1], entries, tail)
}

/// Writes a parameter sequence as compact JSON.
pub fn param_to_json(a: &ParamSeq) -> String {
    let (lo, hi) = a.window();
    let file = ParamFile {
        format: 1,
        window: [lo, hi],
        tail: match a.tail() {
            Tail::Zero => "zero",
            Tail::Unknown => "unknown",
        }
        .into(),
        entries: a
            .entries()
            .map(|(n, s)| ParamEntry {
                n,
                a: s.to_string(),
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("parameter JSON serializes")
}

/// Splits on `sep` outside of any brackets.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut in_str = false;
    let mut last = 0;
    for (i, c) in text.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '(' | '[' | '{' if !in_str => depth += 1,
            ')' | ']' | '}' if !in_str => depth -= 1,
            c if c == sep && depth == 0 && !in_str => {
                parts.push(&text[last..i]);
                last = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[last..]);
    parts
}

fn parse_quad_terms(text: &str, ring: Modulus) -> Result<Vec<QuadTerm>> {
    split_top(text, ',')
        .into_iter()
        .map(|item| {
            let (k, series) = item.split_once(':').ok_or_else(|| {
                Error::MalformedInput(format!("coboundary term `{item}` is not <k>:<series>"))
            })?;
            let k = k
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::MalformedInput(format!("bad index `{k}`")))?;
            Ok(QuadTerm::new(k, TruncSeries::parse(series, ring)?))
        })
        .collect()
}

/// Parses a cocycle description. `param:@file` reads the file from disk.
pub fn parse_spec(text: &str, ring: Modulus) -> Result<CocycleSpec> {
    let text = text.trim();
    if let Some(n) = text.strip_prefix("omega:") {
        let n = n
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::MalformedInput(format!("bad omega index `{n}`")))?;
        return Ok(CocycleSpec::BasisOmega(n));
    }
    if let Some(bits) = text.strip_prefix("eta:") {
        let bits = bits.trim();
        return Ok(CocycleSpec::Eta(match bits.strip_suffix("...") {
            Some(b) => BitSeq::new(BitSeq::from_bits(b)?.bits().to_vec(), Tail::Unknown)?,
            None => BitSeq::from_bits(bits)?,
        }));
    }
    if let Some(rest) = text.strip_prefix("param:") {
        let json = match rest.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path.trim())
                .map_err(|e| Error::MalformedInput(format!("cannot read {path}: {e}")))?,
            None => rest.to_string(),
        };
        return Ok(CocycleSpec::ParamOmega(parse_param_json(&json, ring)?));
    }
    if let Some(terms) = text.strip_prefix("cob:") {
        return Ok(CocycleSpec::QuadCoboundary(parse_quad_terms(terms, ring)?));
    }
    if let Some(inner) = text.strip_prefix("xform(").and_then(|r| r.strip_suffix(')')) {
        let parts = split_top(inner, ';');
        if parts.len() < 3 || parts.len() > 4 {
            return Err(Error::MalformedInput(format!(
                "xform needs <spec>;a=..;b=..[;cob=..], got `{text}`"
            )));
        }
        let base = parse_spec(parts[0], ring)?;
        let field = |part: &str, key: &str| -> Result<String> {
            part.trim()
                .strip_prefix(key)
                .map(str::to_string)
                .ok_or_else(|| Error::MalformedInput(format!("expected `{key}` in `{part}`")))
        };
        let a = TruncSeries::parse(&field(parts[1], "a=")?, ring)?;
        let b = TruncSeries::parse(&field(parts[2], "b=")?, ring)?;
        let cob = match parts.get(3) {
            Some(p) => parse_quad_terms(&field(p, "cob=")?, ring)?,
            None => Vec::new(),
        };
        return CocycleSpec::transformed(base, a, b, cob);
    }
    Err(Error::MalformedInput(format!(
        "unrecognized cocycle `{text}`; expected\n{SPEC_GRAMMAR}"
    )))
}

fn write_terms(terms: &[QuadTerm], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, QuadTerm { k, u }) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{k}:{u}")?;
    }
    Ok(())
}

pub(super) fn write_spec(spec: &CocycleSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match spec {
        CocycleSpec::BasisOmega(n) => write!(f, "omega:{n}"),
        CocycleSpec::Eta(s) => {
            write!(f, "eta:{}", s.to_bit_string())?;
            if s.tail() == Tail::Unknown {
                f.write_str("...")?;
            }
            Ok(())
        }
        CocycleSpec::ParamOmega(a) => write!(f, "param:{}", param_to_json(a)),
        CocycleSpec::QuadCoboundary(terms) => {
            f.write_str("cob:")?;
            write_terms(terms, f)
        }
        CocycleSpec::Transformed { base, a, b, cob } => {
            write!(f, "xform({base};a={a};b={b}")?;
            if !cob.is_empty() {
                f.write_str(";cob=")?;
                write_terms(cob, f)?;
            }
            f.write_str(")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let r = Modulus::new(3, 2).unwrap();
        for text in [
            "omega:-3",
            "eta:101",
            "eta:0011...",
            "cob:0:1*t^0,2:4*t^-1 + 1*t^3",
            "xform(eta:101;a=1*t^0 + 1*t^1;b=2*t^2)",
            "xform(xform(omega:1;a=1*t^0;b=1*t^0;cob=1:3*t^0);a=1*t^0;b=4*t^0)",
            r#"param:{"format":1,"window":[-2,3],"tail":"unknown","entries":[{"n":-1,"a":"1*t^2"},{"n":3,"a":"2*t^0 + O(t^4)"}]}"#,
        ] {
            let spec = parse_spec(text, r).unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn lenient_input() {
        let r = Modulus::new(2, 1).unwrap();
        let spec = parse_spec("xform(eta:101;a=t^0 + t^1;b=t^0 + t^1)", r).unwrap();
        assert_eq!(spec.to_string(), "xform(eta:101;a=1*t^0 + 1*t^1;b=1*t^0 + 1*t^1)");
        assert!(parse_spec("zeta:1", r).is_err());
        assert!(parse_spec("xform(eta:1;a=t^0)", r).is_err());
        assert!(parse_spec("xform(eta:1;a=0;b=t^0)", r).is_err());
        assert!(parse_spec("cob:1", r).is_err());
    }
}
