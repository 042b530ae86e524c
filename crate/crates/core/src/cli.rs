//! The `contraction` command line. [`run`] returns the exit code and the
//! text that would be printed, so it can be driven from tests.
//!
//! Exit codes: 0 on success, 2 when a verification fails (witnesses are
//! printed in the series grammar), 1 on usage or input errors.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::classify::{
    canonicalize_spec, is_contractive, primary_decompose, test_name, ContractionSpec, NuTable,
    Place, RationalPoly, POLY_GRAMMAR,
};
use crate::cocycle::{
    self, antisymmetrize, b_map, check_cocycle_identity, check_equivariance, param_to_json,
    parse_spec, CocycleSpec, Report, SPEC_GRAMMAR,
};
use crate::error::Error;
use crate::extension::{center_test, guaranteed_probe, CenterVerdict, ExtElement, Extension};
use crate::fingerprint::{self, DeltaEntry, Status};
use crate::random;
use crate::section::{self, SectionContext, ShiftGroup};
use crate::selftest;
use crate::series::{Modulus, TruncSeries};
use crate::text::SERIES_GRAMMAR;

#[derive(Parser, Debug)]
#[command(name = "contraction", version, about = "Arithmetic for contraction groups over Z/p^m((t))")]
struct Cli {
    /// Residue characteristic p.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Coefficients live in Z/p^m.
    #[arg(long, global = true, default_value_t = 1)]
    m: u32,
    /// Truncate every series argument at O(t^PREC).
    #[arg(long, global = true, allow_hyphen_values = true)]
    prec: Option<i64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Series arithmetic.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Cocycle evaluation and verification.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Central extension algebra; elements are written `(<series> ; <series>)`.
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Recover the bit window of a transformed eta cocycle.
    Fingerprint(FingerprintArgs),
    /// Build an equivariant section by digit expansion.
    Section(SectionArgs),
    /// Classification data and contractivity tests.
    #[command(subcommand)]
    Classify(ClassifyCmd),
    /// Run the full property suite.
    Selftest,
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    Add { x: String, y: String },
    Neg { x: String },
    IntMul {
        #[arg(allow_hyphen_values = true)]
        k: i64,
        x: String,
    },
    Shift {
        x: String,
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
    Mul { x: String, y: String },
    Abs { x: String },
    Parse { x: String },
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Cocycle, e.g. `eta:101` or `xform(omega:1;a=t^0;b=t^0 + t^1)`.
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand, Debug)]
enum CocycleCmd {
    Eval {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
        y: String,
    },
    Antisym {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
        y: String,
    },
    /// Parameters a_m = ω(t^0, t^m) for m in LO..HI.
    Bmap {
        #[command(flatten)]
        spec: SpecArg,
        /// Window `LO..HI`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Cocycle identity and equivariance on seeded random inputs.
    Check {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ExtCmd {
    Mul {
        #[command(flatten)]
        spec: SpecArg,
        u: String,
        v: String,
    },
    Inv {
        #[command(flatten)]
        spec: SpecArg,
        u: String,
    },
    Comm {
        #[command(flatten)]
        spec: SpecArg,
        u: String,
        v: String,
    },
    Alpha {
        #[command(flatten)]
        spec: SpecArg,
        u: String,
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
    /// Center test; probes default to the guaranteed witness degree.
    Center {
        #[command(flatten)]
        spec: SpecArg,
        u: String,
        /// Comma-separated probe degrees.
        #[arg(long, allow_hyphen_values = true)]
        probes: Option<String>,
    },
}

#[derive(Args, Debug)]
struct FingerprintArgs {
    #[command(flatten)]
    spec: SpecArg,
    #[arg(long)]
    window: i64,
    /// Absolute precision cap for each probe value.
    #[arg(long, allow_hyphen_values = true)]
    budget: Option<i64>,
    /// Cross-check with random probes, `random:N`.
    #[arg(long)]
    probes: Option<String>,
}

#[derive(Args, Debug)]
struct SectionArgs {
    /// `modred:p,m,k` or `extproj:<spec>`.
    #[arg(long)]
    ctx: String,
    /// Element of H: a series, or `(a ; g)` for extproj (projected first).
    #[arg(long)]
    input: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    upto: i64,
    /// Also verify the section laws on this many seeded samples.
    #[arg(long)]
    verify: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum ClassifyCmd {
    /// Primary decomposition of a finite abelian group.
    Abelian {
        /// Comma-separated cyclic factor orders.
        #[arg(long, default_value = "")]
        orders: String,
    },
    /// Contractivity of a monic rational polynomial at a place.
    Poly {
        /// `inf` or `p:<prime>`.
        #[arg(long)]
        place: String,
        #[arg(long)]
        poly: String,
    },
    /// Canonical form of a contraction group description (JSON file).
    Spec {
        #[arg(long)]
        file: String,
    },
}

/// A failed command: exit code and message.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: 1,
            message: format!("error: {e}"),
        }
    }
}

type Outcome = std::result::Result<(i32, String), Failure>;

fn with_grammar<T>(r: crate::Result<T>, grammar: &str) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure {
        code: 1,
        message: format!("error: {e}\n\nexpected:\n{grammar}"),
    })
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: format!("error: {}", message.into()),
    }
}

struct Ctx {
    ring: Modulus,
    prec: Option<i64>,
    json: bool,
    seed: u64,
}

impl Ctx {
    fn series(&self, text: &str) -> std::result::Result<TruncSeries, Failure> {
        let s = with_grammar(TruncSeries::parse(text, self.ring), SERIES_GRAMMAR)?;
        Ok(match self.prec {
            Some(p) => s.truncate(p),
            None => s,
        })
    }

    fn spec(&self, arg: &SpecArg) -> std::result::Result<CocycleSpec, Failure> {
        with_grammar(parse_spec(&arg.spec, self.ring), SPEC_GRAMMAR)
    }

    fn element(&self, ext: &Arc<Extension>, text: &str) -> std::result::Result<ExtElement, Failure> {
        let u = with_grammar(
            ext.parse_element(text),
            &format!("element := \"(\" series \";\" series \")\"\n{SERIES_GRAMMAR}"),
        )?;
        Ok(match self.prec {
            Some(p) => ext.element(u.a().truncate(p), u.g().truncate(p))?,
            None => u,
        })
    }

    fn emit(&self, text: String, value: Value) -> String {
        if self.json {
            let mut v = value;
            if let Value::Object(map) = &mut v {
                map.insert("format".into(), json!(1));
            }
            v.to_string()
        } else {
            text
        }
    }

    fn series_out(&self, s: &TruncSeries) -> String {
        self.emit(s.to_string(), json!({ "result": s.to_string() }))
    }

    fn report_out(&self, r: &Report) -> (i32, String) {
        let code = if r.passed() { 0 } else { 2 };
        let mut text = format!(
            "{} checked={} failed={}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.checked,
            r.failed
        );
        for w in &r.witnesses {
            let _ = write!(
                text,
                "\nwitness inputs: {} | lhs: {} | rhs: {}",
                w.inputs.join(" | "),
                w.lhs,
                w.rhs
            );
        }
        (code, self.emit(text, serde_json::to_value(r).expect("report serializes")))
    }
}

/// Parses `LO..HI`.
fn parse_range(text: &str) -> std::result::Result<(i64, i64), Failure> {
    let bad = || usage(format!("window `{text}` is not LO..HI"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn parse_list(text: &str) -> std::result::Result<Vec<i64>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| usage(format!("`{s}` is not an integer"))))
        .collect()
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    match dispatch(cli) {
        Ok(out) => out,
        Err(f) => (f.code, f.message),
    }
}

fn dispatch(cli: Cli) -> Outcome {
    let ring = Modulus::new(cli.p, cli.m)?;
    let ctx = Ctx {
        ring,
        prec: cli.prec,
        json: cli.json,
        seed: cli.seed,
    };
    match cli.command {
        Command::Series(cmd) => series_cmd(&ctx, cmd),
        Command::Cocycle(cmd) => cocycle_cmd(&ctx, cmd),
        Command::Ext(cmd) => ext_cmd(&ctx, cmd),
        Command::Fingerprint(args) => fingerprint_cmd(&ctx, args),
        Command::Section(args) => section_cmd(&ctx, args),
        Command::Classify(cmd) => classify_cmd(&ctx, cmd),
        Command::Selftest => selftest_cmd(&ctx),
    }
}

fn series_cmd(ctx: &Ctx, cmd: SeriesCmd) -> Outcome {
    let out = match cmd {
        SeriesCmd::Add { x, y } => ctx.series(&x)?.add(&ctx.series(&y)?)?,
        SeriesCmd::Neg { x } => ctx.series(&x)?.neg(),
        SeriesCmd::IntMul { k, x } => ctx.series(&x)?.int_mul(k),
        SeriesCmd::Shift { x, k } => ctx.series(&x)?.shift(k),
        SeriesCmd::Mul { x, y } => ctx.series(&x)?.ring_mul(&ctx.series(&y)?)?,
        SeriesCmd::Parse { x } => ctx.series(&x)?,
        SeriesCmd::Abs { x } => {
            let a = ctx.series(&x)?.abs_val();
            let value = json!({
                "result": a.to_string(),
                "exact": a.is_exact(),
                "valuation_at_least": a.valuation_bound(),
            });
            return Ok((0, ctx.emit(a.to_string(), value)));
        }
    };
    Ok((0, ctx.series_out(&out)))
}

fn random_inputs(ctx: &Ctx, count: usize) -> Vec<(TruncSeries, TruncSeries, TruncSeries)> {
    let mut rng = random::rng(ctx.seed);
    let draw = |rng: &mut random::SeededRng| {
        use rand::Rng;
        let lo = rng.gen_range(-4..=2);
        let len = rng.gen_range(0..=6);
        random::series(rng, ctx.ring, lo, lo + len)
    };
    (0..count)
        .map(|_| (draw(&mut rng), draw(&mut rng), draw(&mut rng)))
        .collect()
}

fn cocycle_cmd(ctx: &Ctx, cmd: CocycleCmd) -> Outcome {
    match cmd {
        CocycleCmd::Eval { spec, x, y } => {
            let v = cocycle::eval(&ctx.spec(&spec)?, &ctx.series(&x)?, &ctx.series(&y)?)?;
            Ok((0, ctx.series_out(&v)))
        }
        CocycleCmd::Antisym { spec, x, y } => {
            let v = antisymmetrize(&ctx.spec(&spec)?, &ctx.series(&x)?, &ctx.series(&y)?)?;
            Ok((0, ctx.series_out(&v)))
        }
        CocycleCmd::Bmap { spec, window } => {
            let (lo, hi) = parse_range(&window)?;
            let a = b_map(&ctx.spec(&spec)?, ctx.ring, lo, hi)?;
            let json_text = param_to_json(&a);
            let text = (lo..=hi)
                .map(|m| format!("a_{m} = {}", a.get(m).expect("inside the window")))
                .collect::<Vec<_>>()
                .join("\n");
            let value: Value = serde_json::from_str(&json_text).expect("valid JSON");
            Ok((0, ctx.emit(text, value)))
        }
        CocycleCmd::Check { spec, samples } => {
            let spec = ctx.spec(&spec)?;
            let triples = random_inputs(ctx, samples);
            let pairs: Vec<_> = triples.iter().map(|(x, y, _)| (x.clone(), y.clone())).collect();
            let mut report = check_cocycle_identity(&spec, &triples);
            report.merge(check_equivariance(&spec, &pairs, -5..=5));
            Ok(ctx.report_out(&report))
        }
    }
}

fn ext_cmd(ctx: &Ctx, cmd: ExtCmd) -> Outcome {
    let spec = match &cmd {
        ExtCmd::Mul { spec, .. }
        | ExtCmd::Inv { spec, .. }
        | ExtCmd::Comm { spec, .. }
        | ExtCmd::Alpha { spec, .. }
        | ExtCmd::Center { spec, .. } => spec,
    };
    let ext = Extension::new(ctx.spec(spec)?, ctx.ring);
    let elem = |text: &str| ctx.element(&ext, text);
    let result = match &cmd {
        ExtCmd::Mul { u, v, .. } => elem(u)?.mul(&elem(v)?)?,
        ExtCmd::Inv { u, .. } => elem(u)?.inv()?,
        ExtCmd::Comm { u, v, .. } => elem(u)?.commutator(&elem(v)?)?,
        ExtCmd::Alpha { u, k, .. } => elem(u)?.alpha(*k),
        ExtCmd::Center { u, probes, .. } => {
            let u = elem(u)?;
            let probes = match probes {
                Some(list) => parse_list(list)?,
                None => guaranteed_probe(&u).into_iter().collect(),
            };
            // g = 0 commutes with everything, so no probe is needed.
            if probes.is_empty() && !u.g().is_exact_zero() {
                return Err(usage("no probe degrees; pass --probes"));
            }
            return Ok(match center_test(&u, &probes)? {
                CenterVerdict::Pass => (
                    0,
                    ctx.emit("PASS".into(), json!({ "verdict": "PASS", "probes": probes })),
                ),
                CenterVerdict::Fail { probe, witness } => {
                    let lhs = format!("δ({}, t^{probe})", u.g());
                    (
                        2,
                        ctx.emit(
                            format!("FAIL probe=t^{probe} witness: {lhs} = {witness}"),
                            json!({
                                "verdict": "FAIL",
                                "probe": probe,
                                "witness": { "inputs": [u.g().to_string(), format!("1*t^{probe}")],
                                             "lhs": witness.to_string(), "rhs": "0" },
                            }),
                        ),
                    )
                }
            });
        }
    };
    Ok((
        0,
        ctx.emit(
            result.to_string(),
            json!({ "a": result.a().to_string(), "g": result.g().to_string() }),
        ),
    ))
}

fn fingerprint_cmd(ctx: &Ctx, args: FingerprintArgs) -> Outcome {
    let spec = ctx.spec(&args.spec)?;
    let profile = fingerprint::delta_profile(&spec, ctx.ring, args.window, args.budget)?;
    let rec = fingerprint::recover_bits(&profile);
    let bits = rec.bits.as_ref().map(|b| b.to_bit_string());
    let status = match rec.status {
        Status::Ok => "OK".to_string(),
        Status::AbelianCandidate => "ABELIAN_CANDIDATE".to_string(),
        Status::InsufficientPrecision { m } => format!("INSUFFICIENT_PRECISION(m={m})"),
    };
    let mut code = match rec.status {
        Status::InsufficientPrecision { .. } => 2,
        _ => 0,
    };
    let mut text = format!(
        "c={}\nbits={}\nstatus={status}",
        rec.c.map_or("none".into(), |c| c.to_string()),
        bits.as_deref().unwrap_or("?")
    );
    for e in &profile.entries {
        match *e {
            DeltaEntry::Exact { m, v } => {
                let _ = write!(text, "\nm={m} v={v}");
            }
            DeltaEntry::Bound { m, bound } => {
                let _ = write!(text, "\nm={m} v>{bound}");
            }
        }
    }
    let mut value = json!({
        "c": rec.c,
        "bits": bits,
        "status": status,
        "profile": profile.entries,
    });
    if let Some(probes) = &args.probes {
        let n = probes
            .strip_prefix("random:")
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| usage(format!("--probes `{probes}` is not random:N")))?;
        let report =
            fingerprint::probe_check(&spec, ctx.ring, &rec, n, &mut random::rng(ctx.seed))?;
        let (probe_code, probe_text) = Ctx { json: false, ..*ctx }.report_out(&report);
        code = code.max(probe_code);
        let _ = write!(text, "\nprobes: {probe_text}");
        value["probes"] = serde_json::to_value(&report).expect("report serializes");
    }
    Ok((code, ctx.emit(text, value)))
}

fn run_section<G: ShiftGroup>(
    ctx: &Ctx,
    sctx: &SectionContext<G>,
    h: Option<TruncSeries>,
    args: &SectionArgs,
) -> Outcome {
    let mut code = 0;
    let mut lines = Vec::new();
    let mut value = json!({});
    if let Some(h) = h {
        let s = sctx.build_section(&h, args.upto)?;
        lines.push(s.value.to_string());
        lines.push(format!("agrees-through=t^{}", s.through));
        value["section"] = json!(s.value.to_string());
        value["agrees_through"] = json!(s.through);
    }
    if let Some(n) = args.verify {
        use rand::Rng;
        let mut rng = random::rng(ctx.seed);
        let samples: Vec<_> = (0..n)
            .map(|_| {
                let lo = rng.gen_range(-3..=6);
                let len = rng.gen_range(0..=20);
                random::series(&mut rng, sctx.h_ring(), lo, lo + len)
            })
            .collect();
        let report = sctx.verify_section(&samples, args.upto);
        let (c, t) = Ctx { json: false, ..*ctx }.report_out(&report);
        code = c;
        lines.push(t);
        value["verify"] = serde_json::to_value(&report).expect("report serializes");
    }
    if lines.is_empty() {
        return Err(usage("nothing to do; pass --input and/or --verify"));
    }
    Ok((code, ctx.emit(lines.join("\n"), value)))
}

fn section_cmd(ctx: &Ctx, args: SectionArgs) -> Outcome {
    if let Some(rest) = args.ctx.strip_prefix("modred:") {
        let parts: Vec<u64> = rest
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| usage(format!("`{rest}` is not p,m,k"))))
            .collect::<std::result::Result<_, _>>()?;
        let [p, m, k] = parts[..] else {
            return Err(usage(format!("`{rest}` is not p,m,k")));
        };
        let sctx = section::make_mod_reduction_ctx(p, m as u32, k as u32)?;
        let h = match &args.input {
            Some(text) => Some(with_grammar(
                TruncSeries::parse(text, sctx.h_ring()),
                SERIES_GRAMMAR,
            )?),
            None => None,
        };
        let h = h.map(|h| ctx.prec.map_or(h.clone(), |p| h.truncate(p)));
        return run_section(ctx, &sctx, h, &args);
    }
    if let Some(spec_text) = args.ctx.strip_prefix("extproj:") {
        let field = Modulus::prime_field(ctx.ring.p())?;
        let spec = with_grammar(parse_spec(spec_text, field), SPEC_GRAMMAR)?;
        let sctx = section::make_ext_projection_ctx(spec, ctx.ring.p())?;
        let h = match &args.input {
            Some(text) if text.trim_start().starts_with('(') => {
                let ext = Arc::clone(sctx.group().identity().extension());
                let field_ctx = Ctx { ring: field, ..*ctx };
                Some(sctx.project(&field_ctx.element(&ext, text)?)?)
            }
            Some(text) => {
                let field_ctx = Ctx { ring: field, ..*ctx };
                Some(field_ctx.series(text)?)
            }
            None => None,
        };
        return run_section(ctx, &sctx, h, &args);
    }
    Err(usage(format!(
        "unknown context `{}`; expected modred:p,m,k or extproj:<spec>",
        args.ctx
    )))
}

fn table_json(t: &NuTable) -> Value {
    json!({
        "table": t.entries(),
        "length": t.length(),
        "delta": t.delta().to_string(),
    })
}

fn classify_cmd(ctx: &Ctx, cmd: ClassifyCmd) -> Outcome {
    match cmd {
        ClassifyCmd::Abelian { orders } => {
            let orders: Vec<u64> = parse_list(&orders)?
                .into_iter()
                .map(|o| u64::try_from(o).map_err(|_| usage(format!("order {o} is negative"))))
                .collect::<std::result::Result<_, _>>()?;
            let t = primary_decompose(&orders)?;
            let text = format!("{t}\nlength={} delta={}", t.length(), t.delta());
            Ok((0, ctx.emit(text, table_json(&t))))
        }
        ClassifyCmd::Poly { place, poly } => {
            let place: Place = place.parse()?;
            let f = with_grammar(RationalPoly::parse(&poly), POLY_GRAMMAR)?;
            let contractive = is_contractive(place, &f);
            let test = test_name(place);
            Ok((
                0,
                ctx.emit(
                    format!("contractive={contractive} test={test}"),
                    json!({ "contractive": contractive, "test": test, "poly": f.to_string() }),
                ),
            ))
        }
        ClassifyCmd::Spec { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| usage(format!("cannot read {file}: {e}")))?;
            let spec = ContractionSpec::from_json(&text)?;
            let canon = canonicalize_spec(&spec)?;
            Ok((0, canon.to_json()))
        }
    }
}

fn selftest_cmd(ctx: &Ctx) -> Outcome {
    let outcomes = selftest::run_all(ctx.seed);
    let passed = outcomes.iter().all(|o| o.passed);
    let text = outcomes.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("\n");
    let value = json!({
        "passed": passed,
        "criteria": outcomes.iter().map(|o| json!({
            "id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail,
        })).collect::<Vec<_>>(),
    });
    Ok((if passed { 0 } else { 2 }, ctx.emit(text, value)))
}
