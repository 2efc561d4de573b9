//! The `ominus` command-line tool: argument parsing and dispatch. Every
//! command writes one JSON document; exit status is 0 on success, 1 when a
//! verification fails and 2 on usage or domain errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::codes::{delsarte_report, dual_codewords, full_weight_distribution_small, weight_distribution_prefix};
use crate::error::{Error, Result};
use crate::field::{parse_hex, FieldCtx};
use crate::groups::enumerate::double_coset_elements;
use crate::groups::sums::{trace_counts, trace_distribution_closed};
use crate::groups::{DoubleCosetSpec, Family, Sign};
use crate::kloosterman::{kloosterman_sum, power_moment_oracle};
use crate::moments::{corollary2_specialize, recursive_moments, RecursionReport, Variant};
use crate::report::{self, envelope, field_params, num, nums, spec_params};
use crate::verify::verify_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ominus",
    version,
    about = "Kloosterman power moments from codes over O^-(2n, 2^r)"
)]
pub struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field parameters: modulus and a_param.
    Field(FieldArgs),
    /// Kloosterman sums and their power moments by direct summation.
    Kloos(KloosArgs),
    /// A double coset: size, constants and trace distribution.
    Enumerate(EnumerateArgs),
    /// Weight distribution of the code attached to a double coset.
    Weights(WeightsArgs),
    /// Power moments from the recursive formulas.
    Moments(MomentsArgs),
    /// Runs every verification suite.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field exponent: q = 2^r.
    #[arg(long)]
    pub r: u32,
    /// Irreducible modulus as a hex bitmask (default: smallest one).
    #[arg(long)]
    pub modulus: Option<String>,
    /// Element of trace one used in the quadratic form (default: smallest).
    #[arg(long)]
    pub a_param: Option<String>,
}

impl FieldArgs {
    pub fn build(&self) -> Result<FieldCtx> {
        let modulus = self.modulus.as_deref().map(parse_hex).transpose()?;
        let ctx = FieldCtx::new(self.r, modulus)?;
        match &self.a_param {
            Some(a) => {
                let a = ctx.element(parse_hex(a)?)?;
                ctx.with_a_param(a)
            }
            None => Ok(ctx),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Double coset family, 1 to 4.
    #[arg(long)]
    pub family: u8,
    /// plus or minus.
    #[arg(long)]
    pub sign: Sign,
    #[arg(long)]
    pub n: u32,
}

impl SpecArgs {
    pub fn build(&self) -> Result<DoubleCosetSpec> {
        DoubleCosetSpec::new(Family::new(self.family)?, self.sign, self.n, self.field.build()?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct KloosArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Dimension of the Kloosterman sum.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Single argument a (hex); all nonzero a when omitted.
    #[arg(long)]
    pub a: Option<String>,
    /// Highest power moment reported.
    #[arg(long, default_value_t = 4)]
    pub hmax: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Enumerated,
    Closed,
}

#[derive(Debug, Clone, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = Mode::Enumerated)]
    pub mode: Mode,
    /// Write the coset elements here, one `row;row;...` record per line.
    #[arg(long)]
    pub records: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WeightsArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Last weight of the prefix.
    #[arg(long, default_value_t = 8)]
    pub jmax: u32,
    /// Also give the full distribution by MacWilliams (short codes only).
    #[arg(long)]
    pub full: bool,
    /// Also list the dual words c(a).
    #[arg(long)]
    pub codewords: bool,
    /// Also check that the dual is exactly {c(a)}.
    #[arg(long)]
    pub delsarte: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, required_unless_present = "variant")]
    pub family: Option<u8>,
    #[arg(long, required_unless_present = "variant")]
    pub sign: Option<Sign>,
    #[arg(long, required_unless_present = "variant")]
    pub n: Option<u32>,
    /// Use the specialised recursion a (n = 2) or b (n = 1) instead.
    #[arg(long, conflicts_with_all = ["family", "sign", "n"])]
    pub variant: Option<Variant>,
    #[arg(long, default_value_t = 8)]
    pub hmax: u32,
    /// Fail unless every value is confirmed by direct summation.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 4)]
    pub max_r: u32,
    /// Replace the modulus for one r, as `R=HEX`; may repeat.
    #[arg(long = "modulus", value_parser = parse_override)]
    pub moduli: Vec<(u32, u32)>,
}

fn parse_override(s: &str) -> std::result::Result<(u32, u32), String> {
    let (r, m) = s.split_once('=').ok_or_else(|| format!("expected R=HEX, got {s:?}"))?;
    let r = r.parse().map_err(|e| format!("{r:?}: {e}"))?;
    let m = parse_hex(m).map_err(|e| e.to_string())?;
    Ok((r, m))
}

/// A finished command: the JSON document and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub document: Value,
}

impl Outcome {
    fn new(ok: bool, document: Value) -> Self {
        Outcome {
            code: if ok { EXIT_OK } else { EXIT_MISMATCH },
            document,
        }
    }
}

fn field_command(args: &FieldArgs) -> Result<Outcome> {
    let ctx = args.build()?;
    let mut body = field_params(&ctx);
    body.insert("trace_one_count".into(), num(ctx.trace_one_elements().len()));
    Ok(Outcome::new(true, envelope("field", body)))
}

fn kloos_command(args: &KloosArgs) -> Result<Outcome> {
    let ctx = args.field.build()?;
    let mut body = field_params(&ctx);
    body.insert("m".into(), num(args.m));
    let points: Vec<_> = match &args.a {
        Some(a) => vec![ctx.element(parse_hex(a)?)?],
        None => ctx.nonzero().collect(),
    };
    let values = points
        .iter()
        .map(|&a| Ok((format!("{a}"), num(kloosterman_sum(&ctx, args.m, a)?))))
        .collect::<Result<Map<_, _>>>()?;
    body.insert("values".into(), Value::Object(values));
    if args.a.is_none() {
        let moments = power_moment_oracle(&ctx, args.m, args.hmax)?;
        body.insert("moments".into(), nums(&moments.values));
    }
    Ok(Outcome::new(true, envelope("kloos", body)))
}

fn enumerate_command(args: &EnumerateArgs) -> Result<Outcome> {
    let spec = args.spec.build()?;
    let constants = spec.constants();
    let closed = trace_distribution_closed(&spec)?;
    let mut body = spec_params(&spec);
    body.insert("mode".into(), Value::String(format!("{:?}", args.mode).to_lowercase()));
    body.insert("A".into(), num(&constants.a));
    body.insert("B".into(), num(&constants.b));
    body.insert("size".into(), num(&constants.n));
    let mut ok = true;
    match args.mode {
        Mode::Closed => {
            body.insert("trace_distribution".into(), report::trace_distribution(&closed));
        }
        Mode::Enumerated => {
            let elements = double_coset_elements(&spec)?;
            let counted = trace_counts(spec.ctx(), &elements);
            let agree = counted == closed && BigInt::from(elements.len()) == constants.n;
            ok &= agree;
            body.insert("enumerated_size".into(), num(elements.len()));
            body.insert("trace_distribution".into(), report::trace_distribution(&counted));
            body.insert("agree".into(), Value::Bool(agree));
            if let Some(path) = &args.records {
                let mut text = String::with_capacity(elements.len() * 8);
                for m in &elements {
                    text.push_str(&m.to_record());
                    text.push('\n');
                }
                std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            }
        }
    }
    Ok(Outcome::new(ok, envelope("enumerate", body)))
}

fn weights_command(args: &WeightsArgs) -> Result<Outcome> {
    let spec = args.spec.build()?;
    let mut body = spec_params(&spec);
    let prefix = weight_distribution_prefix(&spec, args.jmax)?;
    body.insert("length".into(), num(&spec.constants().n));
    body.insert("j_max".into(), num(args.jmax));
    body.insert("prefix".into(), report::weight_prefix(&prefix));
    let mut ok = true;
    if args.full {
        let full = full_weight_distribution_small(&spec)?;
        let overlap = full.iter().zip(&prefix.counts).all(|(a, b)| a == b);
        ok &= overlap;
        body.insert("full".into(), nums(&full));
        body.insert("full_matches_prefix".into(), Value::Bool(overlap));
    }
    if args.codewords {
        let words = dual_codewords(&spec)?;
        let list = spec
            .ctx()
            .elements()
            .map(|a| report::codeword(a, &words[a.value() as usize]))
            .collect();
        body.insert("dual_codewords".into(), Value::Array(list));
    }
    if args.delsarte {
        let rep = delsarte_report(&spec)?;
        ok &= rep.passed();
        body.insert("delsarte".into(), report::delsarte(&rep));
    }
    Ok(Outcome::new(ok, envelope("weights", body)))
}

fn moments_report(args: &MomentsArgs) -> Result<RecursionReport> {
    if let Some(v) = args.variant {
        return corollary2_specialize(&args.field.build()?, v, args.hmax);
    }
    let (Some(i), Some(sign), Some(n)) = (args.family, args.sign, args.n) else {
        return Err(Error::InvalidArgument("--family, --sign and --n are required".into()));
    };
    let spec = DoubleCosetSpec::new(Family::new(i)?, sign, n, args.field.build()?)?;
    recursive_moments(&spec, args.hmax)
}

fn moments_command(args: &MomentsArgs) -> Result<Outcome> {
    let rep = moments_report(args)?;
    let mismatch = rep
        .series
        .iter()
        .any(|s| (1..=rep.h_max).any(|h| s.agree(h) == Some(false)));
    let ok = !mismatch && (!args.verify || rep.all_agree());
    let mut body = report::recursion_report(&rep);
    if let Some(v) = args.variant {
        body.insert("variant".into(), Value::String(format!("{v:?}").to_lowercase()));
    }
    body.insert("verified".into(), Value::Bool(rep.all_agree()));
    Ok(Outcome::new(ok, envelope("moments", body)))
}

fn verify_command(args: &VerifyArgs) -> Result<Outcome> {
    let overrides: BTreeMap<u32, u32> = args.moduli.iter().copied().collect();
    let summary = verify_all(args.max_r, &overrides)?;
    Ok(Outcome::new(
        summary.passed(),
        envelope("verify-all", summary.to_json()),
    ))
}

fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Field(a) => field_command(a),
        Command::Kloos(a) => kloos_command(a),
        Command::Enumerate(a) => enumerate_command(a),
        Command::Weights(a) => weights_command(a),
        Command::Moments(a) => moments_command(a),
        Command::VerifyAll(a) => verify_command(a),
    }
}

/// Exit status for a library error: internal inconsistencies count as
/// verification failures, everything else as usage errors.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// Runs a parsed command on a pool of `workers` threads.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Error::InvalidArgument("--workers must be positive".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    pool.install(|| dispatch(&cli.command))
}

/// Parses `args`, runs, writes the document, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = report::render(&outcome.document);
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("ominus: cannot write output: {e}");
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("ominus: {e}");
            error_code(&e)
        }
    }
}
