//! JSON shapes shared by the command-line tool and the C interface.
//!
//! Every number is written as a decimal string so that nothing is lost to
//! floating point; field elements and moduli use `0x`-prefixed hex.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::codes::{Codeword, DelsarteReport, WeightPrefix};
use crate::field::{FieldCtx, FieldElement};
use crate::groups::{DoubleCosetSpec, MatrixGF, TraceDistribution};
use crate::moments::RecursionReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn nums<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(xs.into_iter().map(num).collect())
}

pub fn hex(x: FieldElement) -> Value {
    Value::String(format!("{x}"))
}

/// `r`, `q`, modulus and `a_param` of a field.
pub fn field_params(ctx: &FieldCtx) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("r".into(), num(ctx.r()));
    m.insert("q".into(), num(ctx.q()));
    m.insert("modulus".into(), Value::String(format!("{:#x}", ctx.modulus())));
    m.insert("a_param".into(), hex(ctx.a_param()));
    m
}

/// Field parameters plus family, sign and `n`.
pub fn spec_params(spec: &DoubleCosetSpec) -> Map<String, Value> {
    let mut m = field_params(spec.ctx());
    m.insert("family".into(), num(spec.family()));
    m.insert("sign".into(), Value::String(spec.sign().name().into()));
    m.insert("n".into(), num(spec.n()));
    m
}

/// Adds the command name and library version to a document.
pub fn envelope(command: &str, mut body: Map<String, Value>) -> Value {
    body.insert("command".into(), Value::String(command.into()));
    body.insert("version".into(), Value::String(VERSION.into()));
    Value::Object(body)
}

/// `{ "0x0": "28", "0x1": "20", ... }`.
pub fn trace_distribution(dist: &TraceDistribution) -> Value {
    Value::Object(dist.iter().map(|(b, c)| (format!("{b}"), num(c))).collect())
}

pub fn matrix(m: &MatrixGF) -> Value {
    json!(m.to_hex_rows())
}

pub fn codeword(a: FieldElement, word: &Codeword) -> Value {
    json!({ "a": hex(a), "weight": num(word.weight()), "bits": word.to_hex() })
}

pub fn weight_prefix(prefix: &WeightPrefix) -> Value {
    nums(&prefix.counts)
}

pub fn delsarte(report: &DelsarteReport) -> Value {
    json!({
        "length": num(report.length),
        "rank": num(report.rank),
        "distinct_duals": num(report.distinct_duals),
        "kernel": report.kernel.iter().map(|&k| hex(k)).collect::<Vec<_>>(),
        "dual_matches": report.dual_matches,
        "kernel_as_expected": report.kernel_as_expected,
        "passed": report.passed(),
    })
}

/// `{family, sign, n, r, q, modulus, a_param, h: [{h, moment, recursion, oracle, agree}]}`;
/// `oracle` and `agree` are null where no brute-force value was computed.
pub fn recursion_report(report: &RecursionReport) -> Map<String, Value> {
    let mut m = spec_params(&report.spec);
    let rows: Vec<Value> = report
        .series
        .iter()
        .flat_map(|s| {
            (1..=report.h_max).map(move |h| {
                json!({
                    "h": num(h),
                    "moment": s.moment.name(),
                    "recursion": num(&s.recursion[h as usize]),
                    "oracle": s.oracle.as_ref().map(|o| num(&o[h as usize])),
                    "agree": s.agree(h),
                })
            })
        })
        .collect();
    m.insert("h_max".into(), num(report.h_max));
    m.insert("h".into(), Value::Array(rows));
    m.insert("agree".into(), Value::Bool(report.all_agree()));
    m
}

/// Pretty JSON with a trailing newline.
pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
