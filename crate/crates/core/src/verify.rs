//! Every identity the library relies on, re-checked at desk scale for each
//! field size up to a bound. Failures are recorded, never raised.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::codes::{
    codeword_weight_closed, delsarte_report, dual_codewords, full_weight_distribution_small,
    weight_distribution_prefix, DELSARTE_MAX_LENGTH, MACWILLIAMS_MAX_LENGTH,
};
use crate::error::{Error, Result};
use crate::field::{is_irreducible, make_field, FieldCtx, FieldElement};
use crate::groups::enumerate::{double_coset_elements, enumeration_feasible};
use crate::groups::sums::{b_r_sum, exp_sum_closed, exp_sum_over, trace_counts, trace_distribution_closed};
use crate::groups::{DoubleCosetSpec, Family, Sign};
use crate::kloosterman::{
    artin_schreier_sums, carlitz_k2, kgl_closed, kgl_recursive, kloosterman_sum, power_moment_oracle, predicted_range,
    range_spectrum, twisted_sum_check,
};
use crate::moments::{corollary2_specialize, pless_check, recursive_moments, Variant};
use crate::report::num;

/// Largest `max_r` accepted by [`verify_all`].
pub const MAX_VERIFY_R: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One suite at one field size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: &'static str,
    /// The identity or property under test.
    pub identity: &'static str,
    pub r: u32,
    pub status: Status,
    pub checks: u64,
    pub failures: Vec<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub max_r: u32,
    pub suites: Vec<SuiteResult>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.status != Status::Fail)
    }

    pub fn to_json(&self) -> Map<String, Value> {
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                json!({
                    "suite": s.suite,
                    "identity": s.identity,
                    "r": num(s.r),
                    "status": s.status.name(),
                    "checks": num(s.checks),
                    "failures": s.failures,
                    "note": s.note,
                })
            })
            .collect();
        let count = |st: Status| num(self.suites.iter().filter(|s| s.status == st).count());
        let mut m = Map::new();
        m.insert("max_r".into(), num(self.max_r));
        m.insert("passed".into(), Value::Bool(self.passed()));
        m.insert("pass".into(), count(Status::Pass));
        m.insert("fail".into(), count(Status::Fail));
        m.insert("skipped".into(), count(Status::Skipped));
        m.insert("suites".into(), Value::Array(suites));
        m
    }
}

#[derive(Default)]
struct Tally {
    checks: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: impl FnOnce() -> String) {
        self.checks += 1;
        if got != want {
            self.failures
                .push(format!("{}: got {got:?}, expected {want:?}", what()));
        }
    }

    fn error(&mut self, context: impl std::fmt::Display, e: Error) {
        self.checks += 1;
        self.failures.push(format!("{context}: {e}"));
    }
}

enum Outcome {
    Ran(Tally),
    Skipped(String),
}

fn finish(suite: &'static str, identity: &'static str, r: u32, outcome: Outcome) -> SuiteResult {
    match outcome {
        Outcome::Ran(t) => SuiteResult {
            suite,
            identity,
            r,
            status: if t.failures.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            checks: t.checks,
            failures: t.failures,
            note: None,
        },
        Outcome::Skipped(why) => SuiteResult {
            suite,
            identity,
            r,
            status: Status::Skipped,
            checks: 0,
            failures: Vec::new(),
            note: Some(why),
        },
    }
}

fn field_suite(ctx: &FieldCtx) -> Tally {
    let mut t = Tally::default();
    t.check(is_irreducible(ctx.modulus()), || {
        format!("modulus {:#x} is reducible", ctx.modulus())
    });
    let all: Vec<FieldElement> = ctx.elements().collect();
    // every pair up to q = 256, a fixed stride beyond
    let stride = (all.len() / 256).max(1);
    for &x in all.iter().step_by(stride) {
        for &y in all.iter().step_by(stride) {
            t.check(ctx.mul(x, y) == ctx.mul_reference(x, y), || format!("{x} * {y}"));
        }
        if !x.is_zero() {
            t.check(ctx.inv(x).is_ok_and(|i| ctx.mul(x, i) == FieldElement::ONE), || {
                format!("inverse of {x}")
            });
        }
    }
    for &x in &all {
        t.check(ctx.trace_by_frobenius(x).value() == ctx.trace(x) as u32, || {
            format!("trace of {x}")
        });
    }
    t.eq(ctx.trace(ctx.a_param()), 1, || "trace of a_param".into());
    t.eq(ctx.trace_one_elements().len() as u32, ctx.q() / 2, || {
        "trace-one count".into()
    });
    t
}

fn moment_identity_suite(ctx: &FieldCtx) -> Tally {
    let mut t = Tally::default();
    let q = ctx.q() as i64;
    match power_moment_oracle(ctx, 1, 2) {
        Ok(s) => {
            t.eq(s.get(1).clone(), BigInt::from(1), || "first moment".into());
            t.eq(s.get(2).clone(), BigInt::from(q * q - q - 1), || "second moment".into());
        }
        Err(e) => t.error("moment oracle", e),
    }
    t
}

fn carlitz_suite(ctx: &FieldCtx) -> Tally {
    let mut t = Tally::default();
    for a in ctx.nonzero() {
        match (kloosterman_sum(ctx, 2, a), carlitz_k2(ctx, a)) {
            (Ok(direct), Ok(closed)) => t.eq(direct, closed, || format!("K_2 at {a}")),
            (Err(e), _) | (_, Err(e)) => t.error(a, e),
        }
    }
    t
}

fn character_sum_suite(ctx: &FieldCtx) -> Tally {
    let mut t = Tally::default();
    for beta in ctx.elements() {
        for m in 1..=2 {
            match twisted_sum_check(ctx, m, beta) {
                Ok((lhs, rhs)) => t.eq(lhs, rhs, || format!("twisted sum m = {m} at {beta}")),
                Err(e) => t.error(beta, e),
            }
        }
        if beta.is_zero() {
            continue;
        }
        match (artin_schreier_sums(ctx, beta), kloosterman_sum(ctx, 1, beta)) {
            (Ok((s0, s1)), Ok(k)) => {
                t.eq(s0, k - 1, || format!("S0 at {beta}"));
                t.eq(s1, -k - 1, || format!("S1 at {beta}"));
            }
            (Err(e), _) | (_, Err(e)) => t.error(beta, e),
        }
    }
    t
}

fn kgl_suite(ctx: &FieldCtx) -> Tally {
    let mut t = Tally::default();
    for a in ctx.nonzero() {
        for k in 1..=6 {
            match (kgl_closed(ctx, k, a), kgl_recursive(ctx, k, a)) {
                (Ok(c), Ok(r)) => t.eq(c, r, || format!("K_GL({k}) at {a}")),
                (Err(e), _) | (_, Err(e)) => t.error(a, e),
            }
        }
    }
    t
}

fn spectrum_suite(ctx: &FieldCtx) -> Tally {
    let mut t = Tally::default();
    match range_spectrum(ctx) {
        Ok(s) => t.eq(s, predicted_range(ctx.q()), || "value set".into()),
        Err(e) => t.error("spectrum", e),
    }
    t
}

fn b_r_suite(ctx: &FieldCtx) -> Tally {
    let mut t = Tally::default();
    for r in 1..=2 {
        if let Err(e) = b_r_sum(ctx, r) {
            t.error(format!("b_{r}"), e);
        } else {
            t.checks += 1;
        }
    }
    t
}

/// Every valid spec whose double coset can be enumerated at this field.
pub fn feasible_specs(ctx: &FieldCtx) -> Vec<DoubleCosetSpec> {
    let mut out = Vec::new();
    for n in 1..=3 {
        if !enumeration_feasible(ctx, n) {
            continue;
        }
        for family in Family::ALL {
            for sign in [Sign::Plus, Sign::Minus] {
                if let Ok(s) = DoubleCosetSpec::new(family, sign, n, ctx.clone()) {
                    out.push(s);
                }
            }
        }
    }
    out
}

fn coset_suite(specs: &[DoubleCosetSpec]) -> Tally {
    let mut t = Tally::default();
    for s in specs {
        let ctx = s.ctx();
        let elements = match double_coset_elements(s) {
            Ok(e) => e,
            Err(e) => {
                t.error(s.label(), e);
                continue;
            }
        };
        t.eq(BigInt::from(elements.len()), s.constants().n, || {
            format!("{} size", s.label())
        });
        for a in ctx.nonzero() {
            match exp_sum_closed(s, a) {
                Ok(c) => t.eq(exp_sum_over(ctx, &elements, a), c, || {
                    format!("{} exp sum at {a}", s.label())
                }),
                Err(e) => t.error(s.label(), e),
            }
        }
        match trace_distribution_closed(s) {
            Ok(d) => t.check(trace_counts(ctx, &elements) == d, || {
                format!("{} trace counts", s.label())
            }),
            Err(e) => t.error(s.label(), e),
        }
    }
    t
}

fn code_suite(specs: &[DoubleCosetSpec]) -> Tally {
    let mut t = Tally::default();
    for s in specs {
        let words = match dual_codewords(s) {
            Ok(w) => w,
            Err(e) => {
                t.error(s.label(), e);
                continue;
            }
        };
        for a in s.ctx().nonzero() {
            match codeword_weight_closed(s, a) {
                Ok(w) => t.eq(BigInt::from(words[a.value() as usize].weight()), w, || {
                    format!("{} weight at {a}", s.label())
                }),
                Err(e) => t.error(s.label(), e),
            }
        }
        let length = s.constants().n;
        if length <= BigInt::from(DELSARTE_MAX_LENGTH) {
            match delsarte_report(s) {
                Ok(rep) => {
                    t.check(rep.passed(), || format!("{} dual structure {rep:?}", s.label()));
                    if length <= BigInt::from(MACWILLIAMS_MAX_LENGTH) {
                        macwilliams_checks(&mut t, s, rep.rank);
                    }
                }
                Err(e) => t.error(s.label(), e),
            }
        }
    }
    t
}

fn macwilliams_checks(t: &mut Tally, s: &DoubleCosetSpec, rank: usize) {
    let full = match full_weight_distribution_small(s) {
        Ok(f) => f,
        Err(e) => return t.error(s.label(), e),
    };
    let n = full.len() - 1;
    t.check((0..=n).all(|j| full[j] == full[n - j]), || {
        format!("{} symmetry", s.label())
    });
    t.eq(full.iter().sum::<BigInt>(), BigInt::from(1) << (n - rank), || {
        format!("{} code size", s.label())
    });
    match weight_distribution_prefix(s, n as u32) {
        Ok(p) => t.check(p.counts == full, || format!("{} prefix vs MacWilliams", s.label())),
        Err(Error::Domain(_)) => {}
        Err(e) => t.error(s.label(), e),
    }
}

fn pless_suite(specs: &[DoubleCosetSpec]) -> Tally {
    let mut t = Tally::default();
    for s in specs {
        for h in 0..=10 {
            match pless_check(s, h) {
                Ok((lhs, rhs)) => t.eq(lhs, rhs, || format!("{} h = {h}", s.label())),
                Err(Error::Domain(_)) => break,
                Err(e) => t.error(s.label(), e),
            }
        }
    }
    t
}

const SMALLEST_N: [(u8, Sign, u32); 8] = [
    (1, Sign::Plus, 2),
    (1, Sign::Minus, 1),
    (2, Sign::Plus, 2),
    (2, Sign::Minus, 3),
    (3, Sign::Plus, 2),
    (3, Sign::Minus, 3),
    (4, Sign::Plus, 4),
    (4, Sign::Minus, 3),
];

/// The eight recursions at their smallest `n`, compared with direct moments;
/// returns the recursion outputs for the invariance suite.
fn recursion_suite(ctx: &FieldCtx, h_max: u32) -> (Tally, Vec<Vec<BigInt>>) {
    let mut t = Tally::default();
    let mut outputs = Vec::new();
    for (i, sign, n) in SMALLEST_N {
        let spec = match DoubleCosetSpec::new(Family::new(i).expect("1..=4"), sign, n, ctx.clone()) {
            Ok(s) => s,
            Err(e) => {
                t.error(format!("family {i}"), e);
                continue;
            }
        };
        match recursive_moments(&spec, h_max) {
            Ok(rep) => {
                t.check(rep.all_agree(), || {
                    format!("{} recursion vs direct moments", spec.label())
                });
                outputs.extend(rep.series.into_iter().map(|s| s.recursion));
            }
            Err(Error::Domain(_)) => {}
            Err(e) => t.error(spec.label(), e),
        }
    }
    for variant in [Variant::A, Variant::B] {
        match corollary2_specialize(ctx, variant, h_max) {
            Ok(rep) => t.check(rep.all_agree(), || format!("specialised recursion {variant:?}")),
            Err(e) => t.error(format!("{variant:?}"), e),
        }
    }
    (t, outputs)
}

/// The next irreducible modulus above the default one, if any.
fn alternative_modulus(ctx: &FieldCtx) -> Option<u32> {
    let top = 1u32 << (ctx.r() + 1);
    (ctx.modulus() + 1..top).find(|&m| is_irreducible(m))
}

fn invariance_suite(ctx: &FieldCtx, h_max: u32, reference: &[Vec<BigInt>]) -> Result<Tally> {
    let mut t = Tally::default();
    let alt_a = ctx.trace_one_elements()[1];
    let mut fields = vec![ctx.clone().with_a_param(alt_a)?];
    if let Some(m) = alternative_modulus(ctx) {
        let f = make_field(ctx.r(), Some(m))?;
        let a = f.trace_one_elements()[1];
        fields.push(f.clone());
        fields.push(f.with_a_param(a)?);
    }
    for f in &fields {
        let (inner, outputs) = recursion_suite(f, h_max);
        t.checks += inner.checks;
        t.failures.extend(inner.failures);
        t.check(outputs == reference, || {
            format!("outputs differ for modulus {:#x}, a_param {}", f.modulus(), f.a_param())
        });
    }
    Ok(t)
}

/// Runs every suite for `r = 1..=max_r`. `moduli` overrides the modulus
/// used for particular `r`; a reducible override fails the field suite
/// and skips the rest at that `r`.
pub fn verify_all(max_r: u32, moduli: &BTreeMap<u32, u32>) -> Result<VerifySummary> {
    if !(1..=MAX_VERIFY_R).contains(&max_r) {
        return Err(Error::InvalidArgument(format!(
            "max_r must be in 1..={MAX_VERIFY_R}, got {max_r}"
        )));
    }
    let mut suites = Vec::new();
    for r in 1..=max_r {
        let ctx = match make_field(r, moduli.get(&r).copied()) {
            Ok(c) => c,
            Err(e) => {
                let mut t = Tally::default();
                t.error(format!("GF(2^{r})"), e);
                suites.push(finish("field", "modulus irreducible, field axioms", r, Outcome::Ran(t)));
                continue;
            }
        };
        let small = |limit: u32, why: &str| {
            if r <= limit {
                None
            } else {
                Some(Outcome::Skipped(why.into()))
            }
        };
        suites.push(finish(
            "field",
            "modulus irreducible, field axioms",
            r,
            Outcome::Ran(field_suite(&ctx)),
        ));
        suites.push(finish(
            "moment identities",
            "MK^1 = 1 and MK^2 = q^2 - q - 1",
            r,
            Outcome::Ran(moment_identity_suite(&ctx)),
        ));
        suites.push(finish(
            "carlitz",
            "K_2 = K^2 - q by two-dimensional summation",
            r,
            small(6, "q > 64").unwrap_or_else(|| Outcome::Ran(carlitz_suite(&ctx))),
        ));
        suites.push(finish(
            "character sums",
            "twisted Kloosterman sums and Artin-Schreier sums",
            r,
            small(6, "q > 64").unwrap_or_else(|| Outcome::Ran(character_sum_suite(&ctx))),
        ));
        suites.push(finish(
            "K_GL",
            "closed form of the GL Kloosterman sums equals the recursion",
            r,
            small(4, "q > 16").unwrap_or_else(|| Outcome::Ran(kgl_suite(&ctx))),
        ));
        let spectrum = if r < 2 {
            Outcome::Skipped("value range needs r >= 2".into())
        } else {
            Outcome::Ran(spectrum_suite(&ctx))
        };
        suites.push(finish(
            "range",
            "Kloosterman values are the tau < 2 sqrt(q), tau = 3 mod 4",
            r,
            spectrum,
        ));
        suites.push(finish(
            "b_r",
            "symmetric-matrix Gauss sums b_1, b_2 equal their closed forms",
            r,
            small(2, "q > 4").unwrap_or_else(|| Outcome::Ran(b_r_suite(&ctx))),
        ));
        let specs = feasible_specs(&ctx);
        let none = || Outcome::Skipped("no double coset within the enumeration budget".into());
        let run = |f: fn(&[DoubleCosetSpec]) -> Tally| {
            if specs.is_empty() {
                none()
            } else {
                Outcome::Ran(f(&specs))
            }
        };
        suites.push(finish(
            "double cosets",
            "enumerated sizes, exponential sums and trace counts equal the closed forms",
            r,
            run(coset_suite),
        ));
        suites.push(finish(
            "codes",
            "dual weights, dual structure, MacWilliams symmetry and size",
            r,
            run(code_suite),
        ));
        suites.push(finish("pless", "Pless power moment identity", r, run(pless_suite)));
        let h_max = if r <= 5 { 8 } else { 4 };
        let (tally, reference) = recursion_suite(&ctx, h_max);
        suites.push(finish(
            "recursions",
            "recursive power moments equal direct summation",
            r,
            Outcome::Ran(tally),
        ));
        let invariance = if !(3..=5).contains(&r) {
            Outcome::Skipped("run for 8 <= q <= 32".into())
        } else {
            match invariance_suite(&ctx, h_max, &reference) {
                Ok(t) => Outcome::Ran(t),
                Err(e) => {
                    let mut t = Tally::default();
                    t.error("invariance", e);
                    Outcome::Ran(t)
                }
            }
        };
        suites.push(finish(
            "representation invariance",
            "recursion outputs do not depend on the modulus or a_param",
            r,
            invariance,
        ));
    }
    Ok(VerifySummary { max_r, suites })
}
