//! End-to-end acceptance run: one PASS/FAIL line per criterion, with the
//! wall-clock time and its limit. Exits non-zero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use ominus_core::codes::{
    codeword_weight_closed, delsarte_report, dual_codeword, dual_codewords, full_weight_distribution_small,
    weight_distribution_prefix, Codeword,
};
use ominus_core::groups::enumerate::{double_coset, enumerate_q_minus, enumerate_so2};
use ominus_core::groups::spec::{double_coset_size, ominus_order, parabolic_order, q_minus_order};
use ominus_core::groups::sums::{
    b_r_closed, b_r_sum_enumerated, exp_sum_closed, exp_sum_over, trace_counts, trace_distribution_closed,
};
use ominus_core::groups::{double_coset_elements, DoubleCosetSpec, Family, Sign};
use ominus_core::kloosterman::{
    artin_schreier_sums, kgl_closed, kgl_recursive, kloosterman_sum, power_moment_oracle, predicted_range,
    range_spectrum, twisted_sum_check,
};
use ominus_core::moments::{pless_check, pless_sum, recursive_moments, Moment};
use ominus_core::{make_field, FieldCtx, FieldElement};

type Outcome = Result<String, String>;

/// Recursion values per spec label, one vector per moment series.
type SeriesByLabel = Vec<(String, Vec<Vec<BigInt>>)>;

type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

/// `(n, r)` pairs enumerated exhaustively.
const GROUP_POINTS: [(u32, u32); 5] = [(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)];

fn field(r: u32) -> FieldCtx {
    make_field(r, None).expect("default field")
}

fn spec(ctx: &FieldCtx, i: u8, sign: Sign, n: u32) -> DoubleCosetSpec {
    DoubleCosetSpec::new(Family::new(i).unwrap(), sign, n, ctx.clone()).unwrap()
}

fn specs_at(ctx: &FieldCtx, n: u32) -> Vec<DoubleCosetSpec> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for sign in [Sign::Plus, Sign::Minus] {
            if let Ok(s) = DoubleCosetSpec::new(family, sign, n, ctx.clone()) {
                out.push(s);
            }
        }
    }
    out
}

fn group_specs() -> Vec<DoubleCosetSpec> {
    GROUP_POINTS.iter().flat_map(|&(n, r)| specs_at(&field(r), n)).collect()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn moment_identities() -> Outcome {
    for r in 1..=6 {
        let ctx = field(r);
        let q = ctx.q() as i64;
        let (mut m1, mut m2) = (0i64, 0i64);
        for a in ctx.nonzero() {
            let k = kloosterman_sum(&ctx, 1, a).map_err(|e| e.to_string())?;
            m1 += k;
            m2 += k * k;
        }
        ensure!(m1 == 1, "q = {q}: MK^1 = {m1}");
        ensure!(m2 == q * q - q - 1, "q = {q}: MK^2 = {m2}");
    }
    Ok("q = 2..64".into())
}

fn carlitz() -> Outcome {
    let mut checks = 0;
    for r in 1..=6 {
        let ctx = field(r);
        let q = ctx.q() as i64;
        for a in ctx.nonzero() {
            let k = kloosterman_sum(&ctx, 1, a).map_err(|e| e.to_string())?;
            let k2 = kloosterman_sum(&ctx, 2, a).map_err(|e| e.to_string())?;
            ensure!(k2 == k * k - q, "q = {q}, a = {a}: K2 = {k2}, K = {k}");
            checks += 1;
        }
    }
    Ok(format!("{checks} values of a"))
}

/// Every recursion point checked for one field: `(family, sign, n, h_max)`.
fn recursion_points(q: u32) -> Vec<(u8, Sign, u32, u32)> {
    let mut pts = vec![
        (1, Sign::Plus, 2, 8),
        (1, Sign::Minus, 1, 8),
        (1, Sign::Minus, 3, 8),
        (3, Sign::Minus, 3, 8),
    ];
    if q >= 8 {
        pts.push((3, Sign::Plus, 2, 8));
    }
    if (4..=16).contains(&q) {
        pts.extend([
            (2, Sign::Plus, 2, 5),
            (2, Sign::Minus, 3, 5),
            (4, Sign::Plus, 4, 5),
            (4, Sign::Minus, 3, 5),
        ]);
    }
    pts
}

/// Recursion output for every such point, checked against moments from
/// direct Kloosterman sums.
fn recursion_outputs(ctx: &FieldCtx) -> Result<SeriesByLabel, String> {
    let mut out = Vec::new();
    for (i, sign, n, h_max) in recursion_points(ctx.q()) {
        let s = spec(ctx, i, sign, n);
        let report = recursive_moments(&s, h_max).map_err(|e| format!("{}: {e}", s.label()))?;
        let expected: Vec<Moment> = if s.family().is_odd() {
            vec![Moment::Plain]
        } else {
            vec![Moment::TwoDimensional, Moment::EvenPower]
        };
        let got: Vec<Moment> = report.series.iter().map(|c| c.moment).collect();
        ensure!(got == expected, "{}: series {got:?}", s.label());
        let mk = power_moment_oracle(ctx, 1, 2 * h_max).map_err(|e| e.to_string())?;
        let mk2 = power_moment_oracle(ctx, 2, h_max).map_err(|e| e.to_string())?;
        let mut series = Vec::new();
        for c in &report.series {
            for h in 1..=h_max {
                let oracle = match c.moment {
                    Moment::Plain => mk.get(h),
                    Moment::TwoDimensional => mk2.get(h),
                    Moment::EvenPower => mk.get(2 * h),
                };
                ensure!(
                    &c.recursion[h as usize] == oracle,
                    "{} {} h = {h}: recursion {} != oracle {oracle}",
                    s.label(),
                    c.moment.name(),
                    c.recursion[h as usize]
                );
            }
            series.push(c.recursion[1..=h_max as usize].to_vec());
        }
        out.push((s.label(), series));
    }
    Ok(out)
}

fn recursions() -> Outcome {
    let mut points = 0;
    for r in 1..=5 {
        points += recursion_outputs(&field(r))?.len();
    }
    Ok(format!("{points} specs, q = 2..32"))
}

fn groups() -> Outcome {
    let mut cosets = 0;
    for (n, r) in GROUP_POINTS {
        let ctx = field(r);
        let q = ctx.q() as u64;
        let so2 = enumerate_so2(&ctx).len() as u64;
        ensure!(so2 == q + 1, "|SO-(2,{q})| = {so2}");
        let qm = enumerate_q_minus(&ctx, n).map_err(|e| e.to_string())?;
        ensure!(
            BigInt::from(qm.len()) == q_minus_order(n, q),
            "|Q-({}, {q})| = {}",
            2 * n,
            qm.len()
        );
        ensure!(
            BigInt::from(2 * qm.len()) == parabolic_order(n, q),
            "|P-| != 2|Q-| at n = {n}, q = {q}"
        );
        for s in specs_at(&ctx, n) {
            let size = BigInt::from(double_coset_elements(&s).map_err(|e| e.to_string())?.len());
            let c = s.constants();
            ensure!(
                size == &c.a * &c.b,
                "{}: |DC| = {size}, AB = {}",
                s.label(),
                &c.a * &c.b
            );
            let product = double_coset_size(n, s.sigma_index(), q);
            ensure!(size == product, "{}: |DC| = {size}, product = {product}", s.label());
            cosets += 1;
        }
        // Bruhat decomposition: the cosets are disjoint and cover the group
        let mut seen = HashSet::new();
        let mut total = 0usize;
        for rank in 0..n {
            for twisted in [false, true] {
                let dc = double_coset(&ctx, n, rank, twisted).map_err(|e| e.to_string())?;
                total += dc.len();
                seen.extend(dc);
            }
        }
        ensure!(total == seen.len(), "cosets overlap at n = {n}, q = {q}");
        ensure!(
            BigInt::from(total) == ominus_order(n, q),
            "|O-({}, {q})| = {total}",
            2 * n
        );
        if (n, q) == (2, 2) {
            ensure!(total == 120, "|O-(4,2)| = {total}");
        }
    }
    Ok(format!("{cosets} double cosets, |O-(4,2)| = 120"))
}

fn exp_sums() -> Outcome {
    let mut checks = 0;
    for s in group_specs() {
        let ctx = s.ctx();
        let elements = double_coset_elements(&s).map_err(|e| e.to_string())?;
        for a in ctx.nonzero() {
            let got = exp_sum_over(ctx, &elements, a);
            let closed = exp_sum_closed(&s, a).map_err(|e| e.to_string())?;
            ensure!(got == closed, "{} a = {a}: {got} != {closed}", s.label());
            checks += 1;
        }
    }
    let s = spec(&field(1), 3, Sign::Plus, 2);
    let printed = exp_sum_over(s.ctx(), &double_coset_elements(&s).unwrap(), FieldElement::ONE);
    ensure!(printed == BigInt::from(12), "DC_3^+(2,2) at a = 1: {printed}");
    Ok(format!("{checks} sums"))
}

fn counts(s: &DoubleCosetSpec) -> Result<Vec<(FieldElement, BigInt)>, String> {
    let elements = double_coset_elements(s).map_err(|e| e.to_string())?;
    Ok(trace_counts(s.ctx(), &elements)
        .iter()
        .map(|(b, c)| (b, c.clone()))
        .collect())
}

fn trace_distributions() -> Outcome {
    for s in group_specs() {
        let elements = double_coset_elements(&s).map_err(|e| e.to_string())?;
        let got = trace_counts(s.ctx(), &elements);
        let closed = trace_distribution_closed(&s).map_err(|e| e.to_string())?;
        ensure!(got == closed, "{}: {got:?} != {closed:?}", s.label());
    }
    let pairs = |v: &[(u32, u32)]| -> Vec<(FieldElement, BigInt)> {
        let ctx = field(1);
        v.iter()
            .map(|&(b, c)| (ctx.element(b).unwrap(), BigInt::from(c)))
            .collect()
    };
    let dc3 = counts(&spec(&field(1), 3, Sign::Plus, 2))?;
    ensure!(dc3 == pairs(&[(0, 12), (1, 0)]), "DC_3^+(2,2): {dc3:?}");
    let dc4 = counts(&spec(&field(1), 4, Sign::Minus, 3))?;
    ensure!(dc4 == pairs(&[(0, 576), (1, 0)]), "DC_4^-(3,2): {dc4:?}");
    for r in 1..=3 {
        let ctx = field(r);
        for (beta, c) in counts(&spec(&ctx, 1, Sign::Minus, 1))? {
            let want = if beta.is_zero() {
                1
            } else if ctx.trace(ctx.inv(beta).unwrap()) == 0 {
                0
            } else {
                2
            };
            ensure!(c == BigInt::from(want), "DC_1^-(1,{}) at {beta}: {c}", ctx.q());
        }
    }
    Ok("incl. {12, 0}, {576, 0} and SO-(2,q) counts".into())
}

/// Specs where the full MacWilliams transform is compared.
fn macwilliams_specs() -> Vec<DoubleCosetSpec> {
    let mut out: Vec<_> = (1..=3).map(|r| spec(&field(r), 1, Sign::Minus, 1)).collect();
    out.push(spec(&field(1), 1, Sign::Plus, 2));
    out.push(spec(&field(1), 3, Sign::Plus, 2));
    out
}

fn codes() -> Outcome {
    let mut degenerate = 0;
    for s in group_specs() {
        for a in s.ctx().nonzero() {
            let popcount = dual_codeword(&s, a).map_err(|e| e.to_string())?.weight();
            let closed = codeword_weight_closed(&s, a).map_err(|e| e.to_string())?;
            ensure!(
                closed == BigInt::from(popcount),
                "{} a = {a}: {closed} != {popcount}",
                s.label()
            );
        }
        let report = delsarte_report(&s).map_err(|e| format!("{}: {e}", s.label()))?;
        ensure!(report.passed(), "{}: {report:?}", s.label());
        let q = s.ctx().q() as usize;
        let expected = if s.has_degenerate_dual() { q / 2 } else { q };
        ensure!(
            report.distinct_duals == expected,
            "{}: {} distinct duals",
            s.label(),
            report.distinct_duals
        );
        degenerate += s.has_degenerate_dual() as usize;
    }
    ensure!(degenerate == 2, "{degenerate} degenerate kernels in range");
    for s in macwilliams_specs() {
        let full = full_weight_distribution_small(&s).map_err(|e| e.to_string())?;
        let n = full.len() - 1;
        let prefix = weight_distribution_prefix(&s, n as u32).map_err(|e| e.to_string())?;
        ensure!(
            prefix.counts == full,
            "{}: DP prefix differs from MacWilliams",
            s.label()
        );
        ensure!((0..=n).all(|j| full[j] == full[n - j]), "{}: not symmetric", s.label());
        let rank = delsarte_report(&s).map_err(|e| e.to_string())?.rank;
        let total: BigInt = full.iter().sum();
        ensure!(
            total == BigInt::from(1) << (n - rank),
            "{}: sum C_j = {total}",
            s.label()
        );
    }
    Ok("popcounts, Delsarte (2 degenerate), MacWilliams".into())
}

/// The Pless identity on the explicit dual: `sum_{v in D} w(v)^h` against
/// `|D| 2^-h Y_h` with `Y_h` from the weight prefix of `C(DC)`.
fn pless_on_explicit_dual(s: &DoubleCosetSpec, h: u32) -> Result<(BigInt, BigInt), String> {
    let words: BTreeSet<Codeword> = dual_codewords(s).map_err(|e| e.to_string())?.into_iter().collect();
    let lhs: BigInt = words.iter().map(|w| BigInt::from(w.weight()).pow(h)).sum();
    let prefix = weight_distribution_prefix(s, h).map_err(|e| e.to_string())?;
    let scaled = BigInt::from(words.len()) * pless_sum(&s.constants().n, &prefix.counts, h);
    let (rhs, rem) = scaled.div_rem(&(BigInt::from(1) << h));
    ensure!(rem == BigInt::from(0), "{} h = {h}: rhs not integral", s.label());
    Ok((lhs, rhs))
}

fn pless() -> Outcome {
    let mut checks = 0;
    for s in macwilliams_specs() {
        for h in 0..=10 {
            let (lhs, rhs) = pless_on_explicit_dual(&s, h)?;
            ensure!(lhs == rhs, "{} h = {h}: {lhs} != {rhs} on the explicit dual", s.label());
            // the library's closed-weight form is defined only for non-degenerate duals
            if !s.has_degenerate_dual() {
                let (lhs, rhs) = pless_check(&s, h).map_err(|e| format!("{}: {e}", s.label()))?;
                ensure!(lhs == rhs, "{} h = {h}: {lhs} != {rhs}", s.label());
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} identities"))
}

fn auxiliary() -> Outcome {
    let err = |e: ominus_core::Error| e.to_string();
    for r in 1..=4 {
        let ctx = field(r);
        for a in ctx.nonzero() {
            for t in 1..=6 {
                let (c, rec) = (
                    kgl_closed(&ctx, t, a).map_err(err)?,
                    kgl_recursive(&ctx, t, a).map_err(err)?,
                );
                ensure!(c == rec, "K_GL({t}) over GF({}) at {a}: {c} != {rec}", ctx.q());
            }
        }
    }
    for r in 1..=6 {
        let ctx = field(r);
        for beta in ctx.elements() {
            for m in 1..=2 {
                let (lhs, rhs) = twisted_sum_check(&ctx, m, beta).map_err(err)?;
                ensure!(
                    lhs == rhs,
                    "twisted sum m = {m}, q = {}, beta = {beta}: {lhs} != {rhs}",
                    ctx.q()
                );
            }
            if beta.is_zero() {
                continue;
            }
            let (s0, s1) = artin_schreier_sums(&ctx, beta).map_err(err)?;
            let k = kloosterman_sum(&ctx, 1, beta).map_err(err)?;
            ensure!(
                s0 == k - 1 && s1 == -k - 1,
                "q = {}, beta = {beta}: S0 = {s0}, S1 = {s1}, K = {k}",
                ctx.q()
            );
        }
    }
    for r in 1..=2 {
        let ctx = field(r);
        for br in 1..=2 {
            for twist in ctx.nonzero() {
                let direct = b_r_sum_enumerated(&ctx, br, twist).map_err(err)?;
                let closed = b_r_closed(ctx.q() as u64, br);
                ensure!(
                    direct == closed,
                    "b_{br} over GF({}), twist {twist}: {direct} != {closed}",
                    ctx.q()
                );
            }
        }
    }
    for r in 2..=8 {
        let ctx = field(r);
        let got = range_spectrum(&ctx).map_err(err)?;
        ensure!(
            got == predicted_range(ctx.q()),
            "value range at q = {}: {got:?}",
            ctx.q()
        );
    }
    Ok("K_GL, twisted, Artin-Schreier, b_r, value range".into())
}

fn representation_invariance() -> Outcome {
    let mut variants = 0;
    for (r, alt_modulus) in [(3, 0b1101), (4, 0b11001)] {
        let base = field(r);
        let reference = recursion_outputs(&base)?;
        let alt_field = FieldCtx::new(r, Some(alt_modulus)).map_err(|e| e.to_string())?;
        let mut fields = vec![alt_field.clone()];
        for ctx in [base, alt_field] {
            let a = *ctx
                .trace_one_elements()
                .iter()
                .rev()
                .find(|&&a| a != ctx.a_param())
                .unwrap();
            fields.push(ctx.with_a_param(a).map_err(|e| e.to_string())?);
        }
        for ctx in fields {
            let got = recursion_outputs(&ctx)?;
            ensure!(
                got == reference,
                "GF({}) with modulus {:#x}, a_param {} differs",
                ctx.q(),
                ctx.modulus(),
                ctx.a_param()
            );
            variants += 1;
        }
    }
    Ok(format!("{variants} alternative (modulus, a_param) pairs at q = 8, 16"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("moment oracle identities MK^1, MK^2", Some(5), moment_identities),
        ("Carlitz identity by 2-D summation", Some(30), carlitz),
        ("recursions equal brute-force moments", Some(120), recursions),
        ("group orders and double-coset sizes", Some(60), groups),
        ("double-coset exponential sums", None, exp_sums),
        ("trace distributions", None, trace_distributions),
        ("codes: weights, Delsarte, MacWilliams", None, codes),
        ("Pless power moment identity", None, pless),
        ("auxiliary identities", Some(120), auxiliary),
        ("representation invariance", None, representation_invariance),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let limit_text = limit.map_or(String::new(), |s| format!(" (limit {s}s)"));
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; too slow")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {:>7.2}s{limit_text}  {name}: {detail}",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
