//! Recursive formulas for power moments of Kloosterman sums, obtained from
//! the Pless power moment identity applied to the codes `C(DC)`.
//!
//! For a code whose nonzero dual words have weights `w(a) = A (b + c X(a)) / 2`
//! with `c = +-1`, the identity gives, for every `h >= 1`,
//!
//! ```text
//! sum_{l=0}^{h} c^l binom(h, l) b^{h-l} M_l = q Y_h / A^h,
//! Y_h = sum_{j<=min(N,h)} (-1)^j C_j sum_{t=j}^{h} t! S(h,t) 2^{h-t} binom(N-j, t-j),
//! ```
//!
//! where `M_l = sum_{a != 0} X(a)^l`. Separating `l = h` yields `M_h` from
//! `M_0 = q - 1, ..., M_{h-1}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::codes::{codeword_weight_closed, constrained_counts, weight_distribution_prefix};
use crate::combinat::{big, binomial, exact_div, factorial, pow, stirling2_row};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::groups::{DoubleCosetSpec, Family, Sign};
use crate::kloosterman::power_moment_oracle;

pub use crate::combinat::stirling2;

/// Largest `h_max` accepted by the recursions.
pub const H_MAX_LIMIT: u32 = 32;

/// Which moment sequence a recursion produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Moment {
    /// `MK^h = sum_{a != 0} K(a)^h`.
    Plain,
    /// `MK_2^h = sum_{a != 0} K_2(a)^h`.
    TwoDimensional,
    /// `MK^{2h}`.
    EvenPower,
}

impl Moment {
    pub fn name(self) -> &'static str {
        match self {
            Moment::Plain => "MK^h",
            Moment::TwoDimensional => "MK2^h",
            Moment::EvenPower => "MK^2h",
        }
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One recursion's output next to the brute-force moments, `h = 0..=h_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesComparison {
    pub moment: Moment,
    pub recursion: Vec<BigInt>,
    pub oracle: Option<Vec<BigInt>>,
}

impl SeriesComparison {
    /// `None` when no oracle was available at this size.
    pub fn agree(&self, h: u32) -> Option<bool> {
        self.oracle
            .as_ref()
            .map(|o| o[h as usize] == self.recursion[h as usize])
    }

    pub fn all_agree(&self) -> bool {
        self.oracle.as_ref().is_some_and(|o| *o == self.recursion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionReport {
    pub spec: DoubleCosetSpec,
    pub h_max: u32,
    /// One entry for families 1 and 3, two (`MK2^h` then `MK^2h`) otherwise.
    pub series: Vec<SeriesComparison>,
}

impl RecursionReport {
    pub fn all_agree(&self) -> bool {
        self.series.iter().all(SeriesComparison::all_agree)
    }
}

/// Fails unless the spec lies where the recursions are known to hold.
pub fn check_recursion_domain(spec: &DoubleCosetSpec) -> Result<()> {
    let (n, q) = (spec.n(), spec.q());
    let violated = match (spec.family().index(), spec.sign()) {
        (3, Sign::Plus) if n == 2 && q < 8 => Some("family 3+ at n = 2 needs q >= 8"),
        (2 | 4, _) if q < 4 => Some("families 2 and 4 need q >= 4"),
        _ => None,
    };
    match violated {
        Some(why) => Err(Error::Domain(format!("{}: {why}", spec.label()))),
        None => Ok(()),
    }
}

fn check_h(h_max: u32) -> Result<()> {
    if h_max > H_MAX_LIMIT {
        return Err(Error::InvalidArgument(format!("h_max = {h_max} exceeds {H_MAX_LIMIT}")));
    }
    Ok(())
}

/// `Y_h` above for a code of length `n` with weight prefix `c` (`c.len() > h`).
pub fn pless_sum(n: &BigInt, c: &[BigInt], h: u32) -> BigInt {
    let stirling = stirling2_row(h);
    let jmax = if *n < big(h) {
        u32::try_from(n).expect("small length")
    } else {
        h
    };
    let mut total = BigInt::zero();
    for j in 0..=jmax {
        let cj = &c[j as usize];
        if cj.is_zero() {
            continue;
        }
        let rest = n - j;
        let mut inner = BigInt::zero();
        for t in j..=h {
            inner += factorial(t as u64) * &stirling[t as usize] * pow(2, h - t) * binomial(&rest, (t - j) as u64);
        }
        if j % 2 == 1 {
            total -= cj * inner;
        } else {
            total += cj * inner;
        }
    }
    total
}

/// Solves `sum_{l<=h} c^l binom(h,l) b^{h-l} M_l = rhs_h` for `M_1..M_{h_max}`.
fn solve(q: u64, c: i64, b: &BigInt, rhs: &[BigInt], label: &str) -> Vec<BigInt> {
    let mut m = vec![big(q - 1)];
    for (h, target) in rhs.iter().enumerate().skip(1) {
        let mut acc = target.clone();
        let mut sign = BigInt::one();
        for (l, ml) in m.iter().enumerate() {
            acc -= &sign * binomial(&big(h), l as u64) * b.pow((h - l) as u32) * ml;
            sign *= c;
        }
        // c^h = +-1 divides exactly
        debug_assert!(sign.abs().is_one(), "{label}");
        m.push(acc * sign);
    }
    m
}

/// `q Y_h / A^h` for `h = 0..=h_max` (entry 0 unused).
fn scaled_rhs(spec: &DoubleCosetSpec, prefix: &[BigInt], h_max: u32) -> Result<Vec<BigInt>> {
    let c = spec.constants();
    let q = big(spec.q());
    let mut out = vec![BigInt::zero()];
    for h in 1..=h_max {
        let num = &q * pless_sum(&c.n, prefix, h);
        let den = c.a.pow(h);
        out.push(
            exact_div(&num, &den)
                .ok_or_else(|| Error::Inconsistent(format!("{}: q Y_{h} not divisible by A^{h}", spec.label())))?,
        );
    }
    Ok(out)
}

fn oracle(ctx: &FieldCtx, moment: Moment, h_max: u32) -> Option<Vec<BigInt>> {
    match moment {
        Moment::Plain => power_moment_oracle(ctx, 1, h_max).ok().map(|s| s.values),
        Moment::TwoDimensional => power_moment_oracle(ctx, 2, h_max).ok().map(|s| s.values),
        Moment::EvenPower => power_moment_oracle(ctx, 1, 2 * h_max)
            .ok()
            .map(|s| s.values.into_iter().step_by(2).collect()),
    }
}

/// The `(moment, c, b)` triples of the recursions for a family: the dual
/// weights are `A (b + c X(a)) / 2` with `X = K`, `K_2` or `K^2`.
fn recursion_shapes(spec: &DoubleCosetSpec) -> Vec<(Moment, i64, BigInt)> {
    let s = spec.sign().unit();
    let q = big(spec.q());
    let b = spec.constants().b;
    match spec.family().index() {
        1 | 3 => vec![(Moment::Plain, -s, b)],
        2 => vec![(Moment::TwoDimensional, s, &b + s * &q), (Moment::EvenPower, s, b)],
        _ => vec![
            (Moment::TwoDimensional, s, &b + s * &q * &q),
            (Moment::EvenPower, s, &b + s * (&q * &q - &q)),
        ],
    }
}

fn report_from_prefix(spec: &DoubleCosetSpec, prefix: &[BigInt], h_max: u32) -> Result<RecursionReport> {
    let rhs = scaled_rhs(spec, prefix, h_max)?;
    let series = recursion_shapes(spec)
        .into_iter()
        .map(|(moment, c, b)| SeriesComparison {
            moment,
            recursion: solve(spec.q(), c, &b, &rhs, &spec.label()),
            oracle: oracle(spec.ctx(), moment, h_max),
        })
        .collect();
    Ok(RecursionReport {
        spec: spec.clone(),
        h_max,
        series,
    })
}

/// Power moments generated by the recursion of the spec's family, each
/// compared with direct summation.
pub fn recursive_moments(spec: &DoubleCosetSpec, h_max: u32) -> Result<RecursionReport> {
    check_h(h_max)?;
    check_recursion_domain(spec)?;
    let prefix = weight_distribution_prefix(spec, h_max)?;
    report_from_prefix(spec, &prefix.counts, h_max)
}

/// `(sum_a w(c(a))^h, sum_j (-1)^j C_j sum_t t! S(h,t) 2^{r-t} binom(N-j, N-t))`
/// over the `q` dual words, with `0^0 = 1` for `a = 0`.
pub fn pless_check(spec: &DoubleCosetSpec, h: u32) -> Result<(BigInt, BigInt)> {
    check_h(h)?;
    if spec.has_degenerate_dual() {
        return Err(Error::Domain(format!(
            "{}: the dual has q/2 words, so its dimension is not r",
            spec.label()
        )));
    }
    let ctx = spec.ctx();
    let prefix = weight_distribution_prefix(spec, h)?;
    let mut lhs = if h == 0 { BigInt::one() } else { BigInt::zero() };
    for a in ctx.nonzero() {
        lhs += codeword_weight_closed(spec, a)?.pow(h);
    }
    let scaled = big(spec.q()) * pless_sum(&spec.constants().n, &prefix.counts, h);
    let rhs = exact_div(&scaled, &pow(2, h))
        .ok_or_else(|| Error::Inconsistent(format!("{}: Pless sum not divisible by 2^{h}", spec.label())))?;
    Ok((lhs, rhs))
}

/// `2^{-h} A^h sum_l c^l binom(h,l) b^{h-l} M_l` with brute-force moments,
/// i.e. `sum_{a != 0} w(c(a))^h` expanded binomially. For families 2 and 4
/// both expansions are evaluated and must agree.
pub fn moment_lhs_expansion(spec: &DoubleCosetSpec, h: u32) -> Result<BigInt> {
    check_h(h)?;
    check_recursion_domain(spec)?;
    let a = spec.constants().a;
    let mut values = Vec::new();
    for (moment, c, b) in recursion_shapes(spec) {
        let m = oracle(spec.ctx(), moment, h).ok_or_else(|| Error::BudgetExceeded {
            what: "moment oracle",
            needed: spec.q() as u128,
            limit: 0,
        })?;
        let mut sum = BigInt::zero();
        let mut sign = BigInt::one();
        for (l, ml) in m.iter().enumerate() {
            sum += &sign * binomial(&big(h), l as u64) * b.pow(h - l as u32) * ml;
            sign *= c;
        }
        let value = exact_div(&(a.pow(h) * sum), &pow(2, h))
            .ok_or_else(|| Error::Inconsistent(format!("{}: odd expansion at h = {h}", spec.label())))?;
        values.push(value);
    }
    if values.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Inconsistent(format!(
            "{}: the two expansions differ at h = {h}",
            spec.label()
        )));
    }
    Ok(values.swap_remove(0))
}

/// The two specialisations of the family-1 recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `DC_1^+(2, q)`, length `q^4 (q^2 - 1)`.
    A,
    /// `DC_1^-(1, q) = Q^-(2, q)`, length `q + 1`.
    B,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Variant::A),
            "b" | "B" => Ok(Variant::B),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

/// The family-1 recursion at `n = 2` (variant a) or `n = 1` (variant b),
/// written out with explicit lengths, weights and class sizes:
///
/// * a: `MK^h = sum_{l<h} (-1)^{h+l+1} binom(h,l) (q^2+q)^{h-l} MK^l
///   + q^{1-3h} (q-1)^{-h} sum_j (-1)^{h+j} C_j ...`, classes
///   `q^2(q-1)(q^2+q+1)` at 0, `q^2(q+1)(q^2-1)` where `tr(1/beta) = 0`,
///   `q^2(q-1)(q^2+1)` where `tr(1/beta) = 1`;
/// * b: `MK^h = -sum_{l<h} binom(h,l) (q+1)^{h-l} MK^l + q sum_j (-1)^j C_j ...`,
///   classes 1 at 0 and 2 where `tr(1/beta) = 1`.
pub fn corollary2_specialize(ctx: &FieldCtx, variant: Variant, h_max: u32) -> Result<RecursionReport> {
    check_h(h_max)?;
    let q = ctx.q() as u64;
    let qb = big(q);
    let class = |beta: FieldElement| -> Result<u8> { Ok(ctx.trace(ctx.inv(beta)?)) };
    let (spec, length, classes) = match variant {
        Variant::A => {
            let q2 = &qb * &qb;
            let sizes: [BigInt; 3] = [
                &q2 * (&qb - 1) * (&q2 + &qb + 1),
                &q2 * (&qb + 1) * (&q2 - 1),
                &q2 * (&qb - 1) * (&q2 + 1),
            ];
            let mut classes = vec![(FieldElement::ZERO, sizes[0].clone())];
            for beta in ctx.nonzero() {
                classes.push((beta, sizes[1 + class(beta)? as usize].clone()));
            }
            let spec = DoubleCosetSpec::new(Family::ONE, Sign::Plus, 2, ctx.clone())?;
            (spec, pow(q, 4) * (&q2 - 1), classes)
        }
        Variant::B => {
            let mut classes = vec![(FieldElement::ZERO, BigInt::one())];
            for beta in ctx.nonzero() {
                if class(beta)? == 1 {
                    classes.push((beta, big(2)));
                }
            }
            let spec = DoubleCosetSpec::new(Family::ONE, Sign::Minus, 1, ctx.clone())?;
            (spec, big(q + 1), classes)
        }
    };
    let prefix = constrained_counts(ctx, &classes, h_max);
    let mut mk = vec![big(q - 1)];
    for h in 1..=h_max {
        let hb = big(h);
        let y = pless_sum(&length, &prefix, h);
        let value = match variant {
            Variant::A => {
                let base: BigInt = &qb * &qb + &qb;
                let mut acc = BigInt::zero();
                for (l, ml) in mk.iter().enumerate() {
                    let sign = if (h as usize + l + 1).is_multiple_of(2) { 1 } else { -1 };
                    acc += sign * binomial(&hb, l as u64) * base.pow(h - l as u32) * ml;
                }
                let tail = if h % 2 == 0 { y } else { -y };
                let den: BigInt = pow(q, 3 * h - 1) * (&qb - 1u32).pow(h);
                acc + exact_div(&tail, &den)
                    .ok_or_else(|| Error::Inconsistent(format!("variant a: tail not divisible at h = {h}")))?
            }
            Variant::B => {
                let base: BigInt = &qb + 1u32;
                let mut acc = BigInt::zero();
                for (l, ml) in mk.iter().enumerate() {
                    acc -= binomial(&hb, l as u64) * base.pow(h - l as u32) * ml;
                }
                acc + &qb * y
            }
        };
        mk.push(value);
    }
    Ok(RecursionReport {
        spec,
        h_max,
        series: vec![SeriesComparison {
            moment: Moment::Plain,
            recursion: mk,
            oracle: oracle(ctx, Moment::Plain, h_max),
        }],
    })
}
