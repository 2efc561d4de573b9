//! Exponential sums and trace counts over the double cosets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::enumerate::double_coset_elements;
use super::matrix::MatrixGF;
use super::spec::DoubleCosetSpec;
use crate::combinat::{big, exact_div, pow};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::kloosterman::{kloosterman, kloosterman_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Enumerated,
    ClosedForm,
}

/// Counts `N_DC(beta)` of double-coset elements with matrix trace `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceDistribution {
    counts: BTreeMap<FieldElement, BigInt>,
}

impl TraceDistribution {
    pub fn from_counts(ctx: &FieldCtx, counts: BTreeMap<FieldElement, BigInt>) -> Self {
        let mut full: BTreeMap<FieldElement, BigInt> = ctx.elements().map(|b| (b, BigInt::zero())).collect();
        full.extend(counts);
        TraceDistribution { counts: full }
    }

    pub fn count(&self, beta: FieldElement) -> &BigInt {
        &self.counts[&beta]
    }

    pub fn iter(&self) -> impl Iterator<Item = (FieldElement, &BigInt)> {
        self.counts.iter().map(|(&b, c)| (b, c))
    }

    pub fn total(&self) -> BigInt {
        self.counts.values().sum()
    }

    /// `sum_beta N(beta) beta`, reduced in F_q (only parities matter).
    pub fn weighted_sum(&self, ctx: &FieldCtx) -> FieldElement {
        self.counts.iter().fold(
            FieldElement::ZERO,
            |acc, (&b, c)| {
                if c.bit(0) {
                    ctx.add(acc, b)
                } else {
                    acc
                }
            },
        )
    }

    /// Elements `beta` with `N(beta) > 0`.
    pub fn support(&self) -> Vec<FieldElement> {
        self.counts
            .iter()
            .filter(|(_, c)| c.is_positive())
            .map(|(&b, _)| b)
            .collect()
    }
}

fn nonzero(a: FieldElement) -> Result<()> {
    if a.is_zero() {
        Err(Error::ZeroArgument("exponential sum parameter a"))
    } else {
        Ok(())
    }
}

/// `sum_{w in DC} lambda(a Tr w)` from the closed forms: `+-A K(a)` for the
/// odd families, `-+A K(a)^2` for family 2 and `-+A (K(a)^2 + q^2 - q)` for
/// family 4.
pub fn exp_sum_closed(spec: &DoubleCosetSpec, a: FieldElement) -> Result<BigInt> {
    nonzero(a)?;
    let ctx = spec.ctx();
    let q = spec.q() as i64;
    let k = kloosterman(ctx, a);
    let s = spec.sign().unit();
    let a_const = spec.constants().a;
    let factor = match spec.family().index() {
        1 | 3 => s * k,
        2 => -s * k * k,
        _ => -s * (k * k + q * q - q),
    };
    Ok(a_const * factor)
}

/// `sum_{w in DC} lambda(a Tr w)` evaluated over the enumerated coset.
pub fn exp_sum_enumerated(spec: &DoubleCosetSpec, a: FieldElement) -> Result<BigInt> {
    nonzero(a)?;
    let elements = double_coset_elements(spec)?;
    Ok(exp_sum_over(spec.ctx(), &elements, a))
}

pub fn exp_sum_over(ctx: &FieldCtx, elements: &[MatrixGF], a: FieldElement) -> BigInt {
    big(elements
        .iter()
        .map(|w| ctx.lambda(ctx.mul(a, w.trace(ctx))))
        .sum::<i64>())
}

pub fn exp_sum_dc(spec: &DoubleCosetSpec, a: FieldElement, mode: Mode) -> Result<BigInt> {
    match mode {
        Mode::Enumerated => exp_sum_enumerated(spec, a),
        Mode::ClosedForm => exp_sum_closed(spec, a),
    }
}

/// Trace counts of an explicit element list.
pub fn trace_counts(ctx: &FieldCtx, elements: &[MatrixGF]) -> TraceDistribution {
    let mut counts: BTreeMap<FieldElement, BigInt> = BTreeMap::new();
    for w in elements {
        *counts.entry(w.trace(ctx)).or_default() += 1;
    }
    TraceDistribution::from_counts(ctx, counts)
}

/// The class value `c(beta)` in `N(beta) = (A B +- A c(beta)) / q` for the
/// odd families, or `-+` for the even ones.
fn class_value(spec: &DoubleCosetSpec, ktab: &[i64], beta: FieldElement) -> Result<i64> {
    let ctx = spec.ctx();
    let q = spec.q() as i64;
    let k_inv = |b: FieldElement| -> Result<i64> { Ok(ktab[ctx.inv(b)?.value() as usize]) };
    Ok(match (spec.family().index(), beta.is_zero()) {
        (1 | 3, true) => 1,
        (1 | 3, false) => {
            if ctx.trace(ctx.inv(beta)?) == 0 {
                q + 1
            } else {
                1 - q
            }
        }
        (2, true) => q * q - q - 1,
        (2, false) => q * k_inv(beta)? - q - 1,
        (_, true) => q * q * q - q * q - 1,
        (_, false) => q * k_inv(beta)? - q * q - 1,
    })
}

/// Closed-form trace distribution for any valid spec.
pub fn trace_distribution_closed(spec: &DoubleCosetSpec) -> Result<TraceDistribution> {
    let ctx = spec.ctx();
    let c = spec.constants();
    let q = big(spec.q());
    let s = if spec.family().is_odd() {
        spec.sign().unit()
    } else {
        -spec.sign().unit()
    };
    let ktab = if spec.family().is_odd() {
        Vec::new()
    } else {
        kloosterman_table(ctx)
    };
    let mut counts = BTreeMap::new();
    for beta in ctx.elements() {
        let num = &c.n + &c.a * (s * class_value(spec, &ktab, beta)?);
        let count = exact_div(&num, &q)
            .ok_or_else(|| Error::Inconsistent(format!("{}: N({beta}) = {num}/q is not integral", spec.label())))?;
        if count.is_negative() {
            return Err(Error::Inconsistent(format!(
                "{}: negative trace count at {beta}",
                spec.label()
            )));
        }
        counts.insert(beta, count);
    }
    Ok(TraceDistribution::from_counts(ctx, counts))
}

pub fn trace_distribution(spec: &DoubleCosetSpec, mode: Mode) -> Result<TraceDistribution> {
    match mode {
        Mode::Enumerated => Ok(trace_counts(spec.ctx(), &double_coset_elements(spec)?)),
        Mode::ClosedForm => trace_distribution_closed(spec),
    }
}

/// Largest number of (B, h) pairs visited by the direct b_r sum.
pub const BR_BUDGET: u128 = 10_000_000;

/// `b_r = sum_{B in Omega_r} sum_{h in F_q^{r x 2}} lambda(c Tr(delta_a th B h))`
/// over nonsingular symmetric r x r `B`, for the character `x -> lambda(c x)`.
pub fn b_r_sum_enumerated(ctx: &FieldCtx, r: u32, twist: FieldElement) -> Result<BigInt> {
    nonzero(twist)?;
    if !(1..=3).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "b_r enumeration needs r in 1..=3, got {r}"
        )));
    }
    let q = ctx.q() as u128;
    let needed = q.checked_pow(r * (r + 1) / 2 + 2 * r).unwrap_or(u128::MAX);
    if needed > BR_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "b_r enumeration",
            needed,
            limit: BR_BUDGET,
        });
    }
    let ru = r as usize;
    let slots: Vec<(usize, usize)> = (0..ru).flat_map(|i| (i..ru).map(move |j| (i, j))).collect();
    let delta = super::enumerate::delta_a(ctx);
    let hs = super::enumerate::all_matrices(ctx, ru, 2);
    let mut total = 0i64;
    for free in super::enumerate::all_matrices(ctx, 1, slots.len()) {
        let mut b = MatrixGF::zeros(ru, ru);
        for (k, &(i, j)) in slots.iter().enumerate() {
            b.set(i, j, free.get(0, k));
            b.set(j, i, free.get(0, k));
        }
        if !b.is_invertible(ctx) {
            continue;
        }
        for h in &hs {
            let inner = delta.mul(ctx, &h.transpose().mul(ctx, &b).mul(ctx, h));
            total += ctx.lambda(ctx.mul(twist, inner.trace(ctx)));
        }
    }
    Ok(big(total))
}

/// `q^(r(r+6)/4) prod_{j<=r/2} (q^(2j-1) - 1)` for even r and
/// `-q^((r^2+4r-1)/4) prod_{j<=(r+1)/2} (q^(2j-1) - 1)` for odd r.
pub fn b_r_closed(q: u64, r: u32) -> BigInt {
    if r.is_multiple_of(2) {
        let mut acc = pow(q, r * (r + 6) / 4);
        for j in 1..=r / 2 {
            acc *= pow(q, 2 * j - 1) - 1;
        }
        acc
    } else {
        let mut acc = -pow(q, (r * r + 4 * r - 1) / 4);
        for j in 1..=r.div_ceil(2) {
            acc *= pow(q, 2 * j - 1) - 1;
        }
        acc
    }
}

/// Direct b_r sum (canonical character) checked against the closed form.
pub fn b_r_sum(ctx: &FieldCtx, r: u32) -> Result<BigInt> {
    let direct = b_r_sum_enumerated(ctx, r, FieldElement::ONE)?;
    let closed = b_r_closed(ctx.q() as u64, r);
    if direct != closed {
        return Err(Error::Inconsistent(format!(
            "b_{r} over GF({}): direct {direct} != closed {closed}",
            ctx.q()
        )));
    }
    Ok(direct)
}
