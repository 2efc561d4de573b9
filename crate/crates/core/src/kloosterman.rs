//! Kloosterman-type character sums over GF(2^r), evaluated by direct
//! summation, together with the closed-form identities they satisfy.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::{big, pow};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Maximum number of terms a direct Kloosterman summation may visit.
pub const SUM_BUDGET: u128 = 100_000_000;

/// Exact power moments `MK_m^h = sum_{a != 0} K_m(a)^h` for `h = 0..=h_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSeries {
    pub m: u32,
    pub h_max: u32,
    pub values: Vec<BigInt>,
}

impl MomentSeries {
    pub fn get(&self, h: u32) -> &BigInt {
        &self.values[h as usize]
    }
}

fn nonzero(a: FieldElement, what: &'static str) -> Result<()> {
    if a.is_zero() {
        Err(Error::ZeroArgument(what))
    } else {
        Ok(())
    }
}

/// `K_m(lambda; a)` by summing over all of `(F_q^*)^m`.
pub fn kloosterman_sum(ctx: &FieldCtx, m: u32, a: FieldElement) -> Result<i64> {
    nonzero(a, "Kloosterman sum argument a")?;
    if m == 0 {
        return Err(Error::InvalidArgument("dimension m must be positive".into()));
    }
    let units = (ctx.q() - 1) as u128;
    let terms = units.checked_pow(m).unwrap_or(u128::MAX);
    if terms > SUM_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "direct Kloosterman summation (use carlitz_k2 for m = 2)",
            needed: terms,
            limit: SUM_BUDGET,
        });
    }
    if m == 1 {
        return Ok(kloosterman(ctx, a));
    }
    // odometer over (alpha_1, ..., alpha_m) in (F_q^*)^m
    let q = ctx.q() as u16;
    let mut digits = vec![1u16; m as usize];
    let mut acc = 0i64;
    loop {
        let mut sum = FieldElement::ZERO;
        let mut prod = FieldElement::ONE;
        for &d in &digits {
            let x = FieldElement(d);
            sum = ctx.add(sum, x);
            prod = ctx.mul(prod, x);
        }
        let arg = ctx.add(sum, ctx.mul(a, ctx.inv(prod)?));
        acc += ctx.lambda(arg);

        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(acc);
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 1;
            i += 1;
        }
    }
}

/// `K(lambda; a)` for `a != 0`; callers check `a`.
pub(crate) fn kloosterman(ctx: &FieldCtx, a: FieldElement) -> i64 {
    ctx.nonzero()
        .map(|x| {
            let xinv = ctx.inv(x).expect("nonzero");
            ctx.lambda(ctx.add(x, ctx.mul(a, xinv)))
        })
        .sum()
}

/// All values `K(lambda; a)`, indexed by the encoding of `a` (index 0 unused).
pub fn kloosterman_table(ctx: &FieldCtx) -> Vec<i64> {
    let mut table = vec![0i64; ctx.q() as usize];
    for a in ctx.nonzero() {
        table[a.value() as usize] = kloosterman(ctx, a);
    }
    table
}

/// `K_2(lambda; a)` through the Carlitz identity `K_2 = K^2 - q`.
pub fn carlitz_k2(ctx: &FieldCtx, a: FieldElement) -> Result<i64> {
    nonzero(a, "Kloosterman sum argument a")?;
    let k = kloosterman(ctx, a);
    Ok(k * k - ctx.q() as i64)
}

/// Power moments of `K_m` for `m` in {1, 2}; `m = 2` goes through Carlitz.
pub fn power_moment_oracle(ctx: &FieldCtx, m: u32, h_max: u32) -> Result<MomentSeries> {
    let values: Vec<i64> = match m {
        1 => ctx.nonzero().map(|a| kloosterman(ctx, a)).collect(),
        2 => ctx.nonzero().map(|a| carlitz_k2(ctx, a)).collect::<Result<_>>()?,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "moment oracle supports m in {{1, 2}}, got {m}"
            )))
        }
    };
    let mut powers: Vec<BigInt> = vec![BigInt::one(); values.len()];
    let mut series = Vec::with_capacity(h_max as usize + 1);
    for _ in 0..=h_max {
        series.push(powers.iter().sum());
        for (p, &k) in powers.iter_mut().zip(&values) {
            *p *= k;
        }
    }
    Ok(MomentSeries {
        m,
        h_max,
        values: series,
    })
}

/// `K_GL(t, q)(lambda; a)` from the three-term recursion in `t`, with
/// `K_GL(0) = 1` and `K_GL(1) = K(lambda; a)`.
pub fn kgl_recursive(ctx: &FieldCtx, t: u32, a: FieldElement) -> Result<BigInt> {
    nonzero(a, "K_GL argument a")?;
    let q = ctx.q() as u64;
    let k = big(kloosterman(ctx, a));
    let mut prev = BigInt::one();
    if t == 0 {
        return Ok(prev);
    }
    let mut cur = k.clone();
    for s in 2..=t {
        let next = pow(q, s - 1) * &cur * &k + pow(q, 2 * s - 2) * (pow(q, s - 1) - 1) * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `K_GL(t, q)(lambda; a)` from its explicit expansion in powers of
/// `K(lambda; a)`: a sum over `l` of `q^l K^(t+2-2l)` weighted by products of
/// `(q^(j_v - 2v) - 1)` over chains `2l-1 <= j_{l-1} <= ... <= j_1 <= t+1`.
pub fn kgl_closed(ctx: &FieldCtx, t: u32, a: FieldElement) -> Result<BigInt> {
    nonzero(a, "K_GL argument a")?;
    if t == 0 {
        return Err(Error::InvalidArgument("closed form needs t >= 1".into()));
    }
    let q = ctx.q() as u64;
    let k = big(kloosterman(ctx, a));
    // (t-2)(t+1)/2 + l >= 0 for every l >= 1
    let base_exp = (t as i64 - 2) * (t as i64 + 1) / 2;
    let mut total = BigInt::zero();
    for l in 1..=(t + 2) / 2 {
        let chains = chain_sum(q, l, t);
        let exp = (base_exp + l as i64) as u32;
        total += pow(q, exp) * num_traits::pow(k.clone(), (t + 2 - 2 * l) as usize) * chains;
    }
    Ok(total)
}

/// Sum over chains `2l-1 <= j_{l-1} <= ... <= j_1 <= t+1` of
/// `prod_{v=1}^{l-1} (q^(j_v - 2v) - 1)`; 1 when `l = 1`.
fn chain_sum(q: u64, l: u32, t: u32) -> BigInt {
    fn go(q: u64, v: u32, l: u32, upper: u32) -> BigInt {
        if v == l {
            return BigInt::one();
        }
        // every j_v is at least j_{l-1} >= 2l - 1
        let mut acc = BigInt::zero();
        for j in (2 * l - 1)..=upper {
            acc += (pow(q, j - 2 * v) - 1) * go(q, v + 1, l, j);
        }
        acc
    }
    go(q, 1, l, t + 1)
}

/// Both sides of `sum_{a != 0} lambda(-a beta) K_m(lambda; a)
/// = q K_{m-1}(lambda; 1/beta) + (-1)^(m+1)` (just `(-1)^(m+1)` at `beta = 0`),
/// where `K_0(lambda; x) = lambda(x)`.
pub fn twisted_sum_check(ctx: &FieldCtx, m: u32, beta: FieldElement) -> Result<(i64, i64)> {
    if !(1..=2).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "twisted sum check supports m in {{1, 2}}, got {m}"
        )));
    }
    let mut lhs = 0i64;
    for a in ctx.nonzero() {
        // -a beta = a beta in characteristic two
        lhs += ctx.lambda(ctx.mul(a, beta)) * kloosterman_sum(ctx, m, a)?;
    }
    let sign = if m % 2 == 1 { 1 } else { -1 };
    let rhs = if beta.is_zero() {
        sign
    } else {
        let binv = ctx.inv(beta)?;
        let lower = if m == 1 {
            ctx.lambda(binv)
        } else {
            kloosterman_sum(ctx, m - 1, binv)?
        };
        ctx.q() as i64 * lower + sign
    };
    Ok((lhs, rhs))
}

/// `(S0, S1)` with `S0 = sum_{alpha not in {0,1}} lambda(beta / (alpha^2 + alpha))`
/// and `S1 = sum_alpha lambda(beta / (alpha^2 + alpha + a_param))`.
pub fn artin_schreier_sums(ctx: &FieldCtx, beta: FieldElement) -> Result<(i64, i64)> {
    nonzero(beta, "Artin-Schreier sum argument beta")?;
    let b = ctx.a_param();
    let mut s0 = 0;
    let mut s1 = 0;
    for alpha in ctx.elements() {
        let t = ctx.add(ctx.square(alpha), alpha);
        if !t.is_zero() {
            s0 += ctx.lambda(ctx.div(beta, t)?);
        }
        s1 += ctx.lambda(ctx.div(beta, ctx.add(t, b))?);
    }
    Ok((s0, s1))
}

/// The set of values taken by `K(lambda; a)` over `a != 0`. Needs `r >= 2`.
pub fn range_spectrum(ctx: &FieldCtx) -> Result<BTreeSet<i64>> {
    if ctx.r() < 2 {
        return Err(Error::InvalidArgument("Kloosterman value range requires r >= 2".into()));
    }
    Ok(ctx.nonzero().map(|a| kloosterman(ctx, a)).collect())
}

/// `{ tau : |tau| < 2 sqrt(q), tau = -1 (mod 4) }`.
pub fn predicted_range(q: u32) -> BTreeSet<i64> {
    let q = q as i64;
    // |tau| < 2 sqrt(q)  <=>  tau^2 < 4q
    let bound = (0..).find(|&t: &i64| t * t >= 4 * q).unwrap();
    (-bound..=bound)
        .filter(|&t| t * t < 4 * q && t.rem_euclid(4) == 3)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn fe(v: u32) -> FieldElement {
        FieldElement(v as u16)
    }

    #[test]
    fn small_kloosterman_values() {
        let f2 = make_field(1, None).unwrap();
        assert_eq!(kloosterman_sum(&f2, 1, fe(1)).unwrap(), 1);
        let f4 = make_field(2, None).unwrap();
        assert_eq!(kloosterman_sum(&f4, 1, fe(1)).unwrap(), 3);
        assert_eq!(kloosterman_sum(&f4, 1, fe(2)).unwrap(), -1);
        assert_eq!(kloosterman_sum(&f4, 1, fe(3)).unwrap(), -1);
        assert_eq!(
            kloosterman_sum(&f4, 1, FieldElement::ZERO),
            Err(Error::ZeroArgument("Kloosterman sum argument a"))
        );
    }

    #[test]
    fn carlitz_examples() {
        let f4 = make_field(2, None).unwrap();
        assert_eq!(carlitz_k2(&f4, fe(1)).unwrap(), 5);
        assert_eq!(carlitz_k2(&f4, fe(2)).unwrap(), -3);
        assert_eq!(kloosterman_sum(&f4, 2, fe(2)).unwrap(), -3);
        let f2 = make_field(1, None).unwrap();
        assert_eq!(carlitz_k2(&f2, fe(1)).unwrap(), -1);
        assert_eq!(kloosterman_sum(&f2, 2, fe(1)).unwrap(), -1);
    }

    #[test]
    fn budget_is_enforced() {
        let f = make_field(10, None).unwrap();
        assert!(matches!(
            kloosterman_sum(&f, 3, fe(1)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn moment_examples() {
        let f4 = make_field(2, None).unwrap();
        let s = power_moment_oracle(&f4, 1, 2).unwrap();
        assert_eq!(s.values, vec![big(3), big(1), big(11)]);
        let f2 = make_field(1, None).unwrap();
        let s = power_moment_oracle(&f2, 1, 6).unwrap();
        assert!(s.values.iter().all(|v| *v == big(1)));
        assert!(power_moment_oracle(&f2, 3, 2).is_err());
    }

    #[test]
    fn kgl_examples() {
        let f2 = make_field(1, None).unwrap();
        let f4 = make_field(2, None).unwrap();
        assert_eq!(kgl_recursive(&f2, 0, fe(1)).unwrap(), big(1));
        assert_eq!(kgl_recursive(&f2, 2, fe(1)).unwrap(), big(6));
        assert_eq!(kgl_recursive(&f4, 2, fe(1)).unwrap(), big(84));
        assert_eq!(kgl_closed(&f2, 2, fe(1)).unwrap(), big(6));
        assert_eq!(kgl_closed(&f2, 3, fe(1)).unwrap(), big(72));
        assert_eq!(kgl_closed(&f4, 1, fe(2)).unwrap(), big(-1));
        assert_eq!(
            kgl_closed(&f4, 3, fe(1)).unwrap(),
            kgl_recursive(&f4, 3, fe(1)).unwrap()
        );
    }

    #[test]
    fn twisted_examples() {
        let f4 = make_field(2, None).unwrap();
        assert_eq!(twisted_sum_check(&f4, 1, FieldElement::ZERO).unwrap(), (1, 1));
        assert_eq!(twisted_sum_check(&f4, 1, fe(1)).unwrap(), (5, 5));
        let f2 = make_field(1, None).unwrap();
        assert_eq!(twisted_sum_check(&f2, 2, fe(1)).unwrap(), (1, 1));
    }

    #[test]
    fn artin_schreier_examples() {
        let f4 = make_field(2, None).unwrap();
        assert_eq!(artin_schreier_sums(&f4, fe(1)).unwrap(), (2, -4));
        let f2 = make_field(1, None).unwrap();
        assert_eq!(artin_schreier_sums(&f2, fe(1)).unwrap().0, 0);
        let f8 = make_field(3, None).unwrap();
        let (s0, s1) = artin_schreier_sums(&f8, fe(1)).unwrap();
        assert_eq!(s0 - s1, 2 * kloosterman(&f8, fe(1)));
        assert!(artin_schreier_sums(&f8, FieldElement::ZERO).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let f4 = make_field(2, None).unwrap();
        assert_eq!(range_spectrum(&f4).unwrap(), BTreeSet::from([-1, 3]));
        let f16 = make_field(4, None).unwrap();
        assert_eq!(range_spectrum(&f16).unwrap(), BTreeSet::from([-5, -1, 3, 7]));
        assert_eq!(predicted_range(16), BTreeSet::from([-5, -1, 3, 7]));
        assert!(range_spectrum(&make_field(1, None).unwrap()).is_err());
    }
}
