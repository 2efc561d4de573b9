//! Exact combinatorial quantities: binomials with huge upper index, Stirling
//! numbers of the second kind, Gaussian binomials and |GL(n, q)|.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn big(x: impl Into<BigInt>) -> BigInt {
    x.into()
}

pub fn pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `binom(n, k)` for an arbitrary-precision `n` and a small `k`, evaluated as
/// a falling factorial over `k!`. Zero when `k > n` or `n < 0`.
pub fn binomial(n: &BigInt, k: u64) -> BigInt {
    if n.is_negative() || *n < BigInt::from(k) {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - i;
    }
    let (quot, rem) = num.div_rem(&factorial(k));
    debug_assert!(rem.is_zero());
    quot
}

/// Binomial with the convention that it vanishes outside `0 <= k <= n`.
pub fn binomial_signed(n: &BigInt, k: &BigInt) -> BigInt {
    if k.is_negative() || k > n {
        return BigInt::zero();
    }
    let low = std::cmp::min(k.clone(), n - k);
    let low: u64 = low.try_into().expect("lower binomial index fits in u64");
    binomial(n, low)
}

/// Stirling numbers of the second kind from the triangle
/// `S(h, t) = t S(h-1, t) + S(h-1, t-1)`. Out-of-range `t` gives 0.
pub fn stirling2(h: u32, t: u32) -> BigInt {
    if t > h {
        return BigInt::zero();
    }
    stirling2_row(h).swap_remove(t as usize)
}

/// Row `h` of the Stirling triangle: `S(h, 0..=h)`.
pub fn stirling2_row(h: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for n in 1..=h as usize {
        let mut next = vec![BigInt::zero(); n + 1];
        for t in 1..=n {
            let carry = if t < n { &row[t] * t } else { BigInt::zero() };
            next[t] = carry + &row[t - 1];
        }
        row = next;
    }
    row
}

/// `S(h, t) = (1/t!) sum_j (-1)^(t-j) binom(t, j) j^h`, evaluated directly.
pub fn stirling2_alternating(h: u32, t: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=t {
        let term = binomial(&big(t), j as u64) * num_traits::pow(big(j), h as usize);
        if (t - j).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let (quot, rem) = acc.div_rem(&factorial(t as u64));
    debug_assert!(rem.is_zero());
    quot
}

/// |GL(n, q)| = q^C(n,2) prod_{j=1}^{n} (q^j - 1).
pub fn gl_order(n: u32, q: u64) -> BigInt {
    let mut acc = pow(q, n * n.saturating_sub(1) / 2);
    for j in 1..=n {
        acc *= pow(q, j) - 1;
    }
    acc
}

/// The Gaussian binomial `[n choose r]_q`; zero outside `0 <= r <= n`.
pub fn q_binomial(n: i64, r: i64, q: u64) -> BigInt {
    if r < 0 || n < 0 || r > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..r {
        num *= pow(q, (n - j) as u32) - 1;
        den *= pow(q, (r - j) as u32) - 1;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// prod_{j=1}^{upper} (q^(step*j - offset) - 1); empty products are 1.
pub(crate) fn prod_q_minus_one(q: u64, upper: i64, step: u32, offset: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 1..=upper.max(0) as u32 {
        acc *= pow(q, step * j - offset) - 1;
    }
    acc
}

/// Exact division; `None` if `den` does not divide `num`.
pub fn exact_div(num: &BigInt, den: &BigInt) -> Option<BigInt> {
    if den.is_zero() {
        return None;
    }
    let (quot, rem) = num.div_rem(den);
    rem.is_zero().then_some(quot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(4, 2), big(7));
        assert_eq!(stirling2(1, 0), big(0));
        assert_eq!(stirling2(0, 0), big(1));
        assert_eq!(stirling2(3, 5), big(0));
        for h in 1..10 {
            assert_eq!(stirling2(h, 1), big(1));
            assert_eq!(stirling2(h, h), big(1));
        }
    }

    #[test]
    fn stirling_recurrence_matches_alternating_sum() {
        for h in 0..=20 {
            let row = stirling2_row(h);
            for t in 0..=h {
                assert_eq!(row[t as usize], stirling2_alternating(h, t), "S({h},{t})");
            }
        }
    }

    #[test]
    fn binomial_huge_upper() {
        let n = pow(2, 200);
        assert_eq!(binomial(&n, 1), n);
        assert_eq!(binomial(&n, 2), &n * (&n - 1) / 2);
        assert_eq!(binomial(&big(3), 5), big(0));
        assert_eq!(binomial(&big(-1), 0), big(0));
        assert_eq!(binomial(&big(28), 2), big(378));
        assert_eq!(binomial_signed(&big(10), &big(7)), big(120));
        assert_eq!(binomial_signed(&big(10), &big(-1)), big(0));
    }

    #[test]
    fn gaussian_binomial_and_gl() {
        assert_eq!(gl_order(2, 2), big(6));
        assert_eq!(gl_order(0, 5), big(1));
        for q in [2u64, 4, 8] {
            assert_eq!(q_binomial(2, 1, q), big(q + 1));
            assert_eq!(q_binomial(5, 0, q), big(1));
            assert_eq!(q_binomial(3, 4, q), big(0));
            // g_n / (g_{n-r} g_r) = q^{r(n-r)} [n choose r]_q
            for n in 0..6u32 {
                for r in 0..=n {
                    let lhs = gl_order(n, q) / (gl_order(n - r, q) * gl_order(r, q));
                    assert_eq!(lhs, pow(q, r * (n - r)) * q_binomial(n as i64, r as i64, q));
                }
            }
        }
    }
}
