use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::combinat::{big, exact_div, gl_order, pow, prod_q_minus_one, q_binomial};
use crate::error::{Error, Result};
use crate::field::FieldCtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// +1 or -1.
    pub fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "p" => Ok(Sign::Plus),
            "-" | "minus" | "m" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("sign must be plus or minus, got {s:?}"))),
        }
    }
}

/// Which of the four double-coset families `DC_i` is addressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Family(u8);

impl Family {
    pub const ONE: Family = Family(1);
    pub const TWO: Family = Family(2);
    pub const THREE: Family = Family(3);
    pub const FOUR: Family = Family(4);
    pub const ALL: [Family; 4] = [Family(1), Family(2), Family(3), Family(4)];

    pub fn new(i: u8) -> Result<Self> {
        if (1..=4).contains(&i) {
            Ok(Family(i))
        } else {
            Err(Error::InvalidSpec(format!("family must be 1..=4, got {i}")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Families 1 and 3 produce Kloosterman sums, 2 and 4 their squares.
    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    /// Families 3 and 4 are the cosets twisted on the left by rho.
    pub fn is_twisted(self) -> bool {
        self.0 >= 3
    }

    /// How far the Weyl index sits below n - 1.
    fn sigma_offset(self) -> u32 {
        match self.0 {
            1 => 1,
            2 | 3 => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One of the eight families of double cosets `DC_i^{+-}(n, q)` over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetSpec {
    family: Family,
    sign: Sign,
    n: u32,
    ctx: FieldCtx,
}

/// `A`, `B` and `N = A * B` for a double coset family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetConstants {
    pub a: BigInt,
    pub b: BigInt,
    pub n: BigInt,
}

impl DoubleCosetSpec {
    pub fn new(family: Family, sign: Sign, n: u32, ctx: FieldCtx) -> Result<Self> {
        let ok = match (family.0, sign) {
            (1..=3, Sign::Plus) => n >= 2 && n.is_multiple_of(2),
            (4, Sign::Plus) => n >= 4 && n.is_multiple_of(2),
            (1, Sign::Minus) => n % 2 == 1,
            (_, Sign::Minus) => n >= 3 && n % 2 == 1,
            _ => false,
        };
        if !ok {
            let need = match (family.0, sign) {
                (1..=3, Sign::Plus) => "even n >= 2",
                (4, Sign::Plus) => "even n >= 4",
                (1, Sign::Minus) => "odd n >= 1",
                _ => "odd n >= 3",
            };
            return Err(Error::InvalidSpec(format!(
                "DC_{family}^{sign}(n, q) is defined for {need}, got n = {n}"
            )));
        }
        Ok(DoubleCosetSpec { family, sign, n, ctx })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn q(&self) -> u64 {
        self.ctx.q() as u64
    }

    /// Index r of the Weyl element sigma_r in the double coset.
    pub fn sigma_index(&self) -> u32 {
        self.n - self.family.sigma_offset()
    }

    pub fn is_twisted(&self) -> bool {
        self.family.is_twisted()
    }

    pub fn label(&self) -> String {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        format!("DC_{}^{}({}, {})", self.family, s, self.n, self.ctx.q())
    }

    pub fn constants(&self) -> CosetConstants {
        dc_cardinality(self)
    }

    /// The three exceptional specs whose dual map `a -> c(a)` has kernel F_2.
    pub fn has_degenerate_dual(&self) -> bool {
        let q = self.q();
        match (self.family.0, self.sign, self.n) {
            (3, Sign::Plus, 2) => q <= 4,
            (4, Sign::Minus, 3) => q == 2,
            _ => false,
        }
    }
}

fn quarter(numerator: i64) -> u32 {
    debug_assert!(numerator >= 0 && numerator % 4 == 0, "exponent {numerator}/4");
    (numerator / 4) as u32
}

/// Closed-form `A_i^{+-}(n, q)`, `B_i^{+-}(n, q)` and `N = A B`.
pub fn dc_cardinality(spec: &DoubleCosetSpec) -> CosetConstants {
    let q = spec.q();
    let n = spec.n as i64;
    let qb = |k: i64| q_binomial(n - 1, k, q);
    let odd_prod = |upper: i64| prod_q_minus_one(q, upper, 2, 1);
    let even_prod = |upper: i64| prod_q_minus_one(q, upper, 2, 0);
    let q1 = big(q + 1);
    let (a, b) = match (spec.family.0, spec.sign) {
        (1, Sign::Plus) => (
            pow(q, quarter(5 * n * n - 2 * n - 4)) * (pow(q, (n - 1) as u32) - 1) * odd_prod((n - 2) / 2),
            &q1 * pow(q, quarter(n * n)) * even_prod((n - 2) / 2),
        ),
        (2, Sign::Plus) => (
            pow(q, quarter(5 * n * n - 2 * n - 8)) * qb(1) * odd_prod((n - 2) / 2),
            &q1 * pow(q, quarter((n - 2) * (n - 2))) * (pow(q, (n - 1) as u32) - 1) * even_prod((n - 2) / 2),
        ),
        (3, Sign::Plus) => (
            &q1 * pow(q, quarter(5 * n * n - 2 * n - 8)) * qb(1) * odd_prod((n - 2) / 2),
            pow(q, quarter((n - 2) * (n - 2))) * (pow(q, (n - 1) as u32) - 1) * even_prod((n - 2) / 2),
        ),
        (4, Sign::Plus) => (
            &q1 * pow(q, quarter(5 * n * n - 6 * n - 4)) * qb(2) * odd_prod((n - 2) / 2),
            pow(q, quarter((n - 2) * (n - 2))) * (pow(q, (n - 1) as u32) - 1) * even_prod((n - 2) / 2),
        ),
        (1, Sign::Minus) => (
            pow(q, quarter(5 * (n * n - 1))) * odd_prod((n - 1) / 2),
            &q1 * pow(q, quarter((n - 1) * (n - 1))) * even_prod((n - 1) / 2),
        ),
        (2, Sign::Minus) => (
            pow(q, quarter(5 * n * n - 4 * n - 5)) * qb(1) * odd_prod((n - 1) / 2),
            &q1 * pow(q, quarter((n - 1) * (n - 1))) * even_prod((n - 1) / 2),
        ),
        (3, Sign::Minus) => (
            &q1 * pow(q, quarter(5 * n * n - 4 * n - 5)) * qb(1) * odd_prod((n - 1) / 2),
            pow(q, quarter((n - 1) * (n - 1))) * even_prod((n - 1) / 2),
        ),
        (4, Sign::Minus) => (
            &q1 * pow(q, quarter(5 * n * n - 4 * n - 9)) * qb(2) * odd_prod((n - 3) / 2),
            pow(q, quarter((n - 3) * (n - 3)))
                * (pow(q, (n - 2) as u32) - 1)
                * (pow(q, (n - 1) as u32) - 1)
                * even_prod((n - 3) / 2),
        ),
        _ => unreachable!("family index validated on construction"),
    };
    let n_total = &a * &b;
    CosetConstants { a, b, n: n_total }
}

/// `|Q^- sigma_r Q^-| = (q+1) q^(n^2-n) prod_{j<n} (q^j - 1) [n-1 choose r]_q q^C(r,2) q^(2r)`,
/// which is also the size of each rho-twisted coset.
pub fn double_coset_size(n: u32, r: u32, q: u64) -> BigInt {
    let mut acc = big(q + 1) * pow(q, n * n - n);
    for j in 1..n {
        acc *= pow(q, j) - 1;
    }
    acc * q_binomial(n as i64 - 1, r as i64, q) * pow(q, r * r.saturating_sub(1) / 2 + 2 * r)
}

/// `|P^-(2n, q)| = 2 (q+1) g_{n-1} q^((n-1)(n+2)/2)`.
pub fn parabolic_order(n: u32, q: u64) -> BigInt {
    big(2 * (q + 1)) * gl_order(n - 1, q) * pow(q, (n - 1) * (n + 2) / 2)
}

/// `|Q^-(2n, q)| = |P^-(2n, q)| / 2`.
pub fn q_minus_order(n: u32, q: u64) -> BigInt {
    parabolic_order(n, q) / 2
}

/// `|O^-(2n, q)| = 2 q^(n(n-1)) (q^n + 1) prod_{j=1}^{n-1} (q^(2j) - 1)`.
pub fn ominus_order(n: u32, q: u64) -> BigInt {
    let mut acc = big(2) * pow(q, n * (n - 1)) * (pow(q, n) + 1);
    for j in 1..n {
        acc *= pow(q, 2 * j) - 1;
    }
    acc
}

/// `(|A_r^-|, |A_r^- \ P^-|)` where the index is
/// `[n-1 choose r]_q q^(r(r+3)/2)`.
pub fn parabolic_indices(ctx: &FieldCtx, n: u32, r: u32) -> Result<(BigInt, BigInt)> {
    if n == 0 || r >= n {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= r <= n - 1, got n = {n}, r = {r}"
        )));
    }
    let q = ctx.q() as u64;
    let (n_, r_) = (n as i64, r as i64);
    // q^((n-1)(n+2)/2) * q^(r(2n-3r-5)/2), combined before exponentiating
    let exp = (n_ - 1) * (n_ + 2) + r_ * (2 * n_ - 3 * r_ - 5);
    debug_assert!(exp >= 0 && exp % 2 == 0);
    let a_r = big(2 * (q + 1)) * gl_order(r, q) * gl_order(n - 1 - r, q) * pow(q, (exp / 2) as u32);
    let index = q_binomial(n_ - 1, r_, q) * pow(q, r * (r + 3) / 2);
    debug_assert_eq!(exact_div(&parabolic_order(n, q), &a_r).as_ref(), Some(&index));
    Ok((a_r, index))
}
