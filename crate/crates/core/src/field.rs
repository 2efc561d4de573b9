//! Arithmetic in GF(2^r) over a polynomial basis.
//!
//! Elements are encoded as little-endian coefficient bitmasks (bit k is the
//! coefficient of z^k). The same encoding, printed in hexadecimal, is used for
//! moduli and elements on every external surface.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_EXPONENT: u32 = 16;

/// An element of GF(2^r), stored as its polynomial-basis bitmask.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElement(pub(crate) u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Degree of a GF(2) polynomial given as a bitmask; `None` for the zero polynomial.
pub fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of `a` modulo `m` over GF(2).
pub fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m).expect("modulus must be nonzero");
    while let Some(da) = poly_degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Carry-less product of two GF(2) polynomials of degree < 32.
pub fn poly_mul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Returns a nontrivial factor of `poly` if there is one, found by trial
/// division by every polynomial of degree 1..=deg/2.
pub fn find_factor(poly: u32) -> Option<u32> {
    let deg = poly_degree(poly as u64)?;
    if deg <= 1 {
        return None;
    }
    for d in 1..=deg / 2 {
        for f in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(poly as u64, f as u64) == 0 {
                return Some(f);
            }
        }
    }
    None
}

pub fn is_irreducible(poly: u32) -> bool {
    poly_degree(poly as u64).is_some_and(|d| d >= 1) && find_factor(poly).is_none()
}

/// The irreducible polynomial of degree `r` with the smallest bitmask.
pub fn default_modulus(r: u32) -> Result<u32> {
    check_exponent(r)?;
    ((1u32 << r)..(1u32 << (r + 1)))
        .find(|&p| is_irreducible(p))
        .ok_or_else(|| Error::Inconsistent(format!("no irreducible polynomial of degree {r}")))
}

fn check_exponent(r: u32) -> Result<()> {
    if (1..=MAX_EXPONENT).contains(&r) {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(r))
    }
}

/// Parses a hexadecimal integer with or without a `0x` prefix.
pub fn parse_hex(s: &str) -> Result<u32> {
    let t = s.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u32::from_str_radix(digits, 16).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// The field GF(2^r) together with the quadratic-form parameter `a`
/// (an element of absolute trace one).
#[derive(Clone)]
pub struct FieldCtx {
    r: u32,
    q: u32,
    modulus: u32,
    a_param: FieldElement,
    tables: Arc<Tables>,
}

struct Tables {
    exp: Vec<u16>,
    log: Vec<u32>,
    traces: Vec<u8>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("r", &self.r)
            .field("q", &self.q)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .field("a_param", &self.a_param)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.modulus == other.modulus && self.a_param == other.a_param
    }
}

impl Eq for FieldCtx {}

/// Builds GF(2^r). Without an explicit modulus the smallest irreducible
/// bitmask of degree `r` is used; `a_param` defaults to the smallest element
/// of trace one.
pub fn make_field(r: u32, modulus: Option<u32>) -> Result<FieldCtx> {
    FieldCtx::new(r, modulus)
}

impl FieldCtx {
    pub fn new(r: u32, modulus: Option<u32>) -> Result<Self> {
        check_exponent(r)?;
        let modulus = match modulus {
            None => default_modulus(r)?,
            Some(m) => {
                let found = poly_degree(m as u64).unwrap_or(0);
                if m == 0 || found != r {
                    return Err(Error::ModulusDegree {
                        modulus: m,
                        expected: r,
                        found,
                    });
                }
                if let Some(factor) = find_factor(m) {
                    return Err(Error::ReducibleModulus { modulus: m, factor });
                }
                m
            }
        };
        let q = 1u32 << r;
        let traces = (0..q)
            .map(|x| {
                let mut acc = 0u64;
                let mut y = x as u64;
                for _ in 0..r {
                    acc ^= y;
                    y = poly_rem(poly_mul(y, y), modulus as u64);
                }
                debug_assert!(acc <= 1);
                acc as u8
            })
            .collect::<Vec<_>>();
        let (exp, log) = build_log_tables(q, modulus);
        let a_param = FieldElement((0..q).find(|&x| traces[x as usize] == 1).expect("trace is onto GF(2)") as u16);
        Ok(FieldCtx {
            r,
            q,
            modulus,
            a_param,
            tables: Arc::new(Tables { exp, log, traces }),
        })
    }

    /// Replaces the quadratic-form parameter; it must have trace one.
    pub fn with_a_param(mut self, a: FieldElement) -> Result<Self> {
        let a = self.element(a.value())?;
        if self.trace(a) != 1 {
            return Err(Error::BadQuadraticParameter(a.value()));
        }
        self.a_param = a;
        Ok(self)
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn a_param(&self) -> FieldElement {
        self.a_param
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value < self.q {
            Ok(FieldElement(value as u16))
        } else {
            Err(Error::ElementOutOfRange { value, q: self.q })
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(|v| FieldElement(v as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(|v| FieldElement(v as u16))
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(x.0 ^ y.0)
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement::ZERO;
        }
        let s = self.tables.log[x.0 as usize] + self.tables.log[y.0 as usize];
        FieldElement(self.tables.exp[s as usize])
    }

    /// Product computed by shift-and-add followed by reduction. Used as a
    /// reference for the table-driven `mul`.
    pub fn mul_reference(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(poly_rem(poly_mul(x.0 as u64, y.0 as u64), self.modulus as u64) as u16)
    }

    #[inline]
    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.tables.log[x.0 as usize];
        Ok(FieldElement(self.tables.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to GF(2), as 0 or 1.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u8 {
        self.tables.traces[x.0 as usize]
    }

    /// Trace evaluated as x + x^2 + ... + x^(2^(r-1)) with field operations.
    pub fn trace_by_frobenius(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut y = x;
        for _ in 0..self.r {
            acc = self.add(acc, y);
            y = self.square(y);
        }
        acc
    }

    /// The canonical additive character (-1)^tr(x).
    #[inline]
    pub fn lambda(&self, x: FieldElement) -> i64 {
        1 - 2 * self.tables.traces[x.0 as usize] as i64
    }

    /// The image of the Artin-Schreier map x -> x^2 + x, sorted by encoding.
    pub fn theta_subgroup(&self) -> Vec<FieldElement> {
        let mut seen = vec![false; self.q as usize];
        for x in self.elements() {
            seen[self.add(self.square(x), x).0 as usize] = true;
        }
        self.elements().filter(|x| seen[x.0 as usize]).collect()
    }

    /// Elements of trace one, in encoding order. Each is an admissible `a_param`.
    pub fn trace_one_elements(&self) -> Vec<FieldElement> {
        self.elements().filter(|&x| self.trace(x) == 1).collect()
    }
}

fn build_log_tables(q: u32, modulus: u32) -> (Vec<u16>, Vec<u32>) {
    let order = q - 1;
    let step = |x: u64, g: u64| poly_rem(poly_mul(x, g), modulus as u64);
    let generator = (1..q as u64)
        .find(|&g| {
            let mut x = g;
            let mut k = 1u32;
            while x != 1 {
                x = step(x, g);
                k += 1;
            }
            k == order
        })
        .expect("the multiplicative group is cyclic");
    let mut exp = vec![0u16; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for k in 0..order {
        exp[k as usize] = x as u16;
        exp[(k + order) as usize] = x as u16;
        log[x as usize] = k;
        x = step(x, generator);
    }
    (exp, log)
}
