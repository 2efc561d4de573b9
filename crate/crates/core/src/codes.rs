//! The binary codes `C(DC)` attached to the double cosets.
//!
//! `C(DC)` is the binary code of length `N = |DC|` whose dual is the set of
//! trace words `c(a) = (tr(a Tr g_1), ..., tr(a Tr g_N))`, `a in F_q`. Only
//! the dual is ever materialized; the primal code is described through its
//! weight distribution.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::combinat::{big, binomial};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::groups::enumerate::double_coset_elements;
use crate::groups::sums::trace_distribution_closed;
use crate::groups::DoubleCosetSpec;
use crate::kloosterman::kloosterman;

/// Largest `j_max` accepted by the weight prefix.
pub const J_MAX_LIMIT: u32 = 1_000;
/// Largest number of (state, beta) polynomial updates in the prefix DP.
pub const DP_BUDGET: u128 = 50_000_000;
/// Largest length for the explicit MacWilliams transform.
pub const MACWILLIAMS_MAX_LENGTH: usize = 64;
/// Largest dual dimension for the explicit MacWilliams transform.
pub const MACWILLIAMS_MAX_RANK: usize = 16;
/// Largest length for the Delsarte check.
pub const DELSARTE_MAX_LENGTH: usize = 32_768;

/// A binary word, coordinate `k` belonging to the k-th coset element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    bits: Vec<bool>,
}

impl Codeword {
    pub fn new(bits: Vec<bool>) -> Self {
        Codeword { bits }
    }

    pub fn zero(len: usize) -> Self {
        Codeword { bits: vec![false; len] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Inner product over F_2.
    pub fn dot(&self, other: &Codeword) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .fold(false, |acc, (&x, &y)| acc ^ (x & y))
    }

    pub fn xor(&self, other: &Codeword) -> Codeword {
        Codeword::new(self.bits.iter().zip(&other.bits).map(|(&x, &y)| x ^ y).collect())
    }

    /// Hex string with the first coordinate as the most significant bit; the
    /// last nibble is padded with zero bits on the right.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|chunk| {
                let nibble = (0..4).fold(0u32, |acc, k| {
                    (acc << 1) | chunk.get(k).copied().unwrap_or(false) as u32
                });
                char::from_digit(nibble, 16).expect("nibble")
            })
            .collect()
    }

    /// Inverse of [`Codeword::to_hex`] for a known length.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        if hex.len() != len.div_ceil(4) {
            return Err(Error::Parse(format!("{} hex digits for length {len}", hex.len())));
        }
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for ch in hex.chars() {
            let d = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {ch:?}")))?;
            bits.extend((0..4).rev().map(|k| (d >> k) & 1 == 1));
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(Error::Parse("nonzero padding bits".into()));
        }
        bits.truncate(len);
        Ok(Codeword { bits })
    }
}

/// `C_0, ..., C_{j_max}`: the number of codewords of each weight in `C(DC)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPrefix {
    pub spec: DoubleCosetSpec,
    pub j_max: u32,
    pub counts: Vec<BigInt>,
}

/// The dual word `c(a)` over the enumerated coset, in canonical order.
pub fn dual_codeword(spec: &DoubleCosetSpec, a: FieldElement) -> Result<Codeword> {
    let elements = double_coset_elements(spec)?;
    Ok(trace_word(
        spec.ctx(),
        &elements.iter().map(|g| g.trace(spec.ctx())).collect::<Vec<_>>(),
        a,
    ))
}

fn trace_word(ctx: &FieldCtx, traces: &[FieldElement], a: FieldElement) -> Codeword {
    Codeword::new(traces.iter().map(|&t| ctx.trace(ctx.mul(a, t)) == 1).collect())
}

fn coset_traces(spec: &DoubleCosetSpec) -> Result<Vec<FieldElement>> {
    let ctx = spec.ctx();
    Ok(double_coset_elements(spec)?.iter().map(|g| g.trace(ctx)).collect())
}

/// All dual words `c(a)`, indexed by the encoding of `a`.
pub fn dual_codewords(spec: &DoubleCosetSpec) -> Result<Vec<Codeword>> {
    let ctx = spec.ctx();
    let traces = coset_traces(spec)?;
    Ok(ctx
        .elements()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&a| trace_word(ctx, &traces, a))
        .collect())
}

/// Hamming weight of `c(a)`, `a != 0`, from the Kloosterman closed forms:
/// `A(B -+ K)/2` for families 1 and 3, `A(B +- K^2)/2` for family 2 and
/// `A(B +- (q^2 - q + K^2))/2` for family 4.
pub fn codeword_weight_closed(spec: &DoubleCosetSpec, a: FieldElement) -> Result<BigInt> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("codeword weight parameter a"));
    }
    let q = spec.q() as i64;
    let k = kloosterman(spec.ctx(), a);
    let s = spec.sign().unit();
    let c = spec.constants();
    let shift = match spec.family().index() {
        1 | 3 => -s * k,
        2 => s * k * k,
        _ => s * (q * q - q + k * k),
    };
    let twice = &c.a * (&c.b + shift);
    if twice.is_odd() {
        return Err(Error::Inconsistent(format!(
            "{}: odd doubled weight {twice}",
            spec.label()
        )));
    }
    Ok(twice / 2)
}

fn check_prefix_domain(spec: &DoubleCosetSpec, j_max: u32) -> Result<()> {
    if j_max > J_MAX_LIMIT {
        return Err(Error::InvalidArgument(format!("j_max = {j_max} exceeds {J_MAX_LIMIT}")));
    }
    if !spec.family().is_odd() && spec.q() < 4 {
        return Err(Error::Domain(format!(
            "{}: weight distributions for families 2 and 4 assume q >= 4",
            spec.label()
        )));
    }
    Ok(())
}

/// Polynomial product truncated to degree `j_max`.
fn mul_trunc(x: &[BigInt], y: &[BigInt], j_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); j_max + 1];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (k, yk) in y.iter().enumerate().take(j_max + 1 - i) {
            out[i + k] += xi * yk;
        }
    }
    out
}

fn add_into(acc: &mut [BigInt], x: &[BigInt]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

/// `C_0..C_{j_max}` of `C(DC)`: the sum over all `{nu_beta}` with
/// `sum nu_beta = j` and `sum nu_beta beta = 0` of `prod binomial(N(beta), nu_beta)`.
///
/// Dynamic programming over `beta` in encoding order. The state after each
/// step is, for every partial sum `s in F_q`, a polynomial in the number of
/// chosen positions truncated at `j_max`; only the parity of `nu_beta` moves
/// the partial sum, so each step splits `(1 + x)^{N(beta)}` into even and
/// odd parts.
pub fn weight_distribution_prefix(spec: &DoubleCosetSpec, j_max: u32) -> Result<WeightPrefix> {
    check_prefix_domain(spec, j_max)?;
    let ctx = spec.ctx();
    let q = ctx.q() as usize;
    let j = j_max as usize;
    let work = (q as u128) * (q as u128) * (j as u128 + 1);
    if work > DP_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "weight prefix dynamic programme",
            needed: work,
            limit: DP_BUDGET,
        });
    }
    let dist = trace_distribution_closed(spec)?;
    let classes: Vec<(FieldElement, BigInt)> = dist.iter().map(|(b, c)| (b, c.clone())).collect();
    Ok(WeightPrefix {
        spec: spec.clone(),
        j_max,
        counts: constrained_counts(ctx, &classes, j_max),
    })
}

/// For each `j <= j_max`, the sum over `{nu_beta}` with `sum nu_beta = j` and
/// `sum nu_beta beta = 0` of `prod binomial(count(beta), nu_beta)`; elements
/// missing from `classes` have count zero.
pub fn constrained_counts(ctx: &FieldCtx, classes: &[(FieldElement, BigInt)], j_max: u32) -> Vec<BigInt> {
    let q = ctx.q() as usize;
    let j = j_max as usize;
    let zero_poly = vec![BigInt::zero(); j + 1];
    let mut state: Vec<Vec<BigInt>> = vec![zero_poly.clone(); q];
    state[0][0] = BigInt::one();
    for (beta, count) in classes {
        let beta = *beta;
        if count.is_zero() {
            continue;
        }
        let mut even = zero_poly.clone();
        let mut odd = zero_poly.clone();
        for nu in 0..=j {
            let c = binomial(count, nu as u64);
            if nu % 2 == 0 {
                even[nu] = c;
            } else {
                odd[nu] = c;
            }
        }
        let b = beta.value() as usize;
        state = (0..q)
            .into_par_iter()
            .map(|s| {
                let mut next = mul_trunc(&state[s], &even, j);
                if !beta.is_zero() {
                    add_into(&mut next, &mul_trunc(&state[s ^ b], &odd, j));
                } else {
                    add_into(&mut next, &mul_trunc(&state[s], &odd, j));
                }
                next
            })
            .collect();
    }
    std::mem::take(&mut state[0])
}

/// `(1 + y)^{n - w} (1 - y)^w` as a coefficient vector.
fn macwilliams_kernel(n: usize, w: usize) -> Vec<BigInt> {
    let plus: Vec<BigInt> = (0..=n - w).map(|i| binomial(&big(n - w), i as u64)).collect();
    let minus: Vec<BigInt> = (0..=w)
        .map(|i| {
            let c = binomial(&big(w), i as u64);
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    mul_trunc(&plus, &minus, n)
}

/// Distinct dual words, sorted, with the rank of the dual.
fn distinct_duals(words: &[Codeword]) -> (Vec<Codeword>, usize) {
    let set: BTreeSet<Codeword> = words.iter().cloned().collect();
    let size = set.len();
    (set.into_iter().collect(), size.trailing_zeros() as usize)
}

/// The full weight distribution `C_0..C_N` of `C(DC)` for short codes, by
/// popcounting the explicit dual and applying the MacWilliams transform
/// `W_C(x, y) = W_D(x + y, x - y) / |D|`.
pub fn full_weight_distribution_small(spec: &DoubleCosetSpec) -> Result<Vec<BigInt>> {
    let n: usize = spec.constants().n.try_into().map_err(|_| Error::BudgetExceeded {
        what: "MacWilliams length",
        needed: u128::MAX,
        limit: MACWILLIAMS_MAX_LENGTH as u128,
    })?;
    if n > MACWILLIAMS_MAX_LENGTH {
        return Err(Error::BudgetExceeded {
            what: "MacWilliams length",
            needed: n as u128,
            limit: MACWILLIAMS_MAX_LENGTH as u128,
        });
    }
    let words = dual_codewords(spec)?;
    let (dual, rank) = distinct_duals(&words);
    if rank > MACWILLIAMS_MAX_RANK {
        return Err(Error::BudgetExceeded {
            what: "MacWilliams dual rank",
            needed: rank as u128,
            limit: MACWILLIAMS_MAX_RANK as u128,
        });
    }
    let mut enumerator = vec![0u64; n + 1];
    for w in &dual {
        enumerator[w.weight()] += 1;
    }
    let mut total = vec![BigInt::zero(); n + 1];
    for (w, &count) in enumerator.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let kernel = macwilliams_kernel(n, w);
        for (acc, k) in total.iter_mut().zip(kernel) {
            *acc += k * count;
        }
    }
    let size = big(dual.len());
    total
        .into_iter()
        .enumerate()
        .map(|(j, t)| {
            if (&t % &size).is_zero() && !t.is_negative() {
                Ok(t / &size)
            } else {
                Err(Error::Inconsistent(format!(
                    "{}: MacWilliams coefficient {j} = {t}/{size}",
                    spec.label()
                )))
            }
        })
        .collect()
}

/// Outcome of [`delsarte_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelsarteReport {
    pub length: usize,
    /// F_2-rank of the trace words `c(a)`.
    pub rank: usize,
    /// Number of distinct words among `c(a)`, `a in F_q`.
    pub distinct_duals: usize,
    /// `{a : c(a) = 0}`.
    pub kernel: Vec<FieldElement>,
    /// Every `c(a)` is orthogonal to a basis of `C(DC)`, `dim C(DC) = N - rank`
    /// and the `c(a)` exhaust a space of dimension `rank`.
    pub dual_matches: bool,
    /// The kernel is `{0}`, or `{0, 1}` exactly for the degenerate specs.
    pub kernel_as_expected: bool,
}

impl DelsarteReport {
    pub fn passed(&self) -> bool {
        self.dual_matches && self.kernel_as_expected
    }
}

type BitRow = Vec<u64>;

fn pack(word: &Codeword) -> BitRow {
    let mut row = vec![0u64; word.len().div_ceil(64)];
    for (k, &b) in word.bits().iter().enumerate() {
        if b {
            row[k / 64] |= 1 << (k % 64);
        }
    }
    row
}

fn bit(row: &BitRow, k: usize) -> bool {
    (row[k / 64] >> (k % 64)) & 1 == 1
}

fn dot(x: &BitRow, y: &BitRow) -> bool {
    x.iter().zip(y).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
}

/// Row-reduces `rows`; returns the reduced rows, their pivot columns and a
/// pivot mask over `0..len`.
fn row_reduce(rows: &[BitRow], len: usize) -> (Vec<BitRow>, Vec<usize>, Vec<bool>) {
    let mut m: Vec<BitRow> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut is_pivot = vec![false; len];
    for (col, pivot_flag) in is_pivot.iter_mut().enumerate() {
        let rank = pivots.len();
        let Some(p) = (rank..m.len()).find(|&i| bit(&m[i], col)) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && bit(row, col) {
                row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(col);
        *pivot_flag = true;
    }
    m.truncate(pivots.len());
    (m, pivots, is_pivot)
}

/// The null-space basis vector attached to the non-pivot column `free`.
fn null_vector(reduced: &[BitRow], pivots: &[usize], free: usize, len: usize) -> BitRow {
    let mut u = vec![0u64; len.div_ceil(64)];
    u[free / 64] |= 1 << (free % 64);
    for (row, &pc) in reduced.iter().zip(pivots) {
        if bit(row, free) {
            u[pc / 64] |= 1 << (pc % 64);
        }
    }
    u
}

/// Checks that the dual of `C(DC)` is exactly `{c(a) : a in F_q}` and that
/// `a -> c(a)` is injective, except for the degenerate specs where its kernel
/// is the prime field.
pub fn delsarte_report(spec: &DoubleCosetSpec) -> Result<DelsarteReport> {
    let ctx = spec.ctx();
    let length: usize = spec.constants().n.try_into().unwrap_or(usize::MAX);
    if length > DELSARTE_MAX_LENGTH {
        return Err(Error::BudgetExceeded {
            what: "Delsarte check length",
            needed: length as u128,
            limit: DELSARTE_MAX_LENGTH as u128,
        });
    }
    let words = dual_codewords(spec)?;
    let packed: Vec<BitRow> = words.iter().map(pack).collect();
    // c(a) is F_2-linear in a, so the images of the bit basis span the dual
    let generators: Vec<BitRow> = (0..ctx.r()).map(|k| packed[1usize << k].clone()).collect();
    let (reduced, pivots, is_pivot) = row_reduce(&generators, length);
    let rank = pivots.len();
    // the basis of C(DC) is built one vector at a time to keep memory linear
    let free: Vec<usize> = (0..length).filter(|&c| !is_pivot[c]).collect();
    let orthogonal = free.par_iter().all(|&f| {
        let u = null_vector(&reduced, &pivots, f, length);
        packed.iter().all(|c| !dot(&u, c))
    });
    let (distinct, distinct_rank) = distinct_duals(&words);
    let dual_matches =
        orthogonal && free.len() == length - rank && distinct.len() == 1usize << rank && distinct_rank == rank;
    let kernel: Vec<FieldElement> = ctx.elements().filter(|a| words[a.value() as usize].is_zero()).collect();
    let expected = if spec.has_degenerate_dual() {
        vec![FieldElement::ZERO, FieldElement::ONE]
    } else {
        vec![FieldElement::ZERO]
    };
    Ok(DelsarteReport {
        length,
        rank,
        distinct_duals: distinct.len(),
        kernel_as_expected: kernel == expected,
        kernel,
        dual_matches,
    })
}

pub fn delsarte_check(spec: &DoubleCosetSpec) -> Result<bool> {
    Ok(delsarte_report(spec)?.passed())
}
