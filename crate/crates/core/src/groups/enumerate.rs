//! Explicit construction of SO^-(2, q), the parabolic subgroup Q^-(2n, q),
//! the Weyl-type elements and the double cosets `Q sigma_r Q`, `rho Q sigma_r Q`.
//!
//! Coordinates on F_q^{2n} are ordered `x_1..x_{n-1}, y_1..y_{n-1}, z_1, z_2`
//! and the quadratic form is `sum x_i y_i + z_1^2 + z_1 z_2 + a z_2^2`.

use std::collections::HashSet;

use rayon::prelude::*;

use super::matrix::MatrixGF;
use super::spec::{q_minus_order, DoubleCosetSpec};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Largest Q^-(2n, q) that is built element by element.
pub const GROUP_BUDGET: u128 = 10_000;
/// Largest number of products x * sigma * y formed for one double coset.
pub const PRODUCT_BUDGET: u128 = 10_000_000;
/// Largest vector space scanned when checking form preservation pointwise.
pub const FORM_SCAN_BUDGET: u128 = 1_000_000;

/// The quadratic form theta^- on a column vector of length 2n.
pub fn theta_minus(ctx: &FieldCtx, n: u32, v: &[FieldElement]) -> Result<FieldElement> {
    let n = n as usize;
    if n == 0 || v.len() != 2 * n {
        return Err(Error::InvalidArgument(format!(
            "vector of length {} for n = {n}",
            v.len()
        )));
    }
    let m = n - 1;
    let mut acc = FieldElement::ZERO;
    for i in 0..m {
        acc = ctx.add(acc, ctx.mul(v[i], v[m + i]));
    }
    let (z1, z2) = (v[2 * n - 2], v[2 * n - 1]);
    acc = ctx.add(acc, ctx.square(z1));
    acc = ctx.add(acc, ctx.mul(z1, z2));
    acc = ctx.add(acc, ctx.mul(ctx.a_param(), ctx.square(z2)));
    Ok(acc)
}

/// `delta_a = [[1, 1], [0, a]]`, the Gram-type matrix of the binary form.
pub fn delta_a(ctx: &FieldCtx) -> MatrixGF {
    MatrixGF::from_entries(
        2,
        2,
        vec![FieldElement::ONE, FieldElement::ONE, FieldElement::ZERO, ctx.a_param()],
    )
    .expect("2x2")
}

/// `eta = [[0, 1], [1, 0]]`.
pub fn eta() -> MatrixGF {
    MatrixGF::from_entries(
        2,
        2,
        vec![
            FieldElement::ZERO,
            FieldElement::ONE,
            FieldElement::ONE,
            FieldElement::ZERO,
        ],
    )
    .expect("2x2")
}

/// Checks the six block relations characterising O^-(2n, q), writing a
/// 2n x 2n matrix as `[[A, B, e], [C, D, f], [g, h, i]]` with `(n-1)`-sized
/// square blocks and a 2 x 2 corner `i`.
pub fn satisfies_isometry_relations(ctx: &FieldCtx, n: u32, w: &MatrixGF) -> bool {
    let n = n as usize;
    if w.rows() != 2 * n || w.cols() != 2 * n {
        return false;
    }
    let m = n - 1;
    let blk = |r: usize, c: usize, rows: usize, cols: usize| w.block(r, c, rows, cols);
    let (a, b, e) = (blk(0, 0, m, m), blk(0, m, m, m), blk(0, 2 * m, m, 2));
    let (c, d, f) = (blk(m, 0, m, m), blk(m, m, m, m), blk(m, 2 * m, m, 2));
    let (g, h, i) = (blk(2 * m, 0, 2, m), blk(2 * m, m, 2, m), blk(2 * m, 2 * m, 2, 2));
    let (da, et) = (delta_a(ctx), eta());
    let t = MatrixGF::transpose;
    let mul = |x: &MatrixGF, y: &MatrixGF| x.mul(ctx, y);
    let add = |x: &MatrixGF, y: &MatrixGF| x.add(ctx, y);
    let form = |x: &MatrixGF| mul(&mul(&t(x), &da), x);

    add(&mul(&t(&a), &c), &form(&g)).is_alternating()
        && add(&mul(&t(&b), &d), &form(&h)).is_alternating()
        && add(&add(&mul(&t(&e), &f), &form(&i)), &da).is_alternating()
        && add(&add(&mul(&t(&a), &d), &mul(&t(&c), &b)), &mul(&mul(&t(&g), &et), &h)).is_identity()
        && add(&add(&mul(&t(&a), &f), &mul(&t(&c), &e)), &mul(&mul(&t(&g), &et), &i)).is_zero()
        && add(&add(&mul(&t(&b), &f), &mul(&t(&d), &e)), &mul(&mul(&t(&h), &et), &i)).is_zero()
}

/// Checks `theta(w v) = theta(v)` for every vector `v`, within budget.
pub fn preserves_form_exhaustive(ctx: &FieldCtx, n: u32, w: &MatrixGF) -> Result<bool> {
    let dim = 2 * n as usize;
    let total = (ctx.q() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if total > FORM_SCAN_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "pointwise form check",
            needed: total,
            limit: FORM_SCAN_BUDGET,
        });
    }
    let q = ctx.q() as u16;
    let mut v = vec![FieldElement::ZERO; dim];
    loop {
        let col = MatrixGF::from_entries(dim, 1, v.clone())?;
        let image = w.mul(ctx, &col);
        if theta_minus(ctx, n, image.entries())? != theta_minus(ctx, n, &v)? {
            return Ok(false);
        }
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(true);
            }
            v[k].0 += 1;
            if v[k].0 < q {
                break;
            }
            v[k] = FieldElement::ZERO;
            k += 1;
        }
    }
}

/// A matrix known to lie in O^-(2n, q).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    n: u32,
    matrix: MatrixGF,
}

impl GroupElement {
    pub fn new(ctx: &FieldCtx, n: u32, matrix: MatrixGF) -> Result<Self> {
        if !satisfies_isometry_relations(ctx, n, &matrix) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not an isometry of theta^- for n = {n}"
            )));
        }
        Ok(GroupElement { n, matrix })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn matrix(&self) -> &MatrixGF {
        &self.matrix
    }

    pub fn into_matrix(self) -> MatrixGF {
        self.matrix
    }
}

/// `SO^-(2, q) = { [[d1, a d2], [d2, d1 + d2]] : d1^2 + d1 d2 + a d2^2 = 1 }`,
/// sorted by entry encoding.
pub fn enumerate_so2(ctx: &FieldCtx) -> Vec<MatrixGF> {
    let a = ctx.a_param();
    let mut out = Vec::with_capacity(ctx.q() as usize + 1);
    for d1 in ctx.elements() {
        for d2 in ctx.elements() {
            let norm = ctx.add(ctx.add(ctx.square(d1), ctx.mul(d1, d2)), ctx.mul(a, ctx.square(d2)));
            if norm == FieldElement::ONE {
                let m = MatrixGF::from_entries(2, 2, vec![d1, ctx.mul(a, d2), d2, ctx.add(d1, d2)]).expect("2x2");
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

/// `O^-(2, q) = SO^-(2, q) u [[1, 1], [0, 1]] SO^-(2, q)`, sorted.
pub fn enumerate_o2(ctx: &FieldCtx) -> Vec<MatrixGF> {
    let so2 = enumerate_so2(ctx);
    let flip = MatrixGF::from_entries(
        2,
        2,
        vec![
            FieldElement::ONE,
            FieldElement::ONE,
            FieldElement::ZERO,
            FieldElement::ONE,
        ],
    )
    .expect("2x2");
    let mut out: Vec<MatrixGF> = so2.iter().map(|i| flip.mul(ctx, i)).collect();
    out.extend(so2);
    out.sort();
    out
}

/// All matrices of shape rows x cols, in odometer order.
pub(crate) fn all_matrices(ctx: &FieldCtx, rows: usize, cols: usize) -> Vec<MatrixGF> {
    let len = rows * cols;
    let q = ctx.q() as u16;
    let mut out = Vec::new();
    let mut e = vec![FieldElement::ZERO; len];
    loop {
        out.push(MatrixGF::from_entries(rows, cols, e.clone()).expect("shape"));
        let mut k = 0;
        loop {
            if k == len {
                return out;
            }
            e[k].0 += 1;
            if e[k].0 < q {
                break;
            }
            e[k] = FieldElement::ZERO;
            k += 1;
        }
    }
}

fn general_linear(ctx: &FieldCtx, m: usize) -> Vec<MatrixGF> {
    all_matrices(ctx, m, m)
        .into_iter()
        .filter(|x| x.is_invertible(ctx))
        .collect()
}

/// Alternating m x m matrices: free strictly-upper part, mirrored, zero diagonal.
fn alternating(ctx: &FieldCtx, m: usize) -> Vec<MatrixGF> {
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    all_matrices(ctx, 1, slots.len())
        .into_iter()
        .map(|free| {
            let mut x = MatrixGF::zeros(m, m);
            for (k, &(i, j)) in slots.iter().enumerate() {
                x.set(i, j, free.get(0, k));
                x.set(j, i, free.get(0, k));
            }
            x
        })
        .collect()
}

fn check_q_minus_budget(ctx: &FieldCtx, n: u32) -> Result<u128> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let size: u128 = q_minus_order(n, ctx.q() as u64).try_into().unwrap_or(u128::MAX);
    if size > GROUP_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "constructive enumeration of Q^-(2n, q)",
            needed: size,
            limit: GROUP_BUDGET,
        });
    }
    Ok(size)
}

/// Every element of Q^-(2n, q), built as `L U` with
/// `L = diag(A, tA^{-1}, i)` and `U = [[1, B, th ti eta i], [0, 1, 0], [0, h, 1]]`
/// over `A in GL(n-1, q)`, `i in SO^-(2, q)`, `h in F_q^{2 x (n-1)}` and
/// `B = th t(delta_a) h + (alternating)`. Sorted by entry encoding.
pub fn enumerate_q_minus(ctx: &FieldCtx, n: u32) -> Result<Vec<MatrixGF>> {
    let expected = check_q_minus_budget(ctx, n)?;
    let m = (n - 1) as usize;
    let dim = 2 * n as usize;
    let so2 = enumerate_so2(ctx);
    let gl = general_linear(ctx, m);
    let alts = alternating(ctx, m);
    let hs = all_matrices(ctx, 2, m);
    let (da_t, et) = (delta_a(ctx).transpose(), eta());

    let mut levis = Vec::with_capacity(gl.len() * so2.len());
    for a in &gl {
        let a_inv_t = a.inverse(ctx)?.transpose();
        for i in &so2 {
            let mut l = MatrixGF::zeros(dim, dim);
            l.set_block(0, 0, a);
            l.set_block(m, m, &a_inv_t);
            l.set_block(2 * m, 2 * m, i);
            levis.push((l, i.clone()));
        }
    }
    let mut out = Vec::with_capacity(expected as usize);
    for (l, i) in &levis {
        let i_eta_i = i.transpose().mul(ctx, &et).mul(ctx, i);
        for h in &hs {
            let ht = h.transpose();
            let base_b = ht.mul(ctx, &da_t).mul(ctx, h);
            let corner = ht.mul(ctx, &i_eta_i);
            for alt in &alts {
                let mut u = MatrixGF::identity(dim);
                u.set_block(0, m, &base_b.add(ctx, alt));
                u.set_block(0, 2 * m, &corner);
                u.set_block(2 * m, m, h);
                out.push(l.mul(ctx, &u));
            }
        }
    }
    out.sort();
    out.dedup();
    if out.len() as u128 != expected {
        return Err(Error::Inconsistent(format!(
            "constructed {} elements of Q^-({}, {}), expected {expected}",
            out.len(),
            2 * n,
            ctx.q()
        )));
    }
    Ok(out)
}

/// The Weyl-type elements `sigma_0, ..., sigma_{n-1}` and the twist `rho`.
#[derive(Debug, Clone)]
pub struct WeylElements {
    pub sigma: Vec<MatrixGF>,
    pub rho: MatrixGF,
}

/// `sigma_r` swaps the first r coordinates of the x- and y-blocks;
/// `rho = diag(1, ..., 1, [[1, 1], [0, 1]])`.
pub fn weyl_elements(ctx: &FieldCtx, n: u32) -> WeylElements {
    let _ = ctx;
    let m = (n - 1) as usize;
    let dim = 2 * n as usize;
    let sigma = (0..n as usize)
        .map(|r| {
            let mut s = MatrixGF::zeros(dim, dim);
            for k in 0..dim {
                let target = if k < r {
                    m + k
                } else if (m..m + r).contains(&k) {
                    k - m
                } else {
                    k
                };
                s.set(k, target, FieldElement::ONE);
            }
            s
        })
        .collect();
    let mut rho = MatrixGF::identity(dim);
    rho.set(2 * m, 2 * m + 1, FieldElement::ONE);
    WeylElements { sigma, rho }
}

/// `Q sigma_r Q`, or `rho Q sigma_r Q` when `twisted`, as a sorted list.
pub fn double_coset(ctx: &FieldCtx, n: u32, r: u32, twisted: bool) -> Result<Vec<MatrixGF>> {
    if r >= n {
        return Err(Error::InvalidArgument(format!("sigma_{r} needs r < n = {n}")));
    }
    let size = check_q_minus_budget(ctx, n)?;
    let products = size * size;
    if products > PRODUCT_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "double coset products",
            needed: products,
            limit: PRODUCT_BUDGET,
        });
    }
    let q = enumerate_q_minus(ctx, n)?;
    let weyl = weyl_elements(ctx, n);
    let sigma = &weyl.sigma[r as usize];
    let left: Vec<MatrixGF> = q
        .iter()
        .map(|x| {
            let xs = x.mul(ctx, sigma);
            if twisted {
                weyl.rho.mul(ctx, &xs)
            } else {
                xs
            }
        })
        .collect();
    let set = left
        .par_iter()
        .fold(HashSet::new, |mut acc, xs| {
            for y in &q {
                acc.insert(xs.mul(ctx, y));
            }
            acc
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        });
    let mut out: Vec<MatrixGF> = set.into_iter().collect();
    out.sort();
    Ok(out)
}

/// The elements `g_1 < g_2 < ... < g_N` of `DC_i^{+-}(n, q)` in lexicographic
/// order of their flattened entry encodings.
pub fn double_coset_elements(spec: &DoubleCosetSpec) -> Result<Vec<MatrixGF>> {
    double_coset(spec.ctx(), spec.n(), spec.sigma_index(), spec.is_twisted())
}

/// Whether `double_coset_elements` fits the enumeration budgets.
pub fn enumeration_feasible(ctx: &FieldCtx, n: u32) -> bool {
    check_q_minus_budget(ctx, n).is_ok_and(|s| s * s <= PRODUCT_BUDGET)
}
