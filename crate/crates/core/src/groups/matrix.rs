use std::fmt;

use crate::error::{Error, Result};
use crate::field::{parse_hex, FieldCtx, FieldElement};

/// A dense matrix over GF(2^r), row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatrixGF {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl MatrixGF {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixGF {
            rows,
            cols,
            entries: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(MatrixGF { rows, cols, entries })
    }

    pub fn from_rows(ctx: &FieldCtx, rows: &[&[u32]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::InvalidArgument("ragged rows".into()));
            }
            for &v in row.iter() {
                entries.push(ctx.element(v)?);
            }
        }
        Self::from_entries(r, c, entries)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] = ctx.add(out.entries[idx], ctx.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatrixGF {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| ctx.add(a, b))
                .collect(),
        }
    }

    pub fn trace(&self, ctx: &FieldCtx) -> FieldElement {
        (0..self.rows.min(self.cols)).fold(FieldElement::ZERO, |acc, i| ctx.add(acc, self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j).value() == (i == j) as u32))
    }

    /// Square matrix with zero diagonal that equals its transpose
    /// (alternating in characteristic two).
    pub fn is_alternating(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| self.get(i, i).is_zero() && (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut b = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let (a, b) = (m.get(rank, j), m.get(pivot, j));
                m.set(rank, j, b);
                m.set(pivot, j, a);
            }
            let inv = ctx.inv(m.get(rank, col)).expect("pivot is nonzero");
            for i in 0..m.rows {
                if i == rank {
                    continue;
                }
                let f = ctx.mul(m.get(i, col), inv);
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = ctx.add(m.get(i, j), ctx.mul(f, m.get(rank, j)));
                    m.set(i, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self, ctx: &FieldCtx) -> bool {
        self.rows == self.cols && self.rank(ctx) == self.rows
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self, ctx: &FieldCtx) -> Result<Self> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::InvalidArgument("inverse of a non-square matrix".into()));
        }
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        for col in 0..n {
            let pivot = (col..n)
                .find(|&i| !aug.get(i, col).is_zero())
                .ok_or(Error::DivisionByZero)?;
            for j in 0..2 * n {
                let (a, b) = (aug.get(col, j), aug.get(pivot, j));
                aug.set(col, j, b);
                aug.set(pivot, j, a);
            }
            let inv = ctx.inv(aug.get(col, col))?;
            for j in 0..2 * n {
                aug.set(col, j, ctx.mul(aug.get(col, j), inv));
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = aug.get(i, col);
                if f.is_zero() {
                    continue;
                }
                for j in 0..2 * n {
                    let v = ctx.add(aug.get(i, j), ctx.mul(f, aug.get(col, j)));
                    aug.set(i, j, v);
                }
            }
        }
        Ok(aug.block(0, n, n, n))
    }

    /// Row-major list of hexadecimal entry encodings.
    pub fn to_hex_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| format!("{:#x}", self.get(i, j).value()))
                    .collect()
            })
            .collect()
    }

    /// One-line record: entries in row-major order as hex, separated by spaces,
    /// rows separated by `;`.
    pub fn to_record(&self) -> String {
        self.to_hex_rows()
            .iter()
            .map(|row| row.join(" "))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn from_record(ctx: &FieldCtx, record: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for row in record.trim().split(';') {
            let vals = row
                .split_whitespace()
                .map(|tok| parse_hex(tok).and_then(|v| ctx.element(v)))
                .collect::<Result<Vec<_>>>()?;
            rows.push(vals);
        }
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged matrix record {record:?}")));
        }
        Self::from_entries(rows.len(), cols, rows.concat())
    }
}

impl fmt::Display for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_record())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn inverse_and_rank() {
        let f = make_field(2, None).unwrap();
        let m = MatrixGF::from_rows(&f, &[&[1, 2], &[2, 1]]).unwrap();
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity());
        let s = MatrixGF::from_rows(&f, &[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(s.rank(&f), 1);
        assert!(s.inverse(&f).is_err());
    }

    #[test]
    fn record_round_trip() {
        let f = make_field(3, None).unwrap();
        let m = MatrixGF::from_rows(&f, &[&[0, 7, 2], &[5, 1, 0]]).unwrap();
        assert_eq!(m.to_record(), "0x0 0x7 0x2;0x5 0x1 0x0");
        assert_eq!(MatrixGF::from_record(&f, &m.to_record()).unwrap(), m);
        assert!(MatrixGF::from_record(&f, "0x1 0x2;0x3").is_err());
        assert!(MatrixGF::from_record(&f, "0x9").is_err());
    }
}
