//! Matrices over the field: the systematic generator's parity part, decoding
//! inverses, the MDS check, and bit-matrix expansion for the CRS baseline.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{BitMatrix, FieldElem, FieldSpec};
use crate::transforms::TransformKind;

/// Parameters of a systematic `(k + r, k)` code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    k: usize,
    r: usize,
    field: FieldSpec,
    transform: TransformKind,
}

impl CodeSpec {
    /// Requires `k, r >= 1` and `k + r <= 2^w` (one distinct Cauchy point per
    /// symbol).
    pub fn new(k: usize, r: usize, field: FieldSpec, transform: TransformKind) -> Result<Self> {
        if k == 0 || r == 0 {
            return Err(Error::InvalidParams(format!(
                "k and r must be positive (k = {k}, r = {r})"
            )));
        }
        if k + r > field.order() {
            return Err(Error::TooManySymbols {
                total: k + r,
                points: field.order(),
            });
        }
        Ok(CodeSpec {
            k,
            r,
            field,
            transform,
        })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    /// Total number of symbols, `k + r`.
    #[inline]
    pub fn total(&self) -> usize {
        self.k + self.r
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn transform(&self) -> TransformKind {
        self.transform
    }

    pub fn with_transform(mut self, transform: TransformKind) -> Self {
        self.transform = transform;
        self
    }
}

/// Row-major matrix over `GF(2^w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
    spec: FieldSpec,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize, spec: FieldSpec) -> Self {
        FieldMatrix {
            rows,
            cols,
            entries: vec![FieldElem::ZERO; rows * cols],
            spec,
        }
    }

    pub fn identity(size: usize, spec: FieldSpec) -> Self {
        let mut m = Self::zeros(size, size, spec);
        for i in 0..size {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FieldElem>], spec: FieldSpec) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParams("ragged matrix rows".into()));
        }
        let entries: Vec<FieldElem> = rows.iter().flatten().copied().collect();
        if let Some(bad) = entries
            .iter()
            .find(|e| u32::from(e.0) >= spec.order() as u32)
        {
            return Err(Error::InvalidParams(format!(
                "entry {bad} outside the field"
            )));
        }
        Ok(FieldMatrix {
            rows: rows.len(),
            cols,
            entries,
            spec,
        })
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
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> FieldElem {
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: FieldElem) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[FieldElem] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        let f = &self.spec;
        let mut out = FieldMatrix::zeros(self.rows, other.cols, self.spec);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let acc = (0..self.cols).fold(FieldElem::ZERO, |acc, l| {
                    f.add(acc, f.mul(self.get(i, l), other.get(l, j)))
                });
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        let f = &self.spec;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Submatrix made of the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(rows.len(), cols.len(), self.spec);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    /// Gauss-Jordan elimination with first-nonzero pivoting.
    pub fn invert(&self) -> Result<FieldMatrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidParams(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let f = self.spec;
        let size = self.rows;
        let mut a = self.clone();
        let mut inv = FieldMatrix::identity(size, f);
        for col in 0..size {
            let pivot = (col..size)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = f.inv(a.get(col, col))?;
            a.scale_row(col, scale);
            inv.scale_row(col, scale);
            for r in 0..size {
                let factor = a.get(r, col);
                if r != col && !factor.is_zero() {
                    a.add_scaled_row(r, col, factor);
                    inv.add_scaled_row(r, col, factor);
                }
            }
        }
        Ok(inv)
    }

    pub fn is_singular(&self) -> bool {
        self.invert().is_err()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, row: usize, factor: FieldElem) {
        for c in 0..self.cols {
            let v = self.spec.mul(self.get(row, c), factor);
            self.set(row, c, v);
        }
    }

    fn scale_col(&mut self, col: usize, factor: FieldElem) {
        for r in 0..self.rows {
            let v = self.spec.mul(self.get(r, col), factor);
            self.set(r, col, v);
        }
    }

    // row[dst] += factor * row[src]
    fn add_scaled_row(&mut self, dst: usize, src: usize, factor: FieldElem) {
        for c in 0..self.cols {
            let v = self
                .spec
                .add(self.get(dst, c), self.spec.mul(factor, self.get(src, c)));
            self.set(dst, c, v);
        }
    }

    /// Replaces every entry by its `w x w` multiplication bit matrix.
    pub fn expand_bitmatrix(&self) -> BitMatrix {
        let w = self.spec.w();
        let mut out = BitMatrix::zeros(self.rows * w, self.cols * w);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let block = self.spec.to_bitmatrix(self.get(i, j));
                for bi in 0..w {
                    for bj in 0..w {
                        if block.get(bi, bj) {
                            out.set(i * w + bi, j * w + bj, true);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Normalized Cauchy matrix for the parity part of a systematic code.
///
/// Entries start as `1 / (x_i + y_j)` with `x_i = k + i` and `y_j = j`; rows
/// are then scaled so column 0 is all ones, and columns so row 0 is all ones.
pub fn cauchy_parity_matrix(code: &CodeSpec) -> Result<FieldMatrix> {
    let f = *code.field();
    let (k, r) = (code.k(), code.r());
    if k + r > f.order() {
        return Err(Error::TooManySymbols {
            total: k + r,
            points: f.order(),
        });
    }
    let mut m = FieldMatrix::zeros(r, k, f);
    for i in 0..r {
        for j in 0..k {
            let x = FieldElem((k + i) as u8);
            let y = FieldElem(j as u8);
            m.set(i, j, f.inv(f.add(x, y))?);
        }
    }
    for i in 0..r {
        let s = f.inv(m.get(i, 0))?;
        m.scale_row(i, s);
    }
    for j in 0..k {
        let s = f.inv(m.get(0, j))?;
        m.scale_col(j, s);
    }
    Ok(m)
}

/// Full systematic generator: identity on top of the parity part.
pub fn generator_matrix(code: &CodeSpec, parity: &FieldMatrix) -> FieldMatrix {
    let (k, r) = (code.k(), code.r());
    let mut g = FieldMatrix::zeros(k + r, k, *code.field());
    for i in 0..k {
        g.set(i, i, FieldElem::ONE);
    }
    for i in 0..r {
        for j in 0..k {
            g.set(k + i, j, parity.get(i, j));
        }
    }
    g
}

/// Data indices missing from a survivor set, ascending.
pub fn erased_data(code: &CodeSpec, survivors: &[usize]) -> Vec<usize> {
    (0..code.k()).filter(|i| !survivors.contains(i)).collect()
}

pub(crate) fn check_survivors(code: &CodeSpec, survivors: &[usize]) -> Result<()> {
    if survivors.len() != code.k() {
        return Err(Error::InvalidSurvivors(format!(
            "expected {} survivors, got {}",
            code.k(),
            survivors.len()
        )));
    }
    let mut seen = vec![false; code.total()];
    for &s in survivors {
        if s >= code.total() {
            return Err(Error::InvalidSurvivors(format!(
                "symbol index {s} out of range 0..{}",
                code.total()
            )));
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidSurvivors(format!("symbol {s} listed twice")));
        }
    }
    Ok(())
}

/// Recovery matrix for the erased data symbols.
///
/// Rows follow [`erased_data`] order; columns follow `survivors` order.
/// Applying it to the survivor symbols yields the missing data symbols.
pub fn decode_matrix(code: &CodeSpec, survivors: &[usize]) -> Result<FieldMatrix> {
    check_survivors(code, survivors)?;
    let parity = cauchy_parity_matrix(code)?;
    decode_matrix_with(code, &parity, survivors)
}

pub(crate) fn decode_matrix_with(
    code: &CodeSpec,
    parity: &FieldMatrix,
    survivors: &[usize],
) -> Result<FieldMatrix> {
    let g = generator_matrix(code, parity);
    let all_cols: Vec<usize> = (0..code.k()).collect();
    let a = g.select(survivors, &all_cols);
    let inv = a.invert()?;
    let erased = erased_data(code, survivors);
    Ok(inv.select(&erased, &(0..code.k()).collect::<Vec<_>>()))
}

fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// True iff every square submatrix is nonsingular. Exponential in the
/// matrix size.
pub fn is_mds(parity: &FieldMatrix) -> bool {
    let max = parity.rows().min(parity.cols());
    (1..=max).all(|size| {
        let row_sets = combinations(parity.rows(), size);
        let col_sets = combinations(parity.cols(), size);
        row_sets.iter().all(|rows| {
            col_sets
                .iter()
                .all(|cols| !parity.select(rows, cols).is_singular())
        })
    })
}
