//! Dense linear algebra over F_p.

use rayon::prelude::*;

use crate::field_poly::PrimeField;

/// Row-major dense matrix of residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

const PAR_THRESHOLD: usize = 1 << 16;

#[inline]
fn axpy(dst: &mut [u32], src: &[u32], c: u32, p: u32) {
    // dst -= c * src
    if c == 0 {
        return;
    }
    let nc = p - c;
    if p < (1 << 16) {
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = (*d + nc * s) % p;
            }
        }
    } else {
        let (p64, nc64) = (p as u64, nc as u64);
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = ((*d as u64 + nc64 * s as u64) % p64) as u32;
            }
        }
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, rows_data: Vec<Vec<u32>>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, r) in rows_data.into_iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(&r);
        }
        m
    }

    pub fn from_i64(f: PrimeField, rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data: vals.iter().map(|&v| f.from_i64(v)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: PrimeField) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let p = f.p() as u64;
        let mut out = Matrix::zeros(self.rows, other.cols);
        let oc = other.cols;
        let body = |(i, orow): (usize, &mut [u32])| {
            let mut acc = vec![0u64; oc];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * oc..(k + 1) * oc];
                for (x, &b) in acc.iter_mut().zip(brow) {
                    *x = (*x + a * b as u64) % p;
                }
            }
            for (o, a) in orow.iter_mut().zip(acc) {
                *o = a as u32;
            }
        };
        if oc == 0 {
            return out;
        }
        if self.rows * self.cols * oc > PAR_THRESHOLD * 16 {
            out.data.par_chunks_mut(oc).enumerate().for_each(body);
        } else {
            out.data.chunks_mut(oc).enumerate().for_each(body);
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32], f: PrimeField) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = f.p() as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (a, &b) in self.row(i).iter().zip(v) {
                    if *a != 0 && b != 0 {
                        acc = (acc + *a as u64 * b as u64) % p;
                    }
                }
                acc as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix, f: PrimeField) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32, f: PrimeField) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self, f: PrimeField) -> Matrix {
        self.scale(f.p() - 1, f)
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            m.data[i * m.cols..i * m.cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * m.cols + self.cols..(i + 1) * m.cols].copy_from_slice(other.row(i));
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            m.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(i));
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + k] = self.get(i, j);
            }
        }
        m
    }

    pub fn rank(&self, f: PrimeField) -> usize {
        let mut m = self.clone();
        rref(&mut m, f).len()
    }

    pub fn inverse(&self, f: PrimeField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        solve(self, &Matrix::identity(self.rows), f)
    }
}

/// In-place reduced row echelon form. Returns pivot columns.
pub fn rref(m: &mut Matrix, f: PrimeField) -> Vec<usize> {
    let cols = m.cols;
    rref_limited(m, f, cols)
}

/// RREF where pivots are only searched in the first `limit` columns.
pub fn rref_limited(m: &mut Matrix, f: PrimeField, limit: usize) -> Vec<usize> {
    let p = f.p();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        if i != r {
            for j in 0..cols {
                m.data.swap(i * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m.data[r * cols + c]);
        for j in c..cols {
            let v = m.data[r * cols + j];
            if v != 0 {
                m.data[r * cols + j] = f.mul(v, inv);
            }
        }
        let prow: Vec<u32> = m.data[r * cols + c..(r + 1) * cols].to_vec();
        let body = |(i, row): (usize, &mut [u32])| {
            if i != r {
                let factor = row[c];
                if factor != 0 {
                    axpy(&mut row[c..], &prow, factor, p);
                }
            }
        };
        if rows * (cols - c) > PAR_THRESHOLD {
            m.data.par_chunks_mut(cols).enumerate().for_each(body);
        } else {
            m.data.chunks_mut(cols).enumerate().for_each(body);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of {x : m x = 0}, one row per free column. Row k has a 1 in
/// `free[k]` and zeros in the other free columns, so the coordinates of a
/// kernel vector are its entries at the free columns.
pub struct Nullspace {
    pub basis: Matrix,
    pub free: Vec<usize>,
}

pub fn nullspace(m: &Matrix, f: PrimeField) -> Nullspace {
    let mut a = m.clone();
    let pivots = rref(&mut a, f);
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut basis = Matrix::zeros(free.len(), n);
    for (k, &fc) in free.iter().enumerate() {
        basis.set(k, fc, 1);
        for (r, &pc) in pivots.iter().enumerate() {
            let v = a.get(r, fc);
            if v != 0 {
                basis.set(k, pc, f.neg(v));
            }
        }
    }
    Nullspace { basis, free }
}

/// Solve `a * x = b`; the particular solution has zeros in the free
/// variables.
pub fn solve(a: &Matrix, b: &Matrix, f: PrimeField) -> Option<Matrix> {
    assert_eq!(a.rows, b.rows);
    let mut aug = a.hstack(b);
    let pivots = rref_limited(&mut aug, f, a.cols);
    let r = pivots.len();
    for i in r..aug.rows {
        if aug.row(i)[a.cols..].iter().any(|&v| v != 0) {
            return None;
        }
    }
    let mut x = Matrix::zeros(a.cols, b.cols);
    for (k, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(pc, j, aug.get(k, a.cols + j));
        }
    }
    Some(x)
}

/// Incrementally built subspace in semi-echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub field: PrimeField,
    pub dim: usize,
    pub rows: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        Echelon {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` in place; returns the multipliers used per stored row.
    pub fn reduce_tracked(&self, v: &mut [u32]) -> Vec<u32> {
        let p = self.field.p();
        let mut coeffs = vec![0; self.rows.len()];
        for (k, (row, &pc)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let c = v[pc];
            if c != 0 {
                axpy(&mut v[pc..], &row[pc..], c, p);
                coeffs[k] = c;
            }
        }
        coeffs
    }

    pub fn reduce(&self, v: &mut [u32]) {
        let p = self.field.p();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                axpy(&mut v[pc..], &row[pc..], c, p);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` if independent; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        self.insert_reduced(w)
    }

    fn insert_reduced(&mut self, mut w: Vec<u32>) -> bool {
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[pc]);
        for x in w[pc..].iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn nullspace_annihilates() {
        let a = Matrix::from_i64(f(), 2, 4, &[1, 2, 3, 4, 2, 4, 6, 9]);
        let ns = nullspace(&a, f());
        assert_eq!(ns.basis.rows, 2);
        for k in 0..ns.basis.rows {
            assert!(a.mul_vec(ns.basis.row(k), f()).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = Matrix::from_i64(f(), 3, 3, &[2, 1, 0, 0, 1, 5, 7, 0, 1]);
        let inv = a.inverse(f()).unwrap();
        assert_eq!(a.mul(&inv, f()), Matrix::identity(3));
        let sing = Matrix::from_i64(f(), 2, 2, &[1, 2, 2, 4]);
        assert!(sing.inverse(f()).is_none());
    }

    #[test]
    fn echelon_tracks_span() {
        let mut e = Echelon::new(f(), 3);
        assert!(e.insert(&[1, 2, 3]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[2, 5, 7]));
        assert!(e.contains(&[1, 3, 4]));
        assert!(!e.contains(&[0, 0, 1]));
    }
}
