//! Dense linear algebra over a [`Field`], plus a packed `F_2` rank kernel.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Row-major matrix of element encodings.
pub type Matrix = Vec<Vec<Elem>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j) as Elem).collect())
        .collect()
}

pub fn transpose(m: &Matrix, ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

/// Reduces `m` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(i) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, i);
        let inv = f.inv(m[r][c]).expect("pivot is nonzero");
        if inv != 1 {
            for x in m[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(f, &mut m).len()
}

/// Basis of the right null space `{x : m x = 0}` in `F^ncols`.
pub fn kernel(f: &Field, m: &Matrix, ncols: usize) -> Matrix {
    let mut r = m.clone();
    let pivots = rref(f, &mut r);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0; ncols];
        x[free] = 1;
        for (row, &pc) in r.iter().zip(&pivots) {
            x[pc] = f.neg(row[free]);
        }
        out.push(x);
    }
    out
}

pub fn inverse(f: &Field, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::dim("matrix is not square"));
    }
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| (i == j) as Elem));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::invalid("matrix is singular"));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(f: &Field, a: &Matrix, b: &Matrix, bcols: usize) -> Matrix {
    a.iter()
        .map(|row| vec_mat(f, row, b, bcols))
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(f: &Field, v: &[Elem], m: &Matrix, ncols: usize) -> Vec<Elem> {
    let mut out = vec![0; ncols];
    for (&c, row) in v.iter().zip(m) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

pub fn mat_vec(f: &Field, m: &Matrix, v: &[Elem]) -> Vec<Elem> {
    m.iter().map(|row| dot(f, row, v)).collect()
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Incremental `F_2` basis of packed bit vectors, kept fully reduced so that
/// every pivot bit appears in exactly one basis vector.
#[derive(Clone, Debug, Default)]
pub struct F2Basis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl F2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn bit(v: &[u64], pos: usize) -> bool {
        (v[pos / 64] >> (pos % 64)) & 1 == 1
    }

    fn xor_into(dst: &mut [u64], src: &[u64]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut [u64]) {
        for (pos, row) in &self.rows {
            if Self::bit(v, *pos) {
                Self::xor_into(v, row);
            }
        }
    }

    /// Inserts `v`; returns whether the rank increased.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        let Some(word) = v.iter().position(|&w| w != 0) else {
            return false;
        };
        let pos = word * 64 + v[word].trailing_zeros() as usize;
        for (_, row) in self.rows.iter_mut() {
            if Self::bit(row, pos) {
                Self::xor_into(row, &v);
            }
        }
        self.rows.push((pos, v));
        true
    }
}

/// Packs a vector of `F_2` digits (0/1 values) into 64-bit words.
pub fn pack_bits(bits: impl IntoIterator<Item = u32>, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len.div_ceil(64).max(1)];
    for (i, b) in bits.into_iter().enumerate() {
        if b & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

/// Rank over the prime field `F_p` of vectors given as digit sequences.
pub fn prime_rank(fp: &Field, vectors: &[Vec<u32>]) -> usize {
    let len = vectors.first().map_or(0, |v| v.len());
    if fp.p() == 2 {
        let mut basis = F2Basis::new();
        for v in vectors {
            basis.insert(pack_bits(v.iter().copied(), len));
        }
        basis.rank()
    } else {
        rank(fp, &vectors.to_vec())
    }
}
