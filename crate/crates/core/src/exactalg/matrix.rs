use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Sparse integer matrix, stored column-major. Each column holds its nonzero
/// entries sorted by row.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, BigInt::one())
    }

    pub fn scalar(n: usize, c: BigInt) -> Self {
        let data = if c.is_zero() {
            vec![Vec::new(); n]
        } else {
            (0..n).map(|i| vec![(i, c.clone())]).collect()
        };
        Matrix { rows: n, cols: n, data }
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let data = entries
            .iter()
            .enumerate()
            .map(|(i, c)| if c.is_zero() { vec![] } else { vec![(i, c.clone())] })
            .collect();
        Matrix { rows: n, cols: n, data }
    }

    /// Build from row vectors. `cols` is needed when there are no rows.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row");
            for (j, v) in r.iter().enumerate() {
                let v: BigInt = v.clone().into();
                if !v.is_zero() {
                    m.data[j].push((i, v));
                }
            }
        }
        m
    }

    /// Build from dense column vectors of length `rows`.
    pub fn from_dense_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let data = cols
            .iter()
            .map(|c| {
                assert_eq!(c.len(), rows);
                c.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (i, v.clone()))
                    .collect()
            })
            .collect();
        Matrix { rows, cols: cols.len(), data }
    }

    /// Build from sparse columns; duplicate rows are summed, zeros dropped.
    pub fn from_sparse_columns(rows: usize, cols: Vec<Vec<(usize, BigInt)>>) -> Self {
        let n = cols.len();
        let data = cols.into_iter().map(|c| normalize(rows, c)).collect();
        Matrix { rows, cols: n, data }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Self {
        let mut data = vec![Vec::new(); cols];
        for (i, j, v) in entries {
            data[j].push((i, v));
        }
        Self::from_sparse_columns(rows, data)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.data[j]
    }

    pub fn columns(&self) -> &[Vec<(usize, BigInt)>] {
        &self.data
    }

    pub fn dense_column(&self, j: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rows];
        for (i, x) in &self.data[j] {
            v[*i] = x.clone();
        }
        v
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match self.data[j].binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.data[j][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(j, c)| c.len() == 1 && c[0].0 == j && c[0].1.is_one())
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (j, c) in self.data.iter().enumerate() {
            for (i, v) in c {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = vec![Vec::new(); self.rows];
        for (j, c) in self.data.iter().enumerate() {
            for (i, v) in c {
                data[*i].push((j, v.clone()));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Matrix-vector product with a dense vector.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in apply");
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, c) in self.data.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in c {
                out[*i] += v * &x[j];
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut acc = vec![BigInt::zero(); self.rows];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.rows];
        let mut data = Vec::with_capacity(other.cols);
        for c in &other.data {
            for (k, b) in c {
                for (i, a) in &self.data[*k] {
                    if !mark[*i] {
                        mark[*i] = true;
                        touched.push(*i);
                    }
                    acc[*i] += a * b;
                }
            }
            touched.sort_unstable();
            let mut col = Vec::with_capacity(touched.len());
            for &i in &touched {
                mark[i] = false;
                let v = std::mem::take(&mut acc[i]);
                if !v.is_zero() {
                    col.push((i, v));
                }
            }
            touched.clear();
            data.push(col);
        }
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.combine(other, BigInt::one())
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.combine(other, -BigInt::one())
    }

    fn combine(&self, other: &Matrix, s: BigInt) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut c: Vec<(usize, BigInt)> = a.clone();
                c.extend(b.iter().map(|(i, v)| (*i, v * &s)));
                normalize(self.rows, c)
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &BigInt) -> Matrix {
        if s.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|c| c.iter().map(|(i, v)| (*i, v * s)).collect())
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let data = self
            .data
            .iter()
            .map(|c| {
                let mut col: Vec<(usize, BigInt)> = c
                    .iter()
                    .filter(|(i, _)| pos[*i] != usize::MAX)
                    .map(|(i, v)| (pos[*i], v.clone()))
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: idx.len(),
            data: idx.iter().map(|&j| self.data[j].clone()).collect(),
        }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|(i, v)| (i + self.rows, v.clone())));
                c
            })
            .collect();
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::new();
        let mut off = 0;
        for b in blocks {
            for c in &b.data {
                data.push(c.iter().map(|(i, v)| (i + off, v.clone())).collect());
            }
            off += b.rows;
        }
        Matrix { rows, cols: data.len(), data }
    }

    /// Kronecker product `self ⊗ other`; index `(i, a)` maps to `i * other.rows + a`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut data = Vec::with_capacity(self.cols * other.cols);
        for c in &self.data {
            for d in &other.data {
                let mut col = Vec::with_capacity(c.len() * d.len());
                for (i, x) in c {
                    for (a, y) in d {
                        col.push((i * other.rows + a, x * y));
                    }
                }
                data.push(col);
            }
        }
        Matrix { rows: self.rows * other.rows, cols: self.cols * other.cols, data }
    }

    pub fn map_entries(&self, mut f: impl FnMut(usize, usize, &BigInt) -> BigInt) -> Matrix {
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c.iter()
                    .map(|(i, v)| (*i, f(*i, j, v)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data
            .iter()
            .flatten()
            .map(|(_, v)| num_traits::Signed::abs(v))
            .max()
            .unwrap_or_default()
    }
}

fn normalize(rows: usize, mut c: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    c.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(c.len());
    for (i, v) in c {
        assert!(i < rows, "row index out of range");
        match out.last_mut() {
            Some((k, w)) if *k == i => *w += v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn bigvec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols)
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), m(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), m(&[&[1, 3], &[2, 4]]));
        assert_eq!(a.apply(&bigvec(&[1, -1])), bigvec(&[-1, -1]));
    }

    #[test]
    fn stacking_and_kron() {
        let a = m(&[&[1, 2]]);
        let i2 = Matrix::identity(2);
        assert_eq!(a.vstack(&a).to_rows(), m(&[&[1, 2], &[1, 2]]).to_rows());
        assert_eq!(a.kron(&i2), m(&[&[1, 0, 2, 0], &[0, 1, 0, 2]]));
        assert_eq!(Matrix::block_diag(&[&a, &a]), m(&[&[1, 2, 0, 0], &[0, 0, 1, 2]]));
    }

    #[test]
    fn cancellation_drops_zeros() {
        let a = m(&[&[1, 0]]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.sub(&a).nnz(), 0);
    }
}
