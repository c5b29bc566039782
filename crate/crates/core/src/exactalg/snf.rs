use super::coeff::{with_fallback, Coeff};
use super::matrix::Matrix;
use num_bigint::BigInt;
use num_traits::Zero;

/// Smith normal form `U * A * V = S` with unimodular `U`, `V`.
///
/// `diag` holds the `min(rows, cols)` diagonal entries of `S`; the nonzero
/// ones come first, are positive, and each divides the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl Snf {
    pub fn s(&self) -> Matrix {
        let (r, c) = (self.u.nrows(), self.v.nrows());
        Matrix::from_triplets(
            r,
            c,
            self.diag.iter().enumerate().map(|(i, d)| (i, i, d.clone())),
        )
    }
}

pub fn smith_normal_form(a: &Matrix) -> Snf {
    with_fallback(
        || snf_tracked::<i64>(a),
        || snf_tracked::<BigInt>(a),
    )
}

/// Rank and the nonzero invariant factors, without transforms.
pub fn invariant_factors_dense(a: &Matrix) -> (usize, Vec<BigInt>) {
    with_fallback(
        || {
            let mut d = Dense::<i64>::from_matrix(a)?;
            let diag = reduce(&mut d, &mut NoTrack)?;
            Some(finish(diag))
        },
        || {
            let mut d = Dense::<BigInt>::from_matrix(a)?;
            let diag = reduce(&mut d, &mut NoTrack)?;
            Some(finish(diag))
        },
    )
}

fn finish<T: Coeff>(diag: Vec<T>) -> (usize, Vec<BigInt>) {
    let nz: Vec<BigInt> = diag.iter().filter(|d| !d.is_zero()).map(Coeff::to_big).collect();
    (nz.len(), nz)
}

fn snf_tracked<T: Coeff>(a: &Matrix) -> Option<Snf> {
    let mut d = Dense::<T>::from_matrix(a)?;
    let mut tr = Track {
        u: Dense::identity(a.nrows()),
        u_inv: Dense::identity(a.nrows()),
        v: Dense::identity(a.ncols()),
        v_inv: Dense::identity(a.ncols()),
    };
    let diag = reduce(&mut d, &mut tr)?;
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    Some(Snf {
        diag: diag.iter().map(Coeff::to_big).collect(),
        rank,
        u: tr.u.to_matrix(),
        u_inv: tr.u_inv.to_matrix(),
        v: tr.v.to_matrix(),
        v_inv: tr.v_inv.to_matrix(),
    })
}

pub(crate) struct Dense<T> {
    pub r: usize,
    pub c: usize,
    pub a: Vec<T>,
}

impl<T: Coeff> Dense<T> {
    pub fn zeros(r: usize, c: usize) -> Self {
        Dense { r, c, a: vec![T::zero(); r * c] }
    }

    fn identity(n: usize) -> Self {
        let mut d = Self::zeros(n, n);
        for i in 0..n {
            d.a[i * n + i] = T::one();
        }
        d
    }

    pub fn from_matrix(m: &Matrix) -> Option<Self> {
        let mut d = Self::zeros(m.nrows(), m.ncols());
        for (j, col) in m.columns().iter().enumerate() {
            for (i, v) in col {
                d.a[i * d.c + j] = T::from_big(v)?;
            }
        }
        Some(d)
    }

    fn to_matrix(&self) -> Matrix {
        Matrix::from_triplets(
            self.r,
            self.c,
            (0..self.r).flat_map(|i| {
                (0..self.c).filter_map(move |j| {
                    let v = &self.a[i * self.c + j];
                    (!v.is_zero()).then(|| (i, j, v.to_big()))
                })
            }),
        )
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.c + j]
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.c {
            self.a.swap(i * self.c + j, k * self.c + j);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for i in 0..self.r {
            self.a.swap(i * self.c + j, i * self.c + k);
        }
    }

    /// row_i += q * row_k
    fn add_row(&mut self, i: usize, k: usize, q: &T) -> Option<()> {
        for j in 0..self.c {
            let x = &self.a[k * self.c + j];
            if !x.is_zero() {
                let v = self.a[i * self.c + j].add(&x.mul(q)?)?;
                self.a[i * self.c + j] = v;
            }
        }
        Some(())
    }

    /// col_j += q * col_k
    fn add_col(&mut self, j: usize, k: usize, q: &T) -> Option<()> {
        for i in 0..self.r {
            let x = &self.a[i * self.c + k];
            if !x.is_zero() {
                let v = self.a[i * self.c + j].add(&x.mul(q)?)?;
                self.a[i * self.c + j] = v;
            }
        }
        Some(())
    }

    /// (row_i, row_k) <- (p*row_i + q*row_k, r*row_i + s*row_k)
    fn mix_rows(&mut self, i: usize, k: usize, m: &[T; 4]) -> Option<()> {
        for j in 0..self.c {
            let x = self.a[i * self.c + j].clone();
            let y = self.a[k * self.c + j].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self.a[i * self.c + j] = m[0].mul(&x)?.add(&m[1].mul(&y)?)?;
            self.a[k * self.c + j] = m[2].mul(&x)?.add(&m[3].mul(&y)?)?;
        }
        Some(())
    }

    /// (col_j, col_k) <- (p*col_j + q*col_k, r*col_j + s*col_k)
    fn mix_cols(&mut self, j: usize, k: usize, m: &[T; 4]) -> Option<()> {
        for i in 0..self.r {
            let x = self.a[i * self.c + j].clone();
            let y = self.a[i * self.c + k].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self.a[i * self.c + j] = m[0].mul(&x)?.add(&m[1].mul(&y)?)?;
            self.a[i * self.c + k] = m[2].mul(&x)?.add(&m[3].mul(&y)?)?;
        }
        Some(())
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for j in 0..self.c {
            let v = self.a[i * self.c + j].neg()?;
            self.a[i * self.c + j] = v;
        }
        Some(())
    }

    fn negate_col(&mut self, j: usize) -> Option<()> {
        for i in 0..self.r {
            let v = self.a[i * self.c + j].neg()?;
            self.a[i * self.c + j] = v;
        }
        Some(())
    }
}

/// Observer for the elementary operations performed on the working matrix.
trait Tracker<T> {
    fn swap_rows(&mut self, _i: usize, _k: usize) {}
    fn swap_cols(&mut self, _j: usize, _k: usize) {}
    fn add_row(&mut self, _i: usize, _k: usize, _q: &T) -> Option<()> {
        Some(())
    }
    fn add_col(&mut self, _j: usize, _k: usize, _q: &T) -> Option<()> {
        Some(())
    }
    fn mix_rows(&mut self, _i: usize, _k: usize, _m: &[T; 4], _inv: &[T; 4]) -> Option<()> {
        Some(())
    }
    fn mix_cols(&mut self, _j: usize, _k: usize, _m: &[T; 4], _inv: &[T; 4]) -> Option<()> {
        Some(())
    }
    fn negate_row(&mut self, _i: usize) -> Option<()> {
        Some(())
    }
}

struct NoTrack;
impl<T> Tracker<T> for NoTrack {}

struct Track<T> {
    u: Dense<T>,
    u_inv: Dense<T>,
    v: Dense<T>,
    v_inv: Dense<T>,
}

// Row operation E on A is mirrored as U <- E U and U_inv <- U_inv E^-1;
// column operation E as V <- V E and V_inv <- E^-1 V_inv.
impl<T: Coeff> Tracker<T> for Track<T> {
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.u.swap_rows(i, k);
        self.u_inv.swap_cols(i, k);
    }
    fn swap_cols(&mut self, j: usize, k: usize) {
        self.v.swap_cols(j, k);
        self.v_inv.swap_rows(j, k);
    }
    fn add_row(&mut self, i: usize, k: usize, q: &T) -> Option<()> {
        self.u.add_row(i, k, q)?;
        self.u_inv.add_col(k, i, &q.neg()?)
    }
    fn add_col(&mut self, j: usize, k: usize, q: &T) -> Option<()> {
        self.v.add_col(j, k, q)?;
        self.v_inv.add_row(k, j, &q.neg()?)
    }
    fn mix_rows(&mut self, i: usize, k: usize, m: &[T; 4], inv: &[T; 4]) -> Option<()> {
        self.u.mix_rows(i, k, m)?;
        // columns of U_inv transform by the transpose of the inverse block
        let t = [inv[0].clone(), inv[2].clone(), inv[1].clone(), inv[3].clone()];
        self.u_inv.mix_cols(i, k, &t)
    }
    fn mix_cols(&mut self, j: usize, k: usize, m: &[T; 4], inv: &[T; 4]) -> Option<()> {
        self.v.mix_cols(j, k, m)?;
        let t = [inv[0].clone(), inv[2].clone(), inv[1].clone(), inv[3].clone()];
        self.v_inv.mix_rows(j, k, &t)
    }
    fn negate_row(&mut self, i: usize) -> Option<()> {
        self.u.negate_row(i)?;
        self.u_inv.negate_col(i)
    }
}

/// Diagonalize in place; returns the diagonal.
fn reduce<T: Coeff, K: Tracker<T>>(d: &mut Dense<T>, tr: &mut K) -> Option<Vec<T>> {
    let k = d.r.min(d.c);
    let mut diag = Vec::with_capacity(k);
    let mut t = 0;
    while t < k {
        // smallest nonzero entry of the trailing block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..d.r {
            for j in t..d.c {
                let v = d.at(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| v.abs_lt(d.at(bi, bj))) {
                    best = Some((i, j));
                    if v.is_unit() {
                        break;
                    }
                }
            }
            if best.map_or(false, |(bi, bj)| d.at(bi, bj).is_unit()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        tr.swap_rows(t, pi);
        d.swap_cols(t, pj);
        tr.swap_cols(t, pj);
        loop {
            clear_column(d, tr, t)?;
            clear_row(d, tr, t)?;
            if (t + 1..d.r).any(|i| !d.at(i, t).is_zero()) {
                continue;
            }
            // divisibility: pull an offending row into the pivot row
            let p = d.at(t, t).clone();
            let bad = (t + 1..d.r).find(|&i| (t + 1..d.c).any(|j| !p.divides(d.at(i, j))));
            match bad {
                Some(i) => {
                    let one = T::one();
                    d.add_row(t, i, &one)?;
                    tr.add_row(t, i, &one)?;
                }
                None => break,
            }
        }
        if d.at(t, t).is_negative() {
            d.negate_row(t)?;
            tr.negate_row(t)?;
        }
        diag.push(d.at(t, t).clone());
        t += 1;
    }
    while diag.len() < k {
        diag.push(T::zero());
    }
    Some(diag)
}

fn clear_column<T: Coeff, K: Tracker<T>>(d: &mut Dense<T>, tr: &mut K, t: usize) -> Option<()> {
    for i in t + 1..d.r {
        let b = d.at(i, t).clone();
        if b.is_zero() {
            continue;
        }
        let a = d.at(t, t).clone();
        if a.divides(&b) {
            let q = b.div_exact(&a).neg()?;
            d.add_row(i, t, &q)?;
            tr.add_row(i, t, &q)?;
        } else {
            let (g, x, y) = a.egcd(&b)?;
            let (a1, b1) = (a.div_exact(&g), b.div_exact(&g));
            let m = [x.clone(), y.clone(), b1.neg()?, a1.clone()];
            let inv = [a1, y.neg()?, b1, x];
            d.mix_rows(t, i, &m)?;
            tr.mix_rows(t, i, &m, &inv)?;
        }
    }
    Some(())
}

fn clear_row<T: Coeff, K: Tracker<T>>(d: &mut Dense<T>, tr: &mut K, t: usize) -> Option<()> {
    for j in t + 1..d.c {
        let b = d.at(t, j).clone();
        if b.is_zero() {
            continue;
        }
        let a = d.at(t, t).clone();
        if a.divides(&b) {
            let q = b.div_exact(&a).neg()?;
            d.add_col(j, t, &q)?;
            tr.add_col(j, t, &q)?;
        } else {
            let (g, x, y) = a.egcd(&b)?;
            let (a1, b1) = (a.div_exact(&g), b.div_exact(&g));
            let m = [x.clone(), y.clone(), b1.neg()?, a1.clone()];
            let inv = [a1, y.neg()?, b1, x];
            d.mix_cols(t, j, &m)?;
            tr.mix_cols(t, j, &m, &inv)?;
        }
    }
    Some(())
}

/// Rank of an integer matrix.
pub fn rank(a: &Matrix) -> usize {
    invariant_factors_dense(a).0
}

pub fn is_unimodular(a: &Matrix) -> bool {
    a.nrows() == a.ncols() && {
        let (r, f) = invariant_factors_dense(a);
        r == a.nrows() && f.iter().all(|x| *x == BigInt::from(1))
    }
}

pub(crate) fn nonzero_nontrivial(f: &[BigInt]) -> Vec<BigInt> {
    f.iter()
        .filter(|x| !Zero::is_zero(*x) && **x != BigInt::from(1))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::matrix::big;
    use proptest::prelude::*;

    fn m(rows: Vec<Vec<i64>>, cols: usize) -> Matrix {
        Matrix::from_rows(&rows, cols)
    }

    fn check(a: &Matrix) -> Snf {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.s(), "U A V = S");
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        for w in s.diag[..s.rank].windows(2) {
            assert!(Zero::is_zero(&(&w[1] % &w[0])), "divisibility chain");
        }
        assert!(s.diag[s.rank..].iter().all(Zero::is_zero));
        s
    }

    #[test]
    fn small_examples() {
        let s = check(&m(vec![vec![2, 4], vec![6, 8]], 2));
        assert_eq!(s.diag, vec![big(2), big(4)]);
        let s = check(&m(vec![vec![4, 0], vec![0, 6]], 2));
        assert_eq!(s.diag, vec![big(2), big(12)]);
        let s = check(&m(vec![vec![0, 0, 0]], 3));
        assert_eq!(s.rank, 0);
        let s = check(&Matrix::zeros(0, 3));
        assert!(s.diag.is_empty());
    }

    #[test]
    fn forced_bigint_path() {
        let x = 1i64 << 40;
        let s = check(&m(vec![vec![x, 1], vec![1, x]], 2));
        assert_eq!(s.diag[1], big(x) * big(x) - 1);
    }

    // Oracle: for a 2x2 matrix the first invariant factor is the gcd of
    // the entries and the product of both is |det|.
    proptest! {
        #[test]
        fn two_by_two_oracle(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
            let s = check(&m(vec![vec![a, b], vec![c, d]], 2));
            let g = num_integer::gcd(num_integer::gcd(a, b), num_integer::gcd(c, d));
            prop_assert_eq!(s.diag[0].clone(), big(g));
            prop_assert_eq!(&s.diag[0] * &s.diag[1], big((a * d - b * c).abs()));
        }

        #[test]
        fn random_shapes(rows in 0usize..5, cols in 0usize..5, seed in proptest::collection::vec(-9i64..9, 25)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            let a = m(data, cols);
            let s = check(&a);
            let (r, f) = invariant_factors_dense(&a);
            prop_assert_eq!(r, s.rank);
            prop_assert_eq!(f, s.diag[..s.rank].to_vec());
        }
    }
}
