use super::matrix::Matrix;
use super::unitelim::UnitElim;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Sublattice of `Z^dim` kept as an echelon basis; supports incremental
/// insertion and exact membership tests.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    // (pivot column, row) sorted by pivot; pivot entry positive
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Vec<BigInt>> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn from_vectors<'a>(dim: usize, vs: impl IntoIterator<Item = &'a Vec<BigInt>>) -> Self {
        let mut l = Lattice::new(dim);
        for v in vs {
            l.insert(v.clone());
        }
        l
    }

    /// Add a generator; returns true if the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.dim, "lattice dimension mismatch");
        let mut grew = false;
        loop {
            let Some(p) = v.iter().position(|x| !x.is_zero()) else {
                return grew;
            };
            match self.rows.binary_search_by_key(&p, |r| r.0) {
                Err(at) => {
                    if v[p].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows.insert(at, (p, v));
                    self.reduce_above(at);
                    return true;
                }
                Ok(at) => {
                    let b = &self.rows[at].1;
                    if (&v[p] % &b[p]).is_zero() {
                        let q = &v[p] / &b[p];
                        for (x, y) in v.iter_mut().zip(b) {
                            *x -= &q * y;
                        }
                        continue;
                    }
                    let e = b[p].extended_gcd(&v[p]);
                    let (g, x, y) = if e.gcd.is_negative() {
                        (-e.gcd, -e.x, -e.y)
                    } else {
                        (e.gcd, e.x, e.y)
                    };
                    let (bp, vp) = (&b[p] / &g, &v[p] / &g);
                    let nb: Vec<BigInt> = b.iter().zip(&v).map(|(s, t)| &x * s + &y * t).collect();
                    let nv: Vec<BigInt> = b.iter().zip(&v).map(|(s, t)| &bp * t - &vp * s).collect();
                    self.rows[at].1 = nb;
                    self.reduce_above(at);
                    grew = true;
                    v = nv;
                }
            }
        }
    }

    // Keep entries above each pivot reduced to limit growth.
    fn reduce_above(&mut self, at: usize) {
        let (p, piv) = (self.rows[at].0, self.rows[at].1.clone());
        for k in 0..at {
            let q = self.rows[k].1[p].div_floor(&piv[p]);
            if !q.is_zero() {
                for (x, y) in self.rows[k].1.iter_mut().zip(&piv) {
                    *x -= &q * y;
                }
            }
        }
        for k in at + 1..self.rows.len() {
            let (pk, rk) = (self.rows[k].0, self.rows[k].1.clone());
            let q = self.rows[at].1[pk].div_floor(&rk[pk]);
            if !q.is_zero() {
                for (x, y) in self.rows[at].1.iter_mut().zip(&rk) {
                    *x -= &q * y;
                }
            }
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for (p, b) in &self.rows {
            if !v[..*p].iter().all(Zero::is_zero) {
                return false;
            }
            if v[*p].is_zero() {
                continue;
            }
            if !(&v[*p] % &b[*p]).is_zero() {
                return false;
            }
            let q = &v[*p] / &b[*p];
            for (x, y) in v.iter_mut().zip(b) {
                *x -= &q * y;
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().all(|b| self.contains(b))
    }

    /// Basis vectors as the columns of a `dim x rank` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_dense_columns(self.dim, &self.basis().cloned().collect::<Vec<_>>())
    }
}

/// Basis of `{x : A x = 0}`, as vectors.
pub fn kernel_basis(a: &Matrix) -> Vec<Vec<BigInt>> {
    UnitElim::new(a).kernel_basis()
}

/// Solves `A x = b` over the integers for many right-hand sides.
pub struct Solver {
    elim: UnitElim,
}

impl Solver {
    pub fn new(a: &Matrix) -> Self {
        Solver { elim: UnitElim::new(a) }
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        self.elim.solve(b)
    }
}
