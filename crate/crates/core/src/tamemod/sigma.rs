use crate::exactalg::{FgAbGroup, GroupHom, Matrix};
use crate::injcat::Perm;
use crate::Error;
use num_bigint::BigInt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// An abelian group with a left action of the symmetric group on `n`
/// letters, given on adjacent transpositions.
#[derive(Debug)]
pub struct SigmaModule {
    n: usize,
    group: FgAbGroup,
    gens: Vec<Matrix>,
    cache: Mutex<HashMap<Perm, Arc<Matrix>>>,
}

impl Clone for SigmaModule {
    fn clone(&self) -> Self {
        SigmaModule { n: self.n, group: self.group.clone(), gens: self.gens.clone(), cache: Mutex::default() }
    }
}

impl SigmaModule {
    /// Checks well-definedness, involutions, braid and commuting relations.
    pub fn new(n: usize, group: FgAbGroup, gens: Vec<Matrix>) -> Result<Self, Error> {
        if gens.len() != n.saturating_sub(1) {
            return Err(Error::Dimension(format!("need {} transpositions", n.saturating_sub(1))));
        }
        let g = group.ngens();
        let id = Matrix::identity(g);
        let same = |a: &Matrix, b: &Matrix| {
            let d = a.sub(b);
            (0..g).all(|j| group.is_zero_element(&d.dense_column(j)))
        };
        for (i, s) in gens.iter().enumerate() {
            GroupHom::new(group.clone(), group.clone(), s.clone())
                .map_err(|_| Error::InvalidFunctor(format!("s_{} is not well defined", i + 1)))?;
            if !same(&s.mul(s), &id) {
                return Err(Error::InvalidFunctor(format!("s_{} is not an involution", i + 1)));
            }
        }
        for i in 0..gens.len().saturating_sub(1) {
            let (a, b) = (&gens[i], &gens[i + 1]);
            if !same(&a.mul(b).mul(a), &b.mul(a).mul(b)) {
                return Err(Error::InvalidFunctor(format!("braid relation fails for s_{}", i + 1)));
            }
        }
        for i in 0..gens.len() {
            for j in i + 2..gens.len() {
                if !same(&gens[i].mul(&gens[j]), &gens[j].mul(&gens[i])) {
                    return Err(Error::InvalidFunctor(format!("s_{} and s_{} do not commute", i + 1, j + 1)));
                }
            }
        }
        Ok(SigmaModule { n, group, gens, cache: Mutex::default() })
    }

    pub fn trivial(n: usize, group: FgAbGroup) -> Self {
        let g = group.ngens();
        SigmaModule { n, group, gens: vec![Matrix::identity(g); n.saturating_sub(1)], cache: Mutex::default() }
    }

    /// Transpositions act by `-1`.
    pub fn signed(n: usize, group: FgAbGroup) -> Self {
        let g = group.ngens();
        SigmaModule {
            n,
            group,
            gens: vec![Matrix::scalar(g, BigInt::from(-1)); n.saturating_sub(1)],
            cache: Mutex::default(),
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn transposition(&self, i: usize) -> &Matrix {
        &self.gens[i - 1]
    }

    pub fn perm_matrix(&self, g: &Perm) -> Arc<Matrix> {
        if let Some(m) = self.cache.lock().expect("cache lock").get(g) {
            return m.clone();
        }
        let mut acc = Matrix::identity(self.group.ngens());
        for i in g.reduced_word() {
            acc = acc.mul(&self.gens[i - 1]);
        }
        let acc = Arc::new(acc);
        self.cache.lock().expect("cache lock").insert(g.clone(), acc.clone());
        acc
    }

    /// Same group with every permutation additionally multiplied by its sign.
    pub fn sign_twisted(&self) -> SigmaModule {
        let minus = BigInt::from(-1);
        SigmaModule {
            n: self.n,
            group: self.group.clone(),
            gens: self.gens.iter().map(|m| m.scale(&minus)).collect(),
            cache: Mutex::default(),
        }
    }
}
