use super::lattice::{kernel_basis, Lattice, Solver};
use super::matrix::Matrix;
use super::snf::smith_normal_form;
use crate::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Finitely generated abelian group `Z^g / rowspan(relations)`.
#[derive(Clone)]
pub struct FgAbGroup {
    ngens: usize,
    relations: Matrix,
    canon: OnceLock<Arc<Canonical>>,
}

/// Smith coordinates: the group is `⊕ Z/orders[i]` with order 0 meaning a
/// free summand. Torsion coordinates precede free ones.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub orders: Vec<BigInt>,
    /// old coordinates -> canonical coordinates (`g' x g`)
    pub to_canon: Matrix,
    /// canonical generator -> representative in old coordinates (`g x g'`)
    pub from_canon: Matrix,
}

impl Canonical {
    pub fn torsion(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.orders.iter().enumerate().filter(|(_, o)| !o.is_zero())
    }

    pub fn num_torsion(&self) -> usize {
        self.orders.iter().filter(|o| !o.is_zero()).count()
    }

    /// Canonical coordinates reduced to `0 <= x < order`.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.to_canon.apply(x);
        for (v, o) in y.iter_mut().zip(&self.orders) {
            if !o.is_zero() {
                *v = v.mod_floor(o);
            }
        }
        y
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({} gens, {} rels = {})", self.ngens, self.relations.nrows(), self)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (free, tors) = self.decompose();
        write!(f, "{}", format_group(free, &tors))
    }
}

/// `Z^2 + Z/2 + Z/12`, or `0`.
pub fn format_group(free: usize, torsion: &[BigInt]) -> String {
    let mut parts: Vec<String> = torsion.iter().map(|t| format!("Z/{t}")).collect();
    match free {
        0 => {}
        1 => parts.insert(0, "Z".into()),
        n => parts.insert(0, format!("Z^{n}")),
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.ngens == other.ngens && self.relations == other.relations
    }
}

impl FgAbGroup {
    pub fn new(ngens: usize, relations: Matrix) -> Result<Self, Error> {
        if relations.ncols() != ngens {
            return Err(Error::Dimension(format!(
                "relations have {} columns for {} generators",
                relations.ncols(),
                ngens
            )));
        }
        Ok(FgAbGroup { ngens, relations, canon: OnceLock::new() })
    }

    pub fn free(n: usize) -> Self {
        FgAbGroup { ngens: n, relations: Matrix::zeros(0, n), canon: OnceLock::new() }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn cyclic(order: u64) -> Self {
        let rel = Matrix::from_rows(&[vec![BigInt::from(order)]], 1);
        FgAbGroup::new(1, rel).expect("shape")
    }

    /// `⊕ Z/t ⊕ Z^free` with the torsion generators first.
    pub fn from_invariants(free: usize, torsion: &[BigInt]) -> Self {
        let t = torsion.len();
        let rel = Matrix::from_triplets(
            t,
            t + free,
            torsion.iter().enumerate().map(|(i, o)| (i, i, o.clone())),
        );
        FgAbGroup::new(t + free, rel).expect("shape")
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn canonical(&self) -> &Canonical {
        self.canon.get_or_init(|| Arc::new(self.compute_canonical()))
    }

    fn compute_canonical(&self) -> Canonical {
        let g = self.ngens;
        let s = smith_normal_form(&self.relations);
        let d = |i: usize| -> BigInt {
            if i < s.rank {
                s.diag[i].clone()
            } else {
                BigInt::zero()
            }
        };
        let kept: Vec<usize> = (0..g).filter(|&i| !d(i).is_one()).collect();
        // x -> x V in row convention, so canonical coords are V^T x
        let to_canon = s.v.transpose().select_rows(&kept);
        let from_canon = s.v_inv.transpose().select_cols(&kept);
        Canonical { orders: kept.iter().map(|&i| d(i)).collect(), to_canon, from_canon }
    }

    /// `(free rank, torsion coefficients)`, torsion as a divisibility chain.
    pub fn decompose(&self) -> (usize, Vec<BigInt>) {
        let c = self.canonical();
        let free = c.orders.iter().filter(|o| o.is_zero()).count();
        let tors = c.orders.iter().filter(|o| !o.is_zero()).cloned().collect();
        (free, tors)
    }

    pub fn is_trivial(&self) -> bool {
        self.canonical().orders.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.canonical().orders.iter().all(Zero::is_zero)
    }

    pub fn isomorphic(&self, other: &FgAbGroup) -> bool {
        self.decompose() == other.decompose()
    }

    /// Order of the group, if finite.
    pub fn order(&self) -> Option<BigInt> {
        let (free, tors) = self.decompose();
        (free == 0).then(|| tors.iter().product())
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.canonical().reduce(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let d: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&d)
    }

    /// Normal form of an element: reduced canonical coordinates.
    pub fn normal_form(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.canonical().reduce(x)
    }

    pub fn unit(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.ngens];
        v[i] = BigInt::one();
        v
    }

    pub fn relation_lattice(&self) -> Lattice {
        let rows = self.relations.transpose();
        let vs: Vec<Vec<BigInt>> = (0..rows.ncols()).map(|j| rows.dense_column(j)).collect();
        Lattice::from_vectors(self.ngens, &vs)
    }

    pub fn direct_sum(groups: &[&FgAbGroup]) -> FgAbGroup {
        let ngens = groups.iter().map(|g| g.ngens).sum();
        let rels: Vec<Matrix> = groups.iter().map(|g| g.relations.transpose()).collect();
        let refs: Vec<&Matrix> = rels.iter().collect();
        FgAbGroup::new(ngens, Matrix::block_diag(&refs).transpose()).expect("shape")
    }

    /// `self ⊗ other`, generator `(i, a)` at index `i * other.ngens + a`.
    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        let r1 = self.relations.kron(&Matrix::identity(other.ngens));
        let r2 = Matrix::identity(self.ngens).kron(&other.relations);
        FgAbGroup::new(self.ngens * other.ngens, r1.vstack(&r2)).expect("shape")
    }

    /// Quotient by the subgroup generated by the columns of `gens`.
    pub fn quotient(&self, gens: &Matrix) -> FgAbGroup {
        assert_eq!(gens.nrows(), self.ngens);
        FgAbGroup::new(self.ngens, self.relations.vstack(&gens.transpose())).expect("shape")
    }

    /// `{x in Z^k : m x = 0 in self}` for an integer matrix `m` into this group.
    pub fn preimage_lattice(&self, m: &Matrix) -> Lattice {
        Lattice::from_vectors(m.ncols(), &self.preimage_basis(m))
    }

    /// Basis of `{y : m y = 0 in this group}`. The torsion columns are
    /// injective, so projecting the kernel of `[m | torsion]` loses nothing.
    pub fn preimage_basis(&self, m: &Matrix) -> Vec<Vec<BigInt>> {
        assert_eq!(m.nrows(), self.ngens);
        let c = self.canonical();
        let a = c.to_canon.mul(m);
        let tors: Vec<(usize, BigInt)> = c.torsion().map(|(i, o)| (i, o.clone())).collect();
        let e = Matrix::from_triplets(
            a.nrows(),
            tors.len(),
            tors.iter().enumerate().map(|(k, (i, o))| (*i, k, o.clone())),
        );
        let k = m.ncols();
        kernel_basis(&a.hstack(&e)).into_iter().map(|v| v[..k].to_vec()).collect()
    }
}

/// Homomorphism given by an integer matrix on generators (`target x source`).
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: Matrix,
}

impl GroupHom {
    /// Checks that every relation of the source maps to zero.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: Matrix) -> Result<Self, Error> {
        let h = Self::new_unchecked(source, target, matrix)?;
        let rel = h.source.relations.transpose();
        let img = h.matrix.mul(&rel);
        for j in 0..img.ncols() {
            if !h.target.is_zero_element(&img.dense_column(j)) {
                return Err(Error::IllDefined(format!("relation {j} does not map to zero")));
            }
        }
        Ok(h)
    }

    pub fn new_unchecked(source: FgAbGroup, target: FgAbGroup, matrix: Matrix) -> Result<Self, Error> {
        if matrix.nrows() != target.ngens || matrix.ncols() != source.ngens {
            return Err(Error::Dimension(format!(
                "hom matrix {}x{} for {} -> {} generators",
                matrix.nrows(),
                matrix.ncols(),
                source.ngens,
                target.ngens
            )));
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: Matrix::identity(g.ngens) }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.ngens, source.ngens),
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.apply(x)
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom, Error> {
        if first.target != self.source {
            return Err(Error::Dimension("composition of non-composable homs".into()));
        }
        Ok(GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        })
    }

    /// True if both maps agree on every generator.
    pub fn equals(&self, other: &GroupHom) -> bool {
        let d = self.matrix.sub(&other.matrix);
        (0..d.ncols()).all(|j| self.target.is_zero_element(&d.dense_column(j)))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.ncols()).all(|j| self.target.is_zero_element(&self.matrix.dense_column(j)))
    }

    /// Kernel as a new group with its inclusion into the source.
    pub fn kernel(&self) -> (FgAbGroup, GroupHom) {
        let basis = Matrix::from_dense_columns(self.source.ngens, &self.target.preimage_basis(&self.matrix));
        let l = basis.ncols();
        let rel_rows = self.source.relations.transpose();
        let rels: Vec<Vec<BigInt>> = if rel_rows.ncols() == 0 {
            vec![]
        } else {
            let solver = Solver::new(&basis);
            (0..rel_rows.ncols())
                .map(|j| {
                    solver
                        .solve(&rel_rows.dense_column(j))
                        .expect("source relations lie in the kernel lattice")
                })
                .collect()
        };
        let k = FgAbGroup::new(l, Matrix::from_dense_columns(l, &rels).transpose()).expect("shape");
        let incl = GroupHom { source: k.clone(), target: self.source.clone(), matrix: basis };
        (k, incl)
    }

    pub fn cokernel(&self) -> FgAbGroup {
        self.target.quotient(&self.matrix)
    }

    /// The image, presented on the source generators.
    pub fn image(&self) -> FgAbGroup {
        let basis = Matrix::from_dense_columns(self.source.ngens, &self.target.preimage_basis(&self.matrix));
        FgAbGroup::new(self.source.ngens, basis.transpose()).expect("shape")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Matrix in Smith coordinates of source and target, with torsion rows
    /// reduced modulo their orders.
    pub fn canonical_matrix(&self) -> Matrix {
        let cs = self.source.canonical();
        let ct = self.target.canonical();
        let m = ct.to_canon.mul(&self.matrix).mul(&cs.from_canon);
        m.map_entries(|i, _, v| {
            let o = &ct.orders[i];
            if o.is_zero() {
                v.clone()
            } else {
                v.mod_floor(o)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::matrix::{big, bigvec};
    use proptest::prelude::*;

    fn grp(g: usize, rels: Vec<Vec<i64>>) -> FgAbGroup {
        FgAbGroup::new(g, Matrix::from_rows(&rels, g)).unwrap()
    }

    #[test]
    fn decompositions() {
        assert_eq!(grp(2, vec![vec![4, 0], vec![0, 6]]).decompose(), (0, vec![big(2), big(12)]));
        assert_eq!(grp(3, vec![vec![2, 4, 0]]).decompose(), (2, vec![big(2)]));
        assert_eq!(grp(1, vec![vec![1]]).decompose(), (0, vec![]));
        assert_eq!(FgAbGroup::free(3).to_string(), "Z^3");
        assert_eq!(grp(2, vec![vec![4, 0], vec![0, 6]]).to_string(), "Z/2 + Z/12");
    }

    #[test]
    fn element_equality() {
        let g = grp(2, vec![vec![2, 0], vec![0, 3]]);
        assert!(g.elements_equal(&bigvec(&[3, 1]), &bigvec(&[1, 4])));
        assert!(!g.elements_equal(&bigvec(&[1, 0]), &bigvec(&[0, 0])));
        assert_eq!(g.order(), Some(big(6)));
    }

    #[test]
    fn ill_defined_hom_rejected() {
        let z2 = FgAbGroup::cyclic(2);
        let z = FgAbGroup::free(1);
        assert!(GroupHom::new(z2.clone(), z.clone(), Matrix::identity(1)).is_err());
        assert!(GroupHom::new(z.clone(), z2.clone(), Matrix::identity(1)).is_ok());
        let z4 = FgAbGroup::cyclic(4);
        assert!(GroupHom::new(z2, z4, Matrix::scalar(1, big(2))).is_ok());
    }

    #[test]
    fn kernel_of_multiplication() {
        // Z/12 --3--> Z/12 has kernel Z/3
        let g = FgAbGroup::cyclic(12);
        let h = GroupHom::new(g.clone(), g.clone(), Matrix::scalar(1, big(3))).unwrap();
        let (k, incl) = h.kernel();
        assert_eq!(k.decompose(), (0, vec![big(3)]));
        assert!(h.compose(&incl).unwrap().is_zero());
        assert!(incl.is_injective());
        assert_eq!(h.image().decompose(), (0, vec![big(4)]));
        assert_eq!(h.cokernel().decompose(), (0, vec![big(3)]));
    }

    // Oracle: for finite groups, count kernel/image elements by enumeration.
    proptest! {
        #[test]
        fn finite_kernel_count(a in 1u64..7, b in 1u64..7, m in proptest::collection::vec(-3i64..4, 4)) {
            let g = FgAbGroup::from_invariants(0, &[big(a as i64), big(b as i64)]);
            let t = FgAbGroup::from_invariants(0, &[big(6), big(4)]);
            let mat = Matrix::from_rows(&[vec![m[0], m[1]], vec![m[2], m[3]]], 2);
            let Ok(h) = GroupHom::new(g.clone(), t.clone(), mat) else { return Ok(()); };
            let mut count = 0u64;
            for x in 0..a { for y in 0..b {
                if t.is_zero_element(&h.apply(&bigvec(&[x as i64, y as i64]))) { count += 1; }
            }}
            let (k, _) = h.kernel();
            prop_assert_eq!(k.order(), Some(BigInt::from(count)));
            prop_assert_eq!(h.image().order(), Some(BigInt::from(a * b / count)));
        }
    }
}
