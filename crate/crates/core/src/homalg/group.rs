use crate::exactalg::{CanonicalComplex, FgAbGroup, Matrix};
use crate::injcat::Perm;
use crate::tamemod::SigmaModule;
use crate::Error;
use num_bigint::BigInt;
use rustc_hash::FxHashMap;

/// Largest bar term `B ⊗ Z[(Σ_n − e)^p]` we agree to build.
pub const GROUP_LIMIT: usize = 400_000;

/// `H_p(Σ_n; B)` for `p = 0..=p_max` from the normalized bar complex
/// `d(b ⊗ [g_1|…|g_p]) = g_1^{-1} b ⊗ [g_2|…] + Σ (-1)^i b ⊗ […|g_i g_{i+1}|…] + (-1)^p b ⊗ [g_1|…|g_{p-1}]`.
pub fn group_homology(b: &SigmaModule, p_max: usize) -> Result<Vec<FgAbGroup>, Error> {
    let n = b.degree();
    let elems: Vec<Perm> = Perm::all(n).into_iter().filter(|g| !g.is_identity()).collect();
    let index: FxHashMap<Perm, usize> = elems.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let k = elems.len();
    let canon = b.group().canonical();
    let r = canon.orders.len();
    let top = p_max + 1;
    let size = k.checked_pow(top as u32).and_then(|c| c.checked_mul(r)).unwrap_or(usize::MAX);
    if size > GROUP_LIMIT {
        return Err(Error::ResourceGuard(format!(
            "bar complex of Σ_{n} up to degree {top} needs {size} generators; limit {GROUP_LIMIT}"
        )));
    }
    // action of g^{-1} in canonical coordinates
    let inv_action: Vec<Matrix> = elems
        .iter()
        .map(|g| canon.to_canon.mul(&b.perm_matrix(&g.inverse())).mul(&canon.from_canon))
        .collect();
    // tuples in base-k order, first entry most significant
    let mut orders = Vec::new();
    let mut d = vec![Matrix::zeros(0, r)];
    for p in 0..=top {
        let count = k.pow(p as u32);
        orders.push((0..count).flat_map(|_| canon.orders.iter().cloned()).collect::<Vec<BigInt>>());
        if p == 0 {
            continue;
        }
        let mut trip = Vec::new();
        let mut tuple = vec![0usize; p];
        let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &x| acc * k + x);
        for col_tuple in 0..count {
            let mut c = col_tuple;
            for slot in tuple.iter_mut().rev() {
                *slot = c % k;
                c /= k;
            }
            let face0 = encode(&tuple[1..]);
            let last = encode(&tuple[..p - 1]);
            let mut inner = Vec::new();
            for i in 1..p {
                let prod = elems[tuple[i - 1]].compose(&elems[tuple[i]]);
                if prod.is_identity() {
                    continue;
                }
                let mut t = tuple.clone();
                t.splice(i - 1..=i, [index[&prod]]);
                inner.push((encode(&t), if i % 2 == 0 { 1i64 } else { -1 }));
            }
            let sign_last = if p % 2 == 0 { 1i64 } else { -1 };
            for j in 0..r {
                let col = col_tuple * r + j;
                for (i, v) in inv_action[tuple[0]].column(j) {
                    trip.push((face0 * r + i, col, v.clone()));
                }
                for &(t, s) in &inner {
                    trip.push((t * r + j, col, BigInt::from(s)));
                }
                trip.push((last * r + j, col, BigInt::from(sign_last)));
            }
        }
        d.push(Matrix::from_triplets(k.pow(p as u32 - 1) * r, count * r, trip));
    }
    let cx = CanonicalComplex { orders, d };
    (0..=p_max).map(|p| cx.homology(p)).collect()
}
