//! Exhaustive goodness check over tiny fields.
//!
//! Enumerates every pair `(X ⊂ A*, Y ⊂ A)` of the requested dimensions and
//! tests the open-locus conditions straight from the definitions: the pairing
//! `x(y u)` vanishes, and the products `Y.U`, `U.X` have full dimension. The
//! dual product is evaluated as `(u·φ)(e_i) = φ(e_i u)` without going through
//! the library's action matrices.

use grassmann_core::{Algebra, Element, Matrix, PrimeField, Subspace};

use crate::error::{HarnessError, Result};

pub const MAX_TOY_DIM: usize = 4;
pub const MAX_TOY_PRIME: u64 = 7;

/// Every `k`-dimensional subspace of `F_p^n`, as reduced echelon bases.
pub fn enumerate_subspaces(field: PrimeField, n: usize, k: usize) -> Vec<Vec<Vec<u64>>> {
    let p = field.modulus();
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        let free: Vec<(usize, usize)> =
            (0..k).flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c))).collect();
        let total = p.pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u64; n]; k];
            for (i, &c) in pivots.iter().enumerate() {
                rows[i][c] = 1;
            }
            for &(i, c) in &free {
                rows[i][c] = code % p;
                code /= p;
            }
            out.push(rows);
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    for last in (k - 1)..n {
        for mut c in combinations(last, k - 1) {
            c.push(last);
            out.push(c);
        }
    }
    out
}

fn dot(f: PrimeField, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

fn rank(f: PrimeField, n: usize, rows: &[Vec<u64>]) -> usize {
    Matrix::from_rows(f, n, rows).rank()
}

/// The open-locus test for one pair, from the definitions.
pub fn direct_g_check(alg: &Algebra, x: &[Vec<u64>], y: &[Vec<u64>], u: &[Vec<u64>]) -> bool {
    let f = alg.field();
    let n = alg.dim();
    let yu: Vec<Vec<u64>> = y
        .iter()
        .flat_map(|yv| u.iter().map(move |uv| (yv, uv)))
        .map(|(yv, uv)| alg.mul(&Element::new(yv.clone()), &Element::new(uv.clone())).into_coords())
        .collect();
    if !x.iter().all(|xv| yu.iter().all(|w| dot(f, xv, w) == 0)) {
        return false;
    }
    if rank(f, n, &yu) != u.len() * y.len() {
        return false;
    }
    let ux: Vec<Vec<u64>> = u
        .iter()
        .flat_map(|uv| x.iter().map(move |xv| (uv, xv)))
        .map(|(uv, xv)| {
            (0..n)
                .map(|i| {
                    let eiu = alg.mul(&alg.basis_element(i), &Element::new(uv.clone()));
                    dot(f, xv, eiu.coords())
                })
                .collect()
        })
        .collect();
    rank(f, n, &ux) == u.len() * x.len()
}

/// Whether `G(r, s, U)` has a point over the finite field itself.
pub fn toy_oracle_goodness(alg: &Algebra, u: &Subspace, r: usize, s: usize) -> Result<bool> {
    let n = alg.dim();
    let p = alg.field().modulus();
    if n > MAX_TOY_DIM || p > MAX_TOY_PRIME {
        return Err(HarnessError::InstanceTooLarge(format!(
            "n = {n}, p = {p}; the oracle handles n <= {MAX_TOY_DIM}, p <= {MAX_TOY_PRIME}"
        )));
    }
    if r > n || s > n {
        return Ok(false);
    }
    if u.is_zero() {
        return Ok(true);
    }
    let ub = u.basis().to_rows();
    let xs = enumerate_subspaces(alg.field(), n, r);
    let ys = enumerate_subspaces(alg.field(), n, s);
    Ok(ys.iter().any(|y| xs.iter().any(|x| direct_g_check(alg, x, y, &ub))))
}
