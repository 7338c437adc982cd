//! Incidence pairs `(X ⊂ A*, Y ⊂ A)` with `⟨Y.U, X⟩ = 0` for a fixed `U ⊂ A`.
//!
//! The closed locus `G'(r, s, U)` is cut out by the vanishing of the pairing.
//! Its open part `G(r, s, U)` additionally asks both products to have the
//! largest possible dimension: `dim U.X = u r` and `dim Y.U = u s`. A subspace
//! `U` is good for `(r, s)` when `G(r, s, U)` has a rational point, and
//! [`certify`] searches for one by sampling.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::subspace::{dual_product, gl1_translate, right_product, Side, Subspace};

/// Default number of draws per sampling stage.
pub const DEFAULT_BUDGET: usize = 64;

/// A point of `G'(r, s, U)` with the dimensions of both products cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncidencePoint {
    x: Subspace,
    y: Subspace,
    u: Subspace,
    ux_dim: usize,
    yu_dim: usize,
}

impl IncidencePoint {
    /// Validates sides, ambient dimensions and `⟨Y.U, X⟩ = 0`.
    pub fn new(alg: &Algebra, x: Subspace, y: Subspace, u: Subspace) -> Result<Self> {
        let n = alg.dim();
        if x.side() != Side::Dual || y.side() != Side::Primal || u.side() != Side::Primal {
            return Err(Error::SideMismatch);
        }
        if x.ambient() != n || y.ambient() != n || u.ambient() != n {
            return Err(Error::Shape("subspace ambient differs from algebra dimension"));
        }
        let yu = right_product(alg, &y, &u);
        if !yu.pairs_to_zero(&x) {
            return Err(Error::NotInLocus);
        }
        let ux_dim = dual_product(alg, &u, &x).dim();
        Ok(IncidencePoint { yu_dim: yu.dim(), ux_dim, x, y, u })
    }

    pub fn x(&self) -> &Subspace {
        &self.x
    }

    pub fn y(&self) -> &Subspace {
        &self.y
    }

    pub fn u(&self) -> &Subspace {
        &self.u
    }

    /// `dim X`.
    pub fn r(&self) -> usize {
        self.x.dim()
    }

    /// `dim Y`.
    pub fn s(&self) -> usize {
        self.y.dim()
    }

    pub fn u_dim(&self) -> usize {
        self.u.dim()
    }

    pub fn ux_dim(&self) -> usize {
        self.ux_dim
    }

    pub fn yu_dim(&self) -> usize {
        self.yu_dim
    }

    pub fn ambient(&self) -> usize {
        self.y.ambient()
    }

    /// Membership in the open locus `G(r, s, U)`.
    pub fn is_g_point(&self) -> bool {
        let u = self.u_dim();
        self.ux_dim == u * self.r() && self.yu_dim == u * self.s()
    }

    /// `(a.X, a.Y)` with `U` held fixed.
    pub fn translate(&self, alg: &Algebra, a: &Element) -> Result<IncidencePoint> {
        let x = gl1_translate(alg, a, &self.x)?;
        let y = gl1_translate(alg, a, &self.y)?;
        IncidencePoint::new(alg, x, y, self.u.clone())
    }

    pub fn into_parts(self) -> (Subspace, Subspace, Subspace) {
        (self.x, self.y, self.u)
    }
}

/// The inequalities `n ≥ r u + s` and `n ≥ s u + r`.
pub fn admissible(n: usize, r: usize, s: usize, u: usize) -> bool {
    u <= n && n >= r * u + s && n >= s * u + r
}

pub fn check_admissible(n: usize, r: usize, s: usize, u: usize) -> Result<()> {
    if admissible(n, r, s, u) {
        Ok(())
    } else {
        Err(Error::DimensionConstraints { n, r, s, u })
    }
}

/// `⟨Y.U, X⟩ = 0` evaluated directly on products `y·u`.
pub fn in_g_prime_pairing(alg: &Algebra, x: &Subspace, y: &Subspace, u: &Subspace) -> bool {
    right_product(alg, y, u).pairs_to_zero(x)
}

/// The same condition read as `Y ⊆ (U.X)^⊥`.
pub fn in_g_prime_annihilator(alg: &Algebra, x: &Subspace, y: &Subspace, u: &Subspace) -> bool {
    dual_product(alg, u, x).annihilator().contains(y)
}

pub fn in_g_prime(alg: &Algebra, x: &Subspace, y: &Subspace, u: &Subspace) -> bool {
    let direct = in_g_prime_pairing(alg, x, y, u);
    debug_assert_eq!(direct, in_g_prime_annihilator(alg, x, y, u));
    direct
}

pub fn in_g(alg: &Algebra, x: &Subspace, y: &Subspace, u: &Subspace) -> Result<bool> {
    let (r, s, ud) = (x.dim(), y.dim(), u.dim());
    check_admissible(alg.dim(), r, s, ud)?;
    if !in_g_prime(alg, x, y, u) {
        return Ok(false);
    }
    Ok(dual_product(alg, u, x).dim() == ud * r && right_product(alg, y, u).dim() == ud * s)
}

/// Samples a point of `G(r, s, U)`: first `Y` with `dim Y.U = u s`, then
/// `X ⊆ (Y.U)^⊥` with `dim U.X = u r`.
pub fn sample_g_point<R: RngCore + ?Sized>(
    alg: &Algebra,
    r: usize,
    s: usize,
    u: &Subspace,
    rng: &mut R,
    budget: usize,
) -> Result<IncidencePoint> {
    let n = alg.dim();
    let ud = u.dim();
    check_admissible(n, r, s, ud)?;
    let field = alg.field();
    for _ in 0..budget {
        let y = Subspace::random(field, Side::Primal, n, s, rng, budget)?;
        let yu = right_product(alg, &y, u);
        if yu.dim() != ud * s {
            continue;
        }
        let room = yu.annihilator();
        for _ in 0..budget {
            let x = room.random_within(r, rng, budget)?;
            if dual_product(alg, u, &x).dim() == ud * r {
                return IncidencePoint::new(alg, x, y, u.clone());
            }
        }
    }
    Err(Error::RetryBudgetExhausted { stage: "incidence point", attempts: budget })
}

/// The differential `Θ : Hom(X, A*/X) ⊕ Hom(Y, A/Y) → (X ⊗ Y ⊗ U)*`,
/// `(f, g) ↦ (x ⊗ y ⊗ z ↦ f(x)(y z) + x(g(y) z))`.
///
/// Rows are indexed by basis triples `(x_i, y_j, u_k)` in lexicographic
/// order. Columns list the `f` block then the `g` block; inside a block the
/// index is `(basis vector, complement vector)` in lexicographic order, where
/// the complement of a subspace is spanned by the coordinate vectors at its
/// non-pivot columns.
pub fn theta_matrix(alg: &Algebra, pt: &IncidencePoint) -> Matrix {
    let field = alg.field();
    let n = alg.dim();
    let (r, s, u) = (pt.r(), pt.s(), pt.u_dim());
    let xb = pt.x().basis();
    let yb = pt.y().basis();
    let ub = pt.u().basis();
    let x_complement = pt.x().basis().rref().free_columns();
    let y_complement = pt.y().basis().rref().free_columns();

    let rows = r * s * u;
    let f_cols = r * (n - r);
    let mut theta = Matrix::zeros(field, rows, f_cols + s * (n - s));

    // y_j · u_k
    let products: Vec<Vec<u64>> =
        (0..s).flat_map(|j| (0..u).map(move |k| (j, k))).map(|(j, k)| alg.mul_coords(yb.row(j), ub.row(k))).collect();
    // e_l · u_k for l in the complement of Y
    let shifted: Vec<Vec<u64>> = y_complement
        .iter()
        .flat_map(|&l| (0..u).map(move |k| (l, k)))
        .map(|(l, k)| {
            let mut e = alloc::vec![0; n];
            e[l] = 1;
            alg.mul_coords(&e, ub.row(k))
        })
        .collect();

    for i in 0..r {
        for j in 0..s {
            for k in 0..u {
                let row = (i * s + j) * u + k;
                let yz = &products[j * u + k];
                for (c, &col) in x_complement.iter().enumerate() {
                    theta.set(row, i * (n - r) + c, yz[col]);
                }
                for c in 0..y_complement.len() {
                    let gz = &shifted[c * u + k];
                    let value = xb.row(i).iter().zip(gz).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)));
                    theta.set(row, f_cols + j * (n - s) + c, value);
                }
            }
        }
    }
    theta
}

pub fn tangent_theta_rank(alg: &Algebra, pt: &IncidencePoint) -> usize {
    theta_matrix(alg, pt).rank()
}

/// Dimension of the Zariski tangent space of `G'(r, s, U)` at `pt`.
pub fn tangent_dimension(alg: &Algebra, pt: &IncidencePoint) -> usize {
    let n = alg.dim();
    let (r, s) = (pt.r(), pt.s());
    r * (n - r) + s * (n - s) - tangent_theta_rank(alg, pt)
}

/// `r(n - r) + s(n - s) - s r u`.
pub fn expected_g_dimension(n: usize, r: usize, s: usize, u: usize) -> usize {
    r * (n - r) + s * (n - s) - s * r * u
}

/// An explicit point of `G(r, s, U)` together with its `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodWitness {
    pub u: Subspace,
    pub x: Subspace,
    pub y: Subspace,
}

/// The monomial witness in `F_p[t]/(f)`.
///
/// For `s ≥ r`: `X = ⟨1, …, t^{n-r-1}⟩^⊥`, `Y = ⟨1, …, t^{s-1}⟩`,
/// `U = ⟨1, t^s, …, t^{(u-1)s}⟩`. For `r > s` the roles are swapped through
/// the module isomorphism `A → A*`, `a ↦ a·ψ` with `ψ` the coefficient of
/// `t^{n-1}`: `X = ⟨1, …, t^{r-1}⟩·ψ`, `Y = (⟨1, …, t^{n-s-1}⟩·ψ)^⊥` and
/// `U = ⟨1, t^r, …, t^{(u-1)r}⟩`.
pub fn good_witness_etale(alg: &Algebra, r: usize, s: usize, u: usize) -> Result<GoodWitness> {
    let n = alg.dim();
    check_admissible(n, r, s, u)?;
    let t = alg.generator()?;
    let field = alg.field();
    let powers = |exponents: &mut dyn Iterator<Item = usize>| -> Matrix {
        let mut m = Matrix::zeros(field, 0, n);
        for e in exponents {
            m.push_row(alg.pow(&t, e as u64).coords());
        }
        m
    };

    let witness = if s >= r {
        let step = if s == 0 { 1 } else { s };
        GoodWitness {
            u: Subspace::span(Side::Primal, &powers(&mut (0..u).map(|k| k * step))),
            x: Subspace::span(Side::Primal, &powers(&mut (0..n - r))).annihilator(),
            y: Subspace::span(Side::Primal, &powers(&mut (0..s))),
        }
    } else {
        let mut psi = alloc::vec![0; n];
        psi[n - 1] = 1;
        let to_dual = |m: &Matrix| -> Matrix {
            let mut out = Matrix::zeros(field, 0, n);
            for row in m.row_iter() {
                out.push_row(&alg.dual_module_action_matrix(&Element::new(row.to_vec())).mul_vec(&psi));
            }
            out
        };
        GoodWitness {
            u: Subspace::span(Side::Primal, &powers(&mut (0..u).map(|k| k * r))),
            x: Subspace::span(Side::Dual, &to_dual(&powers(&mut (0..r)))),
            y: Subspace::span(Side::Dual, &to_dual(&powers(&mut (0..n - s)))).annihilator(),
        }
    };
    if witness.u.dim() != u || !in_g(alg, &witness.x, &witness.y, &witness.u)? {
        return Err(Error::NotInLocus);
    }
    Ok(witness)
}

/// A verified point of `G(r, s, U)` proving `U` good for `(r, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessCertificate {
    pub r: usize,
    pub s: usize,
    pub point: IncidencePoint,
}

impl GoodnessCertificate {
    pub fn ux_dim(&self) -> usize {
        self.point.ux_dim()
    }

    pub fn yu_dim(&self) -> usize {
        self.point.yu_dim()
    }
}

/// Outcome of a goodness search for one `(r, s)`.
///
/// `NotProven` only means the sampler gave up; it is never a proof that `U`
/// is bad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoodnessVerdict {
    Certified(Box<GoodnessCertificate>),
    NotProven { r: usize, s: usize, attempts: usize },
}

impl GoodnessVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, GoodnessVerdict::Certified(_))
    }
}

pub fn certify<R: RngCore + ?Sized>(
    alg: &Algebra,
    u: &Subspace,
    r: usize,
    s: usize,
    rng: &mut R,
    budget: usize,
) -> Result<GoodnessCertificate> {
    let point = sample_g_point(alg, r, s, u, rng, budget)?;
    debug_assert!(point.is_g_point());
    Ok(GoodnessCertificate { r, s, point })
}

/// Certifies `U` pair by pair; sampling failures become `NotProven`.
pub fn is_good<R: RngCore + ?Sized>(
    alg: &Algebra,
    u: &Subspace,
    pairs: &[(usize, usize)],
    rng: &mut R,
    budget: usize,
) -> Result<Vec<GoodnessVerdict>> {
    for &(r, s) in pairs {
        check_admissible(alg.dim(), r, s, u.dim())?;
    }
    pairs
        .iter()
        .map(|&(r, s)| match certify(alg, u, r, s, rng, budget) {
            Ok(cert) => Ok(GoodnessVerdict::Certified(Box::new(cert))),
            Err(Error::RetryBudgetExhausted { .. }) => Ok(GoodnessVerdict::NotProven { r, s, attempts: budget }),
            Err(e) => Err(e),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use alloc::string::ToString;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cube_root_two() -> Algebra {
        let f = PrimeField::default();
        Algebra::etale_from_poly(f, &[f.neg(2), 0, 0]).unwrap()
    }

    fn split(f: PrimeField, n: usize) -> Algebra {
        let mut c = alloc::vec![alloc::vec![alloc::vec![0; n]; n]; n];
        for i in 0..n {
            c[i][i][i] = 1;
        }
        Algebra::from_structure_constants(f, &c, &alloc::vec![1; n]).unwrap()
    }

    #[test]
    fn zero_u_is_vacuous() {
        let a = cube_root_two();
        let f = a.field();
        let zero = Subspace::zero(f, Side::Primal, 3);
        let x = Subspace::full(f, Side::Dual, 3);
        let y = Subspace::full(f, Side::Primal, 3);
        assert!(in_g_prime(&a, &x, &y, &zero));
        assert!(in_g(&a, &x, &y, &zero).unwrap());
    }

    #[test]
    fn coordinate_example() {
        let a = cube_root_two();
        let f = a.field();
        let one = Subspace::coordinate(f, Side::Primal, 3, &[0]);
        let x = Subspace::coordinate(f, Side::Dual, 3, &[1, 2]);
        assert!(in_g_prime(&a, &x, &one, &one));
        assert!(in_g_prime_annihilator(&a, &x, &one, &one));
        let full = Subspace::full(f, Side::Dual, 3);
        assert!(!in_g_prime(&a, &full, &one, &one));
    }

    #[test]
    fn in_g_rejects_inadmissible_dimensions() {
        let a = cube_root_two();
        let f = a.field();
        let full_p = Subspace::full(f, Side::Primal, 3);
        let one = Subspace::coordinate(f, Side::Primal, 3, &[0]);
        let x = Subspace::coordinate(f, Side::Dual, 3, &[1, 2]);
        let err = in_g(&a, &x, &full_p, &one).unwrap_err();
        assert!(err.to_string().starts_with("dimension constraints violated"));
    }

    #[test]
    fn collapsed_product_leaves_open_locus() {
        // split F_p^3, Y = U = span(e0): Y.U fine, but U.X with X = span(e1*, e2*) collapses.
        let f = PrimeField::default();
        let a = split(f, 3);
        let e0 = Subspace::coordinate(f, Side::Primal, 3, &[0]);
        let x = Subspace::coordinate(f, Side::Dual, 3, &[1, 2]);
        assert!(in_g_prime(&a, &x, &e0, &e0));
        assert!(!in_g(&a, &x, &e0, &e0).unwrap());
    }

    #[test]
    fn theta_with_empty_target() {
        let a = cube_root_two();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = Subspace::zero(a.field(), Side::Primal, 3);
        let pt = sample_g_point(&a, 2, 1, &u, &mut rng, DEFAULT_BUDGET).unwrap();
        assert_eq!(tangent_theta_rank(&a, &pt), 0);
        assert_eq!(tangent_dimension(&a, &pt), 2 + 2);
    }

    #[test]
    fn witness_small_cases() {
        let f = PrimeField::default();
        let a = Algebra::etale_from_poly(f, &[3, 1, 4, 1, 5]).unwrap();
        let w = good_witness_etale(&a, 1, 1, 3).unwrap();
        assert_eq!(w.u, Subspace::coordinate(f, Side::Primal, 5, &[0, 1, 2]));
        assert_eq!(w.y, Subspace::coordinate(f, Side::Primal, 5, &[0]));
        assert_eq!(w.x, Subspace::coordinate(f, Side::Dual, 5, &[4]));
        assert_eq!(dual_product(&a, &w.u, &w.x).dim(), 3);
        assert_eq!(right_product(&a, &w.y, &w.u).dim(), 3);
        assert!(good_witness_etale(&a, 2, 2, 2).is_err());
        assert!(good_witness_etale(&split(f, 3), 1, 1, 1).is_err());
    }
}
