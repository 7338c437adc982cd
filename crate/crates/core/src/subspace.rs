//! Subspaces of an algebra `A` and of its dual `A*`.
//!
//! A [`Subspace`] is stored as the canonical reduced echelon basis of its row
//! space, so equality of subspaces is equality of bases. Vectors of `A` and
//! of `A*` are paired by the coordinate pairing `⟨x, φ⟩ = Σ x_i φ_i`.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Inside the algebra `A`.
    Primal,
    /// Inside the dual space `A*`.
    Dual,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Primal => Side::Dual,
            Side::Dual => Side::Primal,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Primal => "primal",
            Side::Dual => "dual",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    side: Side,
    // Reduced echelon basis with exactly `dim` rows.
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The span of the rows of `m`.
    pub fn span(side: Side, m: &Matrix) -> Self {
        let ech = m.rref();
        let pivots = ech.pivots().to_vec();
        Subspace { side, basis: ech.into_basis(), pivots }
    }

    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, side: Side, ambient: usize, rows: &[R]) -> Self {
        Self::span(side, &Matrix::from_rows(field, ambient, rows))
    }

    pub fn zero(field: PrimeField, side: Side, ambient: usize) -> Self {
        Subspace { side, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: PrimeField, side: Side, ambient: usize) -> Self {
        Subspace { side, basis: Matrix::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the coordinate basis vectors with the given indices.
    pub fn coordinate(field: PrimeField, side: Side, ambient: usize, indices: &[usize]) -> Self {
        let mut m = Matrix::zeros(field, indices.len(), ambient);
        for (row, &i) in indices.iter().enumerate() {
            m.set(row, i, 1);
        }
        Self::span(side, &m)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    /// Canonical echelon basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.side != other.side {
            return Err(Error::SideMismatch);
        }
        if self.ambient() != other.ambient() {
            return Err(Error::Shape("ambient dimensions differ"));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[u64]) -> bool {
        let mut m = self.basis.clone();
        m.push_row(v);
        m.rank() == self.dim()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        self.side == other.side
            && self.ambient() == other.ambient()
            && Matrix::vstack(self.field(), self.ambient(), &[&self.basis, &other.basis]).rank() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Self::span(self.side, &Matrix::vstack(self.field(), self.ambient(), &[&self.basis, &other.basis])))
    }

    /// `S ∩ T = (S^⊥ + T^⊥)^⊥`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let both = self.annihilator().sum(&other.annihilator())?;
        Ok(both.annihilator())
    }

    /// The subspace of the opposite side vanishing on `self`.
    pub fn annihilator(&self) -> Subspace {
        let kernel = self.basis.kernel();
        let pivots = kernel.rref().pivots().to_vec();
        Subspace { side: self.side.opposite(), basis: kernel, pivots }
    }

    /// Image under a linear map given in column convention (`v ↦ M v`).
    pub fn image(&self, m: &Matrix) -> Subspace {
        Self::span(self.side, &self.basis.mul(&m.transpose()))
    }

    /// True when every basis vector of `self` pairs to zero with every basis
    /// vector of `other` (which must lie on the opposite side).
    pub fn pairs_to_zero(&self, other: &Subspace) -> bool {
        assert_eq!(self.side, other.side.opposite(), "pairing needs opposite sides");
        self.basis.mul(&other.basis.transpose()).is_zero()
    }

    /// Uniformly random full-rank `dim × n` matrix's row space.
    pub fn random<R: RngCore + ?Sized>(
        field: PrimeField,
        side: Side,
        ambient: usize,
        dim: usize,
        rng: &mut R,
        budget: usize,
    ) -> Result<Subspace> {
        if dim > ambient {
            return Err(Error::Shape("subspace dimension exceeds ambient dimension"));
        }
        Self::random_within(&Self::full(field, side, ambient), dim, rng, budget)
    }

    /// Random `dim`-dimensional subspace of `self`.
    pub fn random_within<R: RngCore + ?Sized>(&self, dim: usize, rng: &mut R, budget: usize) -> Result<Subspace> {
        if dim > self.dim() {
            return Err(Error::Shape("subspace dimension exceeds the containing subspace"));
        }
        for _ in 0..budget.max(1) {
            let coeffs = Matrix::random(self.field(), dim, self.dim(), rng);
            let s = Self::span(self.side, &coeffs.mul(&self.basis));
            if s.dim() == dim {
                return Ok(s);
            }
        }
        Err(Error::RetryBudgetExhausted { stage: "random subspace", attempts: budget })
    }
}

/// Span of `{M(u) w : u ∈ basis(U), w ∈ basis(W)}` for an action `u ↦ M(u)`.
pub fn module_product_with<F>(alg: &Algebra, u: &Subspace, w: &Subspace, action: F) -> Subspace
where
    F: Fn(&Element) -> Matrix,
{
    let n = w.ambient();
    let mut rows = Matrix::zeros(alg.field(), 0, n);
    for urow in u.basis().row_iter() {
        let m = action(&Element::new(urow.to_vec()));
        let images = w.basis().mul(&m.transpose());
        for r in images.row_iter() {
            rows.push_row(r);
        }
    }
    Subspace::span(w.side(), &rows)
}

/// `Y.U`: span of the products `y · u`.
pub fn right_product(alg: &Algebra, y: &Subspace, u: &Subspace) -> Subspace {
    debug_assert_eq!(y.side(), Side::Primal);
    let n = y.ambient();
    let mut rows = Matrix::zeros(alg.field(), 0, n);
    for yrow in y.basis().row_iter() {
        for urow in u.basis().row_iter() {
            rows.push_row(&alg.mul_coords(yrow, urow));
        }
    }
    Subspace::span(Side::Primal, &rows)
}

/// `U.X` for `X ⊂ A*` under `(u·φ)(x) = φ(x u)`.
pub fn dual_product(alg: &Algebra, u: &Subspace, x: &Subspace) -> Subspace {
    debug_assert_eq!(x.side(), Side::Dual);
    module_product_with(alg, u, x, |e| alg.dual_module_action_matrix(e))
}

/// The module product matching `w`'s side: `W.U` for primal `W`, `U.W` for dual `W`.
pub fn module_product(alg: &Algebra, u: &Subspace, w: &Subspace) -> Result<Subspace> {
    if u.side() != Side::Primal {
        return Err(Error::SideMismatch);
    }
    Ok(match w.side() {
        Side::Primal => right_product(alg, w, u),
        Side::Dual => dual_product(alg, u, w),
    })
}

/// Translate by an invertible element: left multiplication on `A`, the
/// contragredient action `φ ↦ φ(a⁻¹ ·)` on `A*`.
pub fn gl1_translate(alg: &Algebra, a: &Element, s: &Subspace) -> Result<Subspace> {
    let m = match s.side() {
        Side::Primal => {
            alg.invert(a).ok_or(Error::NotInvertible)?;
            alg.left_mul_matrix(a)
        }
        Side::Dual => alg.gl1_dual_action_matrix(a)?,
    };
    Ok(s.image(&m))
}

/// `{a ∈ A : a·E ⊆ E}`, the kernel of `a ↦ (ψ(a e_i))_{i, ψ ∈ E^⊥}`.
pub fn stabilizer_subalgebra(alg: &Algebra, e: &Subspace) -> Subspace {
    let n = alg.dim();
    let ann = e.annihilator();
    let mut constraints = Matrix::zeros(alg.field(), 0, n);
    for erow in e.basis().row_iter() {
        // a ↦ a · e_i has matrix right_mul(e_i)
        let r = alg.right_mul_matrix(&Element::new(erow.to_vec()));
        let rows = ann.basis().mul(&r);
        for row in rows.row_iter() {
            constraints.push_row(row);
        }
    }
    Subspace::span(Side::Primal, &constraints.kernel())
}
