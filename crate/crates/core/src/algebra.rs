//! Finite-dimensional associative unital algebras over `F_p`.
//!
//! An [`Algebra`] is stored by its structure constants
//! `e_i · e_j = Σ_k c[i][j][k] e_k`. The monogenic constructor builds
//! `F_p[t]/(f)` in the basis `1, t, …, t^{n-1}`.
//!
//! Two actions on the dual space are provided:
//!
//! * the left-module action `(a·φ)(x) = φ(x a)`, used for products `U.X`;
//! * the group action `(a.φ)(x) = φ(a⁻¹ x)` of invertible elements.
//!
//! They commute, which is what makes `U.(a.X) = a.(U.X)`.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;

/// Coordinates of an algebra element in the algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element(Vec<u64>);

impl Element {
    pub fn new(coords: Vec<u64>) -> Self {
        Element(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// The defining polynomial of a monogenic presentation, without its leading 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monogenic {
    poly: Vec<u64>,
}

impl Monogenic {
    /// Coefficients `c_0, …, c_{n-1}` of `f = t^n + c_{n-1} t^{n-1} + … + c_0`.
    pub fn poly(&self) -> &[u64] {
        &self.poly
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: PrimeField,
    n: usize,
    // Flattened `c[i][j][k]` at `(i * n + j) * n + k`.
    structure: Vec<u64>,
    unit: Vec<u64>,
    monogenic: Option<Monogenic>,
}

impl Algebra {
    /// Validates structure constants `c[i][j][k]` and a unit vector.
    ///
    /// Checks the unit law on every basis vector first, then associativity on
    /// every basis triple.
    pub fn from_structure_constants(field: PrimeField, structure: &[Vec<Vec<u64>>], unit: &[u64]) -> Result<Self> {
        let n = structure.len();
        if unit.len() != n {
            return Err(Error::Shape("unit length differs from dimension"));
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for plane in structure {
            if plane.len() != n {
                return Err(Error::Shape("structure constants must be n x n x n"));
            }
            for line in plane {
                if line.len() != n {
                    return Err(Error::Shape("structure constants must be n x n x n"));
                }
                flat.extend(line.iter().map(|&x| field.reduce(x)));
            }
        }
        let alg = Algebra {
            field,
            n,
            structure: flat,
            unit: unit.iter().map(|&x| field.reduce(x)).collect(),
            monogenic: None,
        };
        alg.check_unit()?;
        alg.check_associative()?;
        Ok(alg)
    }

    /// Builds `F_p[t]/(f)` for monic `f` given by its lower coefficients
    /// `c_0, …, c_{n-1}` (ascending). Rejects `f` with `gcd(f, f') ≠ 1`.
    pub fn etale_from_poly(field: PrimeField, coeffs: &[u64]) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 {
            return Err(Error::Shape("defining polynomial must have degree at least 1"));
        }
        let lower: Vec<u64> = coeffs.iter().map(|&c| field.reduce(c)).collect();
        let mut f = lower.clone();
        f.push(1);
        let df = poly::derivative(field, &f);
        let g = poly::gcd(field, &f, &df);
        if poly::degree(&g) != Some(0) {
            return Err(Error::NotSeparable { gcd_degree: poly::degree(&g).unwrap_or(n) });
        }

        // powers[k] = t^k mod f for k < 2n - 1
        let mut powers: Vec<Vec<u64>> = Vec::with_capacity(2 * n);
        let mut current = vec![0; n];
        current[0] = 1;
        for _ in 0..(2 * n - 1) {
            powers.push(current.clone());
            let top = current[n - 1];
            let mut next = vec![0; n];
            next[1..n].copy_from_slice(&current[..n - 1]);
            for (slot, &c) in next.iter_mut().zip(&lower) {
                *slot = field.sub(*slot, field.mul(top, c));
            }
            current = next;
        }
        let mut structure = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                structure.extend_from_slice(&powers[i + j]);
            }
        }
        let mut unit = vec![0; n];
        unit[0] = 1;
        Ok(Algebra { field, n, structure, unit, monogenic: Some(Monogenic { poly: lower }) })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn monogenic(&self) -> Option<&Monogenic> {
        self.monogenic.as_ref()
    }

    /// `c[i][j][k]`.
    #[inline]
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u64 {
        self.structure[(i * self.n + j) * self.n + k]
    }

    pub fn structure_constants(&self) -> Vec<Vec<Vec<u64>>> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.structure[(i * n + j) * n..(i * n + j + 1) * n].to_vec()).collect())
            .collect()
    }

    pub fn unit(&self) -> Element {
        Element(self.unit.clone())
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.n])
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut v = vec![0; self.n];
        v[i] = 1;
        Element(v)
    }

    /// The class of `t` in a monogenic presentation.
    pub fn generator(&self) -> Result<Element> {
        let m = self.monogenic.as_ref().ok_or(Error::NotMonogenic)?;
        if self.n == 1 {
            // t is the root -c_0.
            return Ok(Element(vec![self.field.neg(m.poly[0])]));
        }
        Ok(self.basis_element(1))
    }

    pub fn element(&self, coords: &[u64]) -> Result<Element> {
        if coords.len() != self.n {
            return Err(Error::Shape("element length differs from dimension"));
        }
        Ok(Element(coords.iter().map(|&c| self.field.reduce(c)).collect()))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let f = self.field;
        Element(a.0.iter().zip(&b.0).map(|(&x, &y)| f.add(x, y)).collect())
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        let f = self.field;
        Element(a.0.iter().zip(&b.0).map(|(&x, &y)| f.sub(x, y)).collect())
    }

    pub fn scale(&self, c: u64, a: &Element) -> Element {
        let f = self.field;
        Element(a.0.iter().map(|&x| f.mul(c, x)).collect())
    }

    /// Bilinear product through the structure constants.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        debug_assert_eq!(a.0.len(), self.n);
        debug_assert_eq!(b.0.len(), self.n);
        Element(self.mul_coords(&a.0, &b.0))
    }

    pub(crate) fn mul_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.field;
        let n = self.n;
        let mut out = vec![0; n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let w = f.mul(ai, bj);
                let base = (i * n + j) * n;
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.structure[base + k];
                    if c != 0 {
                        *slot = f.add(*slot, f.mul(w, c));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &Element, mut exp: u64) -> Element {
        let mut acc = self.unit();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Column `j` holds the coordinates of `a · e_j`.
    pub fn left_mul_matrix(&self, a: &Element) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(self.field, n, n);
        for j in 0..n {
            let col = self.mul_coords(&a.0, self.basis_element(j).coords());
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    /// Column `j` holds the coordinates of `e_j · a`.
    pub fn right_mul_matrix(&self, a: &Element) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(self.field, n, n);
        for j in 0..n {
            let col = self.mul_coords(self.basis_element(j).coords(), &a.0);
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    /// Two-sided inverse, or `None` for zero divisors.
    pub fn invert(&self, a: &Element) -> Option<Element> {
        let x = self.left_mul_matrix(a).solve(&self.unit)?;
        let x = Element(x);
        (self.mul(a, &x).0 == self.unit && self.mul(&x, a).0 == self.unit).then_some(x)
    }

    /// Matrix of `φ ↦ (x ↦ φ(x a))` on dual coordinates: the transpose of
    /// [`Algebra::right_mul_matrix`]. Satisfies `M(ab) = M(a) M(b)`.
    pub fn dual_module_action_matrix(&self, a: &Element) -> Matrix {
        self.right_mul_matrix(a).transpose()
    }

    /// Matrix of `φ ↦ (x ↦ φ(a⁻¹ x))`.
    pub fn gl1_dual_action_matrix(&self, a: &Element) -> Result<Matrix> {
        let inv = self.invert(a).ok_or(Error::NotInvertible)?;
        Ok(self.left_mul_matrix(&inv).transpose())
    }

    pub fn random_element<R: RngCore + ?Sized>(&self, rng: &mut R) -> Element {
        Element((0..self.n).map(|_| self.field.random(rng)).collect())
    }

    /// Draws uniform elements until one is invertible.
    pub fn random_invertible<R: RngCore + ?Sized>(&self, rng: &mut R, budget: usize) -> Result<Element> {
        for _ in 0..budget {
            let a = self.random_element(rng);
            if self.invert(&a).is_some() {
                return Ok(a);
            }
        }
        Err(Error::RetryBudgetExhausted { stage: "invertible element", attempts: budget })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.structure_constant(i, j, k) == self.structure_constant(j, i, k)))
        })
    }

    fn check_unit(&self) -> Result<()> {
        for j in 0..self.n {
            let e = self.basis_element(j);
            if self.mul_coords(&self.unit, e.coords()) != e.0 || self.mul_coords(e.coords(), &self.unit) != e.0 {
                return Err(Error::BadUnit { basis: j });
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.n;
        let products: Vec<Vec<u64>> = (0..n * n).map(|ij| self.structure[ij * n..(ij + 1) * n].to_vec()).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul_coords(&products[i * n + j], self.basis_element(k).coords());
                    let right = self.mul_coords(self.basis_element(i).coords(), &products[j * n + k]);
                    if left != right {
                        return Err(Error::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Dense polynomials over `F_p`, ascending coefficients, trailing zeros trimmed.
pub mod poly {
    use alloc::vec::Vec;

    use crate::field::PrimeField;

    pub fn trim(p: &mut Vec<u64>) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    pub fn degree(p: &[u64]) -> Option<usize> {
        p.iter().rposition(|&c| c != 0)
    }

    pub fn derivative(field: PrimeField, p: &[u64]) -> Vec<u64> {
        let mut d: Vec<u64> =
            p.iter().enumerate().skip(1).map(|(i, &c)| field.mul(field.reduce(i as u64), c)).collect();
        trim(&mut d);
        d
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem(field: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let db = degree(b).expect("division by the zero polynomial");
        let lead_inv = field.inv(b[db]).expect("leading coefficient is nonzero");
        let mut r = a.to_vec();
        trim(&mut r);
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let factor = field.mul(r[dr], lead_inv);
            let shift = dr - db;
            for (i, &c) in b.iter().enumerate().take(db + 1) {
                r[i + shift] = field.sub(r[i + shift], field.mul(factor, c));
            }
            trim(&mut r);
        }
        r
    }

    /// Monic greatest common divisor (the zero polynomial if both are zero).
    pub fn gcd(field: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while degree(&y).is_some() {
            let r = rem(field, &x, &y);
            x = y;
            y = r;
        }
        if let Some(d) = degree(&x) {
            let inv = field.inv(x[d]).expect("leading coefficient is nonzero");
            for c in x.iter_mut() {
                *c = field.mul(*c, inv);
            }
        }
        x
    }
}
