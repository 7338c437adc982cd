//! The Euclid chain of rational maps `G(r, A) → G(gcd(r, n), A)`.
//!
//! Each step shrinks one coordinate of an incidence pair by intersecting it
//! with the annihilator of a product with a larger good subspace:
//!
//! * `r ≥ s`, `r = q s + t`: `(X, Y) ↦ (X ∩ (Y.U')^⊥, Y)`,
//! * `s > r`, `s = q r + t`: `(X, Y) ↦ (X, Y ∩ (U'.X)^⊥)`,
//!
//! with `U ⊂ U'` and `dim U' = dim U + q`. Starting from `(A*, Y)` and
//! following the remainders of the Euclidean algorithm on `(n, r)` ends at a
//! pair with one coordinate zero and the other of dimension `d = gcd(n, r)`.
//! When that surviving coordinate is in `A*`, the duality
//! `X ↦ (U.X)^⊥` brings it back to `A`.
//!
//! All maps are rational. Inputs outside their open domain produce
//! [`Error::OutsideDomain`], which callers treat as a request to resample.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::algebra::Algebra;
use crate::error::{DomainCondition, Error, Result};
use crate::incidence::{admissible, certify, GoodnessCertificate, IncidencePoint};
use crate::matrix::Matrix;
use crate::subspace::{dual_product, right_product, Side, Subspace};

/// Which coordinate a step shrinks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reduction {
    /// `X ⊂ A*` shrinks (case `r ≥ s`).
    Dual,
    /// `Y ⊂ A` shrinks (case `s > r`).
    Primal,
}

impl Reduction {
    pub fn as_str(self) -> &'static str {
        match self {
            Reduction::Dual => "reduce-dual",
            Reduction::Primal => "reduce-primal",
        }
    }

    /// The case a point of dimensions `(r, s)` falls into.
    pub fn for_dims(r: usize, s: usize) -> Reduction {
        if r >= s {
            Reduction::Dual
        } else {
            Reduction::Primal
        }
    }

    /// Steps alternate, starting with the dual coordinate at step 1.
    pub fn for_step(index: usize) -> Reduction {
        if index % 2 == 1 {
            Reduction::Dual
        } else {
            Reduction::Primal
        }
    }
}

/// Remainders `r_0 = n, r_1 = r, …, r_s = gcd, r_{s+1} = 0` and quotients
/// `q_i` with `r_{i-1} = q_i r_i + r_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclidChain {
    remainders: Vec<usize>,
    quotients: Vec<usize>,
}

pub fn euclid_sequence(n: usize, r: usize) -> Result<EuclidChain> {
    if r == 0 || r >= n {
        return Err(Error::ROutOfRange { n, r });
    }
    let mut remainders = alloc::vec![n, r];
    let mut quotients = Vec::new();
    let (mut a, mut b) = (n, r);
    while b != 0 {
        quotients.push(a / b);
        (a, b) = (b, a % b);
        remainders.push(b);
    }
    Ok(EuclidChain { remainders, quotients })
}

impl EuclidChain {
    pub fn n(&self) -> usize {
        self.remainders[0]
    }

    pub fn r(&self) -> usize {
        self.remainders[1]
    }

    pub fn remainders(&self) -> &[usize] {
        &self.remainders
    }

    pub fn quotients(&self) -> &[usize] {
        &self.quotients
    }

    /// Number of steps `s`.
    pub fn steps(&self) -> usize {
        self.quotients.len()
    }

    pub fn gcd(&self) -> usize {
        self.remainders[self.steps()]
    }

    /// An even number of steps leaves the result in `A*`.
    pub fn needs_dualization(&self) -> bool {
        self.steps().is_multiple_of(2)
    }

    /// Cumulative dimensions `dim U_0 = 0, dim U_1, …, dim U_s`.
    pub fn flag_dims(&self) -> Vec<usize> {
        let mut dims = alloc::vec![0];
        let mut total = 0;
        for &q in &self.quotients {
            total += q;
            dims.push(total);
        }
        dims
    }

    /// `(dim X, dim Y)` entering step `i` (1-based); `i = s + 1` gives the final shape.
    pub fn step_dims(&self, i: usize) -> (usize, usize) {
        let rem = &self.remainders;
        if i % 2 == 1 {
            (rem[i - 1], rem[i])
        } else {
            (rem[i], rem[i - 1])
        }
    }

    /// Dimension of `G(r, A)` minus that of `G(d, A)`.
    pub fn affine_dimension(&self) -> usize {
        let (n, r, d) = (self.n(), self.r(), self.gcd());
        r * (n - r) - d * (n - d)
    }
}

/// Dimension of the fiber of a step: for the shrinking coordinate of
/// dimension `big = q·small + t` and the fixed one of dimension `small`,
/// `small · q · (n - u·small - big)`.
pub fn fiber_dimension(n: usize, u: usize, r: usize, s: usize) -> usize {
    let (big, small) = if r >= s { (r, s) } else { (s, r) };
    if small == 0 {
        return 0;
    }
    let q = big / small;
    small * q * (n - u * small - big)
}

/// Applies one step of the chain to a point of `G(r, s, U)`.
///
/// `U'` must contain `U` with `dim U' = dim U + q`. The result is checked to
/// lie in the open locus for the reduced triple.
pub fn phi_step(alg: &Algebra, pt: &IncidencePoint, u_next: &Subspace) -> Result<IncidencePoint> {
    if !pt.is_g_point() {
        return Err(Error::NotInLocus);
    }
    let (r, s, u) = (pt.r(), pt.s(), pt.u_dim());
    let case = Reduction::for_dims(r, s);
    let (big, small) = match case {
        Reduction::Dual => (r, s),
        Reduction::Primal => (s, r),
    };
    if small == 0 {
        return Err(Error::FlagMismatch("a step needs both coordinates nonzero"));
    }
    let (q, t) = (big / small, big % small);
    if u_next.dim() != u + q || !u_next.contains(pt.u()) {
        return Err(Error::FlagMismatch("U' must contain U with dim U' = dim U + q"));
    }
    let domain = |condition| Error::OutsideDomain { step: None, condition };
    let (x, y) = match case {
        Reduction::Dual => {
            let yu = right_product(alg, pt.y(), u_next);
            if yu.dim() != s * (u + q) {
                return Err(domain(DomainCondition::ProductRank));
            }
            let x = pt.x().intersect(&yu.annihilator())?;
            if x.dim() != t {
                return Err(domain(DomainCondition::IntersectionDim));
            }
            (x, pt.y().clone())
        }
        Reduction::Primal => {
            let ux = dual_product(alg, u_next, pt.x());
            if ux.dim() != r * (u + q) {
                return Err(domain(DomainCondition::ProductRank));
            }
            let y = pt.y().intersect(&ux.annihilator())?;
            if y.dim() != t {
                return Err(domain(DomainCondition::IntersectionDim));
            }
            (pt.x().clone(), y)
        }
    };
    let image = IncidencePoint::new(alg, x, y, u_next.clone())?;
    if !image.is_g_point() {
        return Err(domain(DomainCondition::TargetLocus));
    }
    Ok(image)
}

/// Draws a point of the fiber of [`phi_step`] over `target`.
///
/// For [`Reduction::Dual`] the target is `(X_t, Y) ∈ G(t, s, U')` and the
/// preimage is `(X̂, Y)` with `X_t ⊆ X̂ ⊆ (Y.U)^⊥` and `dim X̂ = q s + t`; the
/// primal case is the mirror image.
pub fn phi_fiber_sample<R: RngCore + ?Sized>(
    alg: &Algebra,
    target: &IncidencePoint,
    u: &Subspace,
    case: Reduction,
    rng: &mut R,
    budget: usize,
) -> Result<IncidencePoint> {
    let n = alg.dim();
    let u_next = target.u();
    if !target.is_g_point() {
        return Err(Error::NotInLocus);
    }
    if u.dim() > u_next.dim() || !u_next.contains(u) {
        return Err(Error::FlagMismatch("U must be contained in the target's U'"));
    }
    let q = u_next.dim() - u.dim();
    let (kept, shrunk) = match case {
        Reduction::Dual => (target.s(), target.r()),
        Reduction::Primal => (target.r(), target.s()),
    };
    if q == 0 || shrunk >= kept {
        return Err(Error::FlagMismatch("target is not the image of a reduction step"));
    }
    let big = q * kept + shrunk;
    let (r, s) = match case {
        Reduction::Dual => (big, kept),
        Reduction::Primal => (kept, big),
    };
    if !admissible(n, r, s, u.dim()) {
        return Err(Error::DimensionConstraints { n, r, s, u: u.dim() });
    }
    let (room, fixed_coord, grow) = match case {
        Reduction::Dual => (right_product(alg, target.y(), u).annihilator(), target.x(), kept * q),
        Reduction::Primal => (dual_product(alg, u, target.x()).annihilator(), target.y(), kept * q),
    };
    for _ in 0..budget {
        let extra = room.random_within(grow, rng, budget)?;
        let grown = fixed_coord.sum(&extra)?;
        if grown.dim() != big {
            continue;
        }
        let (x, y) = match case {
            Reduction::Dual => (grown, target.y().clone()),
            Reduction::Primal => (target.x().clone(), grown),
        };
        let Ok(candidate) = IncidencePoint::new(alg, x, y, u.clone()) else {
            continue;
        };
        if !candidate.is_g_point() {
            continue;
        }
        match phi_step(alg, &candidate, u_next) {
            Ok(image) if image == *target => return Ok(candidate),
            Ok(_) => {}
            Err(e) if e.is_domain_violation() => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryBudgetExhausted { stage: "fiber sample", attempts: budget })
}

fn check_duality_shape(alg: &Algebra, d: usize, u: &Subspace) -> Result<usize> {
    let n = alg.dim();
    let q = u.dim() + 1;
    if d == 0 || q * d != n {
        return Err(Error::Shape("duality needs n = q d with dim U = q - 1"));
    }
    Ok(q)
}

/// `Y ↦ (Y.U)^⊥` from `G(d, A)` to `G(d, A*)`, for `n = q d` and `dim U = q - 1`.
pub fn duality_map(alg: &Algebra, y: &Subspace, u: &Subspace) -> Result<Subspace> {
    if y.side() != Side::Primal {
        return Err(Error::SideMismatch);
    }
    let q = check_duality_shape(alg, y.dim(), u)?;
    let yu = right_product(alg, y, u);
    if yu.dim() != (q - 1) * y.dim() {
        return Err(Error::OutsideDomain { step: None, condition: DomainCondition::ProductRank });
    }
    Ok(yu.annihilator())
}

/// `X ↦ (U.X)^⊥`, the inverse of [`duality_map`].
pub fn duality_inverse(alg: &Algebra, x: &Subspace, u: &Subspace) -> Result<Subspace> {
    if x.side() != Side::Dual {
        return Err(Error::SideMismatch);
    }
    let q = check_duality_shape(alg, x.dim(), u)?;
    let ux = dual_product(alg, u, x);
    if ux.dim() != (q - 1) * x.dim() {
        return Err(Error::OutsideDomain { step: None, condition: DomainCondition::ProductRank });
    }
    Ok(ux.annihilator())
}

/// Nested good subspaces `{0} = U_0 ⊂ U_1 ⊂ … ⊂ U_s` for one Euclid chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodFlag {
    chain: EuclidChain,
    subspaces: Vec<Subspace>,
    certificates: Vec<GoodnessCertificate>,
    dual: Option<(Subspace, GoodnessCertificate)>,
}

impl GoodFlag {
    /// Re-checks nesting, dimensions and certificates of a flag assembled elsewhere.
    pub fn new(
        alg: &Algebra,
        chain: EuclidChain,
        subspaces: Vec<Subspace>,
        certificates: Vec<GoodnessCertificate>,
        dual: Option<(Subspace, GoodnessCertificate)>,
    ) -> Result<Self> {
        let dims = chain.flag_dims();
        if subspaces.len() != dims.len() || certificates.len() != chain.steps() {
            return Err(Error::FlagMismatch("flag length differs from the chain"));
        }
        for (i, (sub, &d)) in subspaces.iter().zip(&dims).enumerate() {
            if sub.side() != Side::Primal || sub.ambient() != alg.dim() || sub.dim() != d {
                return Err(Error::FlagMismatch("flag subspace has the wrong dimension"));
            }
            if i > 0 && !sub.contains(&subspaces[i - 1]) {
                return Err(Error::FlagMismatch("flag is not nested"));
            }
        }
        for (i, cert) in certificates.iter().enumerate() {
            let (r, s) = chain.step_dims(i + 2);
            if (cert.r, cert.s) != (r, s) || cert.point.u() != &subspaces[i + 1] || !cert.point.is_g_point() {
                return Err(Error::FlagMismatch("certificate does not match its flag step"));
            }
        }
        match (&dual, chain.needs_dualization()) {
            (None, false) => {}
            (Some((u, cert)), true) => {
                let d = chain.gcd();
                check_duality_shape(alg, d, u)?;
                if (cert.r, cert.s) != (d, d) || cert.point.u() != u || !cert.point.is_g_point() {
                    return Err(Error::FlagMismatch("dualization certificate does not match"));
                }
            }
            _ => return Err(Error::FlagMismatch("dualization subspace present iff the step count is even")),
        }
        Ok(GoodFlag { chain, subspaces, certificates, dual })
    }

    pub fn chain(&self) -> &EuclidChain {
        &self.chain
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn certificates(&self) -> &[GoodnessCertificate] {
        &self.certificates
    }

    pub fn dual(&self) -> Option<&(Subspace, GoodnessCertificate)> {
        self.dual.as_ref()
    }
}

/// Samples a random nested flag and certifies each `U_i` for the pair of the
/// locus it indexes. Any failure redraws the whole flag.
pub fn sample_good_flag<R: RngCore + ?Sized>(
    alg: &Algebra,
    chain: &EuclidChain,
    rng: &mut R,
    budget: usize,
) -> Result<GoodFlag> {
    let n = alg.dim();
    if chain.n() != n {
        return Err(Error::FlagMismatch("chain dimension differs from the algebra"));
    }
    let field = alg.field();
    let dims = chain.flag_dims();
    let top = *dims.last().expect("flag has U_0");
    let mut failing_stage = "flag basis";
    'attempt: for _ in 0..budget {
        let basis = Matrix::random(field, top, n, rng);
        if basis.rank() != top {
            failing_stage = "flag basis";
            continue;
        }
        let subspaces: Vec<Subspace> = dims.iter().map(|&d| Subspace::span(Side::Primal, &basis.top_rows(d))).collect();
        let mut certificates = Vec::with_capacity(chain.steps());
        for i in 1..=chain.steps() {
            let (r, s) = chain.step_dims(i + 1);
            match certify(alg, &subspaces[i], r, s, rng, budget) {
                Ok(cert) => certificates.push(cert),
                Err(Error::RetryBudgetExhausted { .. }) => {
                    failing_stage = "flag step certificate";
                    continue 'attempt;
                }
                Err(e) => return Err(e),
            }
        }
        let dual = if chain.needs_dualization() {
            let d = chain.gcd();
            let u = Subspace::random(field, Side::Primal, n, n / d - 1, rng, budget)?;
            match certify(alg, &u, d, d, rng, budget) {
                Ok(cert) => Some((u, cert)),
                Err(Error::RetryBudgetExhausted { .. }) => {
                    failing_stage = "dualization certificate";
                    continue 'attempt;
                }
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        return Ok(GoodFlag { chain: chain.clone(), subspaces, certificates, dual });
    }
    Err(Error::RetryBudgetExhausted { stage: failing_stage, attempts: budget })
}

/// One applied step of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub index: usize,
    pub case: Reduction,
    pub input: IncidencePoint,
    pub output: IncidencePoint,
    pub fiber_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainTrace {
    pub steps: Vec<StepRecord>,
    /// The `A*` coordinate handed to the duality when the step count is even.
    pub dualized: Option<Subspace>,
}

impl ChainTrace {
    pub fn total_fiber_dim(&self) -> usize {
        self.steps.iter().map(|s| s.fiber_dim).sum()
    }
}

/// The composite map `Φ : G(r, A) → G(gcd(r, n), A)` for a fixed flag.
pub fn big_phi(alg: &Algebra, y: &Subspace, flag: &GoodFlag) -> Result<(Subspace, ChainTrace)> {
    let n = alg.dim();
    let chain = flag.chain();
    if chain.n() != n || y.side() != Side::Primal || y.dim() != chain.r() || y.ambient() != n {
        return Err(Error::FlagMismatch("input must be a primal subspace of dimension r"));
    }
    let field = alg.field();
    let mut pt = IncidencePoint::new(
        alg,
        Subspace::full(field, Side::Dual, n),
        y.clone(),
        Subspace::zero(field, Side::Primal, n),
    )?;
    let mut steps = Vec::with_capacity(chain.steps());
    for i in 1..=chain.steps() {
        let case = Reduction::for_step(i);
        debug_assert_eq!(case, Reduction::for_dims(pt.r(), pt.s()));
        let next = phi_step(alg, &pt, &flag.subspaces()[i]).map_err(|e| e.at_step(i))?;
        let fiber_dim = fiber_dimension(n, pt.u_dim(), pt.r(), pt.s());
        steps.push(StepRecord { index: i, case, input: pt, output: next.clone(), fiber_dim });
        pt = next;
    }
    let trace_end = |dualized| ChainTrace { steps, dualized };
    match flag.dual() {
        Some((u, _)) => {
            let x = pt.x().clone();
            let out = duality_inverse(alg, &x, u).map_err(|e| e.at_step(chain.steps() + 1))?;
            Ok((out, trace_end(Some(x))))
        }
        None => Ok((pt.y().clone(), trace_end(None))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::incidence::DEFAULT_BUDGET;
    use alloc::string::ToString;
    use alloc::vec;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn euclid_examples() {
        let c = euclid_sequence(6, 3).unwrap();
        assert_eq!(c.remainders(), &[6, 3, 0]);
        assert_eq!(c.quotients(), &[2]);
        assert_eq!(c.steps(), 1);
        let c = euclid_sequence(5, 3).unwrap();
        assert_eq!(c.remainders(), &[5, 3, 2, 1, 0]);
        assert_eq!(c.quotients(), &[1, 1, 2]);
        assert_eq!(c.flag_dims(), vec![0, 1, 2, 4]);
        assert_eq!(c.steps(), 3);
        let c = euclid_sequence(3, 2).unwrap();
        assert_eq!(c.remainders(), &[3, 2, 1, 0]);
        assert_eq!(c.quotients(), &[1, 2]);
        assert!(c.needs_dualization());
        assert!(matches!(euclid_sequence(4, 4), Err(Error::ROutOfRange { .. })));
        assert!(euclid_sequence(4, 0).unwrap_err().to_string().starts_with("r out of range"));
    }

    #[test]
    fn step_dims_follow_alternation() {
        let c = euclid_sequence(5, 3).unwrap();
        assert_eq!(c.step_dims(1), (5, 3));
        assert_eq!(c.step_dims(2), (2, 3));
        assert_eq!(c.step_dims(3), (2, 1));
        assert_eq!(c.step_dims(4), (0, 1));
        let c = euclid_sequence(3, 2).unwrap();
        assert_eq!(c.step_dims(3), (1, 0));
    }

    #[test]
    fn divisor_flag_and_identity() {
        let f = PrimeField::default();
        let alg = Algebra::etale_from_poly(f, &[7, 0, 3, 0, 1, 2]).unwrap();
        let chain = euclid_sequence(6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let flag = sample_good_flag(&alg, &chain, &mut rng, DEFAULT_BUDGET).unwrap();
        assert_eq!(flag.subspaces()[1].dim(), 2);
        assert!(flag.dual().is_none());
        let y = Subspace::random(f, Side::Primal, 6, 3, &mut rng, 8).unwrap();
        let (out, trace) = big_phi(&alg, &y, &flag).unwrap();
        assert_eq!(out, y);
        assert!(trace.steps[0].output.x().is_zero());
    }

    #[test]
    fn flag_validation_rejects_bad_dims() {
        let f = PrimeField::default();
        let alg = Algebra::etale_from_poly(f, &[1, 2, 3]).unwrap();
        let chain = euclid_sequence(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let flag = sample_good_flag(&alg, &chain, &mut rng, DEFAULT_BUDGET).unwrap();
        let rebuilt = GoodFlag::new(
            &alg,
            chain.clone(),
            flag.subspaces().to_vec(),
            flag.certificates().to_vec(),
            flag.dual().cloned(),
        );
        assert_eq!(rebuilt.as_ref(), Ok(&flag));
        let missing_dual = GoodFlag::new(&alg, chain, flag.subspaces().to_vec(), flag.certificates().to_vec(), None);
        assert!(matches!(missing_dual, Err(Error::FlagMismatch(_))));
    }

    #[test]
    fn fiber_dimension_formula() {
        // dual reduction from (r, s) = (3, 1) with u = 2 in n = 5: 1*3*(5-2-3) = 0
        assert_eq!(fiber_dimension(5, 2, 3, 1), 0);
        // (2, 1) with u = 2 in n = 5: q = 2, 1*2*(5-2-2) = 2
        assert_eq!(fiber_dimension(5, 2, 2, 1), 2);
        assert_eq!(fiber_dimension(5, 0, 0, 3), 0);
    }
}
