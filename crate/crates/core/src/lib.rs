//! Exact computations with Grassmannians of a finite-dimensional algebra `A`
//! over a prime field, and the equivariant Euclid-chain maps
//! `G(r, A) → G(gcd(r, n), A)` between them.
//!
//! The crate is `no_std` and only needs `alloc`. Randomized routines take any
//! [`rand_core::RngCore`]; the caller owns the generator and its seeding.
//!
//! Layers, bottom-up:
//!
//! * [`field`] and [`matrix`]: arithmetic mod `p` and canonical echelon forms;
//! * [`algebra`]: structure constants, the monogenic `F_p[t]/(f)` presentation,
//!   multiplication and action matrices;
//! * [`subspace`]: subspaces of `A` and `A*`, annihilators, module products and
//!   translation by invertible elements;
//! * [`incidence`]: the incidence loci `G'(r, s, U) ⊇ G(r, s, U)`, their tangent
//!   map and goodness certificates;
//! * [`euclid`]: step maps, fibers, the duality `Y ↦ (Y.U)^⊥` and the composite.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod euclid;
pub mod field;
pub mod incidence;
pub mod matrix;
pub mod subspace;

pub use algebra::{Algebra, Element};
pub use error::{DomainCondition, Error, Result};
pub use euclid::{
    big_phi, duality_inverse, duality_map, euclid_sequence, fiber_dimension, phi_fiber_sample, phi_step,
    sample_good_flag, ChainTrace, EuclidChain, GoodFlag, Reduction, StepRecord,
};
pub use field::{PrimeField, MERSENNE_61, MIN_VERIFICATION_PRIME};
pub use incidence::{
    good_witness_etale, in_g, in_g_prime, is_good, sample_g_point, tangent_theta_rank, GoodWitness,
    GoodnessCertificate, GoodnessVerdict, IncidencePoint, DEFAULT_BUDGET,
};
pub use matrix::{EchelonForm, Matrix};
pub use subspace::{gl1_translate, module_product, stabilizer_subalgebra, Side, Subspace};
