//! Exact computations for finite lattices, pole posets, join-morphisms and
//! their linearized endomorphism algebras.

pub mod corpus;
pub mod decompose;
pub mod error;
pub mod functor;
pub mod klin;
pub mod lattice;
pub mod linalg;
pub mod lincomb;
pub mod morphism;
pub mod poset;
pub mod relalg;
pub mod relation;

pub use decompose::{
    decomposition_report, orbit_reps, pol_t, verify_corpus, verify_suite, CheckRecord, DecompositionReport, ReportEntry,
    Suite,
};
pub use error::{Error, Result};
pub use functor::{
    act_correspondence, apply_linmorph, gamma, pole_span_check, rank_sq, rho_inverse, rho_iso, z_basis, FreeElt,
    LatticeMap, SpanRecord,
};
pub use klin::{beta, e_t, epsilon_q, f_general, f_idem, j_pi, lin_compose, rho_sum, rho_y, LinMorph};
pub use linalg::IntMatrix;
pub use lattice::{
    downset_lattice, is_distributive, lattice_from_poset, opposite_lattice, pole_signature, DownsetLattice,
    IrreducibleData, Lattice, PoleSignature,
};
pub use lincomb::LinComb;
pub use morphism::{
    enumerate_hom, enumerate_inj, enumerate_sur, extend_from_irreducibles, inj_sur_bijection, is_join_morphism, omega,
    op_morphism, JoinMorphism,
};
pub use poset::{
    automorphisms, enumerate_posets, is_pole_by_permutation, pole_decomposition, AutGroup, Block,
    PoleDecomposition, Poset,
};
pub use relalg::{
    delta, delta_square_identity, fund_module_act, is_simple_projective, nonzero_condition, rel_product,
    s_delta_classify, FundModuleElement, RelLinComb,
};
pub use relation::{GroundSet, Permutation, Relation};
