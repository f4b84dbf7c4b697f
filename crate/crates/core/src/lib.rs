//! Smooth noncommutative torus with exact phase arithmetic, rational
//! matrix realizations, spectral triples over it, double-covering spin
//! structures, and curved Dirac operators.

pub mod curved;
pub mod error;
pub mod linalg;
pub mod phase;
pub mod realization;
pub mod sample;
pub mod spin;
pub mod torus;
pub mod triple;

pub use curved::{
    assemble_curved, check_spectral_transport, check_twined_factorization, noncentral_example,
    noncentral_example_report, central_example, transported_base_dirac, NoncentralExampleReport,
    FactorizationReport, TransportReport,
};
pub use error::{NctError, Result};
pub use phase::{ExactScalar, Phase, RationalAngle, Theta};
pub use realization::{
    center_iso, clock_shift, map_q, map_t, ClockShiftPair, MatrixLaurentSection, PhaseMatrix,
    ScalarLaurent,
};
pub use spin::{
    assemble_spin_dirac, assemble_spin_rep, embed, lifted_derivation, odd_monomial, spin_basis,
    spin_matrix_rep, spin_real_structure, spectrum_formula, CoveringElement, SpinLabel,
};
pub use torus::{Axis, TorusElement};
pub use triple::{
    assemble_dirac, assemble_grading, assemble_rep, commutator_norm, product_triple,
    real_structure, spectrum, verify_axioms, verify_isomorphism, AntilinearOp, AxiomReport,
    IsoReport, KoSigns, TruncatedBasis,
};
