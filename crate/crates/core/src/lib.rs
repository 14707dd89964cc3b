//! Protocols for reversing, conjugating and transposing unknown unitary
//! evolutions whose Hamiltonian has a declared Pauli support.
//!
//! Given the support (the set of Pauli words appearing with unknown
//! coefficients), the crate decides whether the inverse, complex conjugate or
//! transpose of the black-box evolution can be realized with Pauli frame
//! gates and a bounded number of queries, constructs the explicit circuit
//! program, and certifies it against a dense-matrix simulator, including
//! robustness sweeps under support-violating noise.
//!
//! ```
//! use revq_core::*;
//!
//! // An Ising chain admits a one-query inverse: V U V = U^dagger.
//! let support = PauliSupport::parse_str("qubits: 2\nZ0 Z1\nX0\nX1\n")?;
//! let v = find_single_query_inverter(&support).expect("chain supports one query");
//! let program = synth_single_query(Task::Invert, &v);
//! assert_eq!(program.query_count(), 1);
//!
//! // Certify against dense simulation over random coefficient draws.
//! let report = certify_program(&support, &program, Task::Invert, 32, 0, 1e-9, 8)?;
//! assert!(report.pass);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod analysis;
pub mod circuit;
pub mod dense;
pub mod f2;
pub mod pauli;
pub mod sim;
pub mod support;

pub use analysis::{
    build_conjugation_certificate, build_constraint_rows, check_pairwise_commuting,
    find_anticommute_cover, find_even_y_violation_subset, find_odd_identity_subset,
    find_single_query_conjugator, find_single_query_inverter, find_single_query_transposer,
    find_split_certificate, odd_identity_subset_exists, AnalysisError, AntiCommuteCover,
    ConjugationCertificate, SplitCertificate, DEFAULT_ORACLE_CAP, DEFAULT_SPLIT_CAP,
};
pub use circuit::{
    synth_commuting_inverse, synth_conjugate, synth_single_query, synth_split_inverse,
    target_signs, verify_commuting_plan, CircuitError, CircuitProgram, Step, Task,
};
pub use dense::{matrix_exponential, CMatrix, DenseError};
pub use f2::{solve_affine, solve_max_consistent, BitMatrix, BitVec, F2Error, F2Solution};
pub use pauli::{PauliError, PauliOperator, SymplecticVector, DEFAULT_DENSE_CAP, MAX_QUBITS};
pub use sim::{
    apply_program, build_hamiltonian, certify_program, evolution, lcu_transpose_identity_check,
    phase_invariant_fidelity, robustness_sweep, HamiltonianInstance, NoisyInstance,
    RobustnessPoint, RobustnessTable, SimError, VerificationReport, DEFAULT_SIM_CAP, MAX_SIM_CAP,
};
pub use support::{PauliSupport, SupportError};
