//! Dense-matrix ground truth: Hamiltonian assembly, program application,
//! phase-invariant channel fidelity, randomized certification and the
//! support-violating robustness sweep.
//!
//! Randomness is counter-based for parallel determinism: sample k draws from
//! a ChaCha8 stream seeded with `seed ^ k`, so identical seeds reproduce
//! reports bit for bit and per-sample work is order-independent.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::circuit::{CircuitProgram, Step, Task};
use crate::dense::{matrix_exponential, CMatrix};
use crate::pauli::PauliOperator;
use crate::support::PauliSupport;

/// Default dense cap (qubits); the hard maximum callers may raise it to.
pub const DEFAULT_SIM_CAP: usize = 8;
pub const MAX_SIM_CAP: usize = 10;

/// Complement sampling threshold: at or above this register size the
/// robustness sweep samples a random subset of the complement per draw
/// instead of enumerating all `4^N - 1 - M` terms.
const COMPLEMENT_SAMPLE_QUBITS: usize = 6;
const COMPLEMENT_SAMPLE_TERMS: usize = 512;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("{n_qubits} qubits exceeds the simulator cap of {cap}")]
    CapExceeded { n_qubits: usize, cap: usize },
    #[error("matrix dimension {0} does not match register dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("coefficient count {found} does not match support size {expected}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("coefficients must be finite")]
    NonFiniteCoefficient,
    #[error("program has no steps")]
    EmptyProgram,
    #[error("program acts on {prog} qubits but the support has {support}")]
    QubitCountMismatch { prog: usize, support: usize },
    #[error("delta list is empty")]
    EmptyDeltas,
    #[error("delta {0} is negative")]
    NegativeDelta(f64),
    #[error("support covers every Pauli word; no complement left to draw noise from")]
    EmptyComplement,
}

/// A support together with concrete real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianInstance {
    support: PauliSupport,
    coefficients: Vec<f64>,
}

impl HamiltonianInstance {
    pub fn new(support: PauliSupport, coefficients: Vec<f64>) -> Result<Self, SimError> {
        if coefficients.len() != support.len() {
            return Err(SimError::CoefficientCount { expected: support.len(), found: coefficients.len() });
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(SimError::NonFiniteCoefficient);
        }
        Ok(Self { support, coefficients })
    }

    pub fn support(&self) -> &PauliSupport {
        &self.support
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
}

/// An in-support instance plus rescaled complement noise of relative
/// strength `delta = sum|beta| / sum|alpha|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyInstance {
    base: HamiltonianInstance,
    noise_support: PauliSupport,
    noise_coefficients: Vec<f64>,
    delta: f64,
}

impl NoisyInstance {
    /// Rescales raw noise coefficients so the strength ratio hits `delta`
    /// exactly.
    pub fn new(
        base: HamiltonianInstance,
        noise_support: PauliSupport,
        raw_noise: Vec<f64>,
        delta: f64,
    ) -> Result<Self, SimError> {
        if delta < 0.0 {
            return Err(SimError::NegativeDelta(delta));
        }
        if raw_noise.len() != noise_support.len() {
            return Err(SimError::CoefficientCount {
                expected: noise_support.len(),
                found: raw_noise.len(),
            });
        }
        let alpha_mass: f64 = base.coefficients.iter().map(|a| a.abs()).sum();
        let beta_mass: f64 = raw_noise.iter().map(|b| b.abs()).sum();
        let scale = if delta == 0.0 || beta_mass == 0.0 { 0.0 } else { delta * alpha_mass / beta_mass };
        let noise_coefficients: Vec<f64> = raw_noise.iter().map(|b| b * scale).collect();
        let instance = Self { base, noise_support, noise_coefficients, delta };
        debug_assert!(instance.delta_residual() < 1e-12);
        Ok(instance)
    }

    /// |achieved ratio - delta| relative to the in-support mass.
    pub fn delta_residual(&self) -> f64 {
        let alpha_mass: f64 = self.base.coefficients.iter().map(|a| a.abs()).sum();
        let beta_mass: f64 = self.noise_coefficients.iter().map(|b| b.abs()).sum();
        if alpha_mass == 0.0 {
            return 0.0;
        }
        (beta_mass / alpha_mass - self.delta).abs()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn noise_coefficients(&self) -> &[f64] {
        &self.noise_coefficients
    }
}

fn check_cap(n_qubits: usize, cap: usize) -> Result<(), SimError> {
    if n_qubits > cap.min(MAX_SIM_CAP) {
        return Err(SimError::CapExceeded { n_qubits, cap: cap.min(MAX_SIM_CAP) });
    }
    Ok(())
}

fn add_term(h: &mut CMatrix, term: &PauliOperator, coefficient: f64) {
    let dim = h.dim();
    let xm = term.x_index_mask() as usize;
    let zm = term.z_index_mask();
    for col in 0..dim {
        let amp = term.amplitude(col, zm);
        h[(col ^ xm, col)] += coefficient * amp;
    }
}

/// `sum_j a_j dense(P_j)`; Hermitian because coefficients are real and the
/// words carry no phase.
pub fn build_hamiltonian(instance: &HamiltonianInstance, cap: usize) -> Result<CMatrix, SimError> {
    let n = instance.support.n_qubits();
    check_cap(n, cap)?;
    let mut h = CMatrix::zeros(1 << n);
    for (term, &a) in instance.support.terms().iter().zip(&instance.coefficients) {
        add_term(&mut h, term, a);
    }
    Ok(h)
}

/// `exp(-i H)` for the evolution with t = 1.
pub fn evolution(h: &CMatrix) -> CMatrix {
    let mut a = h.clone();
    a.scale(Complex64::new(0.0, -1.0));
    matrix_exponential(&a)
}

/// Left-multiplies a Pauli frame onto an operator in O(d^2).
fn apply_frame_left(frame: &PauliOperator, m: &CMatrix) -> CMatrix {
    let dim = m.dim();
    let xm = frame.x_index_mask() as usize;
    let zm = frame.z_index_mask();
    let mut out = CMatrix::zeros(dim);
    for r in 0..dim {
        let src = r ^ xm;
        let amp = frame.amplitude(src, zm);
        let src_row = m.row(src);
        for (o, &v) in out.row_mut(r).iter_mut().zip(src_row) {
            *o = amp * v;
        }
    }
    out
}

/// Product of the program's step matrices in application order; the
/// first-applied step ends up rightmost.
pub fn apply_program(prog: &CircuitProgram, u: &CMatrix) -> Result<CMatrix, SimError> {
    let dim = 1usize << prog.n_qubits();
    if u.dim() != dim {
        return Err(SimError::DimensionMismatch(u.dim(), dim));
    }
    if prog.steps().is_empty() {
        return Err(SimError::EmptyProgram);
    }
    let mut acc = CMatrix::identity(dim);
    for step in prog.steps() {
        acc = match step {
            Step::Frame(p) => apply_frame_left(p, &acc),
            Step::Query => u.matmul(&acc).expect("equal dimensions"),
        };
    }
    Ok(acc)
}

/// Choi-state overlap of two unitary channels: `|Tr(A† B)|^2 / d^2`.
pub fn phase_invariant_fidelity(a: &CMatrix, b: &CMatrix) -> Result<f64, SimError> {
    if a.dim() != b.dim() {
        return Err(SimError::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim() as f64;
    let tr = a.inner_product(b).expect("equal dimensions");
    Ok((tr.norm() / d).powi(2))
}

fn target_matrix(task: Task, u: &CMatrix) -> CMatrix {
    match task {
        Task::Invert => u.adjoint(),
        Task::Conjugate => u.conjugate(),
        Task::Transpose => u.transpose(),
    }
}

fn standard_normal_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Per-sample RNG stream: seed ^ sample index.
fn sample_rng(seed: u64, sample: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ sample as u64)
}

/// Verdict and per-sample fidelities for one program certification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub task: Task,
    pub support_hash: String,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub query_count: usize,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
    pub per_sample: Vec<f64>,
    /// True iff `min_fidelity >= 1 - tol`.
    pub pass: bool,
}

impl VerificationReport {
    /// Aligned-column text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("task           {}\n", self.task));
        out.push_str(&format!("support_hash   {}\n", self.support_hash));
        out.push_str(&format!("queries        {}\n", self.query_count));
        out.push_str(&format!("samples        {}\n", self.samples));
        out.push_str(&format!("seed           {}\n", self.seed));
        out.push_str(&format!("tol            {:e}\n", self.tol));
        out.push_str(&format!("min_fidelity   {:.12}\n", self.min_fidelity));
        out.push_str(&format!("mean_fidelity  {:.12}\n", self.mean_fidelity));
        out.push_str(&format!("verdict        {}\n", if self.pass { "pass" } else { "fail" }));
        out
    }
}

/// Certifies a program against random coefficient draws: coefficients are
/// i.i.d. standard normal, the target is the exact inverse/conjugate/
/// transpose of each drawn evolution.
pub fn certify_program(
    support: &PauliSupport,
    prog: &CircuitProgram,
    task: Task,
    samples: usize,
    seed: u64,
    tol: f64,
    cap: usize,
) -> Result<VerificationReport, SimError> {
    check_cap(support.n_qubits(), cap)?;
    if prog.n_qubits() != support.n_qubits() {
        return Err(SimError::QubitCountMismatch { prog: prog.n_qubits(), support: support.n_qubits() });
    }
    if prog.steps().is_empty() {
        return Err(SimError::EmptyProgram);
    }
    let mut per_sample = Vec::with_capacity(samples);
    for k in 0..samples {
        let mut rng = sample_rng(seed, k);
        let coefficients = standard_normal_vec(&mut rng, support.len());
        let instance = HamiltonianInstance::new(support.clone(), coefficients)?;
        let u = evolution(&build_hamiltonian(&instance, cap)?);
        let achieved = apply_program(prog, &u)?;
        let target = target_matrix(task, &u);
        per_sample.push(phase_invariant_fidelity(&target, &achieved)?);
    }
    let min_fidelity = per_sample.iter().copied().fold(f64::INFINITY, f64::min);
    let min_fidelity = if per_sample.is_empty() { 0.0 } else { min_fidelity };
    let mean_fidelity = if per_sample.is_empty() {
        0.0
    } else {
        per_sample.iter().sum::<f64>() / per_sample.len() as f64
    };
    Ok(VerificationReport {
        task,
        support_hash: support.support_hash(),
        samples,
        seed,
        tol,
        query_count: prog.query_count(),
        min_fidelity,
        mean_fidelity,
        pass: min_fidelity >= 1.0 - tol,
        per_sample,
    })
}

/// One row of a robustness sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobustnessPoint {
    pub delta: f64,
    pub mean_fidelity: f64,
}

/// Full sweep result, JSON- and CSV-serializable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessTable {
    pub task: Task,
    pub support_hash: String,
    pub samples: usize,
    pub seed: u64,
    pub points: Vec<RobustnessPoint>,
}

impl RobustnessTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta,mean_fidelity\n");
        for p in &self.points {
            out.push_str(&format!("{},{:.12}\n", p.delta, p.mean_fidelity));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:>12}  {:>16}\n", "delta", "mean_fidelity");
        for p in &self.points {
            out.push_str(&format!("{:>12}  {:>16.12}\n", p.delta, p.mean_fidelity));
        }
        out
    }
}

/// All non-identity words outside the support, in fixed code order.
fn complement_terms(support: &PauliSupport) -> Vec<PauliOperator> {
    let n = support.n_qubits();
    let member: std::collections::HashSet<(u64, u64)> =
        support.terms().iter().map(|t| (t.x_bits(), t.z_bits())).collect();
    let mut out = Vec::new();
    for code in 1u64..1u64 << (2 * n) {
        let x = code & ((1 << n) - 1);
        let z = code >> n;
        if !member.contains(&(x, z)) {
            out.push(PauliOperator::from_bits(n, x, z, 0).expect("within register"));
        }
    }
    out
}

/// Uniform sample of distinct complement words for large registers.
fn sampled_complement(support: &PauliSupport, rng: &mut ChaCha8Rng, count: usize) -> Vec<PauliOperator> {
    let n = support.n_qubits();
    let member: std::collections::HashSet<(u64, u64)> =
        support.terms().iter().map(|t| (t.x_bits(), t.z_bits())).collect();
    let space = 1u64 << (2 * n);
    let available = space as usize - 1 - support.len();
    let want = count.min(available);
    let mut chosen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(want);
    while out.len() < want {
        let code = rng.random_range(1..space);
        let x = code & ((1 << n) - 1);
        let z = code >> n;
        if member.contains(&(x, z)) || !chosen.insert((x, z)) {
            continue;
        }
        out.push(PauliOperator::from_bits(n, x, z, 0).expect("within register"));
    }
    out
}

/// Sweeps support-violating noise strengths: per sample, draw in-support and
/// complement coefficients i.i.d. standard normal, rescale the complement to
/// each requested delta, run the (fixed, ideal) program on the noisy
/// evolution and compare against the exact target of the noiseless part.
pub fn robustness_sweep(
    support: &PauliSupport,
    prog: &CircuitProgram,
    deltas: &[f64],
    samples: usize,
    seed: u64,
    cap: usize,
) -> Result<RobustnessTable, SimError> {
    check_cap(support.n_qubits(), cap)?;
    if prog.n_qubits() != support.n_qubits() {
        return Err(SimError::QubitCountMismatch { prog: prog.n_qubits(), support: support.n_qubits() });
    }
    if deltas.is_empty() {
        return Err(SimError::EmptyDeltas);
    }
    if let Some(&bad) = deltas.iter().find(|&&d| d < 0.0 || !d.is_finite()) {
        return Err(SimError::NegativeDelta(bad));
    }
    let n = support.n_qubits();
    let full_complement =
        if n < COMPLEMENT_SAMPLE_QUBITS { Some(complement_terms(support)) } else { None };
    let complement_size = match &full_complement {
        Some(terms) => terms.len(),
        None => (1usize << (2 * n)) - 1 - support.len(),
    };
    if complement_size == 0 && deltas.iter().any(|&d| d > 0.0) {
        return Err(SimError::EmptyComplement);
    }

    let mut sums = vec![0.0f64; deltas.len()];
    for k in 0..samples {
        let mut rng = sample_rng(seed, k);
        let alpha = standard_normal_vec(&mut rng, support.len());
        let noise_terms: Vec<PauliOperator> = match &full_complement {
            Some(terms) => terms.clone(),
            None => sampled_complement(support, &mut rng, COMPLEMENT_SAMPLE_TERMS),
        };
        let beta_raw = standard_normal_vec(&mut rng, noise_terms.len());
        let base = HamiltonianInstance::new(support.clone(), alpha)?;
        let h_ideal = build_hamiltonian(&base, cap)?;
        let target = target_matrix(prog.task(), &evolution(&h_ideal));
        let noise_support = PauliSupport::new(n, noise_terms).expect("uniform register");
        for (slot, &delta) in deltas.iter().enumerate() {
            let noisy =
                NoisyInstance::new(base.clone(), noise_support.clone(), beta_raw.clone(), delta)?;
            let mut h = h_ideal.clone();
            for (term, &b) in noisy.noise_support.terms().iter().zip(&noisy.noise_coefficients) {
                add_term(&mut h, term, b);
            }
            let achieved = apply_program(prog, &evolution(&h))?;
            sums[slot] += phase_invariant_fidelity(&target, &achieved)?;
        }
    }
    let points = deltas
        .iter()
        .zip(&sums)
        .map(|(&delta, &sum)| RobustnessPoint {
            delta,
            mean_fidelity: if samples == 0 { 0.0 } else { sum / samples as f64 },
        })
        .collect();
    Ok(RobustnessTable {
        task: prog.task(),
        support_hash: support.support_hash(),
        samples,
        seed,
        points,
    })
}

/// Checks `I U I + X U X - Y U Y + Z U Z = 2 U^T` on random qubit unitaries.
pub fn lcu_transpose_identity_check(samples: usize, seed: u64) -> bool {
    let paulis: Vec<CMatrix> = ["X0", "Y0", "Z0"]
        .iter()
        .map(|t| PauliOperator::parse(t, 1).unwrap().dense_matrix(1).unwrap())
        .collect();
    let signs = [1.0, -1.0, 1.0];
    for k in 0..samples {
        let mut rng = sample_rng(seed, k);
        let mut h = CMatrix::zeros(2);
        // Random H = a X + b Y + c Z + d I.
        for p in &paulis {
            let a: f64 = rng.sample(StandardNormal);
            h.add_scaled(p, Complex64::new(a, 0.0)).expect("2x2");
        }
        let d: f64 = rng.sample(StandardNormal);
        h.add_scaled(&CMatrix::identity(2), Complex64::new(d, 0.0)).expect("2x2");
        let u = evolution(&h);
        let mut lhs = u.clone(); // I U I
        for (p, sign) in paulis.iter().zip(signs) {
            let conj = p.matmul(&u).unwrap().matmul(p).unwrap();
            lhs.add_scaled(&conj, Complex64::new(sign, 0.0)).expect("2x2");
        }
        let mut rhs = u.transpose();
        rhs.scale(Complex64::new(2.0, 0.0));
        if lhs.max_abs_diff(&rhs) >= 1e-10 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{synth_single_query, Task};

    fn support(n: usize, lines: &[&str]) -> PauliSupport {
        PauliSupport::from_token_lines(n, lines).unwrap()
    }

    #[test]
    fn hamiltonian_of_z_is_diagonal() {
        let s = support(1, &["Z0"]);
        let inst = HamiltonianInstance::new(s, vec![0.7]).unwrap();
        let h = build_hamiltonian(&inst, 8).unwrap();
        assert_eq!(h[(0, 0)], Complex64::new(0.7, 0.0));
        assert_eq!(h[(1, 1)], Complex64::new(-0.7, 0.0));
        assert_eq!(h[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn zero_coefficients_give_zero_matrix() {
        let s = support(2, &["Z0 Z1", "X0"]);
        let inst = HamiltonianInstance::new(s, vec![0.0, 0.0]).unwrap();
        let h = build_hamiltonian(&inst, 8).unwrap();
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn random_hamiltonian_is_hermitian() {
        let s = support(2, &["Z0 Z1", "X0", "Y1", "Y0 X1"]);
        let mut rng = sample_rng(3, 0);
        let inst = HamiltonianInstance::new(s, standard_normal_vec(&mut rng, 4)).unwrap();
        let h = build_hamiltonian(&inst, 8).unwrap();
        assert!(h.max_abs_diff(&h.adjoint()) < 1e-12);
    }

    #[test]
    fn hamiltonian_cap_is_enforced() {
        let s = support(9, &["Z0"]);
        let inst = HamiltonianInstance::new(s, vec![1.0]).unwrap();
        assert!(matches!(build_hamiltonian(&inst, 8), Err(SimError::CapExceeded { .. })));
    }

    #[test]
    fn coefficient_validation() {
        let s = support(1, &["Z0"]);
        assert!(matches!(
            HamiltonianInstance::new(s.clone(), vec![]),
            Err(SimError::CoefficientCount { .. })
        ));
        assert!(matches!(
            HamiltonianInstance::new(s, vec![f64::NAN]),
            Err(SimError::NonFiniteCoefficient)
        ));
    }

    #[test]
    fn bare_query_program_is_the_evolution() {
        let s = support(1, &["X0"]);
        let inst = HamiltonianInstance::new(s, vec![0.3]).unwrap();
        let u = evolution(&build_hamiltonian(&inst, 8).unwrap());
        let mut prog = CircuitProgram::new(Task::Invert, 1);
        prog.push_query();
        let applied = apply_program(&prog, &u).unwrap();
        assert!(applied.max_abs_diff(&u) < 1e-15);
    }

    #[test]
    fn commuting_frame_leaves_evolution_unchanged() {
        let s = support(1, &["Y0"]);
        let inst = HamiltonianInstance::new(s, vec![0.9]).unwrap();
        let u = evolution(&build_hamiltonian(&inst, 8).unwrap());
        let prog = synth_single_query(Task::Invert, &PauliOperator::parse("Y0", 1).unwrap());
        let applied = apply_program(&prog, &u).unwrap();
        assert!(applied.max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn z_frame_reverses_x_rotation() {
        // Z e^{-iaX} Z = e^{+iaX}
        let a = 0.37;
        let s = support(1, &["X0"]);
        let inst = HamiltonianInstance::new(s, vec![a]).unwrap();
        let u = evolution(&build_hamiltonian(&inst, 8).unwrap());
        let prog = synth_single_query(Task::Invert, &PauliOperator::parse("Z0", 1).unwrap());
        let applied = apply_program(&prog, &u).unwrap();
        // Analytic e^{+iaX}
        let mut want = CMatrix::zeros(2);
        want[(0, 0)] = Complex64::new(a.cos(), 0.0);
        want[(1, 1)] = Complex64::new(a.cos(), 0.0);
        want[(0, 1)] = Complex64::new(0.0, a.sin());
        want[(1, 0)] = Complex64::new(0.0, a.sin());
        assert!(applied.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn fidelity_properties() {
        let s = support(2, &["Z0 Z1", "X0"]);
        let inst = HamiltonianInstance::new(s, vec![0.4, -1.1]).unwrap();
        let u = evolution(&build_hamiltonian(&inst, 8).unwrap());
        assert!((phase_invariant_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-12);
        let mut phased = u.clone();
        phased.scale(Complex64::from_polar(1.0, 0.83));
        assert!((phase_invariant_fidelity(&u, &phased).unwrap() - 1.0).abs() < 1e-12);
        let x = PauliOperator::parse("X0", 1).unwrap().dense_matrix(1).unwrap();
        let id = CMatrix::identity(2);
        assert!(phase_invariant_fidelity(&id, &x).unwrap() < 1e-24);
    }

    #[test]
    fn certify_accepts_valid_and_rejects_forward() {
        let s = support(2, &["Z0 Z1", "X0", "X1"]);
        let v = crate::analysis::find_single_query_inverter(&s).unwrap();
        let prog = synth_single_query(Task::Invert, &v);
        let report = certify_program(&s, &prog, Task::Invert, 100, 0, 1e-9, 8).unwrap();
        assert!(report.pass, "min fidelity {}", report.min_fidelity);
        assert!(report.min_fidelity >= 1.0 - 1e-9);

        let mut forward = CircuitProgram::new(Task::Invert, 2);
        forward.push_query();
        let report = certify_program(&s, &forward, Task::Invert, 50, 0, 1e-9, 8).unwrap();
        assert!(!report.pass);
        assert!(report.mean_fidelity < 0.9);
    }

    #[test]
    fn certify_is_deterministic() {
        let s = support(2, &["Z0 Z1", "X0", "X1"]);
        let v = crate::analysis::find_single_query_inverter(&s).unwrap();
        let prog = synth_single_query(Task::Invert, &v);
        let a = certify_program(&s, &prog, Task::Invert, 20, 42, 1e-9, 8).unwrap();
        let b = certify_program(&s, &prog, Task::Invert, 20, 42, 1e-9, 8).unwrap();
        assert_eq!(a.per_sample, b.per_sample);
    }

    #[test]
    fn empty_program_is_rejected() {
        let s = support(1, &["Z0"]);
        let prog = CircuitProgram::new(Task::Invert, 1);
        assert!(matches!(
            certify_program(&s, &prog, Task::Invert, 4, 0, 1e-9, 8),
            Err(SimError::EmptyProgram)
        ));
    }

    #[test]
    fn noisy_instance_hits_delta_exactly() {
        let s = support(2, &["Z0 Z1", "X0", "X1"]);
        let base = HamiltonianInstance::new(s.clone(), vec![0.5, -1.0, 2.0]).unwrap();
        let noise = PauliSupport::from_token_lines(2, &["Y0", "Z1"]).unwrap();
        let noisy = NoisyInstance::new(base, noise, vec![0.3, -0.7], 0.05).unwrap();
        assert!(noisy.delta_residual() < 1e-12);
        assert_eq!(noisy.delta(), 0.05);
    }

    #[test]
    fn robustness_at_zero_delta_is_exact() {
        let s = support(2, &["Z0 Z1", "X0", "X1"]);
        let v = crate::analysis::find_single_query_inverter(&s).unwrap();
        let prog = synth_single_query(Task::Invert, &v);
        let table = robustness_sweep(&s, &prog, &[0.0, 0.1], 25, 0, 8).unwrap();
        assert!((table.points[0].mean_fidelity - 1.0).abs() < 1e-9);
        assert!(table.points[1].mean_fidelity < table.points[0].mean_fidelity);
    }

    #[test]
    fn full_support_has_no_room_for_noise() {
        let lines: Vec<String> = (1u64..4)
            .map(|code| {
                PauliOperator::from_bits(1, code & 1, code >> 1, 0).unwrap().word_string()
            })
            .collect();
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let s = support(1, &refs);
        let prog = synth_single_query(Task::Invert, &PauliOperator::parse("X0", 1).unwrap());
        assert!(matches!(
            robustness_sweep(&s, &prog, &[0.01], 2, 0, 8),
            Err(SimError::EmptyComplement)
        ));
        // All-zero deltas need no noise terms and still run.
        let table = robustness_sweep(&s, &prog, &[0.0], 2, 0, 8).unwrap();
        assert!(table.points[0].mean_fidelity.is_finite());
    }

    #[test]
    fn robustness_rejects_bad_deltas() {
        let s = support(1, &["X0"]);
        let prog = synth_single_query(Task::Invert, &PauliOperator::parse("Z0", 1).unwrap());
        assert!(matches!(robustness_sweep(&s, &prog, &[], 4, 0, 8), Err(SimError::EmptyDeltas)));
        assert!(matches!(
            robustness_sweep(&s, &prog, &[-0.1], 4, 0, 8),
            Err(SimError::NegativeDelta(_))
        ));
    }

    #[test]
    fn lcu_identity_holds() {
        assert!(lcu_transpose_identity_check(100, 0));
    }

    #[test]
    fn large_register_sweep_samples_the_complement() {
        // At six qubits the sweep draws a 512-term complement subset per
        // sample instead of all 4^6 - 1 - M terms.
        let lines: Vec<String> = (0..5)
            .map(|i| format!("Z{} Z{}", i, i + 1))
            .chain((0..6).map(|i| format!("X{i}")))
            .collect();
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let s = PauliSupport::from_token_lines(6, &refs).unwrap();
        let v = crate::analysis::find_single_query_inverter(&s).unwrap();
        let prog = synth_single_query(Task::Invert, &v);
        let table = robustness_sweep(&s, &prog, &[0.0, 0.01], 3, 0, 8).unwrap();
        assert!((table.points[0].mean_fidelity - 1.0).abs() < 1e-9);
        assert!(table.points[1].mean_fidelity < 1.0);
        // Deterministic under the same seed.
        let again = robustness_sweep(&s, &prog, &[0.0, 0.01], 3, 0, 8).unwrap();
        assert_eq!(table.points, again.points);
    }

    #[test]
    fn complement_excludes_support_and_identity() {
        let s = support(2, &["Z0 Z1", "X0", "X1"]);
        let comp = complement_terms(&s);
        assert_eq!(comp.len(), 16 - 1 - 3);
        for t in &comp {
            assert!(!t.is_identity_word());
            assert!(!s.terms().contains(t));
        }
    }
}
