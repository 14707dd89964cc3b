//! Circuit programs: alternating Pauli frame gates and black-box query slots.
//!
//! Steps are stored in application order (first-applied first), matching
//! circuit diagrams read left to right. Operator products written on paper
//! run right to left; `synth_*` constructors take care of the reversal.
//! Adjacent frames are always merged, discarding global phase.

use std::fmt;

use serde::Serialize;

use crate::analysis::{AntiCommuteCover, ConjugationCertificate, SplitCertificate};
use crate::pauli::PauliOperator;
use crate::support::PauliSupport;

/// Largest cover size the inversion recursion will expand (2^L - 1 queries).
pub const MAX_COVER_SYNTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("anti-commute cover is empty")]
    EmptyCover,
    #[error("cover of size {0} exceeds the synthesis limit of {MAX_COVER_SYNTH}")]
    CoverTooLarge(usize),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("support is not pairwise commuting; the sign-sum check is only exact for commuting supports")]
    NonCommutingSupport,
    #[error("program acts on {prog} qubits but the support has {support}")]
    QubitCountMismatch { prog: usize, support: usize },
}

/// The higher-order transformation a program implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Invert,
    Conjugate,
    Transpose,
}

impl Task {
    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Invert => "invert",
            Task::Conjugate => "conjugate",
            Task::Transpose => "transpose",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "invert" => Some(Task::Invert),
            "conjugate" => Some(Task::Conjugate),
            "transpose" => Some(Task::Transpose),
            _ => None,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Frame(PauliOperator),
    Query,
}

/// An alternating frame/query program for a fixed register size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitProgram {
    task: Task,
    n_qubits: usize,
    steps: Vec<Step>,
}

impl CircuitProgram {
    pub fn new(task: Task, n_qubits: usize) -> Self {
        Self { task, n_qubits, steps: Vec::new() }
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn query_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Query)).count()
    }

    /// Appends a frame, merging into a trailing frame and dropping identities.
    pub fn push_frame(&mut self, frame: PauliOperator) {
        debug_assert_eq!(frame.n_qubits(), self.n_qubits);
        let merged = match self.steps.last() {
            Some(Step::Frame(prev)) => {
                let product = prev.multiply(&frame).expect("equal qubit counts").without_phase();
                self.steps.pop();
                product
            }
            _ => frame.without_phase(),
        };
        if !merged.is_identity_word() {
            self.steps.push(Step::Frame(merged));
        }
    }

    pub fn push_query(&mut self) {
        self.steps.push(Step::Query);
    }

    /// Circuit file rendering: headers plus one directive per step.
    pub fn render(&self) -> String {
        let mut out = format!("task: {}\nqubits: {}\n", self.task, self.n_qubits);
        for step in &self.steps {
            match step {
                Step::Frame(p) => {
                    out.push_str("GATE ");
                    out.push_str(&p.word_string());
                    out.push('\n');
                }
                Step::Query => out.push_str("QUERY\n"),
            }
        }
        out
    }

    /// Parses the circuit file format; adjacent gates merge on load.
    pub fn parse_str(text: &str) -> Result<Self, CircuitError> {
        let mut task: Option<Task> = None;
        let mut qubits: Option<usize> = None;
        let mut body: Vec<(usize, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("task:") {
                task = Some(Task::parse(rest.trim()).ok_or_else(|| CircuitError::Parse {
                    line: i + 1,
                    message: format!("unknown task `{}`", rest.trim()),
                })?);
            } else if let Some(rest) = line.strip_prefix("qubits:") {
                qubits = Some(rest.trim().parse().map_err(|_| CircuitError::Parse {
                    line: i + 1,
                    message: format!("invalid qubit count `{}`", rest.trim()),
                })?);
            } else {
                body.push((i + 1, line));
            }
        }
        let task = task.ok_or(CircuitError::Parse { line: 0, message: "missing `task:` header".into() })?;
        let n_qubits =
            qubits.ok_or(CircuitError::Parse { line: 0, message: "missing `qubits:` header".into() })?;
        let mut program = CircuitProgram::new(task, n_qubits);
        for (line, text) in body {
            if text == "QUERY" {
                program.push_query();
            } else if let Some(tokens) = text.strip_prefix("GATE ") {
                let frame = PauliOperator::parse(tokens, n_qubits)
                    .map_err(|e| CircuitError::Parse { line, message: e.to_string() })?;
                program.push_frame(frame);
            } else {
                return Err(CircuitError::Parse { line, message: format!("unknown directive `{text}`") });
            }
        }
        Ok(program)
    }
}

/// `V U V`: the one-query sandwich.
pub fn synth_single_query(task: Task, v: &PauliOperator) -> CircuitProgram {
    let mut program = CircuitProgram::new(task, v.n_qubits());
    program.push_frame(*v);
    program.push_query();
    program.push_frame(*v);
    program
}

/// Builds the `2^L - 1`-query inversion recursion over `elements`.
///
/// With `f_1(U) = U V_0` and `f_L(U) = f_{L-1}(U) U V_{L-1} f_{L-1}(U)`, the
/// program is `V_{L-1} f_L(U)` laid out in application order.
fn synth_inverse_recursion(elements: &[PauliOperator], n_qubits: usize) -> Result<CircuitProgram, CircuitError> {
    if elements.is_empty() {
        return Err(CircuitError::EmptyCover);
    }
    if elements.len() > MAX_COVER_SYNTH {
        return Err(CircuitError::CoverTooLarge(elements.len()));
    }
    let mut steps: Vec<Step> = vec![Step::Frame(elements[0]), Step::Query];
    for v in &elements[1..] {
        let prefix = steps.clone();
        steps.push(Step::Frame(*v));
        steps.push(Step::Query);
        steps.extend(prefix);
    }
    steps.push(Step::Frame(*elements.last().expect("nonempty")));

    let mut program = CircuitProgram::new(Task::Invert, n_qubits);
    for step in steps {
        match step {
            Step::Frame(p) => program.push_frame(p),
            Step::Query => program.push_query(),
        }
    }
    Ok(program)
}

/// Inversion program for a pairwise-commuting support from its cover W.
pub fn synth_commuting_inverse(cover: &AntiCommuteCover) -> Result<CircuitProgram, CircuitError> {
    let n = cover.elements.first().map(PauliOperator::n_qubits).ok_or(CircuitError::EmptyCover)?;
    synth_inverse_recursion(&cover.elements, n)
}

/// Inversion program from a split certificate: the same recursion seeded with
/// the certificate's `V_0` followed by the cover over the commuting part.
pub fn synth_split_inverse(
    support: &PauliSupport,
    cert: &SplitCertificate,
) -> Result<CircuitProgram, CircuitError> {
    validate_split_certificate(support, cert)?;
    let mut elements = vec![cert.v0];
    elements.extend(cert.w.elements.iter().copied());
    synth_inverse_recursion(&elements, support.n_qubits())
}

fn validate_split_certificate(support: &PauliSupport, cert: &SplitCertificate) -> Result<(), CircuitError> {
    let terms = support.terms();
    let m = terms.len();
    let mut seen = vec![false; m];
    for &i in cert.s0_indices.iter().chain(&cert.s1_indices) {
        if i >= m || seen[i] {
            return Err(CircuitError::InvalidCertificate(format!(
                "index sets are not a partition of 0..{m}"
            )));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(CircuitError::InvalidCertificate(format!("index sets are not a partition of 0..{m}")));
    }
    if cert.s1_indices.is_empty() {
        return Err(CircuitError::InvalidCertificate("S1 is empty; use the commuting-cover path".into()));
    }
    let commute = |a: &PauliOperator, b: &PauliOperator| a.commutes(b).expect("uniform register");
    for (k, &i) in cert.s0_indices.iter().enumerate() {
        for &j in &cert.s0_indices[k + 1..] {
            if !commute(&terms[i], &terms[j]) {
                return Err(CircuitError::InvalidCertificate("S0 is not pairwise commuting".into()));
            }
        }
        for &j in &cert.s1_indices {
            if !commute(&terms[i], &terms[j]) {
                return Err(CircuitError::InvalidCertificate("S0 and S1 do not commute".into()));
            }
        }
        if !commute(&cert.v0, &terms[i]) {
            return Err(CircuitError::InvalidCertificate("V0 must commute with every S0 term".into()));
        }
    }
    for &j in &cert.s1_indices {
        if commute(&cert.v0, &terms[j]) {
            return Err(CircuitError::InvalidCertificate("V0 must anti-commute with every S1 term".into()));
        }
    }
    // The cover must assign an anti-commuting element to every S0 term.
    if cert.w.covered_by.len() != cert.s0_indices.len() {
        return Err(CircuitError::InvalidCertificate("cover does not index S0".into()));
    }
    for (pos, &el) in cert.w.covered_by.iter().enumerate() {
        let term = &terms[cert.s0_indices[pos]];
        let Some(v) = cert.w.elements.get(el) else {
            return Err(CircuitError::InvalidCertificate("cover element index out of range".into()));
        };
        if commute(v, term) {
            return Err(CircuitError::InvalidCertificate("cover element commutes with its assigned term".into()));
        }
    }
    Ok(())
}

/// Telescopes a conjugation subcircuit into sandwich frames `V_1..V_Q` with
/// operator `prod_j V_j U V_j`.
fn sandwich_frames(prog: &CircuitProgram) -> Result<Vec<PauliOperator>, CircuitError> {
    let identity = PauliOperator::identity(prog.n_qubits());
    let mut gaps = vec![identity];
    for step in prog.steps() {
        match step {
            Step::Frame(p) => {
                let last = gaps.last_mut().expect("nonempty");
                *last = last.multiply(p).expect("uniform register").without_phase();
            }
            Step::Query => gaps.push(identity),
        }
    }
    let q = gaps.len() - 1;
    if q == 0 {
        return Err(CircuitError::InvalidCertificate("conjugation subcircuit has no queries".into()));
    }
    let mut frames = Vec::with_capacity(q);
    let mut current = gaps[q];
    frames.push(current);
    for j in 1..q {
        current = current.multiply(&gaps[q - j]).expect("uniform register").without_phase();
        frames.push(current);
    }
    if frames[q - 1].without_phase() != gaps[0].without_phase() {
        return Err(CircuitError::InvalidCertificate(
            "subcircuit does not factor into V_j U V_j sandwiches".into(),
        ));
    }
    Ok(frames)
}

/// Conjugation program: the one-query sandwich when available, otherwise the
/// split product
/// `U* = V0' U V0' * prod_{j=1..Q} (V_j U V_j)(V0 V_j U V_j V0)`
/// with `2Q + 1` queries, where Q is the S0 subcircuit's query count.
pub fn synth_conjugate(cert: &ConjugationCertificate) -> Result<CircuitProgram, CircuitError> {
    match cert {
        ConjugationCertificate::SingleQuery(v) => Ok(synth_single_query(Task::Conjugate, v)),
        ConjugationCertificate::Split { v0, v0_prime, s0_subcircuit, .. } => {
            let frames = sandwich_frames(s0_subcircuit)?;
            // Operator factors, left to right.
            let mut factors: Vec<Step> = vec![Step::Frame(*v0_prime), Step::Query, Step::Frame(*v0_prime)];
            for v in &frames {
                factors.extend([
                    Step::Frame(*v),
                    Step::Query,
                    Step::Frame(*v),
                    Step::Frame(*v0),
                    Step::Frame(*v),
                    Step::Query,
                    Step::Frame(*v),
                    Step::Frame(*v0),
                ]);
            }
            let mut program = CircuitProgram::new(Task::Conjugate, s0_subcircuit.n_qubits());
            for step in factors.into_iter().rev() {
                match step {
                    Step::Frame(p) => program.push_frame(p),
                    Step::Query => program.push_query(),
                }
            }
            Ok(program)
        }
    }
}

/// Exact sign-sum check for pairwise-commuting supports.
///
/// Writing the program as
/// `W * prod_k (F_k U F_k)` with `F_k` the cumulative frame ahead of query k
/// and `W` the product of all frames, the program equals
/// `W * exp(-i sum_j a_j c_j P_j)` with `c_j = sum_k s_jk`, where `s_jk` is
/// the conjugation sign of `F_k` on term j. It implements the target for all
/// coefficients iff every `c_j` matches `target_signs` (-1 for inversion,
/// the Y-parity pattern for conjugation and transposition) and the residual
/// word `W` is the identity.
pub fn verify_commuting_plan(
    support: &PauliSupport,
    prog: &CircuitProgram,
    target_signs: &[i64],
) -> Result<bool, CircuitError> {
    if !crate::analysis::check_pairwise_commuting(support) {
        return Err(CircuitError::NonCommutingSupport);
    }
    if prog.n_qubits() != support.n_qubits() {
        return Err(CircuitError::QubitCountMismatch { prog: prog.n_qubits(), support: support.n_qubits() });
    }
    debug_assert_eq!(target_signs.len(), support.len());
    let mut sums = vec![0i64; support.len()];
    let mut frame = PauliOperator::identity(support.n_qubits());
    for step in prog.steps() {
        match step {
            Step::Frame(p) => frame = frame.multiply(p).expect("uniform register").without_phase(),
            Step::Query => {
                for (sum, term) in sums.iter_mut().zip(support.terms()) {
                    *sum += if frame.commutes(term).expect("uniform register") { 1 } else { -1 };
                }
            }
        }
    }
    // After the loop `frame` is the residual W.
    Ok(frame.is_identity_word() && sums.iter().zip(target_signs).all(|(s, t)| s == t))
}

/// Target sign vector for `verify_commuting_plan` under a given task.
pub fn target_signs(support: &PauliSupport, task: Task) -> Vec<i64> {
    support
        .terms()
        .iter()
        .map(|t| match task {
            Task::Invert => -1,
            // U* negates even-Y terms and keeps odd-Y terms.
            Task::Conjugate => {
                if t.y_parity() == 1 {
                    1
                } else {
                    -1
                }
            }
            // U^T negates odd-Y terms and keeps even-Y terms.
            Task::Transpose => {
                if t.y_parity() == 1 {
                    -1
                } else {
                    1
                }
            }
        })
        .collect()
}
