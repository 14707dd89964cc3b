//! Feasibility analysis over a Pauli support: single-query certificates,
//! brute-force subset oracles, greedy anti-commute covers and split
//! certificates for the multi-query recursions.
//!
//! Searches are deterministic: affine solves fix free variables to 0, subset
//! enumeration runs by increasing size then lexicographic order, and every
//! certificate that drives synthesis is re-validated numerically before it is
//! returned.

use crate::circuit::{synth_conjugate, synth_split_inverse, CircuitProgram};
use crate::f2::{solve_affine, solve_max_consistent, BitMatrix, BitVec};
use crate::pauli::{PauliOperator, DEFAULT_DENSE_CAP};
use crate::sim;
use crate::support::PauliSupport;

/// Default cap on support size for exhaustive bipartition searches.
pub const DEFAULT_SPLIT_CAP: usize = 20;

/// Default cap on support size for subset-product enumeration.
pub const DEFAULT_ORACLE_CAP: usize = 24;

/// Draws used when a certificate is numerically re-validated.
const VALIDATION_SAMPLES: usize = 16;
const VALIDATION_SEED: u64 = 0;
const VALIDATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("{what}: support has {size} terms, exceeding the cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
}

/// A set W of Pauli words such that every support term anti-commutes with at
/// least one member; `covered_by[i]` is the W-index assigned to term i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntiCommuteCover {
    pub elements: Vec<PauliOperator>,
    pub covered_by: Vec<usize>,
}

/// Witness for the generalized (split) inversion recursion: S0 pairwise
/// commutes and commutes with S1, `v0` anti-commutes with S1 and commutes
/// with S0, and `w` covers S0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCertificate {
    pub s0_indices: Vec<usize>,
    pub s1_indices: Vec<usize>,
    pub v0: PauliOperator,
    pub w: AntiCommuteCover,
}

/// Witness that the support admits an ancilla-free conjugation program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugationCertificate {
    /// `V U V = U*`.
    SingleQuery(PauliOperator),
    /// Split form: `v0` anti-commutes with S1 and commutes with S0; `v0_prime`
    /// commutes with odd-Y terms of S1 and even-Y terms of S0 and
    /// anti-commutes with the rest; `s0_subcircuit` conjugates the S0 part.
    Split {
        s0_indices: Vec<usize>,
        s1_indices: Vec<usize>,
        v0: PauliOperator,
        v0_prime: PauliOperator,
        s0_subcircuit: CircuitProgram,
    },
}

/// Constraint matrix: row j is term j's symplectic vector with halves swapped
/// (`[z | x]`), so a plain GF(2) dot product with a candidate's `[x | z]`
/// vector computes the symplectic pairing.
pub fn build_constraint_rows(support: &PauliSupport) -> BitMatrix {
    let n = support.n_qubits();
    let mut a = BitMatrix::zeros(support.len(), 2 * n);
    for (r, term) in support.terms().iter().enumerate() {
        for q in 0..n {
            if term.z_bits() >> q & 1 == 1 {
                a.set(r, q, true);
            }
            if term.x_bits() >> q & 1 == 1 {
                a.set(r, n + q, true);
            }
        }
    }
    a
}

fn pauli_from_assignment(n_qubits: usize, assignment: &BitVec) -> PauliOperator {
    let mut x = 0u64;
    let mut z = 0u64;
    for q in 0..n_qubits {
        if assignment.get(q) {
            x |= 1 << q;
        }
        if assignment.get(n_qubits + q) {
            z |= 1 << q;
        }
    }
    PauliOperator::from_bits(n_qubits, x, z, 0).expect("assignment within register")
}

/// Solves for a Pauli word whose commutation pattern matches `rhs`
/// (bit j set = anti-commute with term j, clear = commute).
fn solve_commutation_pattern(support: &PauliSupport, rhs: &BitVec) -> Option<PauliOperator> {
    let a = build_constraint_rows(support);
    let solution = solve_affine(&a, rhs).expect("row count matches rhs")?;
    Some(pauli_from_assignment(support.n_qubits(), &solution.assignment))
}

/// A Pauli anti-commuting with every support term, if one exists.
pub fn find_single_query_inverter(support: &PauliSupport) -> Option<PauliOperator> {
    solve_commutation_pattern(support, &BitVec::ones(support.len()))
}

/// A Pauli commuting with odd-Y terms and anti-commuting with even-Y terms.
pub fn find_single_query_conjugator(support: &PauliSupport) -> Option<PauliOperator> {
    let rhs = BitVec::from_bools(
        &support.terms().iter().map(|t| t.y_parity() == 0).collect::<Vec<_>>(),
    );
    solve_commutation_pattern(support, &rhs)
}

/// A Pauli anti-commuting with odd-Y terms and commuting with even-Y terms.
pub fn find_single_query_transposer(support: &PauliSupport) -> Option<PauliOperator> {
    let rhs = BitVec::from_bools(
        &support.terms().iter().map(|t| t.y_parity() == 1).collect::<Vec<_>>(),
    );
    solve_commutation_pattern(support, &rhs)
}

/// Gray-code walk over all nonempty subsets, reporting the first whose word
/// product is proportional to the identity and which passes `accept`.
fn find_identity_product_subset(
    support: &PauliSupport,
    cap: usize,
    what: &'static str,
    accept: impl Fn(&[usize]) -> bool,
) -> Result<Option<Vec<usize>>, AnalysisError> {
    let m = support.len();
    if m > cap || m >= 64 {
        return Err(AnalysisError::CapExceeded { what, size: m, cap: cap.min(63) });
    }
    let terms = support.terms();
    let mut x = 0u64;
    let mut z = 0u64;
    let mut members = 0u64;
    for k in 1u64..1u64 << m {
        let flip = k.trailing_zeros() as usize;
        x ^= terms[flip].x_bits();
        z ^= terms[flip].z_bits();
        members ^= 1 << flip;
        if x == 0 && z == 0 {
            let indices: Vec<usize> = (0..m).filter(|&i| members >> i & 1 == 1).collect();
            if accept(&indices) {
                return Ok(Some(indices));
            }
        }
    }
    Ok(None)
}

/// Brute-force oracle for the single-query inversion criterion: a witness
/// subset of odd cardinality whose product is proportional to the identity.
pub fn find_odd_identity_subset(
    support: &PauliSupport,
    cap: usize,
) -> Result<Option<Vec<usize>>, AnalysisError> {
    find_identity_product_subset(support, cap, "odd-identity subset enumeration", |indices| {
        indices.len() % 2 == 1
    })
}

pub fn odd_identity_subset_exists(support: &PauliSupport, cap: usize) -> Result<bool, AnalysisError> {
    Ok(find_odd_identity_subset(support, cap)?.is_some())
}

/// Brute-force oracle for the single-query conjugation criterion: a witness
/// subset with product proportional to identity containing an odd number of
/// even-Y terms.
pub fn find_even_y_violation_subset(
    support: &PauliSupport,
    cap: usize,
) -> Result<Option<Vec<usize>>, AnalysisError> {
    let terms = support.terms();
    find_identity_product_subset(support, cap, "even-Y subset enumeration", |indices| {
        indices.iter().filter(|&&i| terms[i].y_parity() == 0).count() % 2 == 1
    })
}

pub fn check_pairwise_commuting(support: &PauliSupport) -> bool {
    let terms = support.terms();
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            if !a.commutes(b).expect("uniform register") {
                return false;
            }
        }
    }
    true
}

/// Greedy anti-commute cover: repeatedly solve the all-ones system in input
/// order, keep the rows the found word anti-commutes with, and recurse on the
/// rest. Each pass covers at least its first remaining term, so the loop
/// terminates with a total cover. Not guaranteed minimal.
pub fn find_anticommute_cover(support: &PauliSupport) -> AntiCommuteCover {
    let m = support.len();
    let mut covered_by = vec![usize::MAX; m];
    let mut elements = Vec::new();
    let mut remaining: Vec<usize> = (0..m).collect();
    while !remaining.is_empty() {
        let sub = support.select(&remaining);
        let a = build_constraint_rows(&sub);
        let solution = solve_max_consistent(&a, &BitVec::ones(sub.len())).expect("row count matches");
        let v = pauli_from_assignment(support.n_qubits(), &solution.assignment);
        let mut covered = Vec::new();
        let mut kept = Vec::new();
        for &term_index in &remaining {
            if v.commutes(&support.terms()[term_index]).expect("uniform register") {
                kept.push(term_index);
            } else {
                covered.push(term_index);
            }
        }
        debug_assert!(!covered.is_empty(), "greedy pass must cover its first remaining term");
        for term_index in covered {
            covered_by[term_index] = elements.len();
        }
        elements.push(v);
        remaining = kept;
    }
    AntiCommuteCover { elements, covered_by }
}

/// Lexicographic k-subsets of `items`.
struct Combinations<'a> {
    items: &'a [usize],
    cursor: Vec<usize>,
    done: bool,
}

impl<'a> Combinations<'a> {
    fn new(items: &'a [usize], k: usize) -> Self {
        let done = k > items.len() || k == 0;
        Self { items, cursor: (0..k).collect(), done }
    }
}

impl Iterator for Combinations<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out: Vec<usize> = self.cursor.iter().map(|&i| self.items[i]).collect();
        let k = self.cursor.len();
        let n = self.items.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cursor[i] != i + n - k {
                self.cursor[i] += 1;
                for j in i + 1..k {
                    self.cursor[j] = self.cursor[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Terms that commute with every other term of the support. Any valid S0 is
/// a subset of this core: its members must commute with all of S0 and S1,
/// i.e. with everything.
fn commuting_core(support: &PauliSupport) -> Vec<usize> {
    let terms = support.terms();
    (0..terms.len())
        .filter(|&i| {
            terms.iter().enumerate().all(|(j, other)| {
                i == j || terms[i].commutes(other).expect("uniform register")
            })
        })
        .collect()
}

fn split_rhs(m: usize, s0: &[usize]) -> BitVec {
    let mut rhs = BitVec::ones(m);
    for &i in s0 {
        rhs.set(i, false);
    }
    rhs
}

/// Checks a synthesized program against the dense simulator; supports too
/// large for the simulator pass (the combinatorial invariants hold by
/// construction).
fn numerically_valid(support: &PauliSupport, program: &CircuitProgram) -> bool {
    if support.n_qubits() > DEFAULT_DENSE_CAP {
        return true;
    }
    sim::certify_program(
        support,
        program,
        program.task(),
        VALIDATION_SAMPLES,
        VALIDATION_SEED,
        VALIDATION_TOL,
        DEFAULT_DENSE_CAP,
    )
    .map(|report| report.pass)
    .unwrap_or(false)
}

/// Exhaustive split search: S0 subsets are drawn from the commuting core by
/// increasing size then lexicographic order; at each size the certificate
/// with the smallest cover (fewest queries) wins. Every returned certificate
/// has been validated numerically.
pub fn find_split_certificate(
    support: &PauliSupport,
    cap: usize,
) -> Result<Option<SplitCertificate>, AnalysisError> {
    let m = support.len();
    if m > cap {
        return Err(AnalysisError::CapExceeded { what: "split-certificate search", size: m, cap });
    }
    // Routing rule: a pairwise-commuting support is the cover recursion's
    // job; the degenerate S1 = empty split would only waste queries.
    if m == 0 || check_pairwise_commuting(support) {
        return Ok(None);
    }
    let core = commuting_core(support);
    for size in 1..=core.len().min(m - 1) {
        let mut found: Vec<SplitCertificate> = Vec::new();
        for s0_indices in Combinations::new(&core, size) {
            let rhs = split_rhs(m, &s0_indices);
            let Some(v0) = solve_commutation_pattern(support, &rhs) else {
                continue;
            };
            let w = find_anticommute_cover(&support.select(&s0_indices));
            let s1_indices: Vec<usize> = (0..m).filter(|i| !s0_indices.contains(i)).collect();
            found.push(SplitCertificate { s0_indices, s1_indices, v0, w });
        }
        found.sort_by_key(|c| c.w.elements.len());
        for cert in found {
            let Ok(program) = synth_split_inverse(support, &cert) else {
                continue;
            };
            if numerically_valid(support, &program) {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// Conjugation search per the split pattern: single query first, then S0
/// subsets from the commuting core with both commutation systems solvable and
/// the S0 part conjugable recursively. Certificates are validated numerically
/// before being returned.
pub fn build_conjugation_certificate(
    support: &PauliSupport,
    cap: usize,
) -> Result<Option<ConjugationCertificate>, AnalysisError> {
    if let Some(v) = find_single_query_conjugator(support) {
        let cert = ConjugationCertificate::SingleQuery(v);
        let program = synth_conjugate(&cert).expect("single-query synthesis is total");
        if numerically_valid(support, &program) {
            return Ok(Some(cert));
        }
    }
    let m = support.len();
    if m > cap {
        return Err(AnalysisError::CapExceeded { what: "conjugation-certificate search", size: m, cap });
    }
    let terms = support.terms();
    let core = commuting_core(support);
    for size in 1..=core.len().min(m.saturating_sub(1)) {
        let mut found: Vec<(usize, ConjugationCertificate)> = Vec::new();
        for s0_indices in Combinations::new(&core, size) {
            let in_s0 = |i: &usize| s0_indices.contains(i);
            let v0_rhs = split_rhs(m, &s0_indices);
            let Some(v0) = solve_commutation_pattern(support, &v0_rhs) else {
                continue;
            };
            // V0': anti-commute with even-Y terms of S1 and odd-Y terms of
            // S0, commute with the rest.
            let pattern: Vec<bool> = (0..m)
                .map(|i| {
                    let odd_y = terms[i].y_parity() == 1;
                    if in_s0(&i) {
                        odd_y
                    } else {
                        !odd_y
                    }
                })
                .collect();
            let Some(v0_prime) = solve_commutation_pattern(support, &BitVec::from_bools(&pattern)) else {
                continue;
            };
            let sub = support.select(&s0_indices);
            let Some(sub_cert) = build_conjugation_certificate(&sub, cap)? else {
                continue;
            };
            let Ok(s0_subcircuit) = synth_conjugate(&sub_cert) else {
                continue;
            };
            let s1_indices: Vec<usize> = (0..m).filter(|i| !in_s0(i)).collect();
            let query_count = 2 * s0_subcircuit.query_count() + 1;
            found.push((
                query_count,
                ConjugationCertificate::Split { s0_indices, s1_indices, v0, v0_prime, s0_subcircuit },
            ));
        }
        found.sort_by_key(|(q, _)| *q);
        for (_, cert) in found {
            let Ok(program) = synth_conjugate(&cert) else {
                continue;
            };
            if numerically_valid(support, &program) {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}
