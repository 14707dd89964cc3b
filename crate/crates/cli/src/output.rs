//! Report shapes shared by the text and JSON emitters.

use serde::Serialize;

use revq_core::{
    AntiCommuteCover, ConjugationCertificate, PauliOperator, PauliSupport, SplitCertificate, Task,
};

#[derive(Serialize)]
pub struct SingleQueryReport {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
}

/// Single-query feasibility across all three tasks.
#[derive(Serialize)]
pub struct Capabilities {
    pub invertible: bool,
    pub conjugable: bool,
    pub transposable: bool,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateSummary {
    SingleQuery {
        v: String,
    },
    Cover {
        elements: Vec<String>,
        size: usize,
    },
    Split {
        s0: Vec<String>,
        s1: Vec<String>,
        v0: String,
        w: Vec<String>,
    },
    Conjugation {
        s0: Vec<String>,
        s1: Vec<String>,
        v0: String,
        v0_prime: String,
        subcircuit_queries: usize,
    },
}

impl CertificateSummary {
    pub fn single(v: &PauliOperator) -> Self {
        CertificateSummary::SingleQuery { v: v.word_string() }
    }

    pub fn cover(cover: &AntiCommuteCover) -> Self {
        CertificateSummary::Cover {
            elements: cover.elements.iter().map(|e| e.word_string()).collect(),
            size: cover.elements.len(),
        }
    }

    pub fn split(support: &PauliSupport, cert: &SplitCertificate) -> Self {
        let words = |idx: &[usize]| idx.iter().map(|&i| support.terms()[i].word_string()).collect();
        CertificateSummary::Split {
            s0: words(&cert.s0_indices),
            s1: words(&cert.s1_indices),
            v0: cert.v0.word_string(),
            w: cert.w.elements.iter().map(|e| e.word_string()).collect(),
        }
    }

    pub fn conjugation(support: &PauliSupport, cert: &ConjugationCertificate) -> Self {
        match cert {
            ConjugationCertificate::SingleQuery(v) => Self::single(v),
            ConjugationCertificate::Split { s0_indices, s1_indices, v0, v0_prime, s0_subcircuit } => {
                let words =
                    |idx: &[usize]| -> Vec<String> { idx.iter().map(|&i| support.terms()[i].word_string()).collect() };
                CertificateSummary::Conjugation {
                    s0: words(s0_indices),
                    s1: words(s1_indices),
                    v0: v0.word_string(),
                    v0_prime: v0_prime.word_string(),
                    subcircuit_queries: s0_subcircuit.query_count(),
                }
            }
        }
    }
}

/// Result of the analyze decision chain for one task.
#[derive(Serialize)]
pub struct AnalysisSummary {
    pub task: Task,
    pub n_qubits: usize,
    pub terms: usize,
    pub support_hash: String,
    /// `single_query` / `commuting_cover` / `split` / `conjugation_split` /
    /// `unsupported` / `no_protocol_found` / `not_found_under_cap`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query_count: Option<usize>,
    pub single_query_capabilities: Capabilities,
    pub single_query: Option<SingleQueryReport>,
    /// Witness subset proving single-query infeasibility, when enumerable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub single_query_witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairwise_commuting: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub cap: Option<usize>,
}

impl AnalysisSummary {
    pub fn new(support: &PauliSupport, task: Task) -> Self {
        Self {
            task,
            n_qubits: support.n_qubits(),
            terms: support.len(),
            support_hash: support.support_hash(),
            status: "undecided".into(),
            query_count: None,
            single_query_capabilities: Capabilities {
                invertible: revq_core::find_single_query_inverter(support).is_some(),
                conjugable: revq_core::find_single_query_conjugator(support).is_some(),
                transposable: revq_core::find_single_query_transposer(support).is_some(),
            },
            single_query: None,
            single_query_witness: None,
            pairwise_commuting: None,
            certificate: None,
            notes: Vec::new(),
            cap: None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "task: {}   qubits: {}   terms: {}\n",
            self.task, self.n_qubits, self.terms
        ));
        let cap = &self.single_query_capabilities;
        out.push_str(&format!(
            "single-query capabilities: invert {} / conjugate {} / transpose {}\n",
            if cap.invertible { "yes" } else { "no" },
            if cap.conjugable { "yes" } else { "no" },
            if cap.transposable { "yes" } else { "no" },
        ));
        if let Some(sq) = &self.single_query {
            match &sq.v {
                Some(v) => out.push_str(&format!("single-query: YES, V = {v}\n")),
                None => out.push_str("single-query: NO\n"),
            }
        }
        if let Some(witness) = &self.single_query_witness {
            out.push_str(&format!("witness subset: {{{}}}\n", witness.join(", ")));
        }
        if let Some(p) = self.pairwise_commuting {
            out.push_str(&format!("pairwise commuting: {}\n", if p { "yes" } else { "no" }));
        }
        match &self.certificate {
            Some(CertificateSummary::SingleQuery { .. }) | None => {}
            Some(CertificateSummary::Cover { elements, size }) => {
                out.push_str(&format!("anti-commute cover (L = {size}): {}\n", elements.join(", ")));
            }
            Some(CertificateSummary::Split { s0, v0, w, .. }) => {
                out.push_str(&format!("split: S0 = {{{}}}\n", s0.join(", ")));
                out.push_str(&format!("       V0 = {v0}, W = {{{}}}\n", w.join(", ")));
            }
            Some(CertificateSummary::Conjugation { s0, v0, v0_prime, subcircuit_queries, .. }) => {
                out.push_str(&format!("conjugation split: S0 = {{{}}}\n", s0.join(", ")));
                out.push_str(&format!(
                    "       V0 = {v0}, V0' = {v0_prime}, subcircuit queries = {subcircuit_queries}\n"
                ));
            }
        }
        out.push_str(&format!("status: {}\n", self.status));
        if let Some(q) = self.query_count {
            out.push_str(&format!("queries: {q}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

#[derive(Serialize)]
pub struct OracleReport {
    pub which: String,
    pub n_qubits: usize,
    pub terms: usize,
    pub support_hash: String,
    pub witness_found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl OracleReport {
    pub fn new(support: &PauliSupport, which: &str, witness: Option<Vec<usize>>) -> Self {
        let witness =
            witness.map(|idx| idx.iter().map(|&i| support.terms()[i].word_string()).collect());
        Self {
            which: which.into(),
            n_qubits: support.n_qubits(),
            terms: support.len(),
            support_hash: support.support_hash(),
            witness_found: witness.is_some(),
            witness,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("oracle: {}   qubits: {}   terms: {}\n", self.which, self.n_qubits, self.terms);
        match &self.witness {
            Some(w) => out.push_str(&format!("witness: {{{}}}\n", w.join(", "))),
            None => out.push_str("witness: none\n"),
        }
        out
    }
}
