//! Pauli supports: the declared set of non-identity terms of a Hamiltonian.
//!
//! File format: UTF-8 text, one term per line in token grammar (`X0 Z2`),
//! `#` comments and blank lines ignored, optional `qubits: <n>` header line.
//! Without a header the qubit count is one past the largest index mentioned.

use sha2::{Digest, Sha256};

use crate::pauli::{PauliError, PauliOperator};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SupportError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: PauliError,
    },
    #[error("line {line}: invalid qubits header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("no terms and no `qubits:` header; qubit count cannot be inferred")]
    Empty,
    #[error("term {index} has {found} qubits, support has {expected}")]
    MixedQubitCounts { index: usize, found: usize, expected: usize },
}

/// Deduplicated ordered set of non-identity Pauli words on a fixed register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliSupport {
    n_qubits: usize,
    terms: Vec<PauliOperator>,
}

impl PauliSupport {
    /// Builds a support, dropping identity words, phases and duplicates.
    ///
    /// Order of first occurrence is preserved; later analysis passes consume
    /// terms in this order, so callers control greedy tie-breaking.
    pub fn new(n_qubits: usize, terms: Vec<PauliOperator>) -> Result<Self, SupportError> {
        let mut kept: Vec<PauliOperator> = Vec::with_capacity(terms.len());
        let mut seen = std::collections::HashSet::with_capacity(terms.len());
        for (index, term) in terms.into_iter().enumerate() {
            if term.n_qubits() != n_qubits {
                return Err(SupportError::MixedQubitCounts {
                    index,
                    found: term.n_qubits(),
                    expected: n_qubits,
                });
            }
            let word = term.without_phase();
            if word.is_identity_word() {
                continue;
            }
            if seen.insert((word.x_bits(), word.z_bits())) {
                kept.push(word);
            }
        }
        Ok(Self { n_qubits, terms: kept })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliOperator] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Subset of this support selected by term indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: indices.iter().map(|&i| self.terms[i]).collect(),
        }
    }

    /// Parses the support file format.
    pub fn parse_str(text: &str) -> Result<Self, SupportError> {
        let mut declared_qubits: Option<usize> = None;
        let mut term_lines: Vec<(usize, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("qubits:") {
                let n = rest
                    .trim()
                    .parse()
                    .map_err(|_| SupportError::BadHeader { line: i + 1, text: raw.trim().to_string() })?;
                declared_qubits = Some(n);
                continue;
            }
            term_lines.push((i + 1, line));
        }
        let n_qubits = match declared_qubits {
            Some(n) => n,
            None => {
                let mut max_index = None;
                for &(line, text) in &term_lines {
                    for token in text.split_whitespace() {
                        if token == "I" {
                            continue;
                        }
                        let index: usize = token
                            .get(1..)
                            .and_then(|d| d.parse().ok())
                            .ok_or_else(|| SupportError::Parse {
                                line,
                                source: PauliError::MalformedToken(token.to_string()),
                            })?;
                        max_index = Some(max_index.map_or(index, |m: usize| m.max(index)));
                    }
                }
                match max_index {
                    Some(m) => m + 1,
                    None if term_lines.is_empty() => return Err(SupportError::Empty),
                    None => 1, // only `I` lines; a 1-qubit empty support
                }
            }
        };
        let mut terms = Vec::with_capacity(term_lines.len());
        for (line, text) in term_lines {
            let term =
                PauliOperator::parse(text, n_qubits).map_err(|source| SupportError::Parse { line, source })?;
            terms.push(term);
        }
        Self::new(n_qubits, terms)
    }

    /// Canonical file rendering (header plus one term per line).
    pub fn render(&self) -> String {
        let mut out = format!("qubits: {}\n", self.n_qubits);
        for term in &self.terms {
            out.push_str(&term.word_string());
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the canonical rendering, as lowercase hex.
    pub fn support_hash(&self) -> String {
        let digest = Sha256::digest(self.render().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Convenience constructor from token strings.
    pub fn from_token_lines(n_qubits: usize, lines: &[&str]) -> Result<Self, SupportError> {
        let terms = lines
            .iter()
            .map(|l| PauliOperator::parse(l, n_qubits))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| SupportError::Parse { line: 0, source })?;
        Self::new(n_qubits, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_terms_comments_and_header() {
        let text = "# Ising chain\nqubits: 3\nZ0 Z1\nZ1 Z2 # coupling\n\nX0\nX1\nX2\n";
        let s = PauliSupport::parse_str(text).unwrap();
        assert_eq!(s.n_qubits(), 3);
        assert_eq!(s.len(), 5);
        assert_eq!(s.terms()[0].word_string(), "Z0 Z1");
    }

    #[test]
    fn infers_qubit_count_without_header() {
        let s = PauliSupport::parse_str("X0\nZ4\n").unwrap();
        assert_eq!(s.n_qubits(), 5);
    }

    #[test]
    fn dedups_and_drops_identity() {
        let s = PauliSupport::parse_str("qubits: 2\nX0\nI\nX0\nZ1\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.terms()[1].word_string(), "Z1");
    }

    #[test]
    fn reports_parse_errors_with_line_numbers() {
        let err = PauliSupport::parse_str("qubits: 2\nX0\nW3\n").unwrap_err();
        assert!(matches!(err, SupportError::Parse { line: 3, .. }), "{err}");
        let err = PauliSupport::parse_str("qubits: two\nX0\n").unwrap_err();
        assert!(matches!(err, SupportError::BadHeader { line: 1, .. }));
        assert!(matches!(PauliSupport::parse_str("# nothing\n"), Err(SupportError::Empty)));
    }

    #[test]
    fn render_round_trips() {
        let s = PauliSupport::parse_str("qubits: 3\nZ0 Z1\nX2\n").unwrap();
        let again = PauliSupport::parse_str(&s.render()).unwrap();
        assert_eq!(s, again);
        assert_eq!(s.support_hash(), again.support_hash());
    }

    #[test]
    fn hash_distinguishes_supports() {
        let a = PauliSupport::parse_str("qubits: 2\nX0\n").unwrap();
        let b = PauliSupport::parse_str("qubits: 2\nX1\n").unwrap();
        assert_ne!(a.support_hash(), b.support_hash());
    }
}
