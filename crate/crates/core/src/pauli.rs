//! Bit-packed N-qubit Pauli words with exact phase tracking.
//!
//! A word is stored as a pair of bit masks over qubits plus an exponent of i:
//! bit i of `x_bits` is set iff the factor on qubit i is X or Y, bit i of
//! `z_bits` iff it is Z or Y. The represented operator is
//! `i^phase_exp * w_0 ⊗ w_1 ⊗ ... ⊗ w_{N-1}` with qubit 0 leftmost.

use std::fmt;

use num_complex::Complex64;

use crate::dense::CMatrix;

/// Largest qubit count representable by the packed masks.
pub const MAX_QUBITS: usize = 64;

/// Default dense-matrix cap; `2^8 = 256`-dimensional matrices.
pub const DEFAULT_DENSE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PauliError {
    #[error("malformed Pauli token `{0}`")]
    MalformedToken(String),
    #[error("token `{token}` addresses a qubit outside 0..{n_qubits}")]
    IndexOutOfRange { token: String, n_qubits: usize },
    #[error("token `{0}` repeats a qubit index")]
    DuplicateIndex(String),
    #[error("qubit counts differ: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("{n_qubits} qubits exceeds the dense-matrix cap of {cap}")]
    DenseCapExceeded { n_qubits: usize, cap: usize },
    #[error("qubit count {0} exceeds the supported maximum of {MAX_QUBITS}")]
    TooManyQubits(usize),
}

/// An N-qubit Pauli word times `i^phase_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n_qubits: usize,
    x_bits: u64,
    z_bits: u64,
    phase_exp: u8,
}

/// Binary encoding of a Pauli word: `[x_0..x_{N-1} | z_0..z_{N-1}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticVector {
    pub n_qubits: usize,
    pub x_bits: u64,
    pub z_bits: u64,
}

fn qubit_mask(n_qubits: usize) -> u64 {
    if n_qubits == 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

impl PauliOperator {
    /// The identity word on `n_qubits` qubits.
    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, x_bits: 0, z_bits: 0, phase_exp: 0 }
    }

    /// Builds a word from raw masks; bits above `n_qubits` must be clear.
    pub fn from_bits(n_qubits: usize, x_bits: u64, z_bits: u64, phase_exp: u8) -> Result<Self, PauliError> {
        if n_qubits > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n_qubits));
        }
        let mask = qubit_mask(n_qubits);
        debug_assert_eq!(x_bits & !mask, 0);
        debug_assert_eq!(z_bits & !mask, 0);
        Ok(Self { n_qubits, x_bits: x_bits & mask, z_bits: z_bits & mask, phase_exp: phase_exp & 3 })
    }

    /// Single-qubit X/Y/Z factor embedded in an `n_qubits` word.
    pub fn single(letter: char, qubit: usize, n_qubits: usize) -> Result<Self, PauliError> {
        let (x, z) = match letter {
            'X' => (1, 0),
            'Y' => (1, 1),
            'Z' => (0, 1),
            _ => return Err(PauliError::MalformedToken(letter.to_string())),
        };
        if qubit >= n_qubits {
            return Err(PauliError::IndexOutOfRange { token: format!("{letter}{qubit}"), n_qubits });
        }
        Self::from_bits(n_qubits, x << qubit, z << qubit, 0)
    }

    /// Parses whitespace-separated `<letter><index>` tokens, e.g. `"X0 Z2"`.
    ///
    /// The single token `I` denotes the identity word. Unmentioned qubits are
    /// identity; the result carries phase exponent 0.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self, PauliError> {
        if n_qubits > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n_qubits));
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(PauliError::MalformedToken(text.trim().to_string()));
        }
        if tokens.contains(&"I") {
            if tokens.len() == 1 {
                return Ok(Self::identity(n_qubits));
            }
            // `I` is only meaningful on its own.
            return Err(PauliError::MalformedToken("I".to_string()));
        }
        let mut x_bits = 0u64;
        let mut z_bits = 0u64;
        let mut seen = 0u64;
        for token in tokens {
            let mut chars = token.chars();
            let letter = chars.next().ok_or_else(|| PauliError::MalformedToken(token.to_string()))?;
            let rest = chars.as_str();
            if !matches!(letter, 'X' | 'Y' | 'Z') || rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(PauliError::MalformedToken(token.to_string()));
            }
            let index: usize = rest
                .parse()
                .map_err(|_| PauliError::MalformedToken(token.to_string()))?;
            if index >= n_qubits {
                return Err(PauliError::IndexOutOfRange { token: token.to_string(), n_qubits });
            }
            let bit = 1u64 << index;
            if seen & bit != 0 {
                return Err(PauliError::DuplicateIndex(token.to_string()));
            }
            seen |= bit;
            if letter == 'X' || letter == 'Y' {
                x_bits |= bit;
            }
            if letter == 'Z' || letter == 'Y' {
                z_bits |= bit;
            }
        }
        Self::from_bits(n_qubits, x_bits, z_bits, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_bits(&self) -> u64 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u64 {
        self.z_bits
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    /// Same word with phase exponent forced to 0.
    pub fn without_phase(&self) -> Self {
        Self { phase_exp: 0, ..*self }
    }

    pub fn is_identity_word(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// Exact product `self * other`, tracking the power of i so that
    /// the dense matrices satisfy `dense(P) * dense(Q) = dense(P * Q)`.
    pub fn multiply(&self, other: &Self) -> Result<Self, PauliError> {
        if self.n_qubits != other.n_qubits {
            return Err(PauliError::QubitCountMismatch(self.n_qubits, other.n_qubits));
        }
        let x = self.x_bits ^ other.x_bits;
        let z = self.z_bits ^ other.z_bits;
        // Per qubit, with w(a,b) = i^{ab} X^a Z^b:
        //   w(a1,b1) w(a2,b2) = i^{a1 b1 + a2 b2 + 2 b1 a2 - a3 b3} w(a3,b3).
        let k = (self.x_bits & self.z_bits).count_ones()
            + (other.x_bits & other.z_bits).count_ones()
            + 2 * (self.z_bits & other.x_bits).count_ones()
            + 3 * (x & z).count_ones(); // -1 ≡ 3 (mod 4)
        let phase = (self.phase_exp as u32 + other.phase_exp as u32 + k) & 3;
        Ok(Self { n_qubits: self.n_qubits, x_bits: x, z_bits: z, phase_exp: phase as u8 })
    }

    /// True iff the words commute (symplectic inner product is 0 mod 2).
    pub fn commutes(&self, other: &Self) -> Result<bool, PauliError> {
        if self.n_qubits != other.n_qubits {
            return Err(PauliError::QubitCountMismatch(self.n_qubits, other.n_qubits));
        }
        let s = (self.x_bits & other.z_bits).count_ones() + (self.z_bits & other.x_bits).count_ones();
        Ok(s.is_multiple_of(2))
    }

    /// Parity of the number of Y factors.
    pub fn y_parity(&self) -> u8 {
        ((self.x_bits & self.z_bits).count_ones() & 1) as u8
    }

    pub fn to_symplectic(&self) -> SymplecticVector {
        SymplecticVector { n_qubits: self.n_qubits, x_bits: self.x_bits, z_bits: self.z_bits }
    }

    pub fn from_symplectic(v: &SymplecticVector) -> Self {
        Self { n_qubits: v.n_qubits, x_bits: v.x_bits, z_bits: v.z_bits, phase_exp: 0 }
    }

    /// Bit mask in basis-index space that the word's X part flips.
    ///
    /// Qubit 0 is the leftmost tensor factor, i.e. the most significant index
    /// bit: `X0 Z2` on three qubits is `X ⊗ I ⊗ Z`.
    fn index_mask(&self, bits: u64) -> u64 {
        let mut m = 0u64;
        for q in 0..self.n_qubits {
            if bits >> q & 1 == 1 {
                m |= 1 << (self.n_qubits - 1 - q);
            }
        }
        m
    }

    /// The dense matrix is a signed permutation: column `c` holds a single
    /// nonzero entry `amplitude(c)` at row `c ^ x_index_mask`.
    pub fn x_index_mask(&self) -> u64 {
        self.index_mask(self.x_bits)
    }

    pub fn z_index_mask(&self) -> u64 {
        self.index_mask(self.z_bits)
    }

    /// Nonzero entry of column `c` of the dense matrix.
    pub fn amplitude(&self, col: usize, z_index_mask: u64) -> Complex64 {
        let y_count = (self.x_bits & self.z_bits).count_ones();
        let i_pow = (self.phase_exp as u32 + y_count) & 3;
        let sign = (col as u64 & z_index_mask).count_ones() & 1;
        let phase = (i_pow + 2 * sign) & 3;
        match phase {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Exact `2^N x 2^N` matrix including the `i^phase_exp` prefactor.
    pub fn dense_matrix(&self, cap: usize) -> Result<CMatrix, PauliError> {
        if self.n_qubits > cap {
            return Err(PauliError::DenseCapExceeded { n_qubits: self.n_qubits, cap });
        }
        let dim = 1usize << self.n_qubits;
        let xm = self.x_index_mask();
        let zm = self.z_index_mask();
        let mut m = CMatrix::zeros(dim);
        for col in 0..dim {
            let row = col ^ xm as usize;
            m[(row, col)] = self.amplitude(col, zm);
        }
        Ok(m)
    }

    /// Canonical token text: ascending qubit index, identity rendered `I`.
    pub fn word_string(&self) -> String {
        if self.is_identity_word() {
            return "I".to_string();
        }
        let mut parts = Vec::new();
        for q in 0..self.n_qubits {
            let x = self.x_bits >> q & 1;
            let z = self.z_bits >> q & 1;
            match (x, z) {
                (1, 0) => parts.push(format!("X{q}")),
                (1, 1) => parts.push(format!("Y{q}")),
                (0, 1) => parts.push(format!("Z{q}")),
                _ => {}
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_exp {
            0 => "",
            1 => "i ",
            2 => "- ",
            _ => "-i ",
        };
        write!(f, "{}{}", prefix, self.word_string())
    }
}

impl SymplecticVector {
    pub fn len(&self) -> usize {
        2 * self.n_qubits
    }

    pub fn is_empty(&self) -> bool {
        self.n_qubits == 0
    }

    /// Bit at position `i` under the `[x | z]` layout.
    pub fn bit(&self, i: usize) -> bool {
        if i < self.n_qubits {
            self.x_bits >> i & 1 == 1
        } else {
            self.z_bits >> (i - self.n_qubits) & 1 == 1
        }
    }
}

impl fmt::Display for SymplecticVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", u8::from(self.bit(i)))?;
        }
        Ok(())
    }
}
