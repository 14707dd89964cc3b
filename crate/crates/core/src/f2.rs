//! Packed GF(2) linear algebra: augmented-system Gaussian elimination.
//!
//! Rows live in row-major `u64` words. The solver is incremental: each input
//! row is reduced against the pivots adopted so far and either becomes a new
//! pivot, is redundant, or contradicts the eliminated subsystem. Pivot choice
//! is always the lowest-index set column of the reduced row, so results are
//! deterministic and reproducible.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum F2Error {
    #[error("right-hand side has {rhs_len} bits but the matrix has {rows} rows")]
    DimensionMismatch { rhs_len: usize, rows: usize },
}

/// A fixed-length bit vector packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Row-major packed GF(2) matrix; bits past `cols` in each row stay zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        Self { rows, cols, words_per_row, data: vec![0; rows * words_per_row] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.words_per_row + c / 64;
        let mask = 1u64 << (c % 64);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Dot product of row `r` with a packed assignment, mod 2.
    pub fn row_dot(&self, r: usize, v: &BitVec) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut acc = 0u32;
        for (a, b) in self.row(r).iter().zip(v.words()) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }
}

/// Outcome of an elimination pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Solution {
    /// Satisfying assignment; free variables are 0.
    pub assignment: BitVec,
    /// Rows the assignment satisfies (may exceed the incorporated rows).
    pub satisfied_rows: Vec<usize>,
    /// Columns without a pivot, ascending.
    pub free_columns: Vec<usize>,
}

struct Pivot {
    col: usize,
    row: Vec<u64>,
    rhs: bool,
}

fn first_set_bit(words: &[u64]) -> Option<usize> {
    for (i, w) in words.iter().enumerate() {
        if *w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn word_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Runs the incremental elimination. When `stop_on_contradiction` is set, a
/// contradictory row aborts with `None`; otherwise such rows are skipped.
fn eliminate(a: &BitMatrix, b: &BitVec, stop_on_contradiction: bool) -> Option<Vec<Pivot>> {
    let mut pivots: Vec<Pivot> = Vec::new();
    let mut work = vec![0u64; a.words_per_row];
    for r in 0..a.rows {
        work.copy_from_slice(a.row(r));
        let mut rhs = b.get(r);
        for p in &pivots {
            if word_bit(&work, p.col) {
                xor_into(&mut work, &p.row);
                rhs ^= p.rhs;
            }
        }
        match first_set_bit(&work) {
            Some(col) => pivots.push(Pivot { col, row: work.clone(), rhs }),
            None if rhs && stop_on_contradiction => return None,
            None => {}
        }
    }
    // Back-substitution: clear each pivot column from every other pivot row,
    // leaving rows supported on their own pivot plus free columns only.
    for i in 0..pivots.len() {
        let (col, row, rhs) = {
            let p = &pivots[i];
            (p.col, p.row.clone(), p.rhs)
        };
        for (j, q) in pivots.iter_mut().enumerate() {
            if j != i && word_bit(&q.row, col) {
                xor_into(&mut q.row, &row);
                q.rhs ^= rhs;
            }
        }
    }
    Some(pivots)
}

fn extract_solution(a: &BitMatrix, b: &BitVec, pivots: &[Pivot]) -> F2Solution {
    let mut assignment = BitVec::zeros(a.cols);
    let mut is_pivot = vec![false; a.cols];
    for p in pivots {
        is_pivot[p.col] = true;
        assignment.set(p.col, p.rhs);
    }
    let free_columns = (0..a.cols).filter(|&c| !is_pivot[c]).collect();
    let satisfied_rows = (0..a.rows).filter(|&r| a.row_dot(r, &assignment) == b.get(r)).collect();
    F2Solution { assignment, satisfied_rows, free_columns }
}

fn check_dims(a: &BitMatrix, b: &BitVec) -> Result<(), F2Error> {
    if b.len() != a.rows {
        return Err(F2Error::DimensionMismatch { rhs_len: b.len(), rows: a.rows });
    }
    Ok(())
}

/// Solves `A v = b` exactly; `None` when the system is inconsistent.
///
/// Free variables are fixed to 0, so identical inputs yield identical
/// assignments.
pub fn solve_affine(a: &BitMatrix, b: &BitVec) -> Result<Option<F2Solution>, F2Error> {
    check_dims(a, b)?;
    let Some(pivots) = eliminate(a, b, true) else {
        return Ok(None);
    };
    let solution = extract_solution(a, b, &pivots);
    debug_assert_eq!(solution.satisfied_rows.len(), a.rows);
    Ok(Some(solution))
}

/// Greedy best-effort solve: rows are processed in input order and a row is
/// incorporated iff it is consistent with the subsystem eliminated so far.
///
/// `satisfied_rows` is recomputed against the final assignment, so skipped
/// rows that happen to hold are reported as satisfied.
pub fn solve_max_consistent(a: &BitMatrix, b: &BitVec) -> Result<F2Solution, F2Error> {
    check_dims(a, b)?;
    let pivots = eliminate(a, b, false).expect("skip mode never aborts");
    Ok(extract_solution(a, b, &pivots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn matrix_from(rows: &[&[bool]]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &bit) in row.iter().enumerate() {
                m.set(r, c, bit);
            }
        }
        m
    }

    #[test]
    fn single_equation() {
        let a = matrix_from(&[&[true]]);
        let b = BitVec::from_bools(&[true]);
        let sol = solve_affine(&a, &b).unwrap().unwrap();
        assert!(sol.assignment.get(0));
        assert_eq!(sol.satisfied_rows, vec![0]);
        assert!(sol.free_columns.is_empty());
    }

    #[test]
    fn contradictory_rows_are_inconsistent() {
        // x = 1 and x = 0
        let a = matrix_from(&[&[true, false], &[true, false]]);
        let b = BitVec::from_bools(&[true, false]);
        assert_eq!(solve_affine(&a, &b).unwrap(), None);
    }

    #[test]
    fn rhs_length_must_match() {
        let a = BitMatrix::zeros(3, 2);
        let b = BitVec::zeros(2);
        assert!(matches!(
            solve_affine(&a, &b),
            Err(F2Error::DimensionMismatch { rhs_len: 2, rows: 3 })
        ));
    }

    #[test]
    fn planted_solution_is_recovered() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let (rows, cols) = (50, 20);
            let planted: Vec<bool> = (0..cols).map(|_| rng.random()).collect();
            let mut a = BitMatrix::zeros(rows, cols);
            let mut b = BitVec::zeros(rows);
            for r in 0..rows {
                let mut rhs = false;
                for (c, &p) in planted.iter().enumerate() {
                    let bit: bool = rng.random();
                    a.set(r, c, bit);
                    rhs ^= bit && p;
                }
                b.set(r, rhs);
            }
            let sol = solve_affine(&a, &b).unwrap().expect("consistent by construction");
            for r in 0..rows {
                assert_eq!(a.row_dot(r, &sol.assignment), b.get(r), "row {r} violated");
            }
        }
    }

    #[test]
    fn greedy_skips_forced_contradiction() {
        // Rows: x = 1, x = 0, y = 1 over columns (x, y).
        let a = matrix_from(&[&[true, false], &[true, false], &[false, true]]);
        let b = BitVec::from_bools(&[true, false, true]);
        let sol = solve_max_consistent(&a, &b).unwrap();
        assert_eq!(sol.satisfied_rows, vec![0, 2]);
        assert!(sol.assignment.get(0));
        assert!(sol.assignment.get(1));
    }

    #[test]
    fn fully_consistent_system_satisfies_all_rows() {
        let a = matrix_from(&[&[true, false], &[false, true], &[true, true]]);
        let b = BitVec::from_bools(&[true, false, true]);
        let sol = solve_max_consistent(&a, &b).unwrap();
        assert_eq!(sol.satisfied_rows, vec![0, 1, 2]);
    }

    #[test]
    fn replay_never_reports_a_failing_row() {
        let mut rng = StdRng::seed_from_u64(11);
        for trial in 0..20 {
            let (rows, cols) = (200, 12);
            let mut a = BitMatrix::zeros(rows, cols);
            let mut b = BitVec::zeros(rows);
            for r in 0..rows {
                for c in 0..cols {
                    a.set(r, c, rng.random());
                }
                b.set(r, rng.random());
            }
            let sol = solve_max_consistent(&a, &b).unwrap();
            for &r in &sol.satisfied_rows {
                assert_eq!(a.row_dot(r, &sol.assignment), b.get(r), "trial {trial} row {r}");
            }
            // Deterministic: the identical system solves to the identical answer.
            let again = solve_max_consistent(&a, &b).unwrap();
            assert_eq!(sol, again);
        }
    }

    #[test]
    fn zero_row_matrix_solves_trivially() {
        let a = BitMatrix::zeros(0, 4);
        let b = BitVec::zeros(0);
        let sol = solve_affine(&a, &b).unwrap().unwrap();
        assert_eq!(sol.assignment.count_ones(), 0);
        assert_eq!(sol.free_columns, vec![0, 1, 2, 3]);
    }
}
