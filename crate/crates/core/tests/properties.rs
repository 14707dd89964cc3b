//! Property tests for the library contract: the Pauli algebra against
//! an independent Kronecker-product oracle, solver replay guarantees, cover
//! totality, certificate commutation patterns and program round-trips.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use revq_core::*;

/// Independent dense oracle: builds the matrix by explicit 2x2 Kronecker
/// products, never touching the packed fast path.
fn kron_oracle(op: &PauliOperator) -> CMatrix {
    fn single(x: bool, z: bool) -> Vec<Vec<Complex64>> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match (x, z) {
            (false, false) => vec![vec![l, o], vec![o, l]],
            (true, false) => vec![vec![o, l], vec![l, o]],
            (true, true) => vec![vec![o, -i], vec![i, o]],
            (false, true) => vec![vec![l, o], vec![o, -l]],
        }
    }
    let mut acc = vec![vec![Complex64::new(1.0, 0.0)]];
    for q in 0..op.n_qubits() {
        let factor = single(op.x_bits() >> q & 1 == 1, op.z_bits() >> q & 1 == 1);
        let mut next = vec![vec![Complex64::new(0.0, 0.0); acc[0].len() * 2]; acc.len() * 2];
        for (r, row) in acc.iter().enumerate() {
            for (c, &a) in row.iter().enumerate() {
                for fr in 0..2 {
                    for fc in 0..2 {
                        next[r * 2 + fr][c * 2 + fc] = a * factor[fr][fc];
                    }
                }
            }
        }
        acc = next;
    }
    let phase = match op.phase_exp() {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let dim = acc.len();
    let mut m = CMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            m[(r, c)] = phase * acc[r][c];
        }
    }
    m
}

fn all_words(n: usize) -> Vec<PauliOperator> {
    (0..1u64 << (2 * n))
        .map(|code| {
            PauliOperator::from_bits(n, code & ((1 << n) - 1), code >> n, 0).unwrap()
        })
        .collect()
}

#[test]
fn dense_matrix_matches_kron_oracle_exhaustively() {
    for n in 1..=3 {
        for op in all_words(n) {
            for phase in 0..4u8 {
                let op = PauliOperator::from_bits(n, op.x_bits(), op.z_bits(), phase).unwrap();
                let fast = op.dense_matrix(8).unwrap();
                assert!(
                    fast.max_abs_diff(&kron_oracle(&op)) == 0.0,
                    "dense mismatch for {op}"
                );
            }
        }
    }
}

#[test]
fn commutes_agrees_with_dense_check_exhaustively() {
    for n in 1..=3 {
        let words = all_words(n);
        for a in &words {
            for b in &words {
                let da = kron_oracle(a);
                let db = kron_oracle(b);
                let ab = da.matmul(&db).unwrap();
                let ba = db.matmul(&da).unwrap();
                let mut commutator = ab.clone();
                commutator.add_scaled(&ba, Complex64::new(-1.0, 0.0)).unwrap();
                let mut anticommutator = ab;
                anticommutator.add_scaled(&ba, Complex64::new(1.0, 0.0)).unwrap();
                if a.commutes(b).unwrap() {
                    assert!(commutator.max_abs() == 0.0);
                } else {
                    assert!(anticommutator.max_abs() == 0.0);
                }
            }
        }
    }
}

#[test]
fn multiply_is_phase_exact_and_associative_on_random_triples() {
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..1000 {
        let n = rng.random_range(1..=3);
        let mask = (1u64 << n) - 1;
        let mut draw = || {
            PauliOperator::from_bits(
                n,
                rng.random::<u64>() & mask,
                rng.random::<u64>() & mask,
                rng.random_range(0..4),
            )
            .unwrap()
        };
        let (a, b, c) = (draw(), draw(), draw());
        let ab = a.multiply(&b).unwrap();
        let dense_ab = kron_oracle(&a).matmul(&kron_oracle(&b)).unwrap();
        assert!(dense_ab.max_abs_diff(&kron_oracle(&ab)) == 0.0, "phase drift in {a} * {b}");
        let left = ab.multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn half_of_all_words_anticommute_with_any_non_identity_word() {
    for n in 1..=3usize {
        let words = all_words(n);
        for p in &words {
            if p.is_identity_word() {
                continue;
            }
            let anti = words.iter().filter(|q| !p.commutes(q).unwrap()).count();
            assert_eq!(anti, 1 << (2 * n - 1), "word {p}");
        }
    }
}

#[test]
fn anticommutation_solution_space_has_rank_one() {
    // The affine system "anti-commute with V" has 2^(2N-1) solutions: one
    // pivot, 2N - 1 free columns.
    for n in 1..=3usize {
        for v in all_words(n) {
            if v.is_identity_word() {
                continue;
            }
            let s = PauliSupport::new(n, vec![v]).unwrap();
            let a = build_constraint_rows(&s);
            let sol = solve_affine(&a, &BitVec::ones(1)).unwrap().unwrap();
            assert_eq!(sol.free_columns.len(), 2 * n - 1);
        }
    }
}

fn random_support(rng: &mut StdRng, n: usize, max_terms: usize) -> PauliSupport {
    let mask = (1u64 << n) - 1;
    let m = rng.random_range(1..=max_terms);
    let terms: Vec<PauliOperator> = (0..m)
        .map(|_| {
            loop {
                let x = rng.random::<u64>() & mask;
                let z = rng.random::<u64>() & mask;
                if x != 0 || z != 0 {
                    return PauliOperator::from_bits(n, x, z, 0).unwrap();
                }
            }
        })
        .collect();
    PauliSupport::new(n, terms).unwrap()
}

#[test]
fn single_query_certificates_replay_their_patterns() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.random_range(1..=4);
        let s = random_support(&mut rng, n, 10);
        if let Some(v) = find_single_query_inverter(&s) {
            assert!(s.terms().iter().all(|t| !v.commutes(t).unwrap()));
        }
        if let Some(v) = find_single_query_conjugator(&s) {
            for t in s.terms() {
                assert_eq!(v.commutes(t).unwrap(), t.y_parity() == 1);
            }
        }
        if let Some(v) = find_single_query_transposer(&s) {
            for t in s.terms() {
                assert_eq!(v.commutes(t).unwrap(), t.y_parity() == 0);
            }
        }
    }
}

#[test]
fn even_y_oracle_matches_conjugator_feasibility() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.random_range(1..=3);
        let s = random_support(&mut rng, n, 8);
        let feasible = find_single_query_conjugator(&s).is_some();
        let witness = find_even_y_violation_subset(&s, 24).unwrap();
        assert_eq!(feasible, witness.is_none(), "support {:?}", s.render());
    }
}

#[test]
fn covers_are_total_bounded_and_tight_for_single_query() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..300 {
        let n = rng.random_range(1..=4);
        let s = random_support(&mut rng, n, 10);
        let cover = find_anticommute_cover(&s);
        assert!(cover.elements.len() <= s.len());
        assert_eq!(cover.covered_by.len(), s.len());
        for (i, term) in s.terms().iter().enumerate() {
            let v = &cover.elements[cover.covered_by[i]];
            assert!(!v.commutes(term).unwrap(), "term {i} not anti-commuted");
        }
        let single = find_single_query_inverter(&s).is_some();
        assert_eq!(cover.elements.len() == 1, single);
    }
}

#[test]
fn split_certificates_replay_their_invariants() {
    let mut rng = StdRng::seed_from_u64(17);
    let mut found = 0;
    for _ in 0..250 {
        let n = rng.random_range(2..=4);
        let s = random_support(&mut rng, n, 8);
        if find_single_query_inverter(&s).is_some() || check_pairwise_commuting(&s) {
            continue;
        }
        let Ok(Some(cert)) = find_split_certificate(&s, 20) else {
            continue;
        };
        found += 1;
        let terms = s.terms();
        for (k, &i) in cert.s0_indices.iter().enumerate() {
            for &j in &cert.s0_indices[k + 1..] {
                assert!(terms[i].commutes(&terms[j]).unwrap());
            }
            for &j in &cert.s1_indices {
                assert!(terms[i].commutes(&terms[j]).unwrap());
            }
            assert!(cert.v0.commutes(&terms[i]).unwrap());
        }
        for &j in &cert.s1_indices {
            assert!(!cert.v0.commutes(&terms[j]).unwrap());
        }
        for (pos, &el) in cert.w.covered_by.iter().enumerate() {
            assert!(!cert.w.elements[el].commutes(&terms[cert.s0_indices[pos]]).unwrap());
        }
    }
    assert!(found > 0, "search never produced a certificate to check");
}

#[test]
fn commuting_cover_programs_pass_the_sign_replay() {
    let mut rng = StdRng::seed_from_u64(19);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.random_range(1..=4);
        let s = random_support(&mut rng, n, 6);
        if !check_pairwise_commuting(&s) {
            continue;
        }
        checked += 1;
        let cover = find_anticommute_cover(&s);
        let prog = synth_commuting_inverse(&cover).unwrap();
        assert_eq!(prog.query_count(), (1 << cover.elements.len()) - 1);
        let signs = target_signs(&s, Task::Invert);
        assert!(verify_commuting_plan(&s, &prog, &signs).unwrap());
    }
}

#[test]
fn sign_replay_and_simulator_agree_on_random_programs() {
    // Dual route: for commuting supports the combinatorial sign check and
    // the dense simulator must reach the same verdict, on valid and invalid
    // programs alike.
    let mut rng = StdRng::seed_from_u64(29);
    let mut verdicts = [0usize; 2];
    let mut checked = 0;
    while checked < 80 {
        let n = rng.random_range(1..=3);
        let s = random_support(&mut rng, n, 5);
        if !check_pairwise_commuting(&s) {
            continue;
        }
        checked += 1;
        let program = if rng.random_bool(0.5) {
            synth_commuting_inverse(&find_anticommute_cover(&s)).unwrap()
        } else {
            // A random alternating program, usually wrong.
            let mut prog = CircuitProgram::new(Task::Invert, n);
            for _ in 0..rng.random_range(1..=4) {
                let mask = (1u64 << n) - 1;
                let frame = PauliOperator::from_bits(
                    n,
                    rng.random::<u64>() & mask,
                    rng.random::<u64>() & mask,
                    0,
                )
                .unwrap();
                prog.push_frame(frame);
                prog.push_query();
            }
            prog
        };
        if program.query_count() == 0 {
            continue;
        }
        let signs = target_signs(&s, Task::Invert);
        let replay_ok = verify_commuting_plan(&s, &program, &signs).unwrap();
        let report =
            certify_program(&s, &program, Task::Invert, 4, 31, 1e-9, 8).unwrap();
        assert_eq!(
            replay_ok, report.pass,
            "routes disagree on\n{}\nprogram:\n{}",
            s.render(),
            program.render()
        );
        verdicts[usize::from(replay_ok)] += 1;
    }
    assert!(verdicts[0] > 0 && verdicts[1] > 0, "need both verdicts exercised: {verdicts:?}");
}

#[test]
fn invalid_split_certificates_are_rejected() {
    let s = PauliSupport::from_token_lines(
        7,
        &[
            "Z0 Z1", "Z1 Z2", "Z2 Z3", "Z3 Z4", "Z4 Z5", "Z5 Z6", "Z6 Z0", "X1", "X2", "X3",
            "X4", "X5",
        ],
    )
    .unwrap();
    let good = find_split_certificate(&s, 20).unwrap().unwrap();

    // Not a partition.
    let mut bad = good.clone();
    bad.s1_indices.pop();
    assert!(synth_split_inverse(&s, &bad).is_err());

    // Empty S1 is the degenerate single-query case, rejected here.
    let mut bad = good.clone();
    bad.s0_indices.append(&mut bad.s1_indices);
    assert!(synth_split_inverse(&s, &bad).is_err());

    // V0 violating the commutation pattern.
    let mut bad = good.clone();
    bad.v0 = PauliOperator::identity(7);
    assert!(synth_split_inverse(&s, &bad).is_err());

    // Cover element that fails to anti-commute with its term.
    let mut bad = good;
    bad.w.elements = vec![PauliOperator::identity(7)];
    bad.w.covered_by = vec![0; bad.s0_indices.len()];
    assert!(synth_split_inverse(&s, &bad).is_err());
}

#[test]
fn frame_merging_preserves_the_simulated_channel() {
    // Apply a redundant frame pair step-by-step with dense matrices and
    // compare against the merged program's application.
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..25 {
        let n = rng.random_range(1..=3);
        let s = random_support(&mut rng, n, 4);
        let coeffs: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let inst = HamiltonianInstance::new(s.clone(), coeffs).unwrap();
        let u = evolution(&build_hamiltonian(&inst, 8).unwrap());

        let f1 = random_support(&mut rng, n, 1).terms()[0];
        let f2 = random_support(&mut rng, n, 1).terms()[0];
        // Merged: push both frames through the builder.
        let mut merged = CircuitProgram::new(Task::Invert, n);
        merged.push_frame(f1);
        merged.push_frame(f2);
        merged.push_query();
        merged.push_frame(f2);
        merged.push_frame(f1);
        let dim = 1usize << n;
        let applied_merged = if merged.steps().is_empty() {
            CMatrix::identity(dim)
        } else {
            apply_program(&merged, &u).unwrap()
        };
        // Unmerged: explicit dense product f1 f2 U f2 f1.
        let d1 = f1.dense_matrix(8).unwrap();
        let d2 = f2.dense_matrix(8).unwrap();
        let unmerged = d1
            .matmul(&d2)
            .unwrap()
            .matmul(&u)
            .unwrap()
            .matmul(&d2)
            .unwrap()
            .matmul(&d1)
            .unwrap();
        let f = phase_invariant_fidelity(&unmerged, &applied_merged).unwrap();
        assert!((f - 1.0).abs() < 1e-12, "merging changed the channel: {f}");
    }
}

proptest! {
    #[test]
    fn symplectic_round_trip(n in 1usize..=8, code in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let op = PauliOperator::from_bits(n, code & mask, (code >> 32) & mask, 0).unwrap();
        let back = PauliOperator::from_symplectic(&op.to_symplectic());
        prop_assert_eq!(back, op);
    }

    #[test]
    fn parse_render_round_trip(n in 1usize..=6, code in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let op = PauliOperator::from_bits(n, code & mask, (code >> 32) & mask, 0).unwrap();
        let parsed = PauliOperator::parse(&op.word_string(), n).unwrap();
        prop_assert_eq!(parsed, op);
    }

    #[test]
    fn program_file_round_trip(seed in any::<u64>(), n in 1usize..=4, steps in 1usize..=12) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut prog = CircuitProgram::new(Task::Invert, n);
        for _ in 0..steps {
            if rng.random_bool(0.5) {
                prog.push_query();
            } else {
                let mask = (1u64 << n) - 1;
                let op = PauliOperator::from_bits(
                    n,
                    rng.random::<u64>() & mask,
                    rng.random::<u64>() & mask,
                    0,
                )
                .unwrap();
                prog.push_frame(op);
            }
        }
        let parsed = CircuitProgram::parse_str(&prog.render()).unwrap();
        prop_assert_eq!(parsed, prog);
    }

    #[test]
    fn fidelity_is_symmetric_and_phase_invariant(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.random_range(1..=2usize);
        let s = random_support(&mut rng, n, 4);
        let coeffs: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let inst = HamiltonianInstance::new(s.clone(), coeffs).unwrap();
        let u = evolution(&build_hamiltonian(&inst, 8).unwrap());
        let coeffs2: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let inst2 = HamiltonianInstance::new(s, coeffs2).unwrap();
        let w = evolution(&build_hamiltonian(&inst2, 8).unwrap());
        let f_uw = phase_invariant_fidelity(&u, &w).unwrap();
        let f_wu = phase_invariant_fidelity(&w, &u).unwrap();
        prop_assert!((f_uw - f_wu).abs() < 1e-12);
        let mut phased = w.clone();
        phased.scale(Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
        let f_phased = phase_invariant_fidelity(&u, &phased).unwrap();
        prop_assert!((f_uw - f_phased).abs() < 1e-12);
    }

    #[test]
    fn evolution_is_unitary(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.random_range(1..=3usize);
        let s = random_support(&mut rng, n, 6);
        let coeffs: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-3.0..3.0)).collect();
        let inst = HamiltonianInstance::new(s, coeffs).unwrap();
        let u = evolution(&build_hamiltonian(&inst, 8).unwrap());
        prop_assert!(u.unitarity_residual() < 1e-10);
    }
}
