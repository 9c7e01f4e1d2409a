//! Acceptance gate: one test per criterion, named so the test runner output
//! reads as a checklist. Every tolerance is pinned here, not shared with the
//! code under test.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qnormlab::basis::{build_lsh_basis, verify_lsh_certificates, BasisParams};
use qnormlab::experiment::{run_main_theorem_demo, ExperimentConfig, VERDICT_EVIDENCE};
use qnormlab::holder::{reverse_holder_sides, verify_bracket_bound, HolderInstance};
use qnormlab::space::{
    brute_force_dual_norm, dual_norm_over, lp_fnorm, pairing, BoundedBall, DualFunctional,
    LpSpaceModel, SparseVector, SubspaceChain,
};
use qnormlab::topology::{
    delta_for_eps, norm_e, np_norm, np_norm_dp, np_norm_enumeration, np_norm_for_tuple,
    separation_witness, witness_sequence, ExponentFunction, IndexTuple, NeighborhoodSpec,
};
use qnormlab::Tolerance;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn default_basis(m: usize) -> qnormlab::basis::LshBasis {
    let model = LpSpaceModel::new(0.5).unwrap();
    let ball = BoundedBall::new(1.0).unwrap();
    let params = BasisParams::defaults(&model);
    build_lsh_basis(&model, &ball, &SubspaceChain::Standard, &params, m, tol()).unwrap()
}

fn random_span_vector(
    rng: &mut ChaCha8Rng,
    max_index: u32,
    max_nnz: usize,
    bound: f64,
) -> SparseVector {
    let nnz = rng.random_range(1..=max_nnz);
    let mut entries: Vec<(u32, f64)> = Vec::new();
    while entries.len() < nnz {
        let i = rng.random_range(1..=max_index);
        if entries.iter().any(|&(j, _)| j == i) {
            continue;
        }
        let mut v = 0.0f64;
        while v.abs() < 1e-3 {
            v = rng.random_range(-bound..bound);
        }
        entries.push((i, v));
    }
    SparseVector::from_entries(entries).unwrap()
}

#[test]
fn acceptance_1_basis_matrix_certifies_under_5s() {
    let started = Instant::now();
    for &p in &[0.3, 0.5, 0.7] {
        for &c in &[1.0, 2.0] {
            let model = LpSpaceModel::new(p).unwrap();
            let ball = BoundedBall::new(c).unwrap();
            let params = BasisParams::defaults(&model);
            let basis =
                build_lsh_basis(&model, &ball, &SubspaceChain::Standard, &params, 32, tol())
                    .unwrap_or_else(|e| panic!("build failed for p={p}, c={c}: {e}"));
            assert_eq!(basis.len(), 32);
            let report = verify_lsh_certificates(&basis, tol());
            assert!(
                report.passed(),
                "certificates rejected for p={p}, c={c}: {:?}",
                report.failed_axioms()
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "matrix took {elapsed:?}");
    println!("acceptance 1 PASS: 6 bases of length 32 certified in {elapsed:?}");
}

#[test]
fn acceptance_2_dual_norm_agrees_with_sampling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    let ps = [0.3, 0.5, 0.7];
    let radii = [0.5, 1.0, 2.0];
    for trial in 0..100u64 {
        let model = LpSpaceModel::new(ps[trial as usize % 3]).unwrap();
        let ball = BoundedBall::new(radii[(trial as usize / 3) % 3]).unwrap();
        let nnz = rng.random_range(1..=5usize);
        let mut entries = Vec::new();
        while entries.len() < nnz {
            let i = rng.random_range(1..=12u32);
            if entries.iter().any(|&(j, _)| j == i) {
                continue;
            }
            let mut v = 0.0f64;
            while v == 0.0 {
                v = rng.random_range(-5.0..5.0);
            }
            entries.push((i, v));
        }
        let f = DualFunctional::from_entries(entries).unwrap();

        let exact = dual_norm_over(&f, &ball, &model);
        let sampled = brute_force_dual_norm(&f, &ball, &model, 10_000, 0x0bac1e ^ trial);
        assert!(
            sampled <= exact.value * (1.0 + 1e-9) + 1e-300,
            "oracle exceeded the closed form: {sampled} > {}",
            exact.value
        );
        assert!(
            (exact.value - sampled).abs() <= 1e-6 * exact.value.max(1.0),
            "oracle missed the closed form: {sampled} vs {}",
            exact.value
        );
        let attained = pairing(&f, &exact.witness).abs();
        assert!(
            (attained - exact.value).abs() <= 1e-12 * exact.value.max(1.0),
            "witness does not attain the value: {attained} vs {}",
            exact.value
        );
    }
    println!("acceptance 2 PASS: 100 functionals, oracle within 1e-6, witnesses within 1e-12");
}

#[test]
fn acceptance_3_np_norm_routes_bit_equal_and_dominate_tuples() {
    let basis = default_basis(12);
    let mut rng = ChaCha8Rng::seed_from_u64(0x39);
    let vectors: Vec<SparseVector> = (0..50)
        .map(|_| random_span_vector(&mut rng, 10, 6, 3.0))
        .collect();
    for z in &vectors {
        for n in 1..=4u32 {
            let exps =
                ExponentFunction::constant(rng.random_range(0.05..0.95), n as usize).unwrap();
            let by_enum = np_norm_enumeration(&basis, z, n, &exps, tol()).unwrap();
            let by_dp = np_norm_dp(&basis, z, n, &exps, tol()).unwrap();
            assert!(
                by_enum == by_dp,
                "routes differ on {z:?} with n={n}: {by_enum} vs {by_dp}"
            );
        }
    }
    let a3 = ExponentFunction::constant(0.5, 3).unwrap();
    for z in vectors.iter().take(20) {
        let sup = np_norm(&basis, z, 3, &a3, tol()).unwrap();
        for _ in 0..1000 {
            let t = IndexTuple::random(&mut rng, 3, 16);
            let v = np_norm_for_tuple(&basis, z, &t, &a3, tol()).unwrap();
            assert!(v <= sup, "tuple {t:?} beats the supremum on {z:?}");
        }
    }
    println!("acceptance 3 PASS: 200 route comparisons bit-equal, 20000 sampled tuples dominated");
}

#[test]
fn acceptance_4_reverse_hoelder_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x401de7);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=6usize);
        let extra = rng.random_range(0..=3usize);
        let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..10.0)).collect();
        let t: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..10.0)).collect();
        let a: Vec<f64> = (0..n + extra)
            .map(|_| rng.random_range(0.01..10.0))
            .collect();
        let p1 = rng.random_range(0.05..0.99);
        let p2 = rng.random_range(0.01..=1.0) * p1;
        let inst = HolderInstance::new(lambda, t, a, p1, p2).unwrap();
        let (lhs, rhs) = reverse_holder_sides(&inst);
        assert!(
            tol().le(lhs, rhs),
            "violated: lhs={lhs} rhs={rhs} inst={inst:?}"
        );
    }
    let unit = HolderInstance::new(vec![1.0], vec![1.0], vec![1.0], 0.5, 0.5).unwrap();
    let (lhs, rhs) = reverse_holder_sides(&unit);
    assert!(
        (lhs - rhs).abs() <= 1e-12,
        "unit instance not tight: {lhs} vs {rhs}"
    );
    println!("acceptance 4 PASS: 10000 instances hold, unit instance tight to 1e-12");
}

#[test]
fn acceptance_5_bracket_bound_on_random_span_vectors() {
    let cases = [(0.5, 1.0), (0.3, 2.0), (0.7, 1.5)];
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0);
    for &(p, c) in &cases {
        let model = LpSpaceModel::new(p).unwrap();
        let ball = BoundedBall::new(c).unwrap();
        let params = BasisParams::defaults(&model);
        let basis =
            build_lsh_basis(&model, &ball, &SubspaceChain::Standard, &params, 10, tol()).unwrap();
        for _ in 0..500 {
            let x = random_span_vector(&mut rng, 10, 8, 4.0);
            let b = verify_bracket_bound(&basis, &x, tol()).unwrap();
            assert!(b.passed, "bound violated for p={p}, c={c} at {x:?}: {b:?}");
        }
    }
    println!("acceptance 5 PASS: 1500 span vectors satisfy the summability bound");
}

#[test]
fn acceptance_6_witness_scan_matches_closed_forms() {
    let basis = default_basis(12);
    let ball = basis.ball;
    let mut specs = Vec::new();
    for n in 1..=4u32 {
        for &u in &[0.0, 1e-3] {
            specs.push(
                NeighborhoodSpec::new(n, ExponentFunction::constant(0.5, n as usize).unwrap(), u)
                    .unwrap(),
            );
        }
    }
    let report = witness_sequence(&basis, &ball, &specs, 12, tol()).unwrap();
    for row in &report.rows {
        assert_eq!(
            row.fnorm_p, 1.0,
            "boundary normalization must be exact at k={}",
            row.k
        );
        let expect = (-(row.k as f64)).exp2();
        assert!(
            (row.norm_e - expect).abs() <= 1e-12 * expect,
            "norm_E off at k={}: {} vs {expect}",
            row.k,
            row.norm_e
        );
    }
    for s in &report.specs {
        assert!(s.k0.is_some(), "no stabilization for spec {:?}", s.spec);
    }
    assert_eq!(
        report.specs[0].k0,
        Some(2),
        "k0 of the first spec (n=1, u=0)"
    );
    println!(
        "acceptance 6 PASS: fnorm exact, norm_E within 1e-12 of 2^-k, all k0 finite, k0(n=1)=2"
    );
}

#[test]
fn acceptance_7_separation_witnesses_exist() {
    let basis = default_basis(12);
    assert_eq!(
        separation_witness(&basis, &SparseVector::unit(1), 0.5, 64, tol()).unwrap(),
        1
    );
    assert_eq!(
        separation_witness(&basis, &SparseVector::unit(2), 0.5, 64, tol()).unwrap(),
        2
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e9);
    for _ in 0..100 {
        let x = random_span_vector(&mut rng, 12, 6, 3.0);
        let m = separation_witness(&basis, &x, 0.5, 64, tol())
            .unwrap_or_else(|e| panic!("no witness for {x:?}: {e}"));
        assert!((1..=64).contains(&m));
    }
    println!("acceptance 7 PASS: witness 1 and 2 for the first coordinates, all 100 random vectors separated");
}

#[test]
fn acceptance_8_delta_certificate_is_sound() {
    let basis = default_basis(12);
    let model = basis.model;
    let mut rng = ChaCha8Rng::seed_from_u64(0xde17a);
    for &eps in &[0.1, 0.01] {
        let delta = delta_for_eps(&basis, eps).unwrap();
        assert!(delta > 0.0);
        for _ in 0..500 {
            // any z with ‖z‖_p < δ < 1 splits into K-members, so it lies in K−K
            let dir = random_span_vector(&mut rng, 12, 6, 2.0);
            let f = lp_fnorm(&dir, &model);
            let target = delta * rng.random_range(0.0..1.0);
            let z = dir.scale((target / f).powf(1.0 / model.p));
            assert!(lp_fnorm(&z, &model) < delta);
            let ne = norm_e(&basis, &z, None, tol()).unwrap();
            assert!(
                ne < eps,
                "certificate broken: ‖z‖_p={} < {delta} but ‖z‖_E={ne} ≥ {eps}",
                lp_fnorm(&z, &model)
            );
        }
    }
    println!("acceptance 8 PASS: 1000 vectors below delta stay below eps in the induced norm");
}

#[test]
fn acceptance_9_demo_is_deterministic_and_fast() {
    let started = Instant::now();
    let cfg = ExperimentConfig::default_config();
    let first = run_main_theorem_demo(&cfg, tol()).unwrap();
    let second = run_main_theorem_demo(&cfg, tol()).unwrap();
    assert_eq!(first.verdict, VERDICT_EVIDENCE);
    assert_eq!(
        first.to_json(),
        second.to_json(),
        "reports must be byte-identical"
    );
    assert_eq!(first.to_csv(), second.to_csv());
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "demo pair took {elapsed:?}");
    println!(
        "acceptance 9 PASS: two demo runs byte-identical with evidence verdict in {elapsed:?}"
    );
}
