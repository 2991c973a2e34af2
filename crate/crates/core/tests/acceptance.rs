//! Acceptance gate: one test per criterion, each printing a pass line and
//! its measured runtime. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{all_posets, random_poset};

use approxform::algebra::{verify_axioms, AxiomSystem, ConnectiveSet, Violation};
use approxform::boolinf::{inf_eval, inf_synthesize, minimal_inf_length, TruthTable};
use approxform::decompose::{decompose, decompose_dual, decompose_with_trace, theta_decompose};
use approxform::lefebvre;
use approxform::map::EvalMap;
use approxform::poset::Poset;

const TOL: f64 = 1e-12;

fn pass(n: usize, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "criterion {n} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
    println!("acceptance {n} ({name}): PASS in {elapsed:?}");
}

fn three_chain() -> Arc<Poset> {
    Poset::build(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
}

fn map_on(dom: &Arc<Poset>, alg: &ConnectiveSet, vals: &[usize]) -> EvalMap {
    EvalMap::from_values(dom.clone(), alg.codomain().clone(), vals.to_vec()).unwrap()
}

fn sweep_exact(dom: &Arc<Poset>, alg: &ConnectiveSet) {
    let n = dom.len();
    let m = alg.codomain().len();
    let total = m.pow(n as u32);
    let d = dom.max_chain_length();
    for code in 0..total {
        let mut vals = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            vals.push(c % m);
            c /= m;
        }
        let psi = map_on(dom, alg, &vals);
        let chain = decompose(&psi, alg).unwrap();
        assert_eq!(chain.fold(), psi, "fold mismatch on {vals:?}");
        assert!(chain.boxminus_count() <= d);
        for f in chain.factors() {
            assert!(f.is_monotone());
        }
    }
}

#[test]
fn acceptance_1_reconstruction_sweep() {
    let started = Instant::now();
    let two = ConnectiveSet::chain_primal(2).unwrap();
    let three = ConnectiveSet::chain_primal(3).unwrap();

    sweep_exact(&three_chain(), &two); // 8 maps
    sweep_exact(&Poset::boolean_cube(2).unwrap(), &two); // 16 maps
    sweep_exact(&three_chain(), &three); // 81 maps

    let mut rng = ChaCha8Rng::seed_from_u64(20260808);
    for _ in 0..1000 {
        let dom = random_poset(&mut rng, 7);
        let alg = if rng.gen_bool(0.5) { &two } else { &three };
        let vals: Vec<usize> = (0..dom.len())
            .map(|_| rng.gen_range(0..alg.codomain().len()))
            .collect();
        let psi = map_on(&dom, alg, &vals);
        let chain = decompose(&psi, alg).unwrap();
        assert_eq!(chain.fold(), psi);
        assert!(chain.boxminus_count() <= dom.max_chain_length());
    }
    pass(1, "reconstruction sweep", started, Duration::from_secs(5));
}

#[test]
fn acceptance_2_implicative_normal_forms() {
    let started = Instant::now();
    for n in 1..=3usize {
        let rows = 1 << n;
        for code in 0u32..(1 << rows) {
            let bits: Vec<bool> = (0..rows).map(|k| code >> (rows - 1 - k) & 1 == 1).collect();
            let t = TruthTable::new(n, bits).unwrap();
            let chain = inf_synthesize(&t).unwrap();
            assert_eq!(
                inf_eval(&chain),
                t,
                "reconstruction failed for {}",
                t.to_bit_string()
            );
            assert!(
                chain.implications() <= n,
                "{} implications at n={n}",
                chain.implications()
            );
            for f in chain.factors() {
                assert!(
                    f.is_monotone(),
                    "non-monotone factor for {}",
                    t.to_bit_string()
                );
            }
        }
    }
    // exhaustive oracle pins the extreme cases
    let xor = TruthTable::parse("0110").unwrap();
    assert_eq!(minimal_inf_length(&xor).unwrap(), 3);
    let not = TruthTable::parse("10").unwrap();
    assert_eq!(minimal_inf_length(&not).unwrap(), 2);
    pass(
        2,
        "implicative normal forms",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn acceptance_3_axiom_verification() {
    let started = Instant::now();

    let dual = ConnectiveSet::boolean_dual();
    for n in 1..=3 {
        let cube = Poset::boolean_cube(n).unwrap();
        for system in [AxiomSystem::AStar, AxiomSystem::BStar] {
            let report = verify_axioms(&dual, &cube, system).unwrap();
            assert!(report.passed, "boolean dual fails {system} on B^{n}");
        }
    }

    let algebras = [
        ConnectiveSet::chain_primal(2).unwrap(),
        ConnectiveSet::chain_primal(3).unwrap(),
    ];
    let mut poset_count = 0usize;
    for n in 1..=5 {
        for p in all_posets(n) {
            poset_count += 1;
            for cs in &algebras {
                for system in [AxiomSystem::A, AxiomSystem::B] {
                    let report = verify_axioms(cs, &p, system).unwrap();
                    assert!(
                        report.passed,
                        "chain algebra fails {system} on {:?}",
                        p.covers()
                    );
                }
            }
        }
    }
    assert_eq!(poset_count, 1 + 3 + 19 + 219 + 4231);

    // the conjunction/constant-zero algebra breaks the unit identity at l=1
    let cod = Poset::build(&["0", "1"], &[("0", "1")]).unwrap();
    let and_table = vec![vec![0, 0], vec![0, 1]];
    let corrupt = ConnectiveSet::from_tables(
        cod,
        and_table.clone(),
        vec![0, 0],
        approxform::algebra::Aggregator::Max,
        Some(and_table),
        approxform::algebra::Orientation::Primal,
        Some(1),
    )
    .unwrap();
    let report = verify_axioms(&corrupt, &three_chain(), AxiomSystem::A).unwrap();
    assert!(!report.passed);
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v, Violation::UnitIdentity { l } if l == "1")));

    pass(3, "axiom verification", started, Duration::from_secs(30));
}

#[test]
fn acceptance_4_model_reference_values() {
    let started = Instant::now();

    let first =
        lefebvre::EnsembleCharacteristic::new([0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]).unwrap();
    let m = first.marginals();
    assert!((m.x1 - 0.4).abs() <= TOL && (m.x2 - 0.4).abs() <= TOL && (m.x3 - 0.4).abs() <= TOL);
    assert!((m.z - 0.5).abs() <= TOL);
    assert!((m.model_readiness - 0.544).abs() <= TOL);

    let mut p = [0.0; 8];
    p[3] = 0.5;
    p[5] = 0.5;
    let second = lefebvre::EnsembleCharacteristic::new(p)
        .unwrap()
        .marginals();
    assert!((second.x1 - 0.5).abs() <= TOL);
    assert!((second.x2 - 0.5).abs() <= TOL);
    assert!((second.x3 - 1.0).abs() <= TOL);
    assert!((second.z - 0.5).abs() <= TOL);
    assert!((second.model_readiness - 0.75).abs() <= TOL);
    assert!((second.gap() - 0.25).abs() <= TOL);
    assert!(second.gap() / second.model_readiness >= 0.3);

    let root = lefebvre::golden_root();
    assert!((root - 0.618033988749895).abs() <= 1e-9);
    assert!((root * root * root - 2.0 * root + 1.0).abs() <= TOL);

    pass(4, "model reference values", started, Duration::from_secs(5));
}

#[test]
fn acceptance_5_pure_ensemble_identity() {
    let started = Instant::now();
    for i in 0..=10 {
        for j in 0..=10 {
            for k in 0..=10 {
                let (x1, x2, x3) = (i as f64 / 10.0, j as f64 / 10.0, k as f64 / 10.0);
                let m = lefebvre::pure_ensemble(x1, x2, x3).unwrap().marginals();
                assert!(
                    (m.z - m.model_readiness).abs() <= TOL,
                    "identity gap {} at ({x1},{x2},{x3})",
                    m.gap()
                );
            }
        }
    }
    pass(5, "pure ensemble identity", started, Duration::from_secs(5));
}

#[test]
fn acceptance_6_golden_section_realist_ensemble() {
    let started = Instant::now();
    let root = lefebvre::golden_root();
    let characteristic = lefebvre::realist_characteristic(root).unwrap();

    for k in characteristic.support() {
        assert!(
            lefebvre::is_realist_index(k),
            "non-realist support index {k}"
        );
    }
    let m = characteristic.marginals();
    assert!((m.x1 - (1.0 - root)).abs() <= TOL);
    assert!((m.x2 - (1.0 - root)).abs() <= TOL);
    assert!((m.x3 - root).abs() <= TOL);

    let summary = lefebvre::sample_ensemble(&characteristic, 100_000, 22);
    for k in 0..8 {
        if summary.counts[k] > 0 {
            assert!(
                lefebvre::is_realist_index(k),
                "sampled a non-realist triple {k}"
            );
        }
    }
    let z_n3 = summary.bit_fraction(3);
    let se = summary.bit_stderr(3);
    assert!(
        (z_n3 - 0.618034).abs() <= 3.0 * se,
        "intention fraction {z_n3} strayed beyond 3 sigma ({se})"
    );
    pass(
        6,
        "golden-section realist ensemble",
        started,
        Duration::from_secs(2),
    );
}

#[test]
fn acceptance_7_choice_algorithm_equivalence() {
    let started = Instant::now();
    let algebra = ConnectiveSet::chain_primal(2).unwrap();
    for k in 0..8usize {
        let b = |s: usize| k >> s & 1 == 1;
        let (b1, b2, b3) = (b(2), b(1), b(0));

        let trace = lefebvre::choose(b1, b2, b3);
        assert_eq!(trace.output, lefebvre::boolean_readiness(b1, b2, b3));

        let psi = lefebvre::build_psi(b1, b2, b3);
        assert_eq!(psi.values(), [b1 as usize, !b2 as usize, b3 as usize]);

        let thetas = theta_decompose(&psi, &algebra).unwrap();
        assert_eq!(thetas.len(), 3);
        let impulses = [
            lefebvre::theta_impulse(1, b1).unwrap(),
            lefebvre::theta_impulse(2, b2).unwrap(),
            lefebvre::theta_impulse(3, b3).unwrap(),
        ];
        for (theta, impulse) in thetas.iter().zip(&impulses) {
            let impulse_vals: Vec<usize> = impulse.values().iter().map(|&v| v as usize).collect();
            assert_eq!(
                theta.map().values(),
                impulse_vals,
                "rank {} factor differs from the impulse on bits {b1}{b2}{b3}",
                theta.rank()
            );
        }
    }
    pass(
        7,
        "choice algorithm equivalence",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn acceptance_8_property_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8151823);
    let two = ConnectiveSet::chain_primal(2).unwrap();
    let three = ConnectiveSet::chain_primal(3).unwrap();

    // padding preserves the fold and reaches exactly D + 1 factors;
    // the shrinkage trace is strictly decreasing on every decomposition
    for _ in 0..200 {
        let dom = random_poset(&mut rng, 6);
        let alg = if rng.gen_bool(0.5) { &two } else { &three };
        let vals: Vec<usize> = (0..dom.len())
            .map(|_| rng.gen_range(0..alg.codomain().len()))
            .collect();
        let psi = map_on(&dom, alg, &vals);
        let (chain, trace) = decompose_with_trace(&psi, alg).unwrap();
        assert!(
            trace.bad_set_sizes.windows(2).all(|w| w[0] > w[1]),
            "trace not strictly decreasing: {:?}",
            trace.bad_set_sizes
        );
        let d = dom.max_chain_length();
        let padded = chain.pad_to(d + 1).unwrap();
        assert_eq!(padded.factors().len(), d + 1);
        assert_eq!(padded.fold(), psi);
    }

    // duality metamorphic check: a random algebra passes a system exactly
    // when its mirror passes the starred system over the dual posets
    for round in 0..200 {
        let m = rng.gen_range(2..=4usize);
        let chain_names: Vec<String> = (0..m).map(|i| i.to_string()).collect();
        let chain_covers: Vec<(String, String)> = (0..m - 1)
            .map(|i| (chain_names[i].clone(), chain_names[i + 1].clone()))
            .collect();
        let cod = Poset::build(&chain_names, &chain_covers).unwrap();
        let boxminus: Vec<Vec<usize>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(0..m)).collect())
            .collect();
        let circ: Vec<usize> = (0..m).map(|_| rng.gen_range(0..m)).collect();
        let uplus: Vec<Vec<usize>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(0..m)).collect())
            .collect();
        let cs = ConnectiveSet::from_tables(
            cod,
            boxminus,
            circ,
            approxform::algebra::Aggregator::Max,
            Some(uplus),
            approxform::algebra::Orientation::Primal,
            None,
        )
        .unwrap();
        let p = random_poset(&mut rng, 5);
        for (sys, starred) in [
            (AxiomSystem::A, AxiomSystem::AStar),
            (AxiomSystem::B, AxiomSystem::BStar),
        ] {
            let direct = verify_axioms(&cs, &p, sys).unwrap();
            let mirrored = verify_axioms(&cs.mirror(), &p.order_dual(), starred).unwrap();
            assert_eq!(direct.passed, mirrored.passed, "round {round} {sys}");
            assert_eq!(
                direct.total_violations, mirrored.total_violations,
                "round {round} {sys}"
            );
        }
    }

    // the dual engine agrees with the primal one on mirrored instances
    for _ in 0..200 {
        let dom = random_poset(&mut rng, 6);
        let dual_alg = ConnectiveSet::boolean_dual();
        let vals: Vec<usize> = (0..dom.len()).map(|_| rng.gen_range(0..2)).collect();
        let psi = map_on(&dom, &dual_alg, &vals);
        let chain = decompose_dual(&psi, &dual_alg).unwrap();
        assert_eq!(chain.fold(), psi);
        assert!(chain.boxminus_count() <= dom.max_chain_length());

        let mirrored_psi = EvalMap::from_values(
            dom.order_dual(),
            dual_alg.mirror().codomain().clone(),
            vals.clone(),
        )
        .unwrap();
        let primal_chain = decompose(&mirrored_psi, &dual_alg.mirror()).unwrap();
        let dual_values: Vec<&[usize]> = chain.factors().iter().map(|f| f.values()).collect();
        let primal_values: Vec<&[usize]> =
            primal_chain.factors().iter().map(|f| f.values()).collect();
        assert_eq!(dual_values, primal_values);
    }

    // axiom reports for the readiness function and its broken variant
    let good = lefebvre::verify_l_axioms(&|a, b, c| lefebvre::readiness(a, b, c).unwrap());
    assert!(good.passed());
    let bad = lefebvre::verify_l_axioms(&|a, b, c| lefebvre::readiness_variant(a, b, c).unwrap());
    assert!(bad.credulity.is_some());

    pass(8, "property suite", started, Duration::from_secs(30));
}
