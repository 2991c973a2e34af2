//! Randomized and small-exhaustive invariants over posets, maps, the
//! decomposition engine, and the implicative-form oracle.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use approxform::algebra::{verify_axioms, AxiomSystem, ConnectiveSet};
use approxform::boolinf::{enumerate_monotone, inf_synthesize, minimal_inf_length, TruthTable};
use approxform::decompose::{decompose, support, theta_chain, theta_decompose};
use approxform::map::EvalMap;
use approxform::poset::Poset;

mod common;
use common::{all_posets, all_value_vectors, random_poset};

/// Strategy: a random poset on up to `max_n` named elements, built by
/// closing a random edge set that only points from lower to higher index.
fn posets(max_n: usize) -> impl Strategy<Value = Arc<Poset>> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pair_count = n * (n - 1) / 2;
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), pair_count),
            )
        })
        .prop_map(|(n, edges)| {
            let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let mut covers = Vec::new();
            let mut e = edges.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    if e.next().unwrap() {
                        covers.push((names[i].clone(), names[j].clone()));
                    }
                }
            }
            Poset::build(&names, &covers).unwrap()
        })
}

/// Strategy: a poset together with a map into the chain `0 < 1 < ... < m-1`.
fn instances(
    max_n: usize,
    m: usize,
) -> impl Strategy<Value = (Arc<Poset>, ConnectiveSet, EvalMap)> {
    posets(max_n).prop_flat_map(move |p| {
        let n = p.len();
        (Just(p), proptest::collection::vec(0..m, n)).prop_map(move |(p, vals)| {
            let alg = ConnectiveSet::chain_primal(m).unwrap();
            let psi = EvalMap::from_values(p.clone(), alg.codomain().clone(), vals).unwrap();
            (p, alg, psi)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn down_sets_are_downward_closed(p in posets(7)) {
        for x in 0..p.len() {
            let down = p.down_set_idx(x);
            for &y in &down {
                for z in 0..p.len() {
                    if p.leq_idx(z, y) {
                        prop_assert!(down.contains(&z));
                    }
                }
            }
            let up = p.up_set_idx(x);
            for &y in &up {
                for z in 0..p.len() {
                    if p.leq_idx(y, z) {
                        prop_assert!(up.contains(&z));
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_selection_witnesses_the_axiom(p in posets(7), mask in any::<u64>()) {
        let subset: Vec<usize> = (0..p.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let minimal = p.minimal_of_idx(&subset);
        for &a in &minimal {
            for &b in &minimal {
                prop_assert!(!p.lt_idx(a, b), "not an antichain");
            }
        }
        for &s in &subset {
            prop_assert!(minimal.iter().any(|&m| p.leq_idx(m, s)), "no lower bound for {s}");
        }
    }

    #[test]
    fn rank_partition_is_a_ranked_antichain_cover(p in posets(7)) {
        let blocks = p.rank_partition_idx();
        let mut owner = vec![usize::MAX; p.len()];
        for (i, block) in blocks.iter().enumerate() {
            for &x in block {
                prop_assert_eq!(owner[x], usize::MAX, "blocks overlap");
                owner[x] = i;
                for &y in block {
                    prop_assert!(!p.lt_idx(x, y));
                }
            }
        }
        prop_assert!(owner.iter().all(|&o| o != usize::MAX), "blocks miss the carrier");
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.lt_idx(x, y) {
                    prop_assert!(owner[x] < owner[y], "strict predecessor not in an earlier block");
                }
            }
        }
        prop_assert_eq!(blocks.len(), p.max_chain_length() + 1);
    }

    #[test]
    fn dual_preserves_chain_length_and_involutes(p in posets(7)) {
        let d = p.order_dual();
        prop_assert_eq!(d.max_chain_length(), p.max_chain_length());
        prop_assert_eq!((*d.order_dual()).clone(), (*p).clone());
    }

    #[test]
    fn monotonicity_report_matches_quantifier(
        (p, _alg, psi) in instances(6, 2)
    ) {
        let report = psi.non_monotonicity();
        let quantified = (0..p.len()).all(|i| (0..p.len()).all(|j| {
            !p.leq_idx(i, j) || psi.value_idx(i) <= psi.value_idx(j)
        }));
        prop_assert_eq!(report.is_empty(), quantified);
        prop_assert_eq!(report.is_empty(), psi.is_monotone());
    }

    #[test]
    fn decomposition_reconstructs_and_respects_the_bound(
        (p, alg, psi) in instances(7, 3)
    ) {
        let chain = decompose(&psi, &alg).unwrap();
        prop_assert_eq!(chain.fold(), psi);
        prop_assert!(chain.boxminus_count() <= p.max_chain_length());
        for f in chain.factors() {
            prop_assert!(f.is_monotone());
        }
    }

    #[test]
    fn theta_factors_have_rank_shapes_and_fold_back(
        (p, alg, psi) in instances(6, 3)
    ) {
        let thetas = theta_decompose(&psi, &alg).unwrap();
        let blocks = p.rank_partition_idx();
        prop_assert_eq!(thetas.len(), blocks.len());
        let ranks = p.ranks();
        let floor = 0usize;
        let gamma = alg.greatest().unwrap();
        for t in &thetas {
            prop_assert!(t.map().is_monotone());
            for (x, &rank) in ranks.iter().enumerate() {
                if rank < t.rank() {
                    prop_assert_eq!(t.map().value_idx(x), floor);
                }
                if rank > t.rank() {
                    prop_assert_eq!(t.map().value_idx(x), gamma);
                }
            }
        }
        prop_assert_eq!(theta_chain(&thetas, &alg).unwrap().fold(), psi);
    }

    #[test]
    fn support_is_the_strict_preimage_above_floor(
        (_p, alg, psi) in instances(6, 3)
    ) {
        let s = support(&psi, &alg).unwrap();
        for (i, name) in psi.domain().elements().iter().enumerate() {
            prop_assert_eq!(s.contains(name), psi.value_idx(i) > 0);
        }
    }
}

/// Exhaustive reconstruction at small scale: every map from every labeled
/// poset on up to four elements into the two- and three-chains folds back
/// exactly, within the chain-length bound, through monotone factors.
#[test]
fn exhaustive_small_reconstruction() {
    let algebras = [
        ConnectiveSet::chain_primal(2).unwrap(),
        ConnectiveSet::chain_primal(3).unwrap(),
    ];
    for n in 1..=4 {
        for p in all_posets(n) {
            let d = p.max_chain_length();
            for alg in &algebras {
                for vals in all_value_vectors(n, alg.codomain().len()) {
                    let psi =
                        EvalMap::from_values(p.clone(), alg.codomain().clone(), vals).unwrap();
                    let chain = decompose(&psi, alg).unwrap();
                    assert_eq!(chain.fold(), psi);
                    assert!(chain.boxminus_count() <= d);
                    for f in chain.factors() {
                        assert!(f.is_monotone());
                    }
                }
            }
        }
    }
}

/// The chain algebras satisfy both primal systems on random carriers up to
/// eight elements (the codomain axioms are carrier-independent; the
/// selection axiom holds on every finite carrier).
#[test]
fn chain_algebras_pass_on_carriers_up_to_eight() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let algebras = [
        ConnectiveSet::chain_primal(2).unwrap(),
        ConnectiveSet::chain_primal(3).unwrap(),
    ];
    for _ in 0..60 {
        let p = random_poset(&mut rng, 8);
        for cs in &algebras {
            for system in [AxiomSystem::A, AxiomSystem::B] {
                let report = verify_axioms(cs, &p, system).unwrap();
                assert!(report.passed, "{system} failed on {:?}", p.covers());
            }
        }
    }
}

/// Left-nested chains over monotone factors reach every boolean function of
/// arity two and three within arity-plus-one factors, and the exhaustive
/// oracle never reports a longer minimum than the synthesized chain.
#[test]
fn monotone_chains_are_complete_and_synthesis_is_never_beaten() {
    for n in 2..=3usize {
        let rows = 1usize << n;
        let monotone = enumerate_monotone(n).unwrap();
        // breadth-first closure of the left-fold implication step
        let encode = |bits: &[bool]| -> u32 {
            bits.iter()
                .enumerate()
                .fold(0, |acc, (k, &b)| acc | (u32::from(b) << k))
        };
        let mut min_factors = vec![usize::MAX; 1 << rows];
        let mut frontier: Vec<Vec<bool>> = Vec::new();
        for t in &monotone {
            min_factors[encode(t.bits()) as usize] = 1;
            frontier.push(t.bits().to_vec());
        }
        for level in 2..=(n + 1) {
            let mut next = Vec::new();
            for acc in &frontier {
                for f in &monotone {
                    let stepped: Vec<bool> = (0..rows).map(|k| !acc[k] || f.bits()[k]).collect();
                    let code = encode(&stepped) as usize;
                    if min_factors[code] == usize::MAX {
                        min_factors[code] = level;
                        next.push(stepped);
                    }
                }
            }
            frontier = next;
        }
        assert!(
            min_factors.iter().all(|&m| m <= n + 1),
            "closure fails at arity {n}"
        );

        for code in 0..(1u32 << rows) {
            let bits: Vec<bool> = (0..rows).map(|k| code >> k & 1 == 1).collect();
            let t = TruthTable::new(n, bits).unwrap();
            let synthesized = inf_synthesize(&t).unwrap().factors().len();
            assert!(min_factors[code as usize] <= synthesized);
            let oracle = minimal_inf_length(&t).unwrap();
            assert_eq!(
                oracle,
                min_factors[code as usize],
                "oracle and closure disagree on {}",
                t.to_bit_string()
            );
            assert!(
                oracle <= synthesized,
                "oracle beats synthesis on {}",
                t.to_bit_string()
            );
        }
    }
}
