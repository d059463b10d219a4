mod common;

use std::collections::BTreeMap;

use belyi_core::expectation::word_expectation_exact;
use belyi_core::graph::{count_homs, count_injective_homs, pair_graph, word_graph};
use belyi_core::modular::{divisor_count, primitive_root, F2Word};
use belyi_core::outputs::enumerate_outputs;
use belyi_core::perm::{enumerate_samples, BelyiSample};
use belyi_core::surface::{all_oriented_graphs_n1, to_oriented_graph, topology, topology_of_graph};
use proptest::prelude::*;

use common::{all_pairs_n1, fix_by_composition, injective_embeddings_brute};

fn word_strategy(max_k: usize) -> impl Strategy<Value = F2Word> {
    prop::collection::vec(1u8..=2, 1..=max_k).prop_map(|e| F2Word::new(e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fixed_points_count_word_graph_homs(w in word_strategy(5), n in 1usize..=5, idx in 0u64..1000) {
        let s = BelyiSample::sample_indexed(n, 99, idx);
        let fix = s.word_fix_count(&w);
        prop_assert_eq!(fix, fix_by_composition(&s, &w));
        prop_assert_eq!(fix as u64, count_homs(&word_graph(&w), &pair_graph(&s)));
    }

    #[test]
    fn fixed_points_split_over_output_classes(w in word_strategy(4), n in 1usize..=3, idx in 0u64..1000) {
        let s = BelyiSample::sample_indexed(n, 5, idx);
        let target = pair_graph(&s);
        let total: u64 = enumerate_outputs(&w)
            .iter()
            .map(|d| count_injective_homs(&d.graph, &target))
            .sum();
        prop_assert_eq!(total, s.word_fix_count(&w) as u64);
    }

    #[test]
    fn expectation_is_rotation_invariant(w in word_strategy(5), r in 0usize..5, n in 1usize..=4) {
        prop_assert_eq!(word_expectation_exact(&w, n), word_expectation_exact(&w.rotated(r), n));
    }
}

#[test]
fn class_embeddings_agree_with_brute_force() {
    let pairs = all_pairs_n1();
    for w in ["1,2", "1,1,2"] {
        let w: F2Word = w.parse().unwrap();
        for d in enumerate_outputs(&w) {
            for s in pairs.iter().step_by(37) {
                let target = pair_graph(s);
                assert_eq!(
                    count_injective_homs(&d.graph, &target),
                    injective_embeddings_brute(&d.graph, s)
                );
            }
        }
    }
}

#[test]
fn primitive_power_decomposition() {
    for k in 1..=6 {
        for w in F2Word::all_with_syllables(k) {
            let (root, mu) = primitive_root(&w);
            assert!(root.is_primitive());
            assert_eq!(root.pow(mu), w);
            assert_eq!(k % root.syllable_count(), 0);
        }
    }
    assert_eq!(divisor_count(4), 3);
}

#[test]
fn probability_transfers_through_graph_map() {
    // Probability of a topological event over all pairs equals the
    // fiber-weighted probability over oriented graphs.
    let samples: Vec<_> = enumerate_samples(1).unwrap().collect();
    let mut fibers = BTreeMap::new();
    for s in &samples {
        *fibers.entry(to_oriented_graph(s)).or_insert(0usize) += 1;
    }
    let graphs = all_oriented_graphs_n1();
    for genus in 0..=1 {
        let on_pairs = samples
            .iter()
            .filter(|s| topology(s).unwrap().genus == genus)
            .count();
        let on_graphs: usize = graphs
            .iter()
            .filter(|g| topology_of_graph(g).unwrap().genus == genus)
            .map(|g| fibers[g])
            .sum();
        let uniform_graphs = graphs
            .iter()
            .filter(|g| topology_of_graph(g).unwrap().genus == genus)
            .count();
        assert_eq!(on_pairs, on_graphs);
        assert_eq!(on_pairs * graphs.len(), uniform_graphs * samples.len());
    }
}

#[test]
fn euler_characteristic_on_random_samples() {
    for n in [2, 5, 10] {
        for i in 0..2000 {
            let s = BelyiSample::sample_indexed(n, 2024, i);
            let t = topology(&s).unwrap();
            assert_eq!(
                2 * t.components as i64 - 2 * t.genus as i64 - t.cusp_count as i64,
                -(n as i64)
            );
            assert_eq!(t.cusp_widths.iter().sum::<usize>(), 6 * n);
        }
    }
}
