//! Enumeration of the surjective images of a completed word graph.
//!
//! The completion of `x1 x2^{i1} ... x1 x2^{ik}` is a ring of `k`
//! x2-triangles joined by x1-cycles. An image graph is grown triangle by
//! triangle: each time the current exit vertex has no x1-partner yet, it is
//! either joined to a fresh triangle (a "new cycle" step) or to an existing
//! free vertex (a "fold" step, counted by `op2_count`). Every choice is
//! explored; the last step must close the ring back onto the first vertex.
//! Results are deduplicated up to X-labeled isomorphism commuting with the
//! maps from the completion.

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use crate::error::GraphError;
use crate::graph::{
    complete_word, cycle_structure, Completion, CycleStructure, Label, XLabeledGraph,
};
use crate::modular::F2Word;

/// One equivalence class of surjective images: the image graph, the vertex
/// map from the completion onto it, and the number of fold steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutputDatum {
    pub graph: XLabeledGraph,
    pub hom: Vec<usize>,
    pub op2_count: usize,
}

impl OutputDatum {
    pub fn cycle_structure(&self) -> CycleStructure {
        cycle_structure(&self.graph).expect("outputs are unions of x1- and x2-cycles")
    }

    /// Short stable fingerprint of the canonical vertex map.
    pub fn canonical_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for &v in &self.hom {
            hasher.update((v as u64).to_le_bytes());
        }
        hex::encode(&hasher.finalize()[..8])
    }

    /// `hash p q eta a vertices`
    pub fn report_line(&self) -> String {
        let cs = self.cycle_structure();
        format!(
            "{} p={} q={} eta={} a={} vertices={}",
            self.canonical_hash(),
            cs.p,
            cs.q,
            cs.eta,
            self.op2_count,
            self.graph.vertex_count()
        )
    }
}

/// Relabels the image graph in order of first visit along the completion's
/// vertex order. Two data are equivalent iff their canonical forms agree.
pub fn canonicalize(d: &OutputDatum) -> Result<OutputDatum, GraphError> {
    let n = d.graph.vertex_count();
    let mut new_index = vec![usize::MAX; n];
    let mut next = 0;
    for &img in &d.hom {
        if img >= n {
            return Err(GraphError::VertexOutOfRange { vertex: img });
        }
        if new_index[img] == usize::MAX {
            new_index[img] = next;
            next += 1;
        }
    }
    if next != n {
        return Err(GraphError::NotSurjective(format!(
            "{} of {n} vertices are hit",
            next
        )));
    }
    Ok(OutputDatum {
        graph: d.graph.relabeled(&new_index),
        hom: d.hom.iter().map(|&v| new_index[v]).collect(),
        op2_count: d.op2_count,
    })
}

/// Checks that `hom` is an X-labeled homomorphism from `completion` onto
/// `graph`, hitting every vertex and every edge.
pub fn check_surjective_hom(
    completion: &XLabeledGraph,
    graph: &XLabeledGraph,
    hom: &[usize],
) -> Result<(), GraphError> {
    let mut hit: BTreeSet<(usize, Label, usize)> = BTreeSet::new();
    for (u, label, v) in completion.edges() {
        let (a, b) = (hom[u], hom[v]);
        if graph.successor(label, a) != Some(b) {
            return Err(GraphError::NotSurjective(format!(
                "edge {} --{}--> {} has no image",
                u + 1,
                label.name(),
                v + 1
            )));
        }
        hit.insert((a, label, b));
    }
    let vertices: BTreeSet<usize> = hom.iter().copied().collect();
    if vertices.len() != graph.vertex_count() || hit.len() != graph.edges().len() {
        return Err(GraphError::NotSurjective(
            "image misses part of the graph".into(),
        ));
    }
    Ok(())
}

struct State {
    /// x1 partner of each image vertex, if any.
    x1: Vec<Option<usize>>,
    /// x2 successor; image vertices always come in whole triangles.
    x2: Vec<usize>,
    /// Completion vertex to image vertex.
    hom: Vec<Option<usize>>,
    op2: usize,
}

impl State {
    fn new_triangle(&mut self) -> usize {
        let base = self.x2.len();
        self.x2.extend([base + 1, base + 2, base]);
        self.x1.extend([None, None, None]);
        base
    }

    fn join(&mut self, a: usize, b: usize) {
        self.x1[a] = Some(b);
        self.x1[b] = Some(a);
    }

    /// Maps triangle `block` of the completion, given its entry vertex's image.
    fn map_triangle(&mut self, completion: &XLabeledGraph, block: usize, entry_image: usize) {
        let mut v = Completion::entry_vertex(block);
        let mut img = entry_image;
        for _ in 0..3 {
            self.hom[v] = Some(img);
            v = completion.successor(Label::X2, v).expect("triangle");
            img = self.x2[img];
        }
    }

    fn clone_state(&self) -> State {
        State {
            x1: self.x1.clone(),
            x2: self.x2.clone(),
            hom: self.hom.clone(),
            op2: self.op2,
        }
    }

    fn into_datum(self) -> OutputDatum {
        let n = self.x2.len();
        let mut graph = XLabeledGraph::new(n);
        for v in 0..n {
            graph
                .add_edge(Label::X2, v, self.x2[v])
                .expect("triangles are disjoint");
            if let Some(w) = self.x1[v] {
                graph
                    .add_edge(Label::X1, v, w)
                    .expect("x1 is a partial matching");
            }
        }
        OutputDatum {
            graph,
            hom: self
                .hom
                .into_iter()
                .map(|v| v.expect("every vertex mapped"))
                .collect(),
            op2_count: self.op2,
        }
    }
}

fn explore(
    completion: &XLabeledGraph,
    k: usize,
    step: usize,
    state: State,
    max_op2: usize,
    out: &mut BTreeMap<Vec<usize>, OutputDatum>,
) {
    let exit = Completion::exit_vertex(step - 1);
    let j = state.hom[exit].expect("exit vertex of a mapped triangle");
    if step == k {
        // Close the ring onto the image of the first vertex.
        let first = state.hom[Completion::entry_vertex(0)].expect("first vertex mapped");
        let mut state = state;
        match (state.x1[j], state.x1[first]) {
            (None, None) if j != first => {
                if state.op2 + 1 > max_op2 {
                    return;
                }
                state.join(j, first);
                state.op2 += 1;
            }
            (Some(partner), _) if partner == first => {}
            _ => return,
        }
        let datum = canonicalize(&state.into_datum()).expect("algorithm outputs are surjective");
        out.entry(datum.hom.clone()).or_insert(datum);
        return;
    }
    match state.x1[j] {
        Some(partner) => {
            let mut next = state;
            next.map_triangle(completion, step, partner);
            explore(completion, k, step + 1, next, max_op2, out);
        }
        None => {
            // Fold onto an existing free vertex.
            if state.op2 < max_op2 {
                for l in 0..state.x2.len() {
                    if l != j && state.x1[l].is_none() {
                        let mut next = state.clone_state();
                        next.join(j, l);
                        next.op2 += 1;
                        next.map_triangle(completion, step, l);
                        explore(completion, k, step + 1, next, max_op2, out);
                    }
                }
            }
            // Fresh triangle.
            let mut next = state;
            let fresh = next.new_triangle();
            next.join(j, fresh);
            next.map_triangle(completion, step, fresh);
            explore(completion, k, step + 1, next, max_op2, out);
        }
    }
}

/// All output classes with at most `max_op2` fold steps, in canonical form
/// and sorted by canonical vertex map.
pub fn enumerate_outputs_bounded(w: &F2Word, max_op2: usize) -> Vec<OutputDatum> {
    let completion = complete_word(w);
    let k = w.syllable_count();
    let mut state = State {
        x1: Vec::new(),
        x2: Vec::new(),
        hom: vec![None; 3 * k],
        op2: 0,
    };
    let first = state.new_triangle();
    state.map_triangle(&completion.graph, 0, first);
    let mut out = BTreeMap::new();
    explore(&completion.graph, k, 1, state, max_op2, &mut out);
    out.into_values().collect()
}

/// Every output class for `w`.
pub fn enumerate_outputs(w: &F2Word) -> Vec<OutputDatum> {
    enumerate_outputs_bounded(w, w.syllable_count())
}

/// Partition by fold count.
pub fn stratify(outputs: &[OutputDatum]) -> BTreeMap<usize, Vec<OutputDatum>> {
    let mut strata: BTreeMap<usize, Vec<OutputDatum>> = BTreeMap::new();
    for d in outputs {
        strata.entry(d.op2_count).or_default().push(d.clone());
    }
    strata
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    fn f2(s: &str) -> F2Word {
        s.parse().unwrap()
    }

    #[test]
    fn single_syllable_has_one_class() {
        let outs = enumerate_outputs(&f2("1"));
        assert_eq!(outs.len(), 1);
        assert_eq!(outs[0].op2_count, 1);
        assert!(is_isomorphic(
            &outs[0].graph,
            &complete_word(&f2("1")).graph
        ));
        let strata = stratify(&outs);
        assert_eq!(strata.keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn square_of_x1x2_has_two_classes() {
        let outs = enumerate_outputs(&f2("1,1"));
        assert_eq!(outs.len(), 2);
        assert!(outs.iter().all(|d| d.op2_count == 1));
        let mut sizes: Vec<usize> = outs.iter().map(|d| d.graph.vertex_count()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 6]);
        assert_ne!(outs[0].canonical_hash(), outs[1].canonical_hash());
        let small = outs.iter().find(|d| d.graph.vertex_count() == 3).unwrap();
        let big = outs.iter().find(|d| d.graph.vertex_count() == 6).unwrap();
        assert!(is_isomorphic(&small.graph, &complete_word(&f2("1")).graph));
        assert!(is_isomorphic(&big.graph, &complete_word(&f2("1,1")).graph));
    }

    #[test]
    fn worked_example_output_is_present() {
        // x1x2 x1x2^2 x1x2 x1x2 x1x2^2
        let outs = enumerate_outputs(&f2("1,2,1,1,2"));
        assert!(outs.iter().any(|d| {
            let cs = d.cycle_structure();
            d.op2_count == 2 && cs.p == 4 && cs.q == 3
        }));
    }

    #[test]
    fn outputs_are_surjective_and_satisfy_eta_rule() {
        for k in 1..=5 {
            for w in F2Word::all_with_syllables(k) {
                let completion = complete_word(&w);
                for d in enumerate_outputs(&w) {
                    check_surjective_hom(&completion.graph, &d.graph, &d.hom).unwrap();
                    let cs = d.cycle_structure();
                    assert_eq!(cs.eta, d.op2_count as i64 - 1, "word {w}");
                    assert_eq!(d.graph.vertex_count(), 3 * cs.q);
                    assert!(cs.p >= cs.q);
                    assert!(d.op2_count >= 1 && d.op2_count <= k);
                }
            }
        }
    }

    #[test]
    fn canonicalize_is_idempotent_and_orbit_invariant() {
        let outs = enumerate_outputs(&f2("1,2,1,2"));
        for d in &outs {
            assert_eq!(&canonicalize(d).unwrap(), d);
            let n = d.graph.vertex_count();
            let shuffle: Vec<usize> = (0..n).map(|v| (v * 5 + 3) % n).collect();
            let shuffle = if (0..n).all(|v| shuffle.contains(&v)) {
                shuffle
            } else {
                (0..n).rev().collect()
            };
            let moved = OutputDatum {
                graph: d.graph.relabeled(&shuffle),
                hom: d.hom.iter().map(|&v| shuffle[v]).collect(),
                op2_count: d.op2_count,
            };
            assert_eq!(&canonicalize(&moved).unwrap(), d);
        }
    }

    #[test]
    fn canonicalize_rejects_non_surjective() {
        let d = OutputDatum {
            graph: XLabeledGraph::new(4),
            hom: vec![0, 1, 2],
            op2_count: 1,
        };
        assert!(matches!(
            canonicalize(&d),
            Err(GraphError::NotSurjective(_))
        ));
    }

    #[test]
    fn bounded_enumeration_is_a_prefix() {
        let w = f2("1,2,1,1,2,2");
        let all = enumerate_outputs(&w);
        let low = enumerate_outputs_bounded(&w, 2);
        let expected: Vec<_> = all.iter().filter(|d| d.op2_count <= 2).cloned().collect();
        assert_eq!(low, expected);
    }

    #[test]
    fn zero_stratum_is_empty() {
        for k in 1..=6 {
            for w in F2Word::all_with_syllables(k) {
                assert!(enumerate_outputs(&w).iter().all(|d| d.op2_count > 0));
            }
        }
    }
}
