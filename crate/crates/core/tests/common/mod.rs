//! Brute-force reference computations shared by the integration tests.
//! Nothing here reuses the library's search or counting code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use belyi_core::expectation::Rational;
use belyi_core::graph::{complete_word, Label, XLabeledGraph};
use belyi_core::modular::F2Word;
use belyi_core::perm::{all_fpf_involutions, all_fpf_order3, BelyiSample, Permutation};
use num_bigint::BigInt;

/// `(p, q)` of a quotient: x1-cycles and x2-cycles.
pub type Shape = (usize, usize);

/// Every partition of the completion's vertices whose quotient is a union of
/// x1-cycles and x2-cycles, as a restricted growth string, with its shape.
///
/// A partition qualifies when both labelled successor maps descend to the
/// quotient and neither has a fixed class. These are exactly the surjective
/// images of the completion inside some pair graph.
pub fn brute_force_surjections(w: &F2Word) -> BTreeMap<Vec<usize>, Shape> {
    let g = complete_word(w).graph;
    let m = g.vertex_count();
    let x1: Vec<Option<usize>> = (0..m).map(|v| g.successor(Label::X1, v)).collect();
    let x2: Vec<usize> = (0..m)
        .map(|v| g.successor(Label::X2, v).expect("completion is x2-closed"))
        .collect();
    let mut out = BTreeMap::new();
    let mut rgs = vec![usize::MAX; m];
    search(0, 0, &mut rgs, &x1, &x2, &mut out);
    out
}

fn consistent(rgs: &[usize], upto: usize, x1: &[Option<usize>], x2: &[usize]) -> bool {
    let known = |v: usize| v <= upto;
    for u in 0..=upto {
        if known(x2[u]) && rgs[x2[u]] == rgs[u] {
            return false;
        }
        if let Some(p) = x1[u] {
            if known(p) && rgs[p] == rgs[u] {
                return false;
            }
        }
        for v in 0..u {
            if rgs[u] != rgs[v] {
                continue;
            }
            if known(x2[u]) && known(x2[v]) && rgs[x2[u]] != rgs[x2[v]] {
                return false;
            }
            if let (Some(a), Some(b)) = (x1[u], x1[v]) {
                if known(a) && known(b) && rgs[a] != rgs[b] {
                    return false;
                }
            }
        }
    }
    true
}

fn search(
    i: usize,
    classes: usize,
    rgs: &mut Vec<usize>,
    x1: &[Option<usize>],
    x2: &[usize],
    out: &mut BTreeMap<Vec<usize>, Shape>,
) {
    let m = rgs.len();
    if i == m {
        let x1_classes = (0..m)
            .filter_map(|v| x1[v].map(|p| (rgs[v].min(rgs[p]), rgs[v].max(rgs[p]))))
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        out.insert(rgs.clone(), (x1_classes, classes / 3));
        return;
    }
    for c in 0..=classes {
        rgs[i] = c;
        if consistent(rgs, i, x1, x2) {
            search(i + 1, classes.max(c + 1), rgs, x1, x2, out);
        }
    }
    rgs[i] = usize::MAX;
}

/// Fixed points of the word's permutation built by explicit composition,
/// rightmost factor applied first.
pub fn fix_by_composition(s: &BelyiSample, w: &F2Word) -> usize {
    let sigma = s.sigma();
    let tau = s.tau();
    let tau2 = tau.compose(tau).unwrap();
    let mut acc = Permutation::identity(sigma.len());
    for &e in w.exponents() {
        let t = if e == 1 { tau } else { &tau2 };
        acc = acc.compose(sigma).unwrap().compose(t).unwrap();
    }
    acc.fix_count()
}

/// All 600 pairs at `n = 1`, built independently of the library enumerator.
pub fn all_pairs_n1() -> Vec<BelyiSample> {
    let mut out = Vec::new();
    for s in all_fpf_involutions(6) {
        for t in all_fpf_order3(6) {
            out.push(BelyiSample::new(1, s.clone(), t).unwrap());
        }
    }
    out
}

/// Injective labelled embeddings of `g` into the pair graph, by trying every
/// injective vertex map.
pub fn injective_embeddings_brute(g: &XLabeledGraph, s: &BelyiSample) -> u64 {
    let m = s.sigma().len();
    let v = g.vertex_count();
    let edges = g.edges();
    let mut map = vec![0usize; v];
    let mut used = vec![false; m];
    fn rec(
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        edges: &[(usize, Label, usize)],
        s: &BelyiSample,
    ) -> u64 {
        if i == map.len() {
            let ok = edges.iter().all(|&(a, l, b)| {
                let p = match l {
                    Label::X1 => s.sigma(),
                    Label::X2 => s.tau(),
                };
                p.apply(map[a]) == map[b]
            });
            return ok as u64;
        }
        let mut total = 0;
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                map[i] = x;
                total += rec(i + 1, map, used, edges, s);
                used[x] = false;
            }
        }
        total
    }
    rec(0, &mut map, &mut used, &edges, s)
}

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A graph made of `p` x1-cycles and `q` x2-triangles, with the x1-cycles
/// joining distinct triangles whenever possible.
pub fn union_of_cycles(p: usize, q: usize, pairs: &[(usize, usize)]) -> XLabeledGraph {
    assert_eq!(pairs.len(), p);
    let mut g = XLabeledGraph::new(3 * q);
    for t in 0..q {
        for i in 0..3 {
            g.add_edge(Label::X2, 3 * t + i, 3 * t + (i + 1) % 3)
                .unwrap();
        }
    }
    for &(a, b) in pairs {
        g.add_edge(Label::X1, a, b).unwrap();
        g.add_edge(Label::X1, b, a).unwrap();
    }
    g
}
