//! X-labeled graphs: directed graphs whose edges carry one of two labels,
//! with at most one outgoing and one incoming edge per label at each vertex.
//!
//! A graph is stored as two partial successor maps (plus their inverses), so
//! an X-labeled homomorphism is just a vertex map commuting with both.
//! Homomorphisms are found by propagation: fixing the image of one vertex of
//! a connected component determines the rest.

use std::fmt;

use crate::error::GraphError;
use crate::modular::F2Word;
use crate::perm::BelyiSample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    X1,
    X2,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::X1, Label::X2];

    pub fn name(self) -> &'static str {
        match self {
            Label::X1 => "x1",
            Label::X2 => "x2",
        }
    }

    fn idx(self) -> usize {
        match self {
            Label::X1 => 0,
            Label::X2 => 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XLabeledGraph {
    out: [Vec<Option<usize>>; 2],
    inc: [Vec<Option<usize>>; 2],
}

impl XLabeledGraph {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            out: [vec![None; vertex_count], vec![None; vertex_count]],
            inc: [vec![None; vertex_count], vec![None; vertex_count]],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.out[0].len()
    }

    pub fn add_vertex(&mut self) -> usize {
        for maps in [&mut self.out, &mut self.inc] {
            for m in maps.iter_mut() {
                m.push(None);
            }
        }
        self.vertex_count() - 1
    }

    pub fn add_edge(&mut self, label: Label, from: usize, to: usize) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for v in [from, to] {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v });
            }
        }
        let l = label.idx();
        if self.out[l][from].is_some() {
            return Err(GraphError::OutgoingTaken {
                vertex: from,
                label: label.name(),
            });
        }
        if self.inc[l][to].is_some() {
            return Err(GraphError::IncomingTaken {
                vertex: to,
                label: label.name(),
            });
        }
        self.out[l][from] = Some(to);
        self.inc[l][to] = Some(from);
        Ok(())
    }

    #[inline]
    pub fn successor(&self, label: Label, v: usize) -> Option<usize> {
        self.out[label.idx()][v]
    }

    #[inline]
    pub fn predecessor(&self, label: Label, v: usize) -> Option<usize> {
        self.inc[label.idx()][v]
    }

    pub fn edge_count(&self, label: Label) -> usize {
        self.out[label.idx()].iter().flatten().count()
    }

    /// All edges as `(from, label, to)`, ordered by source vertex then label.
    pub fn edges(&self) -> Vec<(usize, Label, usize)> {
        let mut edges = Vec::new();
        for v in 0..self.vertex_count() {
            for label in Label::ALL {
                if let Some(w) = self.successor(label, v) {
                    edges.push((v, label, w));
                }
            }
        }
        edges
    }

    /// The same graph with vertex `v` renamed to `new_index[v]`.
    pub fn relabeled(&self, new_index: &[usize]) -> XLabeledGraph {
        let mut g = XLabeledGraph::new(self.vertex_count());
        for (u, label, v) in self.edges() {
            g.add_edge(label, new_index[u], new_index[v])
                .expect("relabeling by a bijection preserves the labeling rule");
        }
        g
    }

    /// Weakly connected components, each listed from its smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for label in Label::ALL {
                    for w in [self.successor(label, u), self.predecessor(label, u)]
                        .into_iter()
                        .flatten()
                    {
                        if !seen[w] {
                            seen[w] = true;
                            comp.push(w);
                            stack.push(w);
                        }
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }
}

impl fmt::Display for XLabeledGraph {
    /// One line per edge, `v --x1--> w`, with 1-based vertices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (u, label, v) in self.edges() {
            writeln!(f, "{} --{}--> {}", u + 1, label.name(), v + 1)?;
        }
        Ok(())
    }
}

/// The closed path `u1 -e_l-> u2 -> ... -e_1-> u1` spelling the word from
/// its last letter backwards.
pub fn word_graph(w: &F2Word) -> XLabeledGraph {
    let mut labels = Vec::with_capacity(w.letter_length());
    for &e in w.exponents().iter().rev() {
        labels.extend(std::iter::repeat_n(Label::X2, e as usize));
        labels.push(Label::X1);
    }
    let len = labels.len();
    let mut g = XLabeledGraph::new(len);
    for (i, &label) in labels.iter().enumerate() {
        g.add_edge(label, i, (i + 1) % len)
            .expect("a positive standard-form word spells a valid labeled cycle");
    }
    g
}

/// The completion of a word graph: every x1-edge mirrored and every run of
/// x2-edges closed into an x2-triangle.
///
/// Vertices are ordered triangle by triangle, following the word graph from
/// `u1`: triangle `j` (0-based) occupies `3j` (where its x2-run starts),
/// `3j + 1` (where the run ends and the x1-edge leaves) and `3j + 2` (the
/// third vertex, not on any x1-cycle). The x1-cycles join `3j + 1` with
/// `3(j + 1) mod 3k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub graph: XLabeledGraph,
    /// Word-graph vertex to completion vertex.
    pub word_map: Vec<usize>,
    /// The word the source graph spells.
    pub word: F2Word,
}

impl Completion {
    pub fn syllable_count(&self) -> usize {
        self.word.syllable_count()
    }

    pub fn entry_vertex(block: usize) -> usize {
        3 * block
    }

    pub fn exit_vertex(block: usize) -> usize {
        3 * block + 1
    }

    pub fn spare_vertex(block: usize) -> usize {
        3 * block + 2
    }
}

/// Completes the word graph of a standard-form word.
pub fn complete(g: &XLabeledGraph) -> Result<Completion, GraphError> {
    let n = g.vertex_count();
    let bad = |why: &str| GraphError::NotWordGraph(why.to_string());
    if n == 0 {
        return Err(bad("empty graph"));
    }
    // Walk the single directed cycle from vertex 0, recording labels.
    let mut order = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut v = 0;
    loop {
        let x1 = g.successor(Label::X1, v);
        let x2 = g.successor(Label::X2, v);
        let (label, next) = match (x1, x2) {
            (Some(w), None) => (Label::X1, w),
            (None, Some(w)) => (Label::X2, w),
            _ => return Err(bad("each vertex needs exactly one outgoing edge")),
        };
        order.push(v);
        labels.push(label);
        v = next;
        if v == 0 {
            break;
        }
        if order.len() > n {
            return Err(bad("walk from the first vertex does not close"));
        }
    }
    if order.len() != n || g.edge_count(Label::X1) + g.edge_count(Label::X2) != n {
        return Err(bad("not a single closed path through every vertex"));
    }
    // Split into runs x2^i x1 with i in {1, 2}.
    let mut runs: Vec<(usize, usize)> = Vec::new(); // (start position, run length)
    let mut pos = 0;
    while pos < n {
        let start = pos;
        while pos < n && labels[pos] == Label::X2 {
            pos += 1;
        }
        let run = pos - start;
        if !(1..=2).contains(&run) || pos >= n || labels[pos] != Label::X1 {
            return Err(bad("expected runs x2 or x2^2, each followed by one x1"));
        }
        runs.push((start, run));
        pos += 1;
    }
    let k = runs.len();
    // The path spells the word backwards: block j carries exponent i_{k-j}.
    let exponents: Vec<u8> = runs.iter().rev().map(|&(_, r)| r as u8).collect();
    let word = F2Word::new(exponents).map_err(|e| bad(&e.to_string()))?;

    let mut graph = XLabeledGraph::new(3 * k);
    let mut word_map = vec![0; n];
    for (j, &(start, run)) in runs.iter().enumerate() {
        let entry = Completion::entry_vertex(j);
        let exit = Completion::exit_vertex(j);
        let spare = Completion::spare_vertex(j);
        word_map[order[start]] = entry;
        if run == 1 {
            // entry -x2-> exit observed; close with exit -> spare -> entry.
            word_map[order[start + 1]] = exit;
            graph.add_edge(Label::X2, entry, exit)?;
            graph.add_edge(Label::X2, exit, spare)?;
            graph.add_edge(Label::X2, spare, entry)?;
        } else {
            // entry -x2-> spare -x2-> exit observed; close with exit -> entry.
            word_map[order[start + 1]] = spare;
            word_map[order[start + 2]] = exit;
            graph.add_edge(Label::X2, entry, spare)?;
            graph.add_edge(Label::X2, spare, exit)?;
            graph.add_edge(Label::X2, exit, entry)?;
        }
        let next_entry = Completion::entry_vertex((j + 1) % k);
        graph.add_edge(Label::X1, exit, next_entry)?;
        graph.add_edge(Label::X1, next_entry, exit)?;
    }
    Ok(Completion {
        graph,
        word_map,
        word,
    })
}

pub fn complete_word(w: &F2Word) -> Completion {
    complete(&word_graph(w)).expect("word graphs of standard-form words complete")
}

/// `6n` vertices with `x1`-edges `i -> sigma(i)` and `x2`-edges `i -> tau(i)`.
pub fn pair_graph(s: &BelyiSample) -> XLabeledGraph {
    let m = 6 * s.n();
    let mut g = XLabeledGraph::new(m);
    for i in 0..m {
        g.add_edge(Label::X1, i, s.sigma().apply(i))
            .expect("sigma is a bijection");
        g.add_edge(Label::X2, i, s.tau().apply(i))
            .expect("tau is a bijection");
    }
    g
}

/// Extends `assignment` from `root -> image` across the root's component.
/// Returns the newly assigned vertices, or `None` (with nothing changed) if
/// the extension fails. With `used`, images must also be fresh.
fn propagate(
    source: &XLabeledGraph,
    target: &XLabeledGraph,
    root: usize,
    image: usize,
    assignment: &mut [Option<usize>],
    mut used: Option<&mut Vec<bool>>,
) -> Option<Vec<usize>> {
    let mut assigned = Vec::new();
    let mut ok = true;
    let assign = |v: usize,
                  img: usize,
                  assignment: &mut [Option<usize>],
                  used: &mut Option<&mut Vec<bool>>,
                  assigned: &mut Vec<usize>|
     -> Option<bool> {
        match assignment[v] {
            Some(existing) => (existing == img).then_some(false),
            None => {
                if let Some(u) = used.as_deref_mut() {
                    if u[img] {
                        return None;
                    }
                    u[img] = true;
                }
                assignment[v] = Some(img);
                assigned.push(v);
                Some(true)
            }
        }
    };
    assign(root, image, assignment, &mut used, &mut assigned)?;
    let mut stack = vec![root];
    'walk: while let Some(u) = stack.pop() {
        let fu = assignment[u].expect("assigned before push");
        for label in Label::ALL {
            let steps = [
                (source.successor(label, u), target.successor(label, fu)),
                (source.predecessor(label, u), target.predecessor(label, fu)),
            ];
            for (src, tgt) in steps {
                let Some(v) = src else { continue };
                let Some(fv) = tgt else {
                    ok = false;
                    break 'walk;
                };
                match assign(v, fv, assignment, &mut used, &mut assigned) {
                    None => {
                        ok = false;
                        break 'walk;
                    }
                    Some(true) => stack.push(v),
                    Some(false) => {}
                }
            }
        }
    }
    if ok {
        Some(assigned)
    } else {
        for &v in &assigned {
            if let (Some(u), Some(img)) = (used.as_deref_mut(), assignment[v]) {
                u[img] = false;
            }
            assignment[v] = None;
        }
        None
    }
}

fn undo(assigned: &[usize], assignment: &mut [Option<usize>], used: Option<&mut Vec<bool>>) {
    if let Some(u) = used {
        for &v in assigned {
            if let Some(img) = assignment[v] {
                u[img] = false;
            }
        }
    }
    for &v in assigned {
        assignment[v] = None;
    }
}

/// Number of X-labeled homomorphisms `source -> target`. For a word graph and
/// a pair graph this walks the word from every start vertex, so it equals the
/// fixed-point count of the word's permutation.
pub fn count_homs(source: &XLabeledGraph, target: &XLabeledGraph) -> u64 {
    let mut assignment = vec![None; source.vertex_count()];
    let mut total = 1u64;
    for comp in source.components() {
        let root = comp[0];
        let mut count = 0u64;
        for img in 0..target.vertex_count() {
            if let Some(assigned) = propagate(source, target, root, img, &mut assignment, None) {
                count += 1;
                undo(&assigned, &mut assignment, None);
            }
        }
        total *= count;
        if total == 0 {
            break;
        }
    }
    total
}

/// Every homomorphism `source -> target` as a vertex map.
pub fn enumerate_homs(source: &XLabeledGraph, target: &XLabeledGraph) -> Vec<Vec<usize>> {
    fn rec(
        comps: &[Vec<usize>],
        source: &XLabeledGraph,
        target: &XLabeledGraph,
        assignment: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some((comp, rest)) = comps.split_first() else {
            out.push(assignment.iter().map(|a| a.expect("total")).collect());
            return;
        };
        for img in 0..target.vertex_count() {
            if let Some(assigned) = propagate(source, target, comp[0], img, assignment, None) {
                rec(rest, source, target, assignment, out);
                undo(&assigned, assignment, None);
            }
        }
    }
    let mut out = Vec::new();
    let comps = source.components();
    rec(
        &comps,
        source,
        target,
        &mut vec![None; source.vertex_count()],
        &mut out,
    );
    out
}

fn injective_search(
    comps: &[Vec<usize>],
    source: &XLabeledGraph,
    target: &XLabeledGraph,
    assignment: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    stop_at_first: bool,
) -> u64 {
    let Some((comp, rest)) = comps.split_first() else {
        return 1;
    };
    let mut count = 0;
    for img in 0..target.vertex_count() {
        if used[img] {
            continue;
        }
        if let Some(assigned) = propagate(source, target, comp[0], img, assignment, Some(used)) {
            count += injective_search(rest, source, target, assignment, used, stop_at_first);
            undo(&assigned, assignment, Some(used));
            if stop_at_first && count > 0 {
                return count;
            }
        }
    }
    count
}

/// Number of injective X-labeled homomorphisms `g -> target`.
pub fn count_injective_homs(g: &XLabeledGraph, target: &XLabeledGraph) -> u64 {
    if g.vertex_count() > target.vertex_count() {
        return 0;
    }
    let comps = g.components();
    injective_search(
        &comps,
        g,
        target,
        &mut vec![None; g.vertex_count()],
        &mut vec![false; target.vertex_count()],
        false,
    )
}

/// Whether an X-labeled isomorphism `a -> b` exists.
pub fn is_isomorphic(a: &XLabeledGraph, b: &XLabeledGraph) -> bool {
    if a.vertex_count() != b.vertex_count()
        || Label::ALL
            .iter()
            .any(|&l| a.edge_count(l) != b.edge_count(l))
    {
        return false;
    }
    let comps = a.components();
    injective_search(
        &comps,
        a,
        b,
        &mut vec![None; a.vertex_count()],
        &mut vec![false; b.vertex_count()],
        true,
    ) > 0
}

/// The subgraph of `target` hit by the homomorphism `map`, with vertices
/// renumbered in order of first appearance.
pub fn image_subgraph(source: &XLabeledGraph, map: &[usize]) -> XLabeledGraph {
    let mut index = std::collections::HashMap::new();
    for &img in map {
        let next = index.len();
        index.entry(img).or_insert(next);
    }
    let mut g = XLabeledGraph::new(index.len());
    for (u, label, v) in source.edges() {
        let (a, b) = (index[&map[u]], index[&map[v]]);
        if g.successor(label, a) != Some(b) {
            g.add_edge(label, a, b)
                .expect("image of a homomorphism into an X-labeled graph is X-labeled");
        }
    }
    g
}

/// Counts of x1-cycles (`p`) and x2-cycles (`q`), and `eta = p - q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct CycleStructure {
    pub p: usize,
    pub q: usize,
    pub eta: i64,
}

/// Requires every x1-orbit to be a 2-cycle and every x2-orbit a 3-cycle.
pub fn cycle_structure(g: &XLabeledGraph) -> Result<CycleStructure, GraphError> {
    let mut counts = [0usize; 2];
    for (label, len) in [(Label::X1, 2usize), (Label::X2, 3usize)] {
        let mut seen = vec![false; g.vertex_count()];
        for start in 0..g.vertex_count() {
            if seen[start] {
                continue;
            }
            if g.successor(label, start).is_none() {
                if g.predecessor(label, start).is_some() {
                    return Err(GraphError::MalformedCycles(format!(
                        "{} path through vertex {} does not close",
                        label.name(),
                        start + 1
                    )));
                }
                continue;
            }
            let mut orbit = 0;
            let mut v = start;
            loop {
                seen[v] = true;
                orbit += 1;
                match g.successor(label, v) {
                    Some(w) if w == start => break,
                    Some(w) if !seen[w] && orbit < len => v = w,
                    _ => {
                        return Err(GraphError::MalformedCycles(format!(
                            "{} orbit of vertex {} is not a {len}-cycle",
                            label.name(),
                            start + 1
                        )))
                    }
                }
            }
            if orbit != len {
                return Err(GraphError::MalformedCycles(format!(
                    "{} orbit of vertex {} has length {orbit}, expected {len}",
                    label.name(),
                    start + 1
                )));
            }
            counts[label.idx()] += 1;
        }
    }
    Ok(CycleStructure {
        p: counts[0],
        q: counts[1],
        eta: counts[0] as i64 - counts[1] as i64,
    })
}
