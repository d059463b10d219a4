//! The punctured surface attached to a pair `(sigma, tau)`: the oriented
//! cubic graph it encodes and the topology of the resulting surface.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::SurfaceError;
use crate::perm::{BelyiSample, Permutation};

/// A cubic graph on `2n` vertices with a cyclic order at every vertex.
///
/// Half-edges `3k, 3k+1, 3k+2` (0-based) attach to vertex `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedCubicGraph {
    n: usize,
    pairing: Permutation,
    /// Per vertex, the cyclic order of its half-edges starting at `3k`.
    orientation: Vec<[usize; 3]>,
}

impl OrientedCubicGraph {
    pub fn new(n: usize, pairing: Permutation, orientation: Vec<[usize; 3]>) -> Option<Self> {
        if pairing.len() != 6 * n || orientation.len() != 2 * n {
            return None;
        }
        if pairing.cycle_type() != vec![2; 3 * n] {
            return None;
        }
        for (k, cyc) in orientation.iter().enumerate() {
            let mut sorted = *cyc;
            sorted.sort_unstable();
            if sorted != [3 * k, 3 * k + 1, 3 * k + 2] || cyc[0] != 3 * k {
                return None;
            }
        }
        Some(Self {
            n,
            pairing,
            orientation,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairing(&self) -> &Permutation {
        &self.pairing
    }

    pub fn orientation(&self) -> &[[usize; 3]] {
        &self.orientation
    }

    /// The rotation permutation: each half-edge to the next one around its vertex.
    pub fn rotation(&self) -> Permutation {
        let mut images = vec![0; 6 * self.n];
        for cyc in &self.orientation {
            images[cyc[0]] = cyc[1];
            images[cyc[1]] = cyc[2];
            images[cyc[2]] = cyc[0];
        }
        Permutation::from_images(images).expect("rotation is a bijection")
    }

    /// Boundary walks of the ribbon graph.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.rotation()
            .compose(&self.pairing)
            .expect("same ground set")
            .cycles()
    }
}

/// Relabels `[6n]` so that the k-th `tau`-cycle (ordered by least element)
/// becomes `3k, 3k+1, 3k+2`, with the successor of the least element and
/// the remaining point sent to `3k+1, 3k+2` by size.
pub fn relabeling(s: &BelyiSample) -> Permutation {
    let m = 6 * s.n();
    let mut h = vec![usize::MAX; m];
    let mut k = 0;
    for a in 0..m {
        if h[a] != usize::MAX {
            continue;
        }
        let b = s.tau().apply(a);
        let c = s.tau().apply(b);
        h[a] = 3 * k;
        h[b.min(c)] = 3 * k + 1;
        h[b.max(c)] = 3 * k + 2;
        k += 1;
    }
    Permutation::from_images(h).expect("relabeling is a bijection")
}

pub fn to_oriented_graph(s: &BelyiSample) -> OrientedCubicGraph {
    let h = relabeling(s);
    let h_inv = h.inverse();
    let pairing = h
        .compose(s.sigma())
        .and_then(|p| p.compose(&h_inv))
        .expect("same ground set");
    let orientation = (0..2 * s.n())
        .map(|k| {
            let a = h_inv.apply(3 * k);
            let b = s.tau().apply(a);
            let c = s.tau().apply(b);
            [3 * k, h.apply(b), h.apply(c)]
        })
        .collect();
    OrientedCubicGraph {
        n: s.n(),
        pairing,
        orientation,
    }
}

/// Every oriented cubic graph on 2 vertices: 15 pairings times 4 orientations.
pub fn all_oriented_graphs_n1() -> Vec<OrientedCubicGraph> {
    let mut out = Vec::new();
    for pairing in crate::perm::all_fpf_involutions(6) {
        for flips in 0..4u8 {
            let orientation = (0..2)
                .map(|k| {
                    if flips >> k & 1 == 0 {
                        [3 * k, 3 * k + 1, 3 * k + 2]
                    } else {
                        [3 * k, 3 * k + 2, 3 * k + 1]
                    }
                })
                .collect();
            out.push(OrientedCubicGraph {
                n: 1,
                pairing: pairing.clone(),
                orientation,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceTopology {
    /// Total genus, summed over connected components.
    pub genus: usize,
    pub cusp_count: usize,
    /// Ascending.
    pub cusp_widths: Vec<usize>,
    /// Orbits of the group generated by the two permutations.
    pub components: usize,
}

impl SurfaceTopology {
    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    /// `2 * components - 2 * genus - cusps`.
    pub fn euler_characteristic(&self) -> i64 {
        2 * self.components as i64 - 2 * self.genus as i64 - self.cusp_count as i64
    }
}

/// Number of orbits of the group generated by `a` and `b`.
pub fn orbit_count(a: &Permutation, b: &Permutation) -> usize {
    let m = a.len();
    let mut seen = vec![false; m];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(x) = stack.pop() {
            for y in [a.apply(x), b.apply(x)] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

fn topology_from_widths(
    n: usize,
    components: usize,
    mut widths: Vec<usize>,
) -> Result<SurfaceTopology, SurfaceError> {
    widths.sort_unstable();
    let cusps = widths.len();
    // 2 * components - 2g - c = -n
    let twice_genus = (2 * components + n) as i64 - cusps as i64;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(SurfaceError::NonIntegralGenus { n, cusps });
    }
    Ok(SurfaceTopology {
        genus: (twice_genus / 2) as usize,
        cusp_count: cusps,
        cusp_widths: widths,
        components,
    })
}

/// Cusps are the cycles of `sigma . tau`; widths are their lengths.
pub fn topology(s: &BelyiSample) -> Result<SurfaceTopology, SurfaceError> {
    let st = s.sigma().compose(s.tau()).expect("same ground set");
    topology_from_widths(s.n(), orbit_count(s.sigma(), s.tau()), st.cycle_type())
}

/// Topology read off the faces of the ribbon graph.
pub fn topology_of_graph(g: &OrientedCubicGraph) -> Result<SurfaceTopology, SurfaceError> {
    topology_from_widths(
        g.n(),
        orbit_count(g.pairing(), &g.rotation()),
        g.faces().iter().map(Vec::len).collect(),
    )
}

pub fn has_large_cusps(s: &BelyiSample, l: usize) -> bool {
    let st = s.sigma().compose(s.tau()).expect("same ground set");
    st.cycles().iter().all(|c| c.len() >= l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyRecord {
    pub n: usize,
    pub genus: usize,
    pub cusp_count: usize,
    pub widths: Vec<usize>,
    pub large_cusps_l: usize,
    pub large_cusps: bool,
    pub components: usize,
}

pub fn topology_record(s: &BelyiSample, l: usize) -> Result<TopologyRecord, SurfaceError> {
    let t = topology(s)?;
    Ok(TopologyRecord {
        n: s.n(),
        genus: t.genus,
        cusp_count: t.cusp_count,
        large_cusps: t.cusp_widths.iter().all(|&w| w >= l),
        widths: t.cusp_widths,
        large_cusps_l: l,
        components: t.components,
    })
}

/// Distinct images of the given samples under [`to_oriented_graph`].
pub fn distinct_graphs<'a>(
    samples: impl IntoIterator<Item = &'a BelyiSample>,
) -> BTreeSet<OrientedCubicGraph> {
    samples.into_iter().map(to_oriented_graph).collect()
}
