use std::collections::BTreeMap;

use serde::Serialize;

use crate::expectation::{rational_text, word_expectation_exact};
use crate::graph::{count_homs, pair_graph, word_graph};
use crate::modular::F2Word;
use crate::perm::{enumerate_samples, BelyiSample, Permutation};
use crate::surface::{all_oriented_graphs_n1, to_oriented_graph, topology, OrientedCubicGraph};

use super::exhaustive_mean_fix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(OracleCheck {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const ORACLE_WORDS: [&str; 6] = ["1", "2", "1,1", "1,2", "2,2", "1,1,1"];

/// Exhaustive checks over the whole sample space at `n = 1`.
pub fn run_oracle_n1() -> OracleReport {
    let mut report = OracleReport::default();
    let samples: Vec<BelyiSample> = enumerate_samples(1).expect("n = 1").collect();

    report.push(
        "sample space size",
        samples.len() == 600,
        format!("{} pairs (expected 600)", samples.len()),
    );

    let mut fibers: BTreeMap<OrientedCubicGraph, usize> = BTreeMap::new();
    for s in &samples {
        *fibers.entry(to_oriented_graph(s)).or_default() += 1;
    }
    let universe = all_oriented_graphs_n1();
    let covers = universe.iter().all(|g| fibers.contains_key(g));
    let sizes: Vec<usize> = fibers.values().copied().collect();
    report.push(
        "oriented cubic graphs and fiber sizes",
        fibers.len() == 60 && universe.len() == 60 && covers && sizes.iter().all(|&c| c == 10),
        format!(
            "{} graphs hit of {}; fiber sizes {:?}..{:?} (expected 60 graphs, all fibers 10)",
            fibers.len(),
            universe.len(),
            sizes.iter().min(),
            sizes.iter().max()
        ),
    );

    for text in ORACLE_WORDS {
        let w: F2Word = text.parse().expect("oracle word");
        let oracle = exhaustive_mean_fix(&w);
        let exact = word_expectation_exact(&w, 1);
        report.push(
            &format!("exhaustive mean of fixed points for ({text})"),
            oracle == exact,
            format!(
                "enumeration {} vs formula {}",
                rational_text(&oracle),
                rational_text(&exact)
            ),
        );
    }

    let w: F2Word = "1,2".parse().expect("oracle word");
    let g = word_graph(&w);
    let bad = samples
        .iter()
        .filter(|s| s.word_fix_count(&w) as u64 != count_homs(&g, &pair_graph(s)))
        .count();
    report.push(
        "fixed points equal word-graph homomorphisms for (1,2)",
        bad == 0,
        format!("{bad} mismatching pairs"),
    );

    let sigma = Permutation::parse_cycles(6, "(16)(25)(34)").expect("literal");
    for (tau, genus, cusps) in [("(123)(456)", 0, 3), ("(132)(456)", 1, 1)] {
        let tau = Permutation::parse_cycles(6, tau).expect("literal");
        let s = BelyiSample::new(1, sigma.clone(), tau.clone()).expect("valid pair");
        let (passed, detail) = match topology(&s) {
            Ok(t) => (
                t.genus == genus && t.cusp_count == cusps,
                format!(
                    "genus {} with {} cusps (expected genus {genus} with {cusps})",
                    t.genus, t.cusp_count
                ),
            ),
            Err(e) => (false, e.to_string()),
        };
        report.push(
            &format!("topology of sigma {sigma}, tau {tau}"),
            passed,
            detail,
        );
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_suite_passes() {
        let r = run_oracle_n1();
        let failed: Vec<_> = r.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert_eq!(r.checks.len(), 11);
    }
}
