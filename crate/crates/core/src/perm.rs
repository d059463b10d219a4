//! Permutations of `{0, .., m-1}`, the pairs `(sigma, tau)` that index random
//! surfaces, uniform samplers for both conjugacy classes and exhaustive
//! enumeration of the `n = 1` sample space.
//!
//! Composition is right-to-left: `p.compose(&q)` maps `i` to `p(q(i))`.
//! Everything is 0-based internally; `Display` renders 1-based cycle notation.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::PermError;
use crate::modular::{F2Word, ModularWord, Syllable};

/// A bijection of `{0, .., m-1}` in one-line form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Self {
            images: (0..m).collect(),
        }
    }

    /// Builds a permutation from its one-line form, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &v in &images {
            if v >= m || seen[v] {
                return Err(PermError::NotBijection { len: m });
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation on `m` points from disjoint cycles given in
    /// 1-based notation, e.g. `&[&[1, 6], &[2, 5], &[3, 4]]`.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..m).collect();
        let mut touched = vec![false; m];
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                let b = cycle[(pos + 1) % cycle.len()];
                if a == 0 || a > m || b == 0 || b > m {
                    return Err(PermError::PointOutOfRange {
                        point: a.max(b),
                        len: m,
                    });
                }
                if touched[a - 1] {
                    return Err(PermError::NotBijection { len: m });
                }
                touched[a - 1] = true;
                images[a - 1] = b - 1;
            }
        }
        Self::from_images(images)
    }

    /// Parses 1-based cycle notation such as `(16)(25)(34)` or `(1 6)(2,5)`.
    /// Without separators inside a cycle every character is one point.
    pub fn parse_cycles(m: usize, text: &str) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let close = open
                .find(')')
                .ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let body = &open[..close];
            let points: Result<Vec<usize>, _> =
                if body.contains(|c: char| c == ',' || c.is_whitespace()) {
                    body.split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(str::parse::<usize>)
                        .collect()
                } else {
                    body.chars()
                        .map(|c| c.to_string().parse::<usize>())
                        .collect()
                };
            cycles.push(points.map_err(|_| PermError::Syntax(text.to_string()))?);
            rest = open[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(m, &refs)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.len() != other.len() {
            return Err(PermError::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.len());
        for _ in 0..k {
            acc = self.compose(&acc).expect("same ground set");
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Disjoint cycles, each starting at its smallest point, ordered by that
    /// point. Fixed points appear as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in ascending order; they sum to `len()`.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable();
        lengths
    }

    pub fn fix_count(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i == j)
            .count()
    }

    /// 1-based images, for serialization.
    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&j| j + 1).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Uniform fixed-point-free involution on `6n` points: shuffle, then pair
/// consecutive entries.
pub fn sample_fpf_involution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let m = 6 * n;
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut images = vec![0; m];
    for pair in order.chunks_exact(2) {
        images[pair[0]] = pair[1];
        images[pair[1]] = pair[0];
    }
    Permutation { images }
}

/// Uniform fixed-point-free permutation of order 3 on `6n` points: shuffle,
/// then read consecutive triples `(a, b, c)` as cycles `a -> b -> c -> a`.
/// Every target arises from exactly `(2n)! * 3^(2n)` shuffles.
pub fn sample_fpf_order3<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let m = 6 * n;
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut images = vec![0; m];
    for t in order.chunks_exact(3) {
        images[t[0]] = t[1];
        images[t[1]] = t[2];
        images[t[2]] = t[0];
    }
    Permutation { images }
}

/// Random stream for sample `index` under `seed`. Streams are independent of
/// how samples are scheduled across workers.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A pair `(sigma, tau)` on `6n` points with `sigma` a fixed-point-free
/// involution and `tau` fixed-point-free of order 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BelyiSample {
    n: usize,
    sigma: Permutation,
    tau: Permutation,
}

impl BelyiSample {
    pub fn new(n: usize, sigma: Permutation, tau: Permutation) -> Result<Self, PermError> {
        let m = 6 * n;
        if n == 0 || sigma.len() != m || tau.len() != m {
            return Err(PermError::NotInSampleSpace(format!(
                "expected permutations on {m} points"
            )));
        }
        if sigma.cycle_type().iter().any(|&l| l != 2) {
            return Err(PermError::NotInSampleSpace(
                "sigma must be a fixed-point-free involution".into(),
            ));
        }
        if tau.cycle_type().iter().any(|&l| l != 3) {
            return Err(PermError::NotInSampleSpace(
                "tau must be fixed-point-free of order 3".into(),
            ));
        }
        Ok(Self { n, sigma, tau })
    }

    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let sigma = sample_fpf_involution(n, rng);
        let tau = sample_fpf_order3(n, rng);
        Self { n, sigma, tau }
    }

    /// Sample `index` of the counter-derived stream for `seed`.
    pub fn sample_indexed(n: usize, seed: u64, index: u64) -> Self {
        Self::sample(n, &mut sample_rng(seed, index))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    /// Image of `x1 x2^{i1} ... x1 x2^{ik}` under `x1 -> sigma`, `x2 -> tau`.
    pub fn word_permutation(&self, word: &F2Word) -> Permutation {
        let tau2 = self.tau.inverse();
        let mut acc = Permutation::identity(6 * self.n);
        for &e in word.exponents() {
            let t = if e == 1 { &self.tau } else { &tau2 };
            acc = acc.compose(&self.sigma).expect("same ground set");
            acc = acc.compose(t).expect("same ground set");
        }
        acc
    }

    /// Fixed points of the word permutation, computed pointwise.
    pub fn word_fix_count(&self, word: &F2Word) -> usize {
        let exps = word.exponents();
        (0..6 * self.n)
            .filter(|&start| {
                let mut i = start;
                for &e in exps.iter().rev() {
                    i = self.tau.apply(i);
                    if e == 2 {
                        i = self.tau.apply(i);
                    }
                    i = self.sigma.apply(i);
                }
                i == start
            })
            .count()
    }

    /// Image of a modular-group word under `b -> sigma`, `c -> tau`.
    pub fn modular_permutation(&self, word: &ModularWord) -> Permutation {
        let mut acc = Permutation::identity(6 * self.n);
        for syl in word.syllables() {
            let step = match *syl {
                Syllable::B => self.sigma.clone(),
                Syllable::C(e) => self.tau.pow(e as usize),
            };
            acc = acc.compose(&step).expect("same ground set");
        }
        acc
    }
}

/// All fixed-point-free involutions on `m` points (`m` even).
pub fn all_fpf_involutions(m: usize) -> Vec<Permutation> {
    fn rec(images: &mut Vec<usize>, free: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let Some(a) = free.iter().position(|&f| f) else {
            out.push(Permutation {
                images: images.clone(),
            });
            return;
        };
        free[a] = false;
        for b in a + 1..free.len() {
            if free[b] {
                free[b] = false;
                images[a] = b;
                images[b] = a;
                rec(images, free, out);
                free[b] = true;
            }
        }
        free[a] = true;
    }
    let mut out = Vec::new();
    if m.is_multiple_of(2) {
        rec(&mut vec![0; m], &mut vec![true; m], &mut out);
    }
    out
}

/// All fixed-point-free permutations of order 3 on `m` points (`m` divisible by 3).
pub fn all_fpf_order3(m: usize) -> Vec<Permutation> {
    fn rec(images: &mut Vec<usize>, free: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let Some(a) = free.iter().position(|&f| f) else {
            out.push(Permutation {
                images: images.clone(),
            });
            return;
        };
        free[a] = false;
        for b in a + 1..free.len() {
            if !free[b] {
                continue;
            }
            free[b] = false;
            for c in b + 1..free.len() {
                if !free[c] {
                    continue;
                }
                free[c] = false;
                for (x, y) in [(b, c), (c, b)] {
                    images[a] = x;
                    images[x] = y;
                    images[y] = a;
                    rec(images, free, out);
                }
                free[c] = true;
            }
            free[b] = true;
        }
        free[a] = true;
    }
    let mut out = Vec::new();
    if m.is_multiple_of(3) {
        rec(&mut vec![0; m], &mut vec![true; m], &mut out);
    }
    out
}

/// Largest `n` for which the whole sample space is enumerated.
pub const MAX_ENUMERATION_N: usize = 1;

/// Every element of the sample space at `n = 1` exactly once (600 pairs).
pub fn enumerate_samples(n: usize) -> Result<impl Iterator<Item = BelyiSample>, PermError> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(PermError::Capacity { n });
    }
    let sigmas = all_fpf_involutions(6 * n);
    let taus = all_fpf_order3(6 * n);
    Ok(sigmas.into_iter().flat_map(move |sigma| {
        taus.clone().into_iter().map(move |tau| BelyiSample {
            n,
            sigma: sigma.clone(),
            tau,
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, HashSet};

    fn p(text: &str) -> Permutation {
        Permutation::parse_cycles(6, text).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = Permutation::identity(6);
        let sigma1 = p("(16)(25)(34)");
        let tau1 = p("(123)(456)");
        assert_eq!(id.compose(&tau1).unwrap(), tau1);
        assert_eq!(sigma1.compose(&tau1).unwrap(), p("(15)(24)(36)"));
        assert!(sigma1.compose(&sigma1).unwrap().is_identity());
    }

    #[test]
    fn compose_size_mismatch() {
        let err = Permutation::identity(3)
            .compose(&Permutation::identity(4))
            .unwrap_err();
        assert!(matches!(err, PermError::SizeMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(Permutation::identity(6).cycle_type(), vec![1; 6]);
        assert_eq!(p("(16)(25)(34)").cycle_type(), vec![2, 2, 2]);
        let st = p("(16)(25)(34)").compose(&p("(132)(456)")).unwrap();
        assert_eq!(st.cycle_type(), vec![6]);
    }

    #[test]
    fn fix_count_examples() {
        assert_eq!(Permutation::identity(6).fix_count(), 6);
        assert_eq!(
            p("(16)(25)(34)")
                .compose(&p("(123)(456)"))
                .unwrap()
                .fix_count(),
            0
        );
        let s = BelyiSample::new(1, p("(15)(26)(34)"), p("(123)(456)")).unwrap();
        let w: F2Word = "1,2".parse().unwrap();
        assert!(s.word_permutation(&w).is_identity());
        assert_eq!(s.word_fix_count(&w), 6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(BelyiSample::new(1, Permutation::identity(6), p("(123)(456)")).is_err());
        assert!(BelyiSample::new(1, p("(16)(25)(34)"), p("(12)(3456)")).is_err());
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(p("(16)(25)(34)").to_string(), "(1 6)(2 5)(3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn sampled_permutations_have_right_cycle_type() {
        let mut rng = sample_rng(7, 0);
        for n in 1..6 {
            let s = sample_fpf_involution(n, &mut rng);
            assert_eq!(s.cycle_type(), vec![2; 3 * n]);
            let t = sample_fpf_order3(n, &mut rng);
            assert_eq!(t.cycle_type(), vec![3; 2 * n]);
        }
    }

    #[test]
    fn involution_sampler_is_uniform_at_n1() {
        let mut counts: BTreeMap<Permutation, u64> = BTreeMap::new();
        let mut rng = sample_rng(2024, 0);
        for _ in 0..15_000 {
            *counts
                .entry(sample_fpf_involution(1, &mut rng))
                .or_default() += 1;
        }
        assert_eq!(counts.len(), 15);
        // Binomial(15000, 1/15): mean 1000, sd ~ 30.55
        let sd = (15_000.0f64 * (1.0 / 15.0) * (14.0 / 15.0)).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - 1000.0).abs() <= 5.0 * sd, "count {c}");
        }
    }

    #[test]
    fn order3_sampler_is_uniform_at_n1() {
        let mut counts: BTreeMap<Permutation, u64> = BTreeMap::new();
        let mut rng = sample_rng(99, 3);
        for _ in 0..40_000 {
            *counts.entry(sample_fpf_order3(1, &mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len(), 40);
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0)
            .sum();
        // chi-square, 39 degrees of freedom, upper 0.001 quantile
        assert!(chi2 < 72.055, "chi2 = {chi2}");
    }

    #[test]
    fn enumeration_at_n1() {
        let all: Vec<_> = enumerate_samples(1).unwrap().collect();
        assert_eq!(all.len(), 600);
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 600);
        for s in &all {
            assert!(BelyiSample::new(1, s.sigma.clone(), s.tau.clone()).is_ok());
        }
        assert_eq!(all_fpf_involutions(6).len(), 15);
        assert_eq!(all_fpf_order3(6).len(), 40);
    }

    #[test]
    fn enumeration_refuses_n2() {
        assert!(matches!(
            enumerate_samples(2).err(),
            Some(PermError::Capacity { n: 2 })
        ));
    }

    #[test]
    fn indexed_sampling_is_reproducible() {
        let a = BelyiSample::sample_indexed(3, 11, 5);
        let b = BelyiSample::sample_indexed(3, 11, 5);
        let c = BelyiSample::sample_indexed(3, 11, 6);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
