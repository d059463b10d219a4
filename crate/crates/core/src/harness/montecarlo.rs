use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, SurfaceError};
use crate::expectation::{rational_text, rational_to_f64, t_of, Rational, WordExpansion};
use crate::modular::{classify, to_f2, ConjugacyClass, F2Word, ModularWord};
use crate::perm::{enumerate_samples, BelyiSample};
use crate::surface::{has_large_cusps, topology_record, TopologyRecord};

/// Largest supported `n`.
pub const MAX_N: usize = 1_000_000;

/// A word given either as exponents (`1,2,1`) or as modular letters (`bcbcc`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedWord {
    Standard(F2Word),
    /// Identity or torsion: only the trace series applies.
    Elliptic(ModularWord),
}

pub fn parse_word(text: &str) -> Result<ParsedWord, HarnessError> {
    let text = text.trim();
    let looks_modular = text.is_empty()
        || text
            .chars()
            .all(|c| matches!(c, 'b' | 'c' | 'B' | 'C' | 'e' | ' '));
    if !looks_modular {
        return Ok(ParsedWord::Standard(text.parse()?));
    }
    let w: ModularWord = text.parse()?;
    match classify(&w) {
        ConjugacyClass::Hyperbolic { .. } => Ok(ParsedWord::Standard(to_f2(&w)?)),
        _ => Ok(ParsedWord::Elliptic(w)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub n: usize,
    pub word: F2Word,
    pub samples: u64,
    pub seed: u64,
    /// Truncation order of the reported series value.
    pub order: usize,
    pub workers: usize,
}

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n == 0 || self.n > MAX_N {
            return Err(HarnessError::Config(format!("n must be in 1..={MAX_N}")));
        }
        if self.samples == 0 {
            return Err(HarnessError::Config("samples must be at least 1".into()));
        }
        if self.order == 0 {
            return Err(HarnessError::Config("order must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(HarnessError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCReportRow {
    pub n: usize,
    pub word: String,
    pub samples: u64,
    pub mean_fix: f64,
    pub stderr: f64,
    pub exact_fix: String,
    pub series_partial: String,
    pub abs_err: f64,
    /// Set when a single sample makes the standard error meaningless.
    #[serde(skip)]
    pub degenerate: bool,
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(pool.install(f))
}

pub fn run_montecarlo(cfg: &MonteCarloConfig) -> Result<MCReportRow, HarnessError> {
    cfg.validate()?;
    let (sum, sum_sq) = with_pool(cfg.workers, || {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| {
                let f = BelyiSample::sample_indexed(cfg.n, cfg.seed, i).word_fix_count(&cfg.word)
                    as u128;
                (f, f * f)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    })?;

    let expansion = WordExpansion::full(&cfg.word);
    let exact = expansion.exact(cfg.n);
    let partial = expansion.series(cfg.order).partial_sum(&t_of(cfg.n));

    let count = cfg.samples as f64;
    let mean = Rational::new(BigInt::from(sum), BigInt::from(cfg.samples));
    let stderr = if cfg.samples > 1 {
        let s = sum as f64;
        let var = (sum_sq as f64 - s * s / count) / (count - 1.0);
        (var.max(0.0) / count).sqrt()
    } else {
        0.0
    };
    Ok(MCReportRow {
        n: cfg.n,
        word: cfg.word.to_string(),
        samples: cfg.samples,
        mean_fix: rational_to_f64(&mean),
        stderr,
        abs_err: rational_to_f64(&(&mean - &exact).abs()),
        exact_fix: rational_text(&exact),
        series_partial: rational_text(&partial),
        degenerate: cfg.samples == 1,
    })
}

/// Mean of the fixed-point count over every pair at `n = 1`.
pub fn exhaustive_mean_fix(w: &F2Word) -> Rational {
    let (sum, count) = enumerate_samples(1)
        .expect("n = 1 is enumerable")
        .fold((0u64, 0u64), |(s, c), x| {
            (s + x.word_fix_count(w) as u64, c + 1)
        });
    Rational::new(BigInt::from(sum), BigInt::from(count))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityEstimate {
    pub n: usize,
    pub hits: u64,
    pub samples: u64,
    pub p: f64,
    pub stderr: f64,
}

/// Fraction of samples whose cusps all have width at least `l`.
pub fn large_cusps_probability(
    n: usize,
    l: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<ProbabilityEstimate, HarnessError> {
    if n == 0 || n > MAX_N || samples == 0 {
        return Err(HarnessError::Config(
            "need 1 <= n <= 10^6 and samples >= 1".into(),
        ));
    }
    let hits = with_pool(workers.max(1), || {
        (0..samples)
            .into_par_iter()
            .filter(|&i| has_large_cusps(&BelyiSample::sample_indexed(n, seed, i), l))
            .count() as u64
    })?;
    let p = hits as f64 / samples as f64;
    Ok(ProbabilityEstimate {
        n,
        hits,
        samples,
        p,
        stderr: (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub n: usize,
    pub sigma: String,
    pub tau: String,
}

pub fn sample_records(n: usize, count: u64, seed: u64) -> Vec<SampleRecord> {
    (0..count)
        .map(|i| {
            let s = BelyiSample::sample_indexed(n, seed, i);
            SampleRecord {
                index: i,
                n,
                sigma: s.sigma().to_string(),
                tau: s.tau().to_string(),
            }
        })
        .collect()
}

pub fn topology_records(
    n: usize,
    count: u64,
    seed: u64,
    l: usize,
) -> Result<Vec<TopologyRecord>, SurfaceError> {
    (0..count)
        .into_par_iter()
        .map(|i| topology_record(&BelyiSample::sample_indexed(n, seed, i), l))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expectation::rational;

    fn cfg(word: &str, n: usize, samples: u64, workers: usize) -> MonteCarloConfig {
        MonteCarloConfig {
            n,
            word: word.parse().unwrap(),
            samples,
            seed: 7,
            order: 3,
            workers,
        }
    }

    #[test]
    fn single_sample_is_degenerate() {
        let row = run_montecarlo(&cfg("1", 3, 1, 1)).unwrap();
        assert!(row.degenerate);
        assert_eq!(row.stderr, 0.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let a = run_montecarlo(&cfg("1,2", 4, 2000, 1)).unwrap();
        let b = run_montecarlo(&cfg("1,2", 4, 2000, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_run_is_near_exact() {
        let row = run_montecarlo(&cfg("1", 1, 20_000, 2)).unwrap();
        assert_eq!(row.exact_fix, "6/5");
        assert!(row.abs_err <= 4.0 * row.stderr);
    }

    #[test]
    fn exhaustive_mean_for_single_syllable() {
        assert_eq!(exhaustive_mean_fix(&"1".parse().unwrap()), rational(6, 5));
    }

    #[test]
    fn word_syntaxes() {
        assert_eq!(
            parse_word("1,2").unwrap(),
            ParsedWord::Standard("1,2".parse().unwrap())
        );
        assert_eq!(
            parse_word("bcbcc").unwrap(),
            ParsedWord::Standard("1,2".parse().unwrap())
        );
        assert!(matches!(parse_word("b").unwrap(), ParsedWord::Elliptic(_)));
        assert!(matches!(parse_word("e").unwrap(), ParsedWord::Elliptic(_)));
        assert!(parse_word("1,3").is_err());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(run_montecarlo(&cfg("1", 0, 10, 1)).is_err());
        assert!(run_montecarlo(&cfg("1", 1, 0, 1)).is_err());
    }
}
