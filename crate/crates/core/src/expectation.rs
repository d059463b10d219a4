//! Exact expectations of fixed-point counts and their power series in
//! `t = 1/(6n)`.
//!
//! For an image graph with `p` x1-cycles and `q` x2-cycles (and `3q`
//! vertices), the expected number of injective embeddings into a uniform
//! random pair graph on `6n` points is
//!
//! ```text
//! 2^p prod_{i<p} (3n - i) * 3^q prod_{i<q} (2n - i) / prod_{i<2p} (6n - i)
//!   = t^(p-q) * P(t) / Q(t),
//! P(t) = prod_{i<p} (1 - 2it) * prod_{i<q} (1 - 3it),   Q(t) = prod_{i<2p} (1 - it).
//! ```
//!
//! Summing over the output classes of a word gives the exact expected
//! fixed-point count; summing the shifted Taylor coefficients gives its
//! series. All arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::modular::{classify, divisor_count, to_f2, ConjugacyClass, F2Word, ModularWord};
use crate::outputs::{enumerate_outputs, enumerate_outputs_bounded};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Always `p/q`, even for integers.
pub fn rational_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Coefficients of `t^0 .. t^(order-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    /// `sum_i c_i t^i` over the stored coefficients.
    pub fn partial_sum(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_text).collect()
    }
}

fn product_range(n: i64, count: usize, scale: i64) -> BigInt {
    // prod_{i<count} (n - scale*i)
    (0..count as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - scale * i))
}

/// Expected number of injective embeddings of a graph with `p` x1-cycles and
/// `q` x2-cycles into a uniform pair graph on `6n` points. Zero when the
/// graph cannot fit.
pub fn expected_injective_exact(p: usize, q: usize, n: usize) -> Rational {
    assert!(n >= 1, "n must be positive");
    let n = n as i64;
    if p as i64 > 3 * n || q as i64 > 2 * n || 2 * p as i64 > 6 * n {
        return Rational::zero();
    }
    let numer = BigInt::from(2).pow(p as u32)
        * product_range(3 * n, p, 1)
        * BigInt::from(3).pow(q as u32)
        * product_range(2 * n, q, 1);
    let denom = product_range(6 * n, 2 * p, 1);
    Rational::new(numer, denom)
}

fn poly_mul(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= order {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// `prod_{i<count} (1 - scale*i*t)` truncated to `order` terms.
fn falling_poly(count: usize, scale: i64, order: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); order];
    acc[0] = BigInt::one();
    for i in 0..count as i64 {
        acc = poly_mul(&acc, &[BigInt::one(), BigInt::from(-scale * i)], order);
    }
    acc
}

/// Taylor coefficients of `P(t)/Q(t)` at `t = 0`.
pub fn series_a(p: usize, q: usize, order: usize) -> TruncatedSeries {
    assert!(order >= 1, "order must be positive");
    let numer = poly_mul(
        &falling_poly(p, 2, order),
        &falling_poly(q, 3, order),
        order,
    );
    let denom = falling_poly(2 * p, 1, order);
    // denom[0] == 1, so c_j = P_j - sum_{i>=1} Q_i c_{j-i} stays integral.
    let mut c: Vec<BigInt> = Vec::with_capacity(order);
    for j in 0..order {
        let mut v = numer[j].clone();
        for i in 1..=j {
            v -= &denom[i] * &c[j - i];
        }
        c.push(v);
    }
    TruncatedSeries::from_coeffs(c.into_iter().map(Rational::from_integer).collect())
}

/// Shape of one output class: `p` x1-cycles, `q` x2-cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassShape {
    pub p: usize,
    pub q: usize,
}

impl ClassShape {
    pub fn eta(&self) -> usize {
        self.p - self.q
    }
}

/// The output classes of a word, reduced to their shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordExpansion {
    pub word: F2Word,
    pub classes: Vec<ClassShape>,
    /// Classes with `eta` above this bound were not enumerated.
    pub max_eta: usize,
}

impl WordExpansion {
    pub fn full(word: &F2Word) -> Self {
        Self::from_outputs(word, &enumerate_outputs(word), word.syllable_count())
    }

    /// Only classes with `eta < order`, which is all the series needs.
    pub fn up_to_order(word: &F2Word, order: usize) -> Self {
        let max_op2 = order.min(word.syllable_count());
        Self::from_outputs(word, &enumerate_outputs_bounded(word, max_op2), max_op2)
    }

    fn from_outputs(
        word: &F2Word,
        outputs: &[crate::outputs::OutputDatum],
        max_op2: usize,
    ) -> Self {
        let classes = outputs
            .iter()
            .map(|d| {
                let cs = d.cycle_structure();
                ClassShape { p: cs.p, q: cs.q }
            })
            .collect();
        Self {
            word: word.clone(),
            classes,
            max_eta: max_op2.saturating_sub(1),
        }
    }

    fn is_complete(&self) -> bool {
        self.max_eta + 1 >= self.word.syllable_count()
    }

    pub fn exact(&self, n: usize) -> Rational {
        assert!(self.is_complete(), "exact value needs every output class");
        self.classes
            .iter()
            .map(|c| expected_injective_exact(c.p, c.q, n))
            .sum()
    }

    /// `v_j = sum over classes of a_{j - eta}`.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        assert!(order >= 1, "order must be positive");
        assert!(
            self.is_complete() || order <= self.max_eta + 1,
            "series order exceeds the enumerated classes"
        );
        let mut v = vec![Rational::zero(); order];
        for c in &self.classes {
            let eta = c.eta();
            if eta >= order {
                continue;
            }
            let a = series_a(c.p, c.q, order - eta);
            for (i, coeff) in a.coeffs().iter().enumerate() {
                v[i + eta] += coeff;
            }
        }
        TruncatedSeries::from_coeffs(v)
    }

    pub fn eta_min(&self) -> Option<usize> {
        self.classes.iter().map(ClassShape::eta).min()
    }
}

/// Exact expected number of fixed points of the word's permutation.
pub fn word_expectation_exact(w: &F2Word, n: usize) -> Rational {
    WordExpansion::full(w).exact(n)
}

/// Series coefficients `v_0 .. v_{order-1}` of the expected fixed-point count.
pub fn word_series_v(w: &F2Word, order: usize) -> TruncatedSeries {
    WordExpansion::up_to_order(w, order).series(order)
}

/// Series of the normalized trace of the standard representation at `w`.
pub fn trace_series_u(w: &ModularWord, order: usize) -> TruncatedSeries {
    assert!(order >= 1, "order must be positive");
    let mut u = vec![Rational::zero(); order];
    match classify(w) {
        ConjugacyClass::Identity => {
            u[0] = Rational::one();
            if order > 1 {
                u[1] = -Rational::one();
            }
        }
        ConjugacyClass::Torsion(_) => {
            if order > 1 {
                u[1] = -Rational::one();
            }
        }
        ConjugacyClass::Hyperbolic { .. } => {
            if order > 1 {
                let omega = to_f2(w).expect("hyperbolic elements have a standard form");
                let v = word_series_v(&omega, order - 1);
                u[1] = v.coeff(0) - Rational::one();
                for (uj, vj) in u[2..].iter_mut().zip(&v.coeffs()[1..]) {
                    *uj = vj.clone();
                }
            }
        }
    }
    TruncatedSeries::from_coeffs(u)
}

/// Exact expectation of the normalized trace, `(E[fix] - 1) / (6n)`.
pub fn trace_expectation_exact(w: &ModularWord, n: usize) -> Rational {
    let six_n = Rational::from_integer(BigInt::from(6 * n as i64));
    match classify(w) {
        ConjugacyClass::Identity => Rational::one() - six_n.recip(),
        ConjugacyClass::Torsion(_) => -six_n.recip(),
        ConjugacyClass::Hyperbolic { .. } => {
            let omega = to_f2(w).expect("hyperbolic elements have a standard form");
            (word_expectation_exact(&omega, n) - Rational::one()) / six_n
        }
    }
}

/// First order at which the trace series is claimed to approximate well:
/// `|gamma| + 1`.
pub fn trace_min_valid_order(w: &ModularWord) -> usize {
    w.letter_length() + 1
}

pub fn t_of(n: usize) -> Rational {
    rational(1, 6 * n as i64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationRow {
    pub n: usize,
    pub exact: Rational,
    pub partial: Rational,
    pub abs_error: Rational,
    /// `(6n)^m * |exact - partial|`.
    pub normalized_error: Rational,
}

impl TruncationRow {
    pub fn record(&self) -> TruncationRecord {
        TruncationRecord {
            n: self.n,
            exact: rational_text(&self.exact),
            partial: rational_text(&self.partial),
            abs_error: rational_text(&self.abs_error),
            normalized_error: rational_text(&self.normalized_error),
        }
    }
}

/// [`TruncationRow`] with rationals as `"p/q"` text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationRecord {
    pub n: usize,
    pub exact: String,
    pub partial: String,
    pub abs_error: String,
    pub normalized_error: String,
}

pub const TRUNCATION_HEADER: [&str; 5] = ["n", "exact", "partial", "abs_error", "normalized_error"];

/// Exact value, order-`m` partial sum, and (normalized) truncation error
/// for each `n` in the grid.
pub fn truncation_error_report(w: &F2Word, order: usize, n_grid: &[usize]) -> Vec<TruncationRow> {
    let expansion = WordExpansion::full(w);
    let series = expansion.series(order);
    n_grid
        .iter()
        .map(|&n| {
            let exact = expansion.exact(n);
            let t = t_of(n);
            let partial = series.partial_sum(&t);
            let abs_error = (&exact - &partial).abs();
            let scale = Rational::from_integer(BigInt::from(6 * n as i64).pow(order as u32));
            let normalized_error = &abs_error * scale;
            TruncationRow {
                n,
                exact,
                partial,
                abs_error,
                normalized_error,
            }
        })
        .collect()
}

/// Serialized series: coefficients as `"p/q"` strings plus metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesRecord {
    pub word: String,
    pub order: usize,
    /// Smallest `eta` among the contributing output classes; absent for
    /// identity and torsion elements.
    pub eta_min: Option<usize>,
    /// `|gamma| + 1` for trace series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_valid_order: Option<usize>,
    pub coeffs: Vec<String>,
}

pub fn word_series_record(w: &F2Word, order: usize) -> SeriesRecord {
    let expansion = WordExpansion::up_to_order(w, order);
    SeriesRecord {
        word: w.to_string(),
        order,
        eta_min: expansion.eta_min(),
        min_valid_order: None,
        coeffs: expansion.series(order).to_strings(),
    }
}

pub fn trace_series_record(w: &ModularWord, order: usize) -> SeriesRecord {
    let eta_min = match classify(w) {
        ConjugacyClass::Hyperbolic { .. } => {
            let omega = to_f2(w).expect("hyperbolic");
            WordExpansion::up_to_order(&omega, 1).eta_min()
        }
        _ => None,
    };
    SeriesRecord {
        word: w.to_string(),
        order,
        eta_min,
        min_valid_order: Some(trace_min_valid_order(w)),
        coeffs: trace_series_u(w, order).to_strings(),
    }
}

/// `d(mu)` for the primitive-root decomposition of `w`.
pub fn leading_coefficient_prediction(w: &F2Word) -> u64 {
    divisor_count(crate::modular::primitive_root(w).1 as u64)
}
