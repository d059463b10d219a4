//! Words in the modular group `PSL(2,Z) = Z/2 * Z/3` over the generators
//! `b` (order 2) and `c` (order 3), their conjugacy classification, and the
//! standard-form words `x1 x2^{i1} ... x1 x2^{ik}` of the free group on two
//! letters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::WordError;

/// One input letter; `CInv` is rewritten as `c^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    B,
    C,
    CInv,
}

/// Normal-form token: `b`, `c` or `c^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Syllable {
    B,
    C(u8),
}

/// A group element as an alternating word with no two adjacent `b`s and no
/// two adjacent `c`-powers. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModularWord {
    syllables: Vec<Syllable>,
}

/// Reduces a letter sequence using `b^2 = c^3 = e`.
pub fn normalize(letters: &[Letter]) -> ModularWord {
    let mut stack: Vec<Syllable> = Vec::with_capacity(letters.len());
    for &letter in letters {
        let syl = match letter {
            Letter::B => Syllable::B,
            Letter::C => Syllable::C(1),
            Letter::CInv => Syllable::C(2),
        };
        push_reduced(&mut stack, syl);
    }
    ModularWord { syllables: stack }
}

fn push_reduced(stack: &mut Vec<Syllable>, syl: Syllable) {
    match (stack.last().copied(), syl) {
        (Some(Syllable::B), Syllable::B) => {
            stack.pop();
        }
        (Some(Syllable::C(a)), Syllable::C(b)) => {
            stack.pop();
            let e = (a + b) % 3;
            if e != 0 {
                stack.push(Syllable::C(e));
            }
        }
        _ => stack.push(syl),
    }
}

impl ModularWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_syllables(syllables: &[Syllable]) -> Self {
        let mut stack = Vec::with_capacity(syllables.len());
        for &s in syllables {
            match s {
                Syllable::C(e) if e % 3 == 0 => {}
                Syllable::C(e) => push_reduced(&mut stack, Syllable::C(e % 3)),
                Syllable::B => push_reduced(&mut stack, Syllable::B),
            }
        }
        Self { syllables: stack }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Length as a word in `b` and `c` only, counting `c^2` as two letters.
    /// The normal form is the unique reduced word, so this is minimal.
    pub fn letter_length(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| match s {
                Syllable::B => 1,
                Syllable::C(e) => *e as usize,
            })
            .sum()
    }

    pub fn multiply(&self, other: &ModularWord) -> ModularWord {
        let mut all = self.syllables.clone();
        all.extend_from_slice(&other.syllables);
        ModularWord::from_syllables(&all)
    }

    pub fn inverse(&self) -> ModularWord {
        let inv: Vec<Syllable> = self
            .syllables
            .iter()
            .rev()
            .map(|s| match s {
                Syllable::B => Syllable::B,
                Syllable::C(e) => Syllable::C(3 - e),
            })
            .collect();
        ModularWord { syllables: inv }
    }

    /// Conjugate with the first and last syllables cancelled or merged until
    /// they differ in kind.
    pub fn cyclically_reduced(&self) -> Vec<Syllable> {
        let mut w: Vec<Syllable> = self.syllables.clone();
        while w.len() >= 2 {
            let last = w.len() - 1;
            match (w[0], w[last]) {
                (Syllable::B, Syllable::B) => {
                    w.pop();
                    w.remove(0);
                }
                (Syllable::C(a), Syllable::C(b)) => {
                    w.pop();
                    let e = (a + b) % 3;
                    if e == 0 {
                        w.remove(0);
                    } else {
                        w[0] = Syllable::C(e);
                    }
                }
                _ => break,
            }
        }
        w
    }
}

impl FromStr for ModularWord {
    type Err = WordError;

    /// Letters `b`, `c`; `C` stands for `c^-1` and `B` for `b^-1 = b`.
    /// `e` or an empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "e" {
            return Ok(Self::identity());
        }
        let letters: Result<Vec<Letter>, _> = trimmed
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'b' | 'B' => Ok(Letter::B),
                'c' => Ok(Letter::C),
                'C' => Ok(Letter::CInv),
                _ => Err(WordError::Syntax(s.to_string())),
            })
            .collect();
        Ok(normalize(&letters?))
    }
}

impl fmt::Display for ModularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        for s in &self.syllables {
            match s {
                Syllable::B => write!(f, "b")?,
                Syllable::C(1) => write!(f, "c")?,
                Syllable::C(_) => write!(f, "cc")?,
            }
        }
        Ok(())
    }
}

/// A standard-form word `x1 x2^{i1} ... x1 x2^{ik}` stored as its exponent
/// sequence `(i1, .., ik)`, `k >= 1`, each `ij` in `{1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct F2Word {
    exponents: Vec<u8>,
}

impl F2Word {
    pub fn new(exponents: Vec<u8>) -> Result<Self, WordError> {
        if exponents.is_empty() {
            return Err(WordError::Empty);
        }
        if let Some(&bad) = exponents.iter().find(|&&e| e != 1 && e != 2) {
            return Err(WordError::BadExponent(bad as u32));
        }
        Ok(Self { exponents })
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exponents
    }

    /// Number of syllables `k`.
    pub fn syllable_count(&self) -> usize {
        self.exponents.len()
    }

    /// Word length in `x1, x2`: `sum(1 + ij)`.
    pub fn letter_length(&self) -> usize {
        self.exponents.iter().map(|&e| 1 + e as usize).sum()
    }

    pub fn pow(&self, mu: usize) -> F2Word {
        assert!(mu >= 1, "power must be positive");
        F2Word {
            exponents: self.exponents.repeat(mu),
        }
    }

    /// Cyclic rotation by `r` syllables; a conjugate word.
    pub fn rotated(&self, r: usize) -> F2Word {
        let mut e = self.exponents.clone();
        let len = e.len();
        e.rotate_left(r % len);
        F2Word { exponents: e }
    }

    /// A standard-form word conjugate to the inverse, given `x1^2 = x2^3 = e`
    /// in the image: exponents reversed and replaced by `3 - ij`.
    pub fn inverse_standard(&self) -> F2Word {
        F2Word {
            exponents: self.exponents.iter().rev().map(|&e| 3 - e).collect(),
        }
    }

    /// The modular-group element `b c^{i1} ... b c^{ik}`.
    pub fn to_modular(&self) -> ModularWord {
        let syl: Vec<Syllable> = self
            .exponents
            .iter()
            .flat_map(|&e| [Syllable::B, Syllable::C(e)])
            .collect();
        ModularWord::from_syllables(&syl)
    }

    /// All `2^k` standard-form words with `k` syllables, in lexicographic order.
    pub fn all_with_syllables(k: usize) -> Vec<F2Word> {
        (0..1usize << k)
            .map(|bits| F2Word {
                exponents: (0..k)
                    .map(|j| if bits >> (k - 1 - j) & 1 == 1 { 2 } else { 1 })
                    .collect(),
            })
            .collect()
    }

    pub fn is_primitive(&self) -> bool {
        primitive_root(self).1 == 1
    }
}

impl TryFrom<Vec<u8>> for F2Word {
    type Error = WordError;

    fn try_from(v: Vec<u8>) -> Result<Self, Self::Error> {
        F2Word::new(v)
    }
}

impl From<F2Word> for Vec<u8> {
    fn from(w: F2Word) -> Self {
        w.exponents
    }
}

impl FromStr for F2Word {
    type Err = WordError;

    /// Comma-separated exponents, e.g. `1,2,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let exps: Result<Vec<u8>, _> = s.split(',').map(|t| t.trim().parse::<u8>()).collect();
        F2Word::new(exps.map_err(|_| WordError::Syntax(s.to_string()))?)
    }
}

impl fmt::Display for F2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(u8::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Torsion {
    B,
    C,
    C2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConjugacyClass {
    Identity,
    Torsion(Torsion),
    /// Conjugate to `root^mu` with `root` primitive.
    Hyperbolic {
        root: F2Word,
        mu: usize,
    },
}

/// Conjugacy class of `w`. For hyperbolic elements the exponent sequence is
/// rotated to its lexicographically least form, so conjugate inputs give
/// identical results.
pub fn classify(w: &ModularWord) -> ConjugacyClass {
    let reduced = w.cyclically_reduced();
    match reduced.as_slice() {
        [] => ConjugacyClass::Identity,
        [Syllable::B] => ConjugacyClass::Torsion(Torsion::B),
        [Syllable::C(1)] => ConjugacyClass::Torsion(Torsion::C),
        [Syllable::C(_)] => ConjugacyClass::Torsion(Torsion::C2),
        _ => {
            let exps = exponents_from_b(&reduced);
            let least = least_rotation(&exps);
            let (root, mu) = primitive_root(&F2Word { exponents: least });
            ConjugacyClass::Hyperbolic { root, mu }
        }
    }
}

/// Exponent sequence of an alternating cyclic word, read from its first `b`.
fn exponents_from_b(reduced: &[Syllable]) -> Vec<u8> {
    let start = reduced
        .iter()
        .position(|s| *s == Syllable::B)
        .expect("alternating word of length >= 2 contains b");
    let len = reduced.len();
    (0..len)
        .map(|j| reduced[(start + j) % len])
        .filter_map(|s| match s {
            Syllable::C(e) => Some(e),
            Syllable::B => None,
        })
        .collect()
}

fn least_rotation(seq: &[u8]) -> Vec<u8> {
    (0..seq.len())
        .map(|r| {
            let mut v = seq.to_vec();
            v.rotate_left(r);
            v
        })
        .min()
        .expect("nonempty sequence")
}

/// `(root, mu)` with `w = root^mu` and `mu` maximal: the root is the prefix
/// of the smallest length `d | k` whose repetition reproduces `w`.
pub fn primitive_root(w: &F2Word) -> (F2Word, usize) {
    let e = &w.exponents;
    let k = e.len();
    for d in (1..=k).filter(|d| k.is_multiple_of(*d)) {
        if (d..k).all(|i| e[i] == e[i - d]) {
            return (
                F2Word {
                    exponents: e[..d].to_vec(),
                },
                k / d,
            );
        }
    }
    unreachable!("d = k always qualifies")
}

pub fn divisor_count(mu: u64) -> u64 {
    assert!(mu >= 1, "divisor count of zero");
    let mut count = 0;
    let mut d = 1;
    while d * d <= mu {
        if mu.is_multiple_of(d) {
            count += if d * d == mu { 1 } else { 2 };
        }
        d += 1;
    }
    count
}

/// Standard form of a hyperbolic element: the cyclically reduced word rotated
/// to begin with `b`, read as exponents.
pub fn to_f2(w: &ModularWord) -> Result<F2Word, WordError> {
    let reduced = w.cyclically_reduced();
    if reduced.len() < 2 {
        return Err(WordError::NoStandardForm(w.to_string()));
    }
    Ok(F2Word {
        exponents: exponents_from_b(&reduced),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mw(s: &str) -> ModularWord {
        s.parse().unwrap()
    }

    fn f2(s: &str) -> F2Word {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert!(mw("bb").is_identity());
        assert!(mw("ccc").is_identity());
        assert_eq!(
            mw("bccb").syllables(),
            &[Syllable::B, Syllable::C(2), Syllable::B]
        );
        assert_eq!(mw("cC").to_string(), "e");
        assert_eq!(mw("C").syllables(), &[Syllable::C(2)]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&ModularWord::identity()), ConjugacyClass::Identity);
        assert_eq!(classify(&mw("cbcc")), ConjugacyClass::Torsion(Torsion::B));
        assert_eq!(
            classify(&mw("bcbc")),
            ConjugacyClass::Hyperbolic {
                root: f2("1"),
                mu: 2
            }
        );
        assert_eq!(
            classify(&mw("ccbcc")),
            ConjugacyClass::Hyperbolic {
                root: f2("1"),
                mu: 1
            }
        );
        assert_eq!(
            classify(&mw("bcbcbc")),
            ConjugacyClass::Hyperbolic {
                root: f2("1"),
                mu: 3
            }
        );
        assert_eq!(
            classify(&mw("bccbc")),
            ConjugacyClass::Hyperbolic {
                root: f2("1,2"),
                mu: 1
            }
        );
        assert_eq!(classify(&mw("c")), ConjugacyClass::Torsion(Torsion::C));
        assert_eq!(classify(&mw("cc")), ConjugacyClass::Torsion(Torsion::C2));
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(&f2("1,2")), (f2("1,2"), 1));
        assert_eq!(primitive_root(&f2("1,1")), (f2("1"), 2));
        assert_eq!(primitive_root(&f2("1,2,1,2,1,2")), (f2("1,2"), 3));
        assert_eq!(primitive_root(&f2("1,2,1")), (f2("1,2,1"), 1));
    }

    #[test]
    fn divisor_count_examples() {
        assert_eq!(divisor_count(1), 1);
        assert_eq!(divisor_count(6), 4);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(divisor_count(49), 3);
    }

    #[test]
    fn to_f2_examples() {
        assert_eq!(to_f2(&mw("bc")).unwrap(), f2("1"));
        assert_eq!(to_f2(&mw("bccbc")).unwrap(), f2("2,1"));
        assert!(matches!(
            to_f2(&mw("bb")),
            Err(WordError::NoStandardForm(_))
        ));
        assert_eq!(to_f2(&mw("cbcb")).unwrap(), f2("1,1"));
    }

    #[test]
    fn f2_parsing() {
        assert_eq!(f2("1, 2,1").exponents(), &[1, 2, 1]);
        assert_eq!("".parse::<F2Word>(), Err(WordError::Syntax(String::new())));
        assert_eq!("1,3".parse::<F2Word>(), Err(WordError::BadExponent(3)));
        assert_eq!(f2("2,1,1").to_string(), "2,1,1");
        assert_eq!(F2Word::all_with_syllables(3).len(), 8);
    }

    #[test]
    fn letter_lengths() {
        assert_eq!(mw("bccbc").letter_length(), 5);
        assert_eq!(f2("1,2").letter_length(), 5);
        assert_eq!(f2("1,2").to_modular(), mw("bcbcc"));
    }

    fn letters() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(
            prop_oneof![Just(Letter::B), Just(Letter::C), Just(Letter::CInv)],
            0..16,
        )
    }

    fn letters_to_string(ls: &[Letter]) -> String {
        ls.iter()
            .map(|l| match l {
                Letter::B => 'b',
                Letter::C => 'c',
                Letter::CInv => 'C',
            })
            .collect()
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(ls in letters()) {
            let w = normalize(&ls);
            let again: ModularWord = w.to_string().parse().unwrap();
            prop_assert_eq!(&again, &w);
            let s = w.syllables();
            for pair in s.windows(2) {
                let same_kind = matches!(
                    (pair[0], pair[1]),
                    (Syllable::B, Syllable::B) | (Syllable::C(_), Syllable::C(_))
                );
                prop_assert!(!same_kind);
            }
        }

        #[test]
        fn classify_is_conjugation_invariant(ls in letters(), gs in prop::collection::vec(
            prop_oneof![Just(Letter::B), Just(Letter::C), Just(Letter::CInv)], 0..=8)) {
            let w = normalize(&ls);
            let g = normalize(&gs);
            let conj = g.multiply(&w).multiply(&g.inverse());
            prop_assert_eq!(classify(&conj), classify(&w), "w = {}, g = {}", letters_to_string(&ls), g);
        }

        #[test]
        fn primitive_root_round_trips(exps in prop::collection::vec(1u8..=2, 1..12)) {
            let w = F2Word::new(exps).unwrap();
            let (root, mu) = primitive_root(&w);
            prop_assert_eq!(root.pow(mu), w);
            let (_, inner) = primitive_root(&root);
            prop_assert_eq!(inner, 1);
        }

        #[test]
        fn hyperbolic_roots_are_primitive(exps in prop::collection::vec(1u8..=2, 1..10), mu in 1usize..4) {
            let w = F2Word::new(exps).unwrap().pow(mu);
            if let ConjugacyClass::Hyperbolic { root, mu: m } = classify(&w.to_modular()) {
                prop_assert!(root.is_primitive());
                prop_assert_eq!(root.syllable_count() * m, w.syllable_count());
                prop_assert!(m % mu == 0);
            } else {
                prop_assert!(false, "standard-form word must be hyperbolic");
            }
        }
    }
}
