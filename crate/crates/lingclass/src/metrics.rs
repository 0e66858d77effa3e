//! Distance and similarity primitives: Levenshtein, padded-bigram
//! Jaccard, Euclidean, and the composite linguistic distance metric
//! used by the classifier.

use std::collections::BTreeSet;

use unicode_normalization::UnicodeNormalization;

use crate::lexicon::WordRecord;
use crate::num::{real_usize, Real};
use crate::phonetics::SoundexVector;

/// Knobs of the composite distance and of the threshold-based reports.
#[derive(Debug, Clone, PartialEq)]
pub struct LdmConfig<F = f64> {
    /// Add a second Levenshtein term over glosses when both are present.
    pub use_meaning: bool,
    pub jaccard_threshold: F,
    pub soundex_threshold: F,
    pub edge_threshold: usize,
}

impl<F: Real> Default for LdmConfig<F> {
    fn default() -> Self {
        LdmConfig {
            use_meaning: true,
            jaccard_threshold: crate::num::real(0.4),
            soundex_threshold: crate::num::real(0.8),
            edge_threshold: 2,
        }
    }
}

/// Edit distance over Unicode scalar values after NFC normalization.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.nfc().collect();
    let b: Vec<char> = b.nfc().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn bigrams(s: &str) -> BTreeSet<(char, char)> {
    let padded: Vec<char> = std::iter::once('\u{2}')
        .chain(s.nfc())
        .chain(std::iter::once('\u{3}'))
        .collect();
    padded.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Jaccard index over character bigrams of the sentinel-padded string.
/// Two empty strings share the single sentinel bigram, giving 1.
pub fn jaccard_bigram<F: Real>(a: &str, b: &str) -> F {
    let ba = bigrams(a);
    let bb = bigrams(b);
    let inter = ba.intersection(&bb).count();
    let union = ba.len() + bb.len() - inter;
    if union == 0 {
        return F::one();
    }
    real_usize::<F>(inter) / real_usize::<F>(union)
}

pub fn euclidean<F: Real>(u: &SoundexVector<F>, v: &SoundexVector<F>) -> F {
    u.0.iter()
        .zip(v.0.iter())
        .fold(F::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
        .sqrt()
}

/// Composite linguistic distance: the square root of the surface
/// Levenshtein, plus the gloss Levenshtein when enabled and both
/// glosses are present, plus the Euclidean distance between the
/// soundex embeddings.
pub fn ldm<F: Real>(
    p: &WordRecord,
    pv: &SoundexVector<F>,
    q: &WordRecord,
    qv: &SoundexVector<F>,
    cfg: &LdmConfig<F>,
) -> F {
    let mut sum = real_usize::<F>(levenshtein(&p.surface, &q.surface));
    if cfg.use_meaning {
        if let (Some(pm), Some(qm)) = (&p.meaning, &q.meaning) {
            sum = sum + real_usize::<F>(levenshtein(pm, qm));
        }
    }
    (sum + euclidean(pv, qv)).sqrt()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::lexicon::{Category, Language};
    use crate::phonetics::{soundex_encode, soundex_vector};

    #[test]
    fn levenshtein_basics() {
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("upari", "upari"), 0);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("abc", ""), 3);
    }

    #[test]
    fn levenshtein_nfc_equivalence() {
        // precomposed vs combining-mark spellings of "mēle"
        assert_eq!(levenshtein("m\u{113}le", "me\u{304}le"), 0);
    }

    #[test]
    fn jaccard_values() {
        assert_eq!(jaccard_bigram::<f64>("night", "night"), 1.0);
        assert_eq!(jaccard_bigram::<f64>("ab", "xy"), 0.0);
        let j = jaccard_bigram::<f64>("night", "nacht");
        assert!((j - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(jaccard_bigram::<f64>("", ""), 1.0);
    }

    #[test]
    fn euclidean_values() {
        let z = SoundexVector([0.0, 0.0, 0.0, 0.0]);
        let e1 = SoundexVector([1.0, 0.0, 0.0, 0.0]);
        let ones = SoundexVector([1.0, 1.0, 1.0, 1.0]);
        assert_eq!(euclidean(&z, &z), 0.0);
        assert_eq!(euclidean(&z, &e1), 1.0);
        assert_eq!(euclidean(&z, &ones), 2.0);
    }

    fn record(surface: &str, meaning: Option<&str>) -> WordRecord {
        WordRecord {
            id: surface.to_string(),
            concept_id: "c".to_string(),
            language: Language::Hindi,
            surface: surface.to_string(),
            meaning: meaning.map(str::to_string),
            category: Category::Miscellaneous,
        }
    }

    fn vec_of(surface: &str) -> SoundexVector<f64> {
        soundex_vector(soundex_encode(surface).unwrap())
    }

    #[test]
    fn ldm_identical_records() {
        let p = record("oopar", Some("above"));
        let v = vec_of("oopar");
        assert_eq!(ldm(&p, &v, &p, &v, &LdmConfig::default()), 0.0);
    }

    #[test]
    fn ldm_known_sum() {
        // surfaces at Levenshtein 3, no glosses, embeddings at distance 1
        let p = record("abc", None);
        let q = record("xyz", None);
        assert_eq!(levenshtein(&p.surface, &q.surface), 3);
        let pv = SoundexVector([0.0, 0.0, 0.0, 0.0]);
        let qv = SoundexVector([1.0, 0.0, 0.0, 0.0]);
        let d = ldm(&p, &pv, &q, &qv, &LdmConfig::default());
        assert_eq!(d, 2.0);
    }

    #[test]
    fn ldm_missing_gloss_contributes_zero() {
        let p = record("kala", Some("art"));
        let q = record("kalai", None);
        let (pv, qv) = (vec_of("kala"), vec_of("kalai"));
        let with = ldm(&p, &pv, &q, &qv, &LdmConfig::default());
        let without = ldm(
            &p,
            &pv,
            &record("kalai", Some("zzzzzz")),
            &qv,
            &LdmConfig {
                use_meaning: false,
                ..LdmConfig::default()
            },
        );
        assert_eq!(with, without);
    }

    proptest! {
        #[test]
        fn levenshtein_triangle(a in ".{0,12}", b in ".{0,12}", c in ".{0,12}") {
            let ab = levenshtein(&a, &b);
            let bc = levenshtein(&b, &c);
            let ac = levenshtein(&a, &c);
            prop_assert!(ac <= ab + bc);
            prop_assert_eq!(ab, levenshtein(&b, &a));
        }

        #[test]
        fn jaccard_symmetric_unit_range(a in "[a-z]{0,10}", b in "[a-z]{0,10}") {
            let j: f64 = jaccard_bigram(&a, &b);
            prop_assert!((0.0..=1.0).contains(&j));
            prop_assert_eq!(j, jaccard_bigram::<f64>(&b, &a));
        }
    }
}
