//! Train/test splitting, outcome-annotated classification reports,
//! confusion matrices, and one-vs-rest ROC/AUC.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classifier::InstanceModel;
use crate::error::{Error, Result};
use crate::lexicon::{Language, Lexicon, WordRecord};
use crate::num::{real_usize, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<WordRecord>,
    pub test: Vec<WordRecord>,
    pub warnings: Vec<String>,
}

/// Stratified split: a seeded shuffle per language, taking
/// round(count * test_fraction) records as test. Languages with fewer
/// than two records go entirely to train with a warning.
pub fn split(lexicon: &Lexicon, test_fraction: f64, seed: u64) -> Result<Split> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParam(format!(
            "test_fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut warnings = Vec::new();
    let mut test_idx: HashSet<usize> = HashSet::new();
    for lang in Language::ALL {
        let mut idx: Vec<usize> = lexicon
            .records()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.language == lang)
            .map(|(i, _)| i)
            .collect();
        if idx.is_empty() {
            continue;
        }
        if idx.len() < 2 {
            warnings.push(format!(
                "language {lang} has fewer than 2 records; all kept in train"
            ));
            continue;
        }
        idx.shuffle(&mut rng);
        let take = (idx.len() as f64 * test_fraction).round() as usize;
        test_idx.extend(idx.into_iter().take(take));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, r) in lexicon.records().iter().enumerate() {
        if test_idx.contains(&i) {
            test.push(r.clone());
        } else {
            train.push(r.clone());
        }
    }
    Ok(Split { train, test, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Correct,
    Misclassified,
    /// Wrong language, but the surface also exists under the predicted
    /// language in the lexicon.
    Common,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Correct => "correct",
            Outcome::Misclassified => "misclassified",
            Outcome::Common => "common",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRow {
    pub word: String,
    pub meaning: Option<String>,
    pub original: Language,
    pub predicted: Language,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
}

/// Square confusion matrix over all eight languages, indexed by
/// position in `Language::ALL` (rows = truth, columns = prediction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix(pub [[usize; 8]; 8]);

impl ConfusionMatrix {
    fn index(lang: Language) -> usize {
        Language::ALL.iter().position(|&l| l == lang).unwrap()
    }

    pub fn get(&self, truth: Language, predicted: Language) -> usize {
        self.0[Self::index(truth)][Self::index(predicted)]
    }

    pub fn total(&self) -> usize {
        self.0.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..8).map(|i| self.0[i][i]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<F = f64> {
    pub accuracy: f64,
    pub per_class: BTreeMap<Language, ClassMetrics>,
    pub confusion: ConfusionMatrix,
    pub outcomes: Vec<OutcomeRow>,
    /// Score maps per test record, kept for downstream ROC building.
    pub score_maps: Vec<BTreeMap<Language, F>>,
    pub truths: Vec<Language>,
}

fn classify_outcome(
    predicted: Language,
    original: Language,
    surface: &str,
    shared: &BTreeMap<String, BTreeSet<Language>>,
) -> Outcome {
    if predicted == original {
        Outcome::Correct
    } else if shared
        .get(surface)
        .is_some_and(|langs| langs.contains(&predicted))
    {
        Outcome::Common
    } else {
        Outcome::Misclassified
    }
}

/// Classify every test record and assemble accuracy, per-class
/// precision/recall, the confusion matrix, and the outcome rows.
pub fn evaluate<F: Real>(
    model: &InstanceModel<F>,
    test: &[WordRecord],
    shared: &BTreeMap<String, BTreeSet<Language>>,
) -> Result<EvalReport<F>> {
    if test.is_empty() {
        return Err(Error::Validation("test set is empty".to_string()));
    }
    let mut confusion = ConfusionMatrix([[0; 8]; 8]);
    let mut outcomes = Vec::with_capacity(test.len());
    let mut score_maps = Vec::with_capacity(test.len());
    let mut truths = Vec::with_capacity(test.len());
    for record in test {
        let prediction = model.predict(record)?;
        let predicted = prediction.language;
        confusion.0[ConfusionMatrix::index(record.language)][ConfusionMatrix::index(predicted)] +=
            1;
        outcomes.push(OutcomeRow {
            word: record.surface.clone(),
            meaning: record.meaning.clone(),
            original: record.language,
            predicted,
            outcome: classify_outcome(predicted, record.language, &record.surface, shared),
        });
        score_maps.push(prediction.scores);
        truths.push(record.language);
    }
    let accuracy = confusion.trace() as f64 / confusion.total() as f64;
    let mut per_class = BTreeMap::new();
    for lang in Language::ALL {
        let i = ConfusionMatrix::index(lang);
        let tp = confusion.0[i][i];
        let row_sum: usize = confusion.0[i].iter().sum();
        let col_sum: usize = (0..8).map(|r| confusion.0[r][i]).sum();
        if row_sum == 0 && col_sum == 0 {
            continue;
        }
        per_class.insert(
            lang,
            ClassMetrics {
                precision: if col_sum == 0 { 0.0 } else { tp as f64 / col_sum as f64 },
                recall: if row_sum == 0 { 0.0 } else { tp as f64 / row_sum as f64 },
            },
        );
    }
    Ok(EvalReport {
        accuracy,
        per_class,
        confusion,
        outcomes,
        score_maps,
        truths,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint<F = f64> {
    pub threshold: F,
    pub fpr: F,
    pub tpr: F,
}

/// One-vs-rest ROC curve for a single language, with trapezoidal AUC.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve<F = f64> {
    pub class: Language,
    pub points: Vec<RocPoint<F>>,
    pub auc: F,
}

/// Sweep thresholds over the distinct scores (descending, with an
/// infinity sentinel); a record is predicted positive iff its score is
/// at or above the threshold.
pub fn roc_one_vs_rest<F: Real>(
    score_maps: &[BTreeMap<Language, F>],
    truths: &[Language],
    class: Language,
) -> Result<RocCurve<F>> {
    assert_eq!(score_maps.len(), truths.len());
    let scores: Vec<F> = score_maps
        .iter()
        .map(|m| m.get(&class).copied().unwrap_or_else(F::zero))
        .collect();
    let positives: Vec<bool> = truths.iter().map(|&t| t == class).collect();
    let pos = positives.iter().filter(|&&p| p).count();
    let neg = positives.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::UndefinedCurve {
            class: class.name().to_string(),
        });
    }
    let mut thresholds: Vec<F> = scores.clone();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();
    thresholds.insert(0, F::infinity());

    let pos_f = real_usize::<F>(pos);
    let neg_f = real_usize::<F>(neg);
    let mut points = Vec::with_capacity(thresholds.len());
    for t in thresholds {
        let mut tp = 0;
        let mut fp = 0;
        for (s, &is_pos) in scores.iter().zip(&positives) {
            if *s >= t {
                if is_pos {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        points.push(RocPoint {
            threshold: t,
            fpr: real_usize::<F>(fp) / neg_f,
            tpr: real_usize::<F>(tp) / pos_f,
        });
    }
    let mut auc = F::zero();
    for w in points.windows(2) {
        let half = crate::num::real::<F>(0.5);
        auc = auc + (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) * half;
    }
    Ok(RocCurve { class, points, auc })
}

/// Build one curve per language present in the test set; languages
/// without both positives and negatives are skipped and reported.
pub fn roc_report<F: Real>(
    model: &InstanceModel<F>,
    test: &[WordRecord],
) -> Result<(Vec<RocCurve<F>>, Vec<Language>)> {
    let mut score_maps = Vec::with_capacity(test.len());
    let mut truths = Vec::with_capacity(test.len());
    for record in test {
        score_maps.push(model.predict(record)?.scores);
        truths.push(record.language);
    }
    curves_from_scores(&score_maps, &truths)
}

/// Curve-building half of `roc_report`, reusable when predictions are
/// already available.
pub fn curves_from_scores<F: Real>(
    score_maps: &[BTreeMap<Language, F>],
    truths: &[Language],
) -> Result<(Vec<RocCurve<F>>, Vec<Language>)> {
    let present: Vec<Language> = Language::ALL
        .into_iter()
        .filter(|l| truths.contains(l))
        .collect();
    let mut curves = Vec::new();
    let mut skipped = Vec::new();
    for class in present {
        match roc_one_vs_rest(score_maps, truths, class) {
            Ok(curve) => curves.push(curve),
            Err(Error::UndefinedCurve { .. }) => skipped.push(class),
            Err(e) => return Err(e),
        }
    }
    Ok((curves, skipped))
}
