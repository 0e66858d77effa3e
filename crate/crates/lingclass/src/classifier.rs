//! Instance-based language classifier: a KNN model under the composite
//! linguistic distance, plus the iterative self-training loop that
//! absorbs correctly classified pool records.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lexicon::{Language, WordRecord};
use crate::metrics::{ldm, LdmConfig};
use crate::num::{real_usize, Real};
use crate::phonetics::{soundex_encode, soundex_vector, SoundexVector};

#[derive(Debug, Clone, PartialEq)]
pub struct KnnConfig<F = f64> {
    pub k: usize,
    pub ldm: LdmConfig<F>,
}

impl<F: Real> Default for KnnConfig<F> {
    fn default() -> Self {
        KnnConfig {
            k: 5,
            ldm: LdmConfig::default(),
        }
    }
}

/// The KNN "model": an immutable store of training records with
/// precomputed soundex embeddings. Self-training produces a new model
/// rather than mutating in place.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceModel<F = f64> {
    instances: Vec<(WordRecord, SoundexVector<F>)>,
    config: KnnConfig<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<F = f64> {
    pub language: Language,
    /// Vote fraction per language; sums to 1.
    pub scores: BTreeMap<Language, F>,
    pub neighbor_ids: Vec<String>,
    /// Set when k exceeded the instance count and was clamped.
    pub clamped: bool,
}

/// Per-iteration self-training record.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationStats {
    pub pool_size: usize,
    pub accuracy: f64,
}

impl<F: Real> InstanceModel<F> {
    /// Store the records with precomputed soundex embeddings. No other
    /// training computation happens; duplicates are kept.
    pub fn fit(records: Vec<WordRecord>, config: KnnConfig<F>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyTraining);
        }
        let mut instances = Vec::with_capacity(records.len());
        for r in records {
            let code = soundex_encode(&r.surface)
                .map_err(|_| Error::Encoding(format!("{} ({})", r.surface, r.id)))?;
            let vector = soundex_vector(code);
            instances.push((r, vector));
        }
        Ok(InstanceModel { instances, config })
    }

    pub fn instances(&self) -> &[(WordRecord, SoundexVector<F>)] {
        &self.instances
    }

    pub fn config(&self) -> &KnnConfig<F> {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Classify one record. Distance ties break by instance order; vote
    /// ties break by smaller mean neighbor distance, then by language
    /// name.
    pub fn predict(&self, query: &WordRecord) -> Result<Prediction<F>> {
        let code = soundex_encode(&query.surface)
            .map_err(|_| Error::Encoding(format!("{} ({})", query.surface, query.id)))?;
        let qv = soundex_vector(code);
        let mut distances: Vec<(F, usize)> = self
            .instances
            .iter()
            .enumerate()
            .map(|(i, (r, v))| (ldm(query, &qv, r, v, &self.config.ldm), i))
            .collect();
        distances.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let clamped = self.config.k > distances.len();
        let k = self.config.k.min(distances.len());
        let neighbors = &distances[..k];

        let mut votes: BTreeMap<Language, (usize, F)> = BTreeMap::new();
        for &(d, i) in neighbors {
            let entry = votes
                .entry(self.instances[i].0.language)
                .or_insert((0, F::zero()));
            entry.0 += 1;
            entry.1 = entry.1 + d;
        }
        let k_f = real_usize::<F>(k);
        let scores: BTreeMap<Language, F> = votes
            .iter()
            .map(|(&lang, &(count, _))| (lang, real_usize::<F>(count) / k_f))
            .collect();

        // argmax votes, then smaller mean distance, then name
        let mut ranked: Vec<(Language, usize, F)> = votes
            .into_iter()
            .map(|(lang, (count, total))| (lang, count, total / real_usize::<F>(count)))
            .collect();
        ranked.sort_by(|a, b| {
            b.1.cmp(&a.1)
                .then(a.2.partial_cmp(&b.2).unwrap())
                .then(a.0.name().cmp(b.0.name()))
        });
        let language = ranked[0].0;
        let neighbor_ids = neighbors
            .iter()
            .map(|&(_, i)| self.instances[i].0.id.clone())
            .collect();
        Ok(Prediction {
            language,
            scores,
            neighbor_ids,
            clamped,
        })
    }

    /// Iteratively absorb pool records whose prediction matches their
    /// ground-truth label. Stops when nothing moves, the pool empties,
    /// the accuracy delta drops below `tol`, or `max_iters` is reached.
    pub fn self_train(
        self,
        pool: Vec<WordRecord>,
        max_iters: usize,
        tol: f64,
    ) -> Result<(Self, Vec<IterationStats>)> {
        let mut model = self;
        let mut pool = pool;
        let mut history = Vec::new();
        let mut prev_accuracy: Option<f64> = None;
        for _ in 0..max_iters {
            if pool.is_empty() {
                break;
            }
            let pool_size = pool.len();
            let mut absorbed = Vec::new();
            let mut remaining = Vec::new();
            for record in pool {
                let correct = model.predict(&record)?.language == record.language;
                if correct {
                    absorbed.push(record);
                } else {
                    remaining.push(record);
                }
            }
            let accuracy = absorbed.len() as f64 / pool_size as f64;
            history.push(IterationStats { pool_size, accuracy });
            let moved = !absorbed.is_empty();
            if moved {
                let code_cache: Result<Vec<_>> = absorbed
                    .into_iter()
                    .map(|r| {
                        let code = soundex_encode(&r.surface)
                            .map_err(|_| Error::Encoding(r.id.clone()))?;
                        let v = soundex_vector(code);
                        Ok((r, v))
                    })
                    .collect();
                model.instances.extend(code_cache?);
            }
            pool = remaining;
            let converged = prev_accuracy
                .map(|p| (accuracy - p).abs() < tol)
                .unwrap_or(false);
            prev_accuracy = Some(accuracy);
            if !moved || converged {
                break;
            }
        }
        Ok((model, history))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Category;

    fn record(id: &str, language: Language, surface: &str, meaning: Option<&str>) -> WordRecord {
        WordRecord {
            id: id.to_string(),
            concept_id: id.to_string(),
            language,
            surface: surface.to_string(),
            meaning: meaning.map(str::to_string),
            category: Category::Miscellaneous,
        }
    }

    fn toy_records() -> Vec<WordRecord> {
        vec![
            record("h1", Language::Hindi, "oopar", Some("above")),
            record("h2", Language::Hindi, "upara", Some("above")),
            record("h3", Language::Hindi, "phir", Some("again")),
            record("t1", Language::Tamil, "kalai", Some("art")),
            record("t2", Language::Tamil, "vayatu", Some("age")),
            record("s1", Language::Sanskrit, "upari", Some("above")),
            record("s2", Language::Sanskrit, "kala", Some("art")),
        ]
    }

    #[test]
    fn fit_preserves_order_and_duplicates() {
        let dup = vec![
            record("a", Language::Hindi, "kala", None),
            record("b", Language::Hindi, "kala", None),
            record("c", Language::Hindi, "kala", None),
        ];
        let model: InstanceModel = InstanceModel::fit(dup, KnnConfig::default()).unwrap();
        assert_eq!(model.len(), 3);
        assert_eq!(model.instances()[0].0.id, "a");
    }

    #[test]
    fn fit_empty_errors() {
        assert!(matches!(
            InstanceModel::<f64>::fit(Vec::new(), KnnConfig::default()),
            Err(Error::EmptyTraining)
        ));
    }

    #[test]
    fn fit_is_deterministic() {
        let a: InstanceModel = InstanceModel::fit(toy_records(), KnnConfig::default()).unwrap();
        let b: InstanceModel = InstanceModel::fit(toy_records(), KnnConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_match_with_k1() {
        let cfg = KnnConfig { k: 1, ..KnnConfig::default() };
        let model: InstanceModel = InstanceModel::fit(toy_records(), cfg).unwrap();
        let p = model.predict(&record("q", Language::English, "oopar", Some("above"))).unwrap();
        assert_eq!(p.language, Language::Hindi);
        assert_eq!(p.scores[&Language::Hindi], 1.0);
        assert_eq!(p.neighbor_ids, vec!["h1".to_string()]);
    }

    #[test]
    fn majority_vote_fractions() {
        let cfg = KnnConfig { k: 3, ..KnnConfig::default() };
        let model: InstanceModel = InstanceModel::fit(
            vec![
                record("h1", Language::Hindi, "oopar", None),
                record("h2", Language::Hindi, "oopara", None),
                record("t1", Language::Tamil, "oopari", None),
                record("x1", Language::Telugu, "zzzzzzzz", None),
            ],
            cfg,
        )
        .unwrap();
        let p = model.predict(&record("q", Language::English, "oopar", None)).unwrap();
        assert_eq!(p.language, Language::Hindi);
        assert_eq!(p.scores[&Language::Hindi], 2.0 / 3.0);
        assert_eq!(p.scores[&Language::Tamil], 1.0 / 3.0);
        let total: f64 = p.scores.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn k_clamped_with_warning_flag() {
        let cfg = KnnConfig { k: 50, ..KnnConfig::default() };
        let model: InstanceModel = InstanceModel::fit(toy_records(), cfg).unwrap();
        let p = model.predict(&record("q", Language::English, "kala", None)).unwrap();
        assert!(p.clamped);
        assert_eq!(p.neighbor_ids.len(), 7);
    }

    #[test]
    fn predict_deterministic() {
        let model: InstanceModel =
            InstanceModel::fit(toy_records(), KnnConfig::default()).unwrap();
        let q = record("q", Language::English, "upar", None);
        assert_eq!(model.predict(&q).unwrap(), model.predict(&q).unwrap());
    }

    #[test]
    fn self_train_absorbs_all_correct_pool() {
        let cfg = KnnConfig { k: 1, ..KnnConfig::default() };
        let model: InstanceModel = InstanceModel::fit(toy_records(), cfg).unwrap();
        let pool = vec![
            record("p1", Language::Hindi, "oopar", Some("above")),
            record("p2", Language::Tamil, "kalai", Some("art")),
        ];
        let (trained, history) = model.self_train(pool, 10, 1e-4).unwrap();
        assert_eq!(history.len(), 1);
        assert_eq!(history[0].accuracy, 1.0);
        assert_eq!(trained.len(), 9);
    }

    #[test]
    fn self_train_empty_pool_is_noop() {
        let model: InstanceModel =
            InstanceModel::fit(toy_records(), KnnConfig::default()).unwrap();
        let before = model.clone();
        let (after, history) = model.self_train(Vec::new(), 10, 1e-4).unwrap();
        assert_eq!(after, before);
        assert!(history.is_empty());
    }

    #[test]
    fn self_train_adversarial_pool_terminates() {
        let cfg = KnnConfig { k: 1, ..KnnConfig::default() };
        let model: InstanceModel = InstanceModel::fit(toy_records(), cfg).unwrap();
        // surfaces identical to training words but labels permuted so no
        // vote can match
        let pool = vec![
            record("p1", Language::Telugu, "oopar", Some("above")),
            record("p2", Language::Punjabi, "kalai", Some("art")),
        ];
        let (after, history) = model.self_train(pool, 10, 1e-4).unwrap();
        assert_eq!(after.len(), 7);
        assert_eq!(history.len(), 1);
        assert_eq!(history[0].accuracy, 0.0);
    }
}
