//! Stage implementations behind the CLI subcommands. Every stage reads
//! and writes CSV files; all randomness is driven by the config seed so
//! identical inputs give byte-identical outputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use lingclass::classifier::{InstanceModel, KnnConfig};
use lingclass::clustering::{self, ClusterParams};
use lingclass::evaluation::{self, RocCurve};
use lingclass::lexicon::{self, Language, Lexicon, WordRecord};
use lingclass::metrics::{self, LdmConfig};
use lingclass::phonetics::{soundex_encode, soundex_vector, SoundexVector};

use crate::config::PipelineConfig;

pub type StageResult<T> = Result<T, String>;

fn read_input(path: &Path) -> StageResult<String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_output(dir: &Path, name: &str, content: &str) -> StageResult<()> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Load a lexicon, detecting the shape from the header: a `surface`
/// column means the long shape, otherwise wide.
pub fn load_lexicon(path: &Path) -> StageResult<Lexicon> {
    let text = read_input(path)?;
    let header = text.lines().next().unwrap_or("");
    let is_long = header
        .split(',')
        .any(|h| h.trim().to_lowercase() == "surface");
    let result = if is_long {
        lexicon::ingest_long(&text)
    } else {
        lexicon::ingest_wide(&text)
    };
    result.map_err(|e| e.to_string())
}

fn knn_config(cfg: &PipelineConfig) -> KnnConfig {
    KnnConfig {
        k: cfg.k,
        ldm: LdmConfig {
            use_meaning: cfg.use_meaning,
            jaccard_threshold: cfg.jaccard_threshold,
            soundex_threshold: cfg.soundex_threshold,
            edge_threshold: cfg.edge_threshold,
        },
    }
}

fn shared_index<'a>(
    records: impl Iterator<Item = &'a WordRecord>,
) -> BTreeMap<String, BTreeSet<Language>> {
    let mut map: BTreeMap<String, BTreeSet<Language>> = BTreeMap::new();
    for r in records {
        map.entry(r.surface.clone()).or_default().insert(r.language);
    }
    map.retain(|_, langs| langs.len() >= 2);
    map
}

fn records_csv(records: &[WordRecord]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["id", "concept_id", "language", "surface", "meaning", "category"])
        .unwrap();
    for r in records {
        wtr.write_record([
            r.id.as_str(),
            r.concept_id.as_str(),
            r.language.name(),
            r.surface.as_str(),
            r.meaning.as_deref().unwrap_or(""),
            r.category.name(),
        ])
        .unwrap();
    }
    String::from_utf8(wtr.into_inner().unwrap()).unwrap()
}

pub fn save_model(model: &InstanceModel, dir: &Path, cfg: &PipelineConfig) -> StageResult<()> {
    let records: Vec<WordRecord> = model.instances().iter().map(|(r, _)| r.clone()).collect();
    write_output(dir, "model.csv", &records_csv(&records))?;
    write_output(dir, "model.config", &cfg.to_flat())
}

pub fn load_model(dir: &Path) -> StageResult<(InstanceModel, PipelineConfig)> {
    let cfg = PipelineConfig::from_file(&dir.join("model.config"))?;
    cfg.validate()?;
    let lex = load_lexicon(&dir.join("model.csv"))?;
    let model = InstanceModel::fit(lex.records().to_vec(), knn_config(&cfg))
        .map_err(|e| e.to_string())?;
    Ok((model, cfg))
}

pub fn cmd_ingest(input: &Path, out: &Path) -> StageResult<()> {
    let lex = load_lexicon(input)?;
    write_output(out, "lexicon.csv", &lexicon::export_long(&lex))
}

pub fn cmd_encode(input: &Path, out: &Path) -> StageResult<()> {
    let lex = load_lexicon(input)?;
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["id", "surface", "soundex", "vector0", "vector1", "vector2", "vector3"])
        .unwrap();
    for r in lex.records() {
        let code = soundex_encode(&r.surface)
            .map_err(|_| format!("cannot encode {:?} ({})", r.surface, r.id))?;
        let v: SoundexVector = soundex_vector(code);
        wtr.write_record([
            r.id.as_str(),
            r.surface.as_str(),
            code.as_str(),
            &v.0[0].to_string(),
            &v.0[1].to_string(),
            &v.0[2].to_string(),
            &v.0[3].to_string(),
        ])
        .unwrap();
    }
    write_output(out, "encoded.csv", &String::from_utf8(wtr.into_inner().unwrap()).unwrap())
}

const SWEEP_THRESHOLDS: [f64; 3] = [0.2, 0.4, 0.5];

pub fn cmd_jaccard_sweep(input: &Path, out: &Path) -> StageResult<()> {
    let lex = load_lexicon(input)?;
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["a_id", "b_id", "jaccard", "pass_0.2", "pass_0.4", "pass_0.5"])
        .unwrap();
    let records = lex.records();
    for i in 0..records.len() {
        for j in i + 1..records.len() {
            let score: f64 = metrics::jaccard_bigram(&records[i].surface, &records[j].surface);
            let passes = SWEEP_THRESHOLDS.map(|t| (score >= t).to_string());
            wtr.write_record([
                records[i].id.as_str(),
                records[j].id.as_str(),
                &score.to_string(),
                &passes[0],
                &passes[1],
                &passes[2],
            ])
            .unwrap();
        }
    }
    write_output(out, "jaccard_sweep.csv", &String::from_utf8(wtr.into_inner().unwrap()).unwrap())
}

fn cluster_csvs(lex: &Lexicon, cfg: &PipelineConfig) -> StageResult<(String, String)> {
    let params = ClusterParams {
        eps: cfg.eps,
        min_samples: cfg.min_samples,
    };
    let report = clustering::cluster_lexicon(lex, &params, cfg.edge_threshold)
        .map_err(|e| e.to_string())?;
    let mut clusters = csv::Writer::from_writer(Vec::new());
    clusters
        .write_record(["cluster_id", "label", "short_code", "size", "coefficient"])
        .unwrap();
    for row in &report.rows {
        clusters
            .write_record([
                &row.cluster_id.to_string(),
                &row.label.display(),
                &row.label.short_code,
                &row.size.to_string(),
                &row.coefficient.to_string(),
            ])
            .unwrap();
    }
    let mut members = csv::Writer::from_writer(Vec::new());
    members.write_record(["record_id", "cluster_id"]).unwrap();
    for (i, label) in report.assignment.labels.iter().enumerate() {
        let cluster = label.map_or(-1i64, |c| c as i64);
        members
            .write_record([lex.records()[i].id.as_str(), &cluster.to_string()])
            .unwrap();
    }
    Ok((
        String::from_utf8(clusters.into_inner().unwrap()).unwrap(),
        String::from_utf8(members.into_inner().unwrap()).unwrap(),
    ))
}

pub fn cmd_cluster(input: &Path, out: &Path, cfg: &PipelineConfig) -> StageResult<()> {
    let lex = load_lexicon(input)?;
    let (clusters, members) = cluster_csvs(&lex, cfg)?;
    write_output(out, "clusters.csv", &clusters)?;
    write_output(out, "members.csv", &members)
}

/// Word-graph edge density per language plus the whole lexicon.
pub fn cmd_coeff(input: &Path, out: &Path, cfg: &PipelineConfig) -> StageResult<()> {
    let lex = load_lexicon(input)?;
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["scope", "n", "edges", "coefficient"]).unwrap();
    let mut emit = |scope: &str, members: Vec<&WordRecord>| {
        let graph = clustering::build_word_graph(&members, cfg.edge_threshold);
        let coeff: f64 = clustering::clustering_coefficient(&graph);
        wtr.write_record([
            scope,
            &graph.n.to_string(),
            &graph.edges.len().to_string(),
            &coeff.to_string(),
        ])
        .unwrap();
    };
    emit("all", lex.records().iter().collect());
    for lang in Language::ALL {
        let members: Vec<&WordRecord> = lex
            .records()
            .iter()
            .filter(|r| r.language == lang)
            .collect();
        if !members.is_empty() {
            emit(lang.name(), members);
        }
    }
    write_output(out, "coeff.csv", &String::from_utf8(wtr.into_inner().unwrap()).unwrap())
}

pub fn cmd_split(input: &Path, out: &Path, cfg: &PipelineConfig) -> StageResult<()> {
    let lex = load_lexicon(input)?;
    let split = evaluation::split(&lex, cfg.test_fraction, cfg.seed).map_err(|e| e.to_string())?;
    for warning in &split.warnings {
        eprintln!("warning: {warning}");
    }
    write_output(out, "train.csv", &records_csv(&split.train))?;
    write_output(out, "test.csv", &records_csv(&split.test))
}

pub fn cmd_train(input: &Path, out: &Path, cfg: &PipelineConfig) -> StageResult<()> {
    let lex = load_lexicon(input)?;
    let model =
        InstanceModel::fit(lex.records().to_vec(), knn_config(cfg)).map_err(|e| e.to_string())?;
    save_model(&model, out, cfg)
}

pub fn cmd_classify(model_dir: &Path, input: &Path, out: &Path) -> StageResult<()> {
    let (model, _) = load_model(model_dir)?;
    let queries = load_lexicon(input)?;
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "id".to_string(),
        "surface".to_string(),
        "predicted".to_string(),
        "score".to_string(),
    ];
    header.extend(
        Language::ALL
            .iter()
            .map(|l| format!("score_{}", l.name().to_lowercase())),
    );
    wtr.write_record(&header).unwrap();
    for q in queries.records() {
        let p = model.predict(q).map_err(|e| e.to_string())?;
        if p.clamped {
            eprintln!("warning: k clamped to instance count for {}", q.id);
        }
        let mut row = vec![
            q.id.clone(),
            q.surface.clone(),
            p.language.name().to_string(),
            p.scores[&p.language].to_string(),
        ];
        for lang in Language::ALL {
            row.push(p.scores.get(&lang).copied().unwrap_or(0.0).to_string());
        }
        wtr.write_record(&row).unwrap();
    }
    write_output(out, "predictions.csv", &String::from_utf8(wtr.into_inner().unwrap()).unwrap())
}

fn history_csv(history: &[lingclass::classifier::IterationStats]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["iter", "pool_size", "accuracy"]).unwrap();
    for (i, stats) in history.iter().enumerate() {
        wtr.write_record([
            &(i + 1).to_string(),
            &stats.pool_size.to_string(),
            &stats.accuracy.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(wtr.into_inner().unwrap()).unwrap()
}

pub fn cmd_selftrain(
    model_dir: &Path,
    pool_path: &Path,
    out: &Path,
    cfg: &PipelineConfig,
) -> StageResult<()> {
    let (model, model_cfg) = load_model(model_dir)?;
    let pool = load_lexicon(pool_path)?;
    let (trained, history) = model
        .self_train(pool.records().to_vec(), cfg.max_iters, cfg.tol)
        .map_err(|e| e.to_string())?;
    write_output(out, "history.csv", &history_csv(&history))?;
    save_model(&trained, out, &model_cfg)
}

fn confusion_csv(report: &lingclass::EvalReport) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["language".to_string()];
    header.extend(Language::ALL.iter().map(|l| l.name().to_string()));
    wtr.write_record(&header).unwrap();
    for (i, truth) in Language::ALL.iter().enumerate() {
        let mut row = vec![truth.name().to_string()];
        row.extend(report.confusion.0[i].iter().map(usize::to_string));
        wtr.write_record(&row).unwrap();
    }
    String::from_utf8(wtr.into_inner().unwrap()).unwrap()
}

fn outcomes_csv(report: &lingclass::EvalReport) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["word", "meaning", "original", "predicted", "outcome"])
        .unwrap();
    for row in &report.outcomes {
        wtr.write_record([
            row.word.as_str(),
            row.meaning.as_deref().unwrap_or(""),
            row.original.name(),
            row.predicted.name(),
            row.outcome.name(),
        ])
        .unwrap();
    }
    String::from_utf8(wtr.into_inner().unwrap()).unwrap()
}

fn summary_csv(report: &lingclass::EvalReport, curves: &[RocCurve]) -> String {
    let auc_by_class: BTreeMap<Language, f64> =
        curves.iter().map(|c| (c.class, c.auc)).collect();
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["language", "auc", "precision", "recall"]).unwrap();
    for lang in Language::ALL {
        let Some(metrics) = report.per_class.get(&lang) else {
            continue;
        };
        let auc = auc_by_class
            .get(&lang)
            .map(|a| a.to_string())
            .unwrap_or_default();
        wtr.write_record([
            lang.name(),
            &auc,
            &metrics.precision.to_string(),
            &metrics.recall.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(wtr.into_inner().unwrap()).unwrap()
}

fn roc_csv(curves: &[RocCurve], skipped: &[Language]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["class", "threshold", "fpr", "tpr"]).unwrap();
    for curve in curves {
        for p in &curve.points {
            wtr.write_record([
                curve.class.name(),
                &p.threshold.to_string(),
                &p.fpr.to_string(),
                &p.tpr.to_string(),
            ])
            .unwrap();
        }
    }
    for lang in skipped {
        wtr.write_record([lang.name(), "skipped", "", ""]).unwrap();
    }
    String::from_utf8(wtr.into_inner().unwrap()).unwrap()
}

fn eval_outputs(
    model: &InstanceModel,
    test: &[WordRecord],
    shared: &BTreeMap<String, BTreeSet<Language>>,
) -> StageResult<(lingclass::EvalReport, Vec<RocCurve>, Vec<Language>)> {
    let report = evaluation::evaluate(model, test, shared).map_err(|e| e.to_string())?;
    let (curves, skipped) = evaluation::curves_from_scores(&report.score_maps, &report.truths)
        .map_err(|e| e.to_string())?;
    Ok((report, curves, skipped))
}

pub fn cmd_evaluate(model_dir: &Path, input: &Path, out: &Path) -> StageResult<()> {
    let (model, _) = load_model(model_dir)?;
    let test = load_lexicon(input)?;
    let shared = shared_index(
        model
            .instances()
            .iter()
            .map(|(r, _)| r)
            .chain(test.records()),
    );
    let (report, curves, _) = eval_outputs(&model, test.records(), &shared)?;
    write_output(out, "outcomes.csv", &outcomes_csv(&report))?;
    write_output(out, "confusion.csv", &confusion_csv(&report))?;
    write_output(out, "summary.csv", &summary_csv(&report, &curves))
}

pub fn cmd_roc(model_dir: &Path, input: &Path, out: &Path) -> StageResult<()> {
    let (model, _) = load_model(model_dir)?;
    let test = load_lexicon(input)?;
    let (curves, skipped) =
        evaluation::roc_report(&model, test.records()).map_err(|e| e.to_string())?;
    for lang in &skipped {
        eprintln!("warning: class {lang} skipped (needs a positive and a negative)");
    }
    write_output(out, "roc.csv", &roc_csv(&curves, &skipped))
}

/// Full pipeline: ingest, encode, cluster, split, train on part of the
/// training half, self-train on the rest, evaluate held-out, roc.
pub fn run_pipeline(
    input: &Path,
    out: &Path,
    cfg: &PipelineConfig,
) -> Result<(), (&'static str, String)> {
    let stage = |name: &'static str, e: String| (name, e);

    let lex = load_lexicon(input).map_err(|e| stage("ingest", e))?;
    write_output(out, "lexicon.csv", &lexicon::export_long(&lex)).map_err(|e| stage("pipeline", e))?;
    cmd_encode(&out.join("lexicon.csv"), out).map_err(|e| stage("encode", e))?;

    let (clusters, members) = cluster_csvs(&lex, cfg).map_err(|e| stage("cluster", e))?;
    write_output(out, "clusters.csv", &clusters).map_err(|e| stage("pipeline", e))?;
    write_output(out, "members.csv", &members).map_err(|e| stage("pipeline", e))?;

    let split =
        evaluation::split(&lex, cfg.test_fraction, cfg.seed).map_err(|e| stage("split", e.to_string()))?;
    write_output(out, "train.csv", &records_csv(&split.train)).map_err(|e| stage("pipeline", e))?;
    write_output(out, "test.csv", &records_csv(&split.test)).map_err(|e| stage("pipeline", e))?;

    // carve a self-training pool out of the training half
    let train_lex =
        Lexicon::new(split.train.clone()).map_err(|e| stage("split", e.to_string()))?;
    let inner = evaluation::split(&train_lex, cfg.test_fraction, cfg.seed.wrapping_add(1))
        .map_err(|e| stage("split", e.to_string()))?;
    let model = InstanceModel::fit(inner.train, knn_config(cfg))
        .map_err(|e| stage("train", e.to_string()))?;
    let (model, history) = model
        .self_train(inner.test, cfg.max_iters, cfg.tol)
        .map_err(|e| stage("selftrain", e.to_string()))?;
    write_output(out, "history.csv", &history_csv(&history)).map_err(|e| stage("pipeline", e))?;
    save_model(&model, out, cfg).map_err(|e| stage("pipeline", e))?;

    let shared = shared_index(lex.records().iter());
    let (report, curves, skipped) =
        eval_outputs(&model, &split.test, &shared).map_err(|e| stage("evaluate", e))?;
    write_output(out, "outcomes.csv", &outcomes_csv(&report)).map_err(|e| stage("pipeline", e))?;
    write_output(out, "confusion.csv", &confusion_csv(&report)).map_err(|e| stage("pipeline", e))?;
    write_output(out, "summary.csv", &summary_csv(&report, &curves)).map_err(|e| stage("pipeline", e))?;
    write_output(out, "roc.csv", &roc_csv(&curves, &skipped)).map_err(|e| stage("pipeline", e))?;
    println!("held-out accuracy: {}", report.accuracy);
    Ok(())
}
