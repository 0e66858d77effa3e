//! Data model and CSV ingestion for multilingual word lists.
//!
//! Two shapes are supported: the wide shape (one row per concept, one
//! column per language) and the long shape (one row per record), which
//! is the canonical internal form.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// The eight supported language labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Language {
    Sanskrit,
    Hindi,
    Punjabi,
    Marathi,
    Kannada,
    Tamil,
    Telugu,
    English,
}

impl Language {
    pub const ALL: [Language; 8] = [
        Language::Sanskrit,
        Language::Hindi,
        Language::Punjabi,
        Language::Marathi,
        Language::Kannada,
        Language::Tamil,
        Language::Telugu,
        Language::English,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Language::Sanskrit => "Sanskrit",
            Language::Hindi => "Hindi",
            Language::Punjabi => "Punjabi",
            Language::Marathi => "Marathi",
            Language::Kannada => "Kannada",
            Language::Tamil => "Tamil",
            Language::Telugu => "Telugu",
            Language::English => "English",
        }
    }

    pub fn parse(s: &str) -> Option<Language> {
        let lower = s.trim().to_lowercase();
        Language::ALL
            .into_iter()
            .find(|l| l.name().to_lowercase() == lower)
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Closed set of word categories; unknown strings are rejected at
/// ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Prepositions,
    Kinship,
    People,
    Pronouns,
    Number,
    Anatomy,
    Animals,
    Agriculture,
    BodilyFunctions,
    MentalFunctions,
    Nature,
    Directions,
    Fabrication,
    Motion,
    Time,
    Common,
    Adjective,
    Miscellaneous,
}

impl Category {
    pub const ALL: [Category; 18] = [
        Category::Prepositions,
        Category::Kinship,
        Category::People,
        Category::Pronouns,
        Category::Number,
        Category::Anatomy,
        Category::Animals,
        Category::Agriculture,
        Category::BodilyFunctions,
        Category::MentalFunctions,
        Category::Nature,
        Category::Directions,
        Category::Fabrication,
        Category::Motion,
        Category::Time,
        Category::Common,
        Category::Adjective,
        Category::Miscellaneous,
    ];

    /// Snake-case identifier used in CSV files.
    pub fn name(self) -> &'static str {
        match self {
            Category::Prepositions => "prepositions",
            Category::Kinship => "kinship",
            Category::People => "people",
            Category::Pronouns => "pronouns",
            Category::Number => "number",
            Category::Anatomy => "anatomy",
            Category::Animals => "animals",
            Category::Agriculture => "agriculture",
            Category::BodilyFunctions => "bodily_functions",
            Category::MentalFunctions => "mental_functions",
            Category::Nature => "nature",
            Category::Directions => "directions",
            Category::Fabrication => "fabrication",
            Category::Motion => "motion",
            Category::Time => "time",
            Category::Common => "common",
            Category::Adjective => "adjective",
            Category::Miscellaneous => "miscellaneous",
        }
    }

    /// Human-readable name, used for cluster labels.
    pub fn display_name(self) -> &'static str {
        match self {
            Category::Prepositions => "Prepositions",
            Category::Kinship => "Kinship",
            Category::People => "People",
            Category::Pronouns => "Pronouns",
            Category::Number => "Number",
            Category::Anatomy => "Anatomy",
            Category::Animals => "Animals",
            Category::Agriculture => "Agriculture",
            Category::BodilyFunctions => "Bodily Functions",
            Category::MentalFunctions => "Mental Functions",
            Category::Nature => "Nature",
            Category::Directions => "Directions",
            Category::Fabrication => "Fabrication",
            Category::Motion => "Motion",
            Category::Time => "Time",
            Category::Common => "Common",
            Category::Adjective => "Adjective",
            Category::Miscellaneous => "Miscellaneous",
        }
    }

    pub fn parse(s: &str) -> Result<Category> {
        let lower = s.trim().to_lowercase();
        Category::ALL
            .into_iter()
            .find(|c| c.name() == lower)
            .ok_or_else(|| Error::Schema(format!("unknown category {s:?}")))
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One word in one language.
#[derive(Debug, Clone, PartialEq)]
pub struct WordRecord {
    pub id: String,
    /// Groups translations of one concept across languages.
    pub concept_id: String,
    pub language: Language,
    /// Romanized surface form, NFC-normalized and lower-cased.
    pub surface: String,
    pub meaning: Option<String>,
    pub category: Category,
}

/// Immutable ordered collection of word records with a precomputed
/// shared-surface index.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    records: Vec<WordRecord>,
    shared_index: BTreeMap<String, BTreeSet<Language>>,
}

pub(crate) fn nfc_lower(s: &str) -> String {
    s.trim().nfc().collect::<String>().to_lowercase()
}

impl Lexicon {
    /// Validates record invariants and builds the shared-surface index.
    pub fn new(records: Vec<WordRecord>) -> Result<Lexicon> {
        let mut ids = HashSet::new();
        for r in &records {
            if r.surface.trim().is_empty() {
                return Err(Error::Validation(format!("record {}: empty surface", r.id)));
            }
            if !ids.insert(r.id.as_str()) {
                return Err(Error::Validation(format!("duplicate record id {}", r.id)));
            }
        }
        let mut by_surface: BTreeMap<String, BTreeSet<Language>> = BTreeMap::new();
        for r in &records {
            by_surface
                .entry(r.surface.clone())
                .or_default()
                .insert(r.language);
        }
        by_surface.retain(|_, langs| langs.len() >= 2);
        Ok(Lexicon {
            records,
            shared_index: by_surface,
        })
    }

    pub fn records(&self) -> &[WordRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn languages(&self) -> BTreeSet<Language> {
        self.records.iter().map(|r| r.language).collect()
    }

    /// Surfaces appearing under at least two languages.
    pub fn shared_words(&self) -> &BTreeMap<String, BTreeSet<Language>> {
        &self.shared_index
    }
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes())
}

fn parse_err(row: usize, e: &csv::Error) -> Error {
    Error::Parse {
        row,
        msg: e.to_string(),
    }
}

/// Ingest the wide paper shape: one row per concept with an `english`
/// column, one column per language, and optional `meaning` and
/// `category` columns. Empty cells become missing records; the concept
/// id is the lower-cased english cell.
pub fn ingest_wide(csv_text: &str) -> Result<Lexicon> {
    let mut rdr = csv_reader(csv_text);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, &e))?
        .clone();
    let mut english_col = None;
    let mut meaning_col = None;
    let mut category_col = None;
    let mut language_cols: Vec<(usize, Language)> = Vec::new();
    for (idx, h) in headers.iter().enumerate() {
        let key = h.trim().to_lowercase();
        match key.as_str() {
            "english" => {
                english_col = Some(idx);
                language_cols.push((idx, Language::English));
            }
            "meaning" => meaning_col = Some(idx),
            "category" => category_col = Some(idx),
            _ => match Language::parse(&key) {
                Some(lang) => language_cols.push((idx, lang)),
                None => {
                    return Err(Error::Schema(format!("unknown language column {h:?}")));
                }
            },
        }
    }
    let english_col =
        english_col.ok_or_else(|| Error::Schema("missing english column".to_string()))?;

    let mut records = Vec::new();
    let mut seen_concepts = HashSet::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 2; // 1-based, after the header
        let row = row.map_err(|e| parse_err(row_no, &e))?;
        let concept_id = nfc_lower(row.get(english_col).unwrap_or(""));
        if concept_id.is_empty() {
            return Err(Error::Validation(format!(
                "row {row_no}: empty english cell (concept key)"
            )));
        }
        if !seen_concepts.insert(concept_id.clone()) {
            return Err(Error::Validation(format!(
                "row {row_no}: duplicate concept_id {concept_id:?}"
            )));
        }
        let meaning = meaning_col
            .and_then(|c| row.get(c))
            .map(str::trim)
            .filter(|m| !m.is_empty())
            .map(|m| m.nfc().collect::<String>());
        let category = match category_col.and_then(|c| row.get(c)).map(str::trim) {
            Some(c) if !c.is_empty() => Category::parse(c)?,
            _ => Category::Miscellaneous,
        };
        for &(col, lang) in &language_cols {
            let surface = nfc_lower(row.get(col).unwrap_or(""));
            if surface.is_empty() {
                continue; // missing value, e.g. Sanskrit gaps
            }
            records.push(WordRecord {
                id: format!("{concept_id}-{}", lang.name().to_lowercase()),
                concept_id: concept_id.clone(),
                language: lang,
                surface,
                meaning: meaning.clone(),
                category,
            });
        }
    }
    Lexicon::new(records)
}

const LONG_HEADERS: [&str; 6] = ["id", "concept_id", "language", "surface", "meaning", "category"];

/// Ingest the long internal shape: columns id, concept_id, language,
/// surface, meaning, category; one row per record, kept in file order.
pub fn ingest_long(csv_text: &str) -> Result<Lexicon> {
    let mut rdr = csv_reader(csv_text);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, &e))?
        .clone();
    let got: Vec<String> = headers.iter().map(|h| h.trim().to_lowercase()).collect();
    if got != LONG_HEADERS {
        return Err(Error::Schema(format!(
            "expected columns {LONG_HEADERS:?}, got {got:?}"
        )));
    }
    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 2;
        let row = row.map_err(|e| parse_err(row_no, &e))?;
        let field = |idx: usize| row.get(idx).unwrap_or("").trim();
        let language = Language::parse(field(2))
            .ok_or_else(|| Error::Schema(format!("row {row_no}: unknown language {:?}", field(2))))?;
        let meaning = Some(field(4))
            .filter(|m| !m.is_empty())
            .map(|m| m.nfc().collect::<String>());
        records.push(WordRecord {
            id: field(0).to_string(),
            concept_id: field(1).to_string(),
            language,
            surface: nfc_lower(field(3)),
            meaning,
            category: Category::parse(field(5))?,
        });
    }
    Lexicon::new(records)
}

/// Serialize to the long CSV shape; `ingest_long` of the output
/// reproduces an equal lexicon.
pub fn export_long(lexicon: &Lexicon) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(LONG_HEADERS).unwrap();
    for r in lexicon.records() {
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
