//! DBSCAN over soundex embeddings, majority-based cluster labeling,
//! and the edge-density coefficient over a Levenshtein-threshold word
//! graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::lexicon::{Category, Language, Lexicon, WordRecord};
use crate::metrics::levenshtein;
use crate::num::{real, real_usize, Real};
use crate::phonetics::{soundex_encode, soundex_vector, SoundexVector};

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterParams<F = f64> {
    pub eps: F,
    /// Neighborhood size a core point needs, counting the point itself.
    pub min_samples: usize,
}

impl<F: Real> Default for ClusterParams<F> {
    fn default() -> Self {
        ClusterParams {
            eps: real(0.0375),
            min_samples: 10,
        }
    }
}

/// Per-point cluster labels plus per-cluster member lists. Cluster ids
/// are dense, numbered in order of discovery; `None` is noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub labels: Vec<Option<usize>>,
    pub clusters: Vec<Vec<usize>>,
}

impl ClusterAssignment {
    fn from_labels(labels: Vec<Option<usize>>, n_clusters: usize) -> Self {
        let mut clusters = vec![Vec::new(); n_clusters];
        for (i, label) in labels.iter().enumerate() {
            if let Some(c) = label {
                clusters[*c].push(i);
            }
        }
        ClusterAssignment { labels, clusters }
    }

    pub fn noise(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

fn distance<F: Real>(a: &SoundexVector<F>, b: &SoundexVector<F>) -> F {
    crate::metrics::euclidean(a, b)
}

/// Standard DBSCAN with deterministic input-order expansion: points are
/// visited in index order and border points go to the first cluster
/// that reaches them.
pub fn dbscan<F: Real>(points: &[SoundexVector<F>], params: &ClusterParams<F>) -> ClusterAssignment {
    let n = points.len();
    let region = |i: usize| -> Vec<usize> {
        (0..n)
            .filter(|&j| distance(&points[i], &points[j]) <= params.eps)
            .collect()
    };
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut next_cluster = 0;
    for i in 0..n {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        let neighbors = region(i);
        if neighbors.len() < params.min_samples {
            continue; // noise unless later claimed as a border point
        }
        let cluster = next_cluster;
        next_cluster += 1;
        labels[i] = Some(cluster);
        let mut seeds: VecDeque<usize> = neighbors.into_iter().filter(|&j| j != i).collect();
        while let Some(j) = seeds.pop_front() {
            if !visited[j] {
                visited[j] = true;
                let nj = region(j);
                if nj.len() >= params.min_samples {
                    seeds.extend(nj);
                }
            }
            if labels[j].is_none() {
                labels[j] = Some(cluster);
            }
        }
    }
    ClusterAssignment::from_labels(labels, next_cluster)
}

/// Majority language and category of a cluster, with the 5-character
/// short code built from their names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabel {
    pub majority_language: Language,
    pub majority_category: Category,
    pub short_code: String,
}

impl ClusterLabel {
    /// Rendered as in the coefficient report, e.g. "Hindi + Fabrication".
    pub fn display(&self) -> String {
        format!(
            "{} + {}",
            self.majority_language.name(),
            self.majority_category.display_name()
        )
    }
}

fn majority<T: Eq + Copy>(items: impl Iterator<Item = NamedKey<T>>) -> T {
    // keyed by name, so BTreeMap order breaks count ties
    // lexicographically
    let mut counts: BTreeMap<NamedKey<T>, usize> = BTreeMap::new();
    for item in items {
        *counts.entry(item).or_default() += 1;
    }
    let best = counts.values().copied().max().unwrap();
    counts
        .into_iter()
        .find(|(_, c)| *c == best)
        .map(|(k, _)| k.1)
        .unwrap()
}

/// Label a cluster by its majority language and category; ties break to
/// the lexicographically smallest name.
pub fn label_cluster(members: &[&WordRecord]) -> Result<ClusterLabel> {
    if members.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let language = majority(members.iter().map(|r| NamedKey(r.language.name(), r.language)));
    let category = majority(members.iter().map(|r| NamedKey(r.category.name(), r.category)));
    let short_code = format!(
        "{}{}",
        &language.name()[..2],
        &category.display_name()[..3]
    );
    Ok(ClusterLabel {
        majority_language: language,
        majority_category: category,
        short_code,
    })
}

/// Key ordered by display name rather than enum order.
#[derive(Clone, Copy, PartialEq, Eq)]
struct NamedKey<T>(&'static str, T);

impl<T: Eq> Ord for NamedKey<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(other.0)
    }
}

impl<T: Eq> PartialOrd for NamedKey<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Undirected graph over words: an edge joins two distinct words whose
/// surfaces are within the Levenshtein threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordGraph {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

pub fn build_word_graph(members: &[&WordRecord], edge_threshold: usize) -> WordGraph {
    let n = members.len();
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if levenshtein(&members[i].surface, &members[j].surface) <= edge_threshold {
                edges.insert((i, j));
            }
        }
    }
    WordGraph { n, edges }
}

/// Edge density: edge count over n(n-1)/2, or 0 for fewer than two
/// nodes.
pub fn clustering_coefficient<F: Real>(g: &WordGraph) -> F {
    if g.n < 2 {
        return F::zero();
    }
    let possible = g.n * (g.n - 1) / 2;
    real_usize::<F>(g.edges.len()) / real_usize::<F>(possible)
}

/// One row of the cluster report.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReportRow<F = f64> {
    pub cluster_id: usize,
    pub label: ClusterLabel,
    pub size: usize,
    pub coefficient: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport<F = f64> {
    pub rows: Vec<ClusterReportRow<F>>,
    pub assignment: ClusterAssignment,
    pub noise_count: usize,
}

/// Cluster a lexicon end to end: encode, run DBSCAN, label each
/// cluster, and compute its word-graph coefficient.
pub fn cluster_lexicon<F: Real>(
    lexicon: &Lexicon,
    params: &ClusterParams<F>,
    edge_threshold: usize,
) -> Result<ClusterReport<F>> {
    let mut points = Vec::with_capacity(lexicon.len());
    for r in lexicon.records() {
        let code = soundex_encode(&r.surface)
            .map_err(|_| Error::Encoding(format!("{} ({})", r.surface, r.id)))?;
        points.push(soundex_vector::<F>(code));
    }
    let assignment = dbscan(&points, params);
    let mut rows = Vec::with_capacity(assignment.clusters.len());
    for (cluster_id, member_idx) in assignment.clusters.iter().enumerate() {
        let members: Vec<&WordRecord> =
            member_idx.iter().map(|&i| &lexicon.records()[i]).collect();
        let label = label_cluster(&members)?;
        let graph = build_word_graph(&members, edge_threshold);
        rows.push(ClusterReportRow {
            cluster_id,
            label,
            size: members.len(),
            coefficient: clustering_coefficient(&graph),
        });
    }
    let noise_count = assignment.noise().len();
    Ok(ClusterReport {
        rows,
        assignment,
        noise_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::ingest_long;

    fn point(v: [f64; 4]) -> SoundexVector<f64> {
        SoundexVector(v)
    }

    #[test]
    fn dense_blob_is_one_cluster() {
        let pts = vec![point([0.5, 0.5, 0.5, 0.5]); 12];
        let a = dbscan(&pts, &ClusterParams { eps: 0.0375, min_samples: 10 });
        assert_eq!(a.clusters.len(), 1);
        assert_eq!(a.clusters[0].len(), 12);
    }

    #[test]
    fn isolated_point_is_noise() {
        let pts = vec![point([0.1, 0.0, 0.0, 0.0])];
        let a = dbscan(&pts, &ClusterParams { eps: 0.1, min_samples: 2 });
        assert_eq!(a.labels, vec![None]);
        assert!(a.clusters.is_empty());
    }

    #[test]
    fn two_separated_blobs() {
        let mut pts = vec![point([0.1, 0.1, 0.1, 0.1]); 5];
        pts.extend(vec![point([0.9, 0.9, 0.9, 0.9]); 5]);
        let a = dbscan(&pts, &ClusterParams { eps: 0.05, min_samples: 3 });
        assert_eq!(a.clusters.len(), 2);
        assert_eq!(a.labels[0], Some(0));
        assert_eq!(a.labels[9], Some(1));
    }

    #[test]
    fn min_samples_counts_self() {
        // exactly min_samples points co-located: each is core
        let pts = vec![point([0.2, 0.2, 0.2, 0.2]); 3];
        let a = dbscan(&pts, &ClusterParams { eps: 0.01, min_samples: 3 });
        assert_eq!(a.clusters.len(), 1);
        let b = dbscan(&pts, &ClusterParams { eps: 0.01, min_samples: 4 });
        assert!(b.clusters.is_empty());
    }

    #[test]
    fn empty_input() {
        let a = dbscan::<f64>(&[], &ClusterParams::default());
        assert!(a.labels.is_empty() && a.clusters.is_empty());
    }

    fn fixture(rows: &str) -> Lexicon {
        let csv = format!("id,concept_id,language,surface,meaning,category\n{rows}");
        ingest_long(&csv).unwrap()
    }

    #[test]
    fn majority_label_and_short_code() {
        let lex = fixture(
            "w1,a,Hindi,patthar,stone,fabrication\n\
             w2,b,Hindi,loha,iron,fabrication\n\
             w3,c,Tamil,kallu,stone,fabrication\n\
             w4,d,Hindi,sona,gold,nature\n",
        );
        let members: Vec<&WordRecord> = lex.records().iter().collect();
        let label = label_cluster(&members).unwrap();
        assert_eq!(label.majority_language, Language::Hindi);
        assert_eq!(label.majority_category, Category::Fabrication);
        assert_eq!(label.short_code, "HiFab");
        assert_eq!(label.display(), "Hindi + Fabrication");
    }

    #[test]
    fn single_member_label() {
        let lex = fixture("w1,a,Tamil,natavu,walk,motion\n");
        let members: Vec<&WordRecord> = lex.records().iter().collect();
        assert_eq!(label_cluster(&members).unwrap().short_code, "TaMot");
    }

    #[test]
    fn tie_breaks_lexicographically() {
        let lex = fixture(
            "w1,a,Kannada,kelu,hear,common\n\
             w2,b,Kannada,nodu,see,common\n\
             w3,c,Hindi,suno,hear,common\n\
             w4,d,Hindi,dekho,see,common\n",
        );
        let members: Vec<&WordRecord> = lex.records().iter().collect();
        // 2 Hindi vs 2 Kannada: Hindi sorts first
        assert_eq!(
            label_cluster(&members).unwrap().majority_language,
            Language::Hindi
        );
    }

    #[test]
    fn label_order_invariant() {
        let lex = fixture(
            "w1,a,Hindi,kala,art,fabrication\n\
             w2,b,Tamil,kalai,art,fabrication\n\
             w3,c,Hindi,kila,fort,fabrication\n",
        );
        let mut members: Vec<&WordRecord> = lex.records().iter().collect();
        let forward = label_cluster(&members).unwrap();
        members.reverse();
        assert_eq!(label_cluster(&members).unwrap(), forward);
    }

    #[test]
    fn empty_cluster_errors() {
        assert!(matches!(label_cluster(&[]), Err(Error::EmptyCluster)));
    }

    #[test]
    fn word_graph_edges() {
        let lex = fixture(
            "w1,a,Hindi,mata,mother,kinship\n\
             w2,b,Marathi,matb,mother,kinship\n",
        );
        let members: Vec<&WordRecord> = lex.records().iter().collect();
        let g = build_word_graph(&members, 2);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn far_surfaces_no_edges() {
        let lex = fixture(
            "w1,a,Hindi,aaaaaa,x,common\n\
             w2,b,Hindi,zzzzzz,y,common\n\
             w3,c,Hindi,qqqqqq,z,common\n",
        );
        let members: Vec<&WordRecord> = lex.records().iter().collect();
        assert!(build_word_graph(&members, 2).edges.is_empty());
    }

    #[test]
    fn duplicate_surfaces_edge_but_no_self_loop() {
        let lex = fixture(
            "w1,a,Hindi,mata,mother,kinship\n\
             w2,b,Marathi,mata,mother,kinship\n",
        );
        let members: Vec<&WordRecord> = lex.records().iter().collect();
        let g = build_word_graph(&members, 2);
        assert_eq!(g.edges, BTreeSet::from([(0, 1)]));
    }

    #[test]
    fn coefficient_known_graphs() {
        let triangle = WordGraph {
            n: 3,
            edges: BTreeSet::from([(0, 1), (0, 2), (1, 2)]),
        };
        assert_eq!(clustering_coefficient::<f64>(&triangle), 1.0);
        let path = WordGraph {
            n: 3,
            edges: BTreeSet::from([(0, 1), (1, 2)]),
        };
        assert!((clustering_coefficient::<f64>(&path) - 2.0 / 3.0).abs() < 1e-12);
        let single = WordGraph { n: 1, edges: BTreeSet::new() };
        assert_eq!(clustering_coefficient::<f64>(&single), 0.0);
    }

    #[test]
    fn cluster_lexicon_empty() {
        let lex = Lexicon::new(Vec::new()).unwrap();
        let report = cluster_lexicon::<f64>(&lex, &ClusterParams::default(), 2).unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.noise_count, 0);
    }

    #[test]
    fn all_noise_when_min_samples_exceeds_n() {
        let lex = fixture(
            "w1,a,Hindi,kala,art,fabrication\n\
             w2,b,Tamil,kalai,art,fabrication\n",
        );
        let report =
            cluster_lexicon::<f64>(&lex, &ClusterParams { eps: 0.0375, min_samples: 10 }, 2)
                .unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.noise_count, 2);
    }

    #[test]
    fn toy_phonetic_families_cluster() {
        // three families of 4 identical soundex codes each
        let mut rows = String::new();
        for (i, s) in ["kala", "kalā", "kale", "kalai"].iter().enumerate() {
            rows.push_str(&format!("k{i},art,Hindi,{s},art,fabrication\n"));
        }
        for (i, s) in ["mata", "maata", "matha", "mataa"].iter().enumerate() {
            rows.push_str(&format!("m{i},mother,Marathi,{s},mother,kinship\n"));
        }
        for (i, s) in ["sona", "sonaa", "sonah", "sona"].iter().enumerate() {
            rows.push_str(&format!("s{i},gold,Punjabi,{s},gold,nature\n"));
        }
        let lex = fixture(&rows);
        let report =
            cluster_lexicon::<f64>(&lex, &ClusterParams { eps: 0.0375, min_samples: 3 }, 2)
                .unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert!((0.0..=1.0).contains(&row.coefficient));
            assert_eq!(row.size, 4);
        }
        assert_eq!(report.rows[0].label.short_code, "HiFab");
    }
}
