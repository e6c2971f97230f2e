//! Complexity profiles, performance tables, correlations and plot-ready CSVs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::csg::CsgRecord;
use crate::error::{Error, Result};
use crate::graph::{Split, SplitSelection};
use crate::semantic::SemanticProfile;
use crate::stats::pearson;
use crate::structural::StructuralProfile;

pub const PROFILE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetCounts {
    pub entities: usize,
    pub relations: usize,
    pub triples: usize,
    pub splits: Vec<(Split, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    /// sha256 of the canonical JSON of every value-affecting parameter.
    pub config_hash: String,
    /// sha256 per input file, keyed by file name.
    pub inputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub profile_version: u32,
    pub dataset: String,
    pub split_selection: SplitSelection,
    pub counts: DatasetCounts,
    pub csg_records: Vec<CsgRecord>,
    pub semantic: SemanticProfile,
    /// Semantic metrics under the other split selection, when its files were present.
    pub semantic_alternate: Option<SemanticProfile>,
    pub structural: StructuralProfile,
    pub provenance: Provenance,
}

impl ComplexityProfile {
    /// Named scalar metrics in a fixed order; `None` where the metric is undefined.
    pub fn metrics(&self) -> Vec<(String, Option<f64>)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for rec in &self.csg_records {
            if seen.insert(rec.k) {
                out.push((format!("csg_full_k{}", rec.k), Some(rec.csg_full)));
            }
        }
        let s = &self.semantic;
        out.push(("relation_entropy".into(), Some(s.relation_entropy)));
        out.push(("relation_types".into(), Some(s.relation_count as f64)));
        out.push(("max_relation_diversity".into(), Some(s.max_relation_diversity as f64)));
        let t = &self.structural;
        let rows: [(&str, Option<f64>); 19] = [
            ("edge_betweenness_mean", t.edge_betweenness_mean),
            ("modularity", t.modularity),
            ("structural_entropy", Some(t.structural_entropy)),
            ("assortativity", t.assortativity),
            ("average_degree", Some(t.average_degree)),
            ("degree_centrality_mean", Some(t.degree_centrality_mean)),
            ("betweenness_centrality_mean", Some(t.betweenness_centrality_mean)),
            ("closeness_centrality_mean", Some(t.closeness_centrality_mean)),
            ("eigenvector_centrality_mean", Some(t.eigenvector_centrality_mean)),
            ("pagerank_mean", Some(t.pagerank_mean)),
            ("local_clustering_mean", Some(t.local_clustering_mean)),
            ("global_clustering", Some(t.global_clustering)),
            ("transitivity", Some(t.transitivity)),
            ("algebraic_connectivity", t.algebraic_connectivity),
            ("spectral_gap", t.spectral_gap),
            ("degree_entropy", Some(t.degree_entropy)),
            ("chromatic_number", Some(t.chromatic_number_estimate as f64)),
            ("girth", t.girth.map(|g| g as f64)),
            ("nodes", Some(t.nodes as f64)),
        ];
        out.extend(rows.into_iter().map(|(k, v)| (k.to_owned(), v)));
        out
    }
}

pub fn read_profile(path: &Path) -> Result<ComplexityProfile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let profile: ComplexityProfile = serde_json::from_str(&text)?;
    if profile.profile_version != PROFILE_VERSION {
        return Err(Error::Parse {
            path: path.into(),
            line: 1,
            message: format!("unsupported profile_version {}", profile.profile_version),
        });
    }
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceRow {
    pub model: String,
    pub dataset: String,
    pub mrr: f64,
    pub hits1: f64,
    pub hits3: Option<f64>,
    pub hits10: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PerformanceTable {
    pub rows: Vec<PerformanceRow>,
}

#[derive(Deserialize)]
struct RawRow {
    model: String,
    dataset: String,
    mrr: f64,
    hits1: f64,
    hits3: Option<f64>,
    hits10: f64,
}

const PERFORMANCE_HEADER: [&str; 6] = ["model", "dataset", "mrr", "hits1", "hits3", "hits10"];

fn validate(raw: RawRow, line: usize) -> Result<PerformanceRow> {
    let bad = |message: String| Error::PerformanceRow { line, message };
    let mut named = vec![("mrr", raw.mrr), ("hits1", raw.hits1), ("hits10", raw.hits10)];
    if let Some(h3) = raw.hits3 {
        named.push(("hits3", h3));
    }
    for (name, v) in &named {
        if !(0.0..=1.0).contains(v) {
            return Err(bad(format!("{name} = {v} is outside [0, 1]")));
        }
    }
    let upper = raw.hits3.unwrap_or(raw.hits10);
    if raw.hits1 > upper || upper > raw.hits10 {
        return Err(bad(format!(
            "hits must be non-decreasing in k (hits1 {}, hits3 {:?}, hits10 {})",
            raw.hits1, raw.hits3, raw.hits10
        )));
    }
    if raw.mrr < raw.hits1 {
        return Err(bad(format!("mrr {} is below hits1 {}", raw.mrr, raw.hits1)));
    }
    Ok(PerformanceRow {
        model: raw.model,
        dataset: raw.dataset,
        mrr: raw.mrr,
        hits1: raw.hits1,
        hits3: raw.hits3,
        hits10: raw.hits10,
    })
}

pub fn read_performance<R: std::io::Read>(input: R) -> Result<PerformanceTable> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != PERFORMANCE_HEADER {
        return Err(Error::PerformanceRow {
            line: 1,
            message: format!("expected header {}, found {}", PERFORMANCE_HEADER.join(","), header.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.deserialize::<RawRow>().enumerate() {
        let line = i + 2;
        let raw = rec.map_err(|e| Error::PerformanceRow { line, message: e.to_string() })?;
        rows.push(validate(raw, line)?);
    }
    Ok(PerformanceTable { rows })
}

pub fn load_performance(path: &Path) -> Result<PerformanceTable> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_performance(file)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanPerformance {
    pub mrr: f64,
    pub hits1: f64,
    pub hits10: f64,
    pub models: usize,
}

/// Unweighted mean over models, per dataset.
pub fn mean_performance(table: &PerformanceTable) -> BTreeMap<String, MeanPerformance> {
    let mut acc: BTreeMap<String, (f64, f64, f64, usize)> = BTreeMap::new();
    for row in &table.rows {
        let e = acc.entry(row.dataset.clone()).or_default();
        e.0 += row.mrr;
        e.1 += row.hits1;
        e.2 += row.hits10;
        e.3 += 1;
    }
    acc.into_iter()
        .map(|(d, (m, h1, h10, n))| {
            let c = n as f64;
            (d, MeanPerformance { mrr: m / c, hits1: h1 / c, hits10: h10 / c, models: n })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    MinMax,
    ZScore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub values: Vec<f64>,
    /// All inputs were equal.
    pub constant: bool,
}

/// Min-max scaling to `[0, 1]` (constant inputs map to 0.5) or z-scoring
/// (constant inputs map to 0).
pub fn normalize(values: &[f64], how: Normalization) -> Normalized {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let constant = values.is_empty() || lo == hi;
    let values = match (how, constant) {
        (Normalization::MinMax, true) => vec![0.5; values.len()],
        (Normalization::ZScore, true) => vec![0.0; values.len()],
        (Normalization::MinMax, false) => values.iter().map(|v| (v - lo) / (hi - lo)).collect(),
        (Normalization::ZScore, false) => {
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
            values.iter().map(|v| (v - mean) / sd).collect()
        }
    };
    Normalized { values, constant }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    Mrr,
    Hits1,
    Hits10,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Mrr, Target::Hits1, Target::Hits10];

    pub fn name(self) -> &'static str {
        match self {
            Target::Mrr => "mrr",
            Target::Hits1 => "hits1",
            Target::Hits10 => "hits10",
        }
    }

    fn of(self, p: &MeanPerformance) -> f64 {
        match self {
            Target::Mrr => p.mrr,
            Target::Hits1 => p.hits1,
            Target::Hits10 => p.hits10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    pub metric: String,
    pub target: Target,
    /// `Err` carries the reason the coefficient is undefined.
    pub r: std::result::Result<f64, String>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    /// Overlapping datasets, sorted by name.
    pub datasets: Vec<String>,
    pub performance: Vec<MeanPerformance>,
    pub metric_names: Vec<String>,
    /// `values[m][d]`: metric `m` on dataset `d`.
    pub values: Vec<Vec<Option<f64>>>,
    pub correlations: Vec<Correlation>,
    pub normalization: Normalization,
}

pub fn build_report(
    profiles: &[ComplexityProfile],
    performance: &PerformanceTable,
    normalization: Normalization,
) -> Result<CorrelationReport> {
    let means = mean_performance(performance);
    let mut by_name: BTreeMap<&str, &ComplexityProfile> = BTreeMap::new();
    for p in profiles {
        if by_name.insert(p.dataset.as_str(), p).is_some() {
            return Err(Error::InvalidConfig(format!("dataset {} has more than one profile", p.dataset)));
        }
    }
    let datasets: Vec<String> =
        by_name.keys().filter(|d| means.contains_key(**d)).map(|d| (*d).to_owned()).collect();
    if datasets.len() < 3 {
        return Err(Error::InsufficientOverlap { needed: 3, found: datasets.len() });
    }
    let performance: Vec<MeanPerformance> = datasets.iter().map(|d| means[d]).collect();

    // Metric names in first-seen order over the sorted datasets.
    let mut metric_names: Vec<String> = Vec::new();
    let per_dataset: Vec<BTreeMap<String, Option<f64>>> = datasets
        .iter()
        .map(|d| {
            let metrics = by_name[d.as_str()].metrics();
            for (name, _) in &metrics {
                if !metric_names.contains(name) {
                    metric_names.push(name.clone());
                }
            }
            metrics.into_iter().collect()
        })
        .collect();
    let values: Vec<Vec<Option<f64>>> = metric_names
        .iter()
        .map(|m| per_dataset.iter().map(|row| row.get(m).copied().flatten()).collect())
        .collect();

    let mut correlations = Vec::new();
    for (m, name) in metric_names.iter().enumerate() {
        for target in Target::ALL {
            let (xs, ys): (Vec<f64>, Vec<f64>) = values[m]
                .iter()
                .zip(&performance)
                .filter_map(|(v, p)| v.map(|v| (v, target.of(p))))
                .unzip();
            let r = pearson(&xs, &ys).map_err(|e| e.to_string());
            correlations.push(Correlation { metric: name.clone(), target, r, n: xs.len() });
        }
    }
    Ok(CorrelationReport { datasets, performance, metric_names, values, correlations, normalization })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

impl CorrelationReport {
    /// `metric,target,r,n,note`
    pub fn correlations_csv(&self) -> String {
        let mut out = String::from("metric,target,r,n,note\n");
        for c in &self.correlations {
            let (r, note) = match &c.r {
                Ok(r) => (format!("{r}"), String::new()),
                Err(reason) => (String::new(), reason.replace(',', ";")),
            };
            let _ = writeln!(out, "{},{},{},{},{}", c.metric, c.target.name(), r, c.n, note);
        }
        out
    }

    /// `dataset,mean_<target>,<metric>...` with normalized metric columns.
    pub fn features_csv(&self, target: Target) -> String {
        let mut out = format!("dataset,mean_{}", target.name());
        for m in &self.metric_names {
            out.push(',');
            out.push_str(m);
        }
        out.push('\n');
        let normalized: Vec<Vec<Option<f64>>> = self
            .values
            .iter()
            .map(|col| {
                let present: Vec<f64> = col.iter().flatten().copied().collect();
                let mut scaled = normalize(&present, self.normalization).values.into_iter();
                col.iter().map(|v| v.and_then(|_| scaled.next())).collect()
            })
            .collect();
        for (d, name) in self.datasets.iter().enumerate() {
            let _ = write!(out, "{},{}", name, target.of(&self.performance[d]));
            for col in &normalized {
                out.push(',');
                out.push_str(&fmt_opt(col[d]));
            }
            out.push('\n');
        }
        out
    }

    pub fn constant_metrics(&self) -> Vec<&str> {
        self.metric_names
            .iter()
            .zip(&self.values)
            .filter(|(_, col)| {
                let present: Vec<f64> = col.iter().flatten().copied().collect();
                normalize(&present, self.normalization).constant
            })
            .map(|(m, _)| m.as_str())
            .collect()
    }

    /// Metrics ranked by `|r|` per target.
    pub fn markdown(&self) -> String {
        let mut out = String::from("# Complexity vs. performance\n\n");
        let _ = writeln!(out, "Datasets (n = {}): {}\n", self.datasets.len(), self.datasets.join(", "));
        for target in Target::ALL {
            let _ = writeln!(out, "## mean {}\n", target.name());
            out.push_str("| rank | metric | r | n |\n|---:|---|---:|---:|\n");
            let mut rows: Vec<&Correlation> = self.correlations.iter().filter(|c| c.target == target).collect();
            rows.sort_by(|a, b| match (&a.r, &b.r) {
                (Ok(x), Ok(y)) => y.abs().total_cmp(&x.abs()).then_with(|| a.metric.cmp(&b.metric)),
                (Ok(_), Err(_)) => std::cmp::Ordering::Less,
                (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
                (Err(_), Err(_)) => a.metric.cmp(&b.metric),
            });
            for (i, c) in rows.iter().enumerate() {
                let r = match &c.r {
                    Ok(r) => format!("{r:.4}"),
                    Err(reason) => format!("undefined ({reason})"),
                };
                let _ = writeln!(out, "| {} | {} | {} | {} |", i + 1, c.metric, r, c.n);
            }
            out.push('\n');
        }
        let constant = self.constant_metrics();
        if !constant.is_empty() {
            let _ = writeln!(out, "Constant across datasets (normalized to a fixed value): {}", constant.join(", "));
        }
        out
    }

    /// Write `correlations.csv`, `features_vs_{mrr,hits1,hits10}.csv` and `summary.md`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut files = vec![("correlations.csv".to_owned(), self.correlations_csv())];
        for t in Target::ALL {
            files.push((format!("features_vs_{}.csv", t.name()), self.features_csv(t)));
        }
        files.push(("summary.md".to_owned(), self.markdown()));
        let mut written = Vec::new();
        for (name, body) in files {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HEADER: &str = "model,dataset,mrr,hits1,hits3,hits10\n";

    #[test]
    fn accepts_missing_hits3() {
        let t = read_performance(format!("{HEADER}TransE,WN18RR,0.22,0.02,,0.52\n").as_bytes()).unwrap();
        assert_eq!(t.rows[0].hits3, None);
        assert_eq!(t.rows[0].mrr, 0.22);
    }

    #[test]
    fn rejects_bad_rows() {
        let range = read_performance(format!("{HEADER}A,D,1.3,0.1,,0.5\n").as_bytes()).unwrap_err();
        assert!(matches!(range, Error::PerformanceRow { line: 2, .. }), "{range}");
        let order = read_performance(format!("{HEADER}A,D,0.3,0.6,,0.5\n").as_bytes()).unwrap_err();
        assert!(order.to_string().contains("non-decreasing"));
        let hdr = read_performance("model,dataset,mrr\nA,D,0.1\n".as_bytes()).unwrap_err();
        assert!(matches!(hdr, Error::PerformanceRow { line: 1, .. }));
    }

    #[test]
    fn means_are_unweighted() {
        let t = read_performance(format!("{HEADER}A,D,0.2,0.1,,0.5\nB,D,0.4,0.3,0.35,0.7\n").as_bytes()).unwrap();
        let m = mean_performance(&t);
        assert!((m["D"].mrr - 0.3).abs() < 1e-15);
        assert_eq!(m["D"].models, 2);
    }

    #[test]
    fn min_max_cases() {
        assert_eq!(normalize(&[2.0, 4.0, 6.0], Normalization::MinMax).values, vec![0.0, 0.5, 1.0]);
        let c = normalize(&[3.0, 3.0], Normalization::MinMax);
        assert!(c.constant);
        assert_eq!(c.values, vec![0.5, 0.5]);
    }

    proptest! {
        #[test]
        fn normalization_preserves_rank(values in proptest::collection::vec(-1e6f64..1e6, 2..20)) {
            for how in [Normalization::MinMax, Normalization::ZScore] {
                let out = normalize(&values, how).values;
                for i in 0..values.len() {
                    for j in 0..values.len() {
                        // Rounding is monotone, so no pair can swap order.
                        if values[i] < values[j] {
                            prop_assert!(out[i] <= out[j]);
                        } else if values[i] == values[j] {
                            prop_assert_eq!(out[i], out[j]);
                        }
                    }
                }
            }
        }
    }
}
