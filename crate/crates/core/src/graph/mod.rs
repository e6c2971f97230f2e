//! Triple ingestion, label interning and adjacency indexes.

mod dump;
mod simple;

use std::fmt;
use std::io::{BufRead, BufReader};
use std::path::Path;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dump::{read_jsonl, write_jsonl, write_tsv_dir, DUMP_FORMAT_VERSION};
pub use simple::{DirectedMultigraph, SimpleGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RelationId(pub u32);

impl EntityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl RelationId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    pub head: EntityId,
    pub relation: RelationId,
    pub tail: EntityId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Valid, Split::Test];

    pub fn file_name(self) -> &'static str {
        match self {
            Split::Train => "train.txt",
            Split::Valid => "valid.txt",
            Split::Test => "test.txt",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

/// Which dataset splits feed the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SplitSelection {
    #[serde(rename = "train")]
    TrainOnly,
    #[default]
    #[serde(rename = "all")]
    All,
}

impl SplitSelection {
    pub fn splits(self) -> &'static [Split] {
        match self {
            SplitSelection::TrainOnly => &[Split::Train],
            SplitSelection::All => &Split::ALL,
        }
    }

    pub fn other(self) -> Self {
        match self {
            SplitSelection::TrainOnly => SplitSelection::All,
            SplitSelection::All => SplitSelection::TrainOnly,
        }
    }
}

impl fmt::Display for SplitSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitSelection::TrainOnly => "train",
            SplitSelection::All => "all",
        })
    }
}

impl std::str::FromStr for SplitSelection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "train" => Ok(SplitSelection::TrainOnly),
            "all" => Ok(SplitSelection::All),
            other => Err(format!("unknown split selection `{other}` (expected train or all)")),
        }
    }
}

/// Interned knowledge graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct KnowledgeGraph {
    entities: IndexSet<String>,
    relations: IndexSet<String>,
    triples: Vec<Triple>,
    /// `(split, start, end)` ranges into `triples`, in load order.
    split_ranges: Vec<(Split, usize, usize)>,
    selection: SplitSelection,
    out_index: Vec<Vec<(RelationId, EntityId)>>,
    in_index: Vec<Vec<(RelationId, EntityId)>>,
}

impl PartialEq for KnowledgeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.entities.iter().eq(other.entities.iter())
            && self.relations.iter().eq(other.relations.iter())
            && self.triples == other.triples
            && self.split_ranges == other.split_ranges
    }
}

/// Incrementally interns labelled triples.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    entities: IndexSet<String>,
    relations: IndexSet<String>,
    triples: Vec<Triple>,
    split_ranges: Vec<(Split, usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Start a new split section; subsequent triples belong to it.
    pub fn begin_split(&mut self, split: Split) {
        let at = self.triples.len();
        self.split_ranges.push((split, at, at));
    }

    pub fn entity(&mut self, label: &str) -> EntityId {
        EntityId(intern(&mut self.entities, label))
    }

    pub fn relation(&mut self, label: &str) -> RelationId {
        RelationId(intern(&mut self.relations, label))
    }

    pub fn add(&mut self, head: &str, relation: &str, tail: &str) -> Triple {
        if self.split_ranges.is_empty() {
            self.begin_split(Split::Train);
        }
        let triple = Triple { head: self.entity(head), relation: self.relation(relation), tail: self.entity(tail) };
        self.triples.push(triple);
        if let Some(last) = self.split_ranges.last_mut() {
            last.2 = self.triples.len();
        }
        triple
    }

    pub fn build(self, selection: SplitSelection) -> KnowledgeGraph {
        let n = self.entities.len();
        let mut out_index = vec![Vec::new(); n];
        let mut in_index = vec![Vec::new(); n];
        for t in &self.triples {
            out_index[t.head.index()].push((t.relation, t.tail));
            in_index[t.tail.index()].push((t.relation, t.head));
        }
        KnowledgeGraph {
            entities: self.entities,
            relations: self.relations,
            triples: self.triples,
            split_ranges: self.split_ranges,
            selection,
            out_index,
            in_index,
        }
    }
}

fn intern(set: &mut IndexSet<String>, label: &str) -> u32 {
    let idx = match set.get_index_of(label) {
        Some(i) => i,
        None => set.insert_full(label.to_owned()).0,
    };
    u32::try_from(idx).expect("more than u32::MAX labels")
}

/// Load `train.txt` (and `valid.txt`, `test.txt` under [`SplitSelection::All`]) from `dir`.
pub fn load_dataset(dir: &Path, selection: SplitSelection) -> Result<KnowledgeGraph> {
    let mut builder = GraphBuilder::new();
    for &split in selection.splits() {
        let path = dir.join(split.file_name());
        if !path.is_file() {
            return Err(Error::MissingSplit(path));
        }
        let file = std::fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
        builder.begin_split(split);
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(&path, e))?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::MalformedTriple { path: path.clone(), line: lineno + 1, found: fields.len() });
            }
            builder.add(fields[0], fields[1], fields[2]);
        }
    }
    Ok(builder.build(selection))
}

impl KnowledgeGraph {
    pub fn num_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn num_triples(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn selection(&self) -> SplitSelection {
        self.selection
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn split_triples(&self, split: Split) -> impl Iterator<Item = &Triple> + '_ {
        self.split_ranges
            .iter()
            .filter(move |(s, _, _)| *s == split)
            .flat_map(move |&(_, a, b)| self.triples[a..b].iter())
    }

    pub fn split_counts(&self) -> Vec<(Split, usize)> {
        self.split_ranges.iter().map(|&(s, a, b)| (s, b - a)).collect()
    }

    pub fn entity_label(&self, id: EntityId) -> &str {
        &self.entities[id.index()]
    }

    pub fn relation_label(&self, id: RelationId) -> &str {
        &self.relations[id.index()]
    }

    pub fn entity_id(&self, label: &str) -> Option<EntityId> {
        self.entities.get_index_of(label).map(|i| EntityId(i as u32))
    }

    pub fn relation_id(&self, label: &str) -> Option<RelationId> {
        self.relations.get_index_of(label).map(|i| RelationId(i as u32))
    }

    pub fn entity_labels(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.entities.iter().map(String::as_str)
    }

    pub fn relation_labels(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.relations.iter().map(String::as_str)
    }

    /// `(relation, tail)` for every triple whose head is `e`.
    pub fn out_edges(&self, e: EntityId) -> &[(RelationId, EntityId)] {
        &self.out_index[e.index()]
    }

    /// `(relation, head)` for every triple whose tail is `e`.
    pub fn in_edges(&self, e: EntityId) -> &[(RelationId, EntityId)] {
        &self.in_index[e.index()]
    }

    /// Undirected simple view with self-loop and multiplicity annotations.
    pub fn undirected_view(&self) -> SimpleGraph {
        SimpleGraph::from_pairs(
            self.num_entities(),
            self.triples.iter().map(|t| (t.head.index(), t.tail.index())),
        )
    }

    /// Directed multigraph view (one arc per triple, head to tail).
    pub fn directed_view(&self) -> DirectedMultigraph {
        DirectedMultigraph::from_arcs(
            self.num_entities(),
            self.triples.iter().map(|t| (t.head.index(), t.tail.index())),
        )
    }
}
