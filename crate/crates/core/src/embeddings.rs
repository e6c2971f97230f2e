//! Label embeddings: text vector files, a deterministic fallback embedder, and
//! head ⊕ relation composite vectors.
//!
//! Text vector format: a header line `"<count> <dimension>"`, then one
//! `"<label> <v1> ... <vd>"` line per label. Labels carry no spaces (exporters
//! write `%20`).

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EmbeddingSource {
    File,
    Fallback { seed: u64 },
}

/// Fixed-dimension label vectors.
#[derive(Debug, Clone)]
pub struct EmbeddingTable<T> {
    dimension: usize,
    vectors: HashMap<String, Vec<T>>,
    source: EmbeddingSource,
    /// When set, labels missing from a file table are filled by the fallback embedder.
    fill_seed: Option<u64>,
}

impl<T: Scalar> EmbeddingTable<T> {
    /// Table that embeds every label on demand with [`fallback_embed`].
    pub fn fallback(dimension: usize, seed: u64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfig("embedding dimension must be positive".into()));
        }
        Ok(Self { dimension, vectors: HashMap::new(), source: EmbeddingSource::Fallback { seed }, fill_seed: None })
    }

    pub fn from_vectors(dimension: usize, rows: impl IntoIterator<Item = (String, Vec<T>)>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfig("embedding dimension must be positive".into()));
        }
        let mut vectors = HashMap::new();
        for (label, v) in rows {
            if v.len() != dimension {
                return Err(Error::DimensionMismatch { label, expected: dimension, found: v.len() });
            }
            if vectors.contains_key(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            vectors.insert(label, v);
        }
        Ok(Self { dimension, vectors, source: EmbeddingSource::File, fill_seed: None })
    }

    /// Opt into filling labels absent from a file table with fallback vectors.
    pub fn with_fallback_fill(mut self, seed: u64) -> Self {
        self.fill_seed = Some(seed);
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn source(&self) -> EmbeddingSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.vectors.contains_key(label)
    }

    /// Vector for `label`; fallback tables (and fill-enabled file tables) never fail.
    pub fn get(&self, label: &str) -> Result<std::borrow::Cow<'_, [T]>> {
        if let Some(v) = self.vectors.get(label) {
            return Ok(std::borrow::Cow::Borrowed(v));
        }
        let seed = match (self.source, self.fill_seed) {
            (EmbeddingSource::Fallback { seed }, _) | (EmbeddingSource::File, Some(seed)) => seed,
            (EmbeddingSource::File, None) => return Err(Error::MissingLabel(label.to_owned())),
        };
        Ok(std::borrow::Cow::Owned(fallback_embed(label.as_bytes(), self.dimension, seed)))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.vectors.keys().map(String::as_str)
    }
}

/// Parse a text vector file.
pub fn load_embeddings<T: Scalar>(path: &Path) -> Result<EmbeddingTable<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_embeddings(BufReader::new(file), path)
}

pub fn read_embeddings<T: Scalar, R: BufRead>(input: R, path: &Path) -> Result<EmbeddingTable<T>> {
    let mut lines = input.lines();
    let parse_err = |line: usize, message: String| Error::Parse { path: path.into(), line, message };
    let header = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header".into()))?
        .map_err(|e| Error::io(path, e))?;
    let mut parts = header.split(' ');
    let (count, dimension) = match (parts.next(), parts.next(), parts.next()) {
        (Some(c), Some(d), None) => (
            c.parse::<usize>().map_err(|e| parse_err(1, format!("bad count: {e}")))?,
            d.parse::<usize>().map_err(|e| parse_err(1, format!("bad dimension: {e}")))?,
        ),
        _ => return Err(parse_err(1, format!("header must be `<count> <dimension>`, got `{header}`"))),
    };
    let mut rows = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(' ');
        let label = fields.next().unwrap_or_default().to_owned();
        let values = fields
            .map(|f| f.parse::<f64>().map(T::of))
            .collect::<std::result::Result<Vec<T>, _>>()
            .map_err(|e| parse_err(i + 2, format!("bad value for `{label}`: {e}")))?;
        rows.push((label, values));
    }
    if rows.len() != count {
        return Err(parse_err(1, format!("header declares {count} rows, file has {}", rows.len())));
    }
    EmbeddingTable::from_vectors(dimension, rows)
}

/// Write `rows` in the text vector format. Values use shortest round-trip formatting.
pub fn write_embeddings<T: Scalar, W: Write>(mut out: W, dimension: usize, rows: &[(String, Vec<T>)]) -> std::io::Result<()> {
    writeln!(out, "{} {}", rows.len(), dimension)?;
    for (label, v) in rows {
        out.write_all(label.as_bytes())?;
        for x in v {
            write!(out, " {}", x.as_f64())?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Deterministic unit vector for `label`.
///
/// Components are standard-normal draws from a ChaCha stream keyed by
/// SHA-256(label, seed); component `i` is the `i`-th draw. The result is L2-normalized.
pub fn fallback_embed<T: Scalar>(label: &[u8], dimension: usize, seed: u64) -> Vec<T> {
    assert!(dimension >= 1, "dimension must be positive");
    let mut h = Sha256::new();
    h.update((label.len() as u64).to_le_bytes());
    h.update(label);
    h.update(seed.to_le_bytes());
    let key: [u8; 32] = h.finalize().into();
    let mut rng = ChaCha8Rng::from_seed(key);
    let mut raw: Vec<f64> = (0..dimension).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        raw.iter_mut().for_each(|x| *x /= norm);
    } else {
        raw[0] = 1.0;
    }
    raw.into_iter().map(T::of).collect()
}

/// Concatenated head ⊕ relation vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeVector<T> {
    pub values: Vec<T>,
    pub head: crate::graph::EntityId,
    pub relation: crate::graph::RelationId,
}

/// Build `e_h ⊕ e_r` from labels.
pub fn composite<T: Scalar>(table: &EmbeddingTable<T>, head: &str, relation: &str) -> Result<Vec<T>> {
    let h = table.get(head)?;
    let r = table.get(relation)?;
    let mut v = Vec::with_capacity(2 * table.dimension());
    v.extend_from_slice(&h);
    v.extend_from_slice(&r);
    Ok(v)
}
