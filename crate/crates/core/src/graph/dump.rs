//! Normalized dataset dumps: `dataset.jsonl` and plain TSV split files.
//!
//! `dataset.jsonl` layout, one JSON object per line:
//!
//! ```text
//! {"format_version":1,"record":"header","selection":"all","entities":[...],"relations":[...],"splits":[["train",2],...]}
//! {"split":"train","h":0,"r":0,"t":1}
//! ...
//! ```

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GraphBuilder, KnowledgeGraph, Split, SplitSelection};
use crate::error::{Error, Result};

pub const DUMP_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    format_version: u32,
    record: String,
    selection: SplitSelection,
    entities: Vec<String>,
    relations: Vec<String>,
    splits: Vec<(Split, usize)>,
}

#[derive(Serialize, Deserialize)]
struct TripleRecord {
    split: Split,
    h: u32,
    r: u32,
    t: u32,
}

pub fn write_jsonl<W: Write>(kg: &KnowledgeGraph, mut out: W) -> Result<()> {
    let header = Header {
        format_version: DUMP_FORMAT_VERSION,
        record: "header".into(),
        selection: kg.selection(),
        entities: kg.entity_labels().map(str::to_owned).collect(),
        relations: kg.relation_labels().map(str::to_owned).collect(),
        splits: kg.split_counts(),
    };
    let io_err = |e| Error::io("dataset.jsonl", e);
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n").map_err(io_err)?;
    for &(split, start, end) in &kg.split_ranges {
        for t in &kg.triples()[start..end] {
            serde_json::to_writer(&mut out, &TripleRecord { split, h: t.head.0, r: t.relation.0, t: t.tail.0 })?;
            out.write_all(b"\n").map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<KnowledgeGraph> {
    let path = Path::new("dataset.jsonl");
    let mut lines = input.lines().enumerate();
    let (_, first) = lines.next().ok_or(Error::Empty("dataset dump has no header"))?;
    let first = first.map_err(|e| Error::io(path, e))?;
    let header: Header = serde_json::from_str(&first)?;
    if header.format_version != DUMP_FORMAT_VERSION {
        return Err(Error::Parse {
            path: path.into(),
            line: 1,
            message: format!("unsupported format_version {}", header.format_version),
        });
    }
    let mut builder = GraphBuilder::new();
    for label in &header.entities {
        builder.entity(label);
    }
    for label in &header.relations {
        builder.relation(label);
    }
    let mut current = None;
    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let rec: TripleRecord = serde_json::from_str(&line)?;
        let bad = |message: String| Error::Parse { path: path.into(), line: lineno + 1, message };
        let h = header.entities.get(rec.h as usize).ok_or_else(|| bad(format!("entity id {} out of range", rec.h)))?;
        let r = header.relations.get(rec.r as usize).ok_or_else(|| bad(format!("relation id {} out of range", rec.r)))?;
        let t = header.entities.get(rec.t as usize).ok_or_else(|| bad(format!("entity id {} out of range", rec.t)))?;
        if current != Some(rec.split) {
            builder.begin_split(rec.split);
            current = Some(rec.split);
        }
        builder.add(h, r, t);
    }
    // Splits with zero triples still appear in the header.
    let mut kg = builder.build(header.selection);
    if kg.split_counts() != header.splits {
        let mut ranges = Vec::new();
        let mut at = 0;
        for &(s, n) in &header.splits {
            ranges.push((s, at, at + n));
            at += n;
        }
        if at != kg.num_triples() {
            return Err(Error::Parse {
                path: path.into(),
                line: 1,
                message: format!("header declares {at} triples, found {}", kg.num_triples()),
            });
        }
        kg.split_ranges = ranges;
    }
    Ok(kg)
}

/// Write one `<split>.txt` TSV file per loaded split.
pub fn write_tsv_dir(kg: &KnowledgeGraph, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for &(split, start, end) in &kg.split_ranges {
        let path = dir.join(split.file_name());
        let mut body = String::new();
        for t in &kg.triples()[start..end] {
            body.push_str(kg.entity_label(t.head));
            body.push('\t');
            body.push_str(kg.relation_label(t.relation));
            body.push('\t');
            body.push_str(kg.entity_label(t.tail));
            body.push('\n');
        }
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_dataset;
    use proptest::prelude::*;

    fn graph_from(triples: &[(u8, u8, u8, u8)]) -> KnowledgeGraph {
        let mut b = GraphBuilder::new();
        for split in Split::ALL {
            b.begin_split(split);
            for &(s, h, r, t) in triples {
                if Split::ALL[(s % 3) as usize] == split {
                    b.add(&format!("e{h}"), &format!("r{}", r % 5), &format!("e{t}"));
                }
            }
        }
        b.build(SplitSelection::All)
    }

    proptest! {
        #[test]
        fn jsonl_round_trip(triples in proptest::collection::vec((0u8..3, 0u8..20, 0u8..20, 0u8..20), 0..60)) {
            let kg = graph_from(&triples);
            let mut buf = Vec::new();
            write_jsonl(&kg, &mut buf).unwrap();
            let back = read_jsonl(buf.as_slice()).unwrap();
            prop_assert_eq!(&back, &kg);
            prop_assert_eq!(back.selection(), kg.selection());
        }

        #[test]
        fn tsv_round_trip(triples in proptest::collection::vec((0u8..3, 0u8..20, 0u8..20, 0u8..20), 0..60)) {
            let kg = graph_from(&triples);
            let tmp = tempfile::tempdir().unwrap();
            write_tsv_dir(&kg, tmp.path()).unwrap();
            let back = load_dataset(tmp.path(), SplitSelection::All).unwrap();
            prop_assert_eq!(&back, &kg);
        }
    }

    #[test]
    fn header_carries_version() {
        let kg = graph_from(&[(0, 1, 2, 3)]);
        let mut buf = Vec::new();
        write_jsonl(&kg, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().next().unwrap().starts_with("{\"format_version\":1"));
        assert_eq!(text.lines().count(), 2);
    }
}
