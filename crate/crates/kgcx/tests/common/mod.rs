//! Synthetic datasets and CLI helpers shared by the CLI and acceptance tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kgcx_core::embeddings::write_embeddings;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub type Triples = Vec<(String, String, String)>;

pub fn kgcx() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kgcx"))
}

pub fn run(args: &[&str]) -> Output {
    kgcx().args(args).output().expect("spawn kgcx")
}

pub fn write_split(dir: &Path, name: &str, triples: &[(String, String, String)]) {
    std::fs::create_dir_all(dir).unwrap();
    let body: String = triples.iter().map(|(h, r, t)| format!("{h}\t{r}\t{t}\n")).collect();
    std::fs::write(dir.join(name), body).unwrap();
}

/// Write `train/valid/test.txt`, sending roughly 10% of triples to each of valid and test.
pub fn write_dataset(dir: &Path, triples: &Triples, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut valid, mut test) = (Vec::new(), Vec::new(), Vec::new());
    for t in triples {
        match rng.random_range(0..10) {
            0 => valid.push(t.clone()),
            1 => test.push(t.clone()),
            _ => train.push(t.clone()),
        }
    }
    write_split(dir, "train.txt", &train);
    write_split(dir, "valid.txt", &valid);
    write_split(dir, "test.txt", &test);
}

/// Random multi-relational graph with skewed relation and entity usage.
pub fn random_kg(seed: u64, entities: usize, relations: usize, triples: usize) -> Triples {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..triples)
        .map(|_| {
            let skew = |rng: &mut ChaCha8Rng, n: usize| {
                let u: f64 = rng.random();
                ((u * u) * n as f64) as usize
            };
            let h = skew(&mut rng, entities);
            let t = skew(&mut rng, entities);
            let r = skew(&mut rng, relations);
            (format!("e{h}"), format!("r{r}"), format!("e{t}"))
        })
        .collect()
}

/// Tail classes whose head embeddings are Gaussian clouds around per-class centres.
pub struct Clustered {
    pub triples: Triples,
    pub vectors: Vec<(String, Vec<f64>)>,
    pub dim: usize,
}

/// `classes` classes of `members` heads each. Class centres are `separation`
/// apart along orthogonal axes (when `dim >= classes`) or drawn at random with
/// scale `separation`; members scatter with unit variance around their centre.
pub fn clustered(seed: u64, classes: usize, members: usize, dim: usize, separation: f64) -> Clustered {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).unwrap();
    let centres: Vec<Vec<f64>> = (0..classes)
        .map(|c| {
            if dim >= classes {
                (0..dim).map(|i| if i == c { separation } else { 0.0 }).collect()
            } else {
                (0..dim).map(|_| separation * unit.sample(&mut rng)).collect()
            }
        })
        .collect();
    let mut triples = Vec::new();
    let mut vectors = vec![("r".to_owned(), vec![0.0; dim])];
    for (c, centre) in centres.iter().enumerate() {
        vectors.push((format!("t{c}"), vec![0.0; dim]));
        for i in 0..members {
            let head = format!("h{c}_{i}");
            triples.push((head.clone(), "r".to_owned(), format!("t{c}")));
            vectors.push((head, centre.iter().map(|x| x + unit.sample(&mut rng)).collect()));
        }
    }
    Clustered { triples, vectors, dim }
}

impl Clustered {
    pub fn write(&self, dir: &Path) -> PathBuf {
        write_split(dir, "train.txt", &self.triples);
        write_split(dir, "valid.txt", &[]);
        write_split(dir, "test.txt", &[]);
        let path = dir.join("embeddings.vec");
        let mut out = Vec::new();
        write_embeddings(&mut out, self.dim, &self.vectors).unwrap();
        std::fs::write(&path, out).unwrap();
        path
    }
}
