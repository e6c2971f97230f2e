//! Naive cumulative-spectral-gradient pipeline: every pool vector is compared with
//! every other, neighbours come from a full sort, and the spectrum from Jacobi.

use std::collections::BTreeMap;

use kgcx_core::graph::KnowledgeGraph;
use kgcx_core::EmbeddingTable;

pub struct NaiveCsg {
    pub similarity: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
}

/// Class pool with every member kept: classes by tail id, members in
/// first-occurrence order, vectors `e_h ⊕ e_r`.
pub fn class_pool(kg: &KnowledgeGraph, table: &EmbeddingTable) -> Vec<Vec<Vec<f64>>> {
    let mut classes: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    for t in kg.triples() {
        let members = classes.entry(t.tail.0).or_default();
        if !members.contains(&(t.head.0, t.relation.0)) {
            members.push((t.head.0, t.relation.0));
        }
    }
    let labels: Vec<&str> = kg.entity_labels().collect();
    let rels: Vec<&str> = kg.relation_labels().collect();
    classes
        .values()
        .map(|members| {
            members
                .iter()
                .map(|&(h, r)| {
                    let mut v = table.get(labels[h as usize]).unwrap().into_owned();
                    v.extend_from_slice(&table.get(rels[r as usize]).unwrap());
                    v
                })
                .collect()
        })
        .collect()
}

pub fn naive_similarity(classes: &[Vec<Vec<f64>>], k: usize) -> Vec<Vec<f64>> {
    let m = classes.len();
    let pool: Vec<(usize, &Vec<f64>)> =
        classes.iter().enumerate().flat_map(|(c, vs)| vs.iter().map(move |v| (c, v))).collect();
    let mut s = vec![vec![0.0; m]; m];
    for (q, &(cq, vq)) in pool.iter().enumerate() {
        let mut others: Vec<(f64, usize)> = pool
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != q)
            .map(|(j, &(_, vj))| (vq.iter().zip(vj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), j))
            .collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, j) in others.iter().take(k) {
            s[cq][pool[j].0] += 1.0 / (classes[cq].len() * k) as f64;
        }
    }
    s
}

pub fn normalized_laplacian(s: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = s.len();
    let sym: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| (s[i][j] + s[j][i]) / 2.0).collect()).collect();
    let deg: Vec<f64> = sym.iter().map(|r| r.iter().sum()).collect();
    let isq: Vec<f64> = deg.iter().map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 }).collect();
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 } - isq[i] * sym[i][j] * isq[j]).collect())
        .collect()
}

pub fn naive_csg(classes: &[Vec<Vec<f64>>], k: usize) -> NaiveCsg {
    let similarity = naive_similarity(classes, k);
    let eigenvalues = super::eigen::eigenvalues(&normalized_laplacian(&similarity));
    NaiveCsg { similarity, eigenvalues }
}
