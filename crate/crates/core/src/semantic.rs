//! Relation-type cardinality, relation entropy and node-level relation diversity.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EntityId, KnowledgeGraph, SplitSelection};
use crate::stats::entropy_bits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticProfile {
    pub split_selection: SplitSelection,
    pub relation_count: usize,
    /// Bits.
    pub relation_entropy: f64,
    pub max_relation_diversity: usize,
    pub max_relation_diversity_entity: Option<String>,
    /// `p(r)` indexed by relation id.
    #[serde(skip)]
    pub per_relation_frequency: Vec<f64>,
    /// `Div(e)` indexed by entity id.
    #[serde(skip)]
    pub per_entity_diversity: Vec<usize>,
}

pub fn relation_count(kg: &KnowledgeGraph) -> usize {
    kg.num_relations()
}

/// Triple-level relation frequencies `p(r) = |{(h, r, t)}| / |T|`, duplicates counted.
pub fn relation_frequencies(kg: &KnowledgeGraph) -> Result<Vec<f64>> {
    if kg.is_empty() {
        return Err(Error::Empty("relation frequencies need at least one triple"));
    }
    let counts = relation_counts(kg);
    let total = kg.num_triples() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / total).collect())
}

fn relation_counts(kg: &KnowledgeGraph) -> Vec<usize> {
    let mut counts = vec![0usize; kg.num_relations()];
    for t in kg.triples() {
        counts[t.relation.index()] += 1;
    }
    counts
}

/// Shannon entropy (bits) of the relation distribution over triples.
pub fn relation_entropy(kg: &KnowledgeGraph) -> Result<f64> {
    if kg.is_empty() {
        return Err(Error::Empty("relation entropy needs at least one triple"));
    }
    Ok(entropy_bits(relation_counts(kg)))
}

/// Distinct relation types incident to each entity, in either direction.
pub fn entity_diversity(kg: &KnowledgeGraph) -> Vec<usize> {
    let mut seen: HashSet<u32> = HashSet::new();
    (0..kg.num_entities())
        .map(|e| {
            let e = EntityId(e as u32);
            seen.clear();
            seen.extend(kg.out_edges(e).iter().map(|(r, _)| r.0));
            seen.extend(kg.in_edges(e).iter().map(|(r, _)| r.0));
            seen.len()
        })
        .collect()
}

/// Maximum `Div(e)` and the smallest entity id attaining it.
pub fn max_relation_diversity(kg: &KnowledgeGraph) -> Option<(usize, EntityId)> {
    let div = entity_diversity(kg);
    let best = div.iter().copied().max()?;
    let at = div.iter().position(|&d| d == best)?;
    Some((best, EntityId(at as u32)))
}

pub fn semantic_profile(kg: &KnowledgeGraph) -> Result<SemanticProfile> {
    let per_relation_frequency = relation_frequencies(kg)?;
    let per_entity_diversity = entity_diversity(kg);
    let (max_div, at) = max_relation_diversity(kg).ok_or(Error::Empty("graph has no entities"))?;
    Ok(SemanticProfile {
        split_selection: kg.selection(),
        relation_count: relation_count(kg),
        relation_entropy: relation_entropy(kg)?,
        max_relation_diversity: max_div,
        max_relation_diversity_entity: Some(kg.entity_label(at).to_owned()),
        per_relation_frequency,
        per_entity_diversity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use proptest::prelude::*;

    fn build(triples: &[(&str, &str, &str)]) -> KnowledgeGraph {
        let mut b = GraphBuilder::new();
        for (h, r, t) in triples {
            b.add(h, r, t);
        }
        b.build(SplitSelection::TrainOnly)
    }

    #[test]
    fn single_relation_has_zero_entropy() {
        let kg = build(&[("a", "r", "b"), ("b", "r", "c")]);
        assert_eq!(relation_entropy(&kg).unwrap(), 0.0);
    }

    #[test]
    fn uniform_four_relations() {
        let kg = build(&[("a", "r1", "b"), ("a", "r2", "b"), ("a", "r3", "b"), ("a", "r4", "b")]);
        assert!((relation_entropy(&kg).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(relation_count(&kg), 4);
    }

    #[test]
    fn empty_graph() {
        let kg = build(&[]);
        assert_eq!(relation_count(&kg), 0);
        assert!(relation_entropy(&kg).is_err());
        assert!(max_relation_diversity(&kg).is_none());
    }

    #[test]
    fn star_center_diversity() {
        let kg = build(&[("c", "r1", "x"), ("y", "r2", "c"), ("c", "r3", "z"), ("c", "r1", "w")]);
        let (d, at) = max_relation_diversity(&kg).unwrap();
        assert_eq!(d, 3);
        assert_eq!(kg.entity_label(at), "c");
    }

    #[test]
    fn duplicate_can_move_entropy_more_than_log_ratio() {
        let mut triples: Vec<(String, String, String)> = (0..47).map(|i| (format!("a{i}"), "r".into(), "b".into())).collect();
        triples.push(("x".into(), "s".into(), "y".into()));
        let refs: Vec<(&str, &str, &str)> = triples.iter().map(|(h, r, t)| (h.as_str(), r.as_str(), t.as_str())).collect();
        let before = relation_entropy(&build(&refs)).unwrap();
        let mut more = refs.clone();
        more.push(("x", "s", "y"));
        let after = relation_entropy(&build(&more)).unwrap();
        assert_eq!(relation_count(&build(&more)), 2);
        assert!((after - before).abs() > (49f64 / 48.0).log2());
    }

    #[test]
    fn diversity_ties_pick_smallest_id() {
        let kg = build(&[("a", "r1", "b")]);
        assert_eq!(max_relation_diversity(&kg).unwrap(), (1, EntityId(0)));
    }

    fn arb_triples() -> impl Strategy<Value = Vec<(u8, u8, u8)>> {
        proptest::collection::vec((0u8..12, 0u8..6, 0u8..12), 1..80)
    }

    fn to_kg(ts: &[(u8, u8, u8)]) -> KnowledgeGraph {
        let mut b = GraphBuilder::new();
        for (h, r, t) in ts {
            b.add(&format!("e{h}"), &format!("r{r}"), &format!("e{t}"));
        }
        b.build(SplitSelection::TrainOnly)
    }

    proptest! {
        #[test]
        fn profile_invariants(ts in arb_triples()) {
            let kg = to_kg(&ts);
            let p = semantic_profile(&kg).unwrap();
            let total: f64 = p.per_relation_frequency.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(p.relation_entropy >= 0.0);
            prop_assert!(p.relation_entropy <= (p.relation_count as f64).log2() + 1e-12);
            prop_assert_eq!(p.max_relation_diversity, *p.per_entity_diversity.iter().max().unwrap());
            prop_assert!(p.per_entity_diversity.iter().all(|&d| d <= p.relation_count));

            // Triple-scan recount.
            for (e, &d) in p.per_entity_diversity.iter().enumerate() {
                let set: HashSet<_> = kg.triples().iter()
                    .filter(|t| t.head.index() == e || t.tail.index() == e)
                    .map(|t| t.relation).collect();
                prop_assert_eq!(set.len(), d);
            }
        }

        #[test]
        fn entropy_ignores_relation_labels(ts in arb_triples()) {
            let a = to_kg(&ts);
            let relabelled: Vec<_> = ts.iter().map(|&(h, r, t)| (h, 5 - r, t)).collect();
            let b = to_kg(&relabelled);
            prop_assert!((relation_entropy(&a).unwrap() - relation_entropy(&b).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn duplicate_triple_moves_entropy_a_little(ts in arb_triples(), pick in any::<prop::sample::Index>()) {
            let a = to_kg(&ts);
            let mut more = ts.clone();
            more.push(ts[pick.index(ts.len())]);
            let b = to_kg(&more);
            prop_assert_eq!(relation_count(&a), relation_count(&b));
            prop_assert_eq!(max_relation_diversity(&a).unwrap().0, max_relation_diversity(&b).unwrap().0);
            // The new distribution mixes the old one with a point mass at weight 1/(n+1):
            // |ΔH| ≤ h2(1/(n+1)) + H/(n+1).
            let n = ts.len() as f64;
            let w = 1.0 / (n + 1.0);
            let h2 = -w * w.log2() - (1.0 - w) * (1.0 - w).log2();
            let bound = h2 + relation_entropy(&a).unwrap() * w;
            let delta = (relation_entropy(&a).unwrap() - relation_entropy(&b).unwrap()).abs();
            prop_assert!(delta <= bound + 1e-12, "{} > {}", delta, bound);
        }
    }
}
