//! Agglomerative inner-product matching and contraction.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algdist::{self, AlgdConfig};
use crate::error::Result;
use crate::hypergraph::Hypergraph;

/// Assignment of fine vertices to clusters `0..cluster_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    pub cluster_of: Vec<usize>,
    pub cluster_count: usize,
}

/// One coarsening step: the coarse hypergraph and the fine-to-coarse map.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseningLevel {
    pub coarse: Hypergraph,
    pub map: Vec<usize>,
    pub level_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoarseningMode {
    /// Match on the original hyperedge weights.
    Plain,
    /// Match on algebraically re-weighted hyperedges.
    #[default]
    Algebraic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoarsenConfig {
    pub mode: CoarseningMode,
    pub algd: AlgdConfig,
    /// No cluster may grow heavier than this.
    pub max_cluster_weight: f64,
}

/// Greedy agglomerative matching.
///
/// Vertices are visited in a random order. An unclustered vertex `v` joins
/// the adjacent cluster `C` maximising `N(v, C) / W(v, C)`, where `N` sums
/// the weights of hyperedges containing `v` and some member of `C`, and `W`
/// is the weight of `C` plus `v`. Unclustered neighbours count as singleton
/// candidates. Candidates that would exceed `max_cluster_weight` are skipped,
/// and ties go to the candidate seen earliest in the visit order.
pub fn inner_product_matching<R: Rng>(
    h: &Hypergraph,
    weights: &[f64],
    max_cluster_weight: f64,
    rng: &mut R,
) -> Clustering {
    let mut order: Vec<usize> = (0..h.vertex_count()).collect();
    order.shuffle(rng);
    match_in_order(h, weights, max_cluster_weight, &order)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Candidate {
    Cluster(usize),
    Vertex(usize),
}

pub(crate) fn match_in_order(
    h: &Hypergraph,
    weights: &[f64],
    max_cluster_weight: f64,
    order: &[usize],
) -> Clustering {
    assert_eq!(weights.len(), h.edge_count());
    let n = h.vertex_count();
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }

    let mut cluster_of = vec![usize::MAX; n];
    let mut cluster_weight: Vec<f64> = Vec::new();
    let mut cluster_rank: Vec<usize> = Vec::new();

    // Scratch accumulators, indexed by cluster id and by vertex id.
    let mut gain_cluster: Vec<f64> = Vec::new();
    let mut gain_vertex = vec![0.0; n];
    let mut edge_stamp_cluster: Vec<usize> = Vec::new();
    let mut edge_stamp_vertex = vec![usize::MAX; n];
    let mut touched: Vec<Candidate> = Vec::new();

    for &v in order {
        if cluster_of[v] != usize::MAX {
            continue;
        }
        touched.clear();
        for &e in h.incident_edges(v) {
            let w = weights[e];
            for &u in h.pins(e) {
                if u == v {
                    continue;
                }
                match cluster_of[u] {
                    usize::MAX => {
                        if edge_stamp_vertex[u] == usize::MAX {
                            touched.push(Candidate::Vertex(u));
                            gain_vertex[u] = 0.0;
                        }
                        if edge_stamp_vertex[u] != e {
                            edge_stamp_vertex[u] = e;
                            gain_vertex[u] += w;
                        }
                    }
                    c => {
                        if edge_stamp_cluster[c] == usize::MAX {
                            touched.push(Candidate::Cluster(c));
                            gain_cluster[c] = 0.0;
                        }
                        if edge_stamp_cluster[c] != e {
                            edge_stamp_cluster[c] = e;
                            gain_cluster[c] += w;
                        }
                    }
                }
            }
        }

        let wv = h.vertex_weight(v);
        let mut best: Option<(f64, usize, Candidate)> = None;
        for &cand in &touched {
            let (connection, weight, seen_at) = match cand {
                Candidate::Cluster(c) => (gain_cluster[c], cluster_weight[c], cluster_rank[c]),
                Candidate::Vertex(u) => (gain_vertex[u], h.vertex_weight(u), rank[u]),
            };
            let merged = weight + wv;
            if merged > max_cluster_weight {
                continue;
            }
            let score = if merged > 0.0 {
                connection / merged
            } else {
                f64::INFINITY
            };
            let better = match best {
                None => true,
                Some((s, r, _)) => score > s || (score == s && seen_at < r),
            };
            if better {
                best = Some((score, seen_at, cand));
            }
        }
        for &cand in &touched {
            match cand {
                Candidate::Cluster(c) => edge_stamp_cluster[c] = usize::MAX,
                Candidate::Vertex(u) => edge_stamp_vertex[u] = usize::MAX,
            }
        }

        match best.map(|b| b.2) {
            Some(Candidate::Cluster(c)) => {
                cluster_of[v] = c;
                cluster_weight[c] += wv;
            }
            Some(Candidate::Vertex(u)) => {
                let c = cluster_weight.len();
                cluster_of[v] = c;
                cluster_of[u] = c;
                cluster_weight.push(wv + h.vertex_weight(u));
                cluster_rank.push(rank[v].min(rank[u]));
                gain_cluster.push(0.0);
                edge_stamp_cluster.push(usize::MAX);
            }
            None => {
                cluster_of[v] = cluster_weight.len();
                cluster_weight.push(wv);
                cluster_rank.push(rank[v]);
                gain_cluster.push(0.0);
                edge_stamp_cluster.push(usize::MAX);
            }
        }
    }

    Clustering {
        cluster_count: cluster_weight.len(),
        cluster_of,
    }
}

/// Merges every cluster into one coarse vertex.
///
/// Coarse vertex weights are sums of their members. Hyperedge pins are
/// mapped through the clustering and deduplicated; edges left with a single
/// pin disappear, and edges with identical pin sets are merged with summed
/// weight. Coarse edges keep the order of their first fine occurrence.
pub fn contract(h: &Hypergraph, c: &Clustering, level_index: usize) -> CoarseningLevel {
    assert_eq!(c.cluster_of.len(), h.vertex_count());
    let mut vertex_weights = vec![0.0; c.cluster_count];
    for (v, &cv) in c.cluster_of.iter().enumerate() {
        vertex_weights[cv] += h.vertex_weight(v);
    }

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut edge_pins: Vec<Vec<usize>> = Vec::new();
    let mut edge_weights: Vec<f64> = Vec::new();
    let mut stamp = vec![usize::MAX; c.cluster_count];
    for e in 0..h.edge_count() {
        let mut pins: Vec<usize> = Vec::with_capacity(h.cardinality(e));
        for &v in h.pins(e) {
            let cv = c.cluster_of[v];
            if stamp[cv] != e {
                stamp[cv] = e;
                pins.push(cv);
            }
        }
        if pins.len() < 2 {
            continue;
        }
        pins.sort_unstable();
        match index.get(&pins) {
            Some(&id) => edge_weights[id] += h.edge_weight(e),
            None => {
                index.insert(pins.clone(), edge_pins.len());
                edge_pins.push(pins);
                edge_weights.push(h.edge_weight(e));
            }
        }
    }

    let mut pin_offsets = Vec::with_capacity(edge_pins.len() + 1);
    pin_offsets.push(0);
    let mut flat = Vec::new();
    for pins in &edge_pins {
        flat.extend_from_slice(pins);
        pin_offsets.push(flat.len());
    }

    CoarseningLevel {
        coarse: Hypergraph::from_raw(vertex_weights, edge_weights, pin_offsets, flat),
        map: c.cluster_of.clone(),
        level_index,
    }
}

/// Matching weights for one level: either the original hyperedge weights or
/// their algebraic re-weighting.
pub fn matching_weights<R: Rng>(
    h: &Hypergraph,
    cfg: &CoarsenConfig,
    rng: &mut R,
) -> Result<Vec<f64>> {
    match cfg.mode {
        CoarseningMode::Algebraic if h.edge_count() > 0 => {
            let algd = AlgdConfig {
                seed: rng.random(),
                ..cfg.algd.clone()
            };
            algdist::reweight(h, &algd)
        }
        _ => Ok(h.edge_weights().to_vec()),
    }
}

/// One aggregation/contraction step.
///
/// The re-weighted hyperedge weights only steer matching; the coarse
/// hypergraph carries sums of the original weights.
pub fn coarsen_level<R: Rng>(
    h: &Hypergraph,
    cfg: &CoarsenConfig,
    level_index: usize,
    rng: &mut R,
) -> Result<CoarseningLevel> {
    let weights = matching_weights(h, cfg, rng)?;
    let clustering = inner_product_matching(h, &weights, cfg.max_cluster_weight, rng);
    Ok(contract(h, &clustering, level_index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::hyperedge_cut;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn picks_highest_connectivity_ratio() {
        // v=0 (w 0.5); u=1 (w 1.5) via an edge of weight 3: 3 / 2 = 1.5
        // t=2 (w 0.5) via an edge of weight 2: 2 / 1 = 2.0
        let h = Hypergraph::new(
            &[vec![0, 1], vec![0, 2]],
            vec![0.5, 1.5, 0.5],
            vec![3.0, 2.0],
        )
        .unwrap();
        // cap 2 keeps u from joining {v, t} afterwards
        let c = match_in_order(&h, h.edge_weights(), 2.0, &[0, 1, 2]);
        assert_eq!(c.cluster_of[0], c.cluster_of[2]);
        assert_ne!(c.cluster_of[0], c.cluster_of[1]);
        assert_eq!(c.cluster_count, 2);
    }

    #[test]
    fn joins_existing_cluster() {
        let h =
            Hypergraph::unweighted(4, &[vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]]).unwrap();
        let c = match_in_order(&h, h.edge_weights(), f64::INFINITY, &[0, 2, 1, 3]);
        // visiting 0: vertices 1 and 2 both score 1/2; 2 comes first in the order
        assert_eq!(c.cluster_of[0], c.cluster_of[2]);
        // 1 reaches {0, 2} through two edges: 2 / 3
        assert_eq!(c.cluster_of[1], c.cluster_of[0]);
        // 3 reaches {0, 1, 2} through one edge: 1 / 4
        assert_eq!(c.cluster_count, 1);
    }

    #[test]
    fn isolated_vertex_is_singleton() {
        let h = Hypergraph::unweighted(3, &[vec![0, 1]]).unwrap();
        let c = match_in_order(&h, h.edge_weights(), f64::INFINITY, &[2, 0, 1]);
        assert_eq!(c.cluster_count, 2);
        assert_eq!(c.cluster_of, vec![1, 1, 0]);
    }

    #[test]
    fn respects_cluster_cap() {
        let h = Hypergraph::unweighted(2, &[vec![0, 1]]).unwrap();
        let c = match_in_order(&h, h.edge_weights(), 1.5, &[0, 1]);
        assert_eq!(c.cluster_count, 2);
    }

    #[test]
    fn contraction_examples() {
        let h = Hypergraph::unweighted(3, &[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let c = Clustering {
            cluster_of: vec![0, 0, 1],
            cluster_count: 2,
        };
        let level = contract(&h, &c, 0);
        assert_eq!(level.coarse.vertex_weights(), &[2.0, 1.0]);
        // {0,1} collapses and is dropped; {0,2} and {1,2} merge into one edge
        assert_eq!(level.coarse.pin_lists(), vec![vec![0, 1]]);
        assert_eq!(level.coarse.edge_weights(), &[2.0]);
    }

    #[test]
    fn plain_level_equals_manual_composition() {
        let h =
            Hypergraph::unweighted(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap();
        let cfg = CoarsenConfig {
            mode: CoarseningMode::Plain,
            algd: AlgdConfig::default(),
            max_cluster_weight: 2.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let level = coarsen_level(&h, &cfg, 0, &mut rng).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let manual = contract(
            &h,
            &inner_product_matching(&h, h.edge_weights(), 2.0, &mut rng),
            0,
        );
        assert_eq!(level, manual);
    }

    #[test]
    fn uniform_algebraic_weights_match_plain() {
        // A single hyperedge always gets a scaled weight equal to its own.
        let h = Hypergraph::unweighted(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let mut cfg = CoarsenConfig {
            mode: CoarseningMode::Algebraic,
            algd: AlgdConfig::default(),
            max_cluster_weight: 3.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = matching_weights(&h, &cfg, &mut rng).unwrap();
        assert_eq!(w, vec![1.0]);
        cfg.mode = CoarseningMode::Plain;
        assert_eq!(matching_weights(&h, &cfg, &mut rng).unwrap(), vec![1.0]);
    }

    fn arb_case() -> impl Strategy<Value = (Hypergraph, u64)> {
        (3usize..14).prop_flat_map(|n| {
            (
                prop::collection::vec(prop::collection::vec(0..n, 2..5), 1..14),
                prop::collection::vec(prop_oneof![Just(0.5), Just(1.0), Just(2.0)], n),
                any::<u64>(),
            )
                .prop_map(|(edges, vw, seed)| {
                    let m = edges.len();
                    let ew = (0..m).map(|i| [1.0, 3.0, 0.5][i % 3]).collect();
                    (Hypergraph::new(&edges, vw, ew).unwrap(), seed)
                })
        })
    }

    proptest! {
        #[test]
        fn level_invariants((h, seed) in arb_case(), algebraic in any::<bool>()) {
            let total = h.total_vertex_weight();
            let cap = total / 2.1;
            let cfg = CoarsenConfig {
                mode: if algebraic { CoarseningMode::Algebraic } else { CoarseningMode::Plain },
                algd: AlgdConfig { num_iter: 5, num_random: 2, ..AlgdConfig::default() },
                max_cluster_weight: cap,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let level = coarsen_level(&h, &cfg, 0, &mut rng).unwrap();
            let coarse = &level.coarse;

            prop_assert!((coarse.total_vertex_weight() - total).abs() < 1e-12);
            prop_assert!(coarse.vertex_count() <= h.vertex_count());
            prop_assert!(coarse.pin_count() <= h.pin_count());
            prop_assert!(coarse.vertex_count() >= 1);
            // surjective map, weights are member sums, and the cap holds for merged clusters
            let mut sums = vec![0.0; coarse.vertex_count()];
            let mut sizes = vec![0usize; coarse.vertex_count()];
            for (v, &c) in level.map.iter().enumerate() {
                sums[c] += h.vertex_weight(v);
                sizes[c] += 1;
            }
            for c in 0..coarse.vertex_count() {
                prop_assert!(sizes[c] > 0);
                prop_assert!((sums[c] - coarse.vertex_weight(c)).abs() < 1e-12);
                if sizes[c] > 1 {
                    prop_assert!(sums[c] <= cap + 1e-12);
                }
            }
            // coarse edge weights are sums of original fine weights
            let mut expected: HashMap<Vec<usize>, f64> = HashMap::new();
            for (e, pins) in h.edges().enumerate() {
                let mut mapped: Vec<usize> = pins.iter().map(|&v| level.map[v]).collect();
                mapped.sort_unstable();
                mapped.dedup();
                if mapped.len() >= 2 {
                    *expected.entry(mapped).or_default() += h.edge_weight(e);
                }
            }
            prop_assert_eq!(expected.len(), coarse.edge_count());
            for (e, pins) in coarse.edges().enumerate() {
                prop_assert!((expected[pins] - coarse.edge_weight(e)).abs() < 1e-12);
            }
            // every coarse edge is no larger than some fine edge mapping onto it
            for pins in coarse.edges() {
                prop_assert!(pins.len() >= 2);
                prop_assert!(pins.len() <= h.edges().map(|p| p.len()).max().unwrap());
            }
        }

        #[test]
        fn projected_cut_matches_coarse_cut((h, seed) in arb_case(), bits in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = inner_product_matching(&h, h.edge_weights(), f64::INFINITY, &mut rng);
            let level = contract(&h, &c, 0);
            let coarse_parts: Vec<usize> =
                (0..level.coarse.vertex_count()).map(|i| ((bits >> (i % 64)) & 1) as usize).collect();
            let fine_parts: Vec<usize> = level.map.iter().map(|&c| coarse_parts[c]).collect();
            let coarse_cut = hyperedge_cut(&level.coarse, &coarse_parts, 2).unwrap();
            let fine_cut = hyperedge_cut(&h, &fine_parts, 2).unwrap();
            prop_assert!((coarse_cut - fine_cut).abs() < 1e-9);
        }

        #[test]
        fn matching_is_deterministic((h, seed) in arb_case()) {
            let a = inner_product_matching(&h, h.edge_weights(), 3.0, &mut ChaCha8Rng::seed_from_u64(seed));
            let b = inner_product_matching(&h, h.edge_weights(), 3.0, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(a, b);
        }
    }
}
