//! Partitions and their quality metrics.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// A total assignment of vertices to `k` parts, with metrics cached at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    parts: Vec<usize>,
    k: usize,
    cut: f64,
    connectivity: f64,
    imbalance: f64,
}

impl Partition {
    pub fn new(h: &Hypergraph, parts: Vec<usize>, k: usize) -> Result<Self> {
        check_assignment(h, &parts, k)?;
        let (cut, connectivity) = cut_and_connectivity(h, &parts, k);
        let imbalance = imbalance(h, &parts, k)?;
        Ok(Self {
            parts,
            k,
            cut,
            connectivity,
            imbalance,
        })
    }

    /// All vertices in part 0.
    pub fn trivial(h: &Hypergraph) -> Result<Self> {
        Self::new(h, vec![0; h.vertex_count()], 1)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn part_of(&self, vertex: usize) -> usize {
        self.parts[vertex]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cut(&self) -> f64 {
        self.cut
    }

    pub fn connectivity(&self) -> f64 {
        self.connectivity
    }

    pub fn imbalance(&self) -> f64 {
        self.imbalance
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.parts
    }
}

fn check_assignment(h: &Hypergraph, parts: &[usize], k: usize) -> Result<()> {
    if parts.len() != h.vertex_count() {
        return Err(Error::PartitionLength {
            expected: h.vertex_count(),
            got: parts.len(),
        });
    }
    if k == 0 {
        return Err(Error::Validation("k must be at least 1".into()));
    }
    match parts.iter().position(|&p| p >= k) {
        Some(vertex) => Err(Error::PartOutOfRange {
            vertex,
            part: parts[vertex],
            k,
        }),
        None => Ok(()),
    }
}

/// Both cut metrics in one pass over the pins. `parts` must be validated.
fn cut_and_connectivity(h: &Hypergraph, parts: &[usize], k: usize) -> (f64, f64) {
    let mut stamp = vec![usize::MAX; k];
    let mut cut = 0.0;
    let mut connectivity = 0.0;
    for e in 0..h.edge_count() {
        let mut spanned = 0usize;
        for &v in h.pins(e) {
            let p = parts[v];
            if stamp[p] != e {
                stamp[p] = e;
                spanned += 1;
            }
        }
        if spanned > 1 {
            let w = h.edge_weight(e);
            cut += w;
            connectivity += w * (spanned - 1) as f64;
        }
    }
    (cut, connectivity)
}

/// Total weight of hyperedges whose pins lie in two or more parts.
pub fn hyperedge_cut(h: &Hypergraph, parts: &[usize], k: usize) -> Result<f64> {
    check_assignment(h, parts, k)?;
    Ok(cut_and_connectivity(h, parts, k).0)
}

/// Sum of `w(e) * (lambda(e) - 1)`, where `lambda(e)` counts the parts that
/// `e` touches.
pub fn connectivity_metric(h: &Hypergraph, parts: &[usize], k: usize) -> Result<f64> {
    check_assignment(h, parts, k)?;
    Ok(cut_and_connectivity(h, parts, k).1)
}

/// Heaviest part weight over average part weight.
pub fn imbalance(h: &Hypergraph, parts: &[usize], k: usize) -> Result<f64> {
    check_assignment(h, parts, k)?;
    let total = h.total_vertex_weight();
    if h.vertex_count() == 0 || total <= 0.0 {
        return Err(Error::Validation(
            "imbalance is undefined for a hypergraph with zero total vertex weight".into(),
        ));
    }
    let loads = part_weights(h, parts, k);
    let heaviest = loads.iter().copied().fold(0.0, f64::max);
    Ok(heaviest / (total / k as f64))
}

/// Vertex weight per part. `parts` entries must be below `k`.
pub fn part_weights(h: &Hypergraph, parts: &[usize], k: usize) -> Vec<f64> {
    let mut loads = vec![0.0; k];
    for (v, &p) in parts.iter().enumerate() {
        loads[p] += h.vertex_weight(v);
    }
    loads
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn chain() -> Hypergraph {
        Hypergraph::unweighted(3, &[vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn cut_examples() {
        let h = chain();
        assert_eq!(hyperedge_cut(&h, &[0, 0, 1], 2).unwrap(), 1.0);
        assert_eq!(hyperedge_cut(&h, &[0, 0, 0], 2).unwrap(), 0.0);
        assert!(matches!(
            hyperedge_cut(&h, &[0, 2, 0], 2),
            Err(Error::PartOutOfRange {
                vertex: 1,
                part: 2,
                ..
            })
        ));
        assert!(matches!(
            hyperedge_cut(&h, &[0, 0], 2),
            Err(Error::PartitionLength { .. })
        ));
    }

    #[test]
    fn connectivity_examples() {
        let h = Hypergraph::unweighted(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(connectivity_metric(&h, &[0, 1, 2], 3).unwrap(), 2.0);
        assert_eq!(connectivity_metric(&h, &[1, 1, 1], 3).unwrap(), 0.0);
    }

    #[test]
    fn imbalance_examples() {
        let h = Hypergraph::unweighted(4, &[vec![0, 1]]).unwrap();
        assert_eq!(imbalance(&h, &[0, 0, 0, 1], 2).unwrap(), 1.5);
        assert_eq!(imbalance(&h, &[0, 0, 1, 1], 2).unwrap(), 1.0);
        let h8 = Hypergraph::unweighted(8, &[vec![0, 1]]).unwrap();
        assert_eq!(imbalance(&h8, &[0, 0, 0, 0, 1, 1, 2, 3], 4).unwrap(), 2.0);
        let empty = Hypergraph::unweighted(0, &[] as &[Vec<usize>]).unwrap();
        assert!(matches!(
            imbalance(&empty, &[], 2),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn partition_caches_metrics() {
        let h = chain();
        let p = Partition::new(&h, vec![0, 1, 0], 2).unwrap();
        assert_eq!(p.cut(), 2.0);
        assert_eq!(p.connectivity(), 2.0);
        assert_eq!(p.imbalance(), 2.0 / 1.5);
        let t = Partition::trivial(&h).unwrap();
        assert_eq!((t.cut(), t.imbalance()), (0.0, 1.0));
    }

    // Independent recount: builds the set of parts for every edge.
    fn recount(h: &Hypergraph, parts: &[usize]) -> (f64, f64) {
        let mut cut = 0.0;
        let mut conn = 0.0;
        for (e, pins) in h.edges().enumerate() {
            let spanned: BTreeSet<usize> = pins.iter().map(|&v| parts[v]).collect();
            if spanned.len() >= 2 {
                cut += h.edge_weight(e);
                conn += h.edge_weight(e) * (spanned.len() as f64 - 1.0);
            }
        }
        (cut, conn)
    }

    fn arb_instance() -> impl Strategy<Value = (Hypergraph, Vec<usize>, usize)> {
        (2usize..9, 1usize..5).prop_flat_map(|(n, k)| {
            (
                prop::collection::vec(prop::collection::vec(0..n, 2..5), 1..10),
                prop::collection::vec(0.5f64..3.0, n),
                prop::collection::vec(0..k, n),
                Just(k),
            )
                .prop_map(|(edges, vw, parts, k)| {
                    let m = edges.len();
                    let h = Hypergraph::new(&edges, vw, vec![1.0; m]).unwrap();
                    (h, parts, k)
                })
        })
    }

    proptest! {
        #[test]
        fn metrics_match_recount((h, parts, k) in arb_instance()) {
            let (cut, conn) = recount(&h, &parts);
            prop_assert_eq!(hyperedge_cut(&h, &parts, k).unwrap(), cut);
            prop_assert_eq!(connectivity_metric(&h, &parts, k).unwrap(), conn);
            prop_assert!(conn >= cut);
            if k == 2 {
                prop_assert_eq!(conn, cut);
            }
            prop_assert!(imbalance(&h, &parts, k).unwrap() >= 1.0 - 1e-12);
        }

        #[test]
        fn metrics_invariant_under_relabeling((h, parts, k) in arb_instance(), shift in 0usize..4) {
            let relabeled: Vec<usize> = parts.iter().map(|&p| (p + shift) % k).collect();
            let a = Partition::new(&h, parts, k).unwrap();
            let b = Partition::new(&h, relabeled, k).unwrap();
            prop_assert_eq!(a.cut(), b.cut());
            prop_assert_eq!(a.connectivity(), b.connectivity());
            prop_assert!((a.imbalance() - b.imbalance()).abs() < 1e-12);
        }
    }
}
