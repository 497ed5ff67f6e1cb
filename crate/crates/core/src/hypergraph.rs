//! Weighted hypergraph with bidirectional incidence.
//!
//! Pins are stored in compressed form: the pins of hyperedge `e` are
//! `pins[pin_offsets[e]..pin_offsets[e + 1]]`, and the transpose is kept in
//! the same layout so that both directions are slices.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    vertex_weights: Vec<f64>,
    edge_weights: Vec<f64>,
    pin_offsets: Vec<usize>,
    pins: Vec<usize>,
    incidence_offsets: Vec<usize>,
    incidence: Vec<usize>,
}

impl Hypergraph {
    /// Builds a validated hypergraph.
    ///
    /// The vertex count is `vertex_weights.len()`. Duplicate pins inside a
    /// hyperedge are collapsed (first occurrence wins), and hyperedges that end
    /// up with zero weight or fewer than two pins are removed. Identical
    /// hyperedges are kept as separate edges.
    pub fn new<P>(pins: &[P], vertex_weights: Vec<f64>, edge_weights: Vec<f64>) -> Result<Self>
    where
        P: AsRef<[usize]>,
    {
        if edge_weights.len() != pins.len() {
            return Err(Error::WeightCount {
                kind: "hyperedge",
                expected: pins.len(),
                got: edge_weights.len(),
            });
        }
        check_weights("vertex", &vertex_weights)?;
        check_weights("hyperedge", &edge_weights)?;

        let n = vertex_weights.len();
        let mut seen = vec![usize::MAX; n];
        let mut kept_weights = Vec::with_capacity(pins.len());
        let mut pin_offsets = Vec::with_capacity(pins.len() + 1);
        let mut flat = Vec::new();
        pin_offsets.push(0);

        for (e, edge) in pins.iter().enumerate() {
            let start = flat.len();
            for &v in edge.as_ref() {
                if v >= n {
                    return Err(Error::VertexOutOfRange {
                        edge: e,
                        vertex: v,
                        vertex_count: n,
                    });
                }
                if seen[v] != e {
                    seen[v] = e;
                    flat.push(v);
                }
            }
            if flat.len() - start < 2 || edge_weights[e] == 0.0 {
                flat.truncate(start);
                continue;
            }
            kept_weights.push(edge_weights[e]);
            pin_offsets.push(flat.len());
        }

        Ok(Self::from_raw(
            vertex_weights,
            kept_weights,
            pin_offsets,
            flat,
        ))
    }

    /// Hypergraph with unit vertex and hyperedge weights.
    pub fn unweighted<P>(vertex_count: usize, pins: &[P]) -> Result<Self>
    where
        P: AsRef<[usize]>,
    {
        Self::new(pins, vec![1.0; vertex_count], vec![1.0; pins.len()])
    }

    /// Assembles a hypergraph from already validated compressed storage.
    pub(crate) fn from_raw(
        vertex_weights: Vec<f64>,
        edge_weights: Vec<f64>,
        pin_offsets: Vec<usize>,
        pins: Vec<usize>,
    ) -> Self {
        let n = vertex_weights.len();
        let mut degree = vec![0usize; n + 1];
        for &v in &pins {
            degree[v + 1] += 1;
        }
        for v in 0..n {
            degree[v + 1] += degree[v];
        }
        let incidence_offsets = degree;
        let mut fill = incidence_offsets.clone();
        let mut incidence = vec![0usize; pins.len()];
        for e in 0..edge_weights.len() {
            for &v in &pins[pin_offsets[e]..pin_offsets[e + 1]] {
                incidence[fill[v]] = e;
                fill[v] += 1;
            }
        }
        Self {
            vertex_weights,
            edge_weights,
            pin_offsets,
            pins,
            incidence_offsets,
            incidence,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_weights.len()
    }

    pub fn pin_count(&self) -> usize {
        self.pins.len()
    }

    #[inline]
    pub fn pins(&self, edge: usize) -> &[usize] {
        &self.pins[self.pin_offsets[edge]..self.pin_offsets[edge + 1]]
    }

    #[inline]
    pub fn incident_edges(&self, vertex: usize) -> &[usize] {
        &self.incidence[self.incidence_offsets[vertex]..self.incidence_offsets[vertex + 1]]
    }

    #[inline]
    pub fn cardinality(&self, edge: usize) -> usize {
        self.pin_offsets[edge + 1] - self.pin_offsets[edge]
    }

    #[inline]
    pub fn degree(&self, vertex: usize) -> usize {
        self.incidence_offsets[vertex + 1] - self.incidence_offsets[vertex]
    }

    pub fn vertex_weight(&self, vertex: usize) -> f64 {
        self.vertex_weights[vertex]
    }

    pub fn edge_weight(&self, edge: usize) -> f64 {
        self.edge_weights[edge]
    }

    pub fn vertex_weights(&self) -> &[f64] {
        &self.vertex_weights
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    pub fn total_vertex_weight(&self) -> f64 {
        self.vertex_weights.iter().sum()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        (0..self.edge_count()).map(move |e| self.pins(e))
    }

    /// Pin lists as owned vectors, e.g. for rebuilding.
    pub fn pin_lists(&self) -> Vec<Vec<usize>> {
        self.edges().map(<[usize]>::to_vec).collect()
    }

    /// Copy of this hypergraph with different hyperedge weights.
    pub fn with_edge_weights(&self, edge_weights: Vec<f64>) -> Result<Self> {
        if edge_weights.len() != self.edge_count() {
            return Err(Error::WeightCount {
                kind: "hyperedge",
                expected: self.edge_count(),
                got: edge_weights.len(),
            });
        }
        check_weights("hyperedge", &edge_weights)?;
        if let Some(index) = edge_weights.iter().position(|&w| w == 0.0) {
            return Err(Error::InvalidWeight {
                kind: "hyperedge",
                index,
                value: 0.0,
            });
        }
        Ok(Self {
            edge_weights,
            ..self.clone()
        })
    }

    /// Number of connected components of the star expansion.
    ///
    /// Every stored hyperedge has at least two pins, so hyperedge nodes never
    /// form components of their own and it suffices to union vertices.
    pub fn star_components(&self) -> usize {
        let mut dsu = DisjointSets::new(self.vertex_count());
        for pins in self.edges() {
            for w in pins.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        dsu.count()
    }

    /// Component id (0-based, in order of first vertex) for every vertex.
    pub fn vertex_components(&self) -> Vec<usize> {
        let mut dsu = DisjointSets::new(self.vertex_count());
        for pins in self.edges() {
            for w in pins.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        let mut label = vec![usize::MAX; self.vertex_count()];
        let mut next = 0;
        (0..self.vertex_count())
            .map(|v| {
                let root = dsu.find(v);
                if label[root] == usize::MAX {
                    label[root] = next;
                    next += 1;
                }
                label[root]
            })
            .collect()
    }

    /// Hypergraph induced by `vertices`: keeps only hyperedges whose pins all
    /// lie in the subset. Vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let vertex_weights = vertices.iter().map(|&v| self.vertex_weights[v]).collect();
        let mut edge_weights = Vec::new();
        let mut pin_offsets = vec![0];
        let mut pins = Vec::new();
        for e in 0..self.edge_count() {
            let edge = self.pins(e);
            if edge.iter().all(|&v| local[v] != usize::MAX) {
                pins.extend(edge.iter().map(|&v| local[v]));
                pin_offsets.push(pins.len());
                edge_weights.push(self.edge_weights[e]);
            }
        }
        Self::from_raw(vertex_weights, edge_weights, pin_offsets, pins)
    }
}

fn check_weights(kind: &'static str, weights: &[f64]) -> Result<()> {
    match weights
        .iter()
        .enumerate()
        .find(|(_, w)| !w.is_finite() || **w < 0.0)
    {
        Some((index, &value)) => Err(Error::InvalidWeight { kind, index, value }),
        None => Ok(()),
    }
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.components -= 1;
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builds_chain() {
        let h = Hypergraph::unweighted(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.incident_edges(1), &[0, 1]);
        assert_eq!(h.incident_edges(0), &[0]);
        assert_eq!(h.pins(1), &[1, 2]);
    }

    #[test]
    fn drops_singleton_edges() {
        let h = Hypergraph::unweighted(3, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.incident_edges(2), &[] as &[usize]);
    }

    #[test]
    fn drops_zero_weight_edges() {
        let h = Hypergraph::new(&[vec![0, 1]], vec![1.0; 2], vec![0.0]).unwrap();
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn dedups_pins() {
        let h = Hypergraph::unweighted(3, &[vec![2, 0, 2, 0]]).unwrap();
        assert_eq!(h.pins(0), &[2, 0]);
        // duplicates collapsing to a singleton are dropped
        let h = Hypergraph::unweighted(3, &[vec![1, 1]]).unwrap();
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn keeps_identical_edges() {
        let h = Hypergraph::unweighted(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Hypergraph::unweighted(2, &[vec![0, 2]]),
            Err(Error::VertexOutOfRange { vertex: 2, .. })
        ));
        assert!(matches!(
            Hypergraph::new(&[vec![0, 1]], vec![1.0, -1.0], vec![1.0]),
            Err(Error::InvalidWeight {
                kind: "vertex",
                index: 1,
                ..
            })
        ));
        assert!(matches!(
            Hypergraph::new(&[vec![0, 1]], vec![1.0; 2], vec![f64::NAN]),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            Hypergraph::new(&[vec![0, 1]], vec![1.0; 2], vec![]),
            Err(Error::WeightCount { .. })
        ));
    }

    #[test]
    fn star_components_examples() {
        let chain = Hypergraph::unweighted(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(chain.star_components(), 1);
        let islands = Hypergraph::unweighted(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(islands.star_components(), 2);
        assert_eq!(islands.vertex_components(), vec![0, 0, 1, 1]);
        let empty = Hypergraph::unweighted(3, &[] as &[Vec<usize>]).unwrap();
        assert_eq!(empty.star_components(), 3);
    }

    #[test]
    fn induced_keeps_internal_edges() {
        let h = Hypergraph::unweighted(4, &[vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let sub = h.induced(&[2, 3, 1]);
        assert_eq!(sub.vertex_count(), 3);
        assert_eq!(sub.pin_lists(), vec![vec![2, 0], vec![0, 1]]);
    }

    fn arb_input() -> impl Strategy<Value = (usize, Vec<Vec<usize>>, Vec<f64>)> {
        (1usize..10).prop_flat_map(|n| {
            let edges = prop::collection::vec(prop::collection::vec(0..n, 0..6), 0..8);
            (Just(n), edges).prop_flat_map(|(n, edges)| {
                let m = edges.len();
                (
                    Just(n),
                    Just(edges),
                    prop::collection::vec(prop_oneof![Just(0.0), 0.1f64..5.0], m),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn incidence_is_transpose((n, edges, ew) in arb_input()) {
            let h = Hypergraph::new(&edges, vec![1.0; n], ew).unwrap();
            let mut count = 0;
            for e in 0..h.edge_count() {
                prop_assert!(h.cardinality(e) >= 2);
                prop_assert!(h.edge_weight(e) > 0.0);
                for &v in h.pins(e) {
                    prop_assert!(h.incident_edges(v).contains(&e));
                    count += 1;
                }
            }
            let total: usize = (0..n).map(|v| h.degree(v)).sum();
            prop_assert_eq!(total, count);
        }

        #[test]
        fn rebuild_is_identity((n, edges, ew) in arb_input()) {
            let h = Hypergraph::new(&edges, vec![1.0; n], ew).unwrap();
            let again = Hypergraph::new(
                &h.pin_lists(),
                h.vertex_weights().to_vec(),
                h.edge_weights().to_vec(),
            )
            .unwrap();
            prop_assert_eq!(h, again);
        }
    }
}
