//! Random hypergraph families used by tests, the verification suite and
//! benchmarks.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::hypergraph::{DisjointSets, Hypergraph};

const WEIGHTS: [f64; 3] = [1.0, 2.0, 0.5];

/// Small weighted hypergraph: 3 to 12 vertices, 2 to 10 hyperedges of
/// cardinality 2 to 4, weights drawn from {1, 2, 0.5}. Uncovered vertices are
/// patched into an edge (or a new pair edge) so the star expansion has no
/// isolated node.
pub fn random_small<R: Rng>(rng: &mut R) -> Hypergraph {
    let n = rng.random_range(3..=12);
    let m = rng.random_range(2..=10);
    let vertices: Vec<usize> = (0..n).collect();
    let mut edges: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let card = rng.random_range(2..=4usize.min(n));
            vertices.choose_multiple(rng, card).copied().collect()
        })
        .collect();
    let mut covered = vec![false; n];
    for &v in edges.iter().flatten() {
        covered[v] = true;
    }
    for v in (0..n).filter(|&v| !covered[v]) {
        let open: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].len() < 4).collect();
        match open.choose(rng) {
            Some(&e) => edges[e].push(v),
            None => {
                let other = loop {
                    let u = rng.random_range(0..n);
                    if u != v {
                        break u;
                    }
                };
                edges.push(vec![v, other]);
            }
        }
    }
    weighted(rng, n, edges)
}

/// Like [`random_small`], with extra pair edges joining components until the
/// star expansion is connected.
pub fn random_connected<R: Rng>(rng: &mut R) -> Hypergraph {
    let h = random_small(rng);
    let mut edges = h.pin_lists();
    let mut edge_weights = h.edge_weights().to_vec();
    let mut dsu = DisjointSets::new(h.vertex_count());
    for pins in &edges {
        for w in pins.windows(2) {
            dsu.union(w[0], w[1]);
        }
    }
    let mut order: Vec<usize> = (0..h.vertex_count()).collect();
    order.shuffle(rng);
    for w in order.windows(2) {
        if dsu.find(w[0]) != dsu.find(w[1]) {
            dsu.union(w[0], w[1]);
            edges.push(vec![w[0], w[1]]);
            edge_weights.push(*WEIGHTS.choose(rng).unwrap());
        }
    }
    Hypergraph::new(&edges, h.vertex_weights().to_vec(), edge_weights)
        .expect("generated weights are positive")
}

/// Disjoint union of `components` connected random hypergraphs.
pub fn multi_component<R: Rng>(rng: &mut R, components: usize) -> Hypergraph {
    let mut edges = Vec::new();
    let mut vertex_weights = Vec::new();
    let mut edge_weights = Vec::new();
    for _ in 0..components {
        let part = random_connected(rng);
        let base = vertex_weights.len();
        edges.extend(
            part.edges()
                .map(|pins| pins.iter().map(|&v| v + base).collect::<Vec<_>>()),
        );
        vertex_weights.extend_from_slice(part.vertex_weights());
        edge_weights.extend_from_slice(part.edge_weights());
    }
    Hypergraph::new(&edges, vertex_weights, edge_weights).expect("generated weights are positive")
}

/// Two unit-weight blocks of `sizes[0]` and `sizes[1]` vertices, each held
/// together by a spanning chain plus `extra` random edges of cardinality 2 to
/// 4, joined by a single unit pair edge. Returns the hypergraph and the block
/// of every vertex.
pub fn two_blocks<R: Rng>(
    rng: &mut R,
    sizes: [usize; 2],
    extra: usize,
) -> (Hypergraph, Vec<usize>) {
    let mut edges = Vec::new();
    let mut block = Vec::new();
    let mut base = 0;
    for (b, &size) in sizes.iter().enumerate() {
        let members: Vec<usize> = (base..base + size).collect();
        let mut chain = members.clone();
        chain.shuffle(rng);
        for w in chain.windows(2) {
            edges.push(w.to_vec());
        }
        for _ in 0..extra {
            let card = rng.random_range(2..=4usize.min(size));
            edges.push(members.choose_multiple(rng, card).copied().collect());
        }
        block.extend(std::iter::repeat_n(b, size));
        base += size;
    }
    let a = rng.random_range(0..sizes[0]);
    let b = sizes[0] + rng.random_range(0..sizes[1]);
    edges.push(vec![a, b]);
    let h = Hypergraph::unweighted(base, &edges).expect("generated pins are in range");
    (h, block)
}

/// Hypergraph with heavy-tailed vertex degrees and edge sizes: pins are drawn
/// with probability proportional to `(rank + 1)^-skew`, cardinalities follow a
/// truncated power law on `2..=max_card`. Weights are unit.
pub fn irregular<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    max_card: usize,
    skew: f64,
) -> Hypergraph {
    assert!(n >= 2 && max_card >= 2);
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);
    let popularity = WeightedIndex::new(rank.iter().map(|&r| ((r + 1) as f64).powf(-skew)))
        .expect("positive popularity");
    let max_card = max_card.min(n);
    let sizes = WeightedIndex::new((2..=max_card).map(|c| (c as f64).powf(-2.0)))
        .expect("positive size weights");
    let mut edges = Vec::with_capacity(m + n);
    let mut covered = vec![false; n];
    for _ in 0..m {
        let card = 2 + sizes.sample(rng);
        let mut pins = Vec::with_capacity(card);
        let mut guard = 0;
        while pins.len() < card && guard < 50 * card {
            let v = popularity.sample(rng);
            if !pins.contains(&v) {
                pins.push(v);
            }
            guard += 1;
        }
        for &v in &pins {
            covered[v] = true;
        }
        edges.push(pins);
    }
    for v in (0..n).filter(|&v| !covered[v]) {
        let u = popularity.sample(rng);
        let u = if u == v { (v + 1) % n } else { u };
        edges.push(vec![v, u]);
    }
    Hypergraph::unweighted(n, &edges).expect("generated pins are in range")
}

fn weighted<R: Rng>(rng: &mut R, n: usize, edges: Vec<Vec<usize>>) -> Hypergraph {
    let vertex_weights = (0..n).map(|_| *WEIGHTS.choose(rng).unwrap()).collect();
    let edge_weights = (0..edges.len())
        .map(|_| *WEIGHTS.choose(rng).unwrap())
        .collect();
    Hypergraph::new(&edges, vertex_weights, edge_weights).expect("generated weights are positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_instances_stay_small_and_covered() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let h = random_small(&mut rng);
            assert!((3..=12).contains(&h.vertex_count()));
            assert!(h.vertex_count() + h.edge_count() <= 25);
            assert!((0..h.vertex_count()).all(|v| h.degree(v) > 0));
            assert!(h.edges().all(|p| (2..=4).contains(&p.len())));
            assert!(h
                .vertex_weights()
                .iter()
                .chain(h.edge_weights())
                .all(|w| WEIGHTS.contains(w)));
        }
    }

    #[test]
    fn connected_and_multi() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for c in 1..=4 {
            assert_eq!(random_connected(&mut rng).star_components(), 1);
            assert_eq!(multi_component(&mut rng, c).star_components(), c);
        }
    }

    #[test]
    fn blocks_are_joined_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (h, block) = two_blocks(&mut rng, [6, 8], 6);
        assert_eq!(h.vertex_count(), 14);
        assert_eq!(h.star_components(), 1);
        let crossing = h
            .edges()
            .filter(|p| p.iter().any(|&v| block[v] != block[p[0]]))
            .count();
        assert_eq!(crossing, 1);
    }

    #[test]
    fn irregular_has_no_isolated_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = irregular(&mut rng, 300, 400, 30, 0.9);
        assert!((0..300).all(|v| h.degree(v) > 0));
        let max_deg = (0..300).map(|v| h.degree(v)).max().unwrap();
        let mean = h.pin_count() as f64 / 300.0;
        assert!(max_deg as f64 > 4.0 * mean);
    }
}
