//! Canonical labeling of small graphs.
//!
//! Two graphs receive the same label if and only if they are isomorphic.
//! The search individualizes vertices over an equitable color refinement,
//! keeps the lexicographically smallest leaf as the canonical form, and
//! prunes with discovered automorphisms, so highly symmetric inputs
//! (cliques, cycles, lattice neighborhoods) stay cheap.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::Subgraph;

/// Largest neighborhood the labeler accepts by default.
pub const DEFAULT_CANONICAL_CAP: usize = 1024;

/// Canonical label bytes of a subgraph under the default size cap.
pub fn canonical_form(h: &Subgraph) -> Result<Vec<u8>> {
    canonical_form_capped(h, Some(DEFAULT_CANONICAL_CAP))
}

/// Canonical label bytes with an explicit node cap (`None` disables it).
pub fn canonical_form_capped(h: &Subgraph, cap: Option<usize>) -> Result<Vec<u8>> {
    let n = h.node_count();
    if let Some(cap) = cap {
        if n > cap {
            return Err(Error::NeighborhoodTooLarge { size: n, cap });
        }
    }
    let g = BitGraph::from_local_adjacency(n, h.local_adjacency());
    Ok(canonical_bytes(&g))
}

/// Canonical label of an arbitrary small graph given as an adjacency list
/// over `0..n`. Used by tests and by callers that do not hold a `Subgraph`.
pub fn canonical_form_adjacency(n: usize, adj: &[Vec<u32>]) -> Vec<u8> {
    let g = BitGraph::from_local_adjacency(n, adj);
    canonical_bytes(&g)
}

/// Dense bitset adjacency for the search.
struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    fn from_local_adjacency(n: usize, adj: &[Vec<u32>]) -> BitGraph {
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for (v, nbrs) in adj.iter().enumerate() {
            for &w in nbrs {
                let w = w as usize;
                rows[v * words + w / 64] |= 1 << (w % 64);
            }
        }
        BitGraph { n, words, rows }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    fn adjacent(&self, v: usize, w: usize) -> bool {
        self.rows[v * self.words + w / 64] & (1 << (w % 64)) != 0
    }

    /// Number of neighbors of `v` inside the `mask` bitset.
    fn degree_in(&self, v: usize, mask: &[u64]) -> u32 {
        self.row(v)
            .iter()
            .zip(mask)
            .map(|(r, m)| (r & m).count_ones())
            .sum()
    }
}

/// Ordered partition of the vertex set.
type Cells = Vec<Vec<u32>>;

struct BestLeaf {
    trace: Vec<u32>,
    bytes: Vec<u8>,
    /// node -> canonical position
    perm: Vec<u32>,
}

struct Searcher<'a> {
    g: &'a BitGraph,
    best: Option<BestLeaf>,
    /// Discovered automorphisms, as node -> node maps.
    generators: Vec<Vec<u32>>,
    /// Shared refinement trace along the current path.
    trace: Vec<u32>,
    /// Vertices individualized along the current path.
    prefix: Vec<u32>,
}

fn canonical_bytes(g: &BitGraph) -> Vec<u8> {
    if g.n == 0 {
        return (0u32).to_le_bytes().to_vec();
    }
    let mut searcher = Searcher {
        g,
        best: None,
        generators: Vec::new(),
        trace: Vec::new(),
        prefix: Vec::new(),
    };
    let mut cells: Cells = vec![(0..g.n as u32).collect()];
    refine(g, &mut cells, &mut searcher.trace);
    searcher.descend(cells);
    searcher.best.expect("search visits at least one leaf").bytes
}

/// Split cells by neighbor counts until the partition is equitable, then
/// append the stable cell sizes to `trace`.
fn refine(g: &BitGraph, cells: &mut Cells, trace: &mut Vec<u32>) {
    loop {
        let masks: Vec<Vec<u64>> = cells
            .iter()
            .map(|cell| {
                let mut mask = vec![0u64; g.words];
                for &v in cell {
                    mask[v as usize / 64] |= 1 << (v as usize % 64);
                }
                mask
            })
            .collect();
        let mut next: Cells = Vec::with_capacity(cells.len());
        let mut split = false;
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, u32)> = cell
                .iter()
                .map(|&v| {
                    let sig: Vec<u32> = masks
                        .iter()
                        .map(|mask| g.degree_in(v as usize, mask))
                        .collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                    if i - start != cell.len() {
                        split = true;
                    }
                    start = i;
                }
            }
        }
        *cells = next;
        if !split {
            break;
        }
    }
    for cell in cells.iter() {
        trace.push(cell.len() as u32);
    }
}

impl<'a> Searcher<'a> {
    fn descend(&mut self, cells: Cells) {
        // compare this node's trace against the incumbent
        match self.compare_trace_prefix() {
            Ordering::Greater => return,
            Ordering::Less | Ordering::Equal => {}
        }
        let target = match cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
        {
            Some((i, _)) => i,
            None => {
                self.visit_leaf(&cells);
                return;
            }
        };
        let candidates = cells[target].clone();
        let mut explored: Vec<u32> = Vec::new();
        for &c in &candidates {
            if self.in_explored_orbit(c, &explored) {
                continue;
            }
            explored.push(c);
            let mut child: Cells = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![c]);
            child.push(candidates.iter().copied().filter(|&v| v != c).collect());
            child.extend_from_slice(&cells[target + 1..]);
            let trace_mark = self.trace.len();
            refine(self.g, &mut child, &mut self.trace);
            self.prefix.push(c);
            self.descend(child);
            self.prefix.pop();
            self.trace.truncate(trace_mark);
        }
    }

    /// Lexicographic position of the current trace relative to the best
    /// leaf's trace (shorter prefix compares as smaller).
    fn compare_trace_prefix(&self) -> Ordering {
        let best = match &self.best {
            Some(b) => b,
            None => return Ordering::Less,
        };
        let n = self.trace.len().min(best.trace.len());
        match self.trace[..n].cmp(&best.trace[..n]) {
            Ordering::Equal => {
                if self.trace.len() > best.trace.len() {
                    Ordering::Greater
                } else {
                    // equal-so-far or a strict prefix
                    Ordering::Equal
                }
            }
            other => other,
        }
    }

    fn visit_leaf(&mut self, cells: &Cells) {
        let mut perm = vec![0u32; self.g.n];
        for (pos, cell) in cells.iter().enumerate() {
            perm[cell[0] as usize] = pos as u32;
        }
        let bytes = serialize(self.g, &perm);
        let replace = match &self.best {
            None => true,
            Some(best) => match full_trace_cmp(&self.trace, &best.trace) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => match bytes.cmp(&best.bytes) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        let best_perm = best.perm.clone();
                        self.record_automorphism(&perm, &best_perm);
                        false
                    }
                },
            },
        };
        if replace {
            self.best = Some(BestLeaf {
                trace: self.trace.clone(),
                bytes,
                perm,
            });
        }
    }

    /// Two leaves with identical labels yield the automorphism that maps
    /// each node to the node holding the same canonical position in the
    /// incumbent leaf.
    fn record_automorphism(&mut self, perm: &[u32], best_perm: &[u32]) {
        let mut pos_to_node = vec![0u32; self.g.n];
        for (node, &pos) in best_perm.iter().enumerate() {
            pos_to_node[pos as usize] = node as u32;
        }
        let sigma: Vec<u32> = perm.iter().map(|&pos| pos_to_node[pos as usize]).collect();
        if sigma.iter().enumerate().all(|(v, &w)| v as u32 == w) {
            return; // identity
        }
        debug_assert!(is_automorphism(self.g, &sigma));
        self.generators.push(sigma);
    }

    /// True when a discovered automorphism that fixes every vertex
    /// individualized so far maps `c` into the already-explored set.
    fn in_explored_orbit(&self, c: u32, explored: &[u32]) -> bool {
        if explored.is_empty() || self.generators.is_empty() {
            return false;
        }
        let fixing: Vec<&Vec<u32>> = self
            .generators
            .iter()
            .filter(|sigma| self.prefix.iter().all(|&p| sigma[p as usize] == p))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        // orbit of c under the filtered generators, by closure
        let mut orbit = vec![c];
        let mut i = 0;
        while i < orbit.len() {
            let v = orbit[i];
            i += 1;
            for sigma in &fixing {
                let w = sigma[v as usize];
                if !orbit.contains(&w) {
                    orbit.push(w);
                }
                // generators are permutations; walking images suffices for
                // the generated group's orbit because orbits are closed
                // under inverses once closure over all generators is taken
                let pre = sigma.iter().position(|&x| x == v).unwrap() as u32;
                if !orbit.contains(&pre) {
                    orbit.push(pre);
                }
            }
        }
        explored.iter().any(|e| orbit.contains(e))
    }
}

fn full_trace_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.cmp(b)
}

fn is_automorphism(g: &BitGraph, sigma: &[u32]) -> bool {
    for v in 0..g.n {
        for w in 0..g.n {
            if g.adjacent(v, w) != g.adjacent(sigma[v] as usize, sigma[w] as usize) {
                return false;
            }
        }
    }
    true
}

/// Node count plus the bit-packed upper triangle of the adjacency matrix
/// under `perm` (node -> canonical position).
fn serialize(g: &BitGraph, perm: &[u32]) -> Vec<u8> {
    let n = g.n;
    let mut node_at = vec![0u32; n];
    for (node, &pos) in perm.iter().enumerate() {
        node_at[pos as usize] = node as u32;
    }
    let bits = n * (n - 1) / 2;
    let mut bytes = Vec::with_capacity(4 + bits.div_ceil(8));
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    bytes.resize(4 + bits.div_ceil(8), 0);
    let mut bit = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if g.adjacent(node_at[i] as usize, node_at[j] as usize) {
                bytes[4 + bit / 8] |= 1 << (bit % 8);
            }
            bit += 1;
        }
    }
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn label_of(n: usize, edges: &[(u32, u32)]) -> Vec<u8> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        canonical_form_adjacency(n, &adj)
    }

    fn permuted(n: usize, edges: &[(u32, u32)], rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(rng);
        edges
            .iter()
            .map(|&(a, b)| (perm[a as usize], perm[b as usize]))
            .collect()
    }

    fn random_edges(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
        let mut edges = Vec::new();
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    #[test]
    fn c6_differs_from_two_triangles() {
        let c6 = label_of(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let kk = label_of(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(c6, kk);
    }

    #[test]
    fn label_invariant_under_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..200 {
            let n = 3 + (trial % 9);
            let edges = random_edges(n, 0.4, &mut rng);
            let base = label_of(n, &edges);
            let shuffled = permuted(n, &edges, &mut rng);
            assert_eq!(base, label_of(n, &shuffled), "trial {trial}");
        }
    }

    #[test]
    fn cliques_label_quickly_and_consistently() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40;
        let mut edges = Vec::new();
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                edges.push((a, b));
            }
        }
        let direct = label_of(n, &edges);
        let shuffled = permuted(n, &edges, &mut rng);
        assert_eq!(direct, label_of(n, &shuffled));
    }

    #[test]
    fn regular_but_nonisomorphic_pairs_split() {
        // K3,3 vs the prism: both 3-regular on 6 nodes
        let k33 = label_of(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        );
        let prism = label_of(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        );
        assert_ne!(k33, prism);
    }

    #[test]
    fn empty_and_trivial_graphs() {
        assert_eq!(label_of(0, &[]), 0u32.to_le_bytes().to_vec());
        assert_eq!(label_of(1, &[]), 1u32.to_le_bytes().to_vec());
        assert_ne!(label_of(2, &[]), label_of(2, &[(0, 1)]));
    }

    #[test]
    fn cap_is_enforced() {
        let g = crate::graph::Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let h = g.neighborhood_subgraph(0, 2).unwrap();
        assert!(matches!(
            canonical_form_capped(&h, Some(3)),
            Err(Error::NeighborhoodTooLarge { size: 4, cap: 3 })
        ));
        assert!(canonical_form_capped(&h, None).is_ok());
    }

    #[test]
    fn subgraph_labels_match_direct_construction() {
        // the 1-neighborhood of a triangle node with a pendant equals the
        // "paw" graph no matter which representation produced it
        let g = crate::graph::Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let h = g.neighborhood_subgraph(2, 1).unwrap();
        let direct = label_of(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        assert_eq!(canonical_form(&h).unwrap(), direct);
    }
}
