//! Random graph models: Erdős–Rényi, Barabási–Albert and Watts–Strogatz.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// G(n, p) with p = avg_degree / (n - 1).
    Er,
    /// Preferential attachment with m = avg_degree / 2 edges per new node.
    Ba,
    /// Ring lattice of degree avg_degree with random rewiring.
    Ws,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(ModelKind::Er),
            "ba" => Ok(ModelKind::Ba),
            "ws" => Ok(ModelKind::Ws),
            other => Err(Error::InvalidParameter(format!("unknown model '{other}'"))),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ModelKind::Er => "er",
            ModelKind::Ba => "ba",
            ModelKind::Ws => "ws",
        };
        f.write_str(s)
    }
}

/// Generate a model graph. `rewire_p` is only read by the WS model.
pub fn generate_model(
    kind: ModelKind,
    n: usize,
    avg_degree: f64,
    rewire_p: f64,
    seed: u64,
) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 nodes".into()));
    }
    if avg_degree <= 0.0 || avg_degree >= n as f64 {
        return Err(Error::InvalidParameter(format!(
            "average degree {avg_degree} out of range for {n} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ModelKind::Er => Ok(erdos_renyi(n, avg_degree / (n as f64 - 1.0), &mut rng)),
        ModelKind::Ba => {
            let m = even_half(avg_degree, "ba")?;
            barabasi_albert(n, m, &mut rng)
        }
        ModelKind::Ws => {
            if !(0.0..=1.0).contains(&rewire_p) {
                return Err(Error::InvalidParameter(format!(
                    "rewire probability {rewire_p} not in [0, 1]"
                )));
            }
            let k = even_lattice_degree(avg_degree)?;
            watts_strogatz(n, k, rewire_p, &mut rng)
        }
    }
}

fn even_half(avg_degree: f64, model: &str) -> Result<usize> {
    let m = avg_degree / 2.0;
    if m.fract() != 0.0 || m < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "{model} model needs an even integer average degree, got {avg_degree}"
        )));
    }
    Ok(m as usize)
}

fn even_lattice_degree(avg_degree: f64) -> Result<usize> {
    if avg_degree.fract() != 0.0 || (avg_degree as usize) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "ws ring lattice needs an even integer degree, got {avg_degree}"
        )));
    }
    Ok(avg_degree as usize)
}

/// G(n, p) via geometric skips over the ordered pair sequence, O(|E|).
fn erdos_renyi(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::with_nodes(n);
    if p <= 0.0 {
        return g;
    }
    if p >= 1.0 {
        for a in 0..n as NodeId {
            for b in a + 1..n as NodeId {
                g.add_edge(a, b);
            }
        }
        return g;
    }
    let log_q = (1.0 - p).ln();
    let mut v: i64 = 1;
    let mut w: i64 = -1;
    let n = n as i64;
    while v < n {
        let r: f64 = rng.gen::<f64>();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v && v < n {
            w -= v;
            v += 1;
        }
        if v < n {
            g.add_edge(w as NodeId, v as NodeId);
        }
    }
    g
}

/// Preferential attachment: m initially isolated seed nodes, every later
/// node attaches with m edges; |E| = m * (n - m).
fn barabasi_albert(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if m >= n {
        return Err(Error::InvalidParameter(format!(
            "ba attachment {m} must be below node count {n}"
        )));
    }
    let mut g = Graph::with_nodes(n);
    // endpoint multiset; sampling from it is degree-proportional
    let mut repeated: Vec<NodeId> = Vec::with_capacity(2 * m * (n - m));
    let mut targets: Vec<NodeId> = (0..m as NodeId).collect();
    for source in m as NodeId..n as NodeId {
        for &t in &targets {
            g.add_edge(source, t);
            repeated.push(source);
            repeated.push(t);
        }
        let mut next: Vec<NodeId> = Vec::with_capacity(m);
        while next.len() < m {
            let candidate = repeated[rng.gen_range(0..repeated.len())];
            if !next.contains(&candidate) {
                next.push(candidate);
            }
        }
        targets = next;
    }
    Ok(g)
}

/// Ring lattice where every node links to its k/2 nearest neighbors on each
/// side, then each lattice edge is rewired with probability `p`.
fn watts_strogatz(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if k >= n {
        return Err(Error::InvalidParameter(format!(
            "ws lattice degree {k} must be below node count {n}"
        )));
    }
    let mut g = Graph::with_nodes(n);
    for j in 1..=k / 2 {
        for v in 0..n {
            g.add_edge(v as NodeId, ((v + j) % n) as NodeId);
        }
    }
    if p == 0.0 {
        return Ok(g);
    }
    for j in 1..=k / 2 {
        for v in 0..n {
            if !rng.gen_bool(p) {
                continue;
            }
            let u = v as NodeId;
            let w = ((v + j) % n) as NodeId;
            if g.degree(u) >= n - 1 {
                continue; // saturated, nothing to rewire to
            }
            let mut new_w = rng.gen_range(0..n as NodeId);
            while new_w == u || g.has_edge(u, new_w) {
                new_w = rng.gen_range(0..n as NodeId);
            }
            g.remove_edge(u, w);
            g.add_edge(u, new_w);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_expected_edge_count() {
        // E[|E|] = C(500,2) * 16/499 = 4000, sd ~ 62; average over seeds
        // must land within 5 sd of the mean.
        let runs = 8;
        let total: usize = (0..runs)
            .map(|s| {
                generate_model(ModelKind::Er, 500, 16.0, 0.0, 1000 + s)
                    .unwrap()
                    .edge_count()
            })
            .sum();
        let mean = total as f64 / runs as f64;
        let sd = (4000.0_f64 * (1.0 - 16.0 / 499.0)).sqrt();
        assert!(
            (mean - 4000.0).abs() < 5.0 * sd,
            "mean edge count {mean} too far from 4000"
        );
    }

    #[test]
    fn ba_exact_edge_count() {
        let g = generate_model(ModelKind::Ba, 500, 4.0, 0.0, 7).unwrap();
        assert_eq!(g.edge_count(), 2 * (500 - 2));
        assert_eq!(g.edge_count(), 996);
    }

    #[test]
    fn ws_without_rewiring_is_exact_lattice() {
        let g = generate_model(ModelKind::Ws, 500, 16.0, 0.0, 3).unwrap();
        assert_eq!(g.edge_count(), 500 * 8);
        for v in g.nodes() {
            assert_eq!(g.degree(v), 16);
        }
    }

    #[test]
    fn ws_rewiring_preserves_edge_count() {
        let g = generate_model(ModelKind::Ws, 200, 4.0, 0.3, 11).unwrap();
        assert_eq!(g.edge_count(), 400);
    }

    #[test]
    fn deterministic_given_seed() {
        for kind in [ModelKind::Er, ModelKind::Ba, ModelKind::Ws] {
            let a = generate_model(kind, 120, 4.0, 0.05, 99).unwrap();
            let b = generate_model(kind, 120, 4.0, 0.05, 99).unwrap();
            let ea: Vec<_> = a.edges().collect();
            let eb: Vec<_> = b.edges().collect();
            assert_eq!(ea, eb);
        }
    }

    #[test]
    fn odd_degrees_rejected_where_required() {
        assert!(generate_model(ModelKind::Ba, 100, 3.0, 0.0, 1).is_err());
        assert!(generate_model(ModelKind::Ws, 100, 3.0, 0.05, 1).is_err());
        assert!(generate_model(ModelKind::Er, 100, 3.0, 0.0, 1).is_ok());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(generate_model(ModelKind::Er, 1, 0.5, 0.0, 1).is_err());
        assert!(generate_model(ModelKind::Er, 100, 200.0, 0.0, 1).is_err());
        assert!(generate_model(ModelKind::Ws, 100, 4.0, 1.5, 1).is_err());
    }
}
