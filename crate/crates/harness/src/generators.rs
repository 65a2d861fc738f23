use graphseed_core::{Error, Graph, Result};
use rand::Rng;

/// Undirected Erdős–Rényi graph: every unordered pair is an edge with probability `p`.
pub fn gen_er(n: usize, p: f64, rng: &mut impl Rng) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::new(n, edges, false)
}

/// Directed cycle `i → i+1 (mod n)`.
pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("cycle needs at least one node".into()));
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect(), true)
}

/// Weak connectivity: edge directions are ignored.
pub fn is_connected(g: &Graph) -> bool {
    if g.n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); g.n];
    for &(a, b, _) in &g.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; g.n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Zachary's karate club, zero-based, unweighted.
const KARATE_EDGES: [(usize, usize); 78] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (0, 6),
    (0, 7),
    (0, 8),
    (0, 10),
    (0, 11),
    (0, 12),
    (0, 13),
    (0, 17),
    (0, 19),
    (0, 21),
    (0, 31),
    (1, 2),
    (1, 3),
    (1, 7),
    (1, 13),
    (1, 17),
    (1, 19),
    (1, 21),
    (1, 30),
    (2, 3),
    (2, 7),
    (2, 8),
    (2, 9),
    (2, 13),
    (2, 27),
    (2, 28),
    (2, 32),
    (3, 7),
    (3, 12),
    (3, 13),
    (4, 6),
    (4, 10),
    (5, 6),
    (5, 10),
    (5, 16),
    (6, 16),
    (8, 30),
    (8, 32),
    (8, 33),
    (9, 33),
    (13, 33),
    (14, 32),
    (14, 33),
    (15, 32),
    (15, 33),
    (18, 32),
    (18, 33),
    (19, 33),
    (20, 32),
    (20, 33),
    (22, 32),
    (22, 33),
    (23, 25),
    (23, 27),
    (23, 29),
    (23, 32),
    (23, 33),
    (24, 25),
    (24, 27),
    (24, 31),
    (25, 31),
    (26, 29),
    (26, 33),
    (27, 33),
    (28, 31),
    (28, 33),
    (29, 32),
    (29, 33),
    (30, 32),
    (30, 33),
    (31, 32),
    (31, 33),
    (32, 33),
];

pub fn karate() -> Graph {
    Graph::new(34, KARATE_EDGES.iter().map(|&(a, b)| (a, b, 1.0)).collect(), false).expect("static edge list is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substream;

    #[test]
    fn karate_size() {
        let g = karate();
        assert_eq!((g.n, g.edges.len()), (34, 78));
        let deg0 = g.edges.iter().filter(|e| e.0 == 0 || e.1 == 0).count();
        let deg33 = g.edges.iter().filter(|e| e.0 == 33 || e.1 == 33).count();
        assert_eq!((deg0, deg33), (16, 17));
    }

    #[test]
    fn er_extremes() {
        let mut r = substream(1, 0);
        assert!(gen_er(10, 0.0, &mut r).unwrap().edges.is_empty());
        assert_eq!(gen_er(10, 1.0, &mut r).unwrap().edges.len(), 45);
        assert!(gen_er(10, 1.5, &mut r).is_err());
    }

    #[test]
    fn cycle_is_a_permutation() {
        let g = gen_cycle(4).unwrap();
        let a = g.adjacency::<f64>();
        for i in 0..4 {
            let ones: Vec<usize> = (0..4).filter(|&j| a[(i, j)].re == 1.0).collect();
            assert_eq!(ones, vec![(i + 3) % 4]);
        }
    }
}
