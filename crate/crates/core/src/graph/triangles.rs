use super::{SignedGraph, Triangle};
use rayon::prelude::*;

/// Lists every 3-cycle exactly once, treating edges as undirected.
///
/// Each triangle `{u < v < w}` is found from its lowest edge `(u, v)` by
/// merging the sorted neighbor lists of `u` and `v` above `v`. The result is
/// sorted.
pub fn enumerate_triangles<T: Send + Sync>(graph: &SignedGraph<T>) -> Vec<Triangle> {
    let adj = graph.adjacency();
    let mut out: Vec<Triangle> = (0..graph.node_count())
        .into_par_iter()
        .flat_map_iter(|u| {
            let nu = &adj.neighbors[u];
            let mut found = Vec::new();
            for &(v, e_uv) in nu.iter().filter(|&&(v, _)| v > u) {
                let nv = &adj.neighbors[v];
                let (mut i, mut j) = (
                    nu.partition_point(|&(w, _)| w <= v),
                    nv.partition_point(|&(w, _)| w <= v),
                );
                while i < nu.len() && j < nv.len() {
                    let (wu, e_uw) = nu[i];
                    let (wv, e_vw) = nv[j];
                    match wu.cmp(&wv) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            found.push(Triangle::new([e_uv, e_uw, e_vw]));
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
            found
        })
        .collect();
    out.sort_unstable();
    out
}

/// Reference enumeration over all node triples, `O(n^3)`.
pub fn brute_force_triangles<T: Send + Sync>(graph: &SignedGraph<T>) -> Vec<Triangle> {
    let n = graph.node_count();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let Some(ab) = graph.edge_between(super::NodeId(a), super::NodeId(b)) else {
                continue;
            };
            for c in b + 1..n {
                let ac = graph.edge_between(super::NodeId(a), super::NodeId(c));
                let bc = graph.edge_between(super::NodeId(b), super::NodeId(c));
                if let (Some(ac), Some(bc)) = (ac, bc) {
                    out.push(Triangle::new([ab, ac, bc]));
                }
            }
        }
    }
    out.sort_unstable();
    out
}
