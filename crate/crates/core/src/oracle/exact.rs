//! Exact minimum vertex cover by branch and bound on bitmasks.
//!
//! Only non-isolated vertices take part, so the size limit applies to those.
//! Branching is on a maximum-degree vertex `v`: either `v` joins the cover or
//! all of `N(v)` does. Degree-1 vertices are resolved by taking their neighbor,
//! and a greedy matching of the undecided part gives the pruning bound.

use crate::error::{param, Error, Result};
use crate::{Graph, VertexSet};

pub const DEFAULT_EXACT_LIMIT: usize = 60;

pub fn exact_min_vc(g: &Graph) -> Result<VertexSet> {
    exact_min_vc_with_limit(g, DEFAULT_EXACT_LIMIT)
}

pub fn exact_min_vc_with_limit(g: &Graph, limit: usize) -> Result<VertexSet> {
    if limit > 64 {
        return param(format!("exact solver limit {limit} exceeds 64"));
    }
    let active: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
    if active.len() > limit {
        return Err(Error::Refused(format!(
            "{} non-isolated vertices exceed the limit of {limit}",
            active.len()
        )));
    }
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in active.iter().enumerate() {
        local[v] = i;
    }
    let adj: Vec<u64> = active
        .iter()
        .map(|&v| g.neighbors(v).fold(0u64, |m, u| m | (1u64 << local[u])))
        .collect();

    let live = if active.is_empty() { 0 } else { u64::MAX >> (64 - active.len()) };
    let mut solver = Solver { adj: &adj, best: live, best_size: active.len() as u32 };
    solver.search(live, 0);

    Ok(VertexSet::from_iter(
        g.n(),
        (0..active.len()).filter(|&i| solver.best >> i & 1 == 1).map(|i| active[i]),
    ))
}

struct Solver<'a> {
    adj: &'a [u64],
    best: u64,
    best_size: u32,
}

impl Solver<'_> {
    fn degree(&self, v: usize, live: u64) -> u32 {
        (self.adj[v] & live).count_ones()
    }

    /// Size of a greedy maximal matching inside `live`; a lower bound on its cover.
    fn matching_bound(&self, mut live: u64) -> u32 {
        let mut size = 0;
        while live != 0 {
            let v = live.trailing_zeros() as usize;
            live &= !(1u64 << v);
            let nb = self.adj[v] & live;
            if nb != 0 {
                live &= !(1u64 << nb.trailing_zeros());
                size += 1;
            }
        }
        size
    }

    fn search(&mut self, mut live: u64, mut chosen: u64) {
        // Reductions: drop isolated vertices, take the neighbor of any leaf.
        loop {
            let mut changed = false;
            let mut rest = live;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if live >> v & 1 == 0 {
                    continue;
                }
                match self.degree(v, live) {
                    0 => {
                        live &= !(1u64 << v);
                        changed = true;
                    }
                    1 => {
                        let u = (self.adj[v] & live).trailing_zeros();
                        chosen |= 1u64 << u;
                        live &= !(1u64 << u) & !(1u64 << v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let size = chosen.count_ones();
        if live == 0 {
            if size < self.best_size {
                self.best = chosen;
                self.best_size = size;
            }
            return;
        }
        if size + self.matching_bound(live) >= self.best_size {
            return;
        }

        let mut v = 0;
        let mut dv = 0;
        let mut rest = live;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = self.degree(u, live);
            if d > dv {
                v = u;
                dv = d;
            }
        }
        let bit = 1u64 << v;
        self.search(live & !bit, chosen | bit);
        let nb = self.adj[v] & live;
        if size + nb.count_ones() < self.best_size {
            self.search(live & !nb & !bit, chosen | nb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn fixtures() {
        assert_eq!(exact_min_vc(&Graph::empty(5)).unwrap().len(), 0);
        assert_eq!(exact_min_vc(&cycle(4)).unwrap().len(), 2);
        assert_eq!(exact_min_vc(&cycle(5)).unwrap().len(), 3);
        assert_eq!(exact_min_vc(&complete(5)).unwrap().len(), 4);
        assert_eq!(exact_min_vc(&petersen()).unwrap().len(), 6);
        assert_eq!(exact_min_vc(&star(30)).unwrap().to_vec(), vec![0]);
        assert_eq!(exact_min_vc(&complete_bipartite(3, 7)).unwrap().len(), 3);
    }

    #[test]
    fn result_is_a_cover() {
        let g = petersen();
        assert!(g.is_vertex_cover(&exact_min_vc(&g).unwrap()));
    }

    #[test]
    fn refuses_large_instances() {
        let g = path(62);
        assert!(matches!(exact_min_vc(&g), Err(Error::Refused(_))));
        assert!(exact_min_vc_with_limit(&g, 64).is_ok());
        assert!(exact_min_vc_with_limit(&g, 65).is_err());
        // isolated vertices do not count against the limit
        let sparse = Graph::from_edges(1000, [(3, 900)]).unwrap();
        assert_eq!(exact_min_vc(&sparse).unwrap().len(), 1);
    }
}
