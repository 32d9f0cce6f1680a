//! Brute-force computation of the primitive binomials of a graph's toric
//! ideal, by two independent methods.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::toric::binomial::{primitive_filter, WalkBinomial};
use crate::toric::graph::LabeledGraph;

pub const DEFAULT_MAX_STATES: usize = 10_000_000;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Longest walk considered; `None` means `4 * |E|`.
    pub max_len: Option<usize>,
    /// Guard on explored partial walks (walk method) or search nodes
    /// (kernel method).
    pub max_states: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_len: None,
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

fn to_binomial(ids: &[u32], z: &[i8]) -> WalkBinomial {
    WalkBinomial::from_signed(ids.iter().zip(z).map(|(&id, &x)| (id, x as i32)))
}

/// Primitive binomials via closed even walks.
///
/// From each start vertex `s` a breadth-first search runs over states
/// `(current vertex, per-edge signed use count)`, where odd steps count `+1`
/// and even steps `-1`, no edge is used on both sides or more than twice,
/// and only vertices with id `>= s` are entered. Each return to `s` after an
/// even number of steps yields a candidate; the candidates are then reduced
/// to the side-wise minimal ones.
pub fn primitive_oracle(graph: &LabeledGraph, config: &OracleConfig) -> Result<Vec<WalkBinomial>> {
    let ids: Vec<u32> = graph.edge_ids().collect();
    let max_len = config.max_len.unwrap_or(4 * ids.len());
    if max_len < 4 {
        return Err(Error::domain("walk bound must be at least 4"));
    }
    let adj: Vec<(u32, Vec<(u32, usize)>)> = graph
        .vertices()
        .map(|v| {
            let nb = graph
                .incident(v)
                .into_iter()
                .map(|e| (graph.other_end(e, v).unwrap(), graph.var_index(e).unwrap()))
                .collect();
            (v, nb)
        })
        .collect();
    let index_of = |v: u32| adj.binary_search_by_key(&v, |(w, _)| *w).unwrap();

    let per_start: Vec<Result<Vec<Vec<i8>>>> = adj
        .par_iter()
        .map(|&(s, _)| {
            let mut found = Vec::new();
            let mut seen: HashSet<(u32, Vec<i8>)> = HashSet::new();
            let mut queue = VecDeque::new();
            queue.push_back((s, vec![0i8; ids.len()], 0usize));
            seen.insert((s, vec![0i8; ids.len()]));
            while let Some((cur, z, len)) = queue.pop_front() {
                if len == max_len {
                    continue;
                }
                let step: i8 = if len % 2 == 0 { 1 } else { -1 };
                for &(w, e) in &adj[index_of(cur)].1 {
                    if w < s {
                        continue;
                    }
                    let next = z[e] + step;
                    if next.abs() > 2 || (z[e] != 0 && z[e].signum() != step) {
                        continue;
                    }
                    let mut nz = z.clone();
                    nz[e] = next;
                    if w == s && (len + 1) % 2 == 0 {
                        found.push(nz.clone());
                    }
                    if seen.insert((w, nz.clone())) {
                        if seen.len() > config.max_states {
                            return Err(Error::resource(format!(
                                "walk enumeration exceeded {} states",
                                config.max_states
                            )));
                        }
                        queue.push_back((w, nz, len + 1));
                    }
                }
            }
            Ok(found)
        })
        .collect();

    let mut candidates = Vec::new();
    for r in per_start {
        candidates.extend(r?.into_iter().map(|z| to_binomial(&ids, &z)));
    }
    Ok(primitive_filter(candidates))
}

/// Primitive binomials via the lattice kernel: every vector in
/// `{-2..2}^E` balanced at each vertex, reduced to the conformally minimal
/// ones.
pub fn kernel_oracle(graph: &LabeledGraph, config: &OracleConfig) -> Result<Vec<WalkBinomial>> {
    let ids: Vec<u32> = graph.edge_ids().collect();
    let verts: Vec<u32> = graph.vertices().collect();
    let vpos = |v: u32| verts.binary_search(&v).unwrap();
    let ends: Vec<(usize, usize)> = ids
        .iter()
        .map(|&id| {
            let (u, v) = graph.edge(id).unwrap();
            (vpos(u), vpos(v))
        })
        .collect();
    // vertices whose last incident edge is position i get checked there
    let mut remaining = vec![0usize; verts.len()];
    for &(u, v) in &ends {
        remaining[u] += 1;
        remaining[v] += 1;
    }
    let mut state = Kernel {
        ends: &ends,
        z: vec![0; ids.len()],
        balance: vec![0; verts.len()],
        remaining,
        found: Vec::new(),
        nodes: 0,
        max_nodes: config.max_states,
    };
    state.search(0)?;
    let found = std::mem::take(&mut state.found);
    Ok(primitive_filter(found.iter().map(|z| to_binomial(&ids, z))))
}

struct Kernel<'a> {
    ends: &'a [(usize, usize)],
    z: Vec<i8>,
    balance: Vec<i32>,
    remaining: Vec<usize>,
    found: Vec<Vec<i8>>,
    nodes: usize,
    max_nodes: usize,
}

impl Kernel<'_> {
    fn search(&mut self, pos: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::resource(format!(
                "kernel enumeration exceeded {} nodes",
                self.max_nodes
            )));
        }
        if pos == self.ends.len() {
            if let Some(&first) = self.z.iter().find(|&&x| x != 0) {
                if first > 0 {
                    self.found.push(self.z.clone());
                }
            }
            return Ok(());
        }
        let (u, v) = self.ends[pos];
        self.remaining[u] -= 1;
        self.remaining[v] -= 1;
        for x in -2i8..=2 {
            self.balance[u] += x as i32;
            self.balance[v] += x as i32;
            let ok = [u, v].iter().all(|&w| {
                let slack = 2 * self.remaining[w] as i32;
                self.balance[w].abs() <= slack
            });
            if ok {
                self.z[pos] = x;
                self.search(pos + 1)?;
            }
            self.balance[u] -= x as i32;
            self.balance[v] -= x as i32;
        }
        self.z[pos] = 0;
        self.remaining[u] += 1;
        self.remaining[v] += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn m(pairs: &[(u32, u32)]) -> BTreeMap<u32, u32> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn four_cycle() {
        let c4 = LabeledGraph::cycle(&[0, 1, 2, 3], &[0, 1, 2, 3], None).unwrap();
        let expected = vec![WalkBinomial::new(m(&[(0, 1), (2, 1)]), m(&[(1, 1), (3, 1)]))];
        assert_eq!(primitive_oracle(&c4, &OracleConfig::default()).unwrap(), expected);
        assert_eq!(kernel_oracle(&c4, &OracleConfig::default()).unwrap(), expected);
    }

    #[test]
    fn odd_cycle_and_tree_have_none() {
        let c5 = LabeledGraph::cycle(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4], None).unwrap();
        assert!(primitive_oracle(&c5, &OracleConfig::default()).unwrap().is_empty());
        let p = LabeledGraph::path(&[0, 1, 2], &[0, 1], None).unwrap();
        assert!(kernel_oracle(&p, &OracleConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn bowtie_uses_squared_bridge() {
        // two triangles joined by a bridge edge 6
        let g = LabeledGraph::new(
            0..6,
            [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 3, 4), (4, 4, 5), (5, 5, 3), (6, 0, 3)],
            BTreeMap::new(),
        )
        .unwrap();
        let walk = primitive_oracle(&g, &OracleConfig::default()).unwrap();
        assert_eq!(walk, kernel_oracle(&g, &OracleConfig::default()).unwrap());
        assert_eq!(walk.len(), 1);
        assert!(walk[0].plus.values().chain(walk[0].minus.values()).any(|&e| e == 2));
    }

    #[test]
    fn state_guard() {
        let k4 = LabeledGraph::new(
            0..4,
            [(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 1, 2), (4, 1, 3), (5, 2, 3)],
            BTreeMap::new(),
        )
        .unwrap();
        let cfg = OracleConfig {
            max_len: None,
            max_states: 5,
        };
        assert!(matches!(primitive_oracle(&k4, &cfg), Err(Error::Resource(_))));
    }
}
