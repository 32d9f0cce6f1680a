use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::RingContext;

/// A finite simple graph whose edge ids double as ring variables.
///
/// Variables are ordered by ascending edge id; an edge without an explicit
/// name is called `e<id>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: BTreeSet<u32>,
    edges: BTreeMap<u32, (u32, u32)>,
    names: BTreeMap<u32, String>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<u32>,
    edges: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    names: BTreeMap<u32, String>,
}

impl LabeledGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = u32>,
        edges: impl IntoIterator<Item = (u32, u32, u32)>,
        names: BTreeMap<u32, String>,
    ) -> Result<Self> {
        let vertices: BTreeSet<u32> = vertices.into_iter().collect();
        let mut map = BTreeMap::new();
        let mut pairs = BTreeSet::new();
        for (id, u, v) in edges {
            if u == v {
                return Err(Error::domain(format!("edge {id} is a loop at {u}")));
            }
            if !vertices.contains(&u) || !vertices.contains(&v) {
                return Err(Error::domain(format!("edge {id} has an unknown endpoint")));
            }
            if !pairs.insert((u.min(v), u.max(v))) {
                return Err(Error::domain(format!("edge {id} is parallel to another edge")));
            }
            if map.insert(id, (u, v)).is_some() {
                return Err(Error::domain(format!("duplicate edge id {id}")));
            }
        }
        if let Some(id) = names.keys().find(|id| !map.contains_key(id)) {
            return Err(Error::domain(format!("name given for unknown edge {id}")));
        }
        let g = Self {
            vertices,
            edges: map,
            names,
        };
        let mut seen = BTreeSet::new();
        for id in g.edges.keys() {
            if !seen.insert(g.edge_name(*id)) {
                return Err(Error::domain(format!("duplicate edge name `{}`", g.edge_name(*id))));
            }
        }
        Ok(g)
    }

    /// The cycle `v_0 - v_1 - ... - v_{n-1} - v_0`; edge `i` joins `v_i` and
    /// `v_{i+1}`.
    pub fn cycle(vertex_ids: &[u32], edge_ids: &[u32], names: Option<&[String]>) -> Result<Self> {
        let n = vertex_ids.len();
        if n < 3 || edge_ids.len() != n {
            return Err(Error::domain("a cycle needs at least 3 vertices and one edge id per vertex"));
        }
        let edges = (0..n).map(|i| (edge_ids[i], vertex_ids[i], vertex_ids[(i + 1) % n]));
        Self::new(vertex_ids.iter().copied(), edges, Self::name_map(edge_ids, names)?)
    }

    /// The path `v_0 - ... - v_n`; edge `i` joins `v_i` and `v_{i+1}`.
    pub fn path(vertex_ids: &[u32], edge_ids: &[u32], names: Option<&[String]>) -> Result<Self> {
        if vertex_ids.len() != edge_ids.len() + 1 {
            return Err(Error::domain("a path needs one more vertex than edges"));
        }
        let edges = (0..edge_ids.len()).map(|i| (edge_ids[i], vertex_ids[i], vertex_ids[i + 1]));
        Self::new(vertex_ids.iter().copied(), edges, Self::name_map(edge_ids, names)?)
    }

    fn name_map(edge_ids: &[u32], names: Option<&[String]>) -> Result<BTreeMap<u32, String>> {
        match names {
            None => Ok(BTreeMap::new()),
            Some(ns) if ns.len() == edge_ids.len() => {
                Ok(edge_ids.iter().copied().zip(ns.iter().cloned()).collect())
            }
            Some(_) => Err(Error::domain("one name per edge required")),
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.iter().copied()
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.vertices.contains(&v)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// `(id, u, v)` in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.edges.iter().map(|(&id, &(u, v))| (id, u, v))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge(&self, id: u32) -> Option<(u32, u32)> {
        self.edges.get(&id).copied()
    }

    pub fn names(&self) -> &BTreeMap<u32, String> {
        &self.names
    }

    pub fn edge_name(&self, id: u32) -> String {
        self.names.get(&id).cloned().unwrap_or_else(|| format!("e{id}"))
    }

    pub fn edge_by_name(&self, name: &str) -> Option<u32> {
        self.edges.keys().copied().find(|&id| self.edge_name(id) == name)
    }

    /// Incident edge ids of `v`, ascending.
    pub fn incident(&self, v: u32) -> Vec<u32> {
        self.edges
            .iter()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.incident(v).len()
    }

    pub fn other_end(&self, edge: u32, v: u32) -> Option<u32> {
        let (a, b) = self.edge(edge)?;
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    pub fn neighbors(&self, v: u32) -> BTreeSet<u32> {
        self.incident(v)
            .into_iter()
            .filter_map(|e| self.other_end(e, v))
            .collect()
    }

    pub fn max_vertex(&self) -> Option<u32> {
        self.vertices.iter().next_back().copied()
    }

    pub fn max_edge(&self) -> Option<u32> {
        self.edges.keys().next_back().copied()
    }

    /// Position of edge `id` among the ring variables.
    pub fn var_index(&self, id: u32) -> Option<usize> {
        self.edges.keys().position(|&e| e == id)
    }

    pub fn edge_of_var(&self, i: usize) -> Option<u32> {
        self.edges.keys().nth(i).copied()
    }

    pub fn var_names(&self) -> Vec<String> {
        self.edges.keys().map(|&id| self.edge_name(id)).collect()
    }

    /// The edge ring over `field`. Fails for a graph without edges.
    pub fn ring(&self, field: Field) -> Result<RingContext> {
        RingContext::new(field, self.var_names())
    }

    /// Two-colours the graph by BFS.
    pub fn is_bipartite(&self) -> bool {
        let mut colour: BTreeMap<u32, bool> = BTreeMap::new();
        for &start in &self.vertices {
            if colour.contains_key(&start) {
                continue;
            }
            colour.insert(start, false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = colour[&v];
                for w in self.neighbors(v) {
                    match colour.get(&w) {
                        Some(&cw) if cw == c => return false,
                        Some(_) => {}
                        None => {
                            colour.insert(w, !c);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Serialize for LabeledGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges().map(|(id, u, v)| [id, u, v]).collect(),
            names: self.names.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        LabeledGraph::new(j.vertices, j.edges.into_iter().map(|[i, u, v]| (i, u, v)), j.names)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_simple() {
        assert!(LabeledGraph::new([0, 1], [(0, 0, 0)], BTreeMap::new()).is_err());
        assert!(LabeledGraph::new([0, 1], [(0, 0, 1), (1, 1, 0)], BTreeMap::new()).is_err());
        assert!(LabeledGraph::new([0, 1, 2], [(0, 0, 1), (0, 1, 2)], BTreeMap::new()).is_err());
        assert!(LabeledGraph::new([0, 1], [(0, 0, 5)], BTreeMap::new()).is_err());
    }

    #[test]
    fn bipartite_check() {
        let c4 = LabeledGraph::cycle(&[0, 1, 2, 3], &[0, 1, 2, 3], None).unwrap();
        assert!(c4.is_bipartite());
        let c5 = LabeledGraph::cycle(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4], None).unwrap();
        assert!(!c5.is_bipartite());
    }

    #[test]
    fn ring_and_json() {
        let names = ["a", "b", "c", "d"].map(String::from);
        let g = LabeledGraph::cycle(&[10, 11, 12, 13], &[3, 1, 2, 0], Some(&names)).unwrap();
        let r = g.ring(Field::Prime(32003)).unwrap();
        assert_eq!(r.vars(), &["d", "b", "c", "a"]);
        assert_eq!(g.var_index(3), Some(3));
        let back = LabeledGraph::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        let v: serde_json::Value = serde_json::from_str(&g.to_json().unwrap()).unwrap();
        assert_eq!(v["edges"][0], serde_json::json!([0, 13, 10]));
    }
}
