//! Graph operations that grow (or shrink) a graph while updating the set of
//! primitive binomials of its toric ideal directly.
//!
//! Each operation exists at two levels: `*_walks` works on id-keyed
//! [`WalkBinomial`]s, the plain form on [`UniversalBasis`] values whose ring
//! is the graph's edge ring.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;
use crate::ring::RingContext;
use crate::toric::binomial::{normalize_set, primitive_filter, EdgeMonomial, WalkBinomial};
use crate::toric::graph::LabeledGraph;
use crate::ugb::UniversalBasis;

pub fn basis_to_walks(graph: &LabeledGraph, basis: &UniversalBasis) -> Result<Vec<WalkBinomial>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    if basis.ring().vars() != graph.var_names().as_slice() {
        return Err(Error::domain("basis ring does not match the graph's edge names"));
    }
    basis
        .elements()
        .iter()
        .map(|p| WalkBinomial::from_polynomial(graph, p))
        .collect()
}

pub fn walks_to_basis(
    graph: &LabeledGraph,
    walks: &[WalkBinomial],
    field: Field,
    provenance: &str,
) -> Result<UniversalBasis> {
    let ring: Arc<RingContext> = graph.ring(field)?.shared();
    let polys = normalize_set(walks.iter().cloned())
        .iter()
        .map(|w| w.to_polynomial(graph, &ring))
        .collect::<Result<Vec<_>>>()?;
    UniversalBasis::with_ring(&ring, polys, provenance)
}

/// Identifies `vb` in the bipartite graph `b` with `vg` in `g`; the
/// primitive binomials of the result are the union of both inputs.
pub fn glue_vertex_walks(
    g: &LabeledGraph,
    ug: &[WalkBinomial],
    b: &LabeledGraph,
    ub: &[WalkBinomial],
    vg: u32,
    vb: u32,
) -> Result<(LabeledGraph, Vec<WalkBinomial>)> {
    if !b.is_bipartite() {
        return Err(Error::precondition("the glued graph must be bipartite"));
    }
    if !g.has_vertex(vg) || !b.has_vertex(vb) {
        return Err(Error::domain("gluing vertex not present"));
    }
    if b.vertices().any(|v| g.has_vertex(v)) {
        return Err(Error::precondition("vertex ids of the two graphs overlap"));
    }
    if b.edge_ids().any(|e| g.edge(e).is_some()) {
        return Err(Error::precondition("edge ids of the two graphs overlap"));
    }
    let relabel = |v: u32| if v == vb { vg } else { v };
    let vertices = g.vertices().chain(b.vertices().filter(|&v| v != vb));
    let edges = g
        .edges()
        .chain(b.edges().map(|(id, u, v)| (id, relabel(u), relabel(v))));
    let mut names = g.names().clone();
    names.extend(b.names().iter().map(|(k, v)| (*k, v.clone())));
    let glued = LabeledGraph::new(vertices, edges, names)?;
    let walks = normalize_set(ug.iter().chain(ub).cloned());
    Ok((glued, walks))
}

/// Fresh identifiers for a glued cycle of length `2k`.
#[derive(Debug, Clone, Default)]
pub struct CycleLabels {
    /// `2k - 2` new vertex ids.
    pub vertices: Vec<u32>,
    /// `2k - 1` new edge ids, in walking order `c_1, ..., c_{2k-1}`.
    pub edges: Vec<u32>,
    pub names: Option<Vec<String>>,
    /// New name for the shared edge.
    pub rename: Option<String>,
}

/// Glues a `2k`-cycle along edge `e = {a, b}`: the new path runs
/// `b - w_1 - ... - w_{2k-2} - a` through edges `c_1 .. c_{2k-1}`.
///
/// The basis gains the cycle binomial `u2*e - v2` (with `u2` the product of
/// even-indexed and `v2` of odd-indexed path edges) and, for every
/// `u1*e^l - v1` through `e`, its extension `u1*v2^l - v1*u2^l`.
pub fn glue_cycle_walks(
    g: &LabeledGraph,
    ug: &[WalkBinomial],
    cycle_len: usize,
    edge: u32,
    labels: &CycleLabels,
) -> Result<(LabeledGraph, Vec<WalkBinomial>)> {
    if cycle_len < 4 || !cycle_len.is_multiple_of(2) {
        return Err(Error::domain(format!("cycle length {cycle_len} must be even and at least 4")));
    }
    let (a, b) = g
        .edge(edge)
        .ok_or_else(|| Error::domain(format!("unknown edge {edge}")))?;
    if labels.vertices.len() != cycle_len - 2 || labels.edges.len() != cycle_len - 1 {
        return Err(Error::domain("wrong number of fresh cycle labels"));
    }
    if labels.vertices.iter().any(|&v| g.has_vertex(v)) || labels.edges.iter().any(|&e| g.edge(e).is_some()) {
        return Err(Error::precondition("fresh cycle labels collide with the graph"));
    }
    let mut path = vec![b];
    path.extend(&labels.vertices);
    path.push(a);
    let new_edges = labels
        .edges
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, path[i], path[i + 1]));
    let mut names = g.names().clone();
    if let Some(ns) = &labels.names {
        if ns.len() != labels.edges.len() {
            return Err(Error::domain("one name per new cycle edge required"));
        }
        names.extend(labels.edges.iter().copied().zip(ns.iter().cloned()));
    }
    if let Some(r) = &labels.rename {
        names.insert(edge, r.clone());
    }
    let glued = LabeledGraph::new(
        g.vertices().chain(labels.vertices.iter().copied()),
        g.edges().chain(new_edges),
        names,
    )?;

    // c_1, c_3, ... form v2; c_2, c_4, ... form u2
    let mut u2 = EdgeMonomial::new();
    let mut v2 = EdgeMonomial::new();
    for (i, &id) in labels.edges.iter().enumerate() {
        if i % 2 == 0 {
            v2.insert(id, 1);
        } else {
            u2.insert(id, 1);
        }
    }
    let mut out: Vec<WalkBinomial> = ug.to_vec();
    let mut cycle_plus = u2.clone();
    cycle_plus.insert(edge, 1);
    out.push(WalkBinomial::new(cycle_plus, v2.clone()));
    let power = |m: &EdgeMonomial, l: u32| -> EdgeMonomial { m.iter().map(|(&k, &e)| (k, e * l)).collect() };
    let times = |x: &EdgeMonomial, y: &EdgeMonomial| -> EdgeMonomial {
        let mut r = x.clone();
        for (&k, &e) in y {
            *r.entry(k).or_insert(0) += e;
        }
        r
    };
    for gamma in ug {
        let gamma = if gamma.minus.contains_key(&edge) {
            gamma.flipped()
        } else {
            gamma.clone()
        };
        let Some(&l) = gamma.plus.get(&edge) else {
            continue;
        };
        let mut u1 = gamma.plus.clone();
        u1.remove(&edge);
        let ext = WalkBinomial::new(
            times(&u1, &power(&v2, l)),
            times(&gamma.minus, &power(&u2, l)),
        );
        out.push(ext);
    }
    Ok((glued, normalize_set(out)))
}

/// Labels for the two vertices and two edges created by a star subdivision.
#[derive(Debug, Clone, Default)]
pub struct SubdivisionLabels {
    /// New vertices `p` (on the `x` side) and `q` (on the `y` side).
    pub vertices: [u32; 2],
    /// New edges `y' = {p, v}` and `x' = {v, q}`.
    pub edges: [u32; 2],
    pub names: Option<[String; 2]>,
}

fn primed(graph: &LabeledGraph, id: u32, taken: &BTreeSet<String>) -> String {
    let mut name = format!("{}'", graph.edge_name(id));
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Star subdivision at a degree-2 vertex `v` with incident edges `x`
/// (smaller id, `x = {s, v}`) and `y = {v, t}`: afterwards the path reads
/// `s -x- p -y'- v -x'- q -y- t`, and every binomial is mapped through
/// `x -> x*x'`, `y -> y*y'`.
pub fn star_subdivide_walks(
    g: &LabeledGraph,
    ug: &[WalkBinomial],
    v: u32,
    labels: &SubdivisionLabels,
) -> Result<(LabeledGraph, Vec<WalkBinomial>)> {
    let inc = g.incident(v);
    if inc.len() != 2 {
        return Err(Error::precondition(format!(
            "vertex {v} has degree {} (star subdivision needs degree 2)",
            inc.len()
        )));
    }
    let (x, y) = (inc[0], inc[1]);
    let s = g.other_end(x, v).unwrap();
    let t = g.other_end(y, v).unwrap();
    let [p, q] = labels.vertices;
    let [y2, x2] = labels.edges;
    if p == q || g.has_vertex(p) || g.has_vertex(q) || y2 == x2 || g.edge(y2).is_some() || g.edge(x2).is_some() {
        return Err(Error::precondition("fresh subdivision labels collide"));
    }
    let edges = g
        .edges()
        .map(|(id, a, b)| {
            if id == x {
                (id, s, p)
            } else if id == y {
                (id, q, t)
            } else {
                (id, a, b)
            }
        })
        .chain([(y2, p, v), (x2, v, q)]);
    let mut names = g.names().clone();
    match &labels.names {
        Some([ny, nx]) => {
            names.insert(y2, ny.clone());
            names.insert(x2, nx.clone());
        }
        None if g.names().contains_key(&x) || g.names().contains_key(&y) => {
            let mut taken: BTreeSet<String> = g.var_names().into_iter().collect();
            let ny = primed(g, y, &taken);
            taken.insert(ny.clone());
            let nx = primed(g, x, &taken);
            names.insert(y2, ny);
            names.insert(x2, nx);
        }
        None => {}
    }
    let sub = LabeledGraph::new(g.vertices().chain([p, q]), edges, names)?;
    let walks: Vec<WalkBinomial> = ug
        .iter()
        .map(|w| {
            w.substitute(|id| {
                Some(if id == x {
                    [(x, 1), (x2, 1)].into_iter().collect()
                } else if id == y {
                    [(y, 1), (y2, 1)].into_iter().collect()
                } else {
                    [(id, 1)].into_iter().collect()
                })
            })
        })
        .collect();
    Ok((sub, normalize_set(walks)))
}

/// The graph `G_v` obtained by contracting every edge at `v`; the merged
/// vertex keeps the id `v`. Fails when the result would have a loop or a
/// parallel edge.
pub fn contract_graph(g: &LabeledGraph, v: u32) -> Result<LabeledGraph> {
    if !g.has_vertex(v) {
        return Err(Error::domain(format!("unknown vertex {v}")));
    }
    let star: BTreeSet<u32> = g.incident(v).into_iter().collect();
    let nbrs = g.neighbors(v);
    let merge = |w: u32| if nbrs.contains(&w) { v } else { w };
    let mut edges = Vec::new();
    let mut pairs = BTreeMap::new();
    for (id, a, b) in g.edges().filter(|(id, _, _)| !star.contains(id)) {
        let (a2, b2) = (merge(a), merge(b));
        if a2 == b2 {
            return Err(Error::precondition(format!(
                "contracting at {v} turns edge {} into a loop",
                g.edge_name(id)
            )));
        }
        if let Some(other) = pairs.insert((a2.min(b2), a2.max(b2)), id) {
            return Err(Error::precondition(format!(
                "contracting at {v} makes edges {} and {} parallel",
                g.edge_name(other),
                g.edge_name(id)
            )));
        }
        edges.push((id, a2, b2));
    }
    let names = g
        .names()
        .iter()
        .filter(|(id, _)| !star.contains(id))
        .map(|(k, s)| (*k, s.clone()))
        .collect();
    LabeledGraph::new(g.vertices().filter(|w| !nbrs.contains(w)), edges, names)
}

/// Star contraction at `v`. The basis is the image under `e -> 1` for the
/// edges at `v`, with zero images dropped. The flag reports whether the
/// image contains non-primitive elements; with `reduce` they are removed.
pub fn star_contract_walks(
    g: &LabeledGraph,
    ug: &[WalkBinomial],
    v: u32,
    reduce: bool,
) -> Result<(LabeledGraph, Vec<WalkBinomial>, bool)> {
    let contracted = contract_graph(g, v)?;
    let star: BTreeSet<u32> = g.incident(v).into_iter().collect();
    let image: Vec<WalkBinomial> = ug
        .iter()
        .map(|w| w.substitute(|id| (!star.contains(&id)).then(|| [(id, 1)].into_iter().collect())))
        .filter(|w| !w.is_zero() && !w.plus.is_empty() && !w.minus.is_empty())
        .collect();
    let image = normalize_set(image);
    let filtered = primitive_filter(image.iter().cloned());
    let nonreduced = filtered.len() < image.len();
    Ok((contracted, if reduce { filtered } else { image }, nonreduced))
}

/// Basis-level vertex gluing.
pub fn glue_vertex(
    g: &LabeledGraph,
    ug: &UniversalBasis,
    b: &LabeledGraph,
    ub: &UniversalBasis,
    vg: u32,
    vb: u32,
) -> Result<(LabeledGraph, UniversalBasis)> {
    let field = ug.ring().field();
    let (graph, walks) = glue_vertex_walks(g, &basis_to_walks(g, ug)?, b, &basis_to_walks(b, ub)?, vg, vb)?;
    let basis = walks_to_basis(&graph, &walks, field, ug.provenance())?;
    Ok((graph, basis))
}

/// Basis-level cycle gluing.
pub fn glue_cycle(
    g: &LabeledGraph,
    ug: &UniversalBasis,
    cycle_len: usize,
    edge: u32,
    labels: &CycleLabels,
) -> Result<(LabeledGraph, UniversalBasis)> {
    let field = ug.ring().field();
    let (graph, walks) = glue_cycle_walks(g, &basis_to_walks(g, ug)?, cycle_len, edge, labels)?;
    let basis = walks_to_basis(&graph, &walks, field, ug.provenance())?;
    Ok((graph, basis))
}

/// Basis-level star subdivision.
pub fn star_subdivide(
    g: &LabeledGraph,
    ug: &UniversalBasis,
    v: u32,
    labels: &SubdivisionLabels,
) -> Result<(LabeledGraph, UniversalBasis)> {
    let field = ug.ring().field();
    let (graph, walks) = star_subdivide_walks(g, &basis_to_walks(g, ug)?, v, labels)?;
    let basis = walks_to_basis(&graph, &walks, field, ug.provenance())?;
    Ok((graph, basis))
}

/// Basis-level star contraction.
pub fn star_contract(
    g: &LabeledGraph,
    ug: &UniversalBasis,
    v: u32,
    reduce: bool,
) -> Result<(LabeledGraph, UniversalBasis, bool)> {
    let field = ug.ring().field();
    let (graph, walks, flag) = star_contract_walks(g, &basis_to_walks(g, ug)?, v, reduce)?;
    let basis = walks_to_basis(&graph, &walks, field, ug.provenance())?;
    Ok((graph, basis, flag))
}

/// Sets the named variables to 1 in every element, dropping elements that
/// vanish and duplicates up to sign. The ring is unchanged, so this also
/// applies when the contracted graph would not be simple.
pub fn substitute_one_basis(basis: &UniversalBasis, vars: &[&str]) -> Result<Vec<Polynomial>> {
    let ring = basis.ring();
    let mut kill = vec![false; ring.num_vars()];
    for name in vars {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::domain(format!("unknown variable `{name}`")))?;
        kill[i] = true;
    }
    let mut out: Vec<Polynomial> = Vec::new();
    for p in basis.elements() {
        let q = p.substitute_one(&kill).sign_normalized();
        if q.is_zero() || q.terms().iter().all(|t| t.exp.is_one()) {
            continue;
        }
        if !out.contains(&q) {
            out.push(q);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::oracle::{primitive_oracle, OracleConfig};

    fn m(pairs: &[(u32, u32)]) -> EdgeMonomial {
        pairs.iter().copied().collect()
    }

    fn c4() -> (LabeledGraph, Vec<WalkBinomial>) {
        let g = LabeledGraph::cycle(&[0, 1, 2, 3], &[0, 1, 2, 3], None).unwrap();
        let u = vec![WalkBinomial::new(m(&[(0, 1), (2, 1)]), m(&[(1, 1), (3, 1)]))];
        (g, u)
    }

    #[test]
    fn glue_vertex_rejects_odd_cycle() {
        let (g, u) = c4();
        let tri = LabeledGraph::cycle(&[10, 11, 12], &[10, 11, 12], None).unwrap();
        let err = glue_vertex_walks(&g, &u, &tri, &[], 0, 10).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn glue_vertex_single_edge() {
        let (g, u) = c4();
        let e = LabeledGraph::path(&[10, 11], &[10], None).unwrap();
        let (h, w) = glue_vertex_walks(&g, &u, &e, &[], 2, 10).unwrap();
        assert_eq!(h.num_edges(), 5);
        assert_eq!(w, normalize_set(u));
    }

    #[test]
    fn glue_cycle_on_c4_matches_oracle() {
        let (g, u) = c4();
        let labels = CycleLabels {
            vertices: vec![10, 11, 12, 13],
            edges: vec![10, 11, 12, 13, 14],
            ..Default::default()
        };
        let (h, w) = glue_cycle_walks(&g, &u, 6, 1, &labels).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w, primitive_oracle(&h, &OracleConfig::default()).unwrap());
    }

    #[test]
    fn subdivide_then_contract_round_trips() {
        let g = LabeledGraph::cycle(&[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4, 5], None).unwrap();
        let u = primitive_oracle(&g, &OracleConfig::default()).unwrap();
        let labels = SubdivisionLabels {
            vertices: [20, 21],
            edges: [20, 21],
            names: None,
        };
        let (h, w) = star_subdivide_walks(&g, &u, 3, &labels).unwrap();
        assert_eq!(h.degree(3), 2);
        assert_eq!(w, primitive_oracle(&h, &OracleConfig::default()).unwrap());
        let (back, w2, flag) = star_contract_walks(&h, &w, 3, false).unwrap();
        assert_eq!(back, g);
        assert_eq!(w2, normalize_set(u));
        assert!(!flag);
    }

    #[test]
    fn contraction_rejects_parallel_edges() {
        let (g, u) = c4();
        assert!(matches!(
            star_contract_walks(&g, &u, 0, false),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn subdivide_needs_degree_two() {
        let g = LabeledGraph::new(
            0..4,
            [(0, 0, 1), (1, 0, 2), (2, 0, 3)],
            BTreeMap::new(),
        )
        .unwrap();
        let labels = SubdivisionLabels {
            vertices: [9, 10],
            edges: [9, 10],
            names: None,
        };
        assert!(star_subdivide_walks(&g, &[], 0, &labels).is_err());
    }
}
