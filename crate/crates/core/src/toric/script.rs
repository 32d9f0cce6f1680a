//! Replayable build scripts: a base graph followed by a list of operations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;
use crate::toric::binomial::{normalize_set, WalkBinomial};
use crate::toric::graph::LabeledGraph;
use crate::toric::ops::{
    glue_cycle_walks, glue_vertex_walks, star_contract_walks, star_subdivide_walks, walks_to_basis,
    CycleLabels, SubdivisionLabels,
};
use crate::toric::oracle::{primitive_oracle, OracleConfig};
use crate::ugb::UniversalBasis;

/// A starting graph together with (optionally) its primitive binomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    /// Cycle through `len` vertices; ids default to `0..len`.
    Cycle {
        len: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertex_ids: Option<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edge_ids: Option<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    /// Path with `len` edges.
    Path { len: usize },
    /// Explicit graph; without `basis` the primitive binomials are computed
    /// by brute force.
    Graph {
        graph: LabeledGraph,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Vec<String>>,
    },
}

impl GraphSpec {
    /// Materializes the graph. `fresh` supplies ids for specs that do not
    /// fix them.
    fn realize(&self, fresh: Option<(&mut u32, &mut u32)>) -> Result<(LabeledGraph, Vec<WalkBinomial>)> {
        match self {
            GraphSpec::Cycle {
                len,
                vertex_ids,
                edge_ids,
                names,
            } => {
                let (vs, es) = ids_for(*len, *len, vertex_ids.as_deref(), edge_ids.as_deref(), fresh)?;
                let g = LabeledGraph::cycle(&vs, &es, names.as_deref())?;
                let walks = if len % 2 == 0 {
                    let plus = es.iter().step_by(2).map(|&e| (e, 1)).collect();
                    let minus = es.iter().skip(1).step_by(2).map(|&e| (e, 1)).collect();
                    vec![WalkBinomial::new(plus, minus)]
                } else {
                    Vec::new()
                };
                Ok((g, normalize_set(walks)))
            }
            GraphSpec::Path { len } => {
                let (vs, es) = ids_for(len + 1, *len, None, None, fresh)?;
                Ok((LabeledGraph::path(&vs, &es, None)?, Vec::new()))
            }
            GraphSpec::Graph { graph, basis } => {
                let walks = match basis {
                    None => primitive_oracle(graph, &OracleConfig::default())?,
                    Some(texts) => {
                        let ring = graph.ring(Field::Rationals)?.shared();
                        let walks = texts
                            .iter()
                            .map(|t| WalkBinomial::from_polynomial(graph, &Polynomial::parse(&ring, t)?))
                            .collect::<Result<Vec<_>>>()?;
                        normalize_set(walks)
                    }
                };
                Ok((graph.clone(), walks))
            }
        }
    }
}

fn ids_for(
    nv: usize,
    ne: usize,
    vertex_ids: Option<&[u32]>,
    edge_ids: Option<&[u32]>,
    fresh: Option<(&mut u32, &mut u32)>,
) -> Result<(Vec<u32>, Vec<u32>)> {
    let (mut nv_ctr, mut ne_ctr) = (0u32, 0u32);
    let (vc, ec) = match fresh {
        Some((v, e)) => (v, e),
        None => (&mut nv_ctr, &mut ne_ctr),
    };
    let vs = match vertex_ids {
        Some(v) if v.len() == nv => v.to_vec(),
        Some(_) => return Err(Error::domain("wrong number of vertex ids")),
        None => {
            let v: Vec<u32> = (*vc..*vc + nv as u32).collect();
            *vc += nv as u32;
            v
        }
    };
    let es = match edge_ids {
        Some(e) if e.len() == ne => e.to_vec(),
        Some(_) => return Err(Error::domain("wrong number of edge ids")),
        None => {
            let e: Vec<u32> = (*ec..*ec + ne as u32).collect();
            *ec += ne as u32;
            e
        }
    };
    Ok((vs, es))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "snake_case")]
pub enum Step {
    /// Glue a bipartite graph at vertex `at`. The glued graph gets fresh
    /// ids; `other` indexes its vertices in their own numbering (default 0).
    GlueVertex {
        graph: GraphSpec,
        at: u32,
        #[serde(default)]
        other: usize,
    },
    GlueCycle {
        len: usize,
        edge: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edge_ids: Option<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rename: Option<String>,
    },
    StarSubdivide {
        vertex: u32,
    },
    StarContract {
        vertex: u32,
        #[serde(default)]
        reduce: bool,
    },
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::GlueVertex { .. } => "glue_vertex",
            Step::GlueCycle { .. } => "glue_cycle",
            Step::StarSubdivide { .. } => "star_subdivide",
            Step::StarContract { .. } => "star_contract",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildScript {
    pub base: GraphSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub steps: Vec<Step>,
}

/// Sizes after each step (index 0 is the base graph).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub op: String,
    pub edges: usize,
    pub basis_size: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub possibly_nonreduced: bool,
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub graph: LabeledGraph,
    pub walks: Vec<WalkBinomial>,
    pub report: Vec<StepReport>,
}

impl BuildOutput {
    pub fn basis(&self, field: Field, provenance: &str) -> Result<UniversalBasis> {
        walks_to_basis(&self.graph, &self.walks, field, provenance)
    }
}

/// Replay state: current graph, its binomials, and monotone id counters.
struct State {
    graph: LabeledGraph,
    walks: Vec<WalkBinomial>,
    next_vertex: u32,
    next_edge: u32,
}

impl State {
    fn new(base: &GraphSpec) -> Result<Self> {
        let (graph, walks) = base.realize(None)?;
        let next_vertex = graph.max_vertex().map_or(0, |v| v + 1);
        let next_edge = graph.max_edge().map_or(0, |e| e + 1);
        Ok(Self {
            graph,
            walks,
            next_vertex,
            next_edge,
        })
    }

    fn take_vertices(&mut self, n: usize) -> Vec<u32> {
        let out = (self.next_vertex..self.next_vertex + n as u32).collect();
        self.next_vertex += n as u32;
        out
    }

    fn take_edges(&mut self, n: usize) -> Vec<u32> {
        let out = (self.next_edge..self.next_edge + n as u32).collect();
        self.next_edge += n as u32;
        out
    }

    /// Applies a step, returning the contraction flag.
    fn apply(&mut self, step: &Step) -> Result<bool> {
        match step {
            Step::GlueVertex { graph, at, other } => {
                let mut vc = self.next_vertex;
                let mut ec = self.next_edge;
                let (b, ub) = match graph {
                    GraphSpec::Graph { .. } => relabel_fresh(graph, &mut vc, &mut ec)?,
                    GraphSpec::Cycle { len, names, .. } => GraphSpec::Cycle {
                        len: *len,
                        vertex_ids: None,
                        edge_ids: None,
                        names: names.clone(),
                    }
                    .realize(Some((&mut vc, &mut ec)))?,
                    GraphSpec::Path { .. } => graph.realize(Some((&mut vc, &mut ec)))?,
                };
                let vb = b
                    .vertices()
                    .nth(*other)
                    .ok_or_else(|| Error::domain(format!("glued graph has no vertex #{other}")))?;
                let (g, w) = glue_vertex_walks(&self.graph, &self.walks, &b, &ub, *at, vb)?;
                self.next_vertex = vc;
                self.next_edge = ec;
                self.graph = g;
                self.walks = w;
                Ok(false)
            }
            Step::GlueCycle {
                len,
                edge,
                edge_ids,
                names,
                rename,
            } => {
                if *len < 4 {
                    return Err(Error::domain("cycle length must be at least 4"));
                }
                let vertices = self.take_vertices(len - 2);
                let edges = match edge_ids {
                    Some(ids) => {
                        self.next_edge = self.next_edge.max(ids.iter().max().map_or(0, |m| m + 1));
                        ids.clone()
                    }
                    None => self.take_edges(len - 1),
                };
                let labels = CycleLabels {
                    vertices,
                    edges,
                    names: names.clone(),
                    rename: rename.clone(),
                };
                let (g, w) = glue_cycle_walks(&self.graph, &self.walks, *len, *edge, &labels)?;
                self.graph = g;
                self.walks = w;
                Ok(false)
            }
            Step::StarSubdivide { vertex } => {
                let vs = self.take_vertices(2);
                let es = self.take_edges(2);
                let labels = SubdivisionLabels {
                    vertices: [vs[0], vs[1]],
                    edges: [es[0], es[1]],
                    names: None,
                };
                let (g, w) = star_subdivide_walks(&self.graph, &self.walks, *vertex, &labels)?;
                self.graph = g;
                self.walks = w;
                Ok(false)
            }
            Step::StarContract { vertex, reduce } => {
                let (g, w, flag) = star_contract_walks(&self.graph, &self.walks, *vertex, *reduce)?;
                self.graph = g;
                self.walks = w;
                Ok(flag)
            }
        }
    }

    fn report(&self, op: &str, flag: bool) -> StepReport {
        StepReport {
            op: op.to_string(),
            edges: self.graph.num_edges(),
            basis_size: self.walks.len(),
            possibly_nonreduced: flag,
        }
    }
}

/// Copies an explicit graph spec onto fresh ids, keeping edge names.
fn relabel_fresh(spec: &GraphSpec, vc: &mut u32, ec: &mut u32) -> Result<(LabeledGraph, Vec<WalkBinomial>)> {
    let (g, walks) = spec.realize(None)?;
    let vmap: std::collections::BTreeMap<u32, u32> = g
        .vertices()
        .enumerate()
        .map(|(i, v)| (v, *vc + i as u32))
        .collect();
    let emap: std::collections::BTreeMap<u32, u32> = g
        .edge_ids()
        .enumerate()
        .map(|(i, e)| (e, *ec + i as u32))
        .collect();
    *vc += vmap.len() as u32;
    *ec += emap.len() as u32;
    let names = g.names().iter().map(|(k, v)| (emap[k], v.clone())).collect();
    let h = LabeledGraph::new(
        vmap.values().copied(),
        g.edges().map(|(id, u, v)| (emap[&id], vmap[&u], vmap[&v])),
        names,
    )?;
    let walks = walks
        .iter()
        .map(|w| w.substitute(|id| Some([(emap[&id], 1)].into_iter().collect())))
        .collect();
    Ok((h, walks))
}

/// Replays `script`. The first failing step is reported with its index.
pub fn build(script: &BuildScript) -> Result<BuildOutput> {
    let mut state = State::new(&script.base)?;
    let mut report = vec![state.report("base", false)];
    for (index, step) in script.steps.iter().enumerate() {
        let flag = state.apply(step).map_err(|e| Error::Step {
            index,
            op: step.name().to_string(),
            source: Box::new(e),
        })?;
        report.push(state.report(step.name(), flag));
    }
    Ok(BuildOutput {
        graph: state.graph,
        walks: state.walks,
        report,
    })
}

/// Builds and wraps the result as a universal basis over `field`.
pub fn build_basis(script: &BuildScript, field: Field) -> Result<(LabeledGraph, UniversalBasis, Vec<StepReport>)> {
    let out = build(script)?;
    let provenance = format!(
        "build-script seed={} steps={}",
        script.seed,
        script.steps.len()
    );
    let basis = out.basis(field, &provenance)?;
    Ok((out.graph, basis, out.report))
}

/// Two 4-cycles sharing the edge `g`, with edges named `a..g` in id order.
/// Its primitive binomials are `ag - bf`, `ce - dg` and `ace - bdf`.
pub fn two_squares_script() -> BuildScript {
    let names = |ns: &[&str]| Some(ns.iter().map(|s| s.to_string()).collect());
    BuildScript {
        base: GraphSpec::Cycle {
            len: 4,
            vertex_ids: None,
            edge_ids: Some(vec![0, 1, 6, 5]),
            names: names(&["a", "b", "g", "f"]),
        },
        seed: 0,
        steps: vec![Step::GlueCycle {
            len: 4,
            edge: 6,
            edge_ids: Some(vec![2, 3, 4]),
            names: names(&["c", "d", "e"]),
            rename: None,
        }],
    }
}

/// Draws a random script of up to `steps` operations, keeping the graph at
/// no more than `max_edges` edges. Every emitted step is checked by
/// replaying it, so the result always builds.
pub fn random_script(seed: u64, steps: usize, max_edges: usize) -> Result<BuildScript> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bowtie = GraphSpec::Graph {
        graph: LabeledGraph::new(
            0..5,
            [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 2, 3), (4, 3, 4), (5, 4, 2)],
            Default::default(),
        )?,
        basis: None,
    };
    let bases = [
        GraphSpec::Cycle { len: 4, vertex_ids: None, edge_ids: None, names: None },
        GraphSpec::Cycle { len: 6, vertex_ids: None, edge_ids: None, names: None },
        GraphSpec::Cycle { len: 5, vertex_ids: None, edge_ids: None, names: None },
        GraphSpec::Cycle { len: 3, vertex_ids: None, edge_ids: None, names: None },
        bowtie,
    ];
    let base = bases
        .iter()
        .filter(|b| base_edges(b) <= max_edges)
        .collect::<Vec<_>>()
        .choose(&mut rng)
        .map(|b| (*b).clone())
        .ok_or_else(|| Error::domain("max_edges too small for any base graph"))?;
    let mut state = State::new(&base)?;
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < steps && attempts < steps * 20 {
        attempts += 1;
        let room = max_edges.saturating_sub(state.graph.num_edges());
        let step = match rng.gen_range(0..4) {
            0 => {
                let choices: Vec<GraphSpec> = [1usize, 2]
                    .into_iter()
                    .map(|len| GraphSpec::Path { len })
                    .chain([4usize, 6].into_iter().map(|len| GraphSpec::Cycle {
                        len,
                        vertex_ids: None,
                        edge_ids: None,
                        names: None,
                    }))
                    .filter(|s| base_edges(s) <= room)
                    .collect();
                let Some(spec) = choices.choose(&mut rng).cloned() else {
                    continue;
                };
                let at = *state.graph.vertices().collect::<Vec<_>>().choose(&mut rng).unwrap();
                let other = rng.gen_range(0..base_edges(&spec));
                Step::GlueVertex { graph: spec, at, other }
            }
            1 => {
                let len = if room >= 5 && rng.gen_bool(0.5) { 6 } else { 4 };
                if len - 1 > room || state.graph.num_edges() == 0 {
                    continue;
                }
                let edge = *state.graph.edge_ids().collect::<Vec<_>>().choose(&mut rng).unwrap();
                Step::GlueCycle { len, edge, edge_ids: None, names: None, rename: None }
            }
            2 => {
                let deg2: Vec<u32> = state.graph.vertices().filter(|&v| state.graph.degree(v) == 2).collect();
                if room < 2 || deg2.is_empty() {
                    continue;
                }
                Step::StarSubdivide { vertex: *deg2.choose(&mut rng).unwrap() }
            }
            _ => {
                let vertex = *state.graph.vertices().collect::<Vec<_>>().choose(&mut rng).unwrap();
                Step::StarContract { vertex, reduce: rng.gen_bool(0.5) }
            }
        };
        let backup = (state.graph.clone(), state.walks.clone(), state.next_vertex, state.next_edge);
        match state.apply(&step) {
            Ok(_) if state.graph.num_edges() > 0 => out.push(step),
            Ok(_) | Err(Error::Precondition(_)) | Err(Error::Domain(_)) => {
                (state.graph, state.walks, state.next_vertex, state.next_edge) = backup;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(BuildScript { base, seed, steps: out })
}

fn base_edges(spec: &GraphSpec) -> usize {
    match spec {
        GraphSpec::Cycle { len, .. } => *len,
        GraphSpec::Path { len } => *len,
        GraphSpec::Graph { graph, .. } => graph.num_edges(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_script_on_c4() {
        let script = BuildScript {
            base: GraphSpec::Cycle { len: 4, vertex_ids: None, edge_ids: None, names: None },
            seed: 0,
            steps: vec![],
        };
        let out = build(&script).unwrap();
        assert_eq!(out.graph.num_edges(), 4);
        assert_eq!(out.walks.len(), 1);
        assert_eq!(out.report.len(), 1);
    }

    #[test]
    fn two_squares() {
        let (g, basis, _) = build_basis(&two_squares_script(), Field::Rationals).unwrap();
        assert_eq!(g.var_names(), ["a", "b", "c", "d", "e", "f", "g"]);
        let texts: Vec<String> = basis.elements().iter().map(|p| p.to_string()).collect();
        assert_eq!(texts.len(), 3);
        for t in ["a*g - b*f", "c*e - d*g", "a*c*e - b*d*f"] {
            assert!(texts.iter().any(|x| x == t), "{t} missing from {texts:?}");
        }
    }

    #[test]
    fn failing_step_reports_index() {
        let script = BuildScript {
            base: GraphSpec::Cycle { len: 4, vertex_ids: None, edge_ids: None, names: None },
            seed: 0,
            steps: vec![
                Step::GlueCycle { len: 4, edge: 0, edge_ids: None, names: None, rename: None },
                Step::StarSubdivide { vertex: 0 },
            ],
        };
        match build(&script) {
            Err(Error::Step { index, op, .. }) => {
                assert_eq!(index, 1);
                assert_eq!(op, "star_subdivide");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_shape() {
        let text = r#"{"base": {"kind": "cycle", "len": 6}, "seed": 3,
            "steps": [{"op": "glue_cycle", "args": {"len": 4, "edge": 2}},
                      {"op": "star_contract", "args": {"vertex": 0}}]}"#;
        let script: BuildScript = serde_json::from_str(text).unwrap();
        assert_eq!(script.steps.len(), 2);
        let again: BuildScript = serde_json::from_str(&serde_json::to_string(&script).unwrap()).unwrap();
        assert_eq!(again, script);
    }

    #[test]
    fn random_scripts_replay_identically() {
        for seed in 0..5 {
            let s = random_script(seed, 8, 12).unwrap();
            let a = build(&s).unwrap();
            let b = build(&s).unwrap();
            assert_eq!(a.graph, b.graph);
            assert_eq!(a.walks, b.walks);
            assert!(a.graph.num_edges() <= 12);
            assert_eq!(random_script(seed, 8, 12).unwrap(), s);
        }
    }
}
