//! Finite approximations of the limit space: tile adjacency, tile boundaries, Schreier
//! graphs, and their text emission.
//!
//! Level-`n` words are vertices, written in reading order (the first letter is the one a
//! state reads first) and enumerated lexicographically.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::contraction::{open_set_condition, Nucleus};
use crate::digraph::{ArrowLabel, LabeledDigraph};
use crate::error::{Error, Result};
use crate::machine::{MealyMachine, StateId};
use crate::structure::{is_pcf, LeftInfSeq};
use crate::word::{format_letters, Alphabet, StateWord};

/// Default bound on the number of vertices of a level graph.
pub const DEFAULT_LEVEL_CAP: u128 = 65536;

fn level_vertices(alphabet: Alphabet, level: usize, cap: u128) -> Result<usize> {
    if level == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let words = alphabet.level_size(level);
    if words > cap {
        return Err(Error::LevelCap { level, words, cap });
    }
    Ok(words as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TileEdge {
    /// Smaller endpoint, as an index into the level.
    pub u: usize,
    pub v: usize,
    /// Non-trivial nucleus states `g` with `act(g, u) = v`, in state order.
    pub witnesses: Vec<StateId>,
}

/// Adjacency of the tiles of one level: `{u, v}` is an edge when the tiles of `u` and `v`
/// meet, i.e. when some non-trivial nucleus state maps `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileGraph {
    pub alphabet: Alphabet,
    pub level: usize,
    pub edges: Vec<TileEdge>,
    witness_names: Vec<String>,
}

impl TileGraph {
    pub fn vertex_count(&self) -> usize {
        self.alphabet.level_size(self.level) as usize
    }

    pub fn word(&self, index: usize) -> StateWord {
        self.alphabet.word_at(self.level, index)
    }

    pub fn witness_name(&self, g: StateId) -> &str {
        &self.witness_names[g]
    }

    /// Neighbours of every vertex, sorted.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (u, v) = (u.min(v), u.max(v));
        self.edges.binary_search_by(|e| (e.u, e.v).cmp(&(u, v))).is_ok()
    }
}

pub fn tile_graph(n: &Nucleus, level: usize) -> Result<TileGraph> {
    tile_graph_capped(n, level, DEFAULT_LEVEL_CAP)
}

pub fn tile_graph_capped(n: &Nucleus, level: usize, cap: u128) -> Result<TileGraph> {
    let m = n.machine();
    let alphabet = m.alphabet();
    let count = level_vertices(alphabet, level, cap)?;
    let witnesses: Vec<StateId> = n.nontrivial_states().collect();
    let mut pairs: Vec<(usize, usize, StateId)> = (0..count)
        .into_par_iter()
        .flat_map_iter(|u| {
            let word = alphabet.word_at(level, u);
            witnesses
                .iter()
                .filter_map(|&g| {
                    let v = alphabet.index_of(m.act(g, word.letters()).letters());
                    (v > u).then_some((u, v, g))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    pairs.sort_unstable();
    let mut edges: Vec<TileEdge> = Vec::new();
    for (u, v, g) in pairs {
        match edges.last_mut() {
            Some(e) if e.u == u && e.v == v => e.witnesses.push(g),
            _ => edges.push(TileEdge {
                u,
                v,
                witnesses: vec![g],
            }),
        }
    }
    Ok(TileGraph {
        alphabet,
        level,
        edges,
        witness_names: m.names(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryCertificates {
    /// Pairs `(s, g)`: `s` is read along a nucleus path ending at `g`, and `g` moves `v`,
    /// so the point `…s·v` lies on the boundary of the tile of `v`.
    pub certificates: BTreeSet<(LeftInfSeq, String)>,
    /// Without the open set condition tiles may be covered by their neighbours and the
    /// certificates describe the boundary only partially.
    pub open_set_condition: bool,
}

pub fn boundary_certificates(n: &Nucleus, v: &StateWord) -> Result<BoundaryCertificates> {
    if v.is_empty() {
        return Err(Error::InvalidWord("empty tile index".into()));
    }
    v.check(n.machine().alphabet())?;
    let report = is_pcf(n);
    if !report.is_pcf {
        return Err(Error::NotPcf);
    }
    let osc = open_set_condition(n);
    if !osc {
        log::warn!("open set condition fails; boundary certificates are partial");
    }
    let m = n.machine();
    let certificates = report
        .witnesses
        .into_iter()
        .filter(|w| m.act(w.state, v.letters()) != *v)
        .map(|w| (w.sequence, w.ending_state))
        .collect();
    Ok(BoundaryCertificates {
        certificates,
        open_set_condition: osc,
    })
}

/// Action graph of a set of generators on one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierGraph {
    pub alphabet: Alphabet,
    pub level: usize,
    pub generators: Vec<String>,
    /// `targets[i][u]` is the image of vertex `u` under generator `i`.
    pub targets: Vec<Vec<usize>>,
}

impl SchreierGraph {
    pub fn vertex_count(&self) -> usize {
        self.alphabet.level_size(self.level) as usize
    }

    pub fn word(&self, index: usize) -> StateWord {
        self.alphabet.word_at(self.level, index)
    }

    /// Connected, ignoring arrow directions.
    pub fn is_connected(&self) -> bool {
        let count = self.vertex_count();
        let mut adj = vec![Vec::new(); count];
        for t in &self.targets {
            for (u, &v) in t.iter().enumerate() {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let reach = crate::digraph::forward_closure(&adj, [0]);
        reach.iter().all(|&b| b)
    }
}

pub fn schreier_graph<S: AsRef<str>>(m: &MealyMachine, generators: &[S], level: usize) -> Result<SchreierGraph> {
    schreier_graph_capped(m, generators, level, DEFAULT_LEVEL_CAP)
}

pub fn schreier_graph_capped<S: AsRef<str>>(
    m: &MealyMachine,
    generators: &[S],
    level: usize,
    cap: u128,
) -> Result<SchreierGraph> {
    let ids = generators
        .iter()
        .map(|g| m.resolve(g.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let alphabet = m.alphabet();
    let count = level_vertices(alphabet, level, cap)?;
    let targets = ids
        .iter()
        .map(|&g| {
            (0..count)
                .into_par_iter()
                .map(|u| {
                    let word = alphabet.word_at(level, u);
                    alphabet.index_of(m.act(g, word.letters()).letters())
                })
                .collect()
        })
        .collect();
    Ok(SchreierGraph {
        alphabet,
        level,
        generators: generators.iter().map(|g| g.as_ref().to_string()).collect(),
        targets,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Structured,
}

/// Graph flattened for emission: vertices in output order, edges as indices into them.
pub struct GraphView {
    pub kind: &'static str,
    pub level: Option<usize>,
    pub directed: bool,
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize, String)>,
}

pub trait Emit {
    fn view(&self) -> GraphView;
}

impl Emit for TileGraph {
    fn view(&self) -> GraphView {
        GraphView {
            kind: "tiles",
            level: Some(self.level),
            directed: false,
            vertices: (0..self.vertex_count()).map(|i| self.word(i).to_string()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| (e.u, e.v, self.witness_names[e.witnesses[0]].clone()))
                .collect(),
        }
    }
}

impl Emit for SchreierGraph {
    fn view(&self) -> GraphView {
        let mut edges = Vec::new();
        for (g, t) in self.generators.iter().zip(&self.targets) {
            for (u, &v) in t.iter().enumerate() {
                edges.push((u, v, g.clone()));
            }
        }
        GraphView {
            kind: "schreier",
            level: Some(self.level),
            directed: true,
            vertices: (0..self.vertex_count()).map(|i| self.word(i).to_string()).collect(),
            edges,
        }
    }
}

impl Emit for LabeledDigraph {
    fn view(&self) -> GraphView {
        GraphView {
            kind: "diagram",
            level: None,
            directed: true,
            vertices: self.vertices.clone(),
            edges: self
                .arrows
                .iter()
                .map(|a| {
                    let label = match &a.label {
                        ArrowLabel::Letters { input, output } => {
                            format!("{}/{}", format_letters(&[*input]), format_letters(&[*output]))
                        }
                        ArrowLabel::Generator(g) => g.clone(),
                    };
                    (a.source, a.target, label)
                })
                .collect(),
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders a graph deterministically: vertices sorted, edges sorted by
/// `(source, target, label)`.
pub fn emit_graph(g: &impl Emit, format: GraphFormat) -> String {
    let view = g.view();
    let mut order: Vec<usize> = (0..view.vertices.len()).collect();
    order.sort_by(|&a, &b| view.vertices[a].cmp(&view.vertices[b]).then(a.cmp(&b)));
    let mut rank = vec![0; order.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut edges: Vec<(usize, usize, &str)> = view
        .edges
        .iter()
        .map(|(u, v, l)| {
            let (u, v) = if !view.directed && rank[*v] < rank[*u] { (*v, *u) } else { (*u, *v) };
            (rank[u], rank[v], l.as_str())
        })
        .collect();
    edges.sort();
    edges.dedup();
    let name = |r: usize| &view.vertices[order[r]];

    let mut out = String::new();
    match format {
        GraphFormat::Dot => {
            let id = match view.level {
                Some(l) => format!("{}_{}", view.kind, l),
                None => view.kind.to_string(),
            };
            let (keyword, arrow) = if view.directed { ("digraph", "->") } else { ("graph", "--") };
            writeln!(out, "{keyword} {id} {{").unwrap();
            for r in 0..order.len() {
                writeln!(out, "  {};", quote(name(r))).unwrap();
            }
            for (u, v, l) in &edges {
                writeln!(out, "  {} {arrow} {} [label={}];", quote(name(*u)), quote(name(*v)), quote(l)).unwrap();
            }
            out.push_str("}\n");
        }
        GraphFormat::Structured => {
            write!(out, "{} directed={}", view.kind, view.directed).unwrap();
            if let Some(l) = view.level {
                write!(out, " level={l}").unwrap();
            }
            writeln!(out, " vertices={} edges={}", order.len(), edges.len()).unwrap();
            for r in 0..order.len() {
                writeln!(out, "vertex {}", name(r)).unwrap();
            }
            for (u, v, l) in &edges {
                writeln!(out, "edge {} {} {}", name(*u), name(*v), l).unwrap();
            }
            out.push_str("end\n");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::{nucleus_of_machine, NucleusCaps};
    use crate::zoo;

    fn nucleus(name: &str) -> Nucleus {
        let m = zoo::entry(name).unwrap().machine();
        nucleus_of_machine(&m, NucleusCaps::default()).unwrap().into_nucleus().unwrap()
    }

    /// All pairs `{u, v}` joined by some non-trivial nucleus state, by a direct scan.
    fn pair_scan(n: &Nucleus, level: usize) -> BTreeSet<(usize, usize)> {
        let m = n.machine();
        let a = m.alphabet();
        let words: Vec<StateWord> = a.words(level).collect();
        let mut out = BTreeSet::new();
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                if i < j && n.nontrivial_states().any(|g| m.act(g, u.letters()) == *v) {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn adder_level_three_is_a_cycle() {
        let g = tile_graph(&nucleus("adder"), 3).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edges.len(), 8);
        assert!(g.adjacency().iter().all(|a| a.len() == 2));
    }

    #[test]
    fn edges_match_pair_scan() {
        for name in ["adder", "grigorchuk", "basilica", "gupta_sidki_3"] {
            let n = nucleus(name);
            for level in 1..=3 {
                let g = tile_graph(&n, level).unwrap();
                let got: BTreeSet<_> = g.edges.iter().map(|e| (e.u, e.v)).collect();
                assert_eq!(got, pair_scan(&n, level), "{name} level {level}");
                for e in &g.edges {
                    for &w in &e.witnesses {
                        assert_eq!(n.machine().act(w, g.word(e.u).letters()), g.word(e.v));
                    }
                }
            }
        }
    }

    #[test]
    fn identity_tiles_are_isolated() {
        let n = nucleus("identity");
        for level in 1..=4 {
            assert!(tile_graph(&n, level).unwrap().edges.is_empty());
        }
    }

    #[test]
    fn level_guards() {
        let n = nucleus("adder");
        assert!(matches!(tile_graph(&n, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(tile_graph(&n, 17), Err(Error::LevelCap { level: 17, .. })));
        assert!(tile_graph_capped(&n, 17, 1 << 17).is_ok());
        assert!(tile_graph(&n, 16).is_ok());
    }

    #[test]
    fn adder_certificates() {
        let n = nucleus("adder");
        let c = boundary_certificates(&n, &"00".parse().unwrap()).unwrap();
        assert_eq!(c.certificates.len(), 2);
        assert!(c.open_set_condition);
        assert!(boundary_certificates(&n, &StateWord::empty()).is_err());
        assert!(boundary_certificates(&n, &"2".parse().unwrap()).is_err());
    }

    #[test]
    fn grigorchuk_certificates() {
        // a ends the paths reading …1110 and moves 1; b, c, d fix 1
        let n = nucleus("grigorchuk");
        let c = boundary_certificates(&n, &"1".parse().unwrap()).unwrap();
        let got: Vec<_> = c.certificates.iter().map(|(s, g)| (s.to_string(), g.as_str())).collect();
        assert_eq!(got, [("...(1)0".to_string(), "a")]);
        assert!(tile_graph(&n, 1).unwrap().has_edge(0, 1));
    }

    #[test]
    fn identity_certificates_are_empty() {
        let n = nucleus("identity");
        let c = boundary_certificates(&n, &"01".parse().unwrap()).unwrap();
        assert!(c.certificates.is_empty());
    }

    #[test]
    fn schreier_examples() {
        let adder = zoo::entry("adder").unwrap().machine();
        let s = schreier_graph(&adder, &["a"], 2).unwrap();
        // 00 -> 10 -> 01 -> 11 -> 00
        assert_eq!(s.targets, vec![vec![2, 3, 1, 0]]);
        assert!(s.is_connected());

        let id = zoo::entry("identity").unwrap().machine();
        let s = schreier_graph(&id, &["e"], 3).unwrap();
        assert!(s.targets[0].iter().enumerate().all(|(u, &v)| u == v));

        let g = zoo::entry("grigorchuk").unwrap().machine();
        let s = schreier_graph(&g, &["a", "b", "c", "d"], 3).unwrap();
        assert_eq!(s.vertex_count(), 8);
        assert!(s.is_connected());
        assert!(schreier_graph(&g, &["x"], 2).is_err());
    }

    #[test]
    fn emission_examples() {
        let g = tile_graph(&nucleus("adder"), 1).unwrap();
        let text = emit_graph(&g, GraphFormat::Structured);
        assert_eq!(
            text,
            "tiles directed=false level=1 vertices=2 edges=1\nvertex 0\nvertex 1\nedge 0 1 a\nend\n"
        );
        let dot = emit_graph(&g, GraphFormat::Dot);
        assert_eq!(dot, "graph tiles_1 {\n  \"0\";\n  \"1\";\n  \"0\" -- \"1\" [label=\"a\"];\n}\n");

        let empty = LabeledDigraph {
            vertices: Vec::new(),
            arrows: Vec::new(),
        };
        assert_eq!(
            emit_graph(&empty, GraphFormat::Structured),
            "diagram directed=true vertices=0 edges=0\nend\n"
        );
        assert_eq!(emit_graph(&empty, GraphFormat::Dot), "digraph diagram {\n}\n");

        let adder = zoo::entry("adder").unwrap().machine();
        let s = schreier_graph(&adder, &["a"], 2).unwrap();
        assert!(emit_graph(&s, GraphFormat::Dot).contains("\"00\" -> \"10\" [label=\"a\"];"));
    }
}
