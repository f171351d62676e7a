//! Labelled digraphs (Moore diagrams) and the small graph toolkit the classifiers share.
//!
//! The algorithms here work on plain adjacency lists, `succ[v]` listing the targets of
//! the arrows leaving `v` with multiplicity.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ArrowLabel {
    /// `(input; output)` of a Moore diagram arrow.
    Letters { input: usize, output: usize },
    Generator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub label: ArrowLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LabeledDigraph {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl LabeledDigraph {
    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == v).count()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.vertices.len()];
        for a in &self.arrows {
            succ[a.source].push(a.target);
        }
        succ
    }
}

/// Strongly connected components in reverse topological order (sinks first), iterative Tarjan.
pub fn tarjan_scc(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Component id per vertex, for components as returned by [`tarjan_scc`].
pub fn component_ids(n: usize, comps: &[Vec<usize>]) -> Vec<usize> {
    let mut id = vec![0; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            id[v] = c;
        }
    }
    id
}

/// True if the component carries at least one arrow inside itself.
pub fn is_cyclic_component(succ: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || succ[comp[0]].contains(&comp[0])
}

/// Vertices lying on some directed cycle.
pub fn cyclic_vertices(succ: &[Vec<usize>]) -> Vec<bool> {
    let mut on_cycle = vec![false; succ.len()];
    for comp in tarjan_scc(succ) {
        if is_cyclic_component(succ, &comp) {
            for v in comp {
                on_cycle[v] = true;
            }
        }
    }
    on_cycle
}

/// Vertices reachable (in zero or more steps) from `sources`.
pub fn forward_closure(succ: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut todo: Vec<usize> = Vec::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            todo.push(s);
        }
    }
    while let Some(v) = todo.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    seen
}

/// Vertices from which some vertex of `targets` is reachable (in zero or more steps).
pub fn backward_closure(succ: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let sources = (0..n).filter(|&v| targets[v]);
    forward_closure(&pred, sources)
}

/// Vertices reachable from a directed cycle: the ends of left-infinite paths.
pub fn limit_vertices(succ: &[Vec<usize>]) -> Vec<bool> {
    let on_cycle = cyclic_vertices(succ);
    forward_closure(succ, (0..succ.len()).filter(|&v| on_cycle[v]))
}

/// Elementary cycles as vertex sequences, each starting at its smallest vertex. Parallel
/// arrows are collapsed. Enumeration stops after `cap` cycles.
pub fn elementary_cycles(succ: &[Vec<usize>], cap: usize) -> Vec<Vec<usize>> {
    fn extend(
        succ: &[Vec<usize>],
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) {
        let v = *path.last().unwrap();
        let mut targets = succ[v].clone();
        targets.sort_unstable();
        targets.dedup();
        for w in targets {
            if out.len() >= cap {
                return;
            }
            if w == start {
                out.push(path.clone());
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                extend(succ, start, path, on_path, out, cap);
                path.pop();
                on_path[w] = false;
            }
        }
    }

    let mut out = Vec::new();
    let mut on_path = vec![false; succ.len()];
    for start in 0..succ.len() {
        if out.len() >= cap {
            break;
        }
        let mut path = vec![start];
        on_path[start] = true;
        extend(succ, start, &mut path, &mut on_path, &mut out, cap);
        on_path[start] = false;
    }
    out
}
