//! Classification of automata and nuclei by their cycle structure.
//!
//! * finitary depth and the activity counts `θ(k, q)`;
//! * the bounded criterion: after removing the trivial state, non-trivial cycles of the
//!   Moore diagram are disjoint and no directed path joins two of them;
//! * the partition of a nucleus into finitary states and the rest;
//! * post-critical finiteness: finitely many left-infinite paths in the nucleus diagram end
//!   at a non-trivial state, and the letter sequences read along them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::contraction::Nucleus;
use crate::digraph::{self, component_ids, elementary_cycles, is_cyclic_component, tarjan_scc};
use crate::error::{Error, Result};
use crate::machine::{MealyMachine, StateId};
use crate::word::{Letter, StateWord};

/// Enumeration bound for cycles inside a component that is not a simple cycle.
const CYCLE_LISTING_CAP: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FinitaryDepth {
    Depth(usize),
    NotFinitary,
}

impl FinitaryDepth {
    pub fn is_finitary(self) -> bool {
        matches!(self, FinitaryDepth::Depth(_))
    }
}

impl fmt::Display for FinitaryDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinitaryDepth::Depth(n) => write!(f, "{n}"),
            FinitaryDepth::NotFinitary => f.write_str("not finitary"),
        }
    }
}

/// Arrows of the minimized machine with those into the trivial state dropped.
fn nontrivial_successors(m: &MealyMachine) -> Vec<Vec<StateId>> {
    let id = m.identity_state();
    (0..m.len())
        .map(|q| {
            if Some(q) == id {
                return Vec::new();
            }
            m.state(q)
                .transitions
                .iter()
                .copied()
                .filter(|&t| Some(t) != id)
                .collect()
        })
        .collect()
}

/// Depth of every state: the least `n` with `q|v` trivial for all `v` of length `n`.
pub fn finitary_depths(m: &MealyMachine) -> Vec<FinitaryDepth> {
    let (min, class) = m.minimize();
    let succ = nontrivial_successors(&min);
    let mut depth = vec![FinitaryDepth::NotFinitary; min.len()];
    if let Some(id) = min.identity_state() {
        depth[id] = FinitaryDepth::Depth(0);
        // sinks first, so successors are settled before their predecessors
        for comp in tarjan_scc(&succ) {
            let q = comp[0];
            if q == id || is_cyclic_component(&succ, &comp) {
                continue;
            }
            let mut deepest = 0;
            let mut finitary = true;
            for &t in &min.state(q).transitions {
                match depth[t] {
                    FinitaryDepth::Depth(k) => deepest = deepest.max(k),
                    FinitaryDepth::NotFinitary => finitary = false,
                }
            }
            if finitary {
                depth[q] = FinitaryDepth::Depth(deepest + 1);
            }
        }
    }
    class.into_iter().map(|c| depth[c]).collect()
}

pub fn finitary_depth(m: &MealyMachine, q: StateId) -> FinitaryDepth {
    finitary_depths(m)[q]
}

/// `θ(k, q)`: the number of words `v` of length `k` for which `q|v` moves some letter.
pub fn activity_count(m: &MealyMachine, q: StateId, k: usize) -> u128 {
    let mut count = vec![0u128; m.len()];
    count[q] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; m.len()];
        for (s, &c) in count.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &t in &m.state(s).transitions {
                next[t] = next[t].saturating_add(c);
            }
        }
        count = next;
    }
    (0..m.len())
        .filter(|&s| !m.is_inactive(s))
        .fold(0u128, |acc, s| acc.saturating_add(count[s]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condensation {
    pub components: Vec<Vec<String>>,
    /// Arrows between distinct components, as indices into `components`.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A strongly connected component that is not a single simple cycle.
    NotSimpleComponent { states: Vec<String> },
    /// A directed path from one non-trivial cycle to another, as indices into `cycles`.
    ConnectedCycles { from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    /// Simple cycles avoiding the trivial state, each starting at its first state.
    pub cycles: Vec<Vec<String>>,
    pub scc_condensation: Condensation,
    pub connected_cycle_pairs: Vec<(usize, usize)>,
    pub violations: Vec<Violation>,
}

/// Order of the vertices of a component that is a simple cycle, starting at its smallest.
fn cycle_order(succ: &[Vec<usize>], comp: &[usize], comp_id: &[usize]) -> Vec<usize> {
    let mut order = vec![comp[0]];
    loop {
        let v = *order.last().unwrap();
        let next = succ[v]
            .iter()
            .copied()
            .find(|&w| comp_id[w] == comp_id[v])
            .expect("cycle vertex has an arrow inside its component");
        if next == order[0] {
            return order;
        }
        order.push(next);
    }
}

/// True if every vertex of the cyclic component has exactly one arrow to, and one arrow
/// from, the component.
fn is_simple_cycle(succ: &[Vec<usize>], comp: &[usize], comp_id: &[usize]) -> bool {
    let c = comp_id[comp[0]];
    let mut indegree = vec![0usize; comp.len()];
    for &v in comp {
        let inside: Vec<usize> = succ[v].iter().copied().filter(|&w| comp_id[w] == c).collect();
        if inside.len() != 1 {
            return false;
        }
        let pos = comp.iter().position(|&u| u == inside[0]).unwrap();
        indegree[pos] += 1;
    }
    indegree.iter().all(|&k| k == 1)
}

/// Bounded criterion on the minimized machine; returns the verdict and the cycle report.
pub fn is_bounded(m: &MealyMachine) -> (bool, CycleReport) {
    let (min, _) = m.minimize();
    let id = min.identity_state();
    let succ = nontrivial_successors(&min);
    let name = |q: usize| min.name(q).to_string();

    let comps: Vec<Vec<usize>> = tarjan_scc(&succ)
        .into_iter()
        .filter(|c| Some(c[0]) != id)
        .rev()
        .collect();
    let comp_id = {
        let mut ids = component_ids(min.len(), &comps);
        if let Some(id) = id {
            ids[id] = usize::MAX;
        }
        ids
    };

    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut violations = Vec::new();
    for comp in &comps {
        if !is_cyclic_component(&succ, comp) {
            continue;
        }
        if is_simple_cycle(&succ, comp, &comp_id) {
            cycles.push(cycle_order(&succ, comp, &comp_id));
        } else {
            violations.push(Violation::NotSimpleComponent {
                states: comp.iter().map(|&q| name(q)).collect(),
            });
            let inner: Vec<Vec<usize>> = (0..min.len())
                .map(|v| {
                    if comp_id[v] == comp_id[comp[0]] {
                        succ[v].iter().copied().filter(|&w| comp_id[w] == comp_id[v]).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            cycles.extend(elementary_cycles(&inner, CYCLE_LISTING_CAP));
        }
    }

    let mut connected = Vec::new();
    for (i, ci) in cycles.iter().enumerate() {
        let reach = digraph::forward_closure(&succ, ci.iter().copied());
        for (j, cj) in cycles.iter().enumerate() {
            if i != j && cj.iter().any(|&v| reach[v]) {
                connected.push((i, j));
                violations.push(Violation::ConnectedCycles { from: i, to: j });
            }
        }
    }

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            if comp_id[v] != usize::MAX && comp_id[w] != usize::MAX && comp_id[v] != comp_id[w] {
                edges.insert((comp_id[v], comp_id[w]));
            }
        }
    }

    let report = CycleReport {
        cycles: cycles
            .iter()
            .map(|c| c.iter().map(|&q| name(q)).collect())
            .collect(),
        scc_condensation: Condensation {
            components: comps
                .iter()
                .map(|c| c.iter().map(|&q| name(q)).collect())
                .collect(),
            edges: edges.into_iter().collect(),
        },
        connected_cycle_pairs: connected,
        violations,
    };
    (report.violations.is_empty(), report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NucleusPartition {
    /// Finitary states.
    pub finitary: Vec<String>,
    /// The remaining states.
    pub cyclic: Vec<String>,
    /// Cycles of the subgraph on the non-finitary states.
    pub cycles: Vec<Vec<String>>,
    /// The subgraph on the non-finitary states, with every arrow between them, is a
    /// disjoint union of simple cycles.
    pub disjoint_simple_cycles: bool,
}

pub fn nucleus_partition(n: &Nucleus) -> NucleusPartition {
    let m = n.machine();
    let depths = finitary_depths(m);
    let in_rest: Vec<bool> = depths.iter().map(|d| !d.is_finitary()).collect();
    let succ: Vec<Vec<usize>> = (0..m.len())
        .map(|q| {
            if !in_rest[q] {
                return Vec::new();
            }
            m.state(q).transitions.iter().copied().filter(|&t| in_rest[t]).collect()
        })
        .collect();
    let mut indegree = vec![0usize; m.len()];
    for ws in &succ {
        for &w in ws {
            indegree[w] += 1;
        }
    }
    let flag = (0..m.len()).filter(|&q| in_rest[q]).all(|q| succ[q].len() == 1 && indegree[q] == 1);
    let cycles = elementary_cycles(&succ, CYCLE_LISTING_CAP);
    let names = |keep: bool| {
        (0..m.len())
            .filter(|&q| in_rest[q] == keep)
            .map(|q| m.name(q).to_string())
            .collect()
    };
    NucleusPartition {
        finitary: names(false),
        cyclic: names(true),
        cycles: cycles
            .iter()
            .map(|c| c.iter().map(|&q| m.name(q).to_string()).collect())
            .collect(),
        disjoint_simple_cycles: flag,
    }
}

/// Eventually periodic left-infinite sequence `…ppp·t`: the period repeats to the left and
/// the tail sits at the right end. Always kept canonical: primitive period and shortest
/// tail, so equal sequences compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeftInfSeq {
    period: StateWord,
    tail: StateWord,
}

impl LeftInfSeq {
    pub fn new(period: impl Into<StateWord>, tail: impl Into<StateWord>) -> Result<Self> {
        let mut period: Vec<Letter> = period.into().0;
        let mut tail: Vec<Letter> = tail.into().0;
        if period.is_empty() {
            return Err(Error::InvalidArgument("empty period".into()));
        }
        let k = (1..=period.len())
            .find(|&k| period.len().is_multiple_of(k) && period.chunks(k).all(|c| c == &period[..k]))
            .unwrap();
        period.truncate(k);
        // `…p1..pk·p1 t'` is `…(p2..pk p1)·t'`
        let absorbed = tail
            .iter()
            .enumerate()
            .take_while(|&(i, &x)| x == period[i % k])
            .count();
        period.rotate_left(absorbed % k);
        tail.drain(..absorbed);
        Ok(LeftInfSeq {
            period: StateWord(period),
            tail: StateWord(tail),
        })
    }

    pub fn period(&self) -> &StateWord {
        &self.period
    }

    pub fn tail(&self) -> &StateWord {
        &self.tail
    }

    /// The rightmost `n` letters, in reading order.
    pub fn suffix(&self, n: usize) -> Vec<Letter> {
        let k = self.period.len();
        let t = self.tail.letters();
        let mut out: Vec<Letter> = (0..n)
            .map(|i| {
                // i-th letter counted from the right end, starting at 0
                if i < t.len() {
                    t[t.len() - 1 - i]
                } else {
                    let j = i - t.len();
                    self.period.letters()[k - 1 - (j % k)]
                }
            })
            .collect();
        out.reverse();
        out
    }
}

impl fmt::Display for LeftInfSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "...({}){}", self.period, self.tail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub sequence: LeftInfSeq,
    pub state: StateId,
    pub ending_state: String,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Fields<'a> {
            period: String,
            tail: String,
            ending_state: &'a str,
        }
        Fields {
            period: self.sequence.period.to_string(),
            tail: self.sequence.tail.to_string(),
            ending_state: &self.ending_state,
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PcfReport {
    pub is_pcf: bool,
    /// Number of left-infinite paths ending at a non-trivial state, when finite.
    pub path_count: Option<usize>,
    pub witnesses: Vec<Witness>,
}

struct LiveArrow {
    letter: Letter,
    target: StateId,
}

/// Decides whether finitely many left-infinite paths of the nucleus diagram end at a
/// non-trivial state, listing them when they do.
///
/// An arrow is live when its source ends a left-infinite path and its target reaches a
/// non-trivial state; exactly the live arrows occur on such paths. The paths are finite in
/// number iff every vertex on a live cycle has a single incoming live arrow. Each path is
/// then a cycle traversed forever followed by a walk that leaves it and never meets a cycle
/// again.
pub fn is_pcf(n: &Nucleus) -> PcfReport {
    let m = n.machine();
    let succ = m.successors();
    let ends = digraph::limit_vertices(&succ);
    let nontrivial: Vec<bool> = (0..m.len()).map(|q| q != n.identity()).collect();
    let leads_on = digraph::backward_closure(&succ, &nontrivial);

    let live: Vec<Vec<LiveArrow>> = (0..m.len())
        .map(|q| {
            if !ends[q] {
                return Vec::new();
            }
            (0..m.degree())
                .filter(|&x| leads_on[m.next(q, x)])
                .map(|x| LiveArrow {
                    letter: x,
                    target: m.next(q, x),
                })
                .collect()
        })
        .collect();
    let live_succ: Vec<Vec<usize>> = live
        .iter()
        .map(|arrows| arrows.iter().map(|a| a.target).collect())
        .collect();

    let mut indegree = vec![0usize; m.len()];
    for arrows in &live {
        for a in arrows {
            indegree[a.target] += 1;
        }
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&live_succ)
        .into_iter()
        .filter(|c| is_cyclic_component(&live_succ, c))
        .collect();
    comps.sort();
    let mut on_cycle = vec![false; m.len()];
    for c in &comps {
        for &v in c {
            on_cycle[v] = true;
        }
    }
    if (0..m.len()).any(|v| on_cycle[v] && indegree[v] != 1) {
        return PcfReport {
            is_pcf: false,
            path_count: None,
            witnesses: Vec::new(),
        };
    }

    let mut witnesses = Vec::new();
    for comp in &comps {
        // walk the cycle from its smallest vertex
        let mut order = vec![comp[0]];
        let mut letters = Vec::new();
        loop {
            let v = *order.last().unwrap();
            let a = live[v]
                .iter()
                .find(|a| on_cycle[a.target])
                .expect("cycle vertex continues on its cycle");
            letters.push(a.letter);
            if a.target == order[0] {
                break;
            }
            order.push(a.target);
        }
        for (i, &c) in order.iter().enumerate() {
            let mut period = letters.clone();
            period.rotate_left(i);
            let mut tail = Vec::new();
            collect_walks(m, &live, &on_cycle, c, &period, &mut tail, &mut witnesses);
        }
    }
    PcfReport {
        is_pcf: true,
        path_count: Some(witnesses.len()),
        witnesses,
    }
}

fn collect_walks(
    m: &MealyMachine,
    live: &[Vec<LiveArrow>],
    on_cycle: &[bool],
    v: StateId,
    period: &[Letter],
    tail: &mut Vec<Letter>,
    out: &mut Vec<Witness>,
) {
    out.push(Witness {
        sequence: LeftInfSeq::new(period.to_vec(), tail.clone()).expect("non-empty period"),
        state: v,
        ending_state: m.name(v).to_string(),
    });
    for a in &live[v] {
        if on_cycle[a.target] {
            continue;
        }
        tail.push(a.letter);
        collect_walks(m, live, on_cycle, a.target, period, tail, out);
        tail.pop();
    }
}

/// Distinct letter sequences read along the left-infinite paths ending at non-trivial
/// states.
pub fn post_critical_set(n: &Nucleus) -> Result<BTreeSet<LeftInfSeq>> {
    let report = is_pcf(n);
    if !report.is_pcf {
        return Err(Error::NotPcf);
    }
    Ok(report.witnesses.into_iter().map(|w| w.sequence).collect())
}
