//! Nucleus computation, the contraction decision and the open set condition.
//!
//! The nucleus of a self-similar group is the smallest set of elements that absorbs every
//! sufficiently deep restriction of every group element. For a finite automaton the
//! elements `⋂ₙ {q|v : |v| ≥ n}` are exactly the states reachable from a cycle of the
//! transition graph ([`limit_states`]). For the group generated by an automaton the nucleus
//! is found by closing the limit states of the generators under products of pairs and
//! collecting the limit states of every product, until nothing new appears.
//!
//! Contraction is only semi-decidable, so the closure runs under explicit caps and hitting
//! one is reported as [`ContractionOutcome::InconclusiveAtCap`].

pub(crate) mod pool;
mod word_problem;

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::digraph;
use crate::error::{Error, Result};
use crate::machine::{MealyMachine, StateId};

use pool::{ElementId, ElementPool, IDENTITY};

pub use word_problem::{is_identity, WordProblem};

/// States of `m` reachable from a cycle of its transition graph.
pub fn limit_states(m: &MealyMachine) -> Vec<StateId> {
    let limit = digraph::limit_vertices(&m.successors());
    (0..m.len()).filter(|&q| limit[q]).collect()
}

/// True if every state of `m` has a restriction acting trivially.
pub fn reaches_identity(m: &MealyMachine) -> bool {
    let trivial = m.trivial_states();
    digraph::backward_closure(&m.successors(), &trivial)
        .iter()
        .all(|&b| b)
}

/// For every `g` in the nucleus there is a word `v` with `g|v = 1`. Elements outside the
/// nucleus inherit this since their deep restrictions fall into it.
pub fn open_set_condition(n: &Nucleus) -> bool {
    let mut target = vec![false; n.len()];
    target[n.identity()] = true;
    digraph::backward_closure(&n.machine().successors(), &target)
        .iter()
        .all(|&b| b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NucleusCaps {
    pub max_iterations: usize,
    pub max_states: usize,
}

impl Default for NucleusCaps {
    fn default() -> Self {
        NucleusCaps {
            max_iterations: 32,
            max_states: 4096,
        }
    }
}

/// Minimal automaton on the nucleus, closed under restriction and inversion, with every
/// state a limit state.
#[derive(Debug, Clone)]
pub struct Nucleus {
    machine: MealyMachine,
    identity: StateId,
    origin: Vec<String>,
    inverses: Vec<StateId>,
    /// `products[p][q]` is `p * q` when that product lies in the nucleus.
    products: Vec<Vec<Option<StateId>>>,
}

impl Nucleus {
    /// Checks the nucleus invariants on `m` (after minimization) and tabulates inverses and
    /// products.
    pub fn from_machine(m: &MealyMachine, origin: Vec<String>) -> Result<Nucleus> {
        let (machine, _) = m.minimize();
        let identity = machine
            .identity_state()
            .ok_or_else(|| Error::InvalidNucleus("no identity state".into()))?;
        if let Some(q) = (0..machine.len()).find(|&q| !limit_states(&machine).contains(&q)) {
            return Err(Error::InvalidNucleus(format!(
                "state `{}` is not a limit state",
                machine.name(q)
            )));
        }

        let n = machine.len();
        let mut pool = ElementPool::new(machine.alphabet());
        let ids = pool.intern(&machine);
        let pos: HashMap<ElementId, StateId> = ids.iter().enumerate().map(|(q, &g)| (g, q)).collect();

        let mut inverses = Vec::with_capacity(n);
        for (q, &g) in ids.iter().enumerate() {
            let inv = pool.inverse(g);
            match pos.get(&inv) {
                Some(&p) => inverses.push(p),
                None => {
                    return Err(Error::InvalidNucleus(format!(
                        "inverse of `{}` is missing",
                        machine.name(q)
                    )))
                }
            }
        }

        let cap = n * n + 1;
        let mut products = vec![vec![None; n]; n];
        for p in 0..n {
            for q in 0..n {
                let g = pool.product(ids[p], ids[q], cap)?;
                products[p][q] = pos.get(&g).copied();
            }
        }

        Ok(Nucleus {
            machine,
            identity,
            origin,
            inverses,
            products,
        })
    }

    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }

    pub fn identity(&self) -> StateId {
        self.identity
    }

    pub fn origin(&self) -> &[String] {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.machine.len()
    }

    pub fn is_empty(&self) -> bool {
        self.machine.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.machine.names()
    }

    pub fn name(&self, q: StateId) -> &str {
        self.machine.name(q)
    }

    pub fn inverse(&self, q: StateId) -> StateId {
        self.inverses[q]
    }

    pub fn product(&self, p: StateId, q: StateId) -> Option<StateId> {
        self.products[p][q]
    }

    pub fn nontrivial_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.len()).filter(move |&q| q != self.identity)
    }

    /// For every state of `m`, the nucleus state acting the same way, if there is one.
    pub fn locate_states(&self, m: &MealyMachine) -> Vec<Option<StateId>> {
        let mut pool = ElementPool::new(self.machine.alphabet());
        let ids = pool.intern(&self.machine);
        let pos: HashMap<ElementId, StateId> = ids.iter().enumerate().map(|(q, &g)| (g, q)).collect();
        pool.intern(m).into_iter().map(|g| pos.get(&g).copied()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapKind {
    Iterations,
    States,
}

#[derive(Debug, Clone)]
pub enum ContractionOutcome {
    Contracting(Nucleus),
    InconclusiveAtCap { caps: NucleusCaps, exhausted: CapKind },
}

#[derive(Debug, Clone)]
pub struct ContractionReport {
    pub outcome: ContractionOutcome,
    /// Completed closure rounds.
    pub iterations: usize,
    pub peak_candidates: usize,
    /// Candidate-set size before the first round and after every round; when a cap stops a
    /// round, the size reached at that point closes the list.
    pub candidate_history: Vec<usize>,
}

#[derive(Serialize)]
struct ReportFields<'a> {
    outcome: &'static str,
    nucleus_size: Option<usize>,
    iterations: usize,
    peak_candidates: usize,
    candidate_history: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    states: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exhausted: Option<CapKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    caps: Option<NucleusCaps>,
}

impl ContractionReport {
    pub fn nucleus(&self) -> Option<&Nucleus> {
        match &self.outcome {
            ContractionOutcome::Contracting(n) => Some(n),
            ContractionOutcome::InconclusiveAtCap { .. } => None,
        }
    }

    pub fn into_nucleus(self) -> Option<Nucleus> {
        match self.outcome {
            ContractionOutcome::Contracting(n) => Some(n),
            ContractionOutcome::InconclusiveAtCap { .. } => None,
        }
    }

    pub fn is_contracting(&self) -> bool {
        self.nucleus().is_some()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (outcome, states, exhausted, caps) = match &self.outcome {
            ContractionOutcome::Contracting(n) => ("contracting", Some(n.names()), None, None),
            ContractionOutcome::InconclusiveAtCap { caps, exhausted } => {
                ("inconclusive_at_cap", None, Some(*exhausted), Some(*caps))
            }
        };
        serde_json::to_value(ReportFields {
            outcome,
            nucleus_size: self.nucleus().map(Nucleus::len),
            iterations: self.iterations,
            peak_candidates: self.peak_candidates,
            candidate_history: &self.candidate_history,
            states,
            exhausted,
            caps,
        })
        .expect("report serializes")
    }
}

struct Closure {
    pool: ElementPool,
    members: Vec<ElementId>,
    seen: HashSet<ElementId>,
}

impl Closure {
    fn add_all(&mut self, elements: impl IntoIterator<Item = ElementId>) {
        for g in elements {
            if self.seen.insert(g) {
                self.members.push(g);
            }
        }
    }
}

/// Closes the limit states of the generators (and their inverses) under pairwise products.
///
/// Each round multiplies every pair of candidates with at least one member new in the
/// previous round and adds the limit states of each product.
pub fn compute_nucleus<S: AsRef<str>>(
    m: &MealyMachine,
    generators: &[S],
    caps: NucleusCaps,
) -> Result<ContractionReport> {
    if caps.max_iterations == 0 || caps.max_states == 0 {
        return Err(Error::InvalidArgument("caps must be positive".into()));
    }
    if generators.is_empty() {
        return Err(Error::InvalidArgument("no generators".into()));
    }
    let gens = generators
        .iter()
        .map(|g| m.resolve(g.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let origin: Vec<String> = generators.iter().map(|g| g.as_ref().to_string()).collect();

    let (sub, _) = m.submachine(&gens);
    let mut pool = ElementPool::new(m.alphabet());
    let roots = pool.intern(&sub.with_inverses());
    let initial = pool.limit_states_from(&roots);
    let mut closure = Closure {
        pool,
        members: Vec::new(),
        seen: HashSet::new(),
    };
    closure.add_all([IDENTITY]);
    closure.add_all(initial);

    let mut history = vec![closure.members.len()];
    let mut iterations = 0;
    let mut frontier = 0;

    let inconclusive = |exhausted, iterations, history: Vec<usize>| ContractionReport {
        outcome: ContractionOutcome::InconclusiveAtCap { caps, exhausted },
        iterations,
        peak_candidates: history.iter().copied().max().unwrap_or(0),
        candidate_history: history,
    };

    loop {
        if closure.members.len() > caps.max_states {
            return Ok(inconclusive(CapKind::States, iterations, history));
        }
        if iterations == caps.max_iterations {
            return Ok(inconclusive(CapKind::Iterations, iterations, history));
        }
        let old = closure.members.len();
        for i in 0..old {
            for j in 0..old {
                if i < frontier && j < frontier {
                    continue;
                }
                let (g, h) = (closure.members[i], closure.members[j]);
                let p = match closure.pool.product(g, h, caps.max_states) {
                    Ok(p) => p,
                    Err(Error::ResourceLimit(_)) => {
                        history.push(closure.members.len());
                        return Ok(inconclusive(CapKind::States, iterations, history));
                    }
                    Err(e) => return Err(e),
                };
                let limit = closure.pool.limit_states_from(&[p]);
                closure.add_all(limit);
                if closure.members.len() > caps.max_states {
                    history.push(closure.members.len());
                    return Ok(inconclusive(CapKind::States, iterations, history));
                }
            }
        }
        iterations += 1;
        history.push(closure.members.len());
        log::debug!("nucleus round {iterations}: {} candidates", closure.members.len());
        if closure.members.len() == old {
            break;
        }
        frontier = old;
    }

    let mut keep = vec![false; closure.pool.len()];
    for &g in &closure.members {
        keep[g] = true;
    }
    let (machine, _) = closure.pool.machine_on(&keep);
    let limit = digraph::limit_vertices(&machine.successors());
    let (machine, _) = machine.restrict_to(&limit);
    let nucleus = Nucleus::from_machine(&machine, origin)?;
    Ok(ContractionReport {
        outcome: ContractionOutcome::Contracting(nucleus),
        iterations,
        peak_candidates: history.iter().copied().max().unwrap_or(0),
        candidate_history: history,
    })
}

/// Nucleus of the group generated by all states of `m`.
pub fn nucleus_of_machine(m: &MealyMachine, caps: NucleusCaps) -> Result<ContractionReport> {
    let names = m.names();
    compute_nucleus(m, &names, caps)
}
