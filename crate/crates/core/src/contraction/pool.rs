use std::collections::{HashMap, HashSet};

use crate::digraph;
use crate::error::{Error, Result};
use crate::machine::{MealyMachine, State, StateId};
use crate::word::{Alphabet, Letter};

pub(crate) type ElementId = usize;

/// Interning table of automaton group elements.
///
/// The pool is itself a minimal automaton closed under restriction: every element is stored
/// once, keyed by the canonical code of its minimal automaton, and its restrictions are
/// elements of the pool. Element 0 is the identity.
pub(crate) struct ElementPool {
    alphabet: Alphabet,
    output: Vec<Vec<Letter>>,
    next: Vec<Vec<ElementId>>,
    names: Vec<String>,
    index: HashMap<Vec<u32>, ElementId>,
    products: HashMap<(ElementId, ElementId), ElementId>,
}

pub(crate) const IDENTITY: ElementId = 0;

impl ElementPool {
    pub fn new(alphabet: Alphabet) -> Self {
        let mut pool = ElementPool {
            alphabet,
            output: Vec::new(),
            next: Vec::new(),
            names: Vec::new(),
            index: HashMap::new(),
            products: HashMap::new(),
        };
        let ids = pool.intern(&MealyMachine::trivial(alphabet));
        debug_assert_eq!(ids[0], IDENTITY);
        pool
    }

    pub fn len(&self) -> usize {
        self.output.len()
    }

    pub fn degree(&self) -> usize {
        self.alphabet.size()
    }

    #[cfg(test)]
    pub fn name(&self, g: ElementId) -> &str {
        &self.names[g]
    }

    pub fn output(&self, g: ElementId, x: Letter) -> Letter {
        self.output[g][x]
    }

    pub fn restriction(&self, g: ElementId, x: Letter) -> ElementId {
        self.next[g][x]
    }

    /// Adds every state of `m` and returns the element of each.
    pub fn intern(&mut self, m: &MealyMachine) -> Vec<ElementId> {
        assert_eq!(m.alphabet(), self.alphabet, "alphabet mismatch");
        let (min, class) = m.minimize();
        let trivial = min.identity_state();
        let known = self.output.len();
        let mut ids: Vec<ElementId> = vec![usize::MAX; min.len()];
        let mut fresh = Vec::new();
        for q in 0..min.len() {
            if ids[q] != usize::MAX {
                continue;
            }
            let code = min.canonical_code(q);
            match self.index.get(&code) {
                Some(&id) => {
                    // everything below a known element is known: walk both in step
                    let mut todo = vec![(q, id)];
                    ids[q] = id;
                    while let Some((s, g)) = todo.pop() {
                        debug_assert!(g < known);
                        for x in 0..self.degree() {
                            let (t, h) = (min.next(s, x), self.next[g][x]);
                            if ids[t] == usize::MAX {
                                ids[t] = h;
                                todo.push((t, h));
                            }
                        }
                    }
                }
                None => {
                    let id = known + fresh.len();
                    self.index.insert(code, id);
                    ids[q] = id;
                    fresh.push(q);
                }
            }
        }
        for q in fresh {
            let s = min.state(q);
            self.output.push(s.output.clone());
            self.next.push(s.transitions.iter().map(|&t| ids[t]).collect());
            self.names.push(if Some(q) == trivial {
                "e".to_string()
            } else {
                s.name.clone()
            });
        }
        class.into_iter().map(|c| ids[c]).collect()
    }

    fn product_name(&self, g: ElementId, h: ElementId) -> String {
        match (g, h) {
            (IDENTITY, _) => self.names[h].clone(),
            (_, IDENTITY) => self.names[g].clone(),
            _ => format!("{}*{}", self.names[g], self.names[h]),
        }
    }

    /// The element `g * h` (apply `h` first). Fails when the product automaton passes `cap`.
    pub fn product(&mut self, g: ElementId, h: ElementId, cap: usize) -> Result<ElementId> {
        if let Some(&p) = self.products.get(&(g, h)) {
            return Ok(p);
        }
        let p = match (g, h) {
            (IDENTITY, _) => h,
            (_, IDENTITY) => g,
            _ => {
                let (m, root) = self.pair_machine(g, h, cap)?;
                self.intern(&m)[root]
            }
        };
        self.products.insert((g, h), p);
        Ok(p)
    }

    #[cfg(test)]
    /// Product of a whole word of elements, leftmost applied last.
    pub fn product_of(&mut self, word: &[ElementId], cap: usize) -> Result<ElementId> {
        let mut acc = IDENTITY;
        for &g in word {
            acc = self.product(acc, g, cap)?;
        }
        Ok(acc)
    }

    pub fn inverse(&mut self, g: ElementId) -> ElementId {
        let (sub, map) = self.machine_from(&[g]);
        let (inv, _) = sub.inverse();
        let root = map[g].expect("root is kept");
        self.intern(&inv)[root]
    }

    /// Reachable part of the automaton on pairs `(p, q)` of elements, rooted at `(g, h)`.
    fn pair_machine(&self, g: ElementId, h: ElementId, cap: usize) -> Result<(MealyMachine, StateId)> {
        let d = self.degree();
        let mut index: HashMap<(ElementId, ElementId), StateId> = HashMap::new();
        let mut pairs = vec![(g, h)];
        index.insert((g, h), 0);
        let mut states = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut output = vec![0; d];
            let mut transitions = vec![0; d];
            for x in 0..d {
                let y = self.output[q][x];
                output[x] = self.output[p][y];
                let pair = (self.next[p][y], self.next[q][x]);
                let id = match index.get(&pair) {
                    Some(&id) => id,
                    None => {
                        let id = pairs.len();
                        if id >= cap {
                            return Err(Error::ResourceLimit(format!(
                                "product automaton exceeds {cap} states"
                            )));
                        }
                        index.insert(pair, id);
                        pairs.push(pair);
                        id
                    }
                };
                transitions[x] = id;
            }
            states.push(State {
                name: self.product_name(p, q),
                output,
                transitions,
            });
            i += 1;
        }
        Ok((MealyMachine::new(self.alphabet, states)?, 0))
    }

    /// Elements reachable from `roots`.
    pub fn reachable(&self, roots: &[ElementId]) -> Vec<ElementId> {
        let mut seen: HashSet<ElementId> = roots.iter().copied().collect();
        let mut todo: Vec<ElementId> = seen.iter().copied().collect();
        while let Some(g) = todo.pop() {
            for &t in &self.next[g] {
                if seen.insert(t) {
                    todo.push(t);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Limit states of the sub-automaton generated by `roots`.
    pub fn limit_states_from(&self, roots: &[ElementId]) -> Vec<ElementId> {
        let reach = self.reachable(roots);
        let pos: HashMap<ElementId, usize> =
            reach.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let succ: Vec<Vec<usize>> = reach
            .iter()
            .map(|&g| self.next[g].iter().map(|t| pos[t]).collect())
            .collect();
        let limit = digraph::limit_vertices(&succ);
        reach
            .iter()
            .enumerate()
            .filter(|&(i, _)| limit[i])
            .map(|(_, &g)| g)
            .collect()
    }

    /// Machine on the closure of `roots`, with the map from element ids to its states.
    pub fn machine_from(&self, roots: &[ElementId]) -> (MealyMachine, Vec<Option<StateId>>) {
        let reach = self.reachable(roots);
        let mut keep = vec![false; self.len()];
        for g in reach {
            keep[g] = true;
        }
        self.machine_on(&keep)
    }

    /// Machine on a restriction-closed set of elements, in id order.
    pub fn machine_on(&self, keep: &[bool]) -> (MealyMachine, Vec<Option<StateId>>) {
        let mut map = vec![None; self.len()];
        let mut states = Vec::new();
        for g in 0..self.len() {
            if keep[g] {
                map[g] = Some(states.len());
                states.push(g);
            }
        }
        let states = states
            .iter()
            .map(|&g| State {
                name: self.names[g].clone(),
                output: self.output[g].clone(),
                transitions: self.next[g]
                    .iter()
                    .map(|&t| map[t].expect("element set is closed under restriction"))
                    .collect(),
            })
            .collect();
        let m = MealyMachine::new(self.alphabet, states).expect("closed element set");
        (m, map)
    }
}
