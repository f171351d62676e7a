//! Invertible Mealy automata and their algebra.
//!
//! A state `q` reads a word letter by letter: on letter `x` it writes `q(x)` and moves to the
//! restriction `q|x`, so that `q(xv) = q(x) q|x(v)` and `q|xv = (q|x)|v`. Every output row
//! is a permutation of the alphabet, which makes each state an automorphism of the tree `X*`.

use std::collections::HashMap;
use std::fmt;

use crate::digraph::{Arrow, ArrowLabel, LabeledDigraph};
use crate::error::{Error, Result};
use crate::word::{Alphabet, GroupWord, Letter, Sign, StateWord};

pub type StateId = usize;

/// Upper bound on tuple states built by [`MealyMachine::product_state`].
pub const DEFAULT_PRODUCT_CAP: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub name: String,
    /// `output[x]` is the letter written on input `x`.
    pub output: Vec<Letter>,
    /// `transitions[x]` is the restriction on input `x`.
    pub transitions: Vec<StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    alphabet: Alphabet,
    states: Vec<State>,
    identity: Option<StateId>,
}

pub(crate) fn is_identity_perm(p: &[Letter]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

fn is_permutation(p: &[Letter], d: usize) -> bool {
    if p.len() != d {
        return false;
    }
    let mut seen = vec![false; d];
    for &x in p {
        if x >= d || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub(crate) fn inverse_name(name: &str) -> String {
    match name.strip_suffix("^-1") {
        Some(base) => base.to_string(),
        None => format!("{name}^-1"),
    }
}

impl MealyMachine {
    /// Validates the rows and marks the first state that has identity output and only self-loops.
    pub fn new(alphabet: Alphabet, states: Vec<State>) -> Result<Self> {
        let d = alphabet.size();
        if states.is_empty() {
            return Err(Error::Empty);
        }
        for s in &states {
            if !is_permutation(&s.output, d) {
                return Err(Error::Malformed(format!(
                    "output of `{}` is not a permutation",
                    s.name
                )));
            }
            if s.transitions.len() != d || s.transitions.iter().any(|&t| t >= states.len()) {
                return Err(Error::Malformed(format!(
                    "transitions of `{}` are not total",
                    s.name
                )));
            }
        }
        let identity = states.iter().enumerate().position(|(i, s)| {
            is_identity_perm(&s.output) && s.transitions.iter().all(|&t| t == i)
        });
        Ok(MealyMachine {
            alphabet,
            states,
            identity,
        })
    }

    /// The machine with one state `e` acting trivially.
    pub fn trivial(alphabet: Alphabet) -> Self {
        let d = alphabet.size();
        MealyMachine::new(
            alphabet,
            vec![State {
                name: "e".into(),
                output: (0..d).collect(),
                transitions: vec![0; d],
            }],
        )
        .expect("trivial machine is valid")
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.alphabet.size()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, q: StateId) -> &State {
        &self.states[q]
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.states[q].name
    }

    pub fn names(&self) -> Vec<String> {
        self.states.iter().map(|s| s.name.clone()).collect()
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn resolve(&self, name: &str) -> Result<StateId> {
        self.state_id(name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    /// State marked as acting trivially, if any.
    pub fn identity_state(&self) -> Option<StateId> {
        self.identity
    }

    #[inline]
    pub fn output(&self, q: StateId, x: Letter) -> Letter {
        self.states[q].output[x]
    }

    #[inline]
    pub fn next(&self, q: StateId, x: Letter) -> StateId {
        self.states[q].transitions[x]
    }

    /// True if the state acts trivially on the first level.
    pub fn is_inactive(&self, q: StateId) -> bool {
        is_identity_perm(&self.states[q].output)
    }

    pub fn act(&self, q: StateId, word: &[Letter]) -> StateWord {
        let mut out = Vec::with_capacity(word.len());
        let mut cur = q;
        for &x in word {
            out.push(self.output(cur, x));
            cur = self.next(cur, x);
        }
        StateWord(out)
    }

    pub fn restrict(&self, q: StateId, word: &[Letter]) -> StateId {
        word.iter().fold(q, |cur, &x| self.next(cur, x))
    }

    pub fn successors(&self) -> Vec<Vec<StateId>> {
        self.states.iter().map(|s| s.transitions.clone()).collect()
    }

    /// Machine of inverses; state `i` of the result is the inverse of state `i`.
    ///
    /// If `q` reads `x`, writes `y` and moves to `p`, then `q^-1` reads `y`, writes `x` and
    /// moves to `p^-1`.
    pub fn inverse(&self) -> (MealyMachine, Vec<StateId>) {
        let d = self.degree();
        let states = self
            .states
            .iter()
            .map(|s| {
                let mut output = vec![0; d];
                let mut transitions = vec![0; d];
                for x in 0..d {
                    let y = s.output[x];
                    output[y] = x;
                    transitions[y] = s.transitions[x];
                }
                State {
                    name: inverse_name(&s.name),
                    output,
                    transitions,
                }
            })
            .collect();
        let m = MealyMachine::new(self.alphabet, states).expect("inverse of a valid machine");
        (m, (0..self.len()).collect())
    }

    /// Disjoint union of `self` (ids `0..n`) and its inverse machine (ids `n..2n`).
    pub fn with_inverses(&self) -> MealyMachine {
        let n = self.len();
        let (inv, _) = self.inverse();
        let mut states = self.states.clone();
        states.extend(inv.states.into_iter().map(|mut s| {
            for t in &mut s.transitions {
                *t += n;
            }
            s
        }));
        MealyMachine::new(self.alphabet, states).expect("union of valid machines")
    }

    /// Machine containing a state that acts as the product of `word`.
    pub fn product_state(&self, word: &GroupWord) -> Result<(MealyMachine, StateId)> {
        self.product_state_capped(word, DEFAULT_PRODUCT_CAP)
    }

    /// As [`Self::product_state`], failing with [`Error::ResourceLimit`] past `cap` tuple states.
    ///
    /// Tuple states are built lazily from the word's tuple; only the reachable part is kept.
    /// The rightmost factor acts first, so `(q1, q2)|x = (q1|q2(x), q2|x)`.
    pub fn product_state_capped(
        &self,
        word: &GroupWord,
        cap: usize,
    ) -> Result<(MealyMachine, StateId)> {
        let n = self.len();
        let both = self.with_inverses();
        let start: Vec<StateId> = word
            .factors
            .iter()
            .map(|(name, sign)| {
                let q = self.resolve(name)?;
                Ok(match sign {
                    Sign::Plus => q,
                    Sign::Minus => q + n,
                })
            })
            .collect::<Result<_>>()?;
        let (m, root) = tuple_machine(&both, start, cap)?;
        Ok((m, root))
    }

    /// Moore-style partition refinement seeded by output rows. Returns the quotient machine
    /// and the class of every original state. Class representatives keep the name of their
    /// first member.
    pub fn minimize(&self) -> (MealyMachine, Vec<StateId>) {
        let d = self.degree();
        let mut class = first_occurrence_classes(self.states.iter().map(|s| s.output.clone()));
        let mut count = class.iter().max().map_or(0, |&c| c + 1);
        loop {
            let refined = first_occurrence_classes(self.states.iter().enumerate().map(|(q, s)| {
                let mut sig = Vec::with_capacity(d + 1);
                sig.push(class[q]);
                sig.extend(s.transitions.iter().map(|&t| class[t]));
                sig
            }));
            let refined_count = refined.iter().max().map_or(0, |&c| c + 1);
            class = refined;
            if refined_count == count {
                break;
            }
            count = refined_count;
        }
        let mut reps = vec![usize::MAX; count];
        for (q, &c) in class.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = q;
            }
        }
        let states = reps
            .iter()
            .map(|&q| {
                let s = &self.states[q];
                State {
                    name: s.name.clone(),
                    output: s.output.clone(),
                    transitions: s.transitions.iter().map(|&t| class[t]).collect(),
                }
            })
            .collect();
        let m = MealyMachine::new(self.alphabet, states).expect("quotient of a valid machine");
        (m, class)
    }

    /// Number of classes of the minimization equals the number of states.
    pub fn is_minimal(&self) -> bool {
        self.minimize().0.len() == self.len()
    }

    /// Class of the states acting trivially, computed extensionally.
    pub fn trivial_states(&self) -> Vec<bool> {
        let (min, class) = self.minimize();
        match min.identity_state() {
            Some(id) => class.iter().map(|&c| c == id).collect(),
            None => vec![false; self.len()],
        }
    }

    pub fn moore_diagram(&self) -> LabeledDigraph {
        let mut arrows = Vec::with_capacity(self.len() * self.degree());
        for (q, s) in self.states.iter().enumerate() {
            for x in 0..self.degree() {
                arrows.push(Arrow {
                    source: q,
                    target: s.transitions[x],
                    label: ArrowLabel::Letters {
                        input: x,
                        output: s.output[x],
                    },
                });
            }
        }
        LabeledDigraph {
            vertices: self.names(),
            arrows,
        }
    }

    /// Sub-automaton of the states reachable from `roots`; returns it with the map from old
    /// ids to new ones.
    pub fn submachine(&self, roots: &[StateId]) -> (MealyMachine, Vec<Option<StateId>>) {
        let reach = crate::digraph::forward_closure(&self.successors(), roots.iter().copied());
        self.restrict_to(&reach)
    }

    /// Keeps the states flagged in `keep`, which must be closed under restriction.
    pub(crate) fn restrict_to(&self, keep: &[bool]) -> (MealyMachine, Vec<Option<StateId>>) {
        let mut map = vec![None; self.len()];
        let mut next = 0;
        for q in 0..self.len() {
            if keep[q] {
                map[q] = Some(next);
                next += 1;
            }
        }
        let states = (0..self.len())
            .filter(|&q| keep[q])
            .map(|q| {
                let s = &self.states[q];
                State {
                    name: s.name.clone(),
                    output: s.output.clone(),
                    transitions: s
                        .transitions
                        .iter()
                        .map(|&t| map[t].expect("kept set is closed under restriction"))
                        .collect(),
                }
            })
            .collect();
        let m = MealyMachine::new(self.alphabet, states).expect("closed sub-automaton");
        (m, map)
    }

    /// Breadth-first encoding of the part reachable from `q`. On minimized machines two
    /// states act identically exactly when their codes agree, across machines.
    pub(crate) fn canonical_code(&self, q: StateId) -> Vec<u32> {
        let d = self.degree();
        let mut index = vec![u32::MAX; self.len()];
        let mut order = vec![q];
        index[q] = 0;
        let mut code = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let s = &self.states[order[i]];
            code.extend(s.output.iter().map(|&y| y as u32));
            for x in 0..d {
                let t = s.transitions[x];
                if index[t] == u32::MAX {
                    index[t] = order.len() as u32;
                    order.push(t);
                }
                code.push(index[t]);
            }
            i += 1;
        }
        code
    }

    /// Renders the machine in the line-based text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet {}\n", self.degree());
        for s in &self.states {
            let outputs: Vec<String> = s.output.iter().map(|y| y.to_string()).collect();
            let targets: Vec<&str> = s.transitions.iter().map(|&t| self.name(t)).collect();
            out.push_str(&format!(
                "state {} = ({}) [{}]\n",
                s.name,
                outputs.join(" "),
                targets.join(", ")
            ));
        }
        out
    }
}

impl fmt::Display for MealyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Numbers the distinct keys in order of first occurrence.
fn first_occurrence_classes<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    keys.map(|k| {
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    })
    .collect()
}

fn tuple_name(m: &MealyMachine, tuple: &[StateId]) -> String {
    if tuple.is_empty() {
        return "e".into();
    }
    tuple
        .iter()
        .map(|&q| m.name(q))
        .collect::<Vec<_>>()
        .join("*")
}

/// Reachable part of the product automaton on tuples of `m`-states, starting at `start`.
pub(crate) fn tuple_machine(
    m: &MealyMachine,
    start: Vec<StateId>,
    cap: usize,
) -> Result<(MealyMachine, StateId)> {
    let d = m.degree();
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut tuples = vec![start.clone()];
    index.insert(start, 0);
    let mut states = Vec::new();
    let mut i = 0;
    while i < tuples.len() {
        let tuple = tuples[i].clone();
        let mut output = vec![0; d];
        let mut transitions = vec![0; d];
        for x in 0..d {
            let mut next = tuple.clone();
            let mut y = x;
            for (slot, &q) in next.iter_mut().zip(tuple.iter()).rev() {
                *slot = m.next(q, y);
                y = m.output(q, y);
            }
            output[x] = y;
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = tuples.len();
                    if id >= cap {
                        return Err(Error::ResourceLimit(format!(
                            "product automaton exceeds {cap} states"
                        )));
                    }
                    index.insert(next.clone(), id);
                    tuples.push(next);
                    id
                }
            };
            transitions[x] = id;
        }
        states.push(State {
            name: tuple_name(m, &tuple),
            output,
            transitions,
        });
        i += 1;
    }
    Ok((MealyMachine::new(m.alphabet(), states)?, 0))
}
