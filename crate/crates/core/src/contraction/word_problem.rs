use std::collections::HashMap;

use crate::contraction::pool::{ElementId, ElementPool, IDENTITY};
use crate::contraction::Nucleus;
use crate::error::Result;
use crate::machine::MealyMachine;
use crate::word::{GroupWord, Sign};

/// Decides whether `word` acts trivially on the whole tree.
///
/// Without a nucleus the product automaton is built and minimized, which is exponential in
/// the word length in the worst case. With a nucleus the word is restricted level by level,
/// merging adjacent factors whose product lies in the nucleus, so lengths shrink and the
/// number of distinct words visited stays polynomial.
pub fn is_identity(m: &MealyMachine, word: &GroupWord, nucleus: Option<&Nucleus>) -> Result<bool> {
    match nucleus {
        Some(n) => WordProblem::new(m, n).is_identity(word),
        None => {
            let (p, root) = m.product_state(word)?;
            let (min, class) = p.minimize();
            Ok(min.identity_state() == Some(class[root]))
        }
    }
}

#[derive(Clone, Copy)]
enum Visit {
    InProgress,
    Done(bool),
}

/// Nucleus-driven word problem solver for one machine. Tables are shared between calls;
/// the memo is per call.
pub struct WordProblem {
    pool: ElementPool,
    generators: HashMap<String, (ElementId, ElementId)>,
    merges: HashMap<(ElementId, ElementId), ElementId>,
    memo: HashMap<Vec<ElementId>, Visit>,
}

impl WordProblem {
    pub fn new(m: &MealyMachine, nucleus: &Nucleus) -> Self {
        let mut pool = ElementPool::new(m.alphabet());
        let nids = pool.intern(nucleus.machine());
        let mids = pool.intern(&m.with_inverses());
        let n = m.len();
        let generators = (0..n)
            .map(|q| (m.name(q).to_string(), (mids[q], mids[q + n])))
            .collect();
        let mut merges = HashMap::new();
        for p in 0..nucleus.len() {
            for q in 0..nucleus.len() {
                if let Some(r) = nucleus.product(p, q) {
                    merges.insert((nids[p], nids[q]), nids[r]);
                }
            }
        }
        WordProblem {
            pool,
            generators,
            merges,
            memo: HashMap::new(),
        }
    }

    pub fn is_identity(&mut self, word: &GroupWord) -> Result<bool> {
        let letters = word
            .factors
            .iter()
            .map(|(name, sign)| {
                let (plus, minus) = *self
                    .generators
                    .get(name)
                    .ok_or_else(|| crate::error::Error::UnknownState(name.clone()))?;
                Ok(match sign {
                    Sign::Plus => plus,
                    Sign::Minus => minus,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.memo.clear();
        let answer = self.trivial(letters);
        self.memo.clear();
        Ok(answer)
    }

    /// Drops identities and merges adjacent factors whose product is a nucleus element.
    fn rewrite(&self, word: Vec<ElementId>) -> Vec<ElementId> {
        let mut out: Vec<ElementId> = Vec::with_capacity(word.len());
        for g in word {
            let mut g = g;
            loop {
                if g == IDENTITY {
                    break;
                }
                match out.last().and_then(|&last| self.merges.get(&(last, g))) {
                    Some(&merged) => {
                        out.pop();
                        g = merged;
                    }
                    None => {
                        out.push(g);
                        break;
                    }
                }
            }
        }
        out
    }

    // Words revisited while still open are assumed trivial: the word is the identity exactly
    // when no reachable restriction word moves a first-level letter, and any such witness
    // short-circuits the whole call to `false`.
    fn trivial(&mut self, word: Vec<ElementId>) -> bool {
        let word = self.rewrite(word);
        match word.len() {
            0 => return true,
            1 => return word[0] == IDENTITY,
            _ => {}
        }
        match self.memo.get(&word) {
            Some(Visit::Done(b)) => return *b,
            Some(Visit::InProgress) => return true,
            None => {}
        }
        self.memo.insert(word.clone(), Visit::InProgress);

        let d = self.pool.degree();
        let mut children = Vec::with_capacity(d);
        for x in 0..d {
            let mut y = x;
            let mut child = vec![IDENTITY; word.len()];
            for i in (0..word.len()).rev() {
                child[i] = self.pool.restriction(word[i], y);
                y = self.pool.output(word[i], y);
            }
            if y != x {
                self.memo.insert(word, Visit::Done(false));
                return false;
            }
            children.push(child);
        }
        for child in children {
            if !self.trivial(child) {
                self.memo.insert(word, Visit::Done(false));
                return false;
            }
        }
        self.memo.insert(word, Visit::Done(true));
        true
    }
}
