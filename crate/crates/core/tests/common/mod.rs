//! Brute-force oracles shared by the integration tests. None of them goes through the
//! library's products, minimization or graph code; they only use single-state actions.
#![allow(dead_code)]

use std::collections::BTreeSet;

use pcfgroups::contraction::NucleusCaps;
use pcfgroups::zoo;
use pcfgroups::{compute_nucleus, GroupWord, Letter, MealyMachine, Nucleus, Sign, StateId};
use rand::Rng;

pub fn machine(name: &str) -> MealyMachine {
    zoo::entry(name).expect("corpus entry").machine()
}

pub fn nucleus(name: &str) -> Nucleus {
    let m = machine(name);
    compute_nucleus(&m, &zoo::generators_of(&m), NucleusCaps::default())
        .unwrap()
        .into_nucleus()
        .expect("contracting entry")
}

/// Corpus entries recorded as post-critically finite.
pub fn pcf_entries() -> Vec<&'static str> {
    zoo::zoo()
        .into_iter()
        .filter(|e| e.expected().pcf == Some(true))
        .map(|e| e.name)
        .collect()
}

/// Preimage of `w` under state `q`, solved letter by letter.
pub fn act_inverse(m: &MealyMachine, q: StateId, w: &[Letter]) -> Vec<Letter> {
    let mut cur = q;
    w.iter()
        .map(|&y| {
            let x = (0..m.degree()).find(|&x| m.output(cur, x) == y).unwrap();
            cur = m.next(cur, x);
            x
        })
        .collect()
}

/// Image of `v` under a group word, applying the rightmost factor first.
pub fn act_word(m: &MealyMachine, word: &GroupWord, v: &[Letter]) -> Vec<Letter> {
    let mut cur = v.to_vec();
    for (name, sign) in word.factors.iter().rev() {
        let q = m.resolve(name).unwrap();
        cur = match sign {
            Sign::Plus => m.act(q, &cur).0,
            Sign::Minus => act_inverse(m, q, &cur),
        };
    }
    cur
}

/// All words of length `n` in lexicographic order.
pub fn words(d: usize, n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..d).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// The word fixes every vertex of level `level`, hence every vertex above it.
pub fn fixes_level(m: &MealyMachine, word: &GroupWord, level: usize) -> bool {
    words(m.degree(), level)
        .iter()
        .all(|v| act_word(m, word, v) == *v)
}

/// Backward walks of exactly `len` arrows in the Moore diagram of the nucleus that end at a
/// non-trivial state: `(letters read, in reading order, end state)`. Every nucleus state
/// starts a left-infinite path, so for large `len` these are in bijection with the
/// left-infinite paths ending at non-trivial states whenever those are finite in number.
pub fn backward_walks(n: &Nucleus, len: usize) -> Vec<(Vec<Letter>, StateId)> {
    let m = n.machine();
    let mut out = Vec::new();
    for g in 0..m.len() {
        if g == n.identity() {
            continue;
        }
        let mut frontier = vec![(Vec::new(), g)];
        for _ in 0..len {
            let mut next = Vec::new();
            for (letters, v) in frontier {
                for h in 0..m.len() {
                    for x in 0..m.degree() {
                        if m.next(h, x) == v {
                            let mut l: Vec<Letter> = vec![x];
                            l.extend(&letters);
                            next.push((l, h));
                        }
                    }
                }
            }
            frontier = next;
        }
        out.extend(frontier.into_iter().map(|(l, _)| (l, g)));
    }
    out
}

pub struct WalkCounts {
    pub paths: usize,
    pub sequences: usize,
    /// The counts agreed for two consecutive walk lengths.
    pub stable: bool,
}

pub fn walk_counts(n: &Nucleus) -> WalkCounts {
    let len = 2 * n.len() + 2;
    let walks = backward_walks(n, len);
    let longer = backward_walks(n, len + 1);
    let distinct = |w: &[(Vec<Letter>, StateId)]| w.iter().map(|(l, _)| l.clone()).collect::<BTreeSet<_>>().len();
    WalkCounts {
        paths: walks.len(),
        sequences: distinct(&walks),
        stable: walks.len() == longer.len() && distinct(&walks) == distinct(&longer),
    }
}

/// Every nucleus state has some restriction of length at most `|N|` that is trivial,
/// checked by scanning the words.
pub fn open_set_by_scan(n: &Nucleus) -> bool {
    let m = n.machine();
    (0..m.len()).all(|g| {
        (0..=n.len()).any(|k| {
            words(m.degree(), k)
                .iter()
                .any(|v| m.restrict(g, v) == n.identity())
        })
    })
}

pub fn random_word(rng: &mut impl Rng, gens: &[String], max_len: usize, inverses: bool) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    let factors = (0..len)
        .map(|_| {
            let g = gens[rng.gen_range(0..gens.len())].clone();
            let sign = if inverses && rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus };
            (g, sign)
        })
        .collect();
    GroupWord { factors }
}

/// Binary value of a word read with the first letter least significant.
pub fn odometer_value(w: &[Letter]) -> usize {
    w.iter().rev().fold(0, |acc, &x| 2 * acc + x)
}
