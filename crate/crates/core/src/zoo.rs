//! Built-in corpus of automata with recorded expected values.
//!
//! Each entry is a machine file `zoo/<name>.aut` with an expectations file
//! `zoo/<name>.expected` beside it. The expectations are produced by [`compute_expected`]
//! and rewritten with `pcfg zoo regen <dir>`.

use serde::{Deserialize, Serialize};

use crate::contraction::{compute_nucleus, NucleusCaps};
use crate::error::Result;
use crate::machine::MealyMachine;
use crate::structure::{is_bounded, is_pcf, post_critical_set};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub bounded: bool,
    /// Contracting within the default caps.
    pub contracting: bool,
    pub nucleus_size: Option<usize>,
    pub pcf: Option<bool>,
    pub post_critical_size: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    expected_text: &'static str,
}

impl CorpusEntry {
    pub fn machine(&self) -> MealyMachine {
        self.text.parse().expect("corpus machines parse")
    }

    pub fn expected(&self) -> Expected {
        toml::from_str(self.expected_text).expect("corpus expectations parse")
    }

    pub fn expected_text(&self) -> &'static str {
        self.expected_text
    }

    /// Generators used for the entry's group: every state that acts non-trivially, or the
    /// identity alone for the trivial group.
    pub fn generators(&self) -> Vec<String> {
        generators_of(&self.machine())
    }
}

pub fn generators_of(m: &MealyMachine) -> Vec<String> {
    let trivial = m.trivial_states();
    let gens: Vec<String> = (0..m.len())
        .filter(|&q| !trivial[q])
        .map(|q| m.name(q).to_string())
        .collect();
    if gens.is_empty() {
        vec![m.name(0).to_string()]
    } else {
        gens
    }
}

macro_rules! entry {
    ($name:literal) => {
        CorpusEntry {
            name: $name,
            text: include_str!(concat!("../zoo/", $name, ".aut")),
            expected_text: include_str!(concat!("../zoo/", $name, ".expected")),
        }
    };
}

pub fn zoo() -> Vec<CorpusEntry> {
    vec![
        entry!("identity"),
        entry!("adder"),
        entry!("grigorchuk"),
        entry!("gupta_sidki_3"),
        entry!("basilica"),
        entry!("lamplighter"),
        entry!("swap_finitary"),
    ]
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    zoo().into_iter().find(|e| e.name == name)
}

/// Runs the classification pipeline on `m` with default caps.
pub fn compute_expected(m: &MealyMachine) -> Result<Expected> {
    let (bounded, _) = is_bounded(m);
    let report = compute_nucleus(m, &generators_of(m), NucleusCaps::default())?;
    let nucleus = report.nucleus();
    let pcf = nucleus.map(is_pcf);
    let post_critical_size = match (nucleus, &pcf) {
        (Some(n), Some(r)) if r.is_pcf => Some(post_critical_set(n)?.len()),
        _ => None,
    };
    Ok(Expected {
        bounded,
        contracting: nucleus.is_some(),
        nucleus_size: nucleus.map(|n| n.len()),
        pcf: pcf.map(|r| r.is_pcf),
        post_critical_size,
    })
}

pub fn render_expected(e: &Expected) -> String {
    toml::to_string(e).expect("expectations serialize")
}
