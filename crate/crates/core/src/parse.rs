//! Reader for the line-based machine format:
//!
//! ```text
//! alphabet 2
//! # comment
//! state e = (0 1) [e, e]
//! state a = (1 0) [e, a]
//! ```

use std::collections::HashMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::machine::{MealyMachine, State};
use crate::word::{is_identifier, Alphabet};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn token(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let start = self.pos;
        let t = self.token();
        if t == kw {
            Ok(())
        } else {
            self.pos = start;
            self.skip_ws();
            Err(self.error(format!("expected `{kw}`")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let col = self.column();
        let t = self.token();
        t.parse().map_err(|_| Error::Syntax {
            line: self.line,
            column: col,
            message: format!("expected a number, found `{t}`"),
        })
    }

    fn name(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let col = self.column();
        let t = self.token();
        if is_identifier(t) {
            Ok(t)
        } else {
            Err(Error::Syntax {
                line: self.line,
                column: col,
                message: "expected a state name".into(),
            })
        }
    }
}

struct RawState<'a> {
    line: usize,
    name: &'a str,
    output: Vec<usize>,
    targets: Vec<&'a str>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_state<'a>(cur: &mut Cursor<'a>) -> Result<RawState<'a>> {
    cur.keyword("state")?;
    let name = cur.name()?;
    cur.expect('=')?;
    cur.expect('(')?;
    let mut output = Vec::new();
    while cur.peek() != Some(')') {
        if cur.at_end() {
            return Err(cur.error("unterminated output row"));
        }
        output.push(cur.number()?);
    }
    cur.expect(')')?;
    cur.expect('[')?;
    let mut targets = Vec::new();
    loop {
        targets.push(cur.name()?);
        match cur.peek() {
            Some(',') => cur.expect(',')?,
            Some(']') => break,
            _ => return Err(cur.error("expected `,` or `]`")),
        }
    }
    cur.expect(']')?;
    if !cur.at_end() {
        return Err(cur.error("trailing characters"));
    }
    Ok(RawState {
        line: cur.line,
        name,
        output,
        targets,
    })
}

impl FromStr for MealyMachine {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let mut cur = Cursor {
                text: strip_comment(line),
                pos: 0,
                line: i + 1,
            };
            if cur.at_end() {
                continue;
            }
            match alphabet {
                None => {
                    cur.keyword("alphabet")?;
                    let d = cur.number()?;
                    if !cur.at_end() {
                        return Err(cur.error("trailing characters"));
                    }
                    alphabet = Some(Alphabet::new(d)?);
                }
                Some(_) => raw.push(parse_state(&mut cur)?),
            }
        }
        let alphabet = alphabet.ok_or(Error::Syntax {
            line: 1,
            column: 1,
            message: "missing `alphabet` line".into(),
        })?;
        let d = alphabet.size();

        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, r) in raw.iter().enumerate() {
            if index.insert(r.name, i).is_some() {
                return Err(Error::DuplicateState(r.name.to_string()));
            }
        }
        let mut states = Vec::with_capacity(raw.len());
        for r in &raw {
            let mut seen = vec![false; d];
            let bijective = r.output.len() == d
                && r.output.iter().all(|&y| y < d && !std::mem::replace(&mut seen[y], true));
            if !bijective {
                return Err(Error::NonPermutation {
                    line: r.line,
                    state: r.name.to_string(),
                    degree: d,
                });
            }
            if r.targets.len() != d {
                return Err(Error::Syntax {
                    line: r.line,
                    column: 1,
                    message: format!("expected {d} restrictions, found {}", r.targets.len()),
                });
            }
            let transitions = r
                .targets
                .iter()
                .map(|t| {
                    index.get(t).copied().ok_or_else(|| Error::UnresolvedState {
                        line: r.line,
                        name: t.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            states.push(State {
                name: r.name.to_string(),
                output: r.output.clone(),
                transitions,
            });
        }
        let m = MealyMachine::new(alphabet, states)?;
        if let Some(e) = m.state_id("e") {
            if !m.trivial_states()[e] {
                return Err(Error::ReservedIdentity);
            }
        }
        Ok(m)
    }
}
