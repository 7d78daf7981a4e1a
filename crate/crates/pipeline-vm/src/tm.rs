use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TmError {
    #[error("machine literal: {0}")]
    BadToken(String),
    #[error("descriptor: {0}")]
    BadDescriptor(String),
    #[error("input symbol {0:?} is not in the tape alphabet")]
    BadInputSymbol(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TmMove {
    L,
    R,
}

/// One transition in compiled (index) form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TmRule {
    pub write: u8,
    pub dir: TmMove,
    pub next: usize,
}

/// A Turing machine in its compact single-token encoding, as embedded in
/// program text: `<states>.<symbols>.<rule>.<rule>...` with one rule per
/// (state, symbol) pair in state-major order. A rule is `-` for an explicit
/// halt or `<write><L|R><next>`, e.g. `1R0`. Symbol 0 is the blank, state 0
/// is the start state.
#[derive(Debug, Clone)]
pub struct TmToken {
    text: String,
    nstates: usize,
    nsyms: usize,
    rules: Vec<Option<TmRule>>,
}

impl PartialEq for TmToken {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for TmToken {}

impl TmToken {
    pub fn decode(token: &str) -> Result<TmToken, TmError> {
        let mut parts = token.split('.');
        let nstates: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| TmError::BadToken("missing state count".into()))?;
        let nsyms: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| TmError::BadToken("missing symbol count".into()))?;
        if !(1..=99).contains(&nstates) {
            return Err(TmError::BadToken(format!(
                "state count {nstates} outside 1..=99"
            )));
        }
        if !(1..=10).contains(&nsyms) {
            return Err(TmError::BadToken(format!(
                "symbol count {nsyms} outside 1..=10"
            )));
        }
        let mut rules = Vec::with_capacity(nstates * nsyms);
        for part in parts {
            if part == "-" {
                rules.push(None);
                continue;
            }
            let bytes = part.as_bytes();
            if bytes.len() < 3 {
                return Err(TmError::BadToken(format!("rule {part:?} too short")));
            }
            let write = (bytes[0] as char)
                .to_digit(10)
                .ok_or_else(|| TmError::BadToken(format!("rule {part:?}: bad write symbol")))?
                as u8;
            let dir = match bytes[1] {
                b'L' => TmMove::L,
                b'R' => TmMove::R,
                _ => return Err(TmError::BadToken(format!("rule {part:?}: bad direction"))),
            };
            let next: usize = part[2..]
                .parse()
                .map_err(|_| TmError::BadToken(format!("rule {part:?}: bad next state")))?;
            if write as usize >= nsyms {
                return Err(TmError::BadToken(format!(
                    "rule {part:?} writes symbol {write} outside 0..{nsyms}"
                )));
            }
            if next >= nstates {
                return Err(TmError::BadToken(format!(
                    "rule {part:?} targets state {next} outside 0..{nstates}"
                )));
            }
            rules.push(Some(TmRule { write, dir, next }));
        }
        if rules.len() != nstates * nsyms {
            return Err(TmError::BadToken(format!(
                "expected {} rules, found {}",
                nstates * nsyms,
                rules.len()
            )));
        }
        Ok(TmToken {
            text: token.to_string(),
            nstates,
            nsyms,
            rules,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn state_count(&self) -> usize {
        self.nstates
    }

    pub fn symbol_count(&self) -> usize {
        self.nsyms
    }

    fn rule(&self, state: usize, symbol: u8) -> Option<TmRule> {
        self.rules[state * self.nsyms + symbol as usize]
    }
}

/// Outcome of a bounded simulation. `steps` counts executed transitions;
/// when `halted` is false the machine was still running after `steps`
/// transitions (the step budget).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TmRun {
    pub halted: bool,
    pub steps: u64,
}

/// Runs the machine on the digit-encoded input for at most `max_steps`
/// transitions. Digits outside the tape alphabet and non-digit characters
/// read as the blank symbol.
pub fn simulate(tm: &TmToken, input: &str, max_steps: u64) -> TmRun {
    let mut stepper = TmStepper::new(tm, input);
    for executed in 0..max_steps {
        match stepper.step() {
            StepResult::Halted => {
                return TmRun {
                    halted: true,
                    steps: executed,
                }
            }
            StepResult::Running => {}
        }
    }
    if stepper.at_halt() {
        TmRun {
            halted: true,
            steps: max_steps,
        }
    } else {
        TmRun {
            halted: false,
            steps: max_steps,
        }
    }
}

pub(crate) enum StepResult {
    Halted,
    Running,
}

/// Incremental simulation driver, used by the evaluator so each machine
/// step can be charged against the evaluation budget.
pub(crate) struct TmStepper<'a> {
    tm: &'a TmToken,
    tape: HashMap<i64, u8>,
    head: i64,
    state: usize,
}

impl<'a> TmStepper<'a> {
    pub(crate) fn new(tm: &'a TmToken, input: &str) -> Self {
        let mut tape = HashMap::new();
        for (i, c) in input.chars().enumerate() {
            let sym = c
                .to_digit(10)
                .map(|d| if (d as usize) < tm.nsyms { d as u8 } else { 0 })
                .unwrap_or(0);
            if sym != 0 {
                tape.insert(i as i64, sym);
            }
        }
        TmStepper {
            tm,
            tape,
            head: 0,
            state: 0,
        }
    }

    fn read(&self) -> u8 {
        self.tape.get(&self.head).copied().unwrap_or(0)
    }

    pub(crate) fn at_halt(&self) -> bool {
        self.tm.rule(self.state, self.read()).is_none()
    }

    pub(crate) fn step(&mut self) -> StepResult {
        let Some(rule) = self.tm.rule(self.state, self.read()) else {
            return StepResult::Halted;
        };
        if rule.write == 0 {
            self.tape.remove(&self.head);
        } else {
            self.tape.insert(self.head, rule.write);
        }
        self.head += match rule.dir {
            TmMove::L => -1,
            TmMove::R => 1,
        };
        self.state = rule.next;
        StepResult::Running
    }
}

/// The JSON wire form of a machine: named states and tape symbols, a start
/// state, explicit halting states, and one transition per (state, symbol)
/// pair of every non-halting state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmDescriptor {
    pub states: Vec<String>,
    pub tape_alphabet: Vec<char>,
    pub start: String,
    pub halting: Vec<String>,
    pub rules: Vec<TmRuleDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmRuleDescriptor {
    pub state: String,
    pub read: char,
    pub write: char,
    pub direction: TmMove,
    pub next: String,
}

impl TmDescriptor {
    pub fn from_json(json: &str) -> Result<TmDescriptor, TmError> {
        let d: TmDescriptor =
            serde_json::from_str(json).map_err(|e| TmError::BadDescriptor(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serialization cannot fail")
    }

    /// Transitions must be total on (state, symbol) for non-halting states,
    /// and halting states must carry no transitions.
    pub fn validate(&self) -> Result<(), TmError> {
        if self.states.is_empty() {
            return Err(TmError::BadDescriptor("no states".into()));
        }
        if self.tape_alphabet.is_empty() {
            return Err(TmError::BadDescriptor("empty tape alphabet".into()));
        }
        if !self.states.contains(&self.start) {
            return Err(TmError::BadDescriptor(format!(
                "start state {:?} not listed",
                self.start
            )));
        }
        for h in &self.halting {
            if !self.states.contains(h) {
                return Err(TmError::BadDescriptor(format!(
                    "halting state {h:?} not listed"
                )));
            }
        }
        for state in &self.states {
            let halting = self.halting.contains(state);
            for &sym in &self.tape_alphabet {
                let count = self
                    .rules
                    .iter()
                    .filter(|r| &r.state == state && r.read == sym)
                    .count();
                if halting && count != 0 {
                    return Err(TmError::BadDescriptor(format!(
                        "halting state {state:?} has a transition"
                    )));
                }
                if !halting && count != 1 {
                    return Err(TmError::BadDescriptor(format!(
                        "state {state:?} on {sym:?} has {count} transitions instead of 1"
                    )));
                }
            }
        }
        for rule in &self.rules {
            if !self.states.contains(&rule.next) {
                return Err(TmError::BadDescriptor(format!(
                    "transition targets unknown state {:?}",
                    rule.next
                )));
            }
            if !self.tape_alphabet.contains(&rule.write) {
                return Err(TmError::BadDescriptor(format!(
                    "transition writes unknown symbol {:?}",
                    rule.write
                )));
            }
        }
        Ok(())
    }

    /// State order for the compact token: the start state first, then the
    /// remaining states in listed order.
    fn state_order(&self) -> Vec<&String> {
        std::iter::once(&self.start)
            .chain(self.states.iter().filter(|s| **s != self.start))
            .collect()
    }

    /// Encodes the descriptor as a compact token. The descriptor's halting
    /// states become explicit halt rules on every symbol.
    pub fn to_token(&self) -> Result<TmToken, TmError> {
        self.validate()?;
        let order = self.state_order();
        let nstates = order.len();
        let nsyms = self.tape_alphabet.len();
        if nstates > 99 {
            return Err(TmError::BadDescriptor("more than 99 states".into()));
        }
        if nsyms > 10 {
            return Err(TmError::BadDescriptor("more than 10 tape symbols".into()));
        }
        let state_index: HashMap<&String, usize> =
            order.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let sym_index: HashMap<char, usize> = self
            .tape_alphabet
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut token = format!("{nstates}.{nsyms}");
        for state in &order {
            for &sym in &self.tape_alphabet {
                let rule = self
                    .rules
                    .iter()
                    .find(|r| &&r.state == state && r.read == sym);
                match rule {
                    None => token.push_str(".-"),
                    Some(r) => {
                        let dir = match r.direction {
                            TmMove::L => 'L',
                            TmMove::R => 'R',
                        };
                        token.push_str(&format!(
                            ".{}{}{}",
                            sym_index[&r.write], dir, state_index[&r.next]
                        ));
                    }
                }
            }
        }
        TmToken::decode(&token)
    }

    /// Maps an input word over the named tape alphabet to the digit string
    /// the compact encoding reads.
    pub fn encode_input(&self, w: &str) -> Result<String, TmError> {
        w.chars()
            .map(|c| {
                self.tape_alphabet
                    .iter()
                    .position(|&s| s == c)
                    .map(|i| char::from_digit(i as u32, 10).expect("alphabet bounded by 10"))
                    .ok_or(TmError::BadInputSymbol(c))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_round_trip() {
        let tok = TmToken::decode("2.2.0R1.-.1L0.-").unwrap();
        assert_eq!(tok.as_str(), "2.2.0R1.-.1L0.-");
        assert_eq!(tok.state_count(), 2);
        assert_eq!(tok.symbol_count(), 2);
    }

    #[test]
    fn malformed_tokens_are_rejected() {
        assert!(TmToken::decode("").is_err());
        assert!(TmToken::decode("2.2.0R1.-.1L0").is_err()); // rule count
        assert!(TmToken::decode("1.2.0R7.-").is_err()); // next state range
        assert!(TmToken::decode("1.2.5R0.-").is_err()); // write range
        assert!(TmToken::decode("1.2.0X0.-").is_err()); // direction
    }

    #[test]
    fn immediate_halt_runs_zero_steps() {
        let tok = TmToken::decode("1.2.-.-").unwrap();
        let run = simulate(&tok, "", 100);
        assert_eq!(run, TmRun { halted: true, steps: 0 });
        // Even a zero budget sees the halt.
        assert_eq!(simulate(&tok, "", 0), TmRun { halted: true, steps: 0 });
    }

    #[test]
    fn four_step_chain_halts_in_exactly_four() {
        // States 0..4 walk right, state 4 halts on blank.
        let tok = TmToken::decode("5.2.0R1.-.0R2.-.0R3.-.0R4.-.-.-").unwrap();
        assert_eq!(simulate(&tok, "", 100), TmRun { halted: true, steps: 4 });
        assert_eq!(simulate(&tok, "", 4), TmRun { halted: true, steps: 4 });
        assert_eq!(simulate(&tok, "", 3), TmRun { halted: false, steps: 3 });
    }

    #[test]
    fn right_runner_never_halts() {
        let tok = TmToken::decode("1.2.0R0.1R0").unwrap();
        assert_eq!(
            simulate(&tok, "11", 10_000),
            TmRun {
                halted: false,
                steps: 10_000
            }
        );
    }

    fn chain_descriptor() -> TmDescriptor {
        TmDescriptor {
            states: vec!["q0".into(), "q1".into(), "halt".into()],
            tape_alphabet: vec!['_', '1'],
            start: "q0".into(),
            halting: vec!["halt".into()],
            rules: vec![
                TmRuleDescriptor {
                    state: "q0".into(),
                    read: '_',
                    write: '1',
                    direction: TmMove::R,
                    next: "q1".into(),
                },
                TmRuleDescriptor {
                    state: "q0".into(),
                    read: '1',
                    write: '1',
                    direction: TmMove::R,
                    next: "q1".into(),
                },
                TmRuleDescriptor {
                    state: "q1".into(),
                    read: '_',
                    write: '_',
                    direction: TmMove::R,
                    next: "halt".into(),
                },
                TmRuleDescriptor {
                    state: "q1".into(),
                    read: '1',
                    write: '1',
                    direction: TmMove::R,
                    next: "halt".into(),
                },
            ],
        }
    }

    #[test]
    fn descriptor_validates_and_compiles() {
        let d = chain_descriptor();
        let tok = d.to_token().unwrap();
        assert_eq!(simulate(&tok, "", 10), TmRun { halted: true, steps: 2 });
        assert_eq!(d.encode_input("1_1").unwrap(), "101");
        assert!(matches!(
            d.encode_input("x"),
            Err(TmError::BadInputSymbol('x'))
        ));
    }

    #[test]
    fn descriptor_totality_is_enforced() {
        let mut d = chain_descriptor();
        d.rules.pop();
        let err = d.validate().unwrap_err();
        assert!(err.to_string().contains("0 transitions"));
    }

    #[test]
    fn descriptor_json_round_trip() {
        let d = chain_descriptor();
        let json = d.to_json();
        let back = TmDescriptor::from_json(&json).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), json);
    }
}
