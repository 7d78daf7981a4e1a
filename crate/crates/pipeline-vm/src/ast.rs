use serde::{Deserialize, Serialize};

use crate::parser::{self, ParseError};
use crate::tm::TmToken;

/// The padding character the language's pad-pattern nodes recognize.
pub(crate) const PAD_CHAR: char = '#';

/// A program index: the canonical text of a program. Text equality is index
/// equality, so this doubles as the Gödel numbering of the pipeline class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProgramIndex(String);

impl ProgramIndex {
    /// Parses arbitrary surface text (extra whitespace and SELFAPPLY sugar
    /// allowed) and stores the canonical rendering.
    pub fn parse(text: &str) -> Result<ProgramIndex, ParseError> {
        Ok(ProgramAst::parse(text)?.index())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// The parsed form. Canonical texts always parse, so this cannot fail
    /// for indices produced by this crate.
    pub fn ast(&self) -> Result<ProgramAst, ParseError> {
        ProgramAst::parse(&self.0)
    }

    pub(crate) fn from_canonical(text: String) -> ProgramIndex {
        ProgramIndex(text)
    }
}

impl std::fmt::Display for ProgramIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Program syntax tree. See the crate docs for node semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgramAst {
    /// A string literal; the payload may contain spaces and balanced parens.
    Const(String),
    /// The current input string.
    Input,
    /// First component of the input decoded as a length-prefixed pair.
    First,
    /// Second component of the input decoded as a length-prefixed pair.
    Second,
    Concat(Box<ProgramAst>, Box<ProgramAst>),
    Eq(Box<ProgramAst>, Box<ProgramAst>),
    /// Branches on non-emptiness of the condition value.
    If(Box<ProgramAst>, Box<ProgramAst>, Box<ProgramAst>),
    /// "1" iff the input is the literal followed by zero or more pads.
    MatchPad(String),
    /// The pad count as a decimal if the input matches, else "".
    PadCount(String),
    /// "1" iff the encoded machine halts on the input value within the
    /// requested number of steps.
    SimTm {
        tm: TmToken,
        input: Box<ProgramAst>,
        steps: Box<ProgramAst>,
    },
    /// Decimal square of the subterm's value (non-numbers read as 0).
    Sq(Box<ProgramAst>),
    Num(u64),
    /// Evaluate the program text from the first term on the input value
    /// from the second, drawing on the caller's remaining budget.
    Eval(Box<ProgramAst>, Box<ProgramAst>),
    /// Specialize the program text from the first term on the constant from
    /// the second; a pure text transformation, no evaluation.
    Specialize(Box<ProgramAst>, Box<ProgramAst>),
    /// Call a host oracle registered under the given name.
    Oracle(String, Box<ProgramAst>),
}

impl ProgramAst {
    pub fn parse(text: &str) -> Result<ProgramAst, ParseError> {
        parser::parse(text)
    }

    /// The canonical rendering: single spaces between tokens, no leading or
    /// trailing whitespace. Printing then reparsing is the identity.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        self.render(&mut out);
        out
    }

    pub fn index(&self) -> ProgramIndex {
        ProgramIndex::from_canonical(self.canonical_text())
    }

    /// True when the program contains no EVAL and no ORACLE node: the
    /// syntactically certified total fragment.
    pub fn is_total_fragment(&self) -> bool {
        match self {
            ProgramAst::Const(_)
            | ProgramAst::Input
            | ProgramAst::First
            | ProgramAst::Second
            | ProgramAst::MatchPad(_)
            | ProgramAst::PadCount(_)
            | ProgramAst::Num(_) => true,
            ProgramAst::Concat(a, b) | ProgramAst::Eq(a, b) | ProgramAst::Specialize(a, b) => {
                a.is_total_fragment() && b.is_total_fragment()
            }
            ProgramAst::If(c, t, e) => {
                c.is_total_fragment() && t.is_total_fragment() && e.is_total_fragment()
            }
            ProgramAst::SimTm { input, steps, .. } => {
                input.is_total_fragment() && steps.is_total_fragment()
            }
            ProgramAst::Sq(t) => t.is_total_fragment(),
            ProgramAst::Eval(_, _) | ProgramAst::Oracle(_, _) => false,
        }
    }

    fn render(&self, out: &mut String) {
        match self {
            ProgramAst::Const(s) => {
                out.push_str("(CONST ");
                out.push_str(s);
                out.push(')');
            }
            ProgramAst::Input => out.push_str("INPUT"),
            ProgramAst::First => out.push_str("FIRST"),
            ProgramAst::Second => out.push_str("SECOND"),
            ProgramAst::Concat(a, b) => {
                out.push_str("(CONCAT ");
                a.render(out);
                out.push(' ');
                b.render(out);
                out.push(')');
            }
            ProgramAst::Eq(a, b) => {
                out.push_str("(EQ ");
                a.render(out);
                out.push(' ');
                b.render(out);
                out.push(')');
            }
            ProgramAst::If(c, t, e) => {
                out.push_str("(IF ");
                c.render(out);
                out.push(' ');
                t.render(out);
                out.push(' ');
                e.render(out);
                out.push(')');
            }
            ProgramAst::MatchPad(s) => {
                out.push_str("(MATCH_PAD ");
                out.push_str(s);
                out.push(')');
            }
            ProgramAst::PadCount(s) => {
                out.push_str("(PAD_COUNT ");
                out.push_str(s);
                out.push(')');
            }
            ProgramAst::SimTm { tm, input, steps } => {
                out.push_str("(SIM_TM ");
                out.push_str(tm.as_str());
                out.push(' ');
                input.render(out);
                out.push(' ');
                steps.render(out);
                out.push(')');
            }
            ProgramAst::Sq(t) => {
                out.push_str("(SQ ");
                t.render(out);
                out.push(')');
            }
            ProgramAst::Num(k) => {
                out.push_str("(NUM ");
                out.push_str(&k.to_string());
                out.push(')');
            }
            ProgramAst::Eval(a, b) => {
                out.push_str("(EVAL ");
                a.render(out);
                out.push(' ');
                b.render(out);
                out.push(')');
            }
            ProgramAst::Specialize(a, b) => {
                out.push_str("(SPECIALIZE ");
                a.render(out);
                out.push(' ');
                b.render(out);
                out.push(')');
            }
            ProgramAst::Oracle(name, t) => {
                out.push_str("(ORACLE ");
                out.push_str(name);
                out.push(' ');
                t.render(out);
                out.push(')');
            }
        }
    }

    /// Convenience constructor for a constant program.
    pub fn constant(s: impl Into<String>) -> ProgramAst {
        ProgramAst::Const(s.into())
    }
}
