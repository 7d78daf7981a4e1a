use thiserror::Error;

use crate::ast::ProgramAst;
use crate::smn::SELF_APPLICATION_TEMPLATE;
use crate::tm::TmToken;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// Parses surface text into an AST. The surface grammar is slightly looser
/// than the canonical form: any amount of whitespace may separate tokens, and
/// the SELFAPPLY sugar is accepted and expanded into its SPECIALIZE form.
pub fn parse(text: &str) -> Result<ProgramAst, ParseError> {
    let mut cursor = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    cursor.skip_ws();
    let term = cursor.term()?;
    cursor.skip_ws();
    if cursor.pos != cursor.bytes.len() {
        return Err(cursor.err("trailing input after program"));
    }
    Ok(term)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\n') | Some(b'\t') | Some(b'\r')) {
            self.pos += 1;
        }
    }

    fn expect_ws(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(b' ') | Some(b'\n') | Some(b'\t') | Some(b'\r') => {
                self.skip_ws();
                Ok(())
            }
            _ => Err(self.err("expected whitespace")),
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}", byte as char)))
        }
    }

    /// A bare word: uppercase letters and underscores.
    fn word(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_uppercase() || c == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    /// A single token: no whitespace, no parentheses. May be empty.
    fn token(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if !matches!(c, b' ' | b'\n' | b'\t' | b'\r' | b'(' | b')'))
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    /// Raw payload up to the parenthesis that closes the enclosing node.
    /// Nested parens must balance; the payload may contain whitespace.
    fn raw_payload(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        let mut depth = 0usize;
        loop {
            match self.peek() {
                None => return Err(self.err("unbalanced parentheses in payload")),
                Some(b'(') => depth += 1,
                Some(b')') => {
                    if depth == 0 {
                        let payload =
                            String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned();
                        return Ok(payload);
                    }
                    depth -= 1;
                }
                Some(_) => {}
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<ProgramAst, ParseError> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let head_pos = self.pos;
            let head = self.word();
            let node = match head.as_str() {
                "CONST" => {
                    self.expect(b' ')?;
                    ProgramAst::Const(self.raw_payload()?)
                }
                "MATCH_PAD" => {
                    self.expect(b' ')?;
                    ProgramAst::MatchPad(self.token())
                }
                "PAD_COUNT" => {
                    self.expect(b' ')?;
                    ProgramAst::PadCount(self.token())
                }
                "NUM" => {
                    self.expect(b' ')?;
                    let tok_pos = self.pos;
                    let tok = self.token();
                    let canonical = tok == "0" || (!tok.is_empty() && !tok.starts_with('0'));
                    let value: u64 = tok.parse().map_err(|_| ParseError {
                        position: tok_pos,
                        message: format!("invalid number literal {tok:?}"),
                    })?;
                    if !canonical {
                        return Err(ParseError {
                            position: tok_pos,
                            message: format!("non-canonical number literal {tok:?}"),
                        });
                    }
                    ProgramAst::Num(value)
                }
                "SIM_TM" => {
                    self.expect(b' ')?;
                    let tok_pos = self.pos;
                    let tok = self.token();
                    let tm = TmToken::decode(&tok).map_err(|e| ParseError {
                        position: tok_pos,
                        message: format!("invalid machine literal: {e}"),
                    })?;
                    self.expect_ws()?;
                    let input = Box::new(self.term()?);
                    self.expect_ws()?;
                    let steps = Box::new(self.term()?);
                    ProgramAst::SimTm { tm, input, steps }
                }
                "ORACLE" => {
                    self.expect(b' ')?;
                    let name_pos = self.pos;
                    let name = self.token();
                    if name.is_empty() {
                        return Err(ParseError {
                            position: name_pos,
                            message: "oracle name is empty".to_string(),
                        });
                    }
                    self.expect_ws()?;
                    let arg = Box::new(self.term()?);
                    ProgramAst::Oracle(name, arg)
                }
                "CONCAT" | "EQ" | "EVAL" | "SPECIALIZE" => {
                    self.expect_ws()?;
                    let a = Box::new(self.term()?);
                    self.expect_ws()?;
                    let b = Box::new(self.term()?);
                    match head.as_str() {
                        "CONCAT" => ProgramAst::Concat(a, b),
                        "EQ" => ProgramAst::Eq(a, b),
                        "EVAL" => ProgramAst::Eval(a, b),
                        _ => ProgramAst::Specialize(a, b),
                    }
                }
                "IF" => {
                    self.expect_ws()?;
                    let c = Box::new(self.term()?);
                    self.expect_ws()?;
                    let t = Box::new(self.term()?);
                    self.expect_ws()?;
                    let e = Box::new(self.term()?);
                    ProgramAst::If(c, t, e)
                }
                "SQ" => {
                    self.expect_ws()?;
                    ProgramAst::Sq(Box::new(self.term()?))
                }
                // Sugar: (SELFAPPLY t) specializes the self-application
                // template on t at parse time.
                "SELFAPPLY" => {
                    self.expect_ws()?;
                    let t = Box::new(self.term()?);
                    ProgramAst::Specialize(
                        Box::new(ProgramAst::Const(SELF_APPLICATION_TEMPLATE.to_string())),
                        t,
                    )
                }
                other => {
                    return Err(ParseError {
                        position: head_pos,
                        message: format!("unknown node kind {other:?}"),
                    })
                }
            };
            self.skip_ws_before_close(&node)?;
            self.expect(b')')?;
            Ok(node)
        } else {
            let word_pos = self.pos;
            let word = self.word();
            match word.as_str() {
                "INPUT" => Ok(ProgramAst::Input),
                "FIRST" => Ok(ProgramAst::First),
                "SECOND" => Ok(ProgramAst::Second),
                other => Err(ParseError {
                    position: word_pos,
                    message: format!("expected a term, found {other:?}"),
                }),
            }
        }
    }

    /// Payload-style nodes consume everything up to ')' themselves; for the
    /// others, tolerate trailing whitespace before the close.
    fn skip_ws_before_close(&mut self, node: &ProgramAst) -> Result<(), ParseError> {
        match node {
            ProgramAst::Const(_) | ProgramAst::MatchPad(_) | ProgramAst::PadCount(_) => Ok(()),
            _ => {
                self.skip_ws();
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_parse() {
        assert_eq!(parse("INPUT").unwrap(), ProgramAst::Input);
        assert_eq!(parse("FIRST").unwrap(), ProgramAst::First);
        assert_eq!(parse(" SECOND ").unwrap(), ProgramAst::Second);
    }

    #[test]
    fn unbalanced_input_is_a_positioned_error() {
        let err = parse("(EVAL (EVAL INPUT INPUT) INPUT").unwrap_err();
        assert!(err.position > 0);
        assert!(err.message.contains("expected"));
    }

    #[test]
    fn unknown_head_is_rejected() {
        let err = parse("(FOO INPUT)").unwrap_err();
        assert!(err.message.contains("FOO"));
    }

    #[test]
    fn empty_const_payload() {
        assert_eq!(parse("(CONST )").unwrap(), ProgramAst::Const(String::new()));
    }

    #[test]
    fn whitespace_is_normalized_by_reprinting() {
        let p = parse("(IF  (MATCH_PAD a)\n  (CONST YDyn)  (CONST ))").unwrap();
        assert_eq!(
            p.canonical_text(),
            "(IF (MATCH_PAD a) (CONST YDyn) (CONST ))"
        );
    }

    #[test]
    fn canonicalization_is_idempotent() {
        for text in [
            "(CONST YDyn)",
            "(CONCAT FIRST SECOND)",
            "(EVAL (EVAL FIRST FIRST) SECOND)",
            "(SQ (PAD_COUNT a))",
            "(NUM 42)",
            "(ORACLE G (SPECIALIZE (CONST (EVAL (EVAL FIRST FIRST) SECOND)) INPUT))",
        ] {
            let once = parse(text).unwrap().canonical_text();
            let twice = parse(&once).unwrap().canonical_text();
            assert_eq!(once, twice);
            assert_eq!(once, text);
        }
    }

    #[test]
    fn selfapply_desugars_to_template_specialization() {
        let p = parse("(SELFAPPLY INPUT)").unwrap();
        assert_eq!(
            p.canonical_text(),
            "(SPECIALIZE (CONST (EVAL (EVAL FIRST FIRST) SECOND)) INPUT)"
        );
    }

    #[test]
    fn non_canonical_numbers_are_rejected() {
        assert!(parse("(NUM 007)").is_err());
        assert!(parse("(NUM )").is_err());
        assert!(parse("(NUM 18446744073709551616)").is_err());
        assert_eq!(parse("(NUM 0)").unwrap(), ProgramAst::Num(0));
    }
}
