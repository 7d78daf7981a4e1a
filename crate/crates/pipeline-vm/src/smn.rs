use crate::ast::{ProgramAst, ProgramIndex};
use crate::eval::{EvalError, OracleRegistry};
use crate::parser::ParseError;

/// The template behind the self-application operator: on the paired input
/// (n, x), evaluate program n on n, then evaluate the resulting index on x.
pub const SELF_APPLICATION_TEMPLATE: &str = "(EVAL (EVAL FIRST FIRST) SECOND)";

/// Length-prefixed pairing: `pair(c, x)` is `<len(c)>:<c><x>`. Total and
/// unambiguous; FIRST and SECOND decode it.
pub fn pair(c: &str, x: &str) -> String {
    format!("{}:{}{}", c.len(), c, x)
}

/// Decodes a paired string; anything malformed reads as two empty parts.
pub fn unpair(s: &str) -> (&str, &str) {
    let Some(colon) = s.find(':') else {
        return ("", "");
    };
    let (digits, rest) = s.split_at(colon);
    let rest = &rest[1..];
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return ("", "");
    }
    let Ok(len) = digits.parse::<usize>() else {
        return ("", "");
    };
    if len > rest.len() || !rest.is_char_boundary(len) {
        return ("", "");
    }
    rest.split_at(len)
}

/// Specializes a pair-consuming program on a constant first component:
/// the result evaluates `p` on `pair(c, x)` when run on `x`. A pure text
/// transformation; the output is canonical and always parses.
pub fn smn_specialize(p: &ProgramIndex, c: &str) -> Result<ProgramIndex, ParseError> {
    let ast = p.ast()?;
    let prefix = format!("{}:{}", c.len(), c);
    let specialized = ProgramAst::Eval(
        Box::new(ProgramAst::Const(ast.canonical_text())),
        Box::new(ProgramAst::Concat(
            Box::new(ProgramAst::Const(prefix)),
            Box::new(ProgramAst::Input),
        )),
    );
    Ok(specialized.index())
}

/// The total index transformation q with `eval(q(n), x)` agreeing with the
/// two-stage evaluation: run n on its own index, then run that output on x.
pub fn self_application_operator(n: &ProgramIndex) -> Result<ProgramIndex, ParseError> {
    let template = ProgramIndex::parse(SELF_APPLICATION_TEMPLATE)
        .expect("self-application template is canonical");
    smn_specialize(&template, n.as_str())
}

/// Builds a fixed point of the registered index transformation: the returned
/// index e* satisfies `eval(e*, x) ≃ eval(G(e*), x)` for the oracle G named
/// by `g_oracle_name`. The construction is purely syntactic; the oracle is
/// consulted only when the result is evaluated.
pub fn kleene_fixed_point(
    g_oracle_name: &str,
    registry: &OracleRegistry,
) -> Result<ProgramIndex, EvalError> {
    if !registry.contains(g_oracle_name) {
        return Err(EvalError::UnknownOracle(g_oracle_name.to_string()));
    }
    let source = format!("(ORACLE {g_oracle_name} (SELFAPPLY INPUT))");
    let p = ProgramIndex::parse(&source).map_err(|e| EvalError::OracleConfig {
        name: g_oracle_name.to_string(),
        message: format!("oracle name does not form a valid program: {e}"),
    })?;
    self_application_operator(&p).map_err(|e| EvalError::OracleConfig {
        name: g_oracle_name.to_string(),
        message: e.to_string(),
    })
}
