use pipeline_vm::{ProgramAst, ProgramIndex, TmDescriptor};
use signature_core::ScenarioConfig;

use crate::DetectorError;

/// Builds the total pipeline that reduces halting to overspecification.
///
/// On input x, the gadget checks whether x is the witness base followed by n
/// pads; if so it simulates the machine on the given word for exactly n²
/// steps and outputs the committing implementation when the machine halted
/// in time, the empty implementation otherwise. The program stays in the
/// EVAL/ORACLE-free fragment, so it is total by syntax.
pub fn build_halting_gadget(
    tm: &TmDescriptor,
    word: &str,
    cfg: &ScenarioConfig,
) -> Result<ProgramIndex, DetectorError> {
    if cfg.alphabet.pad() != '#' {
        return Err(DetectorError::UnsupportedPad(cfg.alphabet.pad()));
    }
    let token = tm.to_token()?;
    let input_digits = tm.encode_input(word)?;
    let x0 = &cfg.witness_kit.x0;
    let y_plus = ProgramAst::Const(cfg.witness_kit.y_plus.clone());
    let epsilon = || ProgramAst::Const(cfg.witness_kit.epsilon.clone());

    let clocked_simulation = ProgramAst::SimTm {
        tm: token,
        input: Box::new(ProgramAst::Const(input_digits)),
        steps: Box::new(ProgramAst::Sq(Box::new(ProgramAst::PadCount(x0.clone())))),
    };
    let gadget = ProgramAst::If(
        Box::new(ProgramAst::MatchPad(x0.clone())),
        Box::new(ProgramAst::If(
            Box::new(clocked_simulation),
            Box::new(y_plus),
            Box::new(epsilon()),
        )),
        Box::new(epsilon()),
    );
    Ok(gadget.index())
}
