//! Numeric multiple polylogarithms in one variable, KZ transport, and the
//! single-valued functions built from `S` and `Ŝ`.

pub mod classical;
pub mod cseries;
pub mod local;
pub mod single_valued;
pub mod transport;

pub use classical::{bloch_wigner, li2, CATALAN};
pub use cseries::CSeries;
pub use local::{LogTaylor, LOCAL_RADIUS};
pub use single_valued::{LoopDefect, OdeResidual, SvEvaluator, SvMode};
pub use transport::{
    associator_by_reflection, loop_path, AssociatorEstimate, regularized_limit_at_1, LoopAround, Transporter, DEFAULT_CLEARANCE,
};

use num_complex::Complex64;

use crate::error::Result;
use crate::word::Word;

/// `L_w(z)` from the expansion at 0; `OutOfDomain` outside its disk.
pub fn eval_l(w: Word, z: Complex64) -> Result<Complex64> {
    let local = LogTaylor::new(w.len());
    Ok(local.eval(z)?.0[w])
}
