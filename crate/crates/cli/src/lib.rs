//! Front end for `cosets-core`: analysis reports for finite groups,
//! finitely presented group searches, and the corpus verification suite.

pub mod analyze;
pub mod app;
pub mod error;
pub mod fpcmd;
pub mod verify;

pub use app::{run, Cli};
pub use error::CliError;

use cosets_core::homology::HomologyProfile;
use cosets_core::Integer;

/// Renders nonzero Betti numbers as `d:r` pairs joined by `+`, or `none`.
pub fn betti_code(h: &HomologyProfile<Integer>) -> String {
    let parts: Vec<String> = h
        .nonzero_betti()
        .iter()
        .map(|(d, r)| format!("{d}:{r}"))
        .collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join("+")
    }
}
