pub mod error;
pub mod matrix;
pub mod qforms;
pub mod rational;
pub mod scalars;
pub mod spgroup;
pub mod mpcover;
pub mod soodd;
pub mod weylreps;
pub mod json;
pub mod harness;

pub use error::{Error, Result};
pub use harness::{render_report, run_suite, Format, SuiteParams, VerificationReport};
pub use matrix::Matrix;
pub use mpcover::{FactoredWord, Letter, MpElement};
pub use rational::Rational;
pub use scalars::{Mu8, Place, Sign, SquareClass};
pub use spgroup::SpElement;
