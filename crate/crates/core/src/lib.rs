//! Exact envelopes of submodules, envelope chains, semiprime and prime
//! radicals, and locally nilradicals for finitely presented modules over
//! `Z`, `Z/n`, and monic algebras `Z[X]/(f)`.

pub mod campaign;
pub mod checks;
pub mod envelope;
pub mod error;
pub mod factor;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod module;
pub mod oracle;
pub mod poly;
pub mod random;
pub mod ring;
pub mod snf;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::IntLattice;
pub use matrix::IntMat;
pub use module::{Element, FgModule, ModuleHom, Submodule};
pub use ring::{IdealDesc, RingDesc, RingElem};
pub use envelope::{Certificate, ChainResult, Classification, Config, Engine, EnvelopeResult, Strategy, Verdict};
