pub mod automata;
pub mod budget;
pub mod cli;
pub mod derive;
pub mod error;
pub mod exec;
pub mod formalism;
pub mod grammar;
pub mod indexed;
pub mod lsystem;
pub mod oracle;
pub mod packed;
pub mod sample;
pub mod symbol;
pub mod text;
pub mod transforms;
pub mod word;
pub mod wordset;
pub mod zoo;

pub use error::{Error, Result};
