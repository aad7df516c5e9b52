pub mod cli;
pub mod error;
pub mod harness;
pub mod models;
pub mod qcore;
pub mod two_spin;

pub use error::{Error, Result};
