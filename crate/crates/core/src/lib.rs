pub mod bits;
pub mod cli;
pub mod error;
pub mod fraisse;
pub mod io;
pub mod median;
pub mod morphism;

pub use bits::Bits;
pub use error::{Error, Result, Side};
