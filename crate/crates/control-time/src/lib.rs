pub mod bch;
pub mod bounds;
pub mod error;
pub mod io;
pub mod lie;
pub mod metric;
pub mod numerics;
pub mod random;
pub mod schedule;
pub mod synthesis;
pub mod verify;
pub mod zigzag;

pub use error::{Error, Result};
