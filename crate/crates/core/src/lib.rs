#![allow(clippy::needless_range_loop)]

pub mod charpoly;
pub mod cli;
pub mod combinatorics;
pub mod expansion;
pub mod frame;
pub mod linalg;
pub mod scalar;
pub mod series;
#[cfg(feature = "testing")]
pub mod testing;
pub mod validation;
