pub mod class;
pub mod commands;
pub mod error;
pub mod geometry;
pub mod hexagon;
pub mod io;
pub mod oracle;
pub mod pi3;
pub mod small_n;
pub mod topology;
pub mod torus;

pub use error::{Error, Result};
