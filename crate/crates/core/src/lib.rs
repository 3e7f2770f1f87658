pub mod charp;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod groupmodels;
pub mod hull;
pub mod linalg;
pub mod pointsets;
pub mod unimod;
pub mod zariski;

pub use error::{Error, Result};
