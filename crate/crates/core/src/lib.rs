pub mod cli;
pub mod error;
pub mod exactnum;
pub mod fd;
pub mod groebner;
pub mod matrix;
pub mod polyring;
pub mod quotient;
pub mod relalg;
pub mod solve;

pub use error::{Error, Result};
