#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod decomposition;
pub mod error;
pub mod exact;
pub mod formulation;
pub mod fptas;
pub mod instance;
pub mod lp;
pub mod ptas;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
