pub mod config;
pub mod csv;
pub mod error;
pub mod experiments;
pub mod fv;
pub mod gpc;
pub mod mesh;
pub mod models;
pub mod quadrature;
pub mod random;
pub mod splines;
pub mod uq;

pub use error::{Error, Result};
