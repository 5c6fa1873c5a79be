use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite value in {what} at cell {cell}, component {component}")]
    NonFinite {
        what: &'static str,
        cell: isize,
        component: usize,
    },

    #[error("negative water depth {depth:e} at cell {cell}")]
    NegativeDepth { cell: isize, depth: f64 },

    #[error("cell {cell}: water surface {surface} below bottom {bottom}")]
    SurfaceBelowBottom {
        cell: isize,
        surface: f64,
        bottom: f64,
    },

    #[error("time step {dt:e} underflow at t = {time}")]
    StepUnderflow { dt: f64, time: f64 },

    #[error("realization xi = {xi} failed: {source}")]
    Realization {
        xi: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("quadrature: {0}")]
    Quadrature(String),

    #[error("gPC: {0}")]
    Gpc(String),

    #[error("spline: {0}")]
    Spline(String),

    #[error("cell {cell}, component {component}: {source}")]
    AtCell {
        cell: usize,
        component: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{0} out of range")]
    OutOfRange(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short stable identifier of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Grid(_) => "grid",
            Error::Config(_) => "config",
            Error::NonFinite { .. } => "non_finite",
            Error::NegativeDepth { .. } => "negative_depth",
            Error::SurfaceBelowBottom { .. } => "surface_below_bottom",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::Realization { source, .. } | Error::AtCell { source, .. } => source.code(),
            Error::Quadrature(_) => "quadrature",
            Error::Gpc(_) => "gpc",
            Error::Spline(_) => "spline",
            Error::OutOfRange(_) => "out_of_range",
            Error::Csv(_) => "csv",
            Error::Io { .. } => "io",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_errors_report_the_root_code() {
        let e = Error::Realization {
            xi: 0.5,
            source: Box::new(Error::StepUnderflow { dt: 1e-20, time: 0.1 }),
        };
        assert_eq!(e.code(), "step_underflow");
        assert!(e.to_string().contains("xi = 0.5"));
    }
}
