//! Spanning-tree reconfiguration of distribution networks: choose a spanning
//! tree rooted at the substation that minimizes the resistive loss
//! `Σ r_e f_e²` of the flow serving every demand.

pub mod baselines;
pub mod bench;
pub mod bounds;
pub mod instances;
pub mod laplacian;
pub mod lm;
pub mod lp;
pub mod minmin;
pub mod network;
pub mod ride;

use thiserror::Error;

/// Any failure raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Network(#[from] network::NetworkError),
    #[error(transparent)]
    Laplacian(#[from] laplacian::LaplacianError),
    #[error(transparent)]
    Ride(#[from] ride::RideError),
    #[error(transparent)]
    Bound(#[from] bounds::BoundError),
    #[error(transparent)]
    MinMin(#[from] minmin::MinMinError),
    #[error(transparent)]
    Lm(#[from] lm::LmError),
    #[error(transparent)]
    Oracle(#[from] baselines::OracleError),
    #[error(transparent)]
    Instance(#[from] instances::InstanceError),
    #[error(transparent)]
    Bench(#[from] bench::BenchError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether this is a refusal to spend more than allowed rather than bad
    /// input.
    pub fn is_resource_refusal(&self) -> bool {
        match self {
            Error::Oracle(e) => e.is_resource_refusal(),
            Error::Bench(bench::BenchError::Oracle(e)) => e.is_resource_refusal(),
            _ => false,
        }
    }
}
