//! Key-borrower detection in weighted exposure networks.
//!
//! Every algorithm is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common double-precision instantiations.

pub mod centrality;
pub mod error;
pub mod graph;
pub mod groups;
pub mod kbi;
pub mod matrix;
pub mod paths;
pub mod rank;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use graph::{ingest_edges, EdgeRecord, ExposureNetwork, NetworkBuilder, ThresholdPolicy, Thresholds};
pub use groups::{CriticalGroup, GroupFinder};
pub use kbi::KbiVariant;
pub use matrix::SquareMatrix;
pub use paths::{GradeSchema, InfluenceMatrix, PathMatrices, PathMethod};
pub use rank::{Coefficient, Ranking};
pub use scalar::Scalar;
pub use sim::{CascadeTrace, SamplingMode, SimulationPlan, SimulationResult};

pub type Network = ExposureNetwork<f64>;
pub type Network32 = ExposureNetwork<f32>;
pub type Policy = ThresholdPolicy<f64>;
pub type Influence = InfluenceMatrix<f64>;
pub type Grades = GradeSchema<f64>;
pub type Plan = SimulationPlan<f64>;
