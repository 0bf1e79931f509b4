//! Reconstruction of firm-level supply networks from aggregated inter-firm
//! communication data, and computation of the Economic Systemic Risk Index
//! (ESRI) via downstream/upstream shock cascades with generalized Leontief
//! production functions.
//!
//! Modules:
//! - [`net`]: domain types (firms, communication/supply networks, IO tables)
//! - [`ingest`]: CSV/JSON file formats for every input and output
//! - [`reconstruct`]: thresholding, KL threshold selection, direction
//!   sampling from IO tables, gravity weights, ensembles
//! - [`esri`]: the cascade engine and risk profiles
//! - [`topology`]: degree statistics, power-law tail fits, knn, clustering
//! - [`overlap`]: conditional layer-overlap probabilities and bootstraps
//! - [`robustness`]: simulation studies quantifying reconstruction errors
//! - [`synthgen`]: synthetic firm economies for desk-scale experiments

pub mod error;
pub mod exec;
pub mod net;
pub mod seeds;
pub mod stats;

pub mod esri;
pub mod ingest;
pub mod overlap;
pub mod reconstruct;
pub mod robustness;
pub mod synthgen;
pub mod topology;

pub use error::{Error, Result};
