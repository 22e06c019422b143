//! Computations with symmetric-group-stable subvarieties of infinite affine
//! space: partition orders, correspondences, point-set constructions, and the
//! defining equations of the classified varieties.

pub mod cli;
pub mod corr;
pub mod equations;
pub mod error;
pub mod partitions;
pub mod poly;
pub mod sample;
pub mod variety;

pub use error::{Error, Result};
