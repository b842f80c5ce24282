//! File formats, exports, PNG output and the batch command line for the
//! `luxfield_core` spectral cubic illumination toolkit.

pub mod cli;
pub mod export;
pub mod imageio;
pub mod ingest;
pub mod observer;

pub use luxfield_core as core;
