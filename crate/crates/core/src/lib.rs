pub mod analysis;
pub mod classify;
pub mod cli;
pub mod cmatrix;
pub mod models;
pub mod spectral;
pub mod sublattice;
