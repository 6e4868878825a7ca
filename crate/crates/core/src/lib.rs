//! Persistent homology and zigzag persistence of point clouds, the bounded
//! barcode space with its bottleneck metric and diagonal-grid discretization,
//! and ball-volume statistics on samples of barcodes.
//!
//! A small "measure lab" on finite metric measure spaces sits alongside:
//! Carathéodory outer measures built from balls, the determined-by-balls
//! rank check, Wasserstein and Lévy–Prokhorov distances, and a convergence
//! harness driven by distance-matrix distributions.
//!
//! Module map:
//!
//! * [`metric`] - point clouds, validated distance matrices, finite metric measure spaces, balls.
//! * [`measures`] - outer measures from ball covers, transport, Prokhorov, distance-matrix sampling.
//! * [`persistence`] - Vietoris–Rips filtrations and GF(2) persistent homology.
//! * [`zigzag`] - the union zigzag of adjacent point clouds and its interval decomposition.
//! * [`barcode`] - bottleneck distance, the diagonal grid discretization, metric checks.
//! * [`ballstats`] - empirical ball volumes, fidi volumes, permutation two-sample test.
//! * [`cli`] - the `ballvol` command line.

pub mod ballstats;
pub mod barcode;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod io;
pub mod measures;
pub mod metric;
pub mod persistence;
pub mod rng;
pub mod zigzag;

pub use error::{Error, Result};
