//! Independent brute-force reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the library's algorithms.
#![allow(dead_code)]

pub mod csg;
pub mod eigen;
pub mod graph;
pub mod stats;
