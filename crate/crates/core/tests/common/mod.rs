#![allow(dead_code)]

use std::path::PathBuf;

use surfres::cli_io::read_curve_graph;
use surfres::curve_graph::CurveGraph;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> CurveGraph {
    read_curve_graph(&fixture_path(name)).unwrap()
}
