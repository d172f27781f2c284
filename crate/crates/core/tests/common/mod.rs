//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use cpn_core::{Network, RatMatrix, StrandMatching};

/// The five-node worked example: two internal vertices, seven edges.
pub const EXAMPLE_NETWORK: &str = "\
cpn 5 2
edge 0 1 6 150
edge 1 6 2 120
edge 2 6 3 130
edge 3 6 7 100
edge 4 3 7 10
edge 5 7 4 60
edge 6 7 5 30
rot 1 0
rot 2 1
rot 3 4 2
rot 4 5
rot 5 6
rot 6 0 1 2 3
rot 7 4 5 6 3
";

pub fn example_network() -> Network {
    Network::parse(EXAMPLE_NETWORK).expect("fixture parses")
}

pub fn example_response() -> RatMatrix {
    RatMatrix::from_i64(&[
        &[-100, 40, 45, 10, 5],
        &[40, -88, 36, 8, 4],
        &[45, 36, -99, 12, 6],
        &[10, 8, 12, -40, 10],
        &[5, 4, 6, 10, -25],
    ])
}

pub fn example_matching() -> StrandMatching {
    StrandMatching::new(5, &[(1, 4), (2, 6), (3, 8), (5, 9), (7, 10)]).unwrap()
}
