//! Fixed workloads for the benchmarks in `benches/`.

use snc_core::digraph::Digraph;
use snc_core::forge::{random_tournament, star_deleted};

/// Seeded tournaments, one per size.
pub fn tournaments(sizes: &[usize]) -> Vec<Digraph> {
    sizes.iter().map(|&n| random_tournament(n, 0xbe0c + n as u64)).collect()
}

/// Tournaments on `n` vertices with two stars of `leaves` leaves removed.
pub fn missing_two_stars(n: usize, leaves: usize) -> Digraph {
    (0..).find_map(|seed| star_deleted(n, &[leaves, leaves], seed).ok()).expect("some seed fits")
}
