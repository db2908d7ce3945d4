//! Distances between barcodes and between persistence modules.

mod bottleneck;
mod interleaving;
mod matching;

pub use bottleneck::{
    bottleneck_distance, candidate_thresholds, ersatz_cost, matching_within, pair_cost,
    MatchedPair, Matching, Partner,
};
pub use interleaving::{
    find_interleaving, interleaving_candidates, interleaving_distance_bruteforce,
    interleaving_search, verify_interleaving, CellMap, InterleavingCertificate, InterleavingResult,
    MAX_ENUMERATED_DIM, MAX_SAMPLE_DIM,
};
pub use matching::hopcroft_karp;
