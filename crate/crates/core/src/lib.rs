//! Exact persistence modules and barcodes for Reeb spectra of contact forms.
//!
//! The crate works entirely in exact rationals extended by `±inf`:
//!
//! - [`persistence`]: spectra, bars, barcodes, sampled modules over GF(2),
//!   interval decomposition and the canonical module of a barcode.
//! - [`distance`]: bottleneck distance by threshold search and bipartite
//!   matching, plus an exhaustive interleaving search for small modules.
//! - [`ellipsoid`]: closed-form barcodes of ellipsoid Reeb flows with their
//!   Conley-Zehnder grading and long-gap scans.
//! - [`invariants`]: spectral invariants, boundary depth, covering numbers and
//!   translated-point lower bounds computed from a barcode.

pub mod cli;
pub mod distance;
pub mod ellipsoid;
pub mod error;
pub mod gf2;
pub mod invariants;
pub mod io;
pub mod oracle;
pub mod persistence;
pub mod random;
pub mod scalar;
pub mod suite;
pub mod svg;

pub use error::{Error, Result};
pub use persistence::{Bar, Barcode, Parity, SampledModule, Spectrum};
pub use scalar::{Rational, Scalar};
