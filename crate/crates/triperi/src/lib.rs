//! File formats, reports and the command-line driver for `triperi-core`.
//!
//! Spaces are read from `fms 1` files and maps from `fmap 1` files. The
//! perimeter-ratio scan runs on a thread pool sized by `TRIPERI_THREADS`.

pub mod cli;
pub mod fmap;
pub mod fms;
pub mod parallel;
pub mod report;

pub use cli::{run, Outcome};
pub use fmap::{parse_fmap, write_fmap};
pub use fms::{load_fms, parse_fms, write_fms, FormatError};
