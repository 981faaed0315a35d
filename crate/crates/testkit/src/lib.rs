//! Synthetic treebanks, corrupted trees and hand-authored fixtures shared
//! by the cait test suites.

mod build;
mod cds;
mod fixtures;
mod noise;
mod written;

pub use build::parse_compact;
pub use cds::cds_treebank;
pub use fixtures::*;
pub use noise::{fuzz_sentence, malformed, perturb};
pub use written::written_treebank;
