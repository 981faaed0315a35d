//! Syntactic analysis toolkit for child-adult interaction treebanks.
//!
//! * [`conllu`]: CoNLL-U model, reader/writer, validation and repair.
//! * [`eval`]: attachment scores, exact match, tag accuracy, slices,
//!   paired t-tests and label-level error analysis.
//! * [`cxntag`]: utterance-level construction tagging.
//! * [`lint`]: detection of two known annotation inconsistencies.
//! * [`casestudy`]: age-binned construction distributions.
//! * [`baseline`]: arc-eager averaged-perceptron parser and POS tagger.

pub mod baseline;
pub mod casestudy;
pub mod conllu;
pub mod cxntag;
pub mod eval;
pub mod lint;
