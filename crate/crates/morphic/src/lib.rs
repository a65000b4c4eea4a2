//! File formats, report rendering and the command line for `morphic-core`.

pub mod cli;
pub mod format;
pub mod json;
pub mod text;
