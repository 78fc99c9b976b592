//! Problem-file parsing, canonical JSON emission of traces and
//! certificates, SVG wall diagrams, and key=value configuration backing
//! the `mukai-walls` binary.

pub mod config;
pub mod json;
pub mod problem;
pub mod svg;
pub mod tracejson;
