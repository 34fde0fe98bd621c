//! Command-line front end: argument parsing, JSON documents and the result
//! cache.

pub mod cache;
pub mod commands;
pub mod document;
