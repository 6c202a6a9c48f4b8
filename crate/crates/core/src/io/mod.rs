//! Persistence, export and reporting.

pub mod cache;
pub mod export;
pub mod report;
