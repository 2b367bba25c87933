//! Command-line driver and JSON session server.

pub mod commands;
pub mod serve;
pub mod views;
