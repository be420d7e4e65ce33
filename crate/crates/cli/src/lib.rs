//! Command-line front end and HTTP session service.

pub mod api;
pub mod cli;
pub mod service;
pub mod session;
