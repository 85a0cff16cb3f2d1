//! Shared fixtures for the integration tests.

#![allow(dead_code, clippy::excessive_precision)]

pub mod oracle;
