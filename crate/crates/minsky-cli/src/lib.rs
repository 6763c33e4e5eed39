//! Library side of the command-line workbench: the VASS lowering and the
//! argument-level entry point (kept in a library so integration tests can
//! drive both).

pub mod app;
pub mod vass;
