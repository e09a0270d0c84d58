//! Command-line front end for the `hyperzeta` library.

pub mod expr;
pub mod render;
pub mod verify;
pub mod commands;
