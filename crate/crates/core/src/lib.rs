// Error values carry the offending big integers.
#![allow(clippy::result_large_err)]

pub mod atlas;
pub mod builtin;
pub mod cabling;
pub mod farey;
pub mod io;
pub mod render;
pub mod slope;
pub mod verify;
