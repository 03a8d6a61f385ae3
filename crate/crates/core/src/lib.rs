#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod expr;
pub mod genbundle;
pub mod geometry;
pub mod lifts;
pub mod linalg;
pub mod manifest;
pub mod norden;
pub mod report;
pub mod run;
pub mod sampling;
