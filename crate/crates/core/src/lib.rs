//! Exact computation with automorphisms of regular rooted trees given by
//! finite wreath recursions, tuned for the cubic model groups generated by
//! `a = (x,1,1)(1 2)`, `b = (1,1,y)(2 3)` and `c_i = (c_i1, c_i2, c_i3)`.
//!
//! Conventions used throughout:
//!
//! * Right action. In a product `g·h` the left factor acts first.
//! * Letters are 0-based in the API (`0..d`); text output is 1-based.
//! * A vertex of level `n` is indexed lexicographically with the first letter
//!   most significant.
//!
//! The modules, bottom-up:
//!
//! * [`wreath_core`]: permutations, recursion machines, elements, level tables.
//! * [`permgrp`]: stabilizer chains on `d^n` points.
//! * [`conjugacy`]: level-wise conjugacy in the iterated wreath product.
//! * [`portrait`]: ramification portraits and model-generator synthesis.
//! * [`verify`]: finite-level harnesses for the structural theorems.
//! * [`cli`]: the `treemono` command line.

pub mod cli;
pub mod conjugacy;
pub mod error;
pub mod limits;
pub mod permgrp;
pub mod portrait;
pub mod rng;
pub mod verify;
pub mod wreath_core;

pub use error::{Error, Result};
