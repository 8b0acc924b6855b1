//! Library half of the command-line front end: the expression language.
//! The `qhopf` binary wires these pieces to the toolkit's operations.

pub mod expr;
