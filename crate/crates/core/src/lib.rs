//! A desk-scale toolkit for locally compact wreath products: exact
//! arithmetic in semirestricted wreath products and their embedding
//! classifiers, wall metrics and their kernels, commensurating-action
//! length functions, polycompact/bounded radical formulas, Grigorchuk-group
//! growth enumeration, and wreathed Coxeter presentations.
//!
//! Everything is windowed and exact: infinite objects are represented by
//! finite windows plus tail descriptors, and operations fail loudly
//! (window escape, undetermined tail, missing oracle) rather than
//! truncating silently. The [`suite`] module packages the headline
//! properties as a runnable acceptance gate.

// index loops mirror the matrix notation throughout
#![allow(clippy::needless_range_loop)]

pub mod cayley;
pub mod commensurate;
pub mod coxeter;
pub mod grigorchuk;
pub mod growth;
pub mod groups;
pub mod radicals;
pub mod suite;
pub mod walls;
pub mod wreath;
