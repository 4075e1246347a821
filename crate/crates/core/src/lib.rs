//! A small dependent type checker for intensional Martin-Löf type theory
//! (Π, universes, identity types with J), with a bundled corpus of
//! higher-path lemmas culminating in Eckmann-Hilton and the syllepsis.
//!
//! Pipeline: [`surface`] parses text, [`elab`] turns surface trees into core
//! [`syntax`] terms, and [`kernel`] re-checks every core declaration.

pub mod kernel;
pub mod pretty;
pub mod surface;
pub mod syntax;
pub mod elab;
pub mod session;
pub mod corpus;
pub mod driver;
