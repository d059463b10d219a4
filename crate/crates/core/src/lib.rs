//! Random covers of the modular surface given by pairs of permutations
//! `(sigma, tau)` on `6n` points: word evaluation, labeled-graph
//! homomorphisms, exact expectations of fixed-point counts, and the
//! topology of the associated punctured surface.

pub mod error;
pub mod expectation;
pub mod graph;
pub mod harness;
pub mod modular;
pub mod outputs;
pub mod perm;
pub mod surface;

pub use error::{GraphError, HarnessError, PermError, SurfaceError, WordError};
pub use expectation::{Rational, TruncatedSeries};
pub use graph::{Completion, CycleStructure, Label, XLabeledGraph};
pub use modular::{ConjugacyClass, F2Word, ModularWord};
pub use outputs::OutputDatum;
pub use perm::{BelyiSample, Permutation};
pub use surface::{OrientedCubicGraph, SurfaceTopology};
