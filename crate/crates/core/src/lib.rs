//! Regular B2 crystal graphs: the crossing model, the local axioms K0-K5,
//! sky views and canonical coordinates.

pub mod cli;
pub mod coords;
pub mod crystal;
pub mod graph;
pub mod io;
pub mod model;
pub mod sky;
pub mod verify;

pub use crystal::{generate, generate_decorated, CrystalGraph, DecoratedCrystal};
pub use graph::{Color, ColoredGraph, Edge, EdgeLabel};
pub use model::{Bounds, Configuration};
pub use verify::{verify_all, AxiomReport, Rule, VerifyOptions};
