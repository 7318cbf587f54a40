//! Smooth projective toric fans of graph associahedra, wall
//! intersection numbers, and Fano / weak Fano classification of the
//! associated toric varieties, with two independent computation routes
//! for every decision.
//!
//! The pipeline: a finite simple graph yields its graphical building
//! set (all connected node subsets); nested sets of the building set
//! index the cones of a smooth complete fan; each codimension-1 cone
//! (wall) carries an integer a(τ) whose minimum decides Fano
//! (all a ≥ -1) and weak Fano (all a ≥ -2). The same decisions follow
//! from purely graph-theoretic criteria, and the two routes are
//! cross-validated exhaustively at small node counts.

pub mod building;
pub mod census;
pub mod classify;
pub mod fan;
pub mod graph;
pub mod report;

pub use building::{Budget, BuildingSet};
pub use classify::{classify, Classification, Method, Witness, WallReport};
pub use fan::Fan;
pub use graph::{Graph, NodeMask};
