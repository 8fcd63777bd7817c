//! Upper bounds on the number of planar embeddings of minimally rigid
//! (Laman) graphs.
//!
//! The pipeline builds the symbolic Cayley–Menger matrix of a graph, picks a
//! square system of 4-point Cayley–Menger minors in the unknown (non-edge)
//! squared distances, and bounds its roots by the mixed volume of the
//! Newton polytopes. Two independent mixed-volume algorithms, a homotopy
//! root counter and an exact H1 embedding enumerator cross-check the result.

pub mod bounds;
pub mod cayley_menger;
pub mod census;
pub mod embed;
pub mod embeddable;
mod error;
pub mod graph;
pub mod henneberg;
pub mod homotopy;
pub mod hull;
pub mod laman;
pub mod mixed_volume;
pub mod poly;
pub mod polytope;
pub mod rng;
pub mod system;
pub mod verify;


pub use bounds::{analyze, table, AnalyzeOptions, BoundReport, BoundRule, TableRow};
pub use cayley_menger::{build_cm, minor_poly, CayleyMengerMatrix};
pub use census::generate_laman;
pub use embed::{enumerate_h1, sample_lengths, verify_embedding, EmbeddingSet, LengthAssignment};
pub use embeddable::{embeddable_check, EmbeddabilityReport};
pub use error::{Error, Result};
pub use graph::Graph;
pub use henneberg::{classify, henneberg_decompose, replay, GraphClass, HennebergSequence, HennebergStep};
pub use laman::{is_laman_bruteforce, is_laman_pebble};
pub use mixed_volume::{mv_inclusion_exclusion, mv_mixed_cells, MixedVolumeResult, MvMethod};

pub use poly::{Polynomial, VarKind, Variable};
pub use polytope::{newton_polytope, NewtonPolytope};
pub use system::{enumerate_minors, find_systems, is_well_constrained, MinorCandidate, MinorSystem, SizeClass};
pub use verify::count_real_embedding_roots;


