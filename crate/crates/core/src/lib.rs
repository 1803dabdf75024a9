//! Structural hole spanner identification by pairwise-connectivity
//! minimization, with incremental maintenance of the top-k set under
//! streaming edge deletions.

pub mod bench;
pub mod cli;
pub mod connectivity;
pub mod dynamic;
pub mod graph;
pub mod greedy;
pub mod heap;
pub mod io;
pub mod oracle;

pub use connectivity::{Score, ScoreTable};
pub use dynamic::{AffectedSet, SpannerState, TrackError, UpdateEvent};
pub use graph::{ComponentIndex, GraphError, NodeId, UndirectedGraph};
pub use greedy::{top_k_greedy, Selection, SpannerError, SpannerSet};
