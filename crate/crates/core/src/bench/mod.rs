//! Shape-parameterized query families, a synthetic university graph, and a
//! k-versus-latency workload runner.

mod data;
mod shape;
mod workload;

pub use data::{generate_graph, EntityType, Predicate};
pub use shape::{
    default_zigzag_runs, generate_query, opt_count_profile, query_from_skeleton, skeleton, zigzag_variants_matching,
    ShapeKind, Skeleton, TreeShape,
};
pub use workload::{count_answers_parallel, run_workload, BenchQuery, BenchReport, BenchRow, Dataset};
