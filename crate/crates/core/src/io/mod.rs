//! File formats, graph generation and dataset construction.

mod cache;
mod dataset;
mod delaunay;
mod mtx;
mod text;

pub use cache::{load_graph, read_graph_cache, save_graph, write_graph_cache};
pub use dataset::{build_training_dataset, read_matrix_graph, Dataset, DatasetSource, Provenance};
pub use delaunay::{delaunay_graph, delaunay_triangles, generate_delaunay, random_points};
pub use mtx::{
    parse_matrix_market, read_matrix_market, save_matrix_market, write_matrix_market, Field,
    MatrixMarket, Symmetry,
};
pub use text::{
    format_bisection, format_permutation, format_separator, parse_bisection, parse_permutation,
    parse_separator,
};
