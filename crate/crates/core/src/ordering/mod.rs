//! Fill-reducing orderings and symbolic factorization.

mod minimum_degree;
mod nested_dissection;
mod pattern;
mod report;
mod symbolic;

pub use minimum_degree::minimum_degree;
pub use nested_dissection::{
    nested_dissection, order_matrix, DrlSeparator, GreedySeparator, OrderReport, SeparatorProvider,
};
pub use pattern::{Permutation, SparsePattern};
pub use report::{parse_fill_report, FillRecord, FILL_REPORT_HEADER};
pub use symbolic::{elimination_tree, symbolic_fill, FillStats};
