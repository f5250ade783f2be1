//! Shared inputs for the benchmarks.

use std::sync::Arc;

use dbf_core::constructions::{lin_function, trace_function};
use dbf_core::{Field, FunctionTable};

pub fn field(p: u32, m: u32, n: u32) -> Arc<Field> {
    Arc::new(Field::build(p, m, n, None).expect("small field"))
}

/// Difference balanced inputs of increasing size.
pub fn inputs() -> Vec<(&'static str, FunctionTable)> {
    vec![
        ("trace_3_3", trace_function(&field(3, 1, 3))),
        ("trace_9_2", trace_function(&field(3, 2, 2))),
        ("lin_3_5", lin_function(&field(3, 1, 5)).expect("odd n")),
    ]
}
