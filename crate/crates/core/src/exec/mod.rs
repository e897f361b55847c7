//! Executors: the sequential reference interpreter, plus (in later
//! modules) demand-driven evaluation of the read-side graph and
//! token-driven evaluation of the write-side graph. All three agree on
//! values and on the identity of read instances, which is what the
//! equivalence checks exercise.

mod seq;
mod valuation;
mod value;

pub use seq::{
    enumerate_cells, run_sequential, trace_source_oracle, Event, Outputs, ReadKey, SourceRef,
    Trace,
};
pub use valuation::{concrete_bounds, load_valuation, Valuation};
pub use value::{eval_bool, eval_expr, IntEnv, Value};
