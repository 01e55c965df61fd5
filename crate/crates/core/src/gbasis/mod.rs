pub mod buchberger;
pub mod ops;
pub mod reduce;

pub use buchberger::{buchberger, buchberger_truncated, interreduce, BuchbergerOutput, Grading};
pub use ops::*;
pub use reduce::{divide, reduce_full, reduce_top, Reducer};
