pub mod binary;
pub mod error;
pub mod fixtures;
pub mod gbasis;
pub mod hilbert;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod polycore;
pub mod rees;
pub mod report;
pub mod resolution;
pub mod scalar;
pub mod syzmatrix;
pub mod verify;

pub use error::{Error, Result};
pub use polycore::{parse_poly, Monomial, MonomialOrder, Poly, Ring};
pub use scalar::{Field, Scalar};
