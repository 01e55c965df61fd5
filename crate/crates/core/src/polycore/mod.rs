pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;

pub use monomial::{Monomial, MonomialOrder, MAX_VARS};
pub use parse::{parse_list, parse_poly};
pub use poly::{Poly, Term};
pub use ring::{Ring, VarKind};
