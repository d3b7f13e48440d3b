//! Steinberg algebras of finite discrete groupoids, Leavitt path algebras of
//! finite graphs, and checks relating centralisers, isotropy and the diagonal.

pub mod bridge;
pub mod error;
pub mod families;
pub mod graph;
pub mod groupoid;
pub mod linalg;
pub mod lpa;
pub mod parse;
pub mod scalars;
pub mod suite;

pub use error::{Error, Result};
pub use graph::{Graph, Path};
pub use groupoid::{AlgebraElement, FiniteGroupoid, UnitSubset};
pub use lpa::{Lpa, LpaElement, Monomial};
pub use scalars::{RingSpec, Scalar};
