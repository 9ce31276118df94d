//! Exact computer algebra for deformed commutators on module-algebras of
//! quasi-triangular Hopf algebras.
//!
//! The crate is organised bottom-up:
//!
//! - [`cyclotomic`]: the scalar field ℚ(q), q a primitive N-th root of unity;
//! - [`tensor`]: elements, tensor powers, linear maps, algebras;
//! - [`rewrite`]: normal forms for algebras given by ordering relations;
//! - [`hopf`]: Hopf data, quasi-triangular structures and their axioms;
//! - [`uqsl2`]: the reduced quantum enveloping algebra and its R-matrix;
//! - [`qplane`]: the reduced quantum plane, its derivative extension and the
//!   module-algebra structure;
//! - [`braided`]: the braiding χ, the q-commutator and every identity checker;
//! - [`toy`]: triangular examples over the cyclic group algebra;
//! - [`fixtures`]: reference braiding and commutator values at N = 3;
//! - [`report`]: structured pass/fail reports shared by all checkers.

pub mod braided;
pub mod cyclotomic;
pub mod error;
pub mod fixtures;
pub mod hopf;
pub mod linalg;
pub mod qplane;
pub mod report;
pub mod rewrite;
pub mod tensor;
pub mod toy;
pub mod uqsl2;

pub use braided::{Braiding, QLieExport};
pub use cyclotomic::{field, CyclotomicField, Rational, Scalar, ScalarJson};
pub use error::{Error, Result};
pub use hopf::{HopfData, QTStructure};
pub use qplane::{ExtendedPlane, ModuleAlgebra};
pub use report::{Counterexample, Report, Status};
pub use tensor::{map_tensor, tensor, Algebra, Basis, Element, Key, LinearMap};
