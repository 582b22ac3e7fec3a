//! Leavitt path algebras of finite graphs: exact normal forms, graph
//! structure (hereditary saturated sets, quotient graphs, maximal tails) and
//! deciders for graded direct-finiteness, graded Σ-V, Σ-V and bounded index
//! of nilpotence, with checkable witnesses and graded matrix realizations.

pub mod cli;
pub mod corpus;
pub mod decision;
pub mod element;
pub mod error;
pub mod field;
pub mod graph;
pub mod parallel;
pub mod realization;
pub mod structure;

pub use element::{Algebra, Element, Monomial, RawExpr, Symbol};
pub use error::{LpaError, ParseError, Result};
pub use field::{Coeff, Field};
pub use graph::{Cycle, Edge, EdgeRef, Graph, Multiplicity, Path, VertexId};
