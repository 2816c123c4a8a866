//! Algebraic numbers over `Q` and their embeddings into `Q̄_p`.

pub mod closure;
pub mod height;
pub mod liouville;
pub mod number;
pub mod numfield;
pub mod qpfactor;

pub use height::{height_bound, height_of_element, height_of_rational, HeightOp, HeightRecord};
pub use liouville::{cmp_distance_conjugate, cmp_distance_general, liouville_bound_conjugates, liouville_bound_general, GeneralBound};
pub use numfield::{minpoly_of_element, rational_minpoly, NumberFieldElement};
pub use qpfactor::{qp_factorization, QpFactor, QpFactorization};
pub use number::{abs_of_algebraic, AlgebraicNumber, DEFAULT_PRECISION};
pub use closure::{is_conjugation_closed, is_qp_conjugation_closed, ClosureReport, ClosureWitness, SetMember};
