//! The exceptional-set constructions: enumeration of algebraic numbers,
//! the entire series `h`, the radius-adjusting series `g`, their sum `f`,
//! bounded-complexity non-algebraicity certificates, and the
//! interpolation loop for prescribed values.

pub mod enumerate;
pub mod theorem1;
pub mod certificate;
pub mod theorem3;

pub use enumerate::{AlgebraicEnumerator, PolyEnumerator};
pub use theorem1::{
    block_weights, build_f, build_g, build_h, compute_an, compute_xn, is_integral_coeff, verify_exceptional_value, Block, BlockSeries,
    ExceptionalSetSpec, SetMode, Theorem1Config, Theorem1State,
};
pub use certificate::{certify_not_algebraic, CertificateStep, ClosingGap, DistanceBound, NonAlgebraicityCertificate, Verdict};
pub use theorem3::{canonical_points, check_target, Membership, TargetSet, Theorem3State};
