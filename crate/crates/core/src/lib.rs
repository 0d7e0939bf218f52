//! Hurwitz-cover counts for sweeping families of `k`-gonal curves and the
//! numerical invariants of the surfaces they cover.
//!
//! The pipeline runs bottom-up: [`perm`] supplies permutations of small
//! degree, [`hurwitz`] enumerates transitive transposition tuples with
//! trivial product, [`oracle`] counts the same tuples through characters of
//! the symmetric group, [`degeneration`] sorts tuples by how the last two
//! branch points collide, and [`invariants`] / [`asymptotics`] turn the
//! resulting counts into exact surface invariants.
//!
//! ```
//! use sweepfam_core::{census, evaluate, FamilyParams};
//! use sweepfam_core::exact::q;
//!
//! let c = census(3, 4, 1).unwrap();
//! let inv = evaluate(&FamilyParams::new(&c, 8, 2).unwrap()).unwrap();
//! assert_eq!(inv.k2, q(-224));
//! assert_eq!(inv.chi, q(-28));
//! ```

pub mod asymptotics;
pub mod cache;
pub mod degeneration;
pub mod error;
pub mod exact;
pub mod hurwitz;
pub mod invariants;
pub mod oracle;
pub mod perm;

pub use asymptotics::{
    delta_search, excess_sign, maximal_gonality, positivity_report, ConjecturedEstimates, CountSource,
    DeltaCertificate, DeltaOptions, ExcessSignReport, GonalityCase, Parity, PlaneCurveBase, PositivityReport,
};
pub use degeneration::{
    census, classify_node, full_twist, twist_report, DegenerationCensus, DegenerationCounts, NodeType,
};
pub use error::{Error, Result};
pub use exact::Q;
pub use hurwitz::{cover_genus, Enumerator, MonodromyTuple, TupleCensus, TupleVisitor};
pub use invariants::{audit_chain, evaluate, AuditReport, FamilyParams, SurfaceInvariants};
pub use oracle::{connected_count, disconnected_count, CharacterTable, HurwitzOracle};
pub use perm::{compose, conjugate, CycleType, Permutation, Transposition};
