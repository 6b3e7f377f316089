//! Weak-topology diagnostics on Hadamard (complete CAT(0)) model spaces.
//!
//! The crate works with four concrete spaces: Euclidean `R^n`, the spike
//! (intervals `[0, n]` glued at 0), the book of right triangles glued along
//! a leg, and the hyperbolic upper half-plane. On top of exact distances
//! and geodesics it provides closest-point projections onto geodesics,
//! elementary sets `U_x(y) = {z : P_[x,y] z != y}`, finite-prefix
//! weak-convergence reports, pointwise checks of the set identities that
//! relate elementary sets to projections and convex sets, and randomized
//! witness search for the projection properties (N), (Q4) and (Q̄4).
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix it to double precision.

pub mod error;
pub mod geometry;
pub mod projection;
pub mod properties;
pub mod sampling;
pub mod scalar;
pub mod spaces;
pub mod topology;

pub use error::{Error, Result};
pub use geometry::{
    check_cn_inequality, distance, geodesic_point, CnReport, Geodesic, Point, Space, SpaceKind,
    ToleranceConfig,
};
pub use projection::{project_to_ball, project_to_geodesic, ProjectionResult};
pub use properties::{
    book_property_n_witness, book_witness_tw_ne_tg, check_fingerprint_separation, check_property_n,
    check_q4, fingerprint, search_counterexamples, Fingerprint, Q4Outcome, SearchProperty,
    SeparationRecord, Witness, WitnessKind,
};
pub use scalar::Scalar;
pub use spaces::{make_book, make_euclidean, make_halfplane, make_spike, ConvexBody, ConvexBodyKind};
pub use topology::{
    ball_net, check_convex_complement, check_preimage_identity, cone_cover_certificate,
    halfspace_formula_check, in_elementary_set, weak_convergence_report, ConeCoverCertificate,
    ConvergenceReport, CoverOptions, ElementaryQuery, HalfspaceAgreement, Membership, ProbeSet,
    Verdict,
};

pub type Space64 = Space<f64>;
pub type Point64 = Point<f64>;
pub type Geodesic64 = Geodesic<f64>;
pub type Tolerances64 = ToleranceConfig<f64>;
pub type ConvexBody64 = ConvexBody<f64>;
pub type Projection64 = ProjectionResult<f64>;
pub type ConvergenceReport64 = ConvergenceReport<f64>;
pub type Witness64 = Witness<f64>;

pub type Space32 = Space<f32>;
pub type Point32 = Point<f32>;
pub type Tolerances32 = ToleranceConfig<f32>;
