//! Fundamental groups of genus-two surface bundles over the circle.
//!
//! The pipeline: a monodromy word in the five Dehn twists `D1..D5` along the
//! standard chain of curves determines an automorphism of the fiber's
//! fundamental group ([`mcg`]), which yields a finite presentation of the
//! bundle group ([`presentation`]). Generator-elimination and homology
//! machinery ([`simplify`], [`homology`]) then certify bounds on the rank of
//! that group, and [`census`] packages classification over families of
//! monodromies.
//!
//! Conventions, fixed throughout:
//!
//! * fiber generators `a1, a2, a3, a4`; the closed fiber carries the relator
//!   `[a1,a2][a4,a3] = a1 a2 a1^-1 a2^-1 a4 a3 a4^-1 a3^-1`;
//! * in a twist word the leftmost letter acts last (outermost);
//! * the bundle presentation has generators `a1..a4, t` and relators
//!   `t^-1 ai t = phi(ai)`, plus the fiber relator in the closed case.

pub mod census;
pub mod homology;
pub mod mcg;
pub mod presentation;
pub mod simplify;
pub mod words;

pub use census::{canonicalize, classify, enumerate_words, random_search, CensusRecord};
pub use homology::{homology_of, smith_normal_form, Homology, IntMatrix};
pub use mcg::{automorphism_of, family_word, surface_relator, SurfaceAutomorphism};
pub use presentation::{bundle_presentation, FiberType, Presentation};
pub use simplify::{
    certify_bundle, certify_rank, nonabelian_witness, rank_upper_bound, replay_trace,
    tietze_eliminate, Budgets, RankCertificate, RankStatus, SimplificationTrace,
};
pub use words::{GroupWord, Letter, Sym, TwistLetter, TwistWord};
