//! Pseudoline arrangements with many triple points.
//!
//! The combinatorial half ([`sweep`], [`canon`], [`arrangement`]) enumerates
//! wiring diagrams with a prescribed number of triple points and sorts them
//! into isomorphism classes. The geometric half ([`geometry`], [`boroczky`],
//! [`realize`]) is generic over the float type and asks which classes can be
//! drawn with straight lines.
//!
//! ```
//! use orchard::{boroczky, HomLine64};
//!
//! let lines: Vec<HomLine64> = boroczky::generate(12).unwrap();
//! let (profile, _) = boroczky::intersection_profile(&lines, 1e-9).unwrap();
//! assert_eq!((profile.t(2), profile.t(3)), (9, 19));
//! ```

pub mod arrangement;
pub mod boroczky;
pub mod canon;
pub mod catalog;
pub mod error;
pub mod geometry;
pub mod io;
pub mod pairs;
pub mod pipeline;
pub mod realize;
pub mod scalar;
pub mod svg;
pub mod sweep;

pub use arrangement::{FaceVector, Label, Permutation, Profile, Triple, TripleSystem};
pub use canon::{are_isomorphic, canonical_key, CanonicalKey};
pub use error::{Error, Result};
pub use geometry::{HomLine, HomPoint};
pub use realize::{realize, Verdict};
pub use scalar::Scalar;
pub use sweep::{StartPairing, SweepWord};

pub type HomPoint64 = HomPoint<f64>;
pub type HomLine64 = HomLine<f64>;
pub type HomPoint32 = HomPoint<f32>;
pub type HomLine32 = HomLine<f32>;
