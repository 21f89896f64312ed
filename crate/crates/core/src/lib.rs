//! Exact arithmetic for building points on elliptic curves `y^2 = x^3 + Ax + B`
//! over cyclic extensions of an imaginary quadratic field, and certifying
//! that the curve gains rank there.
//!
//! Layers, bottom up: quadratic fields and their residue fields
//! ([`numfield`]), polynomials and extension rings ([`poly`], [`ext`],
//! [`polyalg`]), the group law ([`elliptic`]), dihedral actions on pairs of
//! points ([`geometry`]), the parameter families ([`families`]), splitting
//! behaviour at primes ([`search`]) and end-to-end certificates
//! ([`gaincert`]).

pub mod elliptic;
pub mod error;
pub mod ext;
pub mod families;
pub mod field;
pub mod gaincert;
pub mod geometry;
pub mod numfield;
pub mod poly;
pub mod polyalg;
pub mod reduction;
pub mod rootfind;
pub mod search;
pub mod selftest;

pub use elliptic::{Curve, CurvePoint};
pub use error::{Error, Result};
pub use ext::{ExtElem, ExtRing};
pub use field::Field;
pub use gaincert::{make_certificate, verify_certificate, RankGainCertificate, Verdicts};
pub use numfield::{PrimeIdeal, PrimeKind, QuadElem, QuadFieldDesc, ResidueElem, ResidueField};
pub use poly::Poly;
pub use search::{Behavior, SplitConstraint, SplitVerdict};
