//! Exact machinery for certifying anomaly cancellation identities built from
//! theta-function q-expansions and characteristic forms of a vertical bundle.

pub mod anomaly;
pub mod chroot;
pub mod error;
pub mod genera;
pub mod modforms;
pub mod qseries;
pub mod rational;
pub mod thetanum;
pub mod witten;

pub use anomaly::{FormKind, IdentityReport, Residual, Route, Status};
pub use chroot::{GradedClass, Monomial, RootProfile, RootSeries};
pub use error::{Error, Result};
pub use genera::LVariant;
pub use modforms::{DecompositionCase, DeltaEps, ThetaKind};
pub use qseries::{Coefficient, HalfExp, HalfQSeries};
pub use rational::Rational;
pub use thetanum::{NumericCheckReport, NumericLaw};
pub use witten::{CharacterElement, DirectBuild, ThetaBundleKind, ThetaBundleSeries, ThetaSource};
