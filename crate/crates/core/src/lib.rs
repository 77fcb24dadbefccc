//! Exact torus-equivariant K-theory of flag varieties `G/B` and `G/P`.
//!
//! Classes live in the fixed-point (GKM) model: a class is its vector of
//! restrictions to the `T`-fixed points `wB`, each an element of
//! `R(T) = ℤ[Λ]`. On top of that the crate computes Schubert-basis structure
//! constants and checks their sign-alternation in the variables
//! `e^{−α_i} − 1`.

pub mod cli;
pub mod error;
pub mod kring;
pub mod laurent;
pub mod oracle;
pub mod positivity;
pub mod root_system;
pub mod weyl_group;

pub use error::{Error, Result};
pub use kring::{BasisCache, BasisTag, Expansion, KClass, KRing, Parabolic, XiVariant};
pub use laurent::{LaurentPoly, YPolynomial, YVariables};
pub use root_system::{CartanType, RootSystem, Weight};
pub use weyl_group::{ElementId, WeylElement, WeylGroup};
