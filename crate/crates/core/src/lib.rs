//! Exact computation of the motivic integrals `G_{k,m}(t, L)` over plane
//! arcs with fixed tangency orders, their λ-deformations, and machine
//! verification of the identities they satisfy.
//!
//! The algebra kernel ([`LaurentPoly`], [`FactoredRational`]) is generic over
//! the coefficient ring; the integral modules work over the integers through
//! the [`Poly`] and [`Rational`] aliases.

pub mod deformed;
pub mod error;
pub mod factor;
pub mod format;
pub mod identity;
pub mod milnor;
pub mod monomial;
pub mod numtheory;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod subst;
pub mod var;
pub mod verify;

pub use error::Error;
pub use factor::CanonFactor;
pub use identity::{rat_eq, rat_eq_exact, rat_eq_modp, EqMode};
pub use monomial::Monomial;
pub use poly::LaurentPoly;
pub use rational::FactoredRational;
pub use scalar::{Coefficient, Field, Lift, ModP};
pub use subst::{Image, Substitution};
pub use var::VarId;

/// Integer coefficients, used for every exact value.
pub type Coeff = num_bigint::BigInt;
pub type Poly = LaurentPoly<Coeff>;
pub type Rational = FactoredRational<Coeff>;
/// Substitution acting on [`Rational`] values.
pub type Subst = Substitution<Coeff>;
