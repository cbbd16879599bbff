//! Exact symbolic toolkit for logarithmic foliations along cuspidal-type
//! surface germs.
//!
//! The crate is layered:
//!
//! * [`rat`], [`ext`], [`poly`] — exact scalars (rationals and simple
//!   algebraic extensions) and sparse multivariate polynomials with
//!   graded-lex ordering, exact division, and substitution.
//! * [`weights`] — weighted valuations and quasi-homogeneous weight search.
//! * [`parse`] — the textual grammar for polynomials and differential forms.
//! * [`form`] — differential forms in up to three variables: exterior
//!   derivative, wedge, pullback, integrability, logarithmic tests.
//! * [`saito`] — decompositions `g*omega + h*df = f*alpha` and the free
//!   basis criterion.
//! * [`cuspidal`] — the `z^2 + phi(x)^k`-type surface families, their
//!   logarithmic generators, and the structural decomposition of forms
//!   along them.
//! * [`resolution`] — the three-step chain of toric/translation charts
//!   that untwists such a surface, with every intermediate identity
//!   verified exactly, plus the valuation criteria that decide when the
//!   transforms stay dicritical-free.
//!
//! Everything is exact rational (or exact extension) arithmetic; no floats.
//! Heavy kernels (multiplication, substitution, independent chart
//! transforms) run data-parallel under the default `parallel` feature and
//! sequentially without it, with bit-identical results.

pub mod cuspidal;
pub mod ext;
pub mod form;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod resolution;
pub mod saito;
pub mod weights;

pub use cuspidal::{
    assemble_generator, cusp_surface, cuspidal_decompose, log_pair, CuspDecomposition, CuspError,
    CuspTriple, CuspidalSpec, GPoly, SingularCurve, SingularLocus, SpecError,
};
pub use ext::{Ext, ExtModulus};
pub use form::{differential, is_logarithmic, logarithmic_quotient, DiffForm};
pub use parse::{parse_form, parse_poly, ParseError, ParseErrorKind};
pub use poly::{AlgebraError, Coeff, Monomial, Poly, QPoly, Vars};
pub use rat::Rat;
pub use resolution::{
    gs_condition, gterm_inequalities, loray_condition_2d, resolve, ChartReport, CheckStatus,
    GTermBound, Resolution, ResolutionError, Step3Report, ValuationTest, Verification,
};
pub use saito::{free_basis_check, saito_decompose, FreeBasisOutcome, SaitoError, SaitoTriple};
pub use weights::{find_quasihomogeneous_weights, weighted_valuation, WeightVector};
