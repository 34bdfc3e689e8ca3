//! Scalar substrate: exact rationals, Laurent polynomials in the uniformizing
//! variable, truncated Taylor jets and Laurent series at infinity.

mod dd;
mod jet;
mod laurent;
mod scalar;
mod series;

pub use dd::Dd;
pub use jet::Jet;
pub use laurent::{
    compose_poly, laurent_zero_coeff, substitute_affine, substitute_scaled, substitute_symmetric,
    substitute_uniformizer, LaurentPoly, Uniformizer,
};
pub use num_rational::BigRational as Rational;
pub use scalar::{
    binomial, binomial_f64, close, double_factorial, double_factorial_f64, factorial, rational_to_f64,
    RealScalar, Scalar,
};
pub use series::{inv_sqrt_r_series, pole_factor_at_infinity, residue_at_infinity, LaurentSeriesAtInfinity};
