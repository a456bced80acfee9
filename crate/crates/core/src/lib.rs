//! Symbolic-numeric toolkit for the scaling method on rigid pseudoconvex
//! model domains of finite type with Levi corank at most one.
//!
//! The pipeline: represent a rigid domain ρ = Re z_n + F(z', z̄') exactly
//! ([`domain`]), normalize coordinates at a boundary point into the
//! coefficient normal form ([`normalize`]), rescale anisotropically at a
//! given height ([`scaling`]), then follow interior sequences to the limit
//! model polynomial and classify it ([`limits`]).

pub mod domain;
pub mod error;
pub mod hermitian;
pub mod limits;
pub mod normalize;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod scaling;

pub use domain::{egg_domain, DomainSpec, LeviData, NormalFormReport, TypeReport};
pub use error::{Error, Result};
pub use limits::{
    classify_model, domain_convergence_probe, generate_sequence, limit_polynomial,
    match_top_homogeneous, model_grid, model_rho_value, pipeline_type, scaling_at, CoeffEntry,
    LimitReport, MatchReport, ModelClass, ProbePoint, ProbeReport, SequenceKind, SequenceSpec,
};
pub use normalize::{boundary_point_of, lift_to_boundary, normalize_at, NormalizationResult};
pub use hermitian::{hermitian_eigen, HermitianEigen};
pub use parse::{parse_point, parse_poly, parse_rational, parse_real_poly};
pub use poly::{HoloMap, Multidegree, Poly, RealPoly, DEFAULT_DEGREE_CAP};
pub use scalar::{ComplexScalar, RationalRoot};
pub use scaling::{
    check_q_estimate, coefficient_maxima, dilate_point, inverse_dilation_poly, rescaled_rho,
    rescaled_rho_f64, tau, tau_exact, ActiveIndex, CoefficientMaxima, QEstimateReport, QVerdict,
    ScalingData,
};

pub use num_complex::Complex64;
pub use num_rational::BigRational;
