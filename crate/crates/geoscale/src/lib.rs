//! Geodesic optimization for scaling problems of group actions.
//!
//! A group `G` is a product of `GL(n)`, `SL(n)` and (special) torus factors
//! acting linearly on `C^m`. The crate evaluates the Kempf–Ness function
//! `F_v(g) = log ‖π(g)v‖` and its geodesic gradient (the moment map), and
//! runs first-order (gradient descent) and second-order (trust-region)
//! methods for scaling, capacity, null-cone and moment-polytope problems.
//! The weight norm and weight margin that govern convergence are computed in
//! [`margins`].
//!
//! ```
//! use geoscale::prelude::*;
//!
//! let rep = operator_scaling_rep(2, 1, GroupKind::Sl).unwrap();
//! let v = CVector::from_fn(4, |i, _| c64(if i == 0 || i == 3 { 1.0 } else { 0.0 }, 0.0));
//! let mu = moment_map(rep.as_ref(), &v).unwrap();
//! assert!(mu.norm() < 1e-12);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod first_order;
pub mod geometry;
pub mod group;
pub mod gt;
pub mod margins;
pub mod numkernels;
pub mod reps;
pub mod sample;
pub mod second_order;

pub use error::{Error, Result};

/// Complex scalar type used throughout.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector (coordinates in a representation's working basis).
pub type CVector = nalgebra::DVector<C64>;

/// Shorthand constructor for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub mod prelude {
    pub use crate::first_order::{
        first_order_minimize, iteration_budget_scaling, p_scaling_solve,
        polytope_membership_epsilon, randomized_p_scaling, scaling_solve, FirstOrderConfig,
        ScalingReport, SolveStatus,
    };
    pub use crate::geometry::{
        duality_bounds, gradient_flow, hessian, kempf_ness, moment_map, p_shifted_gradient,
        regularized_gradient_hessian, DualityReport, FlowTrace, HessianForm, MomentValue,
        TargetSpectrum,
    };
    pub use crate::group::{Block, FactorKind, GroupElement, GroupKind, GroupSpec, LieDirection};
    pub use crate::gt::{enumerate_patterns, gt_orthonormal_rep, GtIrrep, GtPattern, HighestWeight};
    pub use crate::margins::{
        margin_lower_bound, weight_margin_exact, weight_norm, MarginKind, MarginMethod,
        MarginResult,
    };
    pub use crate::reps::{
        conjugation_rep, direct_sum, matrix_scaling_rep, operator_scaling_rep, quiver_rep,
        restrict_to_sl, tensor_rep, torus_rep, Rep, Representation, Weight,
    };
    pub use crate::second_order::{
        norm_minimize, second_order_budget, second_order_minimize, NewtonReport,
        SecondOrderConfig,
    };
    pub use crate::{c64, CMatrix, CVector, Error, Result, C64};
}
