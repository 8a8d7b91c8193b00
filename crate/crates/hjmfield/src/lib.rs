//! Forward-rate field toolkit: simulation and maximum-likelihood inference
//! for a discrete-time Heath–Jarrow–Morton model whose curves are driven by
//! a doubly geometric spatial autoregressive field.
//!
//! The crate covers the full pipeline:
//! - [`noise`] / [`surface`]: reproducible innovation fields and
//!   no-arbitrage surface simulation with closed-form cross-checks;
//! - [`market`]: bond prices, the stochastic discount factor and a Monte
//!   Carlo martingale verification;
//! - [`likelihood`]: exact log-likelihood, analytic gradient/Hessian and
//!   the exact linear solve for the risk parameters;
//! - [`estimation`]: profile-likelihood MLE over a compact box;
//! - [`asymptotics`]: Fisher information and the asymptotic covariance of
//!   the estimators;
//! - [`experiments`]: Monte Carlo harnesses checking consistency and the
//!   mixed-rate central limit behaviour of the estimators.

pub mod asymptotics;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod likelihood;
pub mod linalg;
pub mod market;
pub mod noise;
pub mod params;
pub mod series;
pub mod stats;
pub mod surface;

pub use error::{HjmError, Result};
pub use estimation::{fit, profile_objective, ConstraintBox, FitOptions, FitResult};
pub use likelihood::{
    log_likelihood, log_likelihood_grad_hess, residuals, solve_b_profile, LikelihoodEval,
    Residuals,
};
pub use noise::{generate_noise, NoiseField};
pub use params::ModelParams;
pub use surface::{closed_form_increment, closed_form_level, simulate_surface, ForwardSurface};
