//! Linear-model inference: OLS with classical standard errors, AIC,
//! greedy stepwise selection, predictor standardization and the reference
//! distributions behind the p-values.

pub mod design;
pub mod dist;
pub mod ols;
pub mod report;
pub mod standardize;
pub mod stepwise;

pub use design::DesignMatrix;
pub use dist::{chi2_sf, f_sf, normal_sf, student_t_sf, student_t_two_sided};
pub use ols::{aic, ols, OlsFit, INTERCEPT};
pub use standardize::{standardize, Scaling};
pub use stepwise::{stepwise, Direction, Move, Start, StepwiseResult, TraceStep};
