//! Exact dimension computations for degree-`d` pieces of ideals of schemes
//! in `P^n` made of generic lines, one fat point, simple points and
//! sundials.
//!
//! * [`combinatorics`]: closed-form expected and predicted dimensions.
//! * [`scheme`]: coordinate realizations over a prime field.
//! * [`linear_system`]: condition matrices, ranks and the dimension oracle.
//! * [`castelnuovo`]: residual/trace splitting and induction-step replays.
//! * [`cli`]: the `hilbert-lines` command surface.

pub mod castelnuovo;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod field;
pub mod linear_system;
pub mod scheme;

pub use combinatorics::{
    binomial, cone_dim, er_params, expected_dim, hh_params, param_inequalities, predicted_dim,
    CaseTag, ErParams, HhParams, Instance, ParamTableRow, Prediction,
};
pub use error::{Error, Result};
pub use field::{PrimeField, DEFAULT_PRIME};
pub use linear_system::{bidegree_dim, ideal_dim, instance_dim, DimResult};
pub use scheme::{build_config, build_instance, Component, FieldSpec, Recipe, SchemeConfig};
