//! Deciding and verifying transitivity properties of the norm-1 group of a
//! rational quaternion algebra acting on the Bruhat-Tits tree of SL2(Qp).
//!
//! The crate has three layers:
//!
//! * exact and capped-precision arithmetic ([`exact`], [`padic`]) plus
//!   quadratic-form machinery ([`forms`]);
//! * the quaternion algebra, its explicit splitting over Q_p and the
//!   constructive density approximations ([`quat`], [`mat2`], [`split`]);
//! * the tree itself and the transitivity experiments ([`tree`], [`weyl`],
//!   [`apartment`], [`transitivity`]).

pub mod apartment;
pub mod error;
pub mod exact;
pub mod forms;
pub mod mat2;
pub mod padic;
pub mod quat;
pub mod split;
pub mod transitivity;
pub mod tree;
pub mod weyl;

pub use error::{Error, Result};
