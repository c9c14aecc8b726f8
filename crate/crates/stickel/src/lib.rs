//! Exact computation of equivariant L-functions, Stickelberger elements,
//! augmentation filtrations and regulators over F_q(t) at finite layers.

pub mod abelian;
pub mod augfilt;
pub mod classfield;
pub mod cycint;
pub mod error;
pub mod fqpoly;
pub mod groupring;
pub mod harness;
pub mod lseries;
pub mod intmat;
pub mod oracle;
pub mod regulators;
pub mod units;

pub use error::{Error, Result};
