//! Exact arithmetic for zeta objects over A = F_q[theta].

pub mod error;
pub mod exec;
pub mod fields;
pub mod json;
pub mod mpoly;
pub mod mzv;
pub mod oracle;
pub mod padic;
pub mod polyring;
pub mod powersum;
pub mod ring;
pub mod seriesinf;
pub mod vadic;
pub mod zeta;

pub use error::{Error, Result};
pub use exec::Parallelism;
