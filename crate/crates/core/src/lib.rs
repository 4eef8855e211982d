//! Generalized Clausen identities: exact and multiprecision evaluation of the
//! univariate and bivariate hypergeometric series involved, the Euler-operator
//! algebra behind their differential equations, and an identity catalog with
//! a verification harness.

pub mod exactnum;
pub mod hyperseries;
pub mod idbook;
pub mod kdf;
pub mod thetaops;

pub use exactnum::{APComplex, ExactRational, ParamValue};
