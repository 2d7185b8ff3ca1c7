//! Four-terminal source-model secret-key and private-keys agreement.
//!
//! Terminal 3 observes `X3` and talks publicly; terminals 1 and 2 observe
//! `X1` and `X2` and extract a common key `K0` plus private keys `K1`, `K2`;
//! terminal 4 observes `X4` and the public message and must learn nothing.
//!
//! - [`dmms`]: the source joint, auxiliary channels and sampling.
//! - [`info`]: exact and empirical Shannon quantities in bits.
//! - [`region`]: inner and outer bounds and the Markov special cases.
//! - [`codec`]: a small-blocklength layered random-binning scheme.

pub mod codec;
pub mod dmms;
mod error;
pub mod info;
pub mod region;
mod seed;
pub mod table;

pub use dmms::{AuxChannelSet, JointPmf4};
pub use error::{EncoderFailure, Error, Result};
pub use region::{RateTriple, RegionFrontier};
pub use seed::derive_seed;
