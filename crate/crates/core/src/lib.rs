//! Array-based quasi-cyclic LDPC block codes and the time-invariant LDPC
//! convolutional codes obtained by unwrapping them: construction, encoding,
//! sum-product decoding, AWGN simulation, distance estimation, union bounds
//! and density-evolution thresholds.

pub mod channel;
pub mod codec;
pub mod construction;
pub mod density;
pub mod error;
pub mod gf2;
pub mod spectrum;
pub mod unwrap;

pub use error::{Error, Result};
