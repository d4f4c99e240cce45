pub mod charring;
pub mod convolution;
pub mod dsred;
pub mod error;
pub mod fle;
pub mod lattice;
pub mod levels;
pub mod linalg;
pub mod poly;
pub mod rootdata;
pub mod scalar;
pub mod spectralflow;

pub use error::{Error, Result};
pub use poly::Q;
pub use scalar::Scalar;
