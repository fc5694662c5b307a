//! Exact scalars and sparse matrices.

pub mod matrix;
pub mod rational;
pub mod scalar;

pub use matrix::{ExactMatrix, MatrixError, Witness};
pub use rational::{binomial, ParseRationalError, Rational};
pub use scalar::{Gaussian, ParseScalarError, Scalar};

/// Serializes a `Display + FromStr` type as a JSON string.
macro_rules! serde_as_string {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let text = String::deserialize(d)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

pub(crate) use serde_as_string;

serde_as_string!(Rational);
serde_as_string!(Scalar);
