//! Exact rational and dyadic arithmetic and dyadic cube addresses.

pub mod cube;
pub mod digits;
pub mod dyadic;
pub mod rational;

pub use cube::CubeAddress;
pub use digits::{digits_of_dyadic, digits_of_point, interval_of_digits, Closure};
pub use dyadic::Dyadic;
pub use rational::Rational;
