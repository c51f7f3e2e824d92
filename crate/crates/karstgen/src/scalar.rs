//! Scalar abstraction for the numeric core.
//!
//! All model math is generic over [`Scalar`] so the same code runs in f64
//! (tests, finite-difference oracles) and f32 (faster training). Random
//! draws are always made in f64 and converted, which keeps the consumed
//! random stream identical across scalar types.

use rand::Rng;
use rand_distr::StandardNormal;

/// Floating-point scalar: f32 or f64.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + std::ops::AddAssign
    + std::ops::SubAssign
    + std::ops::MulAssign
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;

    /// Uniform draw in [lo, hi), taken from the f64 stream.
    fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Self {
        Self::from_f64(rng.gen_range(lo..hi))
    }

    /// Standard normal draw, taken from the f64 stream.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.sample(StandardNormal);
        Self::from_f64(z)
    }
}

impl Scalar for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}
