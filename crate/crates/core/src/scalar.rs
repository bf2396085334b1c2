//! Floating-point scalar abstraction for the dense oracle.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar type backing complex amplitudes: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
