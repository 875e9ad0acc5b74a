use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumCast};

/// Floating-point scalar used by the analytic bounds and the run-length
/// model: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumCast + Debug + Display + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("literal fits the scalar type")
    }

    fn of_u64(v: u64) -> Self {
        <Self as NumCast>::from(v).expect("integer converts to float")
    }
}

impl Real for f32 {}
impl Real for f64 {}
