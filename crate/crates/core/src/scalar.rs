use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar used by the information measures and the map dynamics: f32 or f64.
pub trait Scalar:
    Float + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + Serialize + DeserializeOwned + 'static
{
    /// Tolerance for "weights sum to one". Never tighter than a few ulps per term.
    fn sum_tolerance(terms: usize) -> Self {
        let ulps = Self::epsilon() * Self::lit(4.0) * Self::lit(terms.max(1) as f64);
        Self::lit(1e-12).max(ulps)
    }

    /// Converts an `f64` literal; every `Scalar` can represent (or round) any f64.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal fits scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
