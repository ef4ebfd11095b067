use core::fmt::{Debug, Display};
use core::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive};

/// Scalar type the closed-form bounds and transforms are written against.
///
/// `f64` is the type every downstream layer uses; `f32` also satisfies the
/// bound and is good enough for coarse sweeps. The trait is sealed by blanket
/// implementation: anything float-like with literal conversion qualifies.
pub trait Real:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Lifts an `f64` literal into the working scalar type.
pub(crate) fn lit<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 literal must be representable in the scalar type")
}

/// Lifts a sample-size style integer into the working scalar type.
pub(crate) fn lit_u64<R: Real>(n: u64) -> R {
    R::from_u64(n).expect("u64 literal must be representable in the scalar type")
}
