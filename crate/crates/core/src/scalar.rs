//! Coefficient rings for cyclotomic integers.
//!
//! All ring arithmetic is generic over [`Coeff`]. `BigInt` is exact for every
//! input; the fixed-width implementations are faster and exact as long as the
//! intermediate values fit (they panic on overflow in debug builds).

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, NumAssignRef, Signed, ToPrimitive};

pub trait Coeff:
    Clone
    + Debug
    + Display
    + Eq
    + Hash
    + Integer
    + Signed
    + NumAssignRef
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);

    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self);

    fn from_int(v: i64) -> Self;
}

macro_rules! impl_coeff_prim {
    ($($t:ty),*) => {$(
        impl Coeff for $t {
            #[inline]
            fn add_mul(&mut self, a: &Self, b: &Self) {
                *self += *a * *b;
            }

            #[inline]
            fn sub_mul(&mut self, a: &Self, b: &Self) {
                *self -= *a * *b;
            }

            #[inline]
            fn from_int(v: i64) -> Self {
                v as $t
            }
        }
    )*};
}

impl_coeff_prim!(i64, i128);

impl Coeff for BigInt {
    #[inline]
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    #[inline]
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    #[inline]
    fn from_int(v: i64) -> Self {
        BigInt::from(v)
    }
}
