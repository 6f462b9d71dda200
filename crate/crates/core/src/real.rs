//! The scalar abstraction behind the global precision switch.
//!
//! Everything numeric is generic over [`Real`], instantiated as `f32`
//! (training default) or `f64` (gradient-check headroom).

use core::fmt::{Debug, Display};
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("vdcnn-core needs either the `std` or the `libm` feature for math routines");

/// A real scalar, `f32` or `f64`.
pub trait Real:
    Copy
    + PartialOrd
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    /// Byte width of the on-disk little-endian encoding (4 or 8).
    const BYTE_WIDTH: usize;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn from_usize(v: usize) -> Self {
        Self::from_f64(v as f64)
    }

    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn abs(self) -> Self;
    fn is_finite(self) -> bool;
    fn neg_infinity() -> Self;

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Little-endian IEEE-754 bytes, appended to `out`.
    fn write_le(self, out: &mut alloc::vec::Vec<u8>);
    /// Decode from exactly `BYTE_WIDTH` little-endian bytes.
    fn read_le(bytes: &[u8]) -> Self;
}

macro_rules! impl_real {
    ($t:ty, $bytes:expr) => {
        impl Real for $t {
            const ZERO: Self = 0.0;
            const ONE: Self = 1.0;
            const BYTE_WIDTH: usize = $bytes;

            #[inline]
            fn from_f64(v: f64) -> Self {
                v as $t
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn sqrt(self) -> Self {
                #[cfg(feature = "std")]
                {
                    <$t>::sqrt(self)
                }
                #[cfg(not(feature = "std"))]
                {
                    libm::Libm::<$t>::sqrt(self)
                }
            }

            #[inline]
            fn exp(self) -> Self {
                #[cfg(feature = "std")]
                {
                    <$t>::exp(self)
                }
                #[cfg(not(feature = "std"))]
                {
                    libm::Libm::<$t>::exp(self)
                }
            }

            #[inline]
            fn ln(self) -> Self {
                #[cfg(feature = "std")]
                {
                    <$t>::ln(self)
                }
                #[cfg(not(feature = "std"))]
                {
                    libm::Libm::<$t>::log(self)
                }
            }

            #[inline]
            fn abs(self) -> Self {
                <$t>::abs(self)
            }

            #[inline]
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }

            #[inline]
            fn neg_infinity() -> Self {
                <$t>::NEG_INFINITY
            }

            fn write_le(self, out: &mut alloc::vec::Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }

            fn read_le(bytes: &[u8]) -> Self {
                let mut buf = [0u8; $bytes];
                buf.copy_from_slice(bytes);
                <$t>::from_le_bytes(buf)
            }
        }
    };
}

impl_real!(f32, 4);
impl_real!(f64, 8);
