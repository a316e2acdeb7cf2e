use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the evaluators are generic over.
///
/// Implemented for `f32` and `f64`. All tolerances and guard radii are
/// expressed in `f64` and narrowed with [`Real::cast`].
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    fn cast(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// `(sin x, cos x)` lane by lane. Each lane's result depends on that
    /// lane's input only.
    fn sincos4(x: [Self; 4]) -> ([Self; 4], [Self; 4]);
}

/// Above this magnitude the vector argument reduction loses accuracy and
/// the lane is recomputed with the scalar libm routine.
pub const VECTOR_TRIG_LIMIT_F64: f64 = 1_048_576.0;
pub const VECTOR_TRIG_LIMIT_F32: f32 = 8192.0;

impl Real for f64 {
    #[inline]
    fn sincos4(x: [f64; 4]) -> ([f64; 4], [f64; 4]) {
        let (s, c) = wide::f64x4::from(x).sin_cos();
        let (mut s, mut c) = (s.to_array(), c.to_array());
        for k in 0..4 {
            if !(x[k].abs() <= VECTOR_TRIG_LIMIT_F64) {
                (s[k], c[k]) = libm::sincos(x[k]);
            }
        }
        (s, c)
    }
}

impl Real for f32 {
    #[inline]
    fn sincos4(x: [f32; 4]) -> ([f32; 4], [f32; 4]) {
        let (s, c) = wide::f32x4::from(x).sin_cos();
        let (mut s, mut c) = (s.to_array(), c.to_array());
        for k in 0..4 {
            if !(x[k].abs() <= VECTOR_TRIG_LIMIT_F32) {
                (s[k], c[k]) = libm::sincosf(x[k]);
            }
        }
        (s, c)
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pair<T> {
    pub hi: T,
    pub lo: T,
}

impl<T: Real> Pair<T> {
    /// Exact product of two scalars.
    pub fn product(a: T, b: T) -> Self {
        let hi = a * b;
        let lo = a.mul_add(b, -hi);
        Self { hi, lo }
    }

    fn normalized(hi: T, lo: T) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }

    pub fn add_scalar(self, v: T) -> Self {
        Self::normalized(self.hi, self.lo + v)
    }

    pub fn div_scalar(self, d: T) -> Self {
        let q = self.hi / d;
        let r = (-q).mul_add(d, self.hi);
        Self::normalized(q, (r + self.lo) / d)
    }

    pub fn square(self) -> Self {
        let p = Self::product(self.hi, self.hi);
        let two = T::one() + T::one();
        Self::normalized(p.hi, p.lo + two * self.hi * self.lo)
    }
}

/// Low-order part of pi in the scalar type, so that `T::PI() + pi_lo` is
/// good to roughly twice the working precision.
pub(crate) fn pi_lo<T: Real>() -> T {
    const PI_LO_F64: f64 = 1.2246467991473532e-16;
    let narrowing = std::f64::consts::PI - T::PI().to_f64().unwrap_or(std::f64::consts::PI);
    T::cast(narrowing) + T::cast(PI_LO_F64)
}
