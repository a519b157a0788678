use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar type backing every amplitude computation.
pub trait Scalar:
    Float + FloatConst + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from a literal.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal fits every Float")
    }

    /// Conversion to `f64` for reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FloatConst + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
}

/// `2^{-n/2}`, the cluster-state normalization.
pub fn inv_sqrt_pow2<T: Scalar>(n: usize) -> T {
    let half = T::lit(0.5);
    let mut v = T::one();
    // Pairs of halvings are exact; the odd leftover costs one rounding.
    for _ in 0..n / 2 {
        v *= half;
    }
    if n % 2 == 1 {
        v *= T::FRAC_1_SQRT_2();
    }
    v
}

pub(crate) fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn cone<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

pub(crate) fn creal<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
