//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating point type backing the complex arithmetic: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

pub(crate) fn cre<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// Euclidean norm of a complex vector, with scaling against overflow.
pub fn norm2<T: Real>(v: &[C<T>]) -> T {
    let scale = v.iter().fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s: T = v.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

pub fn norm2_sqr<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `aᴴ b`
pub fn dotc<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

pub fn sub<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn max_abs<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

/// Embeds real values with zero imaginary part.
pub fn complexify<T: Real>(v: &[T]) -> Vec<C<T>> {
    v.iter().map(|&x| cre(x)).collect()
}

/// Largest imaginary magnitude relative to the vector norm; zero for the zero vector.
pub fn imag_residue<T: Real>(v: &[C<T>]) -> T {
    let n = norm2(v);
    if n == T::zero() {
        return T::zero();
    }
    v.iter().fold(T::zero(), |m, z| m.max(z.im.abs())) / n
}

/// Argument mapped into `(-2π, 0]`, so that `e^{-j2πk/N}` orders by increasing `k`
/// when sorted by descending argument.
pub fn clockwise_arg<T: Real>(z: C<T>) -> T {
    let a = z.im.atan2(z.re);
    if a > T::zero() {
        a - T::TAU()
    } else {
        a
    }
}
