use std::cell::Cell;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_complex::Complex;
use num_traits::{Num, One, Zero};
use serde::{Deserialize, Serialize};

/// Element precision of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// binary32 components
    Working,
    /// binary64 components
    Reference,
}

impl Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Precision::Working => f.write_str("working"),
            Precision::Reference => f.write_str("reference"),
        }
    }
}

/// Real component type of a complex scalar.
///
/// Mixing precisions is rejected at compile time: every matrix operation is
/// generic over a single `T: Real`, and moving between precisions goes
/// through [`convert_precision`](super::convert_precision).
pub trait Real:
    Copy + Send + Sync + Debug + Display + PartialOrd + Num + Neg<Output = Self> + 'static
{
    /// Unit roundoff of the format (2^-24 for binary32, 2^-53 for binary64).
    const EPSILON: f64;
    const PRECISION: Precision;

    /// Round a binary64 value to this format.
    fn from_f64(x: f64) -> Self;
    /// Widen to binary64 (exact for both supported formats).
    fn to_f64(self) -> f64;
}

impl Real for f32 {
    const EPSILON: f64 = 1.0 / (1u64 << 24) as f64;
    const PRECISION: Precision = Precision::Working;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    const EPSILON: f64 = 1.0 / (1u64 << 53) as f64;
    const PRECISION: Precision = Precision::Reference;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

/// Complex scalar with `T` components.
pub type Scalar<T> = Complex<T>;

#[inline]
pub fn complex_from_f64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

#[inline]
pub fn complex_to_f64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

#[inline]
pub fn modulus<T: Real>(z: Complex<T>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

thread_local! {
    static FLOPS: Cell<u64> = const { Cell::new(0) };
}

/// Binary64 value that counts every real arithmetic operation performed on it.
///
/// The counter is thread-local; all algorithms in this crate run on the
/// calling thread, so running a computation over `Counted` and reading
/// [`flops::read`] before and after gives an exact operation count.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Counted(pub f64);

pub mod flops {
    use super::FLOPS;

    pub fn read() -> u64 {
        FLOPS.with(|c| c.get())
    }

    pub fn reset() {
        FLOPS.with(|c| c.set(0));
    }

    #[inline]
    pub(super) fn tick() {
        FLOPS.with(|c| c.set(c.get() + 1));
    }
}

impl Display for Counted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Display::fmt(&self.0, f)
    }
}

macro_rules! counted_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for Counted {
            type Output = Counted;
            #[inline]
            fn $method(self, rhs: Counted) -> Counted {
                flops::tick();
                Counted(self.0 $op rhs.0)
            }
        }
    };
}

counted_binop!(Add, add, +);
counted_binop!(Sub, sub, -);
counted_binop!(Mul, mul, *);
counted_binop!(Div, div, /);
counted_binop!(Rem, rem, %);

impl Neg for Counted {
    type Output = Counted;
    #[inline]
    fn neg(self) -> Counted {
        Counted(-self.0)
    }
}

impl Zero for Counted {
    fn zero() -> Self {
        Counted(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

impl One for Counted {
    fn one() -> Self {
        Counted(1.0)
    }
}

impl Num for Counted {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Counted)
    }
}

impl Real for Counted {
    const EPSILON: f64 = <f64 as Real>::EPSILON;
    const PRECISION: Precision = Precision::Reference;

    fn from_f64(x: f64) -> Self {
        Counted(x)
    }

    fn to_f64(self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_roundoff_values() {
        assert_eq!(<f32 as Real>::EPSILON, 2f64.powi(-24));
        assert_eq!(<f64 as Real>::EPSILON, 2f64.powi(-53));
        assert_eq!(<f32 as Real>::EPSILON, f32::EPSILON as f64 / 2.0);
    }

    #[test]
    fn counted_complex_multiply_costs_six() {
        flops::reset();
        let a = Complex::new(Counted(1.0), Counted(2.0));
        let b = Complex::new(Counted(3.0), Counted(-1.0));
        let c = a * b;
        assert_eq!(flops::read(), 6);
        assert_eq!(c, Complex::new(Counted(5.0), Counted(5.0)));
        let _ = c + a;
        assert_eq!(flops::read(), 8);
    }
}
