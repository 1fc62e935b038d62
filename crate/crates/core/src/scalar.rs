//! Complex scalars with tolerance-based comparison.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Default equality tolerance.
pub const EPS_EQ: f64 = 1e-9;
/// Default pruning threshold for sparse coefficients.
pub const EPS_PRUNE: f64 = 1e-12;

/// A complex number over `f64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Scalar {
    pub re: f64,
    pub im: f64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { re: 0.0, im: 0.0 };
    pub const ONE: Scalar = Scalar { re: 1.0, im: 0.0 };
    pub const I: Scalar = Scalar { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Scalar { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Scalar { re, im: 0.0 }
    }

    pub fn conj(self) -> Self {
        Scalar::new(self.re, -self.im)
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Exact zero test, used where a value is produced by exact cancellation.
    pub fn is_exact_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    pub fn exp(self) -> Self {
        let r = libm::exp(self.re);
        if self.im == 0.0 {
            return Scalar::real(r);
        }
        Scalar::new(r * libm::cos(self.im), r * libm::sin(self.im))
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Scalar::ONE;
        for _ in 0..n {
            acc *= self;
        }
        acc
    }

    pub fn approx_eq(self, other: Scalar, eps: f64) -> bool {
        (self - other).norm() <= eps
    }

    /// Renders the value as `a+bi` with 12 significant digits per part.
    pub fn render(self) -> String {
        let mut out = sig_digits(self.re);
        if self.im < 0.0 {
            out.push('-');
            out.push_str(&sig_digits(-self.im));
        } else {
            out.push('+');
            out.push_str(&sig_digits(self.im));
        }
        out.push('i');
        out
    }
}

/// `%g`-style formatting with 12 significant digits.
fn sig_digits(x: f64) -> String {
    use core::fmt::Write;
    const DIGITS: i32 = 12;
    let mut s = String::new();
    if x == 0.0 {
        s.push('0');
        return s;
    }
    if !x.is_finite() {
        let _ = write!(s, "{}", x);
        return s;
    }
    let exp10 = libm::floor(libm::log10(libm::fabs(x))) as i32;
    if (-5..DIGITS).contains(&exp10) {
        let decimals = (DIGITS - 1 - exp10).max(0) as usize;
        let _ = write!(s, "{:.*}", decimals, x);
        // the rounding may have carried into an extra digit; harmless for display
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
    } else {
        let _ = write!(s, "{:.*e}", (DIGITS - 1) as usize, x);
        if let Some(pos) = s.find('e') {
            let (mant, exp) = s.split_at(pos);
            let mut mant = String::from(mant);
            if mant.contains('.') {
                while mant.ends_with('0') {
                    mant.pop();
                }
                if mant.ends_with('.') {
                    mant.pop();
                }
            }
            mant.push_str(exp);
            s = mant;
        }
    }
    if s == "-0" {
        s = String::from("0");
    }
    s
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<f64> for Scalar {
    fn from(re: f64) -> Self {
        Scalar::real(re)
    }
}

impl From<i64> for Scalar {
    fn from(re: i64) -> Self {
        Scalar::real(re as f64)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: f64) -> Scalar {
        Scalar::new(self.re * rhs, self.im * rhs)
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = *self * rhs;
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        let d = rhs.re * rhs.re + rhs.im * rhs.im;
        Scalar::new(
            (self.re * rhs.re + self.im * rhs.im) / d,
            (self.im * rhs.re - self.re * rhs.im) / d,
        )
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl core::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ZERO, |a, b| a + b)
    }
}

/// Equality and pruning thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Scalar equality threshold.
    pub eq: f64,
    /// Coefficients with modulus below this are dropped from sparse values.
    pub prune: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq: EPS_EQ,
            prune: EPS_PRUNE,
        }
    }
}
