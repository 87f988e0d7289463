use num::{BigRational, Signed, ToPrimitive, Zero};

/// Arithmetic mode for distribution-level computation.
///
/// `BigRational` is the exact mode (equalities hold literally),
/// `f64` the float mode (equalities hold to ~1e-12). Spectrum and lifting
/// computations are always exact internally; this trait only parameterizes
/// the n!-sized distribution vectors where exactness has a real cost.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + std::fmt::Debug + Send + Sync + 'static
{
    const EXACT: bool;

    /// Mode label used in config echoes: "rational" or "float".
    fn mode_name() -> &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_exact(q: &BigRational) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Rendering used in CSV/JSON output: `p/q` in rational mode, a decimal
    /// (shortest round-trip form) in float mode.
    fn render(&self) -> String;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn mode_name() -> &'static str {
        "float"
    }

    #[inline(always)]
    fn zero() -> Self {
        0.0
    }

    #[inline(always)]
    fn one() -> Self {
        1.0
    }

    fn from_exact(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    #[inline(always)]
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    #[inline(always)]
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    #[inline(always)]
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    #[inline(always)]
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }

    #[inline(always)]
    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    #[inline(always)]
    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    #[inline(always)]
    fn to_f64(&self) -> f64 {
        *self
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn mode_name() -> &'static str {
        "rational"
    }

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        num::One::one()
    }

    fn from_exact(q: &BigRational) -> Self {
        q.clone()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

/// Exact rational p/q from machine integers.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_renders_as_fraction() {
        assert_eq!(ratio(11, 18).render(), "11/18");
        assert_eq!(ratio(1, 1).render(), "1/1");
        assert_eq!(ratio(0, 5).render(), "0/1");
        assert_eq!(ratio(-2, 4).render(), "-1/2");
    }

    #[test]
    fn float_renders_shortest() {
        assert_eq!(0.25f64.render(), "0.25");
        assert_eq!((1.0f64 / 3.0).render(), "0.3333333333333333");
    }

    #[test]
    fn from_exact_converts() {
        assert_eq!(f64::from_exact(&ratio(3, 4)), 0.75);
        assert_eq!(BigRational::from_exact(&ratio(3, 4)), ratio(3, 4));
    }
}
