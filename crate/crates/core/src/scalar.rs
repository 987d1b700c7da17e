//! Coefficient fields.
//!
//! Every algebraic type in the crate is generic over a [`Scalar`]. The exact
//! rational field ([`crate::Rational`]) is the one the rest of the tooling is
//! built around: zero testing is decidable there and representation equality
//! coincides with mathematical equality. Floating-point types satisfy the
//! bound as well but lose that guarantee.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// A commutative field usable as the coefficient ring of jet polynomials.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + Debug + FromPrimitive + Send + Sync + 'static
{
    /// Embeds an integer.
    fn from_int(k: i64) -> Self {
        Self::from_i64(k).expect("integer not representable in scalar type")
    }

    /// `num / den` in the field. Panics when `den == 0`.
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_int(num) / Self::from_int(den)
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + Clone + Debug + FromPrimitive + Send + Sync + 'static
{
}

/// `(-1)^k` as a scalar.
pub fn sign<C: Scalar>(k: usize) -> C {
    if k.is_multiple_of(2) {
        C::one()
    } else {
        -C::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn rational_ratio() {
        let half: Ratio<i64> = Scalar::ratio(1, 2);
        assert_eq!(half, Ratio::new(1, 2));
        assert_eq!(sign::<Ratio<i64>>(3), Ratio::from_integer(-1));
    }

    #[test]
    fn float_instance() {
        let x: f64 = Scalar::ratio(3, 4);
        assert_eq!(x, 0.75);
    }
}
