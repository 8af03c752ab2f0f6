//! Coefficient rings and evaluation fields.
//!
//! Polynomials and rational functions in this crate are generic over a
//! [`Coefficient`] ring. The exact path uses [`BigInt`]; randomized identity
//! testing evaluates into the prime field [`ModP`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring usable as polynomial coefficients.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;

    /// Used to fix the sign of a normalized numerator. Rings without an
    /// ordering report `false` for every element.
    fn is_negative(&self) -> bool {
        false
    }
}

/// A coefficient ring in which every nonzero element is invertible.
pub trait Field: Coefficient + Div<Output = Self> {
    fn inv(&self) -> Option<Self>;

    fn pow_i64(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            sq = sq.clone() * sq;
            e >>= 1;
        }
        Some(acc)
    }
}

/// Maps a coefficient into an evaluation field.
pub trait Lift<F> {
    fn lift(&self) -> F;
}

impl Coefficient for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Coefficient for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
}

impl Coefficient for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
}

impl Coefficient for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Lift<BigRational> for BigInt {
    fn lift(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl Lift<BigRational> for BigRational {
    fn lift(&self) -> BigRational {
        self.clone()
    }
}

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Element of the prime field of order [`MODULUS`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ModP(u64);

impl ModP {
    pub fn new(v: u64) -> Self {
        ModP(v % MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce128(x: u128) -> u64 {
        // 2^61 = 1 (mod p)
        let lo = (x as u64) & MODULUS;
        let hi = (x >> 61) as u64;
        let s = lo + (hi & MODULUS) + (hi >> 61);
        let s = (s & MODULUS) + (s >> 61);
        if s >= MODULUS {
            s - MODULUS
        } else {
            s
        }
    }
}

impl fmt::Debug for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for ModP {
    type Output = ModP;
    fn add(self, rhs: ModP) -> ModP {
        let s = self.0 + rhs.0;
        ModP(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for ModP {
    type Output = ModP;
    fn sub(self, rhs: ModP) -> ModP {
        if self.0 >= rhs.0 {
            ModP(self.0 - rhs.0)
        } else {
            ModP(self.0 + MODULUS - rhs.0)
        }
    }
}

impl Neg for ModP {
    type Output = ModP;
    fn neg(self) -> ModP {
        if self.0 == 0 {
            self
        } else {
            ModP(MODULUS - self.0)
        }
    }
}

impl Mul for ModP {
    type Output = ModP;
    fn mul(self, rhs: ModP) -> ModP {
        ModP(Self::reduce128(self.0 as u128 * rhs.0 as u128))
    }
}

impl Div for ModP {
    type Output = ModP;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: ModP) -> ModP {
        self * rhs.inv().expect("division by zero in prime field")
    }
}

impl Zero for ModP {
    fn zero() -> Self {
        ModP(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for ModP {
    fn one() -> Self {
        ModP(1)
    }
}

impl Coefficient for ModP {
    fn from_i64(v: i64) -> Self {
        if v >= 0 {
            ModP::new(v as u64)
        } else {
            -ModP::new(v.unsigned_abs())
        }
    }
}

impl Field for ModP {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut e = MODULUS - 2;
        let mut acc = ModP(1);
        let mut sq = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq;
            }
            sq = sq * sq;
            e >>= 1;
        }
        Some(acc)
    }
}

impl Lift<ModP> for BigInt {
    fn lift(&self) -> ModP {
        let r = self.mod_floor(&BigInt::from(MODULUS));
        ModP(r.to_u64().expect("reduced residue fits in u64"))
    }
}

impl Lift<ModP> for i64 {
    fn lift(&self) -> ModP {
        ModP::from_i64(*self)
    }
}

impl Lift<ModP> for ModP {
    fn lift(&self) -> ModP {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modp_inverse_roundtrip() {
        for v in [1u64, 2, 3, 12345, MODULUS - 1, 1 << 60] {
            let x = ModP::new(v);
            assert_eq!(x * x.inv().unwrap(), ModP::one());
        }
        assert!(ModP::zero().inv().is_none());
    }

    #[test]
    fn modp_reduction_matches_bigint() {
        let a = ModP::new(MODULUS - 3);
        let b = ModP::new((1 << 60) + 17);
        let expect = (BigInt::from(MODULUS - 3) * BigInt::from((1u64 << 60) + 17))
            .mod_floor(&BigInt::from(MODULUS));
        assert_eq!(BigInt::from((a * b).value()), expect);
    }

    #[test]
    fn lift_negative_bigint() {
        let x: ModP = BigInt::from(-5).lift();
        assert_eq!(x + ModP::new(5), ModP::zero());
    }

    #[test]
    fn field_pow_negative() {
        let x = ModP::new(7);
        assert_eq!(x.pow_i64(-2).unwrap() * x * x, ModP::one());
    }
}
