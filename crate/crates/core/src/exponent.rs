//! Unsigned integer types usable as exponents.
//!
//! Everything above this module is written against [`Exponent`], so the same
//! algorithms run on machine words (fast sweeps and benchmarks) and on
//! [`BigUint`] (arbitrary user input).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, ToPrimitive, Unsigned};

pub trait Exponent:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + Integer
    + Unsigned
    + CheckedAdd
    + CheckedMul
    + 'static
{
    fn from_u64(v: u64) -> Self;
    fn to_u64(&self) -> Option<u64>;
    fn to_i128(&self) -> Option<i128>;
    fn to_bigint(&self) -> BigInt;
    fn to_f64(&self) -> f64;

    /// `2^k`, or `None` when it does not fit.
    fn pow2(k: u32) -> Option<Self>;

    /// Number of significant bits; zero for zero.
    fn bit_len(&self) -> u32;

    /// Number of set bits, i.e. `|Ω(r)|`.
    fn ones(&self) -> u32;

    /// Position of the lowest set bit, i.e. `Δ(r)`; `None` for zero.
    fn low_bit(&self) -> Option<u32>;

    fn bit(&self, k: u32) -> bool;

    /// Bitwise and.
    fn common_bits(&self, other: &Self) -> Self;

    /// Whether `total` leaves enough headroom for padding to the next power
    /// of two and the doubling steps of the heuristics.
    fn has_headroom(total: &Self) -> bool;
}

macro_rules! impl_exponent_prim {
    ($($t:ty),*) => {$(
        impl Exponent for $t {
            fn from_u64(v: u64) -> Self {
                <$t>::try_from(v).expect("value does not fit the exponent type")
            }
            fn to_u64(&self) -> Option<u64> {
                u64::try_from(*self).ok()
            }
            fn to_i128(&self) -> Option<i128> {
                i128::try_from(*self).ok()
            }
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn pow2(k: u32) -> Option<Self> {
                (1 as $t).checked_shl(k)
            }
            fn bit_len(&self) -> u32 {
                <$t>::BITS - self.leading_zeros()
            }
            fn ones(&self) -> u32 {
                self.count_ones()
            }
            fn low_bit(&self) -> Option<u32> {
                if *self == 0 { None } else { Some(self.trailing_zeros()) }
            }
            fn bit(&self, k: u32) -> bool {
                k < <$t>::BITS && (self >> k) & 1 == 1
            }
            fn common_bits(&self, other: &Self) -> Self {
                self & other
            }
            fn has_headroom(total: &Self) -> bool {
                total.bit_len() + 2 < <$t>::BITS
            }
        }
    )*};
}

impl_exponent_prim!(u32, u64, u128);

impl Exponent for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn to_u64(&self) -> Option<u64> {
        ToPrimitive::to_u64(self)
    }
    fn to_i128(&self) -> Option<i128> {
        ToPrimitive::to_i128(self)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(self.clone())
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
    fn pow2(k: u32) -> Option<Self> {
        Some(BigUint::from(1u8) << k)
    }
    fn bit_len(&self) -> u32 {
        self.bits() as u32
    }
    fn ones(&self) -> u32 {
        self.count_ones() as u32
    }
    fn low_bit(&self) -> Option<u32> {
        self.trailing_zeros().map(|z| z as u32)
    }
    fn bit(&self, k: u32) -> bool {
        BigUint::bit(self, k as u64)
    }
    fn common_bits(&self, other: &Self) -> Self {
        self & other
    }
    fn has_headroom(_total: &Self) -> bool {
        true
    }
}

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn ceil_log2<E: Exponent>(x: &E) -> u32 {
    debug_assert!(!x.is_zero());
    (x.clone() - E::one()).bit_len()
}

/// `2^k` for exponents already known to fit (guaranteed by the headroom
/// check at tuple construction).
pub(crate) fn two_pow<E: Exponent>(k: u32) -> E {
    E::pow2(k).expect("power of two exceeds exponent width")
}

pub(crate) fn is_power_of_two<E: Exponent>(x: &E) -> bool {
    x.ones() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_agree(v: u64) {
        let b = BigUint::from(v);
        assert_eq!(v.bit_len(), Exponent::bit_len(&b));
        assert_eq!(v.ones(), Exponent::ones(&b));
        assert_eq!(v.low_bit(), Exponent::low_bit(&b));
        assert_eq!(ceil_log2(&v.max(1)), ceil_log2(&b.clone().max(BigUint::from(1u8))));
    }

    #[test]
    fn primitive_and_big_agree() {
        for v in [0u64, 1, 2, 3, 7, 8, 12, 1 << 40, (1 << 40) + 6, u64::MAX >> 3] {
            check_agree(v);
        }
    }

    #[test]
    fn ceil_log2_small() {
        let got: Vec<u32> = (1u64..=9).map(|x| ceil_log2(&x)).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn headroom() {
        assert!(u64::has_headroom(&(1u64 << 60)));
        assert!(!u64::has_headroom(&(1u64 << 62)));
        assert_eq!(u32::pow2(32), None);
    }
}
