//! Arbitrary-precision dyadic numbers `mant * 2^exp` with directed rounding.
//!
//! Every operation is exact unless a rounding direction and precision are
//! given, in which case the result is correctly rounded toward the requested
//! direction. This is the ground layer for the interval arithmetic in
//! [`crate::numkit::enclosure`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// A dyadic rational `mant * 2^exp`, normalized so `mant` is odd or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalize()
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::from(1), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// Exact conversion: every finite f64 is dyadic.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign) * BigInt::from(mant), exp))
    }

    fn normalize(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> i32 {
        match self.mant.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Round to `prec` significant bits toward `dir`.
    pub fn round(&self, prec: u32, dir: Dir) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as i64;
        // BigInt shr is a floor shift (rounds toward -inf).
        let floored: BigInt = &self.mant >> shift as u64;
        let exact = (&floored << shift as u64) == self.mant;
        let mant = match dir {
            Dir::Down => floored,
            Dir::Up => {
                if exact {
                    floored
                } else {
                    floored + 1
                }
            }
        };
        Dyadic::new(mant, self.exp + shift)
    }

    /// Quotient `self / other` rounded toward `dir` at `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Dir) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let na = self.mant.bits() as i64;
        let nb = other.mant.bits() as i64;
        let s = (prec as i64 + 2 + nb - na).max(0);
        let num: BigInt = &self.mant << s as u64;
        let (q, r) = num.div_rem(&other.mant);
        // div_rem truncates toward zero; convert to floor, then adjust.
        let negative = (num.sign() == num_bigint::Sign::Minus)
            != (other.mant.sign() == num_bigint::Sign::Minus);
        let mut floor_q = q;
        if !r.is_zero() && negative {
            floor_q -= 1;
        }
        let exact = r.is_zero();
        let mant = match dir {
            Dir::Down => floor_q,
            Dir::Up => {
                if exact {
                    floor_q
                } else {
                    floor_q + 1
                }
            }
        };
        Dyadic::new(mant, self.exp - other.exp - s).round(prec + 4, dir)
    }

    /// `self^(1/k)` for `self >= 0`, rounded toward `dir` at `prec` bits.
    pub fn nth_root(&self, k: u32, prec: u32, dir: Dir) -> Self {
        assert!(self.sign() >= 0, "nth_root of negative dyadic");
        assert!(k >= 1);
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let target = (k as u64) * (prec as u64 + 3);
        let bits = self.mant.bits();
        let mut s = target.saturating_sub(bits) as i64;
        while (self.exp - s).rem_euclid(k as i64) != 0 {
            s += 1;
        }
        let m: BigInt = &self.mant << s as u64;
        let root = m.nth_root(k);
        let exact = num_traits::pow::pow(root.clone(), k as usize) == m;
        let mant = match dir {
            Dir::Down => root,
            Dir::Up => {
                if exact {
                    root
                } else {
                    root + 1
                }
            }
        };
        Dyadic::new(mant, (self.exp - s) / k as i64)
    }

    /// Exact integer floor.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Round to <= 64 bits first so the BigInt conversion is faithful.
        let r = self.round(60, Dir::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        let e = r.exp;
        if e > 2000 {
            if m > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else if e < -2000 {
            0.0
        } else {
            m * 2f64.powi(e as i32)
        }
    }

    pub fn cmp_dyadic(&self, other: &Dyadic) -> Ordering {
        match (self.sign(), other.sign()) {
            (a, b) if a < b => return Ordering::Less,
            (a, b) if a > b => return Ordering::Greater,
            (0, 0) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_dyadic(other)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_shr_is_floor() {
        let x = BigInt::from(-5);
        assert_eq!(&x >> 1u64, BigInt::from(-3)); // floor(-2.5) = -3
    }

    #[test]
    fn add_mul_exact() {
        let a = Dyadic::new(BigInt::from(3), -2); // 0.75
        let b = Dyadic::new(BigInt::from(1), -1); // 0.5
        assert_eq!(a.add(&b).to_f64(), 1.25);
        assert_eq!(a.mul(&b).to_f64(), 0.375);
        assert_eq!(a.sub(&b).to_f64(), 0.25);
    }

    #[test]
    fn rounding_directions() {
        let third_down = Dyadic::one().div(&Dyadic::from_i64(3), 64, Dir::Down);
        let third_up = Dyadic::one().div(&Dyadic::from_i64(3), 64, Dir::Up);
        assert!(third_down < third_up);
        let three = Dyadic::from_i64(3);
        assert!(third_down.mul(&three) < Dyadic::one());
        assert!(third_up.mul(&three) > Dyadic::one());
    }

    #[test]
    fn negative_division_floor() {
        let a = Dyadic::from_i64(-1);
        let q = a.div(&Dyadic::from_i64(3), 64, Dir::Down);
        assert!(q.mul(&Dyadic::from_i64(3)) <= a);
        let q = a.div(&Dyadic::from_i64(3), 64, Dir::Up);
        assert!(q.mul(&Dyadic::from_i64(3)) >= a);
    }

    #[test]
    fn floor_int() {
        assert_eq!(Dyadic::new(BigInt::from(7), -1).floor_int(), BigInt::from(3));
        assert_eq!(Dyadic::new(BigInt::from(-7), -1).floor_int(), BigInt::from(-4));
        assert_eq!(Dyadic::from_i64(4).floor_int(), BigInt::from(4));
    }

    #[test]
    fn sqrt_directed() {
        let two = Dyadic::from_i64(2);
        let lo = two.nth_root(2, 80, Dir::Down);
        let hi = two.nth_root(2, 80, Dir::Up);
        assert!(lo.mul(&lo) <= two);
        assert!(hi.mul(&hi) >= two);
        assert!(hi.sub(&lo).to_f64() < 1e-20);
    }

    #[test]
    fn f64_round_trip() {
        for x in [0.0, 1.0, -0.375, 1e-12, 12345.6789] {
            assert_eq!(Dyadic::from_f64(x).unwrap().to_f64(), x);
        }
    }
}
