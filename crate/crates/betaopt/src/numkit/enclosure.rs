//! Outward-rounded interval arithmetic over dyadic endpoints.

use super::dyadic::{Dir, Dyadic};
use crate::error::Error;
use num_bigint::BigInt;
use std::fmt;

/// A closed interval `[lo, hi]` certified to contain the represented value.
///
/// All arithmetic rounds outward at the precision passed to each operation,
/// so enclosures only ever grow relative to the exact result.
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi }
    }

    pub fn point(v: Dyadic) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn from_i64(v: i64) -> Self {
        Enclosure::point(Dyadic::from_i64(v))
    }

    pub fn from_f64(v: f64) -> Self {
        Enclosure::point(Dyadic::from_f64(v).expect("finite f64"))
    }

    /// Enclosure of the rational `num/den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let n = Dyadic::from_bigint(num.clone());
        let d = Dyadic::from_bigint(den.clone());
        Enclosure {
            lo: n.div(&d, prec, Dir::Down),
            hi: n.div(&d, prec, Dir::Up),
        }
    }

    pub fn zero() -> Self {
        Enclosure::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Enclosure::point(Dyadic::one())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).div(&Dyadic::from_i64(2), 256, Dir::Down)
    }

    pub fn mid_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    pub fn contains_dyadic(&self, v: &Dyadic) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_int(&self, v: i64) -> bool {
        self.contains_dyadic(&Dyadic::from_i64(v))
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certainly strictly less: every point of `self` below every point of `other`.
    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn neg(&self) -> Self {
        Enclosure { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &Enclosure, prec: u32) -> Self {
        Enclosure {
            lo: self.lo.add(&other.lo).round(prec, Dir::Down),
            hi: self.hi.add(&other.hi).round(prec, Dir::Up),
        }
    }

    pub fn sub(&self, other: &Enclosure, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Enclosure, prec: u32) -> Self {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().unwrap().round(prec, Dir::Down);
        let hi = products.iter().max().unwrap().round(prec, Dir::Up);
        Enclosure { lo, hi }
    }

    pub fn mul_i64(&self, k: i64, prec: u32) -> Self {
        self.mul(&Enclosure::from_i64(k), prec)
    }

    pub fn div(&self, other: &Enclosure, prec: u32) -> Result<Self, Error> {
        if other.lo.sign() <= 0 && other.hi.sign() >= 0 {
            return Err(Error::PrecisionInsufficient(
                "division by enclosure containing zero".into(),
            ));
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let d = a.div(b, prec, Dir::Down);
                let u = a.div(b, prec, Dir::Up);
                lo = Some(match lo {
                    None => d.clone(),
                    Some(cur) => cur.min(d.clone()),
                });
                hi = Some(match hi {
                    None => u.clone(),
                    Some(cur) => cur.max(u.clone()),
                });
            }
        }
        Ok(Enclosure { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn recip(&self, prec: u32) -> Result<Self, Error> {
        Enclosure::one().div(self, prec)
    }

    pub fn pow(&self, n: u32, prec: u32) -> Self {
        let mut acc = Enclosure::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            base = base.mul(&base, prec);
            n >>= 1;
        }
        acc
    }

    /// `self^(num/den)` for nonnegative enclosures and exponents in (0,1].
    pub fn pow_frac(&self, num: u32, den: u32, prec: u32) -> Result<Self, Error> {
        if self.lo.sign() < 0 {
            return Err(Error::PrecisionInsufficient(
                "fractional power of possibly-negative enclosure".into(),
            ));
        }
        let p = self.pow(num, prec + 8);
        Ok(Enclosure {
            lo: p.lo.nth_root(den, prec, Dir::Down),
            hi: p.hi.nth_root(den, prec, Dir::Up),
        })
    }

    pub fn abs(&self) -> Self {
        if self.lo.sign() >= 0 {
            self.clone()
        } else if self.hi.sign() <= 0 {
            self.neg()
        } else {
            Enclosure {
                lo: Dyadic::zero(),
                hi: self.lo.neg().max(self.hi.clone()),
            }
        }
    }

    pub fn hull(&self, other: &Enclosure) -> Self {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Distance between enclosures as an enclosure of |a - b|.
    pub fn dist(&self, other: &Enclosure, prec: u32) -> Self {
        self.sub(other, prec).abs()
    }

    /// The unique integer k with k <= x < k+1 for every x in the enclosure,
    /// or None if the enclosure straddles an integer boundary.
    pub fn unambiguous_floor(&self) -> Option<BigInt> {
        let f_lo = self.lo.floor_int();
        let f_hi = self.hi.floor_int();
        if f_lo == f_hi {
            Some(f_lo)
        } else {
            None
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}
