//! Exact orbit arithmetic for parameters with an algebraic or rational
//! description: points of the orbit of 1 live in Q or in Q\[β\]/(P), so
//! recurrence detection is a coefficient comparison rather than a numeric
//! guess.

use crate::error::Error;
use crate::numkit::{Dir, Dyadic, Enclosure};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An orbit point in exact representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactPoint {
    Rat(BigRational),
    /// Coefficients of 1, β, …, β^{d-1} in Q\[β\]/(P).
    Poly(Vec<BigRational>),
}

/// Context for exact arithmetic at a fixed parameter.
pub struct ExactCtx {
    kind: CtxKind,
    /// Enclosures of β^0 … β^{d-1} at construction precision.
    pows: Vec<Enclosure>,
    prec: u32,
}

enum CtxKind {
    Rat(BigRational),
    /// β^d = Σ red[i] β^i.
    Poly { red: Vec<BigRational> },
}

fn ratio_to_enclosure(r: &BigRational, prec: u32) -> Enclosure {
    Enclosure::from_ratio(r.numer(), r.denom(), prec)
}

impl ExactCtx {
    pub fn rational(beta: BigRational, prec: u32) -> Self {
        let pows = vec![Enclosure::one()];
        ExactCtx { kind: CtxKind::Rat(beta), pows, prec }
    }

    /// `coeffs` are the descending coefficients a_d … a_0 of the defining
    /// polynomial; `beta` is its certified root enclosure.
    pub fn poly(coeffs: &[BigInt], beta: &Enclosure, prec: u32) -> Self {
        let d = coeffs.len() - 1;
        let lead = BigRational::from(coeffs[0].clone());
        let red: Vec<BigRational> = (0..d)
            .map(|i| {
                // β^d = -(a_{d-1} β^{d-1} + … + a_0)/a_d ; red[i] multiplies β^i.
                let a = BigRational::from(coeffs[d - i].clone());
                -a / lead.clone()
            })
            .collect();
        let mut pows = Vec::with_capacity(d);
        let mut cur = Enclosure::one();
        for _ in 0..d {
            pows.push(cur.clone());
            cur = cur.mul(beta, prec);
        }
        ExactCtx { kind: CtxKind::Poly { red }, pows, prec }
    }

    pub fn one_point(&self) -> ExactPoint {
        match &self.kind {
            CtxKind::Rat(_) => ExactPoint::Rat(BigRational::one()),
            CtxKind::Poly { red } => {
                let mut v = vec![BigRational::zero(); red.len()];
                v[0] = BigRational::one();
                ExactPoint::Poly(v)
            }
        }
    }

    pub fn zero_point(&self) -> ExactPoint {
        match &self.kind {
            CtxKind::Rat(_) => ExactPoint::Rat(BigRational::zero()),
            CtxKind::Poly { red } => ExactPoint::Poly(vec![BigRational::zero(); red.len()]),
        }
    }

    pub fn mul_beta(&self, x: &ExactPoint) -> ExactPoint {
        match (&self.kind, x) {
            (CtxKind::Rat(beta), ExactPoint::Rat(v)) => ExactPoint::Rat(beta * v),
            (CtxKind::Poly { red }, ExactPoint::Poly(c)) => {
                let d = red.len();
                let mut out = vec![BigRational::zero(); d];
                for i in 0..d - 1 {
                    out[i + 1] = c[i].clone();
                }
                let top = &c[d - 1];
                if !top.is_zero() {
                    for i in 0..d {
                        out[i] += top * &red[i];
                    }
                }
                ExactPoint::Poly(out)
            }
            _ => unreachable!("mismatched exact representation"),
        }
    }

    pub fn sub_int(&self, x: &ExactPoint, k: &BigInt) -> ExactPoint {
        match x {
            ExactPoint::Rat(v) => ExactPoint::Rat(v - BigRational::from(k.clone())),
            ExactPoint::Poly(c) => {
                let mut c = c.clone();
                c[0] -= BigRational::from(k.clone());
                ExactPoint::Poly(c)
            }
        }
    }

    pub fn is_zero(&self, x: &ExactPoint) -> bool {
        match x {
            ExactPoint::Rat(v) => v.is_zero(),
            ExactPoint::Poly(c) => c.iter().all(|v| v.is_zero()),
        }
    }

    /// Exact integer value, when the point is a constant integer.
    pub fn as_integer(&self, x: &ExactPoint) -> Option<BigInt> {
        match x {
            ExactPoint::Rat(v) => v.is_integer().then(|| v.to_integer()),
            ExactPoint::Poly(c) => {
                if c[1..].iter().all(|v| v.is_zero()) && c[0].is_integer() {
                    Some(c[0].to_integer())
                } else {
                    None
                }
            }
        }
    }

    pub fn enclose(&self, x: &ExactPoint) -> Enclosure {
        match x {
            ExactPoint::Rat(v) => ratio_to_enclosure(v, self.prec),
            ExactPoint::Poly(c) => {
                let mut acc = Enclosure::zero();
                for (i, coeff) in c.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let term = ratio_to_enclosure(coeff, self.prec).mul(&self.pows[i], self.prec);
                    acc = acc.add(&term, self.prec);
                }
                acc
            }
        }
    }

    /// Exact floor of the point value.
    pub fn floor(&self, x: &ExactPoint) -> Result<BigInt, Error> {
        match x {
            ExactPoint::Rat(v) => Ok(v.floor().to_integer()),
            ExactPoint::Poly(_) => {
                if let Some(k) = self.as_integer(x) {
                    return Ok(k);
                }
                self.enclose(x).unambiguous_floor().ok_or_else(|| {
                    Error::PrecisionInsufficient("floor of algebraic orbit point".into())
                })
            }
        }
    }

    /// Strict floor `max{n ∈ Z : n < x}`.
    pub fn floor_strict(&self, x: &ExactPoint) -> Result<BigInt, Error> {
        if let Some(k) = self.as_integer(x) {
            return Ok(k - 1);
        }
        self.floor(x)
    }
}

/// Certified enclosure of a root of an integer polynomial by exact-sign
/// bisection. `coeffs` descending; the bracket must straddle a sign change.
pub fn refine_poly_root(
    coeffs: &[BigInt],
    mut lo: Dyadic,
    mut hi: Dyadic,
    tol_bits: u32,
) -> Result<Enclosure, Error> {
    let eval = |x: &Dyadic| -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in coeffs {
            acc = acc.mul(x).add(&Dyadic::from_bigint(c.clone()));
        }
        acc
    };
    let s_lo = eval(&lo).sign();
    let s_hi = eval(&hi).sign();
    if s_lo == 0 {
        return Ok(Enclosure::point(lo));
    }
    if s_hi == 0 {
        return Ok(Enclosure::point(hi));
    }
    if s_lo == s_hi {
        return Err(Error::BracketInvalid("no sign change for polynomial root".into()));
    }
    let tol = Dyadic::new(BigInt::one(), -(tol_bits as i64));
    while hi.sub(&lo) > tol {
        let mid = lo.add(&hi).div(&Dyadic::from_i64(2), tol_bits + 64, Dir::Down);
        let s = eval(&mid).sign();
        if s == 0 {
            return Ok(Enclosure::point(mid));
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Enclosure::new(lo, hi))
}

/// Bracket, then certify, the largest real root of an integer polynomial
/// that exceeds `min_value`.
pub fn largest_real_root(coeffs: &[BigInt], min_value: f64, tol_bits: u32) -> Result<Enclosure, Error> {
    if coeffs.len() < 2 || coeffs[0].is_zero() {
        return Err(Error::BracketInvalid("degenerate polynomial".into()));
    }
    let lead = coeffs[0].magnitude();
    let max_ratio = coeffs[1..]
        .iter()
        .map(|c| {
            let num = Dyadic::from_bigint(BigInt::from(c.magnitude().clone()));
            let den = Dyadic::from_bigint(BigInt::from(lead.clone()));
            num.div(&den, 64, Dir::Up).to_f64()
        })
        .fold(0.0f64, f64::max);
    let bound = 1.0 + max_ratio;
    let eval_f = |x: f64| -> f64 {
        let mut acc = 0.0;
        for c in coeffs {
            acc = acc * x + c.to_string().parse::<f64>().unwrap_or(0.0);
        }
        acc
    };
    // Walk down from the Cauchy bound looking for the first sign change.
    let steps = 1u32 << 14;
    let top = bound * (1.0 + 1e-9) + 1e-9;
    let lo_lim = min_value;
    let h = (top - lo_lim) / steps as f64;
    let mut prev_x = top;
    let mut prev_s = eval_f(prev_x).signum();
    for i in 1..=steps {
        let x = top - i as f64 * h;
        let s = eval_f(x).signum();
        if s != prev_s {
            let lo = Dyadic::from_f64(x).unwrap();
            let hi = Dyadic::from_f64(prev_x).unwrap();
            return refine_poly_root(coeffs, lo, hi, tol_bits);
        }
        prev_x = x;
        prev_s = s;
    }
    Err(Error::BracketInvalid(format!(
        "no real root above {} found up to Cauchy bound {}",
        min_value, bound
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root_enclosure() {
        // ζ³ - 2ζ² - 2ζ + 2, largest root ≈ 2.48119.
        let coeffs: Vec<BigInt> = [1i64, -2, -2, 2].iter().map(|&c| BigInt::from(c)).collect();
        let root = largest_real_root(&coeffs, 1.0, 100).unwrap();
        assert!((root.mid_f64() - 2.48119).abs() < 5e-5);
        assert!(root.width().to_f64() < 1e-30);
    }

    #[test]
    fn exact_cubic_orbit_of_one() {
        let coeffs: Vec<BigInt> = [1i64, -2, -2, 2].iter().map(|&c| BigInt::from(c)).collect();
        let root = largest_real_root(&coeffs, 1.0, 200).unwrap();
        let ctx = ExactCtx::poly(&coeffs, &root, 256);
        // T-orbit of 1: digits should read 2,1,0,1,0,… with the orbit
        // entering a 2-cycle after the first step.
        let mut x = ctx.one_point();
        let mut digits = Vec::new();
        let mut pts = Vec::new();
        for _ in 0..6 {
            let t = ctx.mul_beta(&x);
            let k = ctx.floor(&t).unwrap();
            digits.push(i64::try_from(&k).unwrap());
            x = ctx.sub_int(&t, &k);
            pts.push(x.clone());
        }
        assert_eq!(digits, vec![2, 1, 0, 1, 0, 1]);
        assert_eq!(pts[0], pts[2]);
        assert_eq!(pts[1], pts[3]);
        assert_ne!(pts[0], pts[1]);
    }

    #[test]
    fn exact_rational_orbit() {
        let ctx = ExactCtx::rational(BigRational::from(BigInt::from(2)), 128);
        let mut x = ctx.one_point();
        let t = ctx.mul_beta(&x);
        assert_eq!(ctx.floor(&t).unwrap(), BigInt::from(2));
        x = ctx.sub_int(&t, &BigInt::from(2));
        assert!(ctx.is_zero(&x));
        // strict floor at the integer 2: ⌊2⌋' = 1.
        let t = ctx.mul_beta(&ctx.one_point());
        assert_eq!(ctx.floor_strict(&t).unwrap(), BigInt::from(1));
    }
}
