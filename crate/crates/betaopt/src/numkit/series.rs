//! Evaluation of digit series h_β and certified root solving for h_β = 1.

use super::dyadic::{Dir, Dyadic};
use super::enclosure::Enclosure;
use super::word::EventuallyPeriodicWord;
use crate::error::Error;

/// Evaluate `h_β(w) = Σ w_i β^{-i}` for an eventually periodic word, using the
/// closed form for the periodic tail:
///
/// `h = Σ_{i<=n} a_i β^{-i} + β^{-n} (Σ_{i<=p} b_i β^{p-i}) / (β^p - 1)`.
pub fn h_eval(word: &EventuallyPeriodicWord, beta: &Enclosure, prec: u32) -> Result<Enclosure, Error> {
    let floor_hi = beta.hi.floor_int();
    if num_bigint::BigInt::from(word.max_digit()) > floor_hi {
        return Err(Error::DigitOutOfRange);
    }
    h_series(word, beta, prec)
}

/// The same series without the digit-range precondition; the solver needs to
/// evaluate h as a plain function of β at bracket points below the root.
pub(crate) fn h_series(
    word: &EventuallyPeriodicWord,
    beta: &Enclosure,
    prec: u32,
) -> Result<Enclosure, Error> {
    if beta.lo <= Dyadic::one() {
        return Err(Error::BracketInvalid("beta must exceed 1".into()));
    }
    let p = prec + 16;
    let inv = beta.recip(p)?;
    // Preperiod via Horner on inv.
    let pre = word.preperiod();
    let mut acc = Enclosure::zero();
    for i in (0..pre.len()).rev() {
        acc = acc
            .add(&Enclosure::from_i64(pre.digit(i).0 as i64), p)
            .mul(&inv, p);
    }
    // Periodic tail: num(β) / (β^per - 1), shifted by β^{-n}.
    let per = word.period();
    let mut num = Enclosure::zero();
    for i in 0..per.len() {
        num = num.mul(beta, p).add(&Enclosure::from_i64(per.digit(i).0 as i64), p);
    }
    let den = beta.pow(per.len() as u32, p).sub(&Enclosure::one(), p);
    let tail = num.div(&den, p)?;
    let shift = inv.pow(pre.len() as u32, p);
    Ok(acc.add(&tail.mul(&shift, p), p))
}

/// Certified solution of `h_β(word) = 1` by bisection on dyadic points.
///
/// Precondition: `h(bracket.lo) > 1 > h(bracket.hi)` — the map β ↦ h_β(word)
/// is strictly decreasing. The result encloses the unique root with width
/// at most `2^-tol_bits`.
pub fn solve_h_equals_one(
    word: &EventuallyPeriodicWord,
    bracket: &Enclosure,
    tol_bits: u32,
    prec: u32,
) -> Result<Enclosure, Error> {
    let tol = Dyadic::new(num_bigint::BigInt::from(1), -(tol_bits as i64));
    let mut lo = bracket.lo.clone();
    let mut hi = bracket.hi.clone();

    let sign_at = |b: &Dyadic, p: u32| -> Result<Option<i32>, Error> {
        let h = h_series(word, &Enclosure::point(b.clone()), p)?;
        if h.lo > Dyadic::one() {
            Ok(Some(1))
        } else if h.hi < Dyadic::one() {
            Ok(Some(-1))
        } else {
            Ok(None)
        }
    };
    // Decide the sign at a point, escalating precision, nudging on persistent ties.
    let decide = |b: &Dyadic, span: &Dyadic| -> Result<(Dyadic, i32), Error> {
        let mut pt = b.clone();
        for nudge in 0..3 {
            let mut p = prec + 32;
            while p <= 4 * prec + 512 {
                if let Some(s) = sign_at(&pt, p)? {
                    return Ok((pt, s));
                }
                p *= 2;
            }
            // The point is within rounding of the root: nudge it a little.
            let step = span.mul(&Dyadic::new(num_bigint::BigInt::from(1 + nudge as i64), -6));
            pt = pt.add(&step);
        }
        Err(Error::PrecisionInsufficient("bisection sign undecidable".into()))
    };

    let span0 = hi.sub(&lo);
    let (_, s_lo) = decide(&lo, &span0)?;
    let (_, s_hi) = decide(&hi, &span0)?;
    if s_lo <= 0 || s_hi >= 0 {
        return Err(Error::BracketInvalid(format!(
            "h - 1 does not change sign on [{}, {}]",
            lo.to_f64(),
            hi.to_f64()
        )));
    }

    while hi.sub(&lo) > tol {
        let mid = lo.add(&hi).div(&Dyadic::from_i64(2), prec + tol_bits + 16, Dir::Down);
        let span = hi.sub(&lo);
        let (pt, s) = decide(&mid, &span)?;
        if s > 0 {
            lo = pt;
        } else {
            hi = pt;
        }
    }
    Ok(Enclosure::new(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::word::FiniteWord;

    fn w(pre: &[u8], per: &[u8]) -> EventuallyPeriodicWord {
        EventuallyPeriodicWord::new(FiniteWord::from_digits(pre), FiniteWord::from_digits(per))
    }

    /// Independent oracle: truncated series with a crude tail bound.
    fn h_oracle(word: &EventuallyPeriodicWord, beta: f64, n: usize) -> (f64, f64) {
        let mut s = 0.0;
        for i in 0..n {
            s += word.digit(i).0 as f64 * beta.powi(-(i as i32 + 1));
        }
        let tail = word.max_digit() as f64 * beta.powi(-(n as i32)) / (beta - 1.0);
        (s, s + tail)
    }

    #[test]
    fn h_geometric() {
        // h_2((10)^∞) = 2/3
        let beta = Enclosure::from_i64(2);
        let h = h_eval(&w(&[], &[1, 0]), &beta, 128).unwrap();
        let (lo, hi) = h_oracle(&w(&[], &[1, 0]), 2.0, 60);
        assert!(h.mid_f64() >= lo && h.mid_f64() <= hi);
        let two_thirds = Enclosure::from_i64(2).div(&Enclosure::from_i64(3), 128).unwrap();
        assert!(h.overlaps(&two_thirds));
        assert!(h.width().to_f64() < 1e-30);
    }

    #[test]
    fn h_zero_word() {
        let beta = Enclosure::from_f64(1.5);
        let h = h_eval(&EventuallyPeriodicWord::zero(), &beta, 64).unwrap();
        assert!(h.contains_int(0));
    }

    #[test]
    fn digit_range_enforced() {
        let beta = Enclosure::from_i64(2);
        assert!(matches!(h_eval(&w(&[3], &[0]), &beta, 64), Err(Error::DigitOutOfRange)));
    }

    #[test]
    fn solve_golden() {
        // 1 = 1/β + 1/β² ⇒ β² = β + 1 ⇒ β = (1+√5)/2
        let bracket = Enclosure::new(
            Dyadic::from_f64(1.1).unwrap(),
            Dyadic::from_f64(1.99).unwrap(),
        );
        let root = solve_h_equals_one(&w(&[1, 1], &[0]), &bracket, 80, 128).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((root.mid_f64() - golden).abs() < 1e-12);
        // round trip: h at the root encloses 1
        let h = h_eval(&w(&[1, 1], &[0]), &root, 160).unwrap();
        assert!(h.contains_int(1));
    }

    #[test]
    fn solve_two() {
        let bracket = Enclosure::new(
            Dyadic::from_f64(1.5).unwrap(),
            Dyadic::from_f64(2.5).unwrap(),
        );
        let root = solve_h_equals_one(&w(&[2], &[0]), &bracket, 80, 128).unwrap();
        assert!(root.contains_int(2));
    }

    #[test]
    fn solve_cubic_word() {
        // word 2(10)^∞: β ≈ 2.48119, the largest root of ζ³-2ζ²-2ζ+2.
        let bracket = Enclosure::new(
            Dyadic::from_f64(2.1).unwrap(),
            Dyadic::from_f64(2.9).unwrap(),
        );
        let root = solve_h_equals_one(&w(&[2], &[1, 0]), &bracket, 80, 128).unwrap();
        let b = root.mid_f64();
        assert!((b - 2.48119).abs() < 5e-5);
        let poly = b.powi(3) - 2.0 * b.powi(2) - 2.0 * b + 2.0;
        assert!(poly.abs() < 1e-9);
    }

    #[test]
    fn h_monotone_in_word() {
        // a ≺ b ⇒ h(a) <= h(b) at fixed β.
        let beta = Enclosure::from_f64(2.4);
        let pairs = [
            (w(&[], &[1, 0]), w(&[1], &[1, 0])),
            (w(&[0, 1], &[0]), w(&[1], &[0])),
            (w(&[], &[0, 1]), w(&[], &[1, 0])),
        ];
        for (a, b) in pairs {
            assert_eq!(crate::numkit::word::lex_compare(&a, &b), std::cmp::Ordering::Less);
            let ha = h_eval(&a, &beta, 96).unwrap();
            let hb = h_eval(&b, &beta, 96).unwrap();
            assert!(ha.lo <= hb.hi);
        }
    }
}
