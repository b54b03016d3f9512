//! The maps T_β and U_β, beta-expansions, the critical orbit of 1, and
//! membership in Z_β.
//!
//! `BetaParam` freezes everything about a parameter at construction time:
//! a certified enclosure of β, the expansion of 1 (exact for beta-numbers,
//! a certified prefix otherwise), the classification, the critical orbit,
//! and the discontinuity set D_β. All operations afterwards are pure.

pub mod exact;

use crate::betanum::Classification;
use crate::error::Error;
use crate::numkit::{
    h_eval, lex_compare, solve_h_equals_one, Dyadic, Enclosure, EventuallyPeriodicWord, FiniteWord,
    Lex,
};
use exact::{largest_real_root, ExactCtx, ExactPoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::Arc;

/// Which transformation an orbit belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MapTag {
    T,
    U,
}

/// How a parameter is described.
#[derive(Debug, Clone)]
pub enum BetaSpec {
    /// Exact rational value > 1.
    Rational(BigRational),
    /// Largest real root > 1 of the integer polynomial with these
    /// descending coefficients.
    PolyRoot(Vec<BigInt>),
    /// The unique β with π_β(1) equal to this word.
    ParryWord(EventuallyPeriodicWord),
}

/// Exact expansion when available, certified prefix otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpansionInfo {
    Exact(EventuallyPeriodicWord),
    Prefix(FiniteWord),
}

impl ExpansionInfo {
    pub fn digit(&self, i: usize) -> Option<crate::numkit::Digit> {
        match self {
            ExpansionInfo::Exact(w) => Some(w.digit(i)),
            ExpansionInfo::Prefix(p) => (i < p.len()).then(|| p.digit(i)),
        }
    }

    pub fn exact(&self) -> Option<&EventuallyPeriodicWord> {
        match self {
            ExpansionInfo::Exact(w) => Some(w),
            ExpansionInfo::Prefix(_) => None,
        }
    }
}

/// The orbit of 1 under U_β cached on the parameter.
#[derive(Debug, Clone)]
pub struct CriticalOrbit {
    /// U^k(1) for k = 0, 1, …; exact orbits list preperiod + one cycle.
    pub points: Vec<Enclosure>,
    /// Shift words σ^k(π*_β(1)) matching `points` (beta-numbers only).
    pub words: Option<Vec<EventuallyPeriodicWord>>,
    /// Index at which the cycle starts (beta-numbers only).
    pub preperiod: usize,
    /// Cycle length; 0 when no cycle was certified.
    pub cycle: usize,
    pub exact: bool,
}

impl CriticalOrbit {
    /// U^k(1), following the cycle for exact orbits.
    pub fn point(&self, k: usize) -> Option<&Enclosure> {
        if k < self.points.len() {
            return Some(&self.points[k]);
        }
        if self.exact && self.cycle > 0 {
            let idx = self.preperiod + (k - self.preperiod) % self.cycle;
            return Some(&self.points[idx]);
        }
        None
    }

    /// The distinct points of the orbit (exact case: the whole finite set).
    pub fn point_set(&self) -> &[Enclosure] {
        &self.points
    }
}

/// A sampled orbit of one of the two maps.
#[derive(Debug, Clone)]
pub struct OrbitSample {
    pub points: Vec<Enclosure>,
    pub map_tag: MapTag,
}

/// Outcome of a Z_β membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZMembership {
    Yes(usize),
    NoUpToHorizon,
}

/// Construction options.
#[derive(Debug, Clone)]
pub struct BetaOptions {
    /// Working precision (bits) for enclosure results.
    pub prec: u32,
    /// Bits for the stored enclosure of β itself.
    pub value_bits: u32,
    /// Horizon for preperiodicity detection and expansion prefixes.
    pub horizon: usize,
}

impl Default for BetaOptions {
    fn default() -> Self {
        BetaOptions { prec: crate::numkit::DEFAULT_PREC, value_bits: 768, horizon: 64 }
    }
}

/// A parameter β > 1 with certified enclosure and cached expansion,
/// classification, critical orbit and discontinuity data.
#[derive(Clone)]
pub struct BetaParam {
    spec: BetaSpec,
    value: Enclosure,
    floor: u64,
    expansion_one: ExpansionInfo,
    upper_one: ExpansionInfo,
    classification: Classification,
    critical: Arc<CriticalOrbit>,
    disc: Arc<Vec<Enclosure>>,
    prec: u32,
    horizon: usize,
}

impl std::fmt::Debug for BetaParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BetaParam({} ~ {:?})", self.value.mid_f64(), self.classification.kind_str())
    }
}

impl BetaParam {
    pub fn new(spec: BetaSpec, opts: &BetaOptions) -> Result<Self, Error> {
        let value = Self::resolve_value(&spec, opts.value_bits)?;
        if value.lo <= Dyadic::one() {
            return Err(Error::BracketInvalid("beta must exceed 1".into()));
        }
        let floor = value
            .unambiguous_floor()
            .or_else(|| {
                // Exact integer parameter: both endpoints equal an integer.
                value.is_point().then(|| value.lo.floor_int())
            })
            .ok_or_else(|| Error::PrecisionInsufficient("floor of beta".into()))?;
        let floor = floor.to_u64().ok_or_else(|| Error::BracketInvalid("beta out of range".into()))?;

        let expansion_one = Self::compute_expansion_of_one(&spec, &value, opts)?;
        let classification = Classification::from_expansion(&expansion_one, opts.horizon);
        let upper_one = Self::compute_upper_expansion(&classification, &spec, &value, opts)?;
        let critical = Self::compute_critical_orbit(&upper_one, &value, opts)?;
        let disc = Self::compute_disc(&value, floor, opts.prec)?;

        Ok(BetaParam {
            spec,
            value,
            floor,
            expansion_one,
            upper_one,
            classification,
            critical: Arc::new(critical),
            disc: Arc::new(disc),
            prec: opts.prec,
            horizon: opts.horizon,
        })
    }

    /// β from an integer.
    pub fn integer(n: u64) -> Result<Self, Error> {
        Self::new(
            BetaSpec::Rational(BigRational::from(BigInt::from(n))),
            &BetaOptions::default(),
        )
    }

    /// β from an exact rational.
    pub fn rational(num: i64, den: u64) -> Result<Self, Error> {
        Self::new(
            BetaSpec::Rational(BigRational::new(BigInt::from(num), BigInt::from(den))),
            &BetaOptions::default(),
        )
    }

    /// The golden ratio, as the Parry parameter of 11(0)^∞.
    pub fn golden() -> Result<Self, Error> {
        let w = EventuallyPeriodicWord::from_finite(&FiniteWord::from_digits(&[1, 1]));
        Self::new(BetaSpec::ParryWord(w), &BetaOptions::default())
    }

    /// Largest root of ζ³ − 2ζ² − 2ζ + 2 (≈ 2.48119), the worked example.
    pub fn cubic_example() -> Result<Self, Error> {
        let coeffs = [1i64, -2, -2, 2].iter().map(|&c| BigInt::from(c)).collect();
        Self::new(BetaSpec::PolyRoot(coeffs), &BetaOptions::default())
    }

    pub fn from_parry_word(word: EventuallyPeriodicWord) -> Result<Self, Error> {
        Self::new(BetaSpec::ParryWord(word), &BetaOptions::default())
    }

    fn resolve_value(spec: &BetaSpec, bits: u32) -> Result<Enclosure, Error> {
        match spec {
            BetaSpec::Rational(r) => {
                if r.denom().is_zero() || !r.is_positive() {
                    return Err(Error::BracketInvalid("rational beta must be positive".into()));
                }
                Ok(Enclosure::from_ratio(r.numer(), r.denom(), bits))
            }
            BetaSpec::PolyRoot(coeffs) => largest_real_root(coeffs, 1.0, bits),
            BetaSpec::ParryWord(word) => {
                // Parry validity: σ^n(w) ≺ w for every n ≥ 1. A purely
                // periodic word fails at n = period (σ^p(w) = w), which the
                // deduplicated shift list would hide — reject it up front.
                if word.preperiod().is_empty() {
                    return Err(Error::NotAParryWord(format!(
                        "{} is purely periodic, so some shift equals the word itself",
                        word
                    )));
                }
                for (n, s) in word.distinct_shifts().into_iter().enumerate().skip(1) {
                    if lex_compare(&s, word) != Lex::Less {
                        return Err(Error::NotAParryWord(format!(
                            "shift {} of {} is not strictly below the word",
                            n, word
                        )));
                    }
                }
                let d1 = word.digit(0).0 as i64;
                if d1 == 0 {
                    return Err(Error::NotAParryWord("word starts with digit 0".into()));
                }
                // β = d exactly iff the word is d(0)^∞; d = 1 would force β = 1.
                if word.is_finitely_supported() && word.preperiod().len() == 1 {
                    if d1 == 1 {
                        return Err(Error::NotAParryWord(
                            "1(0)^∞ is the expansion of 1 for no parameter above 1".into(),
                        ));
                    }
                    return Ok(Enclosure::from_i64(d1));
                }
                // β lies strictly inside (d₁, d₁+1); shrink the offsets until
                // the bracket straddles the sign change.
                let mut err = None;
                for k in [20i64, 40, 80, 160, 320] {
                    let lo = Dyadic::from_i64(d1).add(&Dyadic::new(BigInt::from(1), -k));
                    let hi = Dyadic::from_i64(d1 + 1).sub(&Dyadic::new(BigInt::from(1), -k));
                    let bracket = Enclosure::new(lo, hi);
                    match solve_h_equals_one(word, &bracket, bits, bits + 32) {
                        Ok(root) => return Ok(root),
                        Err(e @ Error::BracketInvalid(_)) => err = Some(e),
                        Err(e) => return Err(e),
                    }
                }
                Err(err.unwrap_or_else(|| Error::BracketInvalid("parry bracket".into())))
            }
        }
    }

    fn exact_ctx(spec: &BetaSpec, value: &Enclosure, bits: u32) -> Option<ExactCtx> {
        match spec {
            BetaSpec::Rational(r) => Some(ExactCtx::rational(r.clone(), bits)),
            BetaSpec::PolyRoot(coeffs) => Some(ExactCtx::poly(coeffs, value, bits)),
            BetaSpec::ParryWord(_) => None,
        }
    }

    fn compute_expansion_of_one(
        spec: &BetaSpec,
        value: &Enclosure,
        opts: &BetaOptions,
    ) -> Result<ExpansionInfo, Error> {
        match spec {
            BetaSpec::ParryWord(word) => {
                // π_β(1) = word is Parry's theorem once σⁿ(w) ≺ w holds (checked
                // exactly in resolve_value) and h_β(w) = 1 (the root bracket).
                // Certify strictness of every shift numerically: the orbit
                // points h_β(σᵏw) = T^k(1) must lie strictly below 1.
                for shift in word.distinct_shifts().into_iter().skip(1) {
                    let h = h_eval(&shift, value, value.lo.mant_bits().max(256) as u32)?;
                    if !(h.hi < Dyadic::one()) {
                        return Err(Error::VerificationFailed(format!(
                            "orbit point h(σᵏw) = {} not certified below 1",
                            h
                        )));
                    }
                }
                Ok(ExpansionInfo::Exact(word.clone()))
            }
            _ => {
                let ctx = Self::exact_ctx(spec, value, opts.value_bits)
                    .expect("rational and polynomial parameters have exact contexts");
                Self::detect_preperiodic(&ctx, opts.horizon)
            }
        }
    }

    /// Exact T-orbit of 1 with recurrence detection.
    fn detect_preperiodic(ctx: &ExactCtx, horizon: usize) -> Result<ExpansionInfo, Error> {
        let mut seen: HashMap<ExactPoint, usize> = HashMap::new();
        let mut digits: Vec<u8> = Vec::with_capacity(horizon);
        let mut x = ctx.one_point();
        seen.insert(x.clone(), 0);
        for k in 0..horizon {
            let t = ctx.mul_beta(&x);
            let d = ctx.floor(&t)?;
            let d8 = d
                .to_u8()
                .ok_or_else(|| Error::PrecisionInsufficient("digit out of byte range".into()))?;
            digits.push(d8);
            x = ctx.sub_int(&t, &d);
            if ctx.is_zero(&x) {
                // Orbit reached the fixed point 0: finitely many nonzero digits.
                let pre = FiniteWord::from_digits(&digits);
                return Ok(ExpansionInfo::Exact(EventuallyPeriodicWord::from_finite(&pre)));
            }
            if let Some(&i) = seen.get(&x) {
                let pre = FiniteWord::from_digits(&digits[..i]);
                let per = FiniteWord::from_digits(&digits[i..=k]);
                return Ok(ExpansionInfo::Exact(EventuallyPeriodicWord::new(pre, per)));
            }
            seen.insert(x.clone(), k + 1);
        }
        Ok(ExpansionInfo::Prefix(FiniteWord::from_digits(&digits)))
    }

    /// π*_β(1) from π_β(1): for finitely supported expansions z₁…z_n(0)^∞ the
    /// upper expansion is (z₁…z_{n-1}(z_n − 1))^∞; otherwise the two agree.
    fn compute_upper_expansion(
        class: &Classification,
        spec: &BetaSpec,
        value: &Enclosure,
        opts: &BetaOptions,
    ) -> Result<ExpansionInfo, Error> {
        match class {
            Classification::Simple { expansion } => {
                let pre = expansion.preperiod();
                let n = pre.len();
                debug_assert!(n >= 1 && pre.digit(n - 1).0 > 0);
                let mut digits: Vec<u8> = (0..n).map(|i| pre.digit(i).0).collect();
                digits[n - 1] -= 1;
                Ok(ExpansionInfo::Exact(EventuallyPeriodicWord::periodic(
                    &FiniteWord::from_digits(&digits),
                )))
            }
            Classification::NonSimple { expansion } => Ok(ExpansionInfo::Exact(expansion.clone())),
            Classification::NonPreperiodicUpToHorizon { .. } => {
                // Direct U-orbit digits of 1 at high precision.
                let digits = Self::u_digits_of_one(spec, value, opts)?;
                Ok(ExpansionInfo::Prefix(digits))
            }
        }
    }

    fn u_digits_of_one(
        spec: &BetaSpec,
        value: &Enclosure,
        opts: &BetaOptions,
    ) -> Result<FiniteWord, Error> {
        if let Some(ctx) = Self::exact_ctx(spec, value, opts.value_bits) {
            let mut x = ctx.one_point();
            let mut digits = Vec::with_capacity(opts.horizon);
            for _ in 0..opts.horizon {
                let t = ctx.mul_beta(&x);
                let d = ctx.floor_strict(&t)?;
                digits.push(d.to_u8().ok_or_else(|| {
                    Error::PrecisionInsufficient("digit out of byte range".into())
                })?);
                x = ctx.sub_int(&t, &d);
            }
            Ok(FiniteWord::from_digits(&digits))
        } else {
            unreachable!("prefix expansions only arise for rational/polynomial specs")
        }
    }

    fn compute_critical_orbit(
        upper_one: &ExpansionInfo,
        value: &Enclosure,
        opts: &BetaOptions,
    ) -> Result<CriticalOrbit, Error> {
        match upper_one {
            ExpansionInfo::Exact(star) => {
                let pre = star.preperiod().len();
                let per = star.period().len();
                let mut words = Vec::with_capacity(pre + per);
                let mut points = Vec::with_capacity(pre + per);
                for k in 0..pre + per {
                    let w = star.shift(k);
                    points.push(h_eval(&w, value, opts.prec)?);
                    words.push(w);
                }
                Ok(CriticalOrbit {
                    points,
                    words: Some(words),
                    preperiod: pre,
                    cycle: per,
                    exact: true,
                })
            }
            ExpansionInfo::Prefix(digits) => {
                // Points U^k(1) = h of the shifted digit prefix, up to tail error;
                // enclose by padding with the extreme words 0^∞ and (⌊β⌋)^∞.
                let n = digits.len();
                let mut points = Vec::with_capacity(n);
                for k in 0..n {
                    let rest = FiniteWord(digits.0[k..].to_vec());
                    let lo_w = EventuallyPeriodicWord::from_finite(&rest);
                    let max_d = value.hi.floor_int().to_u8().unwrap_or(u8::MAX);
                    let hi_w = EventuallyPeriodicWord::new(
                        rest.clone(),
                        FiniteWord::from_digits(&[max_d]),
                    );
                    let lo = h_eval(&lo_w, value, opts.prec)?;
                    let hi = h_eval(&hi_w, value, opts.prec)?;
                    points.push(lo.hull(&hi));
                }
                Ok(CriticalOrbit { points, words: None, preperiod: 0, cycle: 0, exact: false })
            }
        }
    }

    fn compute_disc(value: &Enclosure, floor: u64, prec: u32) -> Result<Vec<Enclosure>, Error> {
        let is_integer = value.is_point() && value.lo.is_integer();
        let top = if is_integer { floor } else { floor.max(1) };
        let mut out = Vec::new();
        for j in 1..=top {
            if !is_integer && j > floor {
                break;
            }
            let p = Enclosure::from_i64(j as i64).div(value, prec)?;
            out.push(p);
        }
        Ok(out)
    }

    // ------------------------------------------------------------------
    // accessors

    pub fn spec(&self) -> &BetaSpec {
        &self.spec
    }

    pub fn value(&self) -> &Enclosure {
        &self.value
    }

    pub fn value_f64(&self) -> f64 {
        self.value.mid_f64()
    }

    pub fn floor(&self) -> u64 {
        self.floor
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    pub fn is_beta_number(&self) -> bool {
        !matches!(self.classification, Classification::NonPreperiodicUpToHorizon { .. })
    }

    /// π_β(1).
    pub fn expansion_of_one(&self) -> &ExpansionInfo {
        &self.expansion_one
    }

    /// π*_β(1).
    pub fn upper_expansion_of_one(&self) -> &ExpansionInfo {
        &self.upper_one
    }

    pub fn critical(&self) -> &CriticalOrbit {
        &self.critical
    }

    /// D_β = {j/β} ∩ (0,1].
    pub fn disc_points(&self) -> &[Enclosure] {
        &self.disc
    }

    // ------------------------------------------------------------------
    // the maps

    /// T_β(x) = βx − ⌊βx⌋.
    pub fn t_map(&self, x: &Enclosure) -> Result<Enclosure, Error> {
        let t = x.mul(&self.value, self.prec);
        match t.unambiguous_floor() {
            Some(k) => {
                let k = k.to_i64().ok_or_else(|| Error::PrecisionInsufficient("floor".into()))?;
                Ok(t.sub(&Enclosure::from_i64(k), self.prec))
            }
            None => {
                if t.is_point() && t.lo.is_integer() {
                    Ok(Enclosure::zero())
                } else {
                    Err(Error::PrecisionInsufficient(format!(
                        "βx straddles an integer near {}",
                        t.mid_f64()
                    )))
                }
            }
        }
    }

    /// U_β(x) = βx − ⌊βx⌋', with U_β(0) = 0.
    pub fn u_map(&self, x: &Enclosure) -> Result<Enclosure, Error> {
        if x.is_point() && x.lo.is_zero() {
            return Ok(Enclosure::zero());
        }
        let t = x.mul(&self.value, self.prec);
        if t.is_point() && t.lo.is_integer() {
            // exactly an integer: strict floor drops by one, so U = 1
            return Ok(Enclosure::one());
        }
        match t.unambiguous_floor() {
            Some(k) => {
                let k = k.to_i64().ok_or_else(|| Error::PrecisionInsufficient("floor".into()))?;
                Ok(t.sub(&Enclosure::from_i64(k), self.prec))
            }
            None => Err(Error::PrecisionInsufficient(format!(
                "βx straddles an integer near {}",
                t.mid_f64()
            ))),
        }
    }

    fn digits_from_info(info: &ExpansionInfo, n: usize) -> Option<FiniteWord> {
        match info {
            ExpansionInfo::Exact(w) => Some(w.first_digits(n)),
            ExpansionInfo::Prefix(p) => (n <= p.len()).then(|| FiniteWord(p.0[..n].to_vec())),
        }
    }

    /// First n digits of π_β(x).
    pub fn expand(&self, x: &Enclosure, n: usize) -> Result<FiniteWord, Error> {
        if x.is_point() && x.lo == Dyadic::one() {
            if let Some(w) = Self::digits_from_info(&self.expansion_one, n) {
                return Ok(w);
            }
        }
        let mut digits = Vec::with_capacity(n);
        let mut cur = x.clone();
        for _ in 0..n {
            let t = cur.mul(&self.value, self.prec);
            let k = match t.unambiguous_floor() {
                Some(k) => k,
                None if t.is_point() && t.lo.is_integer() => t.lo.floor_int(),
                None => return Err(Error::PrecisionInsufficient("expansion digit".into())),
            };
            let k64 = k.to_i64().ok_or_else(|| Error::PrecisionInsufficient("digit".into()))?;
            digits.push(k64 as u8);
            cur = t.sub(&Enclosure::from_i64(k64), self.prec);
        }
        Ok(FiniteWord::from_digits(&digits))
    }

    /// First n digits of π*_β(x).
    pub fn expand_upper(&self, x: &Enclosure, n: usize) -> Result<FiniteWord, Error> {
        if x.is_point() && x.lo == Dyadic::one() {
            if let Some(w) = Self::digits_from_info(&self.upper_one, n) {
                return Ok(w);
            }
        }
        let mut digits = Vec::with_capacity(n);
        let mut cur = x.clone();
        for _ in 0..n {
            if cur.is_point() && cur.lo.is_zero() {
                digits.push(0);
                continue;
            }
            let t = cur.mul(&self.value, self.prec);
            let k = if t.is_point() && t.lo.is_integer() {
                t.lo.floor_int() - 1
            } else {
                t.unambiguous_floor()
                    .ok_or_else(|| Error::PrecisionInsufficient("upper expansion digit".into()))?
            };
            let k64 = k.to_i64().ok_or_else(|| Error::PrecisionInsufficient("digit".into()))?;
            digits.push(k64 as u8);
            cur = t.sub(&Enclosure::from_i64(k64), self.prec);
        }
        Ok(FiniteWord::from_digits(&digits))
    }

    /// First `depth` points of the U_β-orbit of 1.
    pub fn critical_orbit(&self, depth: usize) -> Result<OrbitSample, Error> {
        let mut points = Vec::with_capacity(depth);
        for k in 0..depth {
            match self.critical.point(k) {
                Some(p) => points.push(p.clone()),
                None => {
                    return Err(Error::PrecisionInsufficient(format!(
                        "critical orbit only certified to depth {}",
                        self.critical.points.len()
                    )))
                }
            }
        }
        Ok(OrbitSample { points, map_tag: MapTag::U })
    }

    /// Does the U_β-orbit of x reach 1 within the horizon?
    pub fn z_membership(&self, x: &Enclosure, horizon: usize) -> Result<ZMembership, Error> {
        let mut cur = x.clone();
        for n in 1..=horizon {
            cur = self.u_map(&cur)?;
            if cur.is_point() && cur.lo == Dyadic::one() {
                return Ok(ZMembership::Yes(n));
            }
            if cur.contains_int(1) {
                return Err(Error::PrecisionInsufficient(
                    "orbit enclosure touches 1 without certifying equality".into(),
                ));
            }
        }
        Ok(ZMembership::NoUpToHorizon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(x: f64) -> Enclosure {
        Enclosure::from_f64(x)
    }

    #[test]
    fn t_map_examples() {
        let b2 = BetaParam::integer(2).unwrap();
        assert!(b2.t_map(&Enclosure::one()).unwrap().contains_int(0));
        // β=2, x=1/3 → 2/3 (hand arithmetic)
        let third = Enclosure::from_ratio(&BigInt::from(1), &BigInt::from(3), 128);
        let t = b2.t_map(&third).unwrap();
        let two_thirds = Enclosure::from_ratio(&BigInt::from(2), &BigInt::from(3), 128);
        assert!(t.overlaps(&two_thirds));
        // cubic: T(1) = β − 2 ≈ 0.481
        let bc = BetaParam::cubic_example().unwrap();
        let t1 = bc.t_map(&Enclosure::one()).unwrap();
        assert!((t1.mid_f64() - 0.481).abs() < 1e-3);
    }

    #[test]
    fn u_map_examples() {
        let b2 = BetaParam::integer(2).unwrap();
        assert!(b2.u_map(&Enclosure::one()).unwrap().contains_int(1));
        assert!(b2.u_map(&enc(0.5)).unwrap().contains_int(1));
        assert!(b2.u_map(&Enclosure::zero()).unwrap().contains_int(0));
    }

    #[test]
    fn expand_examples() {
        let b2 = BetaParam::integer(2).unwrap();
        assert_eq!(b2.expand(&Enclosure::one(), 3).unwrap(), FiniteWord::from_digits(&[2, 0, 0]));
        let third = Enclosure::from_ratio(&BigInt::from(1), &BigInt::from(3), 160);
        assert_eq!(b2.expand(&third, 4).unwrap(), FiniteWord::from_digits(&[0, 1, 0, 1]));
        let bc = BetaParam::cubic_example().unwrap();
        assert_eq!(
            bc.expand(&Enclosure::one(), 5).unwrap(),
            FiniteWord::from_digits(&[2, 1, 0, 1, 0])
        );
    }

    #[test]
    fn expand_upper_examples() {
        let b2 = BetaParam::integer(2).unwrap();
        assert_eq!(
            b2.expand_upper(&Enclosure::one(), 4).unwrap(),
            FiniteWord::from_digits(&[1, 1, 1, 1])
        );
        let g = BetaParam::golden().unwrap();
        assert_eq!(
            g.expand_upper(&Enclosure::one(), 4).unwrap(),
            FiniteWord::from_digits(&[1, 0, 1, 0])
        );
        assert_eq!(
            b2.expand_upper(&Enclosure::zero(), 3).unwrap(),
            FiniteWord::from_digits(&[0, 0, 0])
        );
    }

    #[test]
    fn critical_orbits() {
        // cubic: {1, x≈0.481, y≈0.194} with 2-cycle {x, y}
        let bc = BetaParam::cubic_example().unwrap();
        let co = bc.critical();
        assert!(co.exact);
        assert_eq!(co.preperiod, 1);
        assert_eq!(co.cycle, 2);
        assert!((co.points[0].mid_f64() - 1.0).abs() < 1e-20);
        assert!((co.points[1].mid_f64() - 0.481).abs() < 1e-3);
        assert!((co.points[2].mid_f64() - 0.194).abs() < 1e-3);
        // β=2: orbit {1}
        let b2 = BetaParam::integer(2).unwrap();
        assert_eq!(b2.critical().points.len(), 1);
        assert!(b2.critical().points[0].contains_int(1));
        // golden: {1, β−1}, cycle of length 2
        let g = BetaParam::golden().unwrap();
        assert_eq!(g.critical().cycle, 2);
        assert_eq!(g.critical().preperiod, 0);
        let sample = g.critical_orbit(5).unwrap();
        assert!((sample.points[1].mid_f64() - 0.618).abs() < 1e-3);
        assert!(sample.points[4].overlaps(&sample.points[0]));
    }

    #[test]
    fn z_membership_examples() {
        let b2 = BetaParam::integer(2).unwrap();
        assert_eq!(b2.z_membership(&enc(0.5), 8).unwrap(), ZMembership::Yes(1));
        assert_eq!(b2.z_membership(&enc(0.75), 8).unwrap(), ZMembership::Yes(2));
        let third = Enclosure::from_ratio(&BigInt::from(1), &BigInt::from(3), 160);
        assert_eq!(b2.z_membership(&third, 40).unwrap(), ZMembership::NoUpToHorizon);
    }

    #[test]
    fn classification_via_param() {
        let b2 = BetaParam::integer(2).unwrap();
        assert_eq!(b2.classification().kind_str(), "Simple");
        let g = BetaParam::golden().unwrap();
        assert_eq!(g.classification().kind_str(), "Simple");
        let bc = BetaParam::cubic_example().unwrap();
        assert_eq!(bc.classification().kind_str(), "NonSimple");
        // π*(1) for the cubic is the expansion itself
        let star = bc.upper_expansion_of_one().exact().unwrap();
        assert_eq!(format!("{}", star), "2(10)");
    }

    #[test]
    fn disc_points() {
        let b2 = BetaParam::integer(2).unwrap();
        assert_eq!(b2.disc_points().len(), 2); // {1/2, 1}
        let bc = BetaParam::cubic_example().unwrap();
        assert_eq!(bc.disc_points().len(), 2); // {1/β, 2/β}
        assert!((bc.disc_points()[0].mid_f64() - 0.403).abs() < 1e-3);
    }

    #[test]
    fn conjugacy_property() {
        // σ∘π_β = π_β∘T_β on sample points.
        let bc = BetaParam::cubic_example().unwrap();
        for xf in [0.1, 0.37, 0.52, 0.9] {
            let x = enc(xf);
            let w = bc.expand(&x, 12).unwrap();
            let tx = bc.t_map(&x).unwrap();
            let wt = bc.expand(&tx, 11).unwrap();
            assert_eq!(&w.0[1..], &wt.0[..]);
        }
    }

    #[test]
    fn retraction_error_bound() {
        // |h(ε₁..ε_n 0^∞) − x| ≤ β^{-n} β/(β−1)
        let g = BetaParam::golden().unwrap();
        let beta = g.value_f64();
        for xf in [0.2, 0.55, 0.83] {
            let x = enc(xf);
            for n in [4usize, 8, 16] {
                let w = g.expand(&x, n).unwrap();
                let h = h_eval(&EventuallyPeriodicWord::from_finite(&w), g.value(), 128).unwrap();
                let err = (h.mid_f64() - xf).abs();
                assert!(err <= beta.powi(-(n as i32)) * beta / (beta - 1.0) + 1e-12);
            }
        }
    }
}
