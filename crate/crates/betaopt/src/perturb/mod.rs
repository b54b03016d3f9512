//! Shadowing of periodic orbits across parameters, the explicit
//! joint-perturbation constants, perturbed potentials, maximizer
//! verification and the locking construction.

pub mod verify;

use crate::betanum::Classification;
use crate::dynamics::BetaParam;
use crate::error::Error;
use crate::numkit::{h_eval, Enclosure, EventuallyPeriodicWord};
use crate::orbits::potential::{HolderAlpha, HolderPotential};
use crate::orbits::{min_interpoint_distance, PeriodicOrbit, PointSpread};
use crate::shift::in_beta_shift;
use serde::Serialize;

pub use verify::{locking_check, verify_maximizer, LockReport, MaximizerVerdict, Verdict};

/// Per-point shadowing data for O_γ = (h_γ ∘ π_β)(O_β).
#[derive(Debug, Clone)]
pub struct ShadowReport {
    pub orbit_gamma: PeriodicOrbit,
    /// |x_γ − x_β| per point, aligned with the orbit's rotation order.
    pub distances: Vec<Enclosure>,
    /// (β−γ) γ² / (β (γ−1)²)
    pub upper_bound: Enclosure,
    /// s (β−γ) with s = β^{−N−2}; zero for the fixed orbit {0}.
    pub lower_bound: Enclosure,
    pub s: f64,
    pub n_zero_prefix: usize,
    pub cardinality_ok: bool,
}

/// Map a T_β/U_β-periodic orbit to its shadow at γ < β: the same periodic
/// words read at γ. Requires every rotation word to lie in S_γ.
pub fn shadow_orbit(
    beta: &BetaParam,
    gamma: &BetaParam,
    orbit_beta: &PeriodicOrbit,
) -> Result<ShadowReport, Error> {
    if !gamma.value().certainly_lt(beta.value()) {
        return Err(Error::PreconditionFailed("need 1 < γ < β".into()));
    }
    for p in &orbit_beta.points {
        if p.contains_int(1) {
            return Err(Error::PreconditionFailed("orbit must not contain the point 1".into()));
        }
    }
    let prec = beta.prec() + 32;
    let pperiod = orbit_beta.period;
    let mut gamma_points = Vec::with_capacity(pperiod);
    let mut n_zero_prefix = 0usize;
    for i in 0..pperiod {
        let rot = orbit_beta.word.rotated(i);
        let w = EventuallyPeriodicWord::periodic(&rot);
        if !in_beta_shift(gamma, &w)? {
            return Err(Error::NotShadowable(format!(
                "rotation {} of {} leaves the shift at γ",
                i, orbit_beta.word
            )));
        }
        if let Some(pos) = w.first_nonzero_pos() {
            n_zero_prefix = n_zero_prefix.max(pos - 1);
        }
        gamma_points.push(h_eval(&w, gamma.value(), prec)?);
    }

    let mut distances = Vec::with_capacity(pperiod);
    for i in 0..pperiod {
        distances.push(gamma_points[i].dist(&orbit_beta.points[i], prec));
    }

    let one = Enclosure::one();
    let bg = beta.value();
    let gg = gamma.value();
    let diff = bg.sub(gg, prec);
    let gm1 = gg.sub(&one, prec);
    let upper = diff
        .mul(&gg.pow(2, prec), prec)
        .div(&bg.mul(&gm1.pow(2, prec), prec), prec)?;

    let all_zero = orbit_beta.word.is_all_zero();
    let (lower, s) = if all_zero {
        (Enclosure::zero(), 0.0)
    } else {
        let s_enc = bg.pow(n_zero_prefix as u32 + 2, prec).recip(prec)?;
        (s_enc.mul(&diff, prec), s_enc.lo.to_f64())
    };

    // cardinality: the γ-points must be pairwise separated
    let mut cardinality_ok = true;
    for i in 0..pperiod {
        for j in i + 1..pperiod {
            if gamma_points[i].overlaps(&gamma_points[j]) {
                cardinality_ok = false;
            }
        }
    }

    Ok(ShadowReport {
        orbit_gamma: PeriodicOrbit {
            word: orbit_beta.word.clone(),
            points: gamma_points,
            period: pperiod,
            map_tag: orbit_beta.map_tag,
        },
        distances,
        upper_bound: upper,
        lower_bound: lower,
        s,
        n_zero_prefix,
        cardinality_ok,
    })
}

/// The explicit constant pack of the joint-perturbation step for
/// beta-transformations. Directions of rounding: window and radius constants
/// (r, C₂, c, s) round down, coefficient constants (K_β, L₁–L₄, M, C₁)
/// round up, so the gate γ ∈ (β−C₂, β) and the coefficient 2C₁|φ|_α(β−γ)^{α/2}
/// stay on the safe side of the exact formulas.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationConstants {
    pub p: usize,
    pub alpha: f64,
    pub r: f64,
    /// admissibility window radius (every orbit word lies in S_γ for γ ∈ (β−c, β))
    pub c: f64,
    /// sup over the window of γ²/(β(γ−1)²)
    pub m_const: f64,
    pub s: f64,
    pub n_zero_prefix: usize,
    pub k_beta: f64,
    pub c2: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: Option<f64>,
    pub l4: Option<f64>,
    pub c1: f64,
    pub orbit_meets_critical: bool,
    pub dist_to_disc: f64,
    pub dist_to_critical: f64,
    pub orbit_spread: f64,
}

fn min_dist_f64_lo(a: &[Enclosure], b: &[Enclosure]) -> f64 {
    let mut best = f64::INFINITY;
    for x in a {
        for y in b {
            best = best.min(x.dist(y, 160).lo.to_f64());
        }
    }
    best
}

/// Does the orbit intersect the critical orbit? Decided on words (exact for
/// beta-numbers).
fn orbit_meets_critical(beta: &BetaParam, orbit: &PeriodicOrbit) -> Result<bool, Error> {
    let crit_words = match &beta.critical().words {
        Some(w) => w,
        None => {
            return Err(Error::PreconditionFailed(
                "critical orbit words unavailable (not a certified beta-number)".into(),
            ))
        }
    };
    for i in 0..orbit.period {
        let rot = EventuallyPeriodicWord::periodic(&orbit.word.rotated(i));
        if crit_words.contains(&rot) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Find the admissibility window radius c ∈ (0, β−1): bisection on γ with
/// the exact membership test on the orbit's rotation words. Horizon ties are
/// treated as "not admitted", which only shrinks the window.
fn admissibility_window(beta: &BetaParam, orbit: &PeriodicOrbit) -> Result<f64, Error> {
    let beta_f = beta.value_f64();
    let words: Vec<EventuallyPeriodicWord> =
        (0..orbit.period).map(|i| EventuallyPeriodicWord::periodic(&orbit.word.rotated(i))).collect();
    let admitted = |g: f64| -> bool {
        let gp = match BetaParam::rational_from_f64(g) {
            Ok(p) => p,
            Err(_) => return false,
        };
        words.iter().all(|w| in_beta_shift(&gp, w).unwrap_or(false))
    };
    let mut lo = 1.0 + 1e-4;
    let mut hi = beta_f - 1e-9;
    if !admitted(hi) {
        return Err(Error::PreconditionFailed(
            "orbit words not admitted arbitrarily close to β".into(),
        ));
    }
    if admitted(lo) {
        return Ok((beta_f - lo).min(beta_f - 1.0 - 1e-9));
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if admitted(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((beta_f - hi).min(beta_f - 1.0 - 1e-9))
}

impl BetaParam {
    /// Exact rational parameter from the dyadic value of an f64.
    pub fn rational_from_f64(v: f64) -> Result<BetaParam, Error> {
        let d = crate::numkit::Dyadic::from_f64(v)
            .ok_or_else(|| Error::BracketInvalid("non-finite parameter".into()))?;
        // dyadic = mant·2^exp as a rational
        let r = dyadic_to_rational(&d);
        BetaParam::new(crate::dynamics::BetaSpec::Rational(r), &crate::dynamics::BetaOptions::default())
    }
}

fn dyadic_to_rational(d: &crate::numkit::Dyadic) -> num_rational::BigRational {
    use num_bigint::BigInt;
    let f = d.to_f64();
    // decompose exactly through the bit pattern
    let bits = f.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_bits == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let num = BigInt::from(sign) * BigInt::from(mant);
    if exp >= 0 {
        num_rational::BigRational::from(num << exp as u64)
    } else {
        num_rational::BigRational::new(num, BigInt::from(1) << (-exp) as u64)
    }
}

/// All constants of the beta joint-perturbation step for a given orbit.
pub fn perturbation_constants_beta(
    beta: &BetaParam,
    orbit: &PeriodicOrbit,
    alpha: HolderAlpha,
) -> Result<PerturbationConstants, Error> {
    match beta.classification() {
        Classification::NonSimple { .. } => {}
        other => {
            return Err(Error::PreconditionFailed(format!(
                "parameter must be a non-simple beta-number, got {}",
                other.kind_str()
            )))
        }
    }
    for pt in &orbit.points {
        if pt.contains_int(1) {
            return Err(Error::PreconditionFailed("orbit must not contain 1".into()));
        }
    }
    let a = alpha.f64();
    let beta_f = beta.value_f64();
    let crit = beta.critical();
    let disc: Vec<Enclosure> = beta.disc_points().to_vec();

    let d_disc = min_dist_f64_lo(&orbit.points, &disc);
    let spread = match min_interpoint_distance(&orbit.points) {
        PointSpread::Infinite => f64::INFINITY,
        PointSpread::Finite(e) => e.lo.to_f64(),
    };
    let d_crit = min_dist_f64_lo(&orbit.points, &crit.points);
    let meets = orbit_meets_critical(beta, orbit)?;
    let r = if meets {
        (d_disc / 3.0).min(spread / 4.0)
    } else {
        (d_disc / 3.0).min(spread / 4.0).min(d_crit / 2.0)
    };
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::PreconditionFailed("separation radius r is not positive".into()));
    }

    let c = admissibility_window(beta, orbit)?;
    let m_const = {
        let g = beta_f - c;
        (g * g / (beta_f * (g - 1.0) * (g - 1.0))) * (1.0 + 1e-12)
    };

    // Δ(O*(1)) over the distinct critical points
    let crit_spread = match min_interpoint_distance(&crit.points) {
        PointSpread::Infinite => f64::INFINITY,
        PointSpread::Finite(e) => e.lo.to_f64(),
    };

    let c2 = c
        .min(0.5)
        .min(0.5 * crit_spread)
        .min(crit_spread / (2.0 * m_const))
        .min(r / m_const)
        .min(beta_f * r);

    let k_beta = (1.0 / (beta_f.powf(a) - 1.0)) * (1.0 + 1e-12);
    let l1 = 1.0 + 1.0 / ((beta_f - c2).powf(a) - 1.0) + 2.0 * beta_f.powf(a) * k_beta;
    let l2 = 3.0 * k_beta + 1.0 + m_const.powf(a);
    let mut c1 = 1.0f64
        .max(l2 * c2.powf(a / 2.0) * beta_f.powf(a) * r.powf(-a))
        .max(r.powf(-a) * beta_f.powf(a) * (orbit.period as f64 + 1.0 + l1) * l2);

    let all_zero = orbit.word.is_all_zero();
    let mut n_zero_prefix = 0usize;
    let (s, l3, l4) = if all_zero {
        (0.0, None, None)
    } else {
        for i in 0..orbit.period {
            let w = EventuallyPeriodicWord::periodic(&orbit.word.rotated(i));
            if let Some(pos) = w.first_nonzero_pos() {
                n_zero_prefix = n_zero_prefix.max(pos - 1);
            }
        }
        let s = beta_f.powi(-(n_zero_prefix as i32) - 2) * (1.0 - 1e-12);
        let ln_bc2 = (beta_f - c2).ln();
        let l3 = 1.0 + (beta_f.ln() + (1.0 / a) * l2.ln() - s.ln()) / ln_bc2;
        let l4 = (s.powf(a) / beta_f.powf(a)) * l1
            + orbit.period as f64 * l2
            + l3 * l2
            + l2 / (std::f64::consts::E * a * ln_bc2);
        c1 = c1.max(r.powf(-a) * beta_f.powf(a) * (l4 + l2));
        (s, Some(l3), Some(l4))
    };
    c1 *= 1.0 + 1e-12;

    Ok(PerturbationConstants {
        p: orbit.period,
        alpha: a,
        r,
        c,
        m_const,
        s,
        n_zero_prefix,
        k_beta,
        c2,
        l1,
        l2,
        l3,
        l4,
        c1,
        orbit_meets_critical: meets,
        dist_to_disc: d_disc,
        dist_to_critical: d_crit,
        orbit_spread: spread,
    })
}

/// φ − 2C₁|φ|_α (β−γ)^{α/2} d(·, O_γ)^α, with the seminorm bound updated to
/// |φ|_α (1 + 2C₁ (β−γ)^{α/2}).
pub fn build_perturbed(
    phi: &HolderPotential,
    consts: &PerturbationConstants,
    beta: &BetaParam,
    gamma: &BetaParam,
    orbit_gamma: &PeriodicOrbit,
) -> HolderPotential {
    let diff = (beta.value_f64() - gamma.value_f64()).max(0.0);
    let t = 2.0 * consts.c1 * phi.seminorm_bound * diff.powf(consts.alpha / 2.0);
    if t == 0.0 {
        return phi.clone();
    }
    let alpha = phi.alpha;
    HolderPotential::sum(vec![
        phi.clone(),
        HolderPotential::distance_power(orbit_gamma.points.clone(), alpha, -t),
    ])
}

/// The locked potential φ_t = φ − t d(·, O)^α. t = 0 returns φ unchanged.
pub fn locking_potential(phi: &HolderPotential, orbit: &PeriodicOrbit, t: f64) -> HolderPotential {
    if t == 0.0 {
        return phi.clone();
    }
    HolderPotential::sum(vec![
        phi.clone(),
        HolderPotential::distance_power(orbit.points.clone(), phi.alpha, -t),
    ])
}

/// Constant pack for the expanding circle maps x ↦ kx mod 1.
#[derive(Debug, Clone, Serialize)]
pub struct ExpandingConstants {
    pub k: u32,
    pub p: usize,
    pub alpha: f64,
    pub lambda: f64,
    pub lip: f64,
    pub expanding_radius: f64,
    pub delta: f64,
    pub orbit_spread: f64,
    pub r: f64,
    pub d_const: f64,
    pub l_mane: f64,
    pub l1: f64,
    pub l2: f64,
    pub c: f64,
}

/// Instantiation of the expanding-map joint-perturbation constants for the
/// circle: λ = k, LIP = k, expanding radius 1/(2k), δ = 1/4.
pub fn perturbation_constants_expanding(
    k: u32,
    orbit_points: &[f64],
    alpha: HolderAlpha,
    l_mane: f64,
) -> ExpandingConstants {
    use crate::subaction::circle::d_circle;
    let a = alpha.f64();
    let lambda = k as f64;
    let lip = k as f64;
    let gamma_exp = 1.0 / (2.0 * lambda);
    let delta = 0.25f64;
    let p = orbit_points.len();
    let spread = if p <= 1 {
        f64::INFINITY
    } else {
        let mut best = f64::INFINITY;
        for i in 0..p {
            for j in i + 1..p {
                best = best.min(d_circle(orbit_points[i], orbit_points[j]));
            }
        }
        best
    };
    let r = (spread / 4.0).min(gamma_exp);
    let last = if spread.is_finite() {
        (lambda - 1.0) * spread / (4.0 + spread)
    } else {
        f64::INFINITY
    };
    let d_const = delta
        .min(lip)
        .min((lambda - 1.0) * delta / (1.0 + delta))
        .min((lambda - 1.0) / 2.0)
        .min(last);
    let l1 = 1.0 + 1.0 / ((lambda - d_const).powf(a) - 1.0) + 2.0 * l_mane * (2.0 * lip).powf(a);
    let l2 = l_mane + 1.0 + (lambda - d_const - 1.0).powf(-a);
    let c = 1.0f64.max(l2 * (1.0 + p as f64 + l1) * (2.0 * lip / r).powf(a));
    ExpandingConstants {
        k,
        p,
        alpha: a,
        lambda,
        lip,
        expanding_radius: gamma_exp,
        delta,
        orbit_spread: spread,
        r,
        d_const,
        l_mane,
        l1,
        l2,
        c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::MapTag;
    use crate::numkit::FiniteWord;
    use crate::orbits::enumerate_periodic_orbits;

    fn cubic_orbit(word: &[u8]) -> (BetaParam, PeriodicOrbit) {
        let beta = BetaParam::cubic_example().unwrap();
        let orbits = enumerate_periodic_orbits(&beta, word.len(), MapTag::U, 100_000).unwrap();
        let w = FiniteWord::from_digits(word).min_rotation();
        let orbit = orbits.into_iter().find(|o| o.word == w).expect("orbit present");
        (beta, orbit)
    }

    #[test]
    fn shadow_fixed_point_orbit() {
        // O = {z} via word (1): O_γ = {1/(γ−1)}, distance = (β−γ)/((β−1)(γ−1)).
        let (beta, orbit) = cubic_orbit(&[1]);
        let gamma = BetaParam::rational_from_f64(beta.value_f64() - 1e-3).unwrap();
        let rep = shadow_orbit(&beta, &gamma, &orbit).unwrap();
        assert!(rep.cardinality_ok);
        let bf = beta.value_f64();
        let gf = gamma.value_f64();
        let expected = (bf - gf) / ((bf - 1.0) * (gf - 1.0));
        assert!((rep.distances[0].mid_f64() - expected).abs() < 1e-12);
        assert!((rep.orbit_gamma.points[0].mid_f64() - 1.0 / (gf - 1.0)).abs() < 1e-12);
        // bounds hold
        assert!(rep.distances[0].lo >= rep.lower_bound.lo);
        assert!(rep.distances[0].hi <= rep.upper_bound.hi);
    }

    #[test]
    fn shadow_zero_orbit() {
        // O = {0}: the shadow is {0} with all distances 0.
        let (beta, orbit) = cubic_orbit(&[0]);
        let gamma = BetaParam::rational_from_f64(beta.value_f64() - 1e-3).unwrap();
        let rep = shadow_orbit(&beta, &gamma, &orbit).unwrap();
        assert!(rep.orbit_gamma.points[0].contains_int(0));
        assert!(rep.distances[0].hi.to_f64() == 0.0);
        assert!(rep.lower_bound.lo.to_f64() == 0.0);
    }

    #[test]
    fn locking_t_zero_returns_phi() {
        let (_, orbit) = cubic_orbit(&[1]);
        let phi = HolderPotential::identity();
        let locked = locking_potential(&phi, &orbit, 0.0);
        assert_eq!(locked.seminorm_bound, phi.seminorm_bound);
        assert_eq!(locked.eval(0.3), phi.eval(0.3));
    }

    use crate::orbits::potential::HolderPotential;

    #[test]
    fn shadow_two_cycle() {
        let (beta, orbit) = cubic_orbit(&[1, 0]);
        let gamma = BetaParam::rational_from_f64(beta.value_f64() - 1e-3).unwrap();
        let rep = shadow_orbit(&beta, &gamma, &orbit).unwrap();
        let gf = gamma.value_f64();
        let pts = rep.orbit_gamma.points_f64();
        let expect_x = gf / (gf * gf - 1.0);
        let expect_y = 1.0 / (gf * gf - 1.0);
        assert!(pts.iter().any(|p| (p - expect_x).abs() < 1e-12));
        assert!(pts.iter().any(|p| (p - expect_y).abs() < 1e-12));
        for d in &rep.distances {
            assert!(d.lo >= rep.lower_bound.lo, "lower bound violated");
            assert!(d.hi <= rep.upper_bound.hi, "upper bound violated");
        }
    }

    #[test]
    fn constants_fixed_point_branch() {
        // O = {z}: disjoint from the critical orbit, so r uses all three terms:
        // r = min{d(O,D)/3, ∞, d(O,O*)/2} ≈ min{0.131/3, ∞, 0.194/2} ≈ 0.0437.
        let (beta, orbit) = cubic_orbit(&[1]);
        let consts = perturbation_constants_beta(&beta, &orbit, HolderAlpha::one()).unwrap();
        assert!(!consts.orbit_meets_critical);
        assert!((consts.dist_to_disc - 0.131).abs() < 2e-3, "d(O,D) = {}", consts.dist_to_disc);
        assert!((consts.dist_to_critical - 0.194).abs() < 1e-3);
        assert!((consts.r - consts.dist_to_disc / 3.0).abs() < 1e-12);
        assert!(consts.r > 0.0 && consts.c2 > 0.0 && consts.c1 >= 1.0);
        assert!(consts.c < beta.value_f64() - 1.0);
        // z is a fixed point: period 1, Δ = ∞
        assert_eq!(consts.p, 1);
        assert!(consts.orbit_spread.is_infinite());
        // s with N = 0: β^{-2}
        assert!((consts.s - beta.value_f64().powi(-2)).abs() < 1e-9);
    }

    #[test]
    fn constants_cycle_branch() {
        // O = {x,y} ⊆ O*(1): second branch of r (no critical-distance term).
        let (beta, orbit) = cubic_orbit(&[1, 0]);
        let consts = perturbation_constants_beta(&beta, &orbit, HolderAlpha::one()).unwrap();
        assert!(consts.orbit_meets_critical);
        let r_expected = (consts.dist_to_disc / 3.0).min(consts.orbit_spread / 4.0);
        assert!((consts.r - r_expected).abs() < 1e-12);
        assert_eq!(consts.p, 2);
        // N = 1 for the rotation (01): s = β^{-3}
        assert!((consts.s - beta.value_f64().powi(-3)).abs() < 1e-9);
        assert!(consts.l3.is_some() && consts.l4.is_some());
    }

    #[test]
    fn k_alpha_beta_trivial() {
        assert!((HolderAlpha::one().k_alpha_beta(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perturbed_potential_shape() {
        let (beta, orbit) = cubic_orbit(&[1]);
        let consts = perturbation_constants_beta(&beta, &orbit, HolderAlpha::one()).unwrap();
        let gamma =
            BetaParam::rational_from_f64(beta.value_f64() - (1e-3f64).min(consts.c2 / 2.0)).unwrap();
        let shadow = shadow_orbit(&beta, &gamma, &orbit).unwrap();
        let phi = HolderPotential::distance_power(
            orbit.points.clone(),
            HolderAlpha::one(),
            -1.0,
        );
        let pert = build_perturbed(&phi, &consts, &beta, &gamma, &shadow.orbit_gamma);
        let diff = beta.value_f64() - gamma.value_f64();
        let expected_bound = 1.0 * (1.0 + 2.0 * consts.c1 * diff.powf(0.5));
        assert!((pert.seminorm_bound - expected_bound).abs() < 1e-9);
        // constant φ stays unchanged
        let c = HolderPotential::constant(1.0);
        let pert_c = build_perturbed(&c, &consts, &beta, &gamma, &shadow.orbit_gamma);
        assert_eq!(pert_c.seminorm_bound, 0.0);
        assert_eq!(pert_c.eval(0.3), 1.0);
    }

    #[test]
    fn expanding_constants_examples() {
        // k=2, orbit {0}: p=1, Δ=∞, r = min{∞, 1/4} = 1/4, D = 1/5.
        let c = perturbation_constants_expanding(2, &[0.0], HolderAlpha::one(), 24.0);
        assert_eq!(c.p, 1);
        assert!(c.orbit_spread.is_infinite());
        assert!((c.r - 0.25).abs() < 1e-15);
        assert!((c.d_const - 0.2).abs() < 1e-12);
        // k=2, orbit {1/3, 2/3}: Δ = 1/3 (circle), r = min{1/12, 1/4} = 1/12.
        let c2 = perturbation_constants_expanding(
            2,
            &[1.0 / 3.0, 2.0 / 3.0],
            HolderAlpha::one(),
            24.0,
        );
        assert!((c2.orbit_spread - 1.0 / 3.0).abs() < 1e-12);
        assert!((c2.r - 1.0 / 12.0).abs() < 1e-12);
        // monotonicity: C nondecreasing in p at fixed r
        assert!(c2.c >= c.c);
    }
}

#[cfg(test)]
mod shadow_proximity_tests {
    use super::*;
    use crate::dynamics::MapTag;
    use crate::numkit::FiniteWord;
    use crate::orbits::enumerate_periodic_orbits;

    #[test]
    fn shadow_bounds_at_extreme_proximity() {
        // offset 1e-8: the distances are tiny but the enclosures still
        // separate them from zero and certify both bounds.
        let beta = BetaParam::cubic_example().unwrap();
        let w = FiniteWord::from_digits(&[1, 0]).min_rotation();
        let orbit = enumerate_periodic_orbits(&beta, 2, MapTag::U, 10_000)
            .unwrap()
            .into_iter()
            .find(|o| o.word == w)
            .unwrap();
        let gamma = BetaParam::rational_from_f64(beta.value_f64() - 1e-8).unwrap();
        let rep = shadow_orbit(&beta, &gamma, &orbit).unwrap();
        assert!(rep.cardinality_ok);
        for d in &rep.distances {
            assert!(d.lo.sign() > 0, "distance not separated from zero");
            assert!(d.lo >= rep.lower_bound.lo);
            assert!(d.hi <= rep.upper_bound.hi);
        }
    }
}
