//! Numerical stand-in for "unique maximizing measure": strict dominance over
//! every periodic rival plus closeness to a certified upper bound on Q.

use crate::dynamics::{BetaParam, MapTag};
use crate::error::Error;
use crate::numkit::Enclosure;
use crate::orbits::potential::{Family, HolderPotential};
use crate::orbits::{enumerate_periodic_orbits, orbit_average, PeriodicOrbit};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct MaximizerVerdict {
    pub verdict: Verdict,
    pub target_average: Enclosure,
    pub best_rival_average: Option<Enclosure>,
    pub best_rival_word: Option<String>,
    pub q_upper: f64,
    pub q_upper_slack: f64,
    pub certificate_used: bool,
    pub rivals: usize,
    pub slack_allowed: f64,
}

/// The orbit-tracking constant C_O = max{1, ε^{−α}} with
/// ε = γ^{1−n} min{γ·d(O, D_γ), Δ(O)/2}: within ε of the orbit, n−1 steps
/// of U_γ stay off D_γ and track within Δ/2.
fn tracking_constant(gamma: &BetaParam, orbit: &PeriodicOrbit, alpha: f64) -> f64 {
    let n = orbit.period;
    if n == 1 {
        return 1.0;
    }
    let g = gamma.value_f64();
    let mut d_disc = f64::INFINITY;
    for p in &orbit.points {
        for d in gamma.disc_points() {
            d_disc = d_disc.min(p.dist(d, 160).lo.to_f64());
        }
    }
    let spread = match crate::orbits::min_interpoint_distance(&orbit.points) {
        crate::orbits::PointSpread::Infinite => f64::INFINITY,
        crate::orbits::PointSpread::Finite(e) => e.lo.to_f64(),
    };
    let eps = g.powi(1 - n as i32) * (g * d_disc).min(spread / 2.0);
    if eps <= 0.0 {
        return f64::INFINITY;
    }
    1.0f64.max(eps.powf(-alpha))
}

/// If φ = base − t·d(·, O_target)^α with t ≥ C_O·|base|_α, the locking
/// inequality certifies Q = target average exactly. Returns the certified
/// upper bound when applicable.
fn locking_certificate(
    gamma: &BetaParam,
    phi: &HolderPotential,
    target: &PeriodicOrbit,
    target_avg: &Enclosure,
) -> Option<f64> {
    let parts: &[HolderPotential] = match &phi.family {
        Family::Sum(parts) => parts,
        Family::DistancePower { .. } => std::slice::from_ref(phi),
        _ => return None,
    };
    let mut t = 0.0f64;
    let mut base_seminorm = 0.0f64;
    let tol = 1e-9;
    for part in parts {
        let mut matched = false;
        if let Family::DistancePower { set_f64, scale, .. } = &part.family {
            if *scale < 0.0 && set_f64.len() == target.points.len() {
                let tgt = target.points_f64();
                let all_match = set_f64
                    .iter()
                    .all(|&s| tgt.iter().any(|&g| (s - g).abs() < tol));
                if all_match {
                    t += -scale;
                    matched = true;
                }
            }
        }
        if !matched {
            base_seminorm += part.seminorm_bound;
        }
    }
    if t <= 0.0 {
        return None;
    }
    let c_o = tracking_constant(gamma, target, phi.alpha.f64());
    if t >= c_o * base_seminorm * (1.0 + 1e-9) {
        Some(target_avg.hi.to_f64())
    } else {
        None
    }
}

/// Compare the target orbit's average against every periodic rival up to
/// max_period and against a certified upper bound on Q.
///
/// Verified: strict enclosure separation from all rivals AND
/// q_upper − target ≤ slack. Refuted: some rival strictly dominates.
/// Inconclusive otherwise.
#[allow(clippy::too_many_arguments)]
pub fn verify_maximizer(
    gamma: &BetaParam,
    phi: &HolderPotential,
    target: &PeriodicOrbit,
    max_period: usize,
    depth: usize,
    map_tag: MapTag,
    slack: f64,
    budget: usize,
) -> Result<MaximizerVerdict, Error> {
    let rivals = enumerate_periodic_orbits(gamma, max_period, map_tag, budget)?;
    verify_maximizer_against(gamma, phi, target, &rivals, depth, slack, budget)
}

/// As [`verify_maximizer`] with a pre-enumerated rival set (the locking
/// trials reuse one enumeration across all perturbations).
pub fn verify_maximizer_against(
    gamma: &BetaParam,
    phi: &HolderPotential,
    target: &PeriodicOrbit,
    rivals: &[PeriodicOrbit],
    depth: usize,
    slack: f64,
    budget: usize,
) -> Result<MaximizerVerdict, Error> {
    let target_avg = orbit_average(phi, target)?;
    let target_word = target.word.min_rotation();

    let averages: Result<Vec<(&PeriodicOrbit, Enclosure)>, Error> = rivals
        .par_iter()
        .filter(|o| o.word != target_word)
        .map(|o| {
            let avg = orbit_average(phi, o)?;
            Ok((o, avg))
        })
        .collect();
    let averages = averages?;
    let rival_count = averages.len();

    let mut best: Option<(Enclosure, String)> = None;
    let mut refuted = false;
    let mut separated = true;
    for (orbit, avg) in &averages {
        if avg.lo > target_avg.hi {
            refuted = true;
        }
        if !(avg.hi < target_avg.lo) {
            separated = false;
        }
        let replace = match &best {
            None => true,
            Some((cur, _)) => avg.mid_f64() > cur.mid_f64(),
        };
        if replace {
            best = Some((avg.clone(), format!("{}", orbit.word)));
        }
    }

    let (tube_upper, _coarse) = crate::orbits::q_upper_bound(gamma, phi, depth, budget)?;
    let mut q_upper = tube_upper;
    let mut cert = false;
    if let Some(certified) = locking_certificate(gamma, phi, target, &target_avg) {
        if certified < q_upper {
            q_upper = certified;
            cert = true;
        }
    }
    let q_slack = q_upper - target_avg.hi.to_f64();

    let verdict = if refuted {
        Verdict::Refuted
    } else if separated && q_slack <= slack {
        Verdict::Verified
    } else {
        Verdict::Inconclusive
    };
    let (best_avg, best_word) = match best {
        Some((a, w)) => (Some(a), Some(w)),
        None => (None, None),
    };
    Ok(MaximizerVerdict {
        verdict,
        target_average: target_avg,
        best_rival_average: best_avg,
        best_rival_word: best_word,
        q_upper,
        q_upper_slack: q_slack,
        certificate_used: cert,
        rivals: rival_count,
        slack_allowed: slack,
    })
}

/// One locking trial outcome.
#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub adversarial: bool,
    pub verdict: Verdict,
    pub q_upper_slack: f64,
}

/// Report of a locking stability check.
#[derive(Debug, Clone, Serialize)]
pub struct LockReport {
    pub trials: usize,
    pub passed: usize,
    pub failed: Vec<usize>,
    pub outcomes: Vec<TrialOutcome>,
    /// empirical minimal C with ∫φdν ≤ ∫φdμ + C|φ|_α ∫d(·,O)^α dν over rivals
    pub empirical_c: f64,
    /// the tracking constant C_O of the target orbit
    pub tracking_c: f64,
    pub delta_norm: f64,
}

fn random_trig(rng: &mut ChaCha8Rng, degree: usize, seminorm: f64) -> HolderPotential {
    let mut coeffs: Vec<(f64, f64)> = (0..degree)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let raw = HolderPotential::trig(0.0, coeffs.clone());
    let scale = if raw.seminorm_bound > 0.0 { seminorm / raw.seminorm_bound } else { 0.0 };
    for c in coeffs.iter_mut() {
        c.0 *= scale;
        c.1 *= scale;
    }
    HolderPotential::trig(0.0, coeffs)
}

/// Re-run the maximizer verdict under `trials` seeded perturbations ψ with
/// |ψ|_α ≤ delta_norm (trig family), plus adversarial members pulling toward
/// rival orbits. Also reports the empirical locking constant.
#[allow(clippy::too_many_arguments)]
pub fn locking_check(
    beta: &BetaParam,
    phi_t: &HolderPotential,
    orbit: &PeriodicOrbit,
    delta_norm: f64,
    trials: usize,
    seed: u64,
    max_period: usize,
    depth: usize,
    slack: f64,
    budget: usize,
) -> Result<LockReport, Error> {
    let base = verify_maximizer(beta, phi_t, orbit, max_period, depth, MapTag::U, slack, budget)?;
    if base.verdict != Verdict::Verified {
        return Err(Error::PreconditionFailed(format!(
            "target orbit not verified for the unperturbed potential (verdict {:?})",
            base.verdict
        )));
    }

    // adversarial pulls toward the strongest rivals
    let rivals = enumerate_periodic_orbits(beta, max_period.min(4), MapTag::U, budget)?;
    let target_word = orbit.word.min_rotation();
    let adversaries: Vec<HolderPotential> = rivals
        .iter()
        .filter(|o| o.word != target_word)
        .take(3)
        .map(|o| {
            HolderPotential::distance_power(o.points.clone(), phi_t.alpha, -delta_norm)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perturbations: Vec<(bool, HolderPotential)> = Vec::with_capacity(trials);
    let n_adv = adversaries.len().min(trials);
    for psi in adversaries.into_iter().take(n_adv) {
        perturbations.push((true, psi));
    }
    while perturbations.len() < trials {
        perturbations.push((false, random_trig(&mut rng, 8, delta_norm)));
    }

    let rival_set = enumerate_periodic_orbits(beta, max_period, MapTag::U, budget)?;
    let outcomes: Result<Vec<TrialOutcome>, Error> = perturbations
        .into_par_iter()
        .enumerate()
        .map(|(i, (adv, psi))| {
            let perturbed = if delta_norm == 0.0 {
                phi_t.clone()
            } else {
                sum_mixed(phi_t, &psi)
            };
            let v = verify_maximizer_against(
                beta,
                &perturbed,
                orbit,
                &rival_set,
                depth,
                slack,
                budget,
            )?;
            Ok(TrialOutcome {
                index: i,
                adversarial: adv,
                verdict: v.verdict,
                q_upper_slack: v.q_upper_slack,
            })
        })
        .collect();
    let outcomes = outcomes?;
    let failed: Vec<usize> = outcomes
        .iter()
        .filter(|o| o.verdict != Verdict::Verified)
        .map(|o| o.index)
        .collect();
    let passed = outcomes.len() - failed.len();

    // empirical locking constant over rivals
    let target_avg = orbit_average(phi_t, orbit)?;
    let dist_pot =
        HolderPotential::distance_power(orbit.points.clone(), phi_t.alpha, 1.0);
    let all_rivals = enumerate_periodic_orbits(beta, max_period, MapTag::U, budget)?;
    let mut empirical_c = f64::NEG_INFINITY;
    for riv in all_rivals.iter().filter(|o| o.word != target_word) {
        let avg = orbit_average(phi_t, riv)?.mid_f64();
        let dint = orbit_average(&dist_pot, riv)?.mid_f64();
        if dint > 0.0 && phi_t.seminorm_bound > 0.0 {
            let c = (avg - target_avg.mid_f64()) / (phi_t.seminorm_bound * dint);
            empirical_c = empirical_c.max(c);
        }
    }
    if empirical_c == f64::NEG_INFINITY {
        empirical_c = 0.0;
    }
    let tracking_c = tracking_constant(beta, orbit, phi_t.alpha.f64());

    Ok(LockReport {
        trials: outcomes.len(),
        passed,
        failed,
        outcomes,
        empirical_c,
        tracking_c,
        delta_norm,
    })
}

/// Sum allowing mixed exponents: the α=1 trig perturbation of an α<1 base is
/// still α-Hölder on [0,1] with |ψ|_α ≤ |ψ|_1 (diam ≤ 1).
fn sum_mixed(base: &HolderPotential, psi: &HolderPotential) -> HolderPotential {
    if base.alpha == psi.alpha {
        return HolderPotential::sum(vec![base.clone(), psi.clone()]);
    }
    let mut rescaled = psi.clone();
    rescaled.alpha = base.alpha;
    HolderPotential::sum(vec![base.clone(), rescaled])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::FiniteWord;
    use crate::orbits::potential::HolderAlpha;
    use crate::presets;

    fn find_orbit(beta: &BetaParam, word: &[u8], tag: MapTag) -> PeriodicOrbit {
        let w = FiniteWord::from_digits(word).min_rotation();
        enumerate_periodic_orbits(beta, word.len(), tag, 100_000)
            .unwrap()
            .into_iter()
            .find(|o| o.word == w)
            .expect("orbit")
    }

    #[test]
    fn locked_distance_potential_verifies() {
        // φ = −d(·, O)^α is uniquely maximized on O: rivals are strictly
        // negative, the certificate pins Q = 0.
        let beta = BetaParam::cubic_example().unwrap();
        let orbit = find_orbit(&beta, &[1], MapTag::U);
        let phi = HolderPotential::distance_power(
            orbit.points.clone(),
            HolderAlpha::one(),
            -1.0,
        );
        let v = verify_maximizer(&beta, &phi, &orbit, 8, 10, MapTag::U, 1e-3, 500_000).unwrap();
        assert_eq!(v.verdict, Verdict::Verified);
        assert!(v.certificate_used);
        assert!(v.q_upper_slack.abs() < 1e-12);
        assert!((v.target_average.mid_f64() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn remark_two_cycle_refuted() {
        // The pinned potential has average −1/2 on {x,y} but 0 at the fixed
        // point z: the rival strictly dominates.
        let beta = BetaParam::cubic_example().unwrap();
        let phi = presets::cubic_example_potential(&beta).unwrap();
        let orbit = find_orbit(&beta, &[1, 0], MapTag::U);
        let v = verify_maximizer(&beta, &phi, &orbit, 6, 10, MapTag::U, 1e-3, 200_000).unwrap();
        assert_eq!(v.verdict, Verdict::Refuted);
        assert!((v.target_average.mid_f64() + 0.5).abs() < 1e-9);
        assert!(v.best_rival_average.unwrap().mid_f64() >= -1e-9);
    }

    #[test]
    fn locking_trials_pass_below_margin() {
        let beta = BetaParam::cubic_example().unwrap();
        let orbit = find_orbit(&beta, &[1, 0], MapTag::U);
        let phi_t = locking_potential(&HolderPotential::constant(0.0), &orbit, 1.0);
        let rep = locking_check(&beta, &phi_t, &orbit, 0.01, 8, 7, 6, 10, 1e-3, 200_000).unwrap();
        assert_eq!(rep.passed, rep.trials, "failures: {:?}", rep.failed);
        // the empirical constant never exceeds the certified tracking constant
        assert!(rep.empirical_c.is_finite());
        assert!(rep.empirical_c <= rep.tracking_c);
    }

    use crate::perturb::locking_potential;

    #[test]
    fn locking_flips_above_margin() {
        let beta = BetaParam::cubic_example().unwrap();
        let orbit = find_orbit(&beta, &[1, 0], MapTag::U);
        let phi_t = locking_potential(&HolderPotential::constant(0.0), &orbit, 1.0);
        let rep = locking_check(&beta, &phi_t, &orbit, 2.0, 6, 11, 6, 10, 1e-3, 200_000).unwrap();
        assert!(!rep.failed.is_empty(), "expected at least one failure at delta 2");
    }

    #[test]
    fn zero_delta_trivially_passes() {
        let beta = BetaParam::cubic_example().unwrap();
        let orbit = find_orbit(&beta, &[1], MapTag::U);
        let phi_t = locking_potential(&HolderPotential::constant(0.0), &orbit, 1.0);
        let rep = locking_check(&beta, &phi_t, &orbit, 0.0, 5, 3, 6, 10, 1e-3, 200_000).unwrap();
        assert_eq!(rep.passed, rep.trials);
    }
}
