//! Sub-actions for the expanding circle maps x ↦ kx mod 1, by backward
//! dynamic programming, with the explicit seminorm constant of the
//! expanding-map cohomology lemma instantiated for the circle.

use crate::error::Error;
use crate::orbits::potential::HolderPotential;
use serde::Serialize;

/// Circle-map constants: λ = k, expanding radius 1/(2k), surjectivity radius
/// δ = 1/4, τ = min{(λ−1)δ/2, δ}, N = ⌈1/τ⌉, diameter 1/2.
#[derive(Debug, Clone, Serialize)]
pub struct CircleConstants {
    pub k: u32,
    pub lambda: f64,
    pub expanding_radius: f64,
    pub delta: f64,
    pub tau: f64,
    pub n_sep: u32,
    pub diam: f64,
    /// L = max{1/(λ^α−1), δ^{-α} N (δ^α λ^α / (2^α (λ^α−1)) + diam^α)}
    pub l_constant: f64,
}

impl CircleConstants {
    pub fn new(k: u32, alpha: f64) -> Self {
        assert!(k >= 2);
        let lambda = k as f64;
        let delta = 0.25f64;
        let tau = ((lambda - 1.0) * delta / 2.0).min(delta);
        let n_sep = (1.0 / tau).ceil() as u32;
        let diam = 0.5f64;
        let la = lambda.powf(alpha);
        let l1 = 1.0 / (la - 1.0);
        let l2 = delta.powf(-alpha)
            * n_sep as f64
            * (delta.powf(alpha) * la / ((2.0f64).powf(alpha) * (la - 1.0)) + diam.powf(alpha));
        CircleConstants {
            k,
            lambda,
            expanding_radius: 1.0 / (2.0 * lambda),
            delta,
            tau,
            n_sep,
            diam,
            l_constant: l1.max(l2),
        }
    }
}

/// Circle distance.
pub fn d_circle(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Result of a circle sub-action run.
#[derive(Debug, Clone, Serialize)]
pub struct CircleRun {
    pub k: u32,
    pub grid: usize,
    pub depth: usize,
    pub q_used: f64,
    /// max over grid of ψ = φ̄ + u − u∘T
    pub psi_max: f64,
    pub sup_abs_u: f64,
    pub holder_ok: bool,
    pub holder_excess: f64,
    pub constants: CircleConstants,
    #[serde(skip)]
    pub u: Vec<f64>,
}

/// Best periodic orbit average for x ↦ kx mod 1 up to max_period: orbits are
/// the cycles of period-p words, with points V/(k^p − 1).
pub fn circle_best_periodic(k: u32, phi: &HolderPotential, max_period: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for p in 1..=max_period {
        let modulus = (k as u64).pow(p as u32) - 1;
        let mut digits = vec![0u8; p];
        loop {
            let w = crate::numkit::FiniteWord::from_digits(&digits);
            if w.is_primitive() && w == w.min_rotation() {
                // orbit points: x_i = rotation value / modulus
                let mut avg = 0.0;
                let mut v: u64 = 0;
                for &d in &digits {
                    v = v * k as u64 + d as u64;
                }
                let mut x = v;
                for _ in 0..p {
                    avg += phi.eval(x as f64 / modulus as f64);
                    // rotate: x ↦ kx mod (k^p − 1)
                    x = (x * k as u64) % modulus;
                }
                best = best.max(avg / p as f64);
            }
            let mut i = p;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if (digits[i] as u32) + 1 < k {
                    digits[i] += 1;
                    for d in digits[i + 1..].iter_mut() {
                        *d = 0;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    best
}

fn interp_circle(w: &[f64], y: f64) -> f64 {
    let g = w.len() as f64;
    let pos = (y.rem_euclid(1.0)) * g;
    let i0 = pos.floor() as usize % w.len();
    let frac = pos - pos.floor();
    let i1 = (i0 + 1) % w.len();
    w[i0] * (1.0 - frac) + w[i1] * frac
}

/// Backward dynamic programming for
/// u(x) = sup_{m ≤ depth} sup_{y ∈ T^{-m}(x)} S_m φ̄(y),
/// then the checks ψ = φ̄ + u − u∘T ≤ tol and |u|_α ≤ L|φ|_α.
pub fn expanding_subaction(
    k: u32,
    phi: &HolderPotential,
    depth: usize,
    grid: usize,
    max_period: usize,
) -> Result<CircleRun, Error> {
    if k < 2 {
        return Err(Error::PreconditionFailed("need k >= 2".into()));
    }
    let q = circle_best_periodic(k, phi, max_period);
    let alpha = phi.alpha.f64();
    let consts = CircleConstants::new(k, alpha);

    let phibar = |x: f64| phi.eval(x) - q;
    let mut w = vec![0.0f64; grid];
    let mut u = vec![0.0f64; grid]; // m = 0 term: S_0 = 0
    for _ in 0..depth {
        let next: Vec<f64> = (0..grid)
            .map(|i| {
                let x = i as f64 / grid as f64;
                let mut best = f64::NEG_INFINITY;
                for j in 0..k {
                    let y = (x + j as f64) / k as f64;
                    best = best.max(interp_circle(&w, y) + phibar(y));
                }
                best
            })
            .collect();
        w = next;
        for i in 0..grid {
            u[i] = u[i].max(w[i]);
        }
    }

    // ψ = φ̄ + u − u∘T on the grid; T is exact on grid nodes.
    let mut psi_max = f64::NEG_INFINITY;
    for i in 0..grid {
        let x = i as f64 / grid as f64;
        let ti = (i * k as usize) % grid;
        let psi = phibar(x) + u[i] - u[ti];
        psi_max = psi_max.max(psi);
    }

    // |u(x)−u(y)| ≤ L|φ|_α d(x,y)^α over grid pairs.
    let cap = consts.l_constant * phi.seminorm_bound;
    let mut excess = f64::NEG_INFINITY;
    if alpha == 1.0 {
        // Lipschitz: adjacent pairs suffice (telescoping along the circle).
        for i in 0..grid {
            let j = (i + 1) % grid;
            let d = 1.0 / grid as f64;
            excess = excess.max((u[i] - u[j]).abs() - cap * d);
        }
    } else {
        for i in 0..grid {
            for j in i + 1..grid {
                let d = d_circle(i as f64 / grid as f64, j as f64 / grid as f64);
                excess = excess.max((u[i] - u[j]).abs() - cap * d.powf(alpha));
            }
        }
    }
    let sup_abs_u = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(CircleRun {
        k,
        grid,
        depth,
        q_used: q,
        psi_max,
        sup_abs_u,
        holder_ok: excess <= 1e-8 * (1.0 + cap),
        holder_excess: excess,
        constants: consts,
        u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::Enclosure;
    use crate::orbits::potential::HolderAlpha;

    #[test]
    fn constants_k2() {
        let c = CircleConstants::new(2, 1.0);
        assert_eq!(c.lambda, 2.0);
        assert_eq!(c.delta, 0.25);
        assert_eq!(c.tau, 0.125);
        assert_eq!(c.n_sep, 8);
        // L = max{1, 4·8·(0.25·2/(2·1) + 0.5)} = 24
        assert!((c.l_constant - 24.0).abs() < 1e-12);
    }

    #[test]
    fn constant_potential_zero_subaction() {
        let phi = HolderPotential::constant(0.3);
        let run = expanding_subaction(2, &phi, 10, 256, 6).unwrap();
        assert!(run.sup_abs_u < 1e-13);
        assert!(run.psi_max.abs() < 1e-13);
    }

    #[test]
    fn distance_potential_fixed_point() {
        // φ = −d_circle(·, {0}): Q = 0 at the fixed point 0, u ≡ 0, ψ = φ̄ ≤ 0.
        // d(x, {0}) on the circle = min(x, 1−x): the line set {0, 1} realizes it.
        let phi = HolderPotential::distance_power(
            vec![Enclosure::zero(), Enclosure::one()],
            HolderAlpha::one(),
            -1.0,
        );
        let run = expanding_subaction(2, &phi, 16, 512, 8).unwrap();
        assert!((run.q_used - 0.0).abs() < 1e-12);
        assert!(run.sup_abs_u < 1e-9, "u should vanish, got {}", run.sup_abs_u);
        assert!(run.psi_max <= 1e-9);
    }

    #[test]
    fn cosine_oracle() {
        // Independent oracle: maximize Birkhoff backward sums by exhaustive
        // preimage trees at depth 12 on sample points.
        fn oracle(k: u32, phi: &HolderPotential, q: f64, x: f64, d: usize) -> f64 {
            fn rec(k: u32, phi: &HolderPotential, q: f64, x: f64, d: usize) -> f64 {
                if d == 0 {
                    return 0.0;
                }
                let mut best = f64::NEG_INFINITY;
                for j in 0..k {
                    let y = (x + j as f64) / k as f64;
                    best = best.max(phi.eval(y) - q + rec(k, phi, q, y, d - 1));
                }
                best.max(0.0)
            }
            rec(k, phi, q, x, d)
        }
        let phi = HolderPotential::trig(0.0, vec![(1.0, 0.0)]); // cos 2πx
        let run = expanding_subaction(2, &phi, 20, 1024, 10).unwrap();
        assert!(run.psi_max <= 1e-3, "psi_max = {}", run.psi_max);
        for x in [0.0, 0.25, 0.375, 0.7] {
            let o = oracle(2, &phi, run.q_used, x, 12);
            let g = interp_circle(&run.u, x);
            assert!((g - o).abs() < 5e-2, "u({}) = {} vs oracle {}", x, g, o);
        }
    }
}
