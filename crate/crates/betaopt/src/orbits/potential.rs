//! Hölder potentials: evaluable families with certified seminorm bounds and
//! sharp interval suprema (the upper-bound scan needs per-step sups, not
//! just point values).

use crate::error::Error;
use crate::numkit::{Enclosure, Dyadic};
use serde::{Deserialize, Serialize};

/// Hölder exponent as an exact rational in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolderAlpha {
    pub num: u32,
    pub den: u32,
}

impl HolderAlpha {
    pub fn new(num: u32, den: u32) -> Self {
        assert!(num >= 1 && den >= 1 && num <= den, "alpha must lie in (0,1]");
        HolderAlpha { num, den }
    }

    pub fn one() -> Self {
        HolderAlpha { num: 1, den: 1 }
    }

    pub fn half() -> Self {
        HolderAlpha { num: 1, den: 2 }
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// x^α for x ≥ 0.
    pub fn apply_f64(&self, x: f64) -> f64 {
        if self.is_one() {
            x
        } else {
            x.max(0.0).powf(self.f64())
        }
    }

    pub fn apply_enclosure(&self, x: &Enclosure, prec: u32) -> Result<Enclosure, Error> {
        if self.is_one() {
            Ok(x.clone())
        } else {
            x.pow_frac(self.num, self.den, prec)
        }
    }

    /// K_{α,β} = 1/(β^α − 1).
    pub fn k_alpha_beta(&self, beta: f64) -> f64 {
        1.0 / (beta.powf(self.f64()) - 1.0)
    }

    pub fn k_alpha_beta_enclosure(&self, beta: &Enclosure, prec: u32) -> Result<Enclosure, Error> {
        let b_alpha = self.apply_enclosure(beta, prec)?;
        b_alpha.sub(&Enclosure::one(), prec).recip(prec)
    }
}

/// The potential families used throughout.
#[derive(Debug, Clone)]
pub enum Family {
    Constant(f64),
    /// slope·x + intercept (α = 1).
    Affine { slope: f64, intercept: f64 },
    /// scale · d(x, set)^α. `set` carries certified points; `set_f64` their midpoints.
    DistancePower { set: Vec<Enclosure>, set_f64: Vec<f64>, scale: f64 },
    /// c0 + Σ_k a_k cos(2πkx) + b_k sin(2πkx) (α = 1).
    TrigPolynomial { c0: f64, coeffs: Vec<(f64, f64)> },
    /// Piecewise affine through `(nodes[i], values[i])`; nodes cover \[0,1\].
    PiecewiseAffine {
        nodes: Vec<f64>,
        values: Vec<f64>,
        nodes_enc: Vec<Enclosure>,
        values_enc: Vec<Enclosure>,
    },
    /// Pointwise sum (same exponent).
    Sum(Vec<HolderPotential>),
}

/// An evaluable potential with exponent α and a certified upper bound on the
/// α-Hölder seminorm.
#[derive(Debug, Clone)]
pub struct HolderPotential {
    pub alpha: HolderAlpha,
    pub seminorm_bound: f64,
    pub family: Family,
}

impl HolderPotential {
    pub fn constant(c: f64) -> Self {
        HolderPotential { alpha: HolderAlpha::one(), seminorm_bound: 0.0, family: Family::Constant(c) }
    }

    pub fn identity() -> Self {
        Self::affine(1.0, 0.0)
    }

    pub fn affine(slope: f64, intercept: f64) -> Self {
        HolderPotential {
            alpha: HolderAlpha::one(),
            seminorm_bound: slope.abs(),
            family: Family::Affine { slope, intercept },
        }
    }

    /// scale · d(x, set)^α; |scale| bounds the seminorm since
    /// |d(x,F)^α − d(y,F)^α| ≤ |x−y|^α.
    pub fn distance_power(set: Vec<Enclosure>, alpha: HolderAlpha, scale: f64) -> Self {
        assert!(!set.is_empty());
        let set_f64 = set.iter().map(|e| e.mid_f64()).collect();
        HolderPotential {
            alpha,
            seminorm_bound: scale.abs(),
            family: Family::DistancePower { set, set_f64, scale },
        }
    }

    /// Deterministic random trig polynomial, rescaled to the requested
    /// seminorm bound.
    pub fn seeded_trig(seed: u64, degree: usize, seminorm: f64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs: Vec<(f64, f64)> = (0..degree.max(1))
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

    pub fn trig(c0: f64, coeffs: Vec<(f64, f64)>) -> Self {
        let lip: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| 2.0 * std::f64::consts::PI * (i as f64 + 1.0) * (a.abs() + b.abs()))
            .sum();
        HolderPotential {
            alpha: HolderAlpha::one(),
            seminorm_bound: lip,
            family: Family::TrigPolynomial { c0, coeffs },
        }
    }

    /// Piecewise affine through certified breakpoints. Nodes must be sorted
    /// and span \[0,1\].
    pub fn piecewise_affine(nodes_enc: Vec<Enclosure>, values_enc: Vec<Enclosure>) -> Self {
        assert!(nodes_enc.len() >= 2 && nodes_enc.len() == values_enc.len());
        let nodes: Vec<f64> = nodes_enc.iter().map(|e| e.mid_f64()).collect();
        let values: Vec<f64> = values_enc.iter().map(|e| e.mid_f64()).collect();
        let mut max_slope = 0.0f64;
        for i in 0..nodes.len() - 1 {
            let dx = nodes[i + 1] - nodes[i];
            if dx > 0.0 {
                max_slope = max_slope.max(((values[i + 1] - values[i]) / dx).abs());
            }
        }
        HolderPotential {
            alpha: HolderAlpha::one(),
            seminorm_bound: max_slope,
            family: Family::PiecewiseAffine { nodes, values, nodes_enc, values_enc },
        }
    }

    /// Pointwise sum; exponents must agree, seminorm bounds add. Nested sums
    /// are flattened so structural matches (e.g. the locking certificate)
    /// see every summand.
    pub fn sum(parts: Vec<HolderPotential>) -> Self {
        assert!(!parts.is_empty());
        let alpha = parts[0].alpha;
        assert!(parts.iter().all(|p| p.alpha == alpha), "summands must share the exponent");
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p.family {
                Family::Sum(inner) => flat.extend(inner),
                _ => flat.push(p),
            }
        }
        let bound = flat.iter().map(|p| p.seminorm_bound).sum();
        HolderPotential { alpha, seminorm_bound: bound, family: Family::Sum(flat) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.family {
            Family::Constant(c) => *c,
            Family::Affine { slope, intercept } => slope * x + intercept,
            Family::DistancePower { set_f64, scale, .. } => {
                let d = set_f64.iter().map(|p| (x - p).abs()).fold(f64::INFINITY, f64::min);
                scale * self.alpha.apply_f64(d)
            }
            Family::TrigPolynomial { c0, coeffs } => {
                let mut v = *c0;
                for (i, (a, b)) in coeffs.iter().enumerate() {
                    let k = (i + 1) as f64;
                    let t = 2.0 * std::f64::consts::PI * k * x;
                    v += a * t.cos() + b * t.sin();
                }
                v
            }
            Family::PiecewiseAffine { nodes, values, .. } => {
                if x <= nodes[0] {
                    return values[0];
                }
                if x >= *nodes.last().unwrap() {
                    return *values.last().unwrap();
                }
                let i = nodes.partition_point(|&n| n <= x) - 1;
                let (x0, x1) = (nodes[i], nodes[i + 1]);
                let (y0, y1) = (values[i], values[i + 1]);
                if x1 <= x0 {
                    return y0;
                }
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
            Family::Sum(parts) => parts.iter().map(|p| p.eval(x)).sum(),
        }
    }

    /// Certified enclosure of φ(x) for an enclosure point. For the trig
    /// family the enclosure is midpoint ± (Lip·halfwidth + eval margin).
    pub fn eval_enclosure(&self, x: &Enclosure, prec: u32) -> Result<Enclosure, Error> {
        match &self.family {
            Family::Constant(c) => Ok(Enclosure::from_f64(*c)),
            Family::Affine { slope, intercept } => Ok(x
                .mul(&Enclosure::from_f64(*slope), prec)
                .add(&Enclosure::from_f64(*intercept), prec)),
            Family::DistancePower { set, scale, .. } => {
                let mut lo: Option<Dyadic> = None;
                let mut hi: Option<Dyadic> = None;
                for p in set {
                    let d = x.dist(p, prec);
                    lo = Some(match lo {
                        None => d.lo.clone(),
                        Some(c) => c.min(d.lo.clone()),
                    });
                    hi = Some(match hi {
                        None => d.hi.clone(),
                        Some(c) => c.min(d.hi.clone()),
                    });
                }
                let d = Enclosure::new(lo.unwrap(), hi.unwrap());
                let da = self.alpha.apply_enclosure(&d, prec)?;
                Ok(da.mul(&Enclosure::from_f64(*scale), prec))
            }
            Family::TrigPolynomial { c0, coeffs } => {
                let mid = x.mid_f64();
                let v = self.eval(mid);
                let halfw = x.width().to_f64() / 2.0;
                let scale = c0.abs()
                    + coeffs.iter().map(|(a, b)| a.abs() + b.abs()).sum::<f64>();
                let margin = self.seminorm_bound * halfw + 1e-13 * (1.0 + scale);
                Ok(Enclosure::new(
                    Dyadic::from_f64(v - margin).unwrap(),
                    Dyadic::from_f64(v + margin).unwrap(),
                ))
            }
            Family::PiecewiseAffine { nodes_enc, values_enc, .. } => {
                // Hull of the interpolated values over every segment the
                // enclosure can touch.
                let mut acc: Option<Enclosure> = None;
                let m = nodes_enc.len();
                for i in 0..m - 1 {
                    let seg_lo = &nodes_enc[i];
                    let seg_hi = &nodes_enc[i + 1];
                    if x.hi < seg_lo.lo || x.lo > seg_hi.hi {
                        continue;
                    }
                    // clamp x into the segment, in enclosure arithmetic
                    let a = if x.lo < seg_lo.lo { seg_lo.clone() } else { Enclosure::point(x.lo.clone()) };
                    let b = if x.hi > seg_hi.hi { seg_hi.clone() } else { Enclosure::point(x.hi.clone()) };
                    let dx = seg_hi.sub(seg_lo, prec);
                    let dy = values_enc[i + 1].sub(&values_enc[i], prec);
                    for t in [&a, &b] {
                        let rel = t.sub(seg_lo, prec);
                        let v = if dx.lo.sign() <= 0 {
                            values_enc[i].hull(&values_enc[i + 1])
                        } else {
                            values_enc[i].add(&dy.mul(&rel.div(&dx, prec)?, prec), prec)
                        };
                        acc = Some(match acc {
                            None => v,
                            Some(cur) => cur.hull(&v),
                        });
                    }
                }
                acc.ok_or_else(|| Error::PreconditionFailed("point outside the breakpoint range".into()))
            }
            Family::Sum(parts) => {
                let mut acc = Enclosure::zero();
                for p in parts {
                    acc = acc.add(&p.eval_enclosure(x, prec)?, prec);
                }
                Ok(acc)
            }
        }
    }

    /// Upper bound for `sup_{x ∈ [a,b]} φ(x)`, sharp for the affine,
    /// piecewise-affine and distance families.
    pub fn interval_sup(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a <= b + 1e-12);
        match &self.family {
            Family::Constant(c) => *c,
            Family::Affine { slope, intercept } => {
                (slope * a + intercept).max(slope * b + intercept)
            }
            Family::DistancePower { set_f64, scale, .. } => {
                if *scale <= 0.0 {
                    // maximized where the distance is smallest
                    let dmin = set_f64
                        .iter()
                        .map(|&p| {
                            if p >= a && p <= b {
                                0.0
                            } else {
                                (a - p).abs().min((b - p).abs())
                            }
                        })
                        .fold(f64::INFINITY, f64::min);
                    scale * self.alpha.apply_f64(dmin)
                } else {
                    // maximized where the distance is largest: at the ends or
                    // midway between adjacent set points inside [a,b]
                    let d = |x: f64| {
                        set_f64.iter().map(|&p| (x - p).abs()).fold(f64::INFINITY, f64::min)
                    };
                    let mut dmax = d(a).max(d(b));
                    let mut pts: Vec<f64> = set_f64.clone();
                    pts.sort_by(|u, v| u.partial_cmp(v).unwrap());
                    for w in pts.windows(2) {
                        let mid = 0.5 * (w[0] + w[1]);
                        if mid >= a && mid <= b {
                            dmax = dmax.max(d(mid));
                        }
                    }
                    scale * self.alpha.apply_f64(dmax)
                }
            }
            Family::TrigPolynomial { .. } => {
                let mid = 0.5 * (a + b);
                self.eval(mid) + self.seminorm_bound * 0.5 * (b - a) + 1e-12
            }
            Family::PiecewiseAffine { nodes, .. } => {
                let mut best = self.eval(a).max(self.eval(b));
                let i0 = nodes.partition_point(|&n| n < a);
                let i1 = nodes.partition_point(|&n| n <= b);
                for i in i0..i1 {
                    best = best.max(self.eval(nodes[i]));
                }
                best
            }
            Family::Sum(parts) => parts.iter().map(|p| p.interval_sup(a, b)).sum(),
        }
    }

    /// Crude sup-norm bound over \[0,1\].
    pub fn sup_abs(&self) -> f64 {
        let up = self.interval_sup(0.0, 1.0);
        let down = -self.neg_interval_sup(0.0, 1.0);
        up.abs().max(down.abs())
    }

    fn neg_interval_sup(&self, a: f64, b: f64) -> f64 {
        // sup of -φ = -inf φ; reuse interval_sup through negation where cheap
        match &self.family {
            Family::Constant(c) => -c,
            Family::Affine { slope, intercept } => {
                (-(slope * a + intercept)).max(-(slope * b + intercept))
            }
            Family::Sum(parts) => parts.iter().map(|p| p.neg_interval_sup(a, b)).sum(),
            Family::DistancePower { set: _, set_f64, scale } => {
                let flipped = HolderPotential {
                    alpha: self.alpha,
                    seminorm_bound: self.seminorm_bound,
                    family: Family::DistancePower {
                        set: vec![Enclosure::zero()],
                        set_f64: set_f64.clone(),
                        scale: -scale,
                    },
                };
                flipped.interval_sup(a, b)
            }
            Family::TrigPolynomial { .. } => {
                let mid = 0.5 * (a + b);
                -self.eval(mid) + self.seminorm_bound * 0.5 * (b - a) + 1e-12
            }
            Family::PiecewiseAffine { nodes, .. } => {
                let mut best = (-self.eval(a)).max(-self.eval(b));
                let i0 = nodes.partition_point(|&n| n < a);
                let i1 = nodes.partition_point(|&n| n <= b);
                for i in i0..i1 {
                    best = best.max(-self.eval(nodes[i]));
                }
                best
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_power_eval() {
        let set = vec![Enclosure::from_f64(0.25), Enclosure::from_f64(0.75)];
        let phi = HolderPotential::distance_power(set, HolderAlpha::one(), -1.0);
        assert_eq!(phi.eval(0.25), 0.0);
        assert!((phi.eval(0.5) + 0.25).abs() < 1e-15);
        assert!((phi.eval(0.0) + 0.25).abs() < 1e-15);
        // interval sup: [0.3, 0.4] has min distance 0.05 to 0.25
        assert!((phi.interval_sup(0.3, 0.4) + 0.05).abs() < 1e-12);
        // interval containing a set point: sup = 0
        assert_eq!(phi.interval_sup(0.2, 0.3), 0.0);
    }

    #[test]
    fn distance_power_half_exponent() {
        let set = vec![Enclosure::from_f64(0.5)];
        let phi = HolderPotential::distance_power(set, HolderAlpha::half(), -2.0);
        assert!((phi.eval(0.75) + 2.0 * 0.5).abs() < 1e-12);
        let e = phi.eval_enclosure(&Enclosure::from_f64(0.75), 96).unwrap();
        assert!((e.mid_f64() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn trig_seminorm_and_sup() {
        let phi = HolderPotential::trig(0.0, vec![(1.0, 0.0)]); // cos 2πx
        assert!((phi.seminorm_bound - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((phi.eval(0.0) - 1.0).abs() < 1e-15);
        assert!(phi.interval_sup(0.4, 0.6) >= phi.eval(0.5));
    }

    #[test]
    fn piecewise_affine_interp() {
        let nodes = vec![
            Enclosure::from_f64(0.0),
            Enclosure::from_f64(0.5),
            Enclosure::from_f64(1.0),
        ];
        let values = vec![
            Enclosure::from_f64(0.0),
            Enclosure::from_f64(-1.0),
            Enclosure::from_f64(0.0),
        ];
        let phi = HolderPotential::piecewise_affine(nodes, values);
        assert!((phi.eval(0.25) + 0.5).abs() < 1e-15);
        assert_eq!(phi.seminorm_bound, 2.0);
        let e = phi.eval_enclosure(&Enclosure::from_f64(0.5), 96).unwrap();
        assert!(e.contains_int(-1));
        assert!((phi.interval_sup(0.2, 0.8) - phi.eval(0.2)).abs() < 1e-12);
    }

    #[test]
    fn sum_potential() {
        let a = HolderPotential::distance_power(vec![Enclosure::from_f64(0.5)], HolderAlpha::one(), -1.0);
        let b = HolderPotential::distance_power(vec![Enclosure::from_f64(0.25)], HolderAlpha::one(), -2.0);
        let s = HolderPotential::sum(vec![a, b]);
        assert_eq!(s.seminorm_bound, 3.0);
        assert!((s.eval(0.5) + 0.5).abs() < 1e-15);
    }
}
