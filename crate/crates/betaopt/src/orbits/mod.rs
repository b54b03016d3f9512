//! Periodic-orbit enumeration, orbit statistics, and two-sided brackets on
//! the ergodic supremum Q(β, φ).

pub mod potential;

use crate::dynamics::{BetaParam, ExpansionInfo, MapTag};
use crate::error::Error;
use crate::numkit::{h_eval, lex_compare, Dyadic, Enclosure, EventuallyPeriodicWord, FiniteWord, Lex};
use potential::HolderPotential;
use rayon::prelude::*;

/// Default enumeration budgets.
pub const DEFAULT_MAX_PERIOD: usize = 12;
pub const DEFAULT_DEPTH: usize = 16;
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// A primitive periodic orbit, identified by the lexicographically least
/// rotation of its period word. `points[i]` is the value of the rotation
/// starting at digit i, so the map sends `points[i]` to `points[i+1 mod p]`.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit {
    pub word: FiniteWord,
    pub points: Vec<Enclosure>,
    pub period: usize,
    pub map_tag: MapTag,
}

impl PeriodicOrbit {
    pub fn points_f64(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mid_f64()).collect()
    }
}

/// Minimum interpoint distance; infinite for singletons.
#[derive(Debug, Clone)]
pub enum PointSpread {
    Infinite,
    Finite(Enclosure),
}

impl PointSpread {
    pub fn as_f64(&self) -> f64 {
        match self {
            PointSpread::Infinite => f64::INFINITY,
            PointSpread::Finite(e) => e.mid_f64(),
        }
    }
}

/// Min pairwise distance of a finite point set.
pub fn min_interpoint_distance(points: &[Enclosure]) -> PointSpread {
    if points.len() <= 1 {
        return PointSpread::Infinite;
    }
    let mut lo: Option<Dyadic> = None;
    let mut hi: Option<Dyadic> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[i].dist(&points[j], 160);
            lo = Some(match lo {
                None => d.lo.clone(),
                Some(c) => c.min(d.lo.clone()),
            });
            hi = Some(match hi {
                None => d.hi.clone(),
                Some(c) => c.min(d.hi.clone()),
            });
        }
    }
    PointSpread::Finite(Enclosure::new(lo.unwrap(), hi.unwrap()))
}

/// The time average of φ over the orbit.
pub fn orbit_average(phi: &HolderPotential, orbit: &PeriodicOrbit) -> Result<Enclosure, Error> {
    orbit_average_points(phi, &orbit.points)
}

pub fn orbit_average_points(phi: &HolderPotential, points: &[Enclosure]) -> Result<Enclosure, Error> {
    let prec = 160;
    let mut acc = Enclosure::zero();
    for p in points {
        acc = acc.add(&phi.eval_enclosure(p, prec)?, prec);
    }
    acc.div(&Enclosure::from_i64(points.len() as i64), prec)
}

/// Whether every rotation of `(word)^∞` is admitted by the shift of β:
/// strictly below π*_β(1) for T, non-strictly for U (the non-strict cases
/// are exactly the critical cycle of a simple beta-number).
fn orbit_admissible(beta: &BetaParam, word: &FiniteWord, map_tag: MapTag) -> Result<bool, Error> {
    if word.max_digit() as u64 > beta.floor() {
        return Ok(false);
    }
    for s in 0..word.len() {
        let rot = EventuallyPeriodicWord::periodic(&word.rotated(s));
        let ord = match beta.upper_expansion_of_one() {
            ExpansionInfo::Exact(star) => lex_compare(&rot, star),
            ExpansionInfo::Prefix(p) => {
                let mut decided = None;
                for i in 0..p.len() {
                    match rot.digit(i).cmp(&p.digit(i)) {
                        std::cmp::Ordering::Equal => continue,
                        other => {
                            decided = Some(other);
                            break;
                        }
                    }
                }
                decided.ok_or_else(|| {
                    Error::HorizonExceeded("periodic word ties with the upper expansion prefix".into())
                })?
            }
        };
        let ok = match map_tag {
            MapTag::T => ord == Lex::Less,
            MapTag::U => ord != Lex::Greater,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certified orbit points for a primitive period word: points[0] = h((w)^∞)
/// by the closed form, then forward by x ↦ βx − digit.
fn orbit_points(beta: &BetaParam, word: &FiniteWord) -> Result<Vec<Enclosure>, Error> {
    let prec = beta.prec() + 32;
    let p0 = h_eval(&EventuallyPeriodicWord::periodic(word), beta.value(), prec)?;
    let mut points = Vec::with_capacity(word.len());
    points.push(p0);
    for i in 0..word.len() - 1 {
        let d = word.digit(i).0 as i64;
        let next = points[i]
            .mul(beta.value(), prec)
            .sub(&Enclosure::from_i64(d), prec);
        points.push(next);
    }
    Ok(points)
}

/// All primitive periodic orbits of period ≤ max_period, deduplicated by the
/// least rotation of the period word.
pub fn enumerate_periodic_orbits(
    beta: &BetaParam,
    max_period: usize,
    map_tag: MapTag,
    budget: usize,
) -> Result<Vec<PeriodicOrbit>, Error> {
    let branches = beta.floor() as usize + 1;
    let mut total = 0usize;
    let mut pw = 1usize;
    for _ in 0..max_period {
        pw = pw.saturating_mul(branches);
        total = total.saturating_add(pw);
    }
    if total.saturating_mul(max_period) > budget.saturating_mul(16) {
        return Err(Error::BudgetExceeded(format!(
            "period budget: {} words at period {}",
            total, max_period
        )));
    }

    let mut canonical_words: Vec<FiniteWord> = Vec::new();
    for p in 1..=max_period {
        let mut digits = vec![0u8; p];
        loop {
            let w = FiniteWord::from_digits(&digits);
            if w.is_primitive() && w == w.min_rotation() && orbit_admissible(beta, &w, map_tag)? {
                canonical_words.push(w);
            }
            // next word in lexicographic counter order
            let mut i = p;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if (digits[i] as usize) + 1 < branches {
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

    let orbits: Result<Vec<PeriodicOrbit>, Error> = canonical_words
        .par_iter()
        .map(|w| {
            let points = orbit_points(beta, w)?;
            Ok(PeriodicOrbit { word: w.clone(), points, period: w.len(), map_tag })
        })
        .collect();
    orbits
}

/// A two-sided bracket on the ergodic supremum Q.
#[derive(Debug, Clone)]
pub struct MaximizationBracket {
    /// Best periodic average found (a certified lower bound on Q).
    pub lower: Enclosure,
    /// Certified Birkhoff upper bound on Q.
    pub upper: Enclosure,
    /// The orbit realizing `lower` (None only for empty enumerations).
    pub witness: Option<PeriodicOrbit>,
    pub n_used: usize,
    pub max_period_used: usize,
    /// Best T-orbit average (the U enumeration may add the critical cycle).
    pub lower_t: Option<Enclosure>,
    pub witness_t: Option<PeriodicOrbit>,
    /// The coarse left-endpoint + K_{α,β}|φ|_α bound, for comparison.
    pub coarse_upper: f64,
    /// Per-period best T-averages (period, average midpoint).
    pub best_by_period: Vec<(usize, f64)>,
}

impl MaximizationBracket {
    pub fn width_f64(&self) -> f64 {
        self.upper.hi.to_f64() - self.lower.lo.to_f64()
    }
}

fn better(best: &mut Option<(Enclosure, PeriodicOrbit)>, avg: Enclosure, orbit: &PeriodicOrbit) {
    let replace = match best {
        None => true,
        Some((cur, _)) => avg.mid_f64() > cur.mid_f64(),
    };
    if replace {
        *best = Some((avg, orbit.clone()));
    }
}

/// Digits of π*_β(1) as a plain vector, long enough for a depth-n scan.
fn star_digits(beta: &BetaParam, n: usize) -> Result<Vec<u8>, Error> {
    match beta.upper_expansion_of_one() {
        ExpansionInfo::Exact(w) => Ok((0..n).map(|i| w.digit(i).0).collect()),
        ExpansionInfo::Prefix(p) => {
            if p.len() < n {
                return Err(Error::HorizonExceeded("upper expansion prefix too short".into()));
            }
            Ok((0..n).map(|i| p.digit(i).0).collect())
        }
    }
}

/// U^k(1) midpoints for k = 0..n.
fn critical_f64(beta: &BetaParam, n: usize) -> Result<Vec<f64>, Error> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        match beta.critical().point(k) {
            Some(p) => out.push(p.mid_f64()),
            None => return Err(Error::HorizonExceeded("critical orbit prefix too short".into())),
        }
    }
    Ok(out)
}

/// Image widths U^m(1) for the matched-suffix lengths m = 0..=n (m = 0 is the
/// full image of width 1). Upper endpoints: the scan needs widths that never
/// undershoot the true image.
fn image_widths(beta: &BetaParam, n: usize) -> Result<Vec<f64>, Error> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    for m in 1..=n {
        match beta.critical().point(m) {
            Some(p) => out.push((p.hi.to_f64() + 1e-12).min(1.0)),
            None => return Err(Error::HorizonExceeded("critical orbit prefix too short".into())),
        }
    }
    Ok(out)
}

struct UpperScan<'a> {
    beta: f64,
    branches: u8,
    star: Vec<u8>,
    widths: Vec<f64>,
    phi: &'a HolderPotential,
    n: usize,
    budget: usize,
    visited: usize,
    /// per-depth max of Σ_i sup φ over the orbit-interval tube
    best_tube: Vec<f64>,
    /// per-depth max of S_m(left endpoint) for the coarse bound
    best_left: Vec<f64>,
    lefts: Vec<f64>,
    tight: Vec<usize>,
}

impl<'a> UpperScan<'a> {
    /// Run the scan, splitting two-digit prefixes across workers; the
    /// per-depth maxima merge associatively (and replayed prefixes are
    /// idempotent under max), so the result matches the serial scan exactly.
    fn run(&mut self) -> Result<(), Error> {
        if self.n <= 2 {
            return self.descend(0);
        }
        let mut prefixes: Vec<(u8, u8)> = Vec::new();
        for d0 in 0..=self.branches {
            for d1 in 0..=self.branches {
                prefixes.push((d0, d1));
            }
        }
        let partials: Result<Vec<Option<(Vec<f64>, Vec<f64>, usize)>>, Error> = prefixes
            .par_iter()
            .map(|&(d0, d1)| {
                let mut local = UpperScan {
                    beta: self.beta,
                    branches: self.branches,
                    star: self.star.clone(),
                    widths: self.widths.clone(),
                    phi: self.phi,
                    n: self.n,
                    budget: self.budget,
                    visited: 0,
                    best_tube: vec![f64::NEG_INFINITY; self.n + 1],
                    best_left: vec![f64::NEG_INFINITY; self.n + 1],
                    lefts: vec![0.0; self.n + 1],
                    tight: Vec::new(),
                };
                if local.push_digit(0, d0)?.is_none() {
                    return Ok(None);
                }
                if local.push_digit(1, d1)?.is_none() {
                    return Ok(None);
                }
                local.descend(2)?;
                Ok(Some((local.best_tube, local.best_left, local.visited)))
            })
            .collect();
        for partial in partials?.into_iter().flatten() {
            let (tube, left, visited) = partial;
            for j in 0..=self.n {
                self.best_tube[j] = self.best_tube[j].max(tube[j]);
                self.best_left[j] = self.best_left[j].max(left[j]);
            }
            self.visited += visited;
        }
        Ok(())
    }

    /// Extend the current word by one digit: admissibility via the
    /// matched-suffix set, orbit-interval updates, per-depth maxima.
    /// Returns the previous tight set for the caller to restore, or None
    /// when the branch is inadmissible.
    fn push_digit(&mut self, depth: usize, d: u8) -> Result<Option<Vec<usize>>, Error> {
        self.visited += 1;
        if self.visited > self.budget.saturating_mul(64) {
            return Err(Error::BudgetExceeded("upper-bound scan hard cap".into()));
        }
        let tight_len = self.tight.len();
        let mut next = Vec::with_capacity(tight_len + 1);
        for l in self.tight[..tight_len].iter().copied().chain(std::iter::once(0)) {
            let bound = self.star[l];
            if d > bound {
                return Ok(None);
            }
            if d == bound {
                next.push(l + 1);
            }
        }
        let j = depth + 1;
        let scale = self.beta.powi(-(j as i32));
        for i in 0..depth {
            self.lefts[i] += d as f64 * scale * self.beta.powi(i as i32);
        }
        self.lefts[depth] = d as f64 * scale * self.beta.powi(depth as i32);

        let m_match = next.iter().copied().max().unwrap_or(0);
        let w_img = self.widths[m_match.min(self.widths.len() - 1)];
        let mut tube = 0.0f64;
        let mut left_sum = 0.0f64;
        for i in 0..j {
            let a = self.lefts[i];
            let width = w_img * self.beta.powi(i as i32 - j as i32);
            let b = (a + width).min(1.0);
            tube += self.phi.interval_sup(a, b.max(a));
            left_sum += self.phi.eval(a);
        }
        if tube > self.best_tube[j] {
            self.best_tube[j] = tube;
        }
        if left_sum > self.best_left[j] {
            self.best_left[j] = left_sum;
        }
        Ok(Some(std::mem::replace(&mut self.tight, next)))
    }

    fn pop_digit(&mut self, depth: usize, d: u8, saved: Vec<usize>) {
        self.tight = saved;
        let scale = self.beta.powi(-(depth as i32 + 1));
        for i in 0..depth {
            self.lefts[i] -= d as f64 * scale * self.beta.powi(i as i32);
        }
    }

    fn descend(&mut self, depth: usize) -> Result<(), Error> {
        if depth == self.n {
            return Ok(());
        }
        for d in 0..=self.branches {
            if let Some(saved) = self.push_digit(depth, d)? {
                self.descend(depth + 1)?;
                self.pop_digit(depth, d, saved);
            }
        }
        Ok(())
    }
}

/// Two-sided bracket on Q(β, φ): lower from the best periodic average,
/// upper from the subadditive bound
///   Q ≤ min_m (1/m)·max( max over admissible m-words of Σ_i sup φ(J_i),
///                        S_m^{U}φ(1) ),
/// where J_i is the i-th orbit interval of the word's cylinder. The point 1
/// is handled separately along its U-orbit.
/// The certified upper bound alone: min over m ≤ n of the per-depth scan,
/// with the U-orbit of 1 handled separately. Returns (tube bound, coarse
/// left-endpoint + K_{α,β}|φ|_α bound).
pub fn q_upper_bound(
    beta: &BetaParam,
    phi: &HolderPotential,
    n: usize,
    budget: usize,
) -> Result<(f64, f64), Error> {
    let mut estimate = 1usize;
    for _ in 0..n {
        estimate = estimate.saturating_mul(beta.floor().max(1) as usize);
    }
    if estimate > budget {
        return Err(Error::BudgetExceeded(format!("⌊β⌋^{} exceeds the word budget", n)));
    }
    let star = star_digits(beta, n + 2)?;
    let widths = image_widths(beta, n)?;
    let crit = critical_f64(beta, n)?;
    let mut scan = UpperScan {
        beta: beta.value_f64(),
        branches: beta.floor() as u8,
        star,
        widths,
        phi,
        n,
        budget,
        visited: 0,
        best_tube: vec![f64::NEG_INFINITY; n + 1],
        best_left: vec![f64::NEG_INFINITY; n + 1],
        lefts: vec![0.0; n + 1],
        tight: Vec::new(),
    };
    scan.run()?;

    let k_ab = phi.alpha.k_alpha_beta(beta.value_f64());
    let mut upper = f64::INFINITY;
    let mut coarse = f64::INFINITY;
    let mut su = 0.0f64; // S_m^{U}φ(1)
    for m in 1..=n {
        su += phi.eval(crit[m - 1]);
        let tube = scan.best_tube[m].max(su);
        let safety = 1e-9 * (1.0 + phi.sup_abs()) * m as f64;
        upper = upper.min((tube + safety) / m as f64);
        let left_bound = (scan.best_left[m] + k_ab * phi.seminorm_bound).max(su);
        coarse = coarse.min((left_bound + safety) / m as f64);
    }
    Ok((upper, coarse))
}

pub fn q_bracket(
    beta: &BetaParam,
    phi: &HolderPotential,
    n: usize,
    max_period: usize,
    budget: usize,
) -> Result<MaximizationBracket, Error> {
    // Lower bound: periodic averages over the U enumeration (T subset noted).
    let u_orbits = enumerate_periodic_orbits(beta, max_period, MapTag::U, budget)?;
    let mut best_u: Option<(Enclosure, PeriodicOrbit)> = None;
    let mut best_t: Option<(Enclosure, PeriodicOrbit)> = None;
    let mut best_by_period: Vec<(usize, f64)> = Vec::new();
    for orbit in &u_orbits {
        let avg = orbit_average(phi, orbit)?;
        let is_t = orbit_admissible(beta, &orbit.word, MapTag::T)?;
        if is_t {
            let entry = best_by_period.iter_mut().find(|(p, _)| *p == orbit.period);
            match entry {
                Some((_, v)) => *v = v.max(avg.mid_f64()),
                None => best_by_period.push((orbit.period, avg.mid_f64())),
            }
            better(&mut best_t, avg.clone(), orbit);
        }
        better(&mut best_u, avg, orbit);
    }
    best_by_period.sort_by_key(|(p, _)| *p);

    let (upper, coarse) = q_upper_bound(beta, phi, n, budget)?;

    let (lower, witness) = match best_u {
        Some((avg, orbit)) => (avg, Some(orbit)),
        None => (Enclosure::from_f64(f64::MIN), None),
    };
    let (lower_t, witness_t) = match best_t {
        Some((avg, orbit)) => (Some(avg), Some(orbit)),
        None => (None, None),
    };
    Ok(MaximizationBracket {
        lower,
        upper: Enclosure::from_f64(upper),
        witness,
        n_used: n,
        max_period_used: max_period,
        lower_t,
        witness_t,
        coarse_upper: coarse,
        best_by_period,
    })
}
