//! Command-line harness: every operation behind a subcommand, deterministic
//! JSON reports, CSV emission for grid functions.

use crate::betanum;
use crate::dynamics::{BetaOptions, BetaParam, BetaSpec, MapTag};
use crate::error::Error;
use crate::numkit::{Enclosure, EventuallyPeriodicWord, FiniteWord};
use crate::orbits::potential::{HolderAlpha, HolderPotential};
use crate::orbits::{enumerate_periodic_orbits, q_bracket, PeriodicOrbit};
use crate::perturb::{
    build_perturbed, locking_check, locking_potential, perturbation_constants_beta,
    perturbation_constants_expanding, shadow_orbit, verify_maximizer, Verdict,
};
use crate::presets;
use crate::subaction::circle::expanding_subaction;
use crate::subaction::{calibrated_subaction, mane_run, GridFunction, SubactionParams};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};
use std::io::Write;
use std::str::FromStr;

pub const REPORT_SCHEMA: &str = "betaopt-report-v1";

#[derive(Parser, Debug)]
#[command(name = "betaopt", version, about = "ergodic optimization for beta-transformations")]
pub struct Cli {
    /// Cap the worker thread pool.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Working precision in bits (overridden by BETAOPT_PRECISION_BITS).
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Budgets {
    #[arg(long, default_value_t = crate::orbits::DEFAULT_DEPTH)]
    pub depth: usize,
    #[arg(long, default_value_t = crate::orbits::DEFAULT_MAX_PERIOD)]
    pub max_period: usize,
    #[arg(long, default_value_t = crate::orbits::DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// First n digits of the expansion of x at β.
    Expand {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value = "1")]
        x: String,
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Use the upper expansion (strict floors).
        #[arg(long, default_value_t = false)]
        upper: bool,
    },
    /// Classification of β by the expansion of 1.
    Classify {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 64)]
        horizon: usize,
    },
    /// The unique β with the given expansion of 1.
    ParrySolve {
        #[arg(long)]
        word: String,
    },
    /// A non-simple beta-number strictly between two non-simple parameters.
    NonsimpleBetween {
        #[arg(long)]
        beta1: String,
        #[arg(long)]
        beta2: String,
    },
    /// Enumerate primitive periodic orbits.
    Orbits {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 8)]
        max_period: usize,
        #[arg(long, default_value = "u")]
        map: String,
        #[arg(long, default_value_t = crate::orbits::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Two-sided bracket on the ergodic supremum.
    QBracket {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Calibrated sub-action with residual and bound checks.
    Subaction {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 64)]
        k_crit: usize,
        #[arg(long, default_value_t = 400)]
        iters: usize,
        #[arg(long, default_value_t = 16)]
        window: usize,
        #[command(flatten)]
        budgets: Budgets,
        /// CSV prefix for grid functions (node,left_value,right_value).
        #[arg(long)]
        csv: Option<String>,
    },
    /// Sub-action plus one-sided regularisations and revealed versions.
    Revealed {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 64)]
        k_crit: usize,
        #[arg(long, default_value_t = 400)]
        iters: usize,
        #[arg(long, default_value_t = 16)]
        window: usize,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long)]
        csv: Option<String>,
    },
    /// Shadow a periodic orbit to a nearby parameter.
    Shadow {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        gamma_offset: Option<f64>,
        #[arg(long)]
        orbit_word: String,
    },
    /// The explicit joint-perturbation constants for an orbit.
    PerturbConstants {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        orbit_word: String,
        #[arg(long, default_value = "1/1")]
        alpha: String,
    },
    /// Full joint-perturbation run: constants → shadow → perturbed potential
    /// → maximizer verification.
    PerturbRun {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        orbit_word: String,
        #[arg(long, default_value_t = 1e-3)]
        gamma_offset: f64,
        #[arg(long, default_value = "1/1")]
        alpha: String,
        #[arg(long, default_value_t = 1e-3)]
        slack: f64,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Locking stability trials around φ_t = φ − t d(·,O)^α.
    LockCheck {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        orbit_word: String,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.05)]
        delta_norm: f64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        slack: f64,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Sub-action for the circle map x ↦ kx mod 1.
    ExpandingSubaction {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 24)]
        depth: usize,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
        #[arg(long)]
        csv: Option<String>,
    },
    /// Joint-perturbation constants for a circle-map periodic orbit.
    ExpandingConstants {
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// comma-separated orbit points in [0,1)
        #[arg(long)]
        orbit: String,
        #[arg(long, default_value = "1/1")]
        alpha: String,
        /// sub-action seminorm constant from an expanding-subaction run
        #[arg(long)]
        l: f64,
    },
}

/// Parse a parameter spec: `cubic:a,b,c,d` (largest real root), `word:2(10)`,
/// `golden`, or a decimal literal.
pub fn parse_beta(spec: &str, opts: &BetaOptions) -> Result<BetaParam, Error> {
    if let Some(rest) = spec.strip_prefix("cubic:") {
        let coeffs: Result<Vec<BigInt>, _> =
            rest.split(',').map(|t| BigInt::from_str(t.trim())).collect();
        let coeffs = coeffs.map_err(|e| Error::InvalidConfig(format!("cubic coefficients: {}", e)))?;
        if coeffs.len() != 4 {
            return Err(Error::InvalidConfig("cubic spec needs four coefficients".into()));
        }
        return BetaParam::new(BetaSpec::PolyRoot(coeffs), opts);
    }
    if let Some(rest) = spec.strip_prefix("word:") {
        return BetaParam::new(BetaSpec::ParryWord(parse_word(rest)?), opts);
    }
    if spec == "golden" {
        let w = EventuallyPeriodicWord::from_finite(&FiniteWord::from_digits(&[1, 1]));
        return BetaParam::new(BetaSpec::ParryWord(w), opts);
    }
    let r = parse_decimal(spec)?;
    BetaParam::new(BetaSpec::Rational(r), opts)
}

/// Parse `<digits>` or `<digits>(<digits>)` into a word.
pub fn parse_word(s: &str) -> Result<EventuallyPeriodicWord, Error> {
    let bad = |m: &str| Error::InvalidConfig(format!("word spec '{}': {}", s, m));
    let digits = |t: &str| -> Result<Vec<u8>, Error> {
        t.chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| bad("digits must be 0-9")))
            .collect()
    };
    if let Some(open) = s.find('(') {
        let close = s.find(')').ok_or_else(|| bad("missing ')'"))?;
        let pre = digits(&s[..open])?;
        let per = digits(&s[open + 1..close])?;
        if per.is_empty() {
            return Ok(EventuallyPeriodicWord::from_finite(&FiniteWord::from_digits(&pre)));
        }
        Ok(EventuallyPeriodicWord::new(
            FiniteWord::from_digits(&pre),
            FiniteWord::from_digits(&per),
        ))
    } else {
        Ok(EventuallyPeriodicWord::from_finite(&FiniteWord::from_digits(&digits(s)?)))
    }
}

fn parse_decimal(s: &str) -> Result<num_rational::BigRational, Error> {
    let bad = || Error::InvalidConfig(format!("cannot parse decimal '{}'", s));
    let (int_part, frac_part) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    let int: BigInt = int_part.parse().map_err(|_| bad())?;
    let mut num = int;
    let mut den = BigInt::from(1);
    for c in frac_part.chars() {
        let d = c.to_digit(10).ok_or_else(bad)?;
        num = num * 10 + d;
        den *= 10;
    }
    Ok(num_rational::BigRational::new(num, den))
}

fn parse_alpha(s: &str) -> Result<HolderAlpha, Error> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| Error::InvalidConfig("alpha must be n/d".into()))?;
    let n: u32 = n.parse().map_err(|_| Error::InvalidConfig("alpha numerator".into()))?;
    let d: u32 = d.parse().map_err(|_| Error::InvalidConfig("alpha denominator".into()))?;
    if n == 0 || n > d {
        return Err(Error::InvalidConfig("alpha must lie in (0,1]".into()));
    }
    Ok(HolderAlpha::new(n, d))
}

/// Parse a potential spec. Families:
/// `identity` | `const:c` | `affine:slope,intercept` |
/// `trigc:c0,a1,b1[,a2,b2,…]` | `trig:seed,degree,seminorm` (seeded) |
/// `dist:<word>[,alpha=n/d][,scale=s]` (distance to the orbit of the word) |
/// `cubic-example` (the pinned piecewise-affine potential).
pub fn parse_phi(spec: &str, beta: Option<&BetaParam>) -> Result<HolderPotential, Error> {
    if spec == "identity" {
        return Ok(HolderPotential::identity());
    }
    if spec == "cubic-example" {
        let b = beta.ok_or_else(|| Error::InvalidConfig("cubic-example needs β".into()))?;
        return presets::cubic_example_potential(b);
    }
    if let Some(rest) = spec.strip_prefix("const:") {
        let c: f64 = rest.parse().map_err(|_| Error::InvalidConfig("const value".into()))?;
        return Ok(HolderPotential::constant(c));
    }
    if let Some(rest) = spec.strip_prefix("affine:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidConfig("affine:slope,intercept".into()));
        }
        let a: f64 = parts[0].parse().map_err(|_| Error::InvalidConfig("slope".into()))?;
        let b: f64 = parts[1].parse().map_err(|_| Error::InvalidConfig("intercept".into()))?;
        return Ok(HolderPotential::affine(a, b));
    }
    if let Some(rest) = spec.strip_prefix("trigc:") {
        let vals: Result<Vec<f64>, _> = rest.split(',').map(|t| t.trim().parse()).collect();
        let vals = vals.map_err(|_| Error::InvalidConfig("trigc coefficients".into()))?;
        if vals.is_empty() || vals.len() % 2 == 0 {
            return Err(Error::InvalidConfig("trigc:c0,a1,b1[,a2,b2,…]".into()));
        }
        let coeffs = vals[1..].chunks(2).map(|c| (c[0], c[1])).collect();
        return Ok(HolderPotential::trig(vals[0], coeffs));
    }
    if let Some(rest) = spec.strip_prefix("trig:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidConfig("trig:seed,degree,seminorm".into()));
        }
        let seed: u64 = parts[0].parse().map_err(|_| Error::InvalidConfig("seed".into()))?;
        let degree: usize = parts[1].parse().map_err(|_| Error::InvalidConfig("degree".into()))?;
        let norm: f64 = parts[2].parse().map_err(|_| Error::InvalidConfig("seminorm".into()))?;
        return Ok(HolderPotential::seeded_trig(seed, degree, norm));
    }
    if let Some(rest) = spec.strip_prefix("dist:") {
        let mut word = None;
        let mut alpha = HolderAlpha::one();
        let mut scale = -1.0;
        for (i, part) in rest.split(',').enumerate() {
            if i == 0 {
                word = Some(part.to_string());
            } else if let Some(a) = part.strip_prefix("alpha=") {
                alpha = parse_alpha(a)?;
            } else if let Some(sc) = part.strip_prefix("scale=") {
                scale = sc.parse().map_err(|_| Error::InvalidConfig("scale".into()))?;
            } else {
                return Err(Error::InvalidConfig(format!("unknown dist option '{}'", part)));
            }
        }
        let b = beta.ok_or_else(|| Error::InvalidConfig("dist needs β".into()))?;
        let word = word.ok_or_else(|| Error::InvalidConfig("dist needs an orbit word".into()))?;
        let orbit = find_orbit(b, &word)?;
        return Ok(HolderPotential::distance_power(orbit.points, alpha, scale));
    }
    Err(Error::InvalidConfig(format!("unknown potential spec '{}'", spec)))
}

/// Locate the periodic orbit of a (rotation of a) word.
pub fn find_orbit(beta: &BetaParam, word: &str) -> Result<PeriodicOrbit, Error> {
    let w = parse_word(word)?;
    if !w.preperiod().is_empty() {
        return Err(Error::InvalidConfig("orbit word must be purely periodic, e.g. (10)".into()));
    }
    let target = w.period().min_rotation();
    let orbits =
        enumerate_periodic_orbits(beta, target.len(), MapTag::U, crate::orbits::DEFAULT_BUDGET)?;
    orbits
        .into_iter()
        .find(|o| o.word == target)
        .ok_or_else(|| Error::PreconditionFailed(format!("word {} is not admissible", target)))
}

fn enclosure_json(e: &Enclosure) -> Value {
    json!({ "lo": e.lo.to_f64(), "hi": e.hi.to_f64(), "mid": e.mid_f64() })
}

fn orbit_json(o: &PeriodicOrbit) -> Value {
    json!({
        "word": format!("{}", o.word),
        "period": o.period,
        "points": o.points.iter().map(|p| p.mid_f64()).collect::<Vec<f64>>(),
    })
}

fn write_grid_csv(path: &str, gf: &GridFunction) -> Result<(), Error> {
    let mut s = String::from("node,left_value,right_value\n");
    for i in 0..gf.grid.len() {
        s.push_str(&format!(
            "{:.17e},{:.17e},{:.17e}\n",
            gf.grid.nodes[i], gf.left[i], gf.right[i]
        ));
    }
    std::fs::write(path, s).map_err(|e| Error::InvalidConfig(format!("write {}: {}", path, e)))
}

fn classification_json(c: &crate::betanum::Classification) -> Value {
    match c {
        crate::betanum::Classification::Simple { expansion } => {
            json!({ "kind": "Simple", "expansion": format!("{}", expansion) })
        }
        crate::betanum::Classification::NonSimple { expansion } => {
            json!({ "kind": "NonSimple", "expansion": format!("{}", expansion) })
        }
        crate::betanum::Classification::NonPreperiodicUpToHorizon { horizon, prefix } => {
            json!({ "kind": "NonPreperiodicUpToHorizon", "horizon": horizon,
                    "prefix": format!("{}", prefix) })
        }
    }
}

struct RunOutput {
    results: Value,
    diagnostics: Value,
    exit: i32,
    csv: Vec<(String, GridFunction)>,
}

impl RunOutput {
    fn ok(results: Value, diagnostics: Value) -> Self {
        RunOutput { results, diagnostics, exit: 0, csv: Vec::new() }
    }
}

fn subaction_params(grid: usize, k_crit: usize, iters: usize, window: usize, b: &Budgets) -> SubactionParams {
    SubactionParams {
        grid_n: grid,
        k_crit,
        iters,
        window,
        stop_tol: 1e-10,
        depth: b.depth,
        max_period: b.max_period,
        budget: b.budget,
    }
}

fn execute(cmd: &Command, opts: &BetaOptions) -> Result<RunOutput, Error> {
    match cmd {
        Command::Expand { beta, x, n, upper } => {
            let b = parse_beta(beta, opts)?;
            let xe = if x == "1" {
                Enclosure::one()
            } else {
                let r = parse_decimal(x)?;
                Enclosure::from_ratio(r.numer(), r.denom(), opts.value_bits)
            };
            let digits = if *upper { b.expand_upper(&xe, *n)? } else { b.expand(&xe, *n)? };
            Ok(RunOutput::ok(
                json!({ "digits": format!("{}", digits), "beta": enclosure_json(b.value()) }),
                json!({ "floor": b.floor() }),
            ))
        }
        Command::Classify { beta, horizon } => {
            let b = parse_beta(beta, opts)?;
            let c = betanum::classify(&b, *horizon)?;
            Ok(RunOutput::ok(
                json!({
                    "classification": classification_json(&c),
                    "beta": enclosure_json(b.value()),
                    "upper_expansion": match b.upper_expansion_of_one() {
                        crate::dynamics::ExpansionInfo::Exact(w) => format!("{}", w),
                        crate::dynamics::ExpansionInfo::Prefix(p) => format!("{}…", p),
                    },
                    "critical_orbit": b.critical().points.iter().map(|p| p.mid_f64()).collect::<Vec<f64>>(),
                }),
                json!({ "horizon": horizon, "emergent": betanum::emergent_status_for_beta_number(&c)
                    .map(|s| format!("{:?}", s)).unwrap_or_else(|_| "Undecidable".into()) }),
            ))
        }
        Command::ParrySolve { word } => {
            let w = parse_word(word)?;
            let b = betanum::parry_solve(&w)?;
            Ok(RunOutput::ok(
                json!({
                    "beta": enclosure_json(b.value()),
                    "classification": classification_json(b.classification()),
                }),
                json!({ "width": b.value().width().to_f64() }),
            ))
        }
        Command::NonsimpleBetween { beta1, beta2 } => {
            let b1 = parse_beta(beta1, opts)?;
            let b2 = parse_beta(beta2, opts)?;
            let g = betanum::nonsimple_between(&b1, &b2)?;
            Ok(RunOutput::ok(
                json!({
                    "gamma": enclosure_json(g.value()),
                    "word": format!("{}", g.classification().expansion_word().unwrap()),
                    "classification": classification_json(g.classification()),
                }),
                json!({
                    "beta1": b1.value_f64(),
                    "beta2": b2.value_f64(),
                }),
            ))
        }
        Command::Orbits { beta, max_period, map, budget } => {
            let b = parse_beta(beta, opts)?;
            let tag = match map.as_str() {
                "t" | "T" => MapTag::T,
                "u" | "U" => MapTag::U,
                _ => return Err(Error::InvalidConfig("map must be t or u".into())),
            };
            let orbits = enumerate_periodic_orbits(&b, *max_period, tag, *budget)?;
            Ok(RunOutput::ok(
                json!({
                    "count": orbits.len(),
                    "orbits": orbits.iter().map(orbit_json).collect::<Vec<Value>>(),
                }),
                json!({ "map": map, "max_period": max_period }),
            ))
        }
        Command::QBracket { beta, phi, budgets } => {
            let b = parse_beta(beta, opts)?;
            let p = parse_phi(phi, Some(&b))?;
            let br = q_bracket(&b, &p, budgets.depth, budgets.max_period, budgets.budget)?;
            Ok(RunOutput::ok(
                json!({
                    "lower": enclosure_json(&br.lower),
                    "upper": enclosure_json(&br.upper),
                    "width": br.width_f64(),
                    "witness": br.witness.as_ref().map(orbit_json),
                    "witness_t": br.witness_t.as_ref().map(orbit_json),
                }),
                json!({
                    "coarse_upper": br.coarse_upper,
                    "best_t_by_period": br.best_by_period,
                    "n_used": br.n_used,
                    "max_period_used": br.max_period_used,
                    "seminorm_bound": p.seminorm_bound,
                }),
            ))
        }
        Command::Subaction { beta, phi, grid, k_crit, iters, window, budgets, csv } => {
            let b = parse_beta(beta, opts)?;
            let p = parse_phi(phi, Some(&b))?;
            let params = subaction_params(*grid, *k_crit, *iters, *window, budgets);
            let (u, report, bracket) = calibrated_subaction(&b, &p, &params)?;
            let mut out = RunOutput::ok(
                json!({
                    "q_used": report.q_used,
                    "residual": report.residual,
                    "converged": report.converged,
                    "sup_abs_u": report.sup_abs_u,
                    "subaction_bound": report.subaction_bound,
                    "subaction_bound_ok": report.subaction_bound_ok,
                    "holder_ok": report.holder_ok,
                }),
                json!({
                    "iterations": report.iterations,
                    "bracket_width": bracket.width_f64(),
                    "holder_excess": report.holder_excess,
                    "k_alpha_beta": report.k_alpha_beta,
                    "holder_excess_slack": report.holder_excess,
                }),
            );
            if let Some(prefix) = csv {
                out.csv.push((format!("{}.u.csv", prefix), u));
            }
            Ok(out)
        }
        Command::Revealed { beta, phi, grid, k_crit, iters, window, budgets, csv } => {
            let b = parse_beta(beta, opts)?;
            let p = parse_phi(phi, Some(&b))?;
            let params = subaction_params(*grid, *k_crit, *iters, *window, budgets);
            let run = mane_run(&b, &p, &params)?;
            let mut out = RunOutput::ok(
                json!({
                    "q_used": run.report.q_used,
                    "residual": run.report.residual,
                    "max_tilde_minus": run.report.max_tilde_minus,
                    "max_tilde_plus": run.report.max_tilde_plus,
                    "sup_abs_u": run.report.sup_abs_u,
                    "subaction_bound_ok": run.report.subaction_bound_ok,
                    "holder_ok": run.report.holder_ok,
                }),
                json!({
                    "iterations": run.report.iterations,
                    "bracket_width": run.report.q_bracket_width,
                    "k_alpha_beta": run.report.k_alpha_beta,
                }),
            );
            if let Some(prefix) = csv {
                out.csv.push((format!("{}.u.csv", prefix), run.u.clone()));
                out.csv.push((format!("{}.uminus.csv", prefix), run.u_minus.clone()));
                out.csv.push((format!("{}.uplus.csv", prefix), run.u_plus.clone()));
                out.csv.push((format!("{}.tminus.csv", prefix), run.tilde_minus.clone()));
                out.csv.push((format!("{}.tplus.csv", prefix), run.tilde_plus.clone()));
            }
            Ok(out)
        }
        Command::Shadow { beta, gamma, gamma_offset, orbit_word } => {
            let b = parse_beta(beta, opts)?;
            let g = match (gamma, gamma_offset) {
                (Some(gs), _) => parse_beta(gs, opts)?,
                (None, Some(off)) => BetaParam::rational_from_f64(b.value_f64() - off)?,
                (None, None) => {
                    return Err(Error::InvalidConfig("need --gamma or --gamma-offset".into()))
                }
            };
            let orbit = find_orbit(&b, orbit_word)?;
            let rep = shadow_orbit(&b, &g, &orbit)?;
            Ok(RunOutput::ok(
                json!({
                    "orbit_gamma": orbit_json(&rep.orbit_gamma),
                    "distances": rep.distances.iter().map(|d| d.mid_f64()).collect::<Vec<f64>>(),
                    "upper_bound": rep.upper_bound.hi.to_f64(),
                    "lower_bound": rep.lower_bound.lo.to_f64(),
                    "cardinality_ok": rep.cardinality_ok,
                }),
                json!({ "s": rep.s, "n_zero_prefix": rep.n_zero_prefix,
                        "gamma": g.value_f64() }),
            ))
        }
        Command::PerturbConstants { beta, orbit_word, alpha } => {
            let b = parse_beta(beta, opts)?;
            let orbit = find_orbit(&b, orbit_word)?;
            let a = parse_alpha(alpha)?;
            let consts = perturbation_constants_beta(&b, &orbit, a)?;
            Ok(RunOutput::ok(
                serde_json::to_value(&consts).unwrap(),
                json!({ "orbit": orbit_json(&orbit) }),
            ))
        }
        Command::PerturbRun { beta, orbit_word, gamma_offset, alpha, slack, budgets } => {
            let b = parse_beta(beta, opts)?;
            let orbit = find_orbit(&b, orbit_word)?;
            let a = parse_alpha(alpha)?;
            let consts = perturbation_constants_beta(&b, &orbit, a)?;
            let offset = gamma_offset.min(consts.c2 / 2.0);
            let g = BetaParam::rational_from_f64(b.value_f64() - offset)?;
            let shadow = shadow_orbit(&b, &g, &orbit)?;
            let phi = HolderPotential::distance_power(orbit.points.clone(), a, -1.0);
            let pert = build_perturbed(&phi, &consts, &b, &g, &shadow.orbit_gamma);
            let v = verify_maximizer(
                &g,
                &pert,
                &shadow.orbit_gamma,
                budgets.max_period,
                budgets.depth,
                MapTag::U,
                *slack,
                budgets.budget,
            )?;
            let exit = if v.verdict == Verdict::Inconclusive { 2 } else { 0 };
            Ok(RunOutput {
                results: json!({
                    "verdict": format!("{:?}", v.verdict),
                    "target_average": enclosure_json(&v.target_average),
                    "best_rival_average": v.best_rival_average.as_ref().map(enclosure_json),
                    "best_rival_word": v.best_rival_word,
                    "q_upper": v.q_upper,
                    "q_upper_slack": v.q_upper_slack,
                }),
                diagnostics: json!({
                    "constants": serde_json::to_value(&consts).unwrap(),
                    "gamma": g.value_f64(),
                    "gamma_offset_used": offset,
                    "perturbation_seminorm": pert.seminorm_bound,
                    "certificate_used": v.certificate_used,
                    "rivals": v.rivals,
                    "shadow_upper": shadow.upper_bound.hi.to_f64(),
                }),
                exit,
                csv: Vec::new(),
            })
        }
        Command::LockCheck { beta, orbit_word, t, delta_norm, trials, seed, slack, budgets } => {
            let b = parse_beta(beta, opts)?;
            let orbit = find_orbit(&b, orbit_word)?;
            let phi_t = locking_potential(&HolderPotential::constant(0.0), &orbit, *t);
            let rep = locking_check(
                &b,
                &phi_t,
                &orbit,
                *delta_norm,
                *trials,
                *seed,
                budgets.max_period,
                budgets.depth,
                *slack,
                budgets.budget,
            )?;
            Ok(RunOutput::ok(
                json!({
                    "trials": rep.trials,
                    "passed": rep.passed,
                    "failed": rep.failed,
                    "empirical_c": rep.empirical_c,
                    "tracking_c": rep.tracking_c,
                }),
                serde_json::to_value(&rep.outcomes).unwrap(),
            ))
        }
        Command::ExpandingSubaction { k, phi, depth, grid, max_period, csv } => {
            let p = parse_phi(phi, None)?;
            let run = expanding_subaction(*k, &p, *depth, *grid, *max_period)?;
            let out = RunOutput::ok(
                json!({
                    "q_used": run.q_used,
                    "psi_max": run.psi_max,
                    "sup_abs_u": run.sup_abs_u,
                    "holder_ok": run.holder_ok,
                    "l_constant": run.constants.l_constant,
                }),
                serde_json::to_value(&run.constants).unwrap(),
            );
            if let Some(prefix) = csv {
                let mut s = String::from("node,left_value,right_value\n");
                for (i, v) in run.u.iter().enumerate() {
                    let x = i as f64 / run.u.len() as f64;
                    s.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", x, v, v));
                }
                std::fs::write(format!("{}.u.csv", prefix), s)
                    .map_err(|e| Error::InvalidConfig(format!("csv: {}", e)))?;
            }
            Ok(out)
        }
        Command::ExpandingConstants { k, orbit, alpha, l } => {
            let points: Result<Vec<f64>, _> = orbit.split(',').map(|t| t.trim().parse()).collect();
            let points = points.map_err(|_| Error::InvalidConfig("orbit points".into()))?;
            let a = parse_alpha(alpha)?;
            let consts = perturbation_constants_expanding(*k, &points, a, *l);
            Ok(RunOutput::ok(
                serde_json::to_value(&consts).unwrap(),
                json!({ "orbit": points }),
            ))
        }
    }
}

/// Run a parsed CLI invocation; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut opts = BetaOptions::default();
    if let Ok(bits) = std::env::var("BETAOPT_PRECISION_BITS") {
        if let Ok(bits) = bits.parse::<u32>() {
            opts.prec = bits;
            opts.value_bits = opts.value_bits.max(4 * bits);
        }
    } else if let Some(bits) = cli.precision_bits {
        opts.prec = bits;
        opts.value_bits = opts.value_bits.max(4 * bits);
    }

    let command_name = format!("{:?}", cli.command)
        .split_whitespace()
        .next()
        .unwrap_or("unknown")
        .trim_end_matches('{')
        .to_string();
    let config = json!({
        "schema": REPORT_SCHEMA,
        "command_line": format!("{:?}", cli.command),
        "precision_bits": opts.prec,
        "value_bits": opts.value_bits,
        "horizon": opts.horizon,
    });

    match execute(&cli.command, &opts) {
        Ok(out) => {
            for (path, gf) in &out.csv {
                if let Err(e) = write_grid_csv(path, gf) {
                    eprintln!("{}", e);
                    return 3;
                }
            }
            let report = json!({
                "command": command_name,
                "config": config,
                "results": out.results,
                "diagnostics": out.diagnostics,
                "version": env!("CARGO_PKG_VERSION"),
            });
            let text = serde_json::to_string_pretty(&report).expect("serialize report");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("write {}: {}", path, e);
                        return 3;
                    }
                }
                None => {
                    let mut stdout = std::io::stdout();
                    let _ = writeln!(stdout, "{}", text);
                }
            }
            out.exit
        }
        Err(e) => {
            let err_obj = json!({
                "command": command_name,
                "config": config,
                "error": { "message": format!("{}", e), "exit_code": e.exit_code() },
                "version": env!("CARGO_PKG_VERSION"),
            });
            eprintln!("{}", serde_json::to_string_pretty(&err_obj).expect("serialize error"));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_parsing() {
        let w = parse_word("2(10)").unwrap();
        assert_eq!(format!("{}", w), "2(10)");
        let w = parse_word("11").unwrap();
        assert_eq!(format!("{}", w), "11(0)");
        assert!(parse_word("1a").is_err());
    }

    #[test]
    fn beta_parsing() {
        let opts = BetaOptions::default();
        let b = parse_beta("cubic:1,-2,-2,2", &opts).unwrap();
        assert!((b.value_f64() - 2.48119).abs() < 5e-5);
        let b = parse_beta("2", &opts).unwrap();
        assert!(b.value().contains_int(2));
        let b = parse_beta("2.5", &opts).unwrap();
        assert!((b.value_f64() - 2.5).abs() < 1e-15);
        let b = parse_beta("golden", &opts).unwrap();
        assert!((b.value_f64() - 1.618).abs() < 1e-3);
    }

    #[test]
    fn phi_parsing() {
        let opts = BetaOptions::default();
        let b = parse_beta("cubic:1,-2,-2,2", &opts).unwrap();
        assert!(parse_phi("identity", None).is_ok());
        assert!(parse_phi("const:0.5", None).is_ok());
        assert!(parse_phi("trigc:0,1,0", None).is_ok());
        assert!(parse_phi("trig:7,4,1.0", None).is_ok());
        let d = parse_phi("dist:(10),alpha=1/2,scale=-2", Some(&b)).unwrap();
        assert_eq!(d.alpha, HolderAlpha::half());
        assert_eq!(d.seminorm_bound, 2.0);
        assert!(parse_phi("cubic-example", Some(&b)).is_ok());
    }
}
