//! Beta-shift membership, Parry admissibility, cylinder structure, and the
//! embedded smaller shifts H_β^γ.

use crate::dynamics::{BetaParam, ExpansionInfo};
use crate::error::Error;
use crate::numkit::{h_eval, Enclosure, EventuallyPeriodicWord, FiniteWord, Lex};

/// Default digit horizon for comparisons against a non-beta-number's upper
/// expansion prefix.
pub const DEFAULT_TIE_HORIZON: usize = 256;

/// Default leaf budget for cylinder enumeration.
pub const DEFAULT_WORD_BUDGET: usize = 2_000_000;

/// An n-cylinder `[left, right)` of T_β with its image data: the n-th image
/// is `[0, U_β^m(1))` where m is the longest suffix of the word matching a
/// prefix of π*_β(1).
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub word: FiniteWord,
    pub left: Enclosure,
    pub right: Enclosure,
    pub full: bool,
    pub image_right: Enclosure,
}

/// Compare an eventually periodic word against π*_β(1).
/// Exact for beta-numbers; for prefix-only upper expansions the comparison
/// is decided within the prefix or reported as a horizon tie.
fn compare_vs_upper(beta: &BetaParam, word: &EventuallyPeriodicWord) -> Result<Lex, Error> {
    match beta.upper_expansion_of_one() {
        ExpansionInfo::Exact(star) => Ok(crate::numkit::lex_compare(word, star)),
        ExpansionInfo::Prefix(p) => {
            for i in 0..p.len() {
                match word.digit(i).cmp(&p.digit(i)) {
                    std::cmp::Ordering::Equal => continue,
                    other => return Ok(other),
                }
            }
            Err(Error::HorizonExceeded(format!(
                "tie against the upper expansion prefix of length {}",
                p.len()
            )))
        }
    }
}

/// Is `word (0)^∞` the expansion of some x in [0,1)? Decided by the strict
/// dominance of π*_β(1) over every shift.
pub fn is_admissible(beta: &BetaParam, word: &FiniteWord) -> Result<bool, Error> {
    if word.max_digit() as u64 > beta.floor() {
        return Ok(false);
    }
    for k in 0..word.len() {
        let suffix = EventuallyPeriodicWord::from_finite(&FiniteWord(word.0[k..].to_vec()));
        if compare_vs_upper(beta, &suffix)? != Lex::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of an eventually periodic word in the beta-shift S_β:
/// every shift must be ⪯ π*_β(1).
pub fn in_beta_shift(beta: &BetaParam, word: &EventuallyPeriodicWord) -> Result<bool, Error> {
    if word.max_digit() as u64 > beta.floor() {
        return Ok(false);
    }
    for s in word.distinct_shifts() {
        if compare_vs_upper(beta, &s)? == Lex::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

fn upper_digit(beta: &BetaParam, i: usize) -> Result<u8, Error> {
    match beta.upper_expansion_of_one() {
        ExpansionInfo::Exact(star) => Ok(star.digit(i).0),
        ExpansionInfo::Prefix(p) => {
            if i < p.len() {
                Ok(p.digit(i).0)
            } else {
                Err(Error::HorizonExceeded("upper expansion prefix exhausted".into()))
            }
        }
    }
}

/// Longest j such that the last j digits of `word` equal the first j digits
/// of π*_β(1).
fn image_index(beta: &BetaParam, word: &FiniteWord) -> Result<usize, Error> {
    let n = word.len();
    'outer: for j in (1..=n).rev() {
        for i in 0..j {
            if word.digit(n - j + i).0 != upper_digit(beta, i)? {
                continue 'outer;
            }
        }
        return Ok(j);
    }
    Ok(0)
}

/// U_β^m(1) as an enclosure, exact point 1 when the shifted upper word
/// cycles back to π*_β(1) itself.
fn image_right_point(beta: &BetaParam, m: usize) -> Result<(Enclosure, bool), Error> {
    if m == 0 {
        return Ok((Enclosure::one(), true));
    }
    match beta.upper_expansion_of_one() {
        ExpansionInfo::Exact(star) => {
            let w = star.shift(m);
            if &w == star {
                Ok((Enclosure::one(), true))
            } else {
                Ok((h_eval(&w, beta.value(), beta.prec())?, false))
            }
        }
        ExpansionInfo::Prefix(_) => {
            let p = beta
                .critical()
                .point(m)
                .cloned()
                .ok_or_else(|| Error::HorizonExceeded("critical orbit prefix exhausted".into()))?;
            Ok((p, false))
        }
    }
}

/// The cylinder of an admissible finite word.
pub fn cylinder_of(beta: &BetaParam, word: &FiniteWord) -> Result<Cylinder, Error> {
    if !is_admissible(beta, word)? {
        return Err(Error::NotAdmissible);
    }
    let prec = beta.prec();
    let left = h_eval(&EventuallyPeriodicWord::from_finite(word), beta.value(), prec)?;
    let m = image_index(beta, word)?;
    let (image_right, full) = image_right_point(beta, m)?;
    let scale = beta.value().recip(prec)?.pow(word.len() as u32, prec);
    let right = left.add(&image_right.mul(&scale, prec), prec);
    Ok(Cylinder { word: word.clone(), left, right, full, image_right })
}

/// All admissible n-cylinders, in left-endpoint order. Their union is [0,1).
pub fn enumerate_cylinders(
    beta: &BetaParam,
    n: usize,
    budget: usize,
) -> Result<Vec<Cylinder>, Error> {
    if n == 0 {
        return Err(Error::PreconditionFailed("cylinder depth must be >= 1".into()));
    }
    let mut estimate = 1usize;
    for _ in 0..n {
        estimate = estimate.saturating_mul(beta.floor().max(1) as usize);
        if estimate > budget {
            return Err(Error::BudgetExceeded(format!(
                "⌊β⌋^{} exceeds the word budget {}",
                n, budget
            )));
        }
    }
    let words = admissible_words(beta, n, budget.saturating_mul(64))?;
    let mut out = Vec::with_capacity(words.len());
    for w in words {
        out.push(cylinder_of(beta, &w)?);
    }
    Ok(out)
}

/// Depth-first enumeration of admissible words of length n, lexicographic.
/// Maintains the set of suffix lengths that currently match a prefix of
/// π*_β(1); a digit exceeding the continuation of any matched suffix kills
/// the branch.
pub(crate) fn admissible_words(
    beta: &BetaParam,
    n: usize,
    budget: usize,
) -> Result<Vec<FiniteWord>, Error> {
    let mut out = Vec::new();
    let mut word: Vec<u8> = Vec::with_capacity(n);
    let mut tight: Vec<Vec<usize>> = vec![Vec::new()];
    let mut visited = 0usize;
    dfs_words(beta, n, budget, &mut word, &mut tight, &mut out, &mut visited)?;
    Ok(out)
}

fn dfs_words(
    beta: &BetaParam,
    n: usize,
    budget: usize,
    word: &mut Vec<u8>,
    tight: &mut Vec<Vec<usize>>,
    out: &mut Vec<FiniteWord>,
    visited: &mut usize,
) -> Result<(), Error> {
    if word.len() == n {
        out.push(FiniteWord::from_digits(word));
        return Ok(());
    }
    let top = beta.floor() as u8;
    for d in 0..=top {
        *visited += 1;
        if *visited > budget {
            return Err(Error::BudgetExceeded("cylinder DFS budget".into()));
        }
        let cur = tight.last().unwrap().clone();
        let mut next = Vec::with_capacity(cur.len() + 1);
        let mut ok = true;
        for l in cur.iter().copied().chain(std::iter::once(0)) {
            let bound = upper_digit(beta, l)?;
            if d > bound {
                ok = false;
                break;
            }
            if d == bound {
                next.push(l + 1);
            }
        }
        if !ok {
            continue;
        }
        word.push(d);
        tight.push(next);
        dfs_words(beta, n, budget, word, tight, out, visited)?;
        tight.pop();
        word.pop();
    }
    Ok(())
}

/// x ∈ H_β^γ = h_β(S_γ), decided through the expansion of x at β.
///
/// From a bare enclosure only a digit prefix of π_β(x) is available, so the
/// decision may be a certified yes/no within the horizon or an honest
/// `HorizonExceeded`. When the expansion of x is known exactly, use
/// [`in_h_gamma_word`].
pub fn in_h_gamma(
    beta: &BetaParam,
    gamma: &BetaParam,
    x: &Enclosure,
    horizon: usize,
) -> Result<bool, Error> {
    if !(gamma.value().certainly_lt(beta.value())) {
        return Err(Error::PreconditionFailed("need 1 < γ < β".into()));
    }
    let digits = beta.expand(x, horizon)?;
    // Every shift of π_β(x) must be ⪯ π*_γ(1). With only `horizon` digits,
    // a shift comparison is decided as soon as a digit differs.
    for k in 0..horizon {
        let avail = horizon - k;
        let mut decided = None;
        for i in 0..avail {
            let s = upper_digit(gamma, i);
            let sd = match s {
                Ok(v) => v,
                Err(_) => break,
            };
            match digits.digit(k + i).0.cmp(&sd) {
                std::cmp::Ordering::Equal => continue,
                other => {
                    decided = Some(other);
                    break;
                }
            }
        }
        match decided {
            Some(Lex::Greater) => return Ok(false),
            Some(_) => {}
            None => {
                return Err(Error::HorizonExceeded(format!(
                    "shift {} of the expansion ties to the horizon",
                    k
                )))
            }
        }
    }
    Ok(true)
}

/// x ∈ H_β^γ when π_β(x) is known exactly as an eventually periodic word.
pub fn in_h_gamma_word(
    beta: &BetaParam,
    gamma: &BetaParam,
    word: &EventuallyPeriodicWord,
) -> Result<bool, Error> {
    if !(gamma.value().certainly_lt(beta.value())) {
        return Err(Error::PreconditionFailed("need 1 < γ < β".into()));
    }
    in_beta_shift(gamma, word)
}
