//! Ready-made parameters and potentials used by the guide, the CLI and the
//! verification suite.

use crate::dynamics::BetaParam;
use crate::error::Error;
use crate::numkit::Enclosure;
use crate::orbits::potential::{HolderAlpha, HolderPotential};

/// Distinguished points of the cubic parameter (largest root of
/// ζ³ − 2ζ² − 2ζ + 2): the fixed point z = 1/(β−1), the 2-cycle
/// {x, y} = {β/(β²−1), 1/(β²−1)}, and the comparison points used by the
/// pinned piecewise-affine potential.
pub struct CubicPoints {
    pub z: Enclosure,
    pub x: Enclosure,
    pub y: Enclosure,
    pub x1: Enclosure,
    pub y1: Enclosure,
    pub y2: Enclosure,
    pub y3: Enclosure,
    pub y4: Enclosure,
}

/// τ(s) = (s+1)/β, the top inverse branch.
fn tau(beta: &BetaParam, s: &Enclosure, prec: u32) -> Result<Enclosure, Error> {
    s.add(&Enclosure::one(), prec).div(beta.value(), prec)
}

pub fn cubic_points(beta: &BetaParam) -> Result<CubicPoints, Error> {
    let prec = beta.prec();
    let crit = beta.critical();
    if !(crit.exact && crit.points.len() == 3) {
        return Err(Error::PreconditionFailed(
            "expected the cubic parameter with critical orbit {1, x, y}".into(),
        ));
    }
    let x = crit.points[1].clone();
    let y = crit.points[2].clone();
    let one = Enclosure::one();
    let z = beta.value().sub(&one, prec).recip(prec)?;
    let x1 = tau(beta, &x, prec)?;
    let y1 = y.div(beta.value(), prec)?;
    let y2 = tau(beta, &y1, prec)?;
    let y3 = tau(beta, &y2, prec)?;
    let y4 = tau(beta, &y3, prec)?;
    Ok(CubicPoints { z, x, y, x1, y1, y2, y3, y4 })
}

/// The nonpositive piecewise-affine potential pinned to the cubic's cycle
/// structure: identically zero on \[0,y₁\], \[y₂,y₃\], \[y₄,1\]; affine between,
/// with value −1 at y and −2 at x₁. Its restricted maxima make the 2-cycle
/// {x, y} a natural — but not maximizing — candidate orbit.
pub fn cubic_example_potential(beta: &BetaParam) -> Result<HolderPotential, Error> {
    let p = cubic_points(beta)?;
    let zero = Enclosure::zero();
    let m1 = Enclosure::from_i64(-1);
    let m2 = Enclosure::from_i64(-2);
    let nodes = vec![
        Enclosure::zero(),
        p.y1.clone(),
        p.y.clone(),
        p.y2.clone(),
        p.y3.clone(),
        p.x1.clone(),
        p.y4.clone(),
        Enclosure::one(),
    ];
    let values = vec![
        zero.clone(),
        zero.clone(),
        m1,
        zero.clone(),
        zero.clone(),
        m2,
        zero.clone(),
        zero,
    ];
    Ok(HolderPotential::piecewise_affine(nodes, values))
}

/// φ = −d(·, orbit points)^α.
pub fn negative_distance_power(points: &[Enclosure], alpha: HolderAlpha) -> HolderPotential {
    HolderPotential::distance_power(points.to_vec(), alpha, -1.0)
}
