//! One-sided grid functions and the max-plus transfer operator
//! L(u)(x) = max { (u+ψ)(y) : y ∈ T_β^{-1}(x) \ {1} }.
//!
//! Grid nodes carry distinct left/right values because the calibrated
//! sub-action is discontinuous exactly on the critical orbit; aligning the
//! grid with D_β and the critical orbit keeps the interpolation honest.

use crate::dynamics::BetaParam;
use crate::error::Error;
use rayon::prelude::*;
use std::sync::Arc;

const SNAP_EPS: f64 = 1e-11;

/// Sorted breakpoints on \[0,1\]: uniform nodes ∪ D_β ∪ critical-orbit points.
#[derive(Debug)]
pub struct BreakpointGrid {
    pub nodes: Vec<f64>,
    pub beta: f64,
    pub branches: u32,
    /// positions (values) of critical-orbit points present among the nodes
    pub crit_points: Vec<f64>,
}

impl BreakpointGrid {
    pub fn build(beta: &BetaParam, n_uniform: usize, k_crit: usize) -> Result<Arc<Self>, Error> {
        let mut nodes: Vec<f64> = (0..=n_uniform).map(|i| i as f64 / n_uniform as f64).collect();
        for d in beta.disc_points() {
            nodes.push(d.mid_f64());
        }
        let mut crit_points = Vec::new();
        for kk in 0..k_crit {
            match beta.critical().point(kk) {
                Some(p) => {
                    let v = p.mid_f64();
                    crit_points.push(v);
                    nodes.push(v);
                }
                None => break,
            }
            if beta.critical().exact && kk + 1 >= beta.critical().points.len() {
                break; // the finite orbit is fully present
            }
        }
        nodes.retain(|v| (0.0..=1.0).contains(v));
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() < SNAP_EPS);
        if (nodes[0] - 0.0).abs() > 0.0 {
            nodes.insert(0, 0.0);
        }
        if (nodes[nodes.len() - 1] - 1.0).abs() > 0.0 {
            nodes.push(1.0);
        }
        crit_points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        crit_points.dedup_by(|a, b| (*a - *b).abs() < SNAP_EPS);
        Ok(Arc::new(BreakpointGrid {
            nodes,
            beta: beta.value_f64(),
            branches: beta.floor() as u32,
            crit_points,
        }))
    }

    /// Index of the node at `x`, if `x` hits a node up to snapping.
    pub fn node_at(&self, x: f64) -> Option<usize> {
        let i = self.nodes.partition_point(|&n| n < x - SNAP_EPS);
        if i < self.nodes.len() && (self.nodes[i] - x).abs() <= SNAP_EPS {
            Some(i)
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Is some critical-orbit point inside the closed interval [a, b]?
    pub fn crit_in_closed(&self, a: f64, b: f64) -> bool {
        let i = self.crit_points.partition_point(|&c| c < a - SNAP_EPS);
        i < self.crit_points.len() && self.crit_points[i] <= b + SNAP_EPS
    }
}

/// Reads of a function with one-sided limits.
pub trait OneSidedSource: Sync {
    fn left_at(&self, x: f64) -> f64;
    fn right_at(&self, x: f64) -> f64;
}

/// A potential shifted by a constant reads the same from both sides.
pub struct ShiftedPotential<'a> {
    pub phi: &'a crate::orbits::potential::HolderPotential,
    pub q: f64,
}

impl OneSidedSource for ShiftedPotential<'_> {
    fn left_at(&self, x: f64) -> f64 {
        self.phi.eval(x) - self.q
    }
    fn right_at(&self, x: f64) -> f64 {
        self.phi.eval(x) - self.q
    }
}

/// Function on \[0,1\] with per-node left/right values; between nodes the value
/// is linear between (right value at the left node) and (left value at the
/// right node).
#[derive(Debug, Clone)]
pub struct OneSidedGridFunction {
    pub grid: Arc<BreakpointGrid>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl OneSidedGridFunction {
    pub fn zero(grid: Arc<BreakpointGrid>) -> Self {
        let n = grid.len();
        OneSidedGridFunction { grid, left: vec![0.0; n], right: vec![0.0; n] }
    }

    pub fn from_node_values(grid: Arc<BreakpointGrid>, values: Vec<f64>) -> Self {
        OneSidedGridFunction { grid, left: values.clone(), right: values }
    }

    fn interp(&self, y: f64) -> f64 {
        let y = y.clamp(0.0, 1.0);
        if let Some(i) = self.grid.node_at(y) {
            // interior reads at an exact node default to the right value;
            // callers wanting the left limit use left_at
            return self.right[i];
        }
        let i = self.grid.nodes.partition_point(|&n| n < y) - 1;
        let (a, b) = (self.grid.nodes[i], self.grid.nodes[i + 1]);
        let t = (y - a) / (b - a);
        self.right[i] * (1.0 - t) + self.left[i + 1] * t
    }

    pub fn sup_abs(&self) -> f64 {
        self.left
            .iter()
            .chain(self.right.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn sup_diff(&self, other: &OneSidedGridFunction) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.left.len() {
            m = m.max((self.left[i] - other.left[i]).abs());
            m = m.max((self.right[i] - other.right[i]).abs());
        }
        m
    }

    /// Pointwise max, both sides.
    pub fn pointwise_max(&mut self, other: &OneSidedGridFunction) {
        for i in 0..self.left.len() {
            self.left[i] = self.left[i].max(other.left[i]);
            self.right[i] = self.right[i].max(other.right[i]);
        }
    }
}

impl OneSidedSource for OneSidedGridFunction {
    fn left_at(&self, x: f64) -> f64 {
        if let Some(i) = self.grid.node_at(x) {
            self.left[i]
        } else {
            self.interp(x)
        }
    }

    fn right_at(&self, x: f64) -> f64 {
        if let Some(i) = self.grid.node_at(x) {
            self.right[i]
        } else {
            self.interp(x)
        }
    }
}

/// One application of the operator. Preimages of x are y = (x+j)/β for
/// j = 0..⌊β⌋ with y ∈ [0,1); the branch through y = 1 contributes only to
/// left values (as a left limit), never to right values.
pub fn bousch_apply(psi: &dyn OneSidedSource, u: &OneSidedGridFunction) -> OneSidedGridFunction {
    let grid = &u.grid;
    let beta = grid.beta;
    let n = grid.len();
    let values: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = grid.nodes[i];
            let mut right = f64::NEG_INFINITY;
            let mut left = f64::NEG_INFINITY;
            for j in 0..=grid.branches {
                let y = (x + j as f64) / beta;
                if y < 1.0 - SNAP_EPS {
                    right = right.max(u.right_at(y) + psi.right_at(y));
                    left = left.max(u.left_at(y) + psi.left_at(y));
                } else if (y - 1.0).abs() <= SNAP_EPS {
                    // left limit through the top of the branch
                    left = left.max(u.left_at(1.0) + psi.left_at(1.0));
                }
            }
            (left, right)
        })
        .collect();
    let mut out = OneSidedGridFunction {
        grid: grid.clone(),
        left: values.iter().map(|v| v.0).collect(),
        right: values.iter().map(|v| v.1).collect(),
    };
    // no left limit exists at 0; store the value itself
    out.left[0] = out.right[0];
    // x = 1 only carries a left limit
    let last = n - 1;
    out.right[last] = out.left[last];
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::potential::HolderPotential;

    #[test]
    fn bousch_zero_fixed() {
        let b2 = BetaParam::integer(2).unwrap();
        let grid = BreakpointGrid::build(&b2, 64, 8).unwrap();
        let u = OneSidedGridFunction::zero(grid);
        let zero = HolderPotential::constant(0.0);
        let psi = ShiftedPotential { phi: &zero, q: 0.0 };
        let lu = bousch_apply(&psi, &u);
        assert!(lu.sup_abs() < 1e-14);
    }

    #[test]
    fn bousch_identity_two_branches() {
        // β=2, ψ = id, u ≡ 0: L(x) = max(x/2, (x+1)/2) = (x+1)/2 on [0,1).
        let b2 = BetaParam::integer(2).unwrap();
        let grid = BreakpointGrid::build(&b2, 128, 4).unwrap();
        let u = OneSidedGridFunction::zero(grid.clone());
        let id = HolderPotential::identity();
        let psi = ShiftedPotential { phi: &id, q: 0.0 };
        let lu = bousch_apply(&psi, &u);
        for (i, &x) in grid.nodes.iter().enumerate() {
            if x < 1.0 - 1e-9 {
                assert!((lu.right[i] - (x + 1.0) / 2.0).abs() < 1e-12, "at {}", x);
            }
        }
    }

    #[test]
    fn bousch_monotone_top_branch() {
        // nondecreasing ψ and u: the top valid branch wins everywhere.
        let g = BetaParam::golden().unwrap();
        let grid = BreakpointGrid::build(&g, 64, 8).unwrap();
        let beta = g.value_f64();
        let u = OneSidedGridFunction::zero(grid.clone());
        let id = HolderPotential::identity();
        let psi = ShiftedPotential { phi: &id, q: 0.0 };
        let lu = bousch_apply(&psi, &u);
        for (i, &x) in grid.nodes.iter().enumerate() {
            if x >= 1.0 - 1e-9 {
                continue;
            }
            // top branch: largest j with (x+j)/β < 1
            let mut best = f64::NEG_INFINITY;
            for j in 0..=1 {
                let y = (x + j as f64) / beta;
                if y < 1.0 - 1e-11 {
                    best = best.max(y);
                }
            }
            assert!((lu.right[i] - best).abs() < 1e-12);
        }
    }

    #[test]
    fn operator_monotone_and_equivariant() {
        let b2 = BetaParam::integer(2).unwrap();
        let grid = BreakpointGrid::build(&b2, 64, 4).unwrap();
        let trig = HolderPotential::trig(0.1, vec![(0.3, -0.2), (0.0, 0.5)]);
        let psi = ShiftedPotential { phi: &trig, q: 0.05 };
        let u = OneSidedGridFunction::zero(grid.clone());
        let mut v = OneSidedGridFunction::zero(grid.clone());
        for (i, &x) in grid.nodes.iter().enumerate() {
            v.left[i] = 0.3 * (3.0 * x).sin().abs();
            v.right[i] = v.left[i];
        }
        // monotone: u ≤ v ⇒ L(u) ≤ L(v)
        let lu = bousch_apply(&psi, &u);
        let lv = bousch_apply(&psi, &v);
        for i in 0..grid.len() {
            assert!(lu.right[i] <= lv.right[i] + 1e-12);
            assert!(lu.left[i] <= lv.left[i] + 1e-12);
        }
        // additive equivariance: L(u + c) = L(u) + c
        let mut uc = u.clone();
        for i in 0..grid.len() {
            uc.left[i] += 0.37;
            uc.right[i] += 0.37;
        }
        let luc = bousch_apply(&psi, &uc);
        for i in 0..grid.len() {
            assert!((luc.right[i] - lu.right[i] - 0.37).abs() < 1e-12);
            assert!((luc.left[i] - lu.left[i] - 0.37).abs() < 1e-12);
        }
    }
}
