//! Revised simplex with Bland's rule over an abstract scalar, for problems
//! `A x = b, x ≥ 0` whose structural columns are 0/1 vectors supplied by an
//! oracle, plus one unit column per row (artificial or slack).

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{ContextualityError, Result};
use crate::prob::ratio_to_f64;

pub trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Strictly positive beyond the pivot tolerance.
    fn pos(&self) -> bool;
    /// Strictly negative beyond the pivot tolerance.
    fn neg(&self) -> bool;
    fn lt(&self, o: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn pos(&self) -> bool {
        self.is_positive()
    }
    fn neg(&self) -> bool {
        self.is_negative()
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
}

const PIVOT_TOL: f64 = 1e-12;

impl Scalar for f64 {
    fn zero() -> Self {
        0.
    }
    fn one() -> Self {
        1.
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn pos(&self) -> bool {
        *self > PIVOT_TOL
    }
    fn neg(&self) -> bool {
        *self < -PIVOT_TOL
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Structural columns of the constraint matrix: column `j` has a 1 in each
/// listed row and 0 elsewhere.
pub trait Columns {
    fn count(&self) -> usize;
    fn rows_of(&self, j: usize, out: &mut Vec<usize>);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    /// Structural column; ordered before every unit column for Bland's rule.
    Structural(usize),
    Unit(usize),
}

pub struct Solution<S> {
    pub basis: Vec<Var>,
    pub values: Vec<S>,
    /// Simplex multipliers `c_B B⁻¹` at the final basis.
    pub duals: Vec<S>,
    pub objective: S,
}

impl<S: Scalar> Solution<S> {
    pub fn structural_values(&self) -> Vec<(usize, S)> {
        let mut v: Vec<(usize, S)> = self
            .basis
            .iter()
            .zip(&self.values)
            .filter_map(|(var, x)| match var {
                Var::Structural(j) if x.pos() => Some((*j, x.clone())),
                _ => None,
            })
            .collect();
        v.sort_by_key(|p| p.0);
        v
    }
}

/// Minimises `Σ c_j x_j` from the all-unit starting basis (`x_unit = b`,
/// which must be nonnegative). Unit columns may re-enter only if
/// `units_enter` is set.
pub fn minimize<S: Scalar, C: Columns>(
    cols: &C,
    b: &[S],
    cost_structural: &S,
    cost_unit: &S,
    units_enter: bool,
    max_iterations: usize,
) -> Result<Solution<S>> {
    let m = b.len();
    let n = cols.count();
    let mut binv: Vec<Vec<S>> = (0..m)
        .map(|i| (0..m).map(|k| if i == k { S::one() } else { S::zero() }).collect())
        .collect();
    let mut basis: Vec<Var> = (0..m).map(Var::Unit).collect();
    let mut x: Vec<S> = b.to_vec();
    let mut in_basis = vec![false; n];
    let mut rows = Vec::new();
    let cost = |v: Var| match v {
        Var::Structural(_) => cost_structural.clone(),
        Var::Unit(_) => cost_unit.clone(),
    };
    for _ in 0..max_iterations {
        // y = c_B B⁻¹
        let mut y = vec![S::zero(); m];
        for (r, var) in basis.iter().enumerate() {
            let cb = cost(*var);
            if cb == S::zero() {
                continue;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = yi.add(&cb.mul(&binv[r][i]));
            }
        }
        // Bland: first improving column in variable order
        let mut entering = None;
        for j in 0..n {
            rows.clear();
            cols.rows_of(j, &mut rows);
            let ya = rows.iter().fold(S::zero(), |acc, &i| acc.add(&y[i]));
            if !in_basis[j] && cost_structural.sub(&ya).neg() {
                entering = Some(Var::Structural(j));
                break;
            }
        }
        if entering.is_none() && units_enter {
            for i in 0..m {
                if cost_unit.sub(&y[i]).neg() && !basis.contains(&Var::Unit(i)) {
                    entering = Some(Var::Unit(i));
                    break;
                }
            }
        }
        let Some(e) = entering else {
            let objective = basis.iter().zip(&x).fold(S::zero(), |acc, (v, xv)| acc.add(&cost(*v).mul(xv)));
            return Ok(Solution {
                basis,
                values: x,
                duals: y,
                objective,
            });
        };
        // u = B⁻¹ a_e
        let u: Vec<S> = match e {
            Var::Structural(j) => {
                rows.clear();
                cols.rows_of(j, &mut rows);
                (0..m).map(|r| rows.iter().fold(S::zero(), |acc, &i| acc.add(&binv[r][i]))).collect()
            }
            Var::Unit(i) => (0..m).map(|r| binv[r][i].clone()).collect(),
        };
        // ratio test, ties to the smallest leaving variable
        let mut leave: Option<(usize, S)> = None;
        for r in 0..m {
            if !u[r].pos() {
                continue;
            }
            let ratio = x[r].div(&u[r]);
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio.lt(best) || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // bounded problems only: every column has a positive entry somewhere
        let (r, _) = leave.expect("bounded linear program");
        let pivot = u[r].clone();
        for k in 0..m {
            binv[r][k] = binv[r][k].div(&pivot);
        }
        x[r] = x[r].div(&pivot);
        for q in 0..m {
            if q == r || u[q] == S::zero() {
                continue;
            }
            let f = u[q].clone();
            for k in 0..m {
                let d = f.mul(&binv[r][k]);
                binv[q][k] = binv[q][k].sub(&d);
            }
            x[q] = x[q].sub(&f.mul(&x[r]));
        }
        if let Var::Structural(j) = basis[r] {
            in_basis[j] = false;
        }
        if let Var::Structural(j) = e {
            in_basis[j] = true;
        }
        basis[r] = e;
    }
    Err(ContextualityError::IterationLimit)
}
