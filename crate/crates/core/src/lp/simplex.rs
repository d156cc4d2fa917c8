//! Dense exact-rational simplex with bounded variables.
//!
//! Two-phase primal simplex, Bland's rule throughout (slow but cycle-free
//! and deterministic). Structural variables carry finite bounds; slack and
//! artificial columns are managed internally. Everything is exact
//! `BigRational` arithmetic; there are no tolerances anywhere.

use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Eq,
    Le,
}

pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub sense: Sense,
    pub rhs: BigRational,
}

pub struct Problem {
    /// bounds of structural variables
    pub lower: Vec<BigRational>,
    pub upper: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

pub enum Outcome {
    Optimal { x: Vec<BigRational>, pivots: u64 },
    Infeasible { pivots: u64 },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    nstruct: usize,
    ncols: usize,
    nart: usize,
    lower: Vec<BigRational>,
    /// None = unbounded above
    upper: Vec<Option<BigRational>>,
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    status: Vec<Status>,
    /// current value of every column
    value: Vec<BigRational>,
    /// reduced-cost row, updated by the same pivots as the rows
    obj: Vec<BigRational>,
    pivots: u64,
}

/// Maximize `objective . x` over the problem. The objective only covers the
/// structural variables.
pub fn maximize(problem: &Problem, objective: &[BigRational]) -> Result<Outcome> {
    let nstruct = problem.lower.len();
    assert_eq!(objective.len(), nstruct);
    let k = problem.constraints.len();
    let nslack = problem
        .constraints
        .iter()
        .filter(|c| c.sense == Sense::Le)
        .count();
    let ncols = nstruct + nslack + k; // slacks then one artificial per row

    let mut lower = vec![BigRational::zero(); ncols];
    let mut upper: Vec<Option<BigRational>> = vec![None; ncols];
    for j in 0..nstruct {
        lower[j] = problem.lower[j].clone();
        upper[j] = Some(problem.upper[j].clone());
    }

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    let mut basis = Vec::with_capacity(k);
    let mut status = vec![Status::AtLower; ncols];
    let mut value = vec![BigRational::zero(); ncols];
    for j in 0..nstruct {
        value[j] = problem.lower[j].clone();
    }

    let mut slack_cursor = nstruct;
    let nart_base = nstruct + nslack;
    for (i, c) in problem.constraints.iter().enumerate() {
        assert_eq!(c.coeffs.len(), nstruct);
        let mut row = vec![BigRational::zero(); ncols];
        row[..nstruct].clone_from_slice(&c.coeffs);
        let slack = if c.sense == Sense::Le {
            let s = slack_cursor;
            row[s] = BigRational::one();
            slack_cursor += 1;
            Some(s)
        } else {
            None
        };
        // residual with structural vars at lower bounds and slack at 0
        let mut residual = c.rhs.clone();
        for (j, lo) in problem.lower.iter().enumerate() {
            residual -= &c.coeffs[j] * lo;
        }
        // a nonnegative-residual Le row starts with its own slack basic;
        // everything else gets an artificial (row flipped so the basic
        // column stays a +1 unit column)
        if let (Some(s), false) = (slack, residual.is_negative()) {
            value[s] = residual;
            basis.push(s);
            status[s] = Status::Basic;
        } else {
            if residual.is_negative() {
                for v in row.iter_mut() {
                    *v = -std::mem::take(v);
                }
            }
            let art = nart_base + i;
            row[art] = BigRational::one();
            value[art] = residual.abs();
            basis.push(art);
            status[art] = Status::Basic;
        }
        rows.push(row);
    }

    let mut t = Tableau {
        nstruct,
        ncols,
        nart: k,
        lower,
        upper,
        rows,
        basis,
        status,
        value,
        obj: vec![BigRational::zero(); ncols],
        pivots: 0,
    };

    // reduce basic columns (artificial unit columns are already reduced)

    // phase 1: maximize minus the sum of artificials
    let mut phase1 = vec![BigRational::zero(); ncols];
    for a in nart_base..ncols {
        phase1[a] = -BigRational::one();
    }
    t.load_objective(&phase1);
    t.run()?;
    let infeasibility: BigRational = (nart_base..ncols).map(|a| t.value[a].clone()).sum();
    if !infeasibility.is_zero() {
        return Ok(Outcome::Infeasible { pivots: t.pivots });
    }
    // freeze artificials at zero so phase 2 cannot reuse them
    for a in nart_base..ncols {
        t.upper[a] = Some(BigRational::zero());
    }

    let mut full_obj = vec![BigRational::zero(); ncols];
    full_obj[..nstruct].clone_from_slice(objective);
    t.load_objective(&full_obj);
    t.run()?;

    Ok(Outcome::Optimal {
        x: t.value[..nstruct].to_vec(),
        pivots: t.pivots,
    })
}

impl Tableau {
    /// Sets the reduced-cost row for a new objective given the current basis.
    fn load_objective(&mut self, c: &[BigRational]) {
        let mut obj = c.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if !c[b].is_zero() {
                let f = c[b].clone();
                for j in 0..self.ncols {
                    let sub = &f * &self.rows[i][j];
                    obj[j] -= sub;
                }
            }
        }
        self.obj = obj;
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.upper[j].as_ref().is_some_and(|u| *u == self.lower[j])
    }

    fn run(&mut self) -> Result<()> {
        // Dantzig pricing while progress is made; after a stretch of
        // degenerate pivots switch to Bland's least-index rule, which
        // cannot cycle, until the objective moves again.
        const DEGENERATE_PATIENCE: u32 = 24;
        let mut degenerate_streak: u32 = 0;
        loop {
            let bland = degenerate_streak >= DEGENERATE_PATIENCE;
            let mut entering: Option<(usize, bool)> = None; // (col, increasing)
            let mut best_score: Option<BigRational> = None;
            for j in 0..self.ncols {
                let direction = match self.status[j] {
                    Status::Basic => continue,
                    Status::AtLower => {
                        if self.is_fixed(j) || !self.obj[j].is_positive() {
                            continue;
                        }
                        true
                    }
                    Status::AtUpper => {
                        if self.is_fixed(j) || !self.obj[j].is_negative() {
                            continue;
                        }
                        false
                    }
                };
                if bland {
                    entering = Some((j, direction));
                    break;
                }
                let score = self.obj[j].abs();
                if best_score.as_ref().is_none_or(|b| score > *b) {
                    best_score = Some(score);
                    entering = Some((j, direction));
                }
            }
            let Some((j, increasing)) = entering else {
                return Ok(());
            };

            // ratio test: how far can x_j move?
            // limit from j's own opposite bound
            let mut best: Option<(BigRational, Option<usize>)> = match &self.upper[j] {
                Some(u) => Some((u - &self.lower[j], None)),
                None => None,
            };
            for (i, &b) in self.basis.iter().enumerate() {
                let a = &self.rows[i][j];
                if a.is_zero() {
                    continue;
                }
                // value change of basic b per unit of x_j movement
                let shrink = if increasing {
                    a.is_positive()
                } else {
                    a.is_negative()
                };
                let limit = if shrink {
                    // basic decreases toward its lower bound
                    (&self.value[b] - &self.lower[b]) / a.abs()
                } else {
                    match &self.upper[b] {
                        Some(u) => (u - &self.value[b]) / a.abs(),
                        None => continue,
                    }
                };
                let replace = match &best {
                    None => true,
                    Some((t, leaving)) => {
                        limit < *t
                            || (limit == *t
                                && leaving.map_or(false, |li| self.basis[li] > b))
                    }
                };
                if replace {
                    best = Some((limit, Some(i)));
                }
            }

            let Some((step, leaving_row)) = best else {
                return Err(Error::internal(
                    "unbounded direction in a bounded LP (simplex invariant broken)",
                ));
            };

            // apply movement of x_j by step (signed)
            if step.is_zero() {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
                let signed = if increasing { step.clone() } else { -step.clone() };
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        let delta = &self.rows[i][j] * &signed;
                        self.value[b] -= delta;
                    }
                }
                self.value[j] += signed;
            }

            self.pivots += 1;
            match leaving_row {
                None => {
                    // bound flip
                    self.status[j] = if increasing {
                        Status::AtUpper
                    } else {
                        Status::AtLower
                    };
                }
                Some(i) => {
                    let leaving = self.basis[i];
                    self.status[leaving] = if increasing == self.rows[i][j].is_positive() {
                        Status::AtLower
                    } else {
                        Status::AtUpper
                    };
                    // snap exactly onto the bound to avoid drift
                    self.value[leaving] = if self.status[leaving] == Status::AtLower {
                        self.lower[leaving].clone()
                    } else {
                        self.upper[leaving].clone().unwrap()
                    };
                    self.status[j] = Status::Basic;
                    self.basis[i] = j;
                    self.pivot(i, j);
                }
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v /= &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn ratf(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn simple_equality() {
        // max x0 + 2 x1 s.t. x0 + x1 = 1, 0 <= x <= 1 -> (0, 1)
        let p = Problem {
            lower: vec![rat(0), rat(0)],
            upper: vec![rat(1), rat(1)],
            constraints: vec![Constraint {
                coeffs: vec![rat(1), rat(1)],
                sense: Sense::Eq,
                rhs: rat(1),
            }],
        };
        match maximize(&p, &[rat(1), rat(2)]).unwrap() {
            Outcome::Optimal { x, .. } => assert_eq!(x, vec![rat(0), rat(1)]),
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x0 + x1 = 3 with x <= 1
        let p = Problem {
            lower: vec![rat(0), rat(0)],
            upper: vec![rat(1), rat(1)],
            constraints: vec![Constraint {
                coeffs: vec![rat(1), rat(1)],
                sense: Sense::Eq,
                rhs: rat(3),
            }],
        };
        assert!(matches!(
            maximize(&p, &[rat(1), rat(1)]).unwrap(),
            Outcome::Infeasible { .. }
        ));
    }

    #[test]
    fn le_constraints_and_fractional_optimum() {
        // max x0 + x1 s.t. 2 x0 + x1 <= 2, x1 <= 1/2; optimum (3/4, 1/2)
        let p = Problem {
            lower: vec![rat(0), rat(0)],
            upper: vec![rat(1), rat(1)],
            constraints: vec![
                Constraint {
                    coeffs: vec![rat(2), rat(1)],
                    sense: Sense::Le,
                    rhs: rat(2),
                },
                Constraint {
                    coeffs: vec![rat(0), rat(1)],
                    sense: Sense::Le,
                    rhs: ratf(1, 2),
                },
            ],
        };
        match maximize(&p, &[rat(1), rat(1)]).unwrap() {
            Outcome::Optimal { x, .. } => assert_eq!(x, vec![ratf(3, 4), ratf(1, 2)]),
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn redundant_rows_tolerated() {
        let p = Problem {
            lower: vec![rat(0), rat(0)],
            upper: vec![rat(1), rat(1)],
            constraints: vec![
                Constraint {
                    coeffs: vec![rat(1), rat(1)],
                    sense: Sense::Eq,
                    rhs: rat(1),
                },
                Constraint {
                    coeffs: vec![rat(2), rat(2)],
                    sense: Sense::Eq,
                    rhs: rat(2),
                },
            ],
        };
        match maximize(&p, &[rat(3), rat(1)]).unwrap() {
            Outcome::Optimal { x, .. } => assert_eq!(x, vec![rat(1), rat(0)]),
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn zero_variable_problem() {
        let p = Problem {
            lower: vec![],
            upper: vec![],
            constraints: vec![],
        };
        match maximize(&p, &[]).unwrap() {
            Outcome::Optimal { x, .. } => assert!(x.is_empty()),
            _ => panic!("expected optimum"),
        }
    }
}
