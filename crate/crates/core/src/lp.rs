//! Exact rational linear programming.
//!
//! Two-phase dense simplex with Bland's rule over `BigRational`. Every solve
//! carries certificates and checks them before returning: feasibility of the
//! optimal point together with an exactly matching dual vector, an improving
//! ray for unbounded problems, a Farkas vector for infeasible ones. Pivoting
//! is deterministic, so repeated runs produce identical outcomes.

use crate::polyhedra::{Constraint, GeomError, HRep, Polyhedron};
use crate::rational::{dot, is_zero_vec, neg, zeros, QVec, Rat};
use num::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: QVec,
    pub constraints: HRep,
    pub sense: Sense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

/// Row multipliers are indexed like the constraint system: inequalities
/// first, then equalities.
#[derive(Clone, Debug)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Option<Rat>,
    pub point: Option<QVec>,
    /// improving ray (unbounded) or Farkas row multipliers (infeasible)
    pub certificate: Option<QVec>,
    /// optimal row multipliers (optimal status only)
    pub dual: Option<QVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportValue {
    Finite(Rat),
    Infinite,
}

struct Tableau {
    /// rows of [vars | artificials | rhs]
    t: Vec<QVec>,
    basis: Vec<usize>,
    /// original row index per tableau row (rows may get dropped)
    row_ids: Vec<usize>,
    n_vars: usize,
    n_rows_orig: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        let cols = self.n_vars + self.n_rows_orig;
        &self.t[i][cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for x in self.t[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..self.t.len() {
            if i != row && !self.t[i][col].is_zero() {
                let f = self.t[i][col].clone();
                for j in 0..self.t[i].len() {
                    let d = &self.t[row][j] * &f;
                    self.t[i][j] -= d;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Minimize `cost` (indexed over vars + artificials) with Bland's rule.
    /// Entering columns are restricted to the first `n_vars` columns.
    /// Returns the entering column when unbounded.
    fn run(&mut self, cost: &[Rat]) -> Result<(), usize> {
        loop {
            let y: Vec<Rat> = (0..self.t.len())
                .map(|i| cost[self.basis[i]].clone())
                .collect();
            let mut entering = None;
            for j in 0..self.n_vars {
                let mut r = cost[j].clone();
                for i in 0..self.t.len() {
                    r -= &y[i] * &self.t[i][j];
                }
                if r.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.t.len() {
                if self.t[i][j].is_positive() {
                    let ratio = self.rhs(i) / &self.t[i][j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return Err(j),
            }
        }
    }
}

/// Solve exactly with verified certificates.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let d = lp.constraints.dim;
    debug_assert_eq!(lp.objective.len(), d);
    let c_min = match lp.sense {
        Sense::Minimize => lp.objective.clone(),
        Sense::Maximize => neg(&lp.objective),
    };

    // rows: inequalities then equalities
    let ineqs = &lp.constraints.inequalities;
    let eqs = &lp.constraints.equalities;
    let m = ineqs.len() + eqs.len();
    let n_slack = ineqs.len();
    let n_vars = 2 * d + n_slack;
    let cols = n_vars + m + 1;

    let mut t: Vec<QVec> = Vec::with_capacity(m);
    let mut sigma: Vec<Rat> = Vec::with_capacity(m);
    let all_rows: Vec<&Constraint> = ineqs.iter().chain(eqs.iter()).collect();
    for (k, con) in all_rows.iter().enumerate() {
        let s = if con.offset.is_negative() {
            -Rat::one()
        } else {
            Rat::one()
        };
        let mut row = zeros(cols);
        for (j, a) in con.normal.iter().enumerate() {
            row[j] = &s * a;
            row[d + j] = -(&s * a);
        }
        if k < n_slack {
            row[2 * d + k] = -s.clone();
        }
        row[n_vars + k] = Rat::one();
        row[cols - 1] = &s * &con.offset;
        t.push(row);
        sigma.push(s);
    }

    let mut tab = Tableau {
        t,
        basis: (0..m).map(|k| n_vars + k).collect(),
        row_ids: (0..m).collect(),
        n_vars,
        n_rows_orig: m,
    };

    // phase 1: minimize the artificial total
    let mut cost1 = zeros(n_vars + m);
    for x in cost1.iter_mut().skip(n_vars) {
        *x = Rat::one();
    }
    tab.run(&cost1).expect("phase 1 objective is bounded below");
    let z1: Rat = (0..tab.t.len())
        .filter(|&i| tab.basis[i] >= n_vars)
        .map(|i| tab.rhs(i).clone())
        .sum();
    if z1.is_positive() {
        // Farkas: y_k = sum over artificial-basic rows of T[i][n_vars + k]
        let mut y = zeros(m);
        for (k, yk) in y.iter_mut().enumerate() {
            for i in 0..tab.t.len() {
                if tab.basis[i] >= n_vars {
                    *yk += &tab.t[i][n_vars + k];
                }
            }
            *yk *= &sigma[k];
        }
        verify_farkas(&all_rows, n_slack, &y, d);
        return LpOutcome {
            status: LpStatus::Infeasible,
            value: None,
            point: None,
            certificate: Some(y),
            dual: None,
        };
    }

    // drive remaining artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n_vars {
            match (0..n_vars).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    tab.row_ids.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2
    let mut cost2 = zeros(n_vars + m);
    for j in 0..d {
        cost2[j] = c_min[j].clone();
        cost2[d + j] = -c_min[j].clone();
    }
    let extract_point = |tab: &Tableau| -> QVec {
        let mut x = zeros(d);
        for i in 0..tab.t.len() {
            let b = tab.basis[i];
            if b < d {
                x[b] += tab.rhs(i);
            } else if b < 2 * d {
                x[b - d] -= tab.rhs(i);
            }
        }
        x
    };

    match tab.run(&cost2) {
        Err(j_enter) => {
            let mut dir = zeros(n_vars);
            dir[j_enter] = Rat::one();
            for i in 0..tab.t.len() {
                if tab.basis[i] < n_vars {
                    dir[tab.basis[i]] = -tab.t[i][j_enter].clone();
                }
            }
            let mut ray = zeros(d);
            for j in 0..d {
                ray[j] = &dir[j] - &dir[d + j];
            }
            let point = extract_point(&tab);
            verify_ray(lp, &c_min, &point, &ray);
            LpOutcome {
                status: LpStatus::Unbounded,
                value: None,
                point: Some(point),
                certificate: Some(ray),
                dual: None,
            }
        }
        Ok(()) => {
            let x = extract_point(&tab);
            let value_min = dot(&c_min, &x);
            let mut y = zeros(m);
            for i in 0..tab.t.len() {
                let cb = &cost2[tab.basis[i]];
                if cb.is_zero() {
                    continue;
                }
                for (k, yk) in y.iter_mut().enumerate() {
                    *yk += cb * &tab.t[i][n_vars + k];
                }
            }
            for (k, yk) in y.iter_mut().enumerate() {
                *yk *= &sigma[k];
            }
            verify_optimal(lp, &all_rows, n_slack, &c_min, &x, &y, &value_min);
            let value = match lp.sense {
                Sense::Minimize => value_min,
                Sense::Maximize => -value_min,
            };
            LpOutcome {
                status: LpStatus::Optimal,
                value: Some(value),
                point: Some(x),
                certificate: None,
                dual: Some(y),
            }
        }
    }
}

fn verify_farkas(rows: &[&Constraint], n_slack: usize, y: &[Rat], d: usize) {
    let mut combo = zeros(d);
    let mut rhs = Rat::zero();
    for (k, con) in rows.iter().enumerate() {
        if k < n_slack {
            assert!(
                !y[k].is_negative(),
                "farkas multiplier of an inequality must be nonnegative"
            );
        }
        for (cj, aj) in combo.iter_mut().zip(&con.normal) {
            *cj += &y[k] * aj;
        }
        rhs += &y[k] * &con.offset;
    }
    assert!(
        is_zero_vec(&combo) && rhs.is_positive(),
        "invalid Farkas certificate"
    );
}

fn verify_ray(lp: &LinearProgram, c_min: &[Rat], point: &[Rat], ray: &[Rat]) {
    assert!(
        lp.constraints.satisfied_by(point),
        "unbounded base point infeasible"
    );
    for con in &lp.constraints.inequalities {
        assert!(
            !dot(&con.normal, ray).is_negative(),
            "ray leaves the feasible cone"
        );
    }
    for con in &lp.constraints.equalities {
        assert!(dot(&con.normal, ray).is_zero(), "ray violates an equality");
    }
    assert!(dot(c_min, ray).is_negative(), "ray does not improve");
}

fn verify_optimal(
    lp: &LinearProgram,
    rows: &[&Constraint],
    n_slack: usize,
    c_min: &[Rat],
    x: &[Rat],
    y: &[Rat],
    value_min: &Rat,
) {
    assert!(lp.constraints.satisfied_by(x), "optimal point infeasible");
    let d = x.len();
    let mut combo = zeros(d);
    let mut ybx = Rat::zero();
    for (k, con) in rows.iter().enumerate() {
        if k < n_slack {
            assert!(!y[k].is_negative(), "dual multiplier sign");
        }
        for (cj, aj) in combo.iter_mut().zip(&con.normal) {
            *cj += &y[k] * aj;
        }
        ybx += &y[k] * &con.offset;
    }
    assert_eq!(combo, c_min.to_vec(), "dual feasibility fails");
    assert_eq!(&ybx, value_min, "strong duality gap");
}

/// A point satisfying all constraints, if one exists.
pub fn feasible_point(constraints: &HRep) -> Option<QVec> {
    let lp = LinearProgram {
        objective: zeros(constraints.dim),
        constraints: constraints.clone(),
        sense: Sense::Minimize,
    };
    let out = solve(&lp);
    match out.status {
        LpStatus::Infeasible => None,
        _ => out.point,
    }
}

/// A point satisfying the listed inequalities strictly and everything else
/// weakly, found by maximizing a common slack variable capped at 1.
pub fn strict_feasible(constraints: &HRep, strict: &[usize]) -> Option<QVec> {
    let d = constraints.dim;
    for &i in strict {
        assert!(
            i < constraints.inequalities.len(),
            "strict index out of range"
        );
    }
    let strict_set: Vec<bool> = {
        let mut s = vec![false; constraints.inequalities.len()];
        for &i in strict {
            s[i] = true;
        }
        s
    };
    let mut h = HRep::new(d + 1);
    for (i, con) in constraints.inequalities.iter().enumerate() {
        let mut n = con.normal.clone();
        n.push(if strict_set[i] {
            -Rat::one()
        } else {
            Rat::zero()
        });
        h.inequalities.push(Constraint::new(n, con.offset.clone()));
    }
    for con in &constraints.equalities {
        let mut n = con.normal.clone();
        n.push(Rat::zero());
        h.equalities.push(Constraint::new(n, con.offset.clone()));
    }
    // cap: eps <= 1
    let mut cap = zeros(d + 1);
    cap[d] = -Rat::one();
    h.inequalities.push(Constraint::new(cap, -Rat::one()));

    let mut obj = zeros(d + 1);
    obj[d] = Rat::one();
    let out = solve(&LinearProgram {
        objective: obj,
        constraints: h,
        sense: Sense::Maximize,
    });
    match out.status {
        LpStatus::Optimal if out.value.as_ref().is_some_and(|v| v.is_positive()) => {
            out.point.map(|p| p[..d].to_vec())
        }
        _ => None,
    }
}

/// sup of direction . x over the polyhedron; `Infinite` when a ray or
/// lineality direction has positive inner product.
pub fn support_value(p: &Polyhedron, direction: &[Rat]) -> Result<SupportValue, GeomError> {
    if p.is_empty() {
        return Err(GeomError::EmptySet);
    }
    if direction.len() != p.dim() {
        return Err(GeomError::DimensionMismatch(direction.len(), p.dim()));
    }
    let out = solve(&LinearProgram {
        objective: direction.to_vec(),
        constraints: p.hrep().clone(),
        sense: Sense::Maximize,
    });
    match out.status {
        LpStatus::Optimal => Ok(SupportValue::Finite(out.value.unwrap())),
        LpStatus::Unbounded => Ok(SupportValue::Infinite),
        LpStatus::Infeasible => unreachable!("nonempty polyhedron"),
    }
}
