//! Exact linear programming and exact p-th power comparisons.
//!
//! The solver is a dense two-phase tableau simplex using Bland's rule, so it
//! terminates on degenerate problems. No floating point is involved.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBounds<F> {
    pub lower: Option<F>,
    pub upper: Option<F>,
}

impl<F: Field> VarBounds<F> {
    pub fn nonneg() -> Self {
        Self {
            lower: Some(F::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Self {
            lower: None,
            upper: None,
        }
    }

    pub fn range(lower: F, upper: F) -> Self {
        Self {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem<F> {
    pub objective: Vec<F>,
    pub matrix: Vec<Vec<F>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<F>,
    pub bounds: Vec<VarBounds<F>>,
    pub direction: Direction,
}

impl<F: Field> LpProblem<F> {
    /// A problem with `n` non-negative variables and no constraints yet.
    pub fn new(direction: Direction, objective: Vec<F>) -> Self {
        let n = objective.len();
        Self {
            objective,
            matrix: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            bounds: (0..n).map(|_| VarBounds::nonneg()).collect(),
            direction,
        }
    }

    pub fn constrain(mut self, row: Vec<F>, sense: Sense, rhs: F) -> Self {
        self.matrix.push(row);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self
    }

    pub fn with_bounds(mut self, bounds: Vec<VarBounds<F>>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.matrix.len() != self.senses.len() || self.matrix.len() != self.rhs.len() {
            return Err(structural(format!(
                "{} constraint rows but {} senses and {} right-hand sides",
                self.matrix.len(),
                self.senses.len(),
                self.rhs.len()
            )));
        }
        if self.bounds.len() != n {
            return Err(structural(format!(
                "{} variable bounds for {} variables",
                self.bounds.len(),
                n
            )));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(structural(format!(
                "constraint row {i} has {} columns, expected {n}",
                row.len()
            )));
        }
        Ok(())
    }

    /// Checks an assignment against every constraint and bound exactly.
    pub fn is_feasible(&self, x: &[F]) -> bool {
        if x.len() != self.objective.len() {
            return false;
        }
        let rows_ok = self
            .matrix
            .iter()
            .zip(&self.senses)
            .zip(&self.rhs)
            .all(|((row, sense), b)| {
                let lhs = dot(row, x);
                match sense {
                    Sense::Le => lhs <= *b,
                    Sense::Eq => lhs == *b,
                    Sense::Ge => lhs >= *b,
                }
            });
        let bounds_ok = self.bounds.iter().zip(x).all(|(bd, v)| {
            bd.lower.as_ref().map_or(true, |l| v >= l) && bd.upper.as_ref().map_or(true, |u| v <= u)
        });
        rows_ok && bounds_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult<F> {
    Optimal { optimum: F, assignment: Vec<F> },
    Infeasible,
    Unbounded,
}

impl<F> LpResult<F> {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpResult::Optimal { .. })
    }

    pub fn optimum(&self) -> Option<&F> {
        match self {
            LpResult::Optimal { optimum, .. } => Some(optimum),
            _ => None,
        }
    }

    pub fn assignment(&self) -> Option<&[F]> {
        match self {
            LpResult::Optimal { assignment, .. } => Some(assignment),
            _ => None,
        }
    }
}

pub(crate) fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// How an original variable is recovered from the non-negative standard-form columns.
enum VarMap<F> {
    Shifted { col: usize, offset: F },
    Mirrored { col: usize, offset: F },
    Split { pos: usize, neg: usize },
}

pub fn solve_lp<F: Field>(problem: &LpProblem<F>) -> Result<LpResult<F>> {
    problem.validate()?;
    let n = problem.objective.len();

    // Map every variable onto non-negative columns.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut extra_rows: Vec<(usize, F)> = Vec::new();
    for bd in &problem.bounds {
        match (&bd.lower, &bd.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    if u < l {
                        return Ok(LpResult::Infeasible);
                    }
                    extra_rows.push((ncols, u.clone() - l.clone()));
                }
                maps.push(VarMap::Shifted {
                    col: ncols,
                    offset: l.clone(),
                });
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Mirrored {
                    col: ncols,
                    offset: u.clone(),
                });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }

    // Rows in terms of the new columns, before slacks.
    let mut rows: Vec<(Vec<F>, Sense, F)> = Vec::new();
    for ((row, sense), b) in problem.matrix.iter().zip(&problem.senses).zip(&problem.rhs) {
        let mut r = vec![F::zero(); ncols];
        let mut rhs = b.clone();
        for (a, m) in row.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            match m {
                VarMap::Shifted { col, offset } => {
                    r[*col] = r[*col].clone() + a.clone();
                    rhs = rhs - a.clone() * offset.clone();
                }
                VarMap::Mirrored { col, offset } => {
                    r[*col] = r[*col].clone() - a.clone();
                    rhs = rhs - a.clone() * offset.clone();
                }
                VarMap::Split { pos, neg } => {
                    r[*pos] = r[*pos].clone() + a.clone();
                    r[*neg] = r[*neg].clone() - a.clone();
                }
            }
        }
        rows.push((r, *sense, rhs));
    }
    for (col, cap) in extra_rows {
        let mut r = vec![F::zero(); ncols];
        r[col] = F::one();
        rows.push((r, Sense::Le, cap));
    }

    let nslack = rows.iter().filter(|(_, s, _)| *s != Sense::Eq).count();
    let total = ncols + nslack;
    let mut a = Vec::with_capacity(rows.len());
    let mut b = Vec::with_capacity(rows.len());
    let mut slack = ncols;
    for (mut r, sense, rhs) in rows {
        r.resize(total, F::zero());
        match sense {
            Sense::Le => {
                r[slack] = F::one();
                slack += 1;
            }
            Sense::Ge => {
                r[slack] = -F::one();
                slack += 1;
            }
            Sense::Eq => {}
        }
        a.push(r);
        b.push(rhs);
    }

    // Standard form minimizes.
    let mut cost = vec![F::zero(); total];
    for (c, m) in problem.objective.iter().zip(&maps) {
        let c = match problem.direction {
            Direction::Maximize => -c.clone(),
            Direction::Minimize => c.clone(),
        };
        match m {
            VarMap::Shifted { col, .. } => cost[*col] = cost[*col].clone() + c,
            VarMap::Mirrored { col, .. } => cost[*col] = cost[*col].clone() - c,
            VarMap::Split { pos, neg } => {
                cost[*pos] = cost[*pos].clone() + c.clone();
                cost[*neg] = cost[*neg].clone() - c;
            }
        }
    }

    let outcome = standard_simplex(a, b, Some(&cost));
    let y = match outcome {
        StdOutcome::Infeasible => return Ok(LpResult::Infeasible),
        StdOutcome::Unbounded => return Ok(LpResult::Unbounded),
        StdOutcome::Optimal(y) => y,
    };
    let assignment: Vec<F> = maps
        .iter()
        .map(|m| match m {
            VarMap::Shifted { col, offset } => offset.clone() + y[*col].clone(),
            VarMap::Mirrored { col, offset } => offset.clone() - y[*col].clone(),
            VarMap::Split { pos, neg } => y[*pos].clone() - y[*neg].clone(),
        })
        .collect();
    let optimum = dot(&problem.objective, &assignment);
    debug_assert!(problem.is_feasible(&assignment));
    Ok(LpResult::Optimal {
        optimum,
        assignment,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum StdOutcome<F> {
    Optimal(Vec<F>),
    Infeasible,
    Unbounded,
}

/// Minimizes `cost·x` subject to `A x = b`, `x >= 0`. With `cost = None` only
/// feasibility is decided and any feasible point is returned.
pub(crate) fn standard_simplex<F: Field>(
    mut a: Vec<Vec<F>>,
    mut b: Vec<F>,
    cost: Option<&[F]>,
) -> StdOutcome<F> {
    let n = cost.map_or_else(|| a.first().map_or(0, |r| r.len()), |c| c.len());
    // Scaling column j by s_j > 0 maps solutions x to x_j / s_j and keeps the
    // objective when c_j is scaled alike; row scaling changes nothing. Integer
    // data keeps the pivots' rationals small.
    let mut col_scale = Vec::with_capacity(n);
    for j in 0..n {
        let mut column: Vec<F> = a.iter().map(|r| r[j].clone()).collect();
        if let Some(c) = cost {
            column.push(c[j].clone());
        }
        let s = F::primitive_scale(&column);
        if !s.is_one() {
            for r in a.iter_mut() {
                if !r[j].is_zero() {
                    r[j] = r[j].clone() * s.clone();
                }
            }
        }
        col_scale.push(s);
    }
    let scaled_cost: Option<Vec<F>> =
        cost.map(|c| c.iter().zip(&col_scale).map(|(v, s)| v.clone() * s.clone()).collect());
    for (row, rhs) in a.iter_mut().zip(b.iter_mut()) {
        let mut all = row.clone();
        all.push(rhs.clone());
        let mut s = F::primitive_scale(&all);
        if rhs.is_negative() {
            s = -s;
        }
        if !s.is_one() {
            for v in row.iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() * s.clone();
                }
            }
            *rhs = rhs.clone() * s;
        }
    }
    let mut t = Tableau::with_artificial_basis(a, b, n);
    if !t.phase_one() {
        return StdOutcome::Infeasible;
    }
    if let Some(c) = &scaled_cost {
        if !t.phase_two(c) {
            return StdOutcome::Unbounded;
        }
    }
    let x = t
        .solution()
        .into_iter()
        .zip(col_scale)
        .map(|(v, s)| if v.is_zero() { v } else { v * s })
        .collect();
    StdOutcome::Optimal(x)
}

/// Dense simplex tableau. Columns `0..n` are structural; a basis entry `>= n`
/// denotes the artificial variable of that row, whose column is not stored.
struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
    n: usize,
    reduced: Vec<F>,
    value: F,
}

impl<F: Field> Tableau<F> {
    fn with_artificial_basis(rows: Vec<Vec<F>>, rhs: Vec<F>, n: usize) -> Self {
        let m = rows.len();
        // Phase one minimizes the sum of artificials: reduced cost of column j
        // is -(sum of column j), objective value is sum of rhs.
        let mut reduced = vec![F::zero(); n];
        for row in &rows {
            for (r, v) in reduced.iter_mut().zip(row) {
                if !v.is_zero() {
                    *r = r.clone() - v.clone();
                }
            }
        }
        let value = rhs.iter().fold(F::zero(), |acc, v| acc + v.clone());
        Self {
            rows,
            rhs,
            basis: (0..m).map(|i| n + i).collect(),
            n,
            reduced,
            value,
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.rows[r][q].clone();
        if !piv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() / piv.clone();
                }
            }
            self.rhs[r] = self.rhs[r].clone() / piv;
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..self.n).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * prow[j].clone();
            }
            self.rhs[i] = self.rhs[i].clone() - f * prhs.clone();
        }
        let f = self.reduced[q].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.reduced[j] = self.reduced[j].clone() - f.clone() * prow[j].clone();
            }
            self.value = self.value.clone() + f * prhs;
        }
        self.rows[r] = prow;
        self.basis[r] = q;
    }

    /// Bland's rule iterations on the current reduced costs. Returns false on
    /// unboundedness.
    fn iterate(&mut self) -> bool {
        loop {
            let entering = (0..self.n).find(|&j| self.reduced[j].is_negative());
            let Some(q) = entering else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => match ratio.cmp(&br) {
                        Ordering::Less => Some((i, ratio)),
                        Ordering::Equal if self.basis[i] < self.basis[bi] => Some((i, ratio)),
                        _ => Some((bi, br)),
                    },
                };
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, q),
            }
        }
    }

    fn phase_one(&mut self) -> bool {
        let bounded = self.iterate();
        debug_assert!(bounded, "phase one objective is bounded below by zero");
        if !self.value.is_zero() {
            return false;
        }
        // Drive remaining (zero-level) artificials out of the basis, dropping
        // rows that turn out to be redundant.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.n {
                if let Some(q) = (0..self.n).find(|&j| !self.rows[i][j].is_zero()) {
                    self.pivot(i, q);
                    i += 1;
                } else {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
        true
    }

    fn phase_two(&mut self, cost: &[F]) -> bool {
        let mut reduced = cost.to_vec();
        let mut value = F::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (r, v) in reduced.iter_mut().zip(&self.rows[i]) {
                if !v.is_zero() {
                    *r = r.clone() - cb.clone() * v.clone();
                }
            }
            value = value + cb.clone() * self.rhs[i].clone();
        }
        self.reduced = reduced;
        self.value = value;
        self.iterate()
    }

    fn solution(&self) -> Vec<F> {
        let mut x = vec![F::zero(); self.n];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < self.n {
                x[bv] = self.rhs[i].clone();
            }
        }
        x
    }
}

/// Orders `a^(1/p)` against `b` by comparing `a` with `b^p`; no root is ever formed.
pub fn compare_pth_power<F: Field>(a: &F, b: &F, p: u32) -> Result<Ordering> {
    if p == 0 {
        return Err(Error::Domain("exponent p must be positive".into()));
    }
    if a.is_negative() || b.is_negative() {
        return Err(Error::Domain(format!(
            "p-th power comparison needs non-negative inputs, got {a} and {b}"
        )));
    }
    Ok(a.cmp(&b.powu(p)))
}

/// A non-negative real known exactly through its p-th power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PthRoot<F: Field> {
    #[serde(with = "crate::scalar::serde_exact")]
    pub pth_power: F,
    pub p: u32,
}

impl<F: Field> PthRoot<F> {
    pub fn new(pth_power: F, p: u32) -> Result<Self> {
        if p == 0 || pth_power.is_negative() {
            return Err(Error::Domain(format!(
                "invalid p-th root handle ({pth_power}, p={p})"
            )));
        }
        Ok(Self { pth_power, p })
    }

    pub fn of_scalar(x: F, p: u32) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::Domain(format!("negative norm value {x}")));
        }
        Self::new(x.powu(p), p)
    }

    pub fn cmp_scalar(&self, b: &F) -> Result<Ordering> {
        compare_pth_power(&self.pth_power, b, self.p)
    }

    pub fn cmp_root(&self, other: &Self) -> Result<Ordering> {
        if self.p != other.p {
            return Err(Error::Unsupported(format!(
                "comparing roots of different orders {} and {}",
                self.p, other.p
            )));
        }
        Ok(self.pth_power.cmp(&other.pth_power))
    }

    /// The exact value when p = 1.
    pub fn exact(&self) -> Option<F> {
        match self.p {
            1 => Some(self.pth_power.clone()),
            2 => self.pth_power.sqrt_exact(),
            _ => None,
        }
    }

    pub fn approx(&self) -> f64 {
        self.pth_power.approx().powf(1.0 / self.p as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;
    use crate::Scalar;
    use num_traits::{One, Zero};

    fn s(n: i64, d: i64) -> Scalar {
        big(n, d)
    }

    #[test]
    fn one_variable_box() {
        let lp = LpProblem::new(Direction::Maximize, vec![s(1, 1)]).constrain(
            vec![s(1, 1)],
            Sense::Le,
            s(3, 1),
        );
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.optimum(), Some(&s(3, 1)));
    }

    #[test]
    fn contradictory_bounds() {
        let lp = LpProblem::new(Direction::Maximize, vec![s(1, 1)])
            .constrain(vec![s(1, 1)], Sense::Ge, s(1, 1))
            .constrain(vec![s(1, 1)], Sense::Le, s(0, 1));
        assert_eq!(solve_lp(&lp).unwrap(), LpResult::Infeasible);
        let lp = LpProblem::new(Direction::Maximize, vec![s(1, 1)])
            .with_bounds(vec![VarBounds::range(s(1, 1), s(0, 1))]);
        assert_eq!(solve_lp(&lp).unwrap(), LpResult::Infeasible);
    }

    #[test]
    fn fractional_optimum_matches_vertex_enumeration() {
        // Feasible region x+y <= 7/3, x,y >= 0 has vertices (0,0), (7/3,0), (0,7/3).
        let oracle = [(s(0, 1), s(0, 1)), (s(7, 3), s(0, 1)), (s(0, 1), s(7, 3))]
            .iter()
            .map(|(x, y)| x + y)
            .max()
            .unwrap();
        let lp = LpProblem::new(Direction::Maximize, vec![s(1, 1), s(1, 1)]).constrain(
            vec![s(1, 1), s(1, 1)],
            Sense::Le,
            s(7, 3),
        );
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.optimum(), Some(&oracle));
        assert_eq!(oracle, s(7, 3));
        assert!(lp.is_feasible(r.assignment().unwrap()));
    }

    #[test]
    fn unbounded_and_free_variables() {
        let lp = LpProblem::new(Direction::Maximize, vec![s(1, 1)]);
        assert_eq!(solve_lp(&lp).unwrap(), LpResult::Unbounded);
        // minimize |x - 5/2| style: free x, x >= -4 via row, maximize -x.
        let lp = LpProblem::new(Direction::Maximize, vec![s(-1, 1)])
            .with_bounds(vec![VarBounds::free()])
            .constrain(vec![s(1, 1)], Sense::Ge, s(-4, 1));
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.assignment().unwrap(), &[s(-4, 1)]);
        // upper-bounded only
        let lp = LpProblem::new(Direction::Maximize, vec![s(1, 1)]).with_bounds(vec![VarBounds {
            lower: None,
            upper: Some(s(-3, 2)),
        }]);
        assert_eq!(solve_lp(&lp).unwrap().optimum(), Some(&s(-3, 2)));
    }

    #[test]
    fn malformed_dimensions() {
        let lp = LpProblem::new(Direction::Minimize, vec![s(1, 1), s(1, 1)]).constrain(
            vec![s(1, 1)],
            Sense::Le,
            s(1, 1),
        );
        assert!(matches!(solve_lp(&lp), Err(Error::Structural(_))));
        let mut lp = LpProblem::new(Direction::Minimize, vec![s(1, 1)]);
        lp.senses.push(Sense::Le);
        assert!(matches!(solve_lp(&lp), Err(Error::Structural(_))));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance (cycles under the largest-coefficient rule).
        let lp = LpProblem::new(
            Direction::Minimize,
            vec![s(-3, 4), s(150, 1), s(-1, 50), s(6, 1)],
        )
        .constrain(vec![s(1, 4), s(-60, 1), s(-1, 25), s(9, 1)], Sense::Le, Scalar::zero())
        .constrain(vec![s(1, 2), s(-90, 1), s(-1, 50), s(3, 1)], Sense::Le, Scalar::zero())
        .constrain(vec![s(0, 1), s(0, 1), s(1, 1), s(0, 1)], Sense::Le, Scalar::one());
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.optimum(), Some(&s(-1, 20)));
    }

    #[test]
    fn redundant_equalities() {
        let lp = LpProblem::new(Direction::Maximize, vec![s(1, 1), s(2, 1)])
            .constrain(vec![s(1, 1), s(1, 1)], Sense::Eq, s(1, 1))
            .constrain(vec![s(2, 1), s(2, 1)], Sense::Eq, s(2, 1));
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.optimum(), Some(&s(2, 1)));
    }

    #[test]
    fn pth_power_examples() {
        assert_eq!(
            compare_pth_power(&s(1, 4), &s(1, 2), 2).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            compare_pth_power(&s(99, 100), &s(1, 1), 3).unwrap(),
            Ordering::Less
        );
        // (5/4)^3 = 125/64 < 2
        assert_eq!(s(5, 4).powu(3), s(125, 64));
        assert_eq!(
            compare_pth_power(&s(2, 1), &s(5, 4), 3).unwrap(),
            Ordering::Greater
        );
        assert!(matches!(
            compare_pth_power(&s(-1, 1), &s(1, 1), 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn root_handles() {
        let h = PthRoot::new(s(2, 1), 2).unwrap();
        assert_eq!(h.cmp_scalar(&s(1, 1)).unwrap(), Ordering::Greater);
        assert_eq!(h.cmp_scalar(&s(3, 2)).unwrap(), Ordering::Less);
        assert_eq!(h.exact(), None);
        assert_eq!(PthRoot::new(s(9, 4), 2).unwrap().exact(), Some(s(3, 2)));
        assert!(h.cmp_root(&PthRoot::new(s(2, 1), 3).unwrap()).is_err());
    }
}
