//! Exact linear programming over bounded variables.
//!
//! A dense-tableau primal simplex in exact rational arithmetic. Variables may
//! carry finite or infinite bounds on either side and nonbasic variables sit
//! at one of their bounds (or at zero when free). Entering and leaving
//! variables are chosen by Bland's smallest-index rule, so the method always
//! terminates and repeated solves of the same program walk the same path.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::num::Num;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Sparse linear form `sum coef * var`. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearExpr {
    terms: BTreeMap<VarId, Rational>,
}

impl LinearExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(var: VarId, coef: Rational) -> Self {
        let mut expr = Self::new();
        expr.add(var, coef);
        expr
    }

    pub fn add(&mut self, var: VarId, coef: Rational) -> &mut Self {
        if coef.is_zero() {
            return self;
        }
        let entry = self.terms.entry(var).or_insert_with(Rational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&var);
        }
        self
    }

    pub fn with(mut self, var: VarId, coef: Rational) -> Self {
        self.add(var, coef);
        self
    }

    pub fn add_expr(&mut self, other: &LinearExpr, scale: &Rational) -> &mut Self {
        for (var, coef) in &other.terms {
            self.add(*var, coef * scale);
        }
        self
    }

    pub fn negated(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(v, c)| (*v, -c)).collect(),
        }
    }

    pub fn coef(&self, var: VarId) -> Rational {
        self.terms.get(&var).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Rational)> {
        self.terms.iter().map(|(v, c)| (*v, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| acc + c * &values[v.0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub expr: LinearExpr,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A maximisation problem over bounded variables. `None` bounds are infinite.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearProgram {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: LinearExpr,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> VarId {
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        VarId(self.variables.len() - 1)
    }

    pub fn add_constraint(&mut self, expr: LinearExpr, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            expr,
            relation,
            rhs,
        });
    }

    pub fn set_objective(&mut self, objective: LinearExpr) {
        self.objective = objective;
    }

    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn set_bounds(&mut self, var: VarId, lower: Option<Rational>, upper: Option<Rational>) {
        let v = &mut self.variables[var.0];
        v.lower = lower;
        v.upper = upper;
    }

    /// Checks bounds and constraints exactly at `values`.
    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        values.len() == self.variables.len()
            && self.variables.iter().zip(values).all(|(v, x)| {
                v.lower.as_ref().map_or(true, |lo| x >= lo)
                    && v.upper.as_ref().map_or(true, |hi| x <= hi)
            })
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(&c.expr.evaluate(values), &c.rhs))
    }

    fn validate(&self) -> Result<(), LpError> {
        for (i, v) in self.variables.iter().enumerate() {
            if let (Some(lo), Some(hi)) = (&v.lower, &v.upper) {
                if lo > hi {
                    return Err(LpError::InvertedBounds {
                        var: VarId(i),
                        name: v.name.clone(),
                    });
                }
            }
        }
        let n = self.variables.len();
        let exprs = self
            .constraints
            .iter()
            .enumerate()
            .map(|(i, c)| (Some(i), &c.expr))
            .chain(std::iter::once((None, &self.objective)));
        for (constraint, expr) in exprs {
            if let Some((var, _)) = expr.iter().find(|(v, _)| v.0 >= n) {
                return Err(LpError::UnknownVariable { constraint, var });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("variable {var} ({name}) has lower bound above upper bound")]
    InvertedBounds { var: VarId, name: String },
    #[error("{} references undeclared variable {var}", match .constraint { Some(i) => format!("constraint {i}"), None => "objective".to_string() })]
    UnknownVariable {
        constraint: Option<usize>,
        var: VarId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// One value per declared variable; meaningful only when optimal.
    pub values: Vec<Rational>,
    pub objective: Rational,
    pub pivots: usize,
}

impl LpOutcome {
    fn without_solution(status: LpStatus, pivots: usize) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective: Rational::zero(),
            pivots,
        }
    }

    pub fn value(&self, var: VarId) -> &Rational {
        &self.values[var.0]
    }
}

/// Solves `lp` to exact optimality.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    Ok(Solver::build(lp).run())
}

/// Lexicographic optimisation: maximise `objectives[0]`, then, among its
/// optimal points, `objectives[1]`, and so on. The returned objective is the
/// value of the first stage.
pub fn solve_lexicographic(
    lp: &LinearProgram,
    objectives: &[LinearExpr],
) -> Result<LpOutcome, LpError> {
    let mut work = lp.clone();
    let mut first = None;
    let mut last = None;
    let mut pivots = 0;
    for objective in objectives {
        work.set_objective(objective.clone());
        let outcome = solve_lp(&work)?;
        pivots += outcome.pivots;
        if outcome.status != LpStatus::Optimal {
            return Ok(LpOutcome::without_solution(outcome.status, pivots));
        }
        first.get_or_insert_with(|| outcome.objective.clone());
        work.add_constraint(objective.clone(), Relation::Eq, outcome.objective.clone());
        last = Some(outcome);
    }
    match last {
        Some(mut outcome) => {
            outcome.objective = first.unwrap_or_else(Rational::zero);
            outcome.pivots = pivots;
            Ok(outcome)
        }
        None => solve_lp(lp),
    }
}

/// Internal column layout: surviving structural variables, then one slack per
/// kept row, then artificials.
struct Solver {
    /// structural column -> original variable index
    structural: Vec<usize>,
    fixed_values: Vec<Option<Num>>,
    original_count: usize,
    rows: Vec<Vec<Num>>,
    basis: Vec<usize>,
    row_of: Vec<Option<usize>>,
    x: Vec<Num>,
    lower: Vec<Option<Num>>,
    upper: Vec<Option<Num>>,
    cost: Vec<Num>,
    objective_constant: Num,
    artificial_start: usize,
    infeasible_presolve: bool,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

impl Solver {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.variables.len();
        // presolve: fix variables with equal bounds
        let fixed_values: Vec<Option<Num>> = lp
            .variables
            .iter()
            .map(|v| match (&v.lower, &v.upper) {
                (Some(lo), Some(hi)) if lo == hi => Some(Num::from_rational(lo)),
                _ => None,
            })
            .collect();
        let structural: Vec<usize> = (0..n).filter(|&i| fixed_values[i].is_none()).collect();
        let mut column_of = vec![usize::MAX; n];
        for (col, &orig) in structural.iter().enumerate() {
            column_of[orig] = col;
        }

        let mut infeasible_presolve = false;
        let mut kept: Vec<(Vec<(usize, Num)>, Relation, Num)> = Vec::new();
        for c in &lp.constraints {
            let mut rhs = Num::from_rational(&c.rhs);
            let mut entries = Vec::with_capacity(c.expr.len());
            for (var, coef) in c.expr.iter() {
                let coef = Num::from_rational(coef);
                match &fixed_values[var.0] {
                    Some(val) => rhs -= &coef * val,
                    None => entries.push((column_of[var.0], coef)),
                }
            }
            if entries.is_empty() {
                let holds = match c.relation {
                    Relation::Le => Num::zero() <= rhs,
                    Relation::Eq => rhs.is_zero(),
                    Relation::Ge => Num::zero() >= rhs,
                };
                if !holds {
                    infeasible_presolve = true;
                }
                continue;
            }
            kept.push((entries, c.relation, rhs));
        }

        let s = structural.len();
        let m = kept.len();
        let mut lower: Vec<Option<Num>> = structural
            .iter()
            .map(|&i| lp.variables[i].lower.as_ref().map(Num::from_rational))
            .collect();
        let mut upper: Vec<Option<Num>> = structural
            .iter()
            .map(|&i| lp.variables[i].upper.as_ref().map(Num::from_rational))
            .collect();
        let mut x: Vec<Num> = lower
            .iter()
            .zip(&upper)
            .map(|(lo, hi)| lo.clone().or_else(|| hi.clone()).unwrap_or_else(Num::zero))
            .collect();
        for (_, relation, _) in &kept {
            let (lo, hi) = match relation {
                Relation::Le => (Some(Num::zero()), None),
                Relation::Ge => (None, Some(Num::zero())),
                Relation::Eq => (Some(Num::zero()), Some(Num::zero())),
            };
            lower.push(lo);
            upper.push(hi);
            x.push(Num::zero());
        }

        let artificial_start = s + m;
        let mut artificial_rows = Vec::new();
        let mut residuals = Vec::with_capacity(m);
        for (i, (entries, _, rhs)) in kept.iter().enumerate() {
            let activity = entries
                .iter()
                .fold(Num::zero(), |acc, (col, coef)| acc + coef * &x[*col]);
            let residual = rhs - &activity;
            let slack = s + i;
            let fits = lower[slack].as_ref().map_or(true, |lo| &residual >= lo)
                && upper[slack].as_ref().map_or(true, |hi| &residual <= hi);
            if fits {
                x[slack] = residual.clone();
            } else {
                artificial_rows.push(i);
            }
            residuals.push(residual);
        }
        let total = artificial_start + artificial_rows.len();
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut artificial_iter = artificial_rows.iter().enumerate().peekable();
        for (i, (entries, _, _)) in kept.iter().enumerate() {
            let mut row = vec![Num::zero(); total];
            for (col, coef) in entries {
                row[*col] = coef.clone();
            }
            row[s + i] = Num::one();
            match artificial_iter.peek() {
                Some(&(k, &r)) if r == i => {
                    artificial_iter.next();
                    let col = artificial_start + k;
                    // slack stays nonbasic at zero; the artificial absorbs |residual|
                    let negative = residuals[i].is_negative();
                    if negative {
                        for v in row.iter_mut() {
                            *v = -v.clone();
                        }
                    }
                    row[col] = Num::one();
                    basis.push(col);
                }
                _ => basis.push(s + i),
            }
            rows.push(row);
        }
        for &i in &artificial_rows {
            lower.push(Some(Num::zero()));
            upper.push(None);
            x.push(residuals[i].abs());
        }
        let mut row_of = vec![None; total];
        for (r, &col) in basis.iter().enumerate() {
            row_of[col] = Some(r);
        }

        let mut cost = vec![Num::zero(); total];
        let mut objective_constant = Num::zero();
        for (var, coef) in lp.objective.iter() {
            match &fixed_values[var.0] {
                Some(val) => objective_constant += &(&Num::from_rational(coef) * val),
                None => cost[column_of[var.0]] = Num::from_rational(coef),
            }
        }

        Solver {
            structural,
            fixed_values,
            original_count: n,
            rows,
            basis,
            row_of,
            x,
            lower,
            upper,
            cost,
            objective_constant,
            artificial_start,
            infeasible_presolve,
            pivots: 0,
        }
    }

    fn run(mut self) -> LpOutcome {
        if self.infeasible_presolve {
            return LpOutcome::without_solution(LpStatus::Infeasible, 0);
        }
        let total = self.x.len();
        if total > self.artificial_start {
            let mut phase_one = vec![Num::zero(); total];
            for c in phase_one.iter_mut().skip(self.artificial_start) {
                *c = Num::minus_one();
            }
            let mut reduced = self.reduced_costs(&phase_one);
            loop {
                match self.step(&mut reduced) {
                    Step::Moved => {}
                    Step::Optimal => break,
                    Step::Unbounded => unreachable!("phase one objective is bounded above by zero"),
                }
            }
            if self.x[self.artificial_start..].iter().any(|v| !v.is_zero()) {
                return LpOutcome::without_solution(LpStatus::Infeasible, self.pivots);
            }
            for col in self.artificial_start..total {
                self.upper[col] = Some(Num::zero());
            }
        }
        let cost = self.cost.clone();
        let mut reduced = self.reduced_costs(&cost);
        loop {
            match self.step(&mut reduced) {
                Step::Moved => {}
                Step::Optimal => break,
                Step::Unbounded => {
                    return LpOutcome::without_solution(LpStatus::Unbounded, self.pivots)
                }
            }
        }

        let mut values = vec![Num::zero(); self.original_count];
        for (i, fixed) in self.fixed_values.iter().enumerate() {
            if let Some(v) = fixed {
                values[i] = v.clone();
            }
        }
        for (col, &orig) in self.structural.iter().enumerate() {
            values[orig] = self.x[col].clone();
        }
        let objective = self
            .cost
            .iter()
            .zip(&self.x)
            .filter(|(c, _)| !c.is_zero())
            .fold(self.objective_constant.clone(), |acc, (c, v)| acc + c * v);
        LpOutcome {
            status: LpStatus::Optimal,
            values: values.iter().map(Num::to_rational).collect(),
            objective: objective.to_rational(),
            pivots: self.pivots,
        }
    }

    fn reduced_costs(&self, cost: &[Num]) -> Vec<Num> {
        let mut d = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, t) in self.rows[r].iter().enumerate() {
                if !t.is_zero() {
                    d[j] -= cb * t;
                }
            }
        }
        d
    }

    fn step(&mut self, reduced: &mut [Num]) -> Step {
        let entering = (0..reduced.len()).find(|&j| {
            if self.row_of[j].is_some() {
                return false;
            }
            let d = &reduced[j];
            (d.is_positive() && self.upper[j].as_ref().map_or(true, |hi| &self.x[j] < hi))
                || (d.is_negative() && self.lower[j].as_ref().map_or(true, |lo| &self.x[j] > lo))
        });
        let Some(e) = entering else {
            return Step::Optimal;
        };
        let increasing = reduced[e].is_positive();

        // (step length, column that blocks, row if basic)
        let mut best: Option<(Num, usize, Option<usize>)> = None;
        let own = if increasing {
            self.upper[e].as_ref().map(|hi| hi - &self.x[e])
        } else {
            self.lower[e].as_ref().map(|lo| &self.x[e] - lo)
        };
        if let Some(len) = own {
            best = Some((len, e, None));
        }
        for (r, row) in self.rows.iter().enumerate() {
            let t = &row[e];
            if t.is_zero() {
                continue;
            }
            let b = self.basis[r];
            // rate of change of the basic variable per unit step
            let rate = if increasing { -t.clone() } else { t.clone() };
            let limit = if rate.is_positive() {
                self.upper[b].as_ref().map(|hi| (hi - &self.x[b]) / &rate)
            } else {
                self.lower[b].as_ref().map(|lo| (lo - &self.x[b]) / &rate)
            };
            let Some(limit) = limit else { continue };
            let better = match &best {
                None => true,
                Some((len, col, _)) => limit < *len || (limit == *len && b < *col),
            };
            if better {
                best = Some((limit, b, Some(r)));
            }
        }
        let Some((len, _, leaving_row)) = best else {
            return Step::Unbounded;
        };

        if !len.is_zero() {
            let delta = if increasing {
                len.clone()
            } else {
                -len.clone()
            };
            self.x[e] += &delta;
            for (r, row) in self.rows.iter().enumerate() {
                let t = &row[e];
                if !t.is_zero() {
                    let b = self.basis[r];
                    self.x[b] -= t * &delta;
                }
            }
        }
        if let Some(r) = leaving_row {
            let leaving = self.basis[r];
            debug_assert!(
                self.lower[leaving].as_ref() == Some(&self.x[leaving])
                    || self.upper[leaving].as_ref() == Some(&self.x[leaving]),
                "leaving variable off its bound"
            );
            self.pivot(r, e, reduced);
        }
        Step::Moved
    }

    fn pivot(&mut self, r: usize, e: usize, reduced: &mut [Num]) {
        self.pivots += 1;
        let inv = self.rows[r][e].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = pivot_row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, _)| j)
            .collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[e].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &support {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        let factor = reduced[e].clone();
        if !factor.is_zero() {
            for &j in &support {
                reduced[j] -= &factor * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        let leaving = self.basis[r];
        self.row_of[leaving] = None;
        self.row_of[e] = Some(r);
        self.basis[r] = e;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn bounded(lp: &mut LinearProgram, name: &str, lo: i64, hi: i64) -> VarId {
        lp.add_var(name, Some(int(lo)), Some(int(hi)))
    }

    #[test]
    fn single_bounded_variable() {
        let mut lp = LinearProgram::new();
        let y = bounded(&mut lp, "y", 0, 1);
        lp.set_objective(LinearExpr::term(y, int(1)));
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value(y), &int(1));
        assert_eq!(out.objective, int(1));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new();
        let a = bounded(&mut lp, "a", 0, 1);
        lp.add_constraint(LinearExpr::term(a, int(1)), Relation::Ge, int(2));
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new();
        let a = lp.add_var("a", Some(int(0)), None);
        let b = lp.add_var("b", None, None);
        lp.add_constraint(
            LinearExpr::term(a, int(1)).with(b, int(-1)),
            Relation::Le,
            int(3),
        );
        lp.set_objective(LinearExpr::term(a, int(1)).with(b, int(1)));
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn empty_constraint_after_fixing_is_checked() {
        let mut lp = LinearProgram::new();
        let a = bounded(&mut lp, "a", 2, 2);
        lp.add_constraint(LinearExpr::term(a, int(1)), Relation::Le, int(1));
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn free_variables_and_equalities() {
        // max -|x - 3/7| style: x free, x = 3/7 enforced by equality
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", None, None);
        let y = lp.add_var("y", None, Some(int(5)));
        lp.add_constraint(LinearExpr::term(x, int(7)), Relation::Eq, int(3));
        lp.add_constraint(
            LinearExpr::term(y, int(1)).with(x, int(-1)),
            Relation::Le,
            int(1),
        );
        lp.set_objective(LinearExpr::term(y, int(1)));
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.value(x), &ratio(3, 7));
        assert_eq!(out.value(y), &ratio(10, 7));
    }

    #[test]
    fn malformed_programs_are_rejected() {
        let mut lp = LinearProgram::new();
        lp.add_var("a", Some(int(1)), Some(int(0)));
        assert!(matches!(solve_lp(&lp), Err(LpError::InvertedBounds { .. })));

        let mut lp = LinearProgram::new();
        lp.add_var("a", None, None);
        lp.add_constraint(LinearExpr::term(VarId(3), int(1)), Relation::Le, int(0));
        assert!(matches!(
            solve_lp(&lp),
            Err(LpError::UnknownVariable {
                constraint: Some(0),
                ..
            })
        ));
    }

    #[test]
    fn lexicographic_stages_refine_ties() {
        // max a + b with a + b <= 4, then max a
        let mut lp = LinearProgram::new();
        let a = bounded(&mut lp, "a", 0, 3);
        let b = bounded(&mut lp, "b", 0, 3);
        lp.add_constraint(
            LinearExpr::term(a, int(1)).with(b, int(1)),
            Relation::Le,
            int(4),
        );
        let out = solve_lexicographic(
            &lp,
            &[
                LinearExpr::term(a, int(1)).with(b, int(1)),
                LinearExpr::term(a, int(1)),
            ],
        )
        .unwrap();
        assert_eq!(out.objective, int(4));
        assert_eq!(out.value(a), &int(3));
        assert_eq!(out.value(b), &int(1));
    }

    #[test]
    fn degenerate_program_terminates() {
        // classic cycling example (Beale) made bounded
        let mut lp = LinearProgram::new();
        let x: Vec<VarId> = (0..4)
            .map(|i| lp.add_var(format!("x{i}"), Some(int(0)), None))
            .collect();
        let rows = [
            ([ratio(1, 4), int(-60), ratio(-1, 25), int(9)], int(0)),
            ([ratio(1, 2), int(-90), ratio(-1, 50), int(3)], int(0)),
            ([int(0), int(0), int(1), int(0)], int(1)),
        ];
        for (coefs, rhs) in rows {
            let mut e = LinearExpr::new();
            for (v, c) in x.iter().zip(coefs) {
                e.add(*v, c);
            }
            lp.add_constraint(e, Relation::Le, rhs);
        }
        let mut obj = LinearExpr::new();
        for (v, c) in x
            .iter()
            .zip([ratio(3, 4), int(-150), ratio(1, 50), int(-6)])
        {
            obj.add(*v, c);
        }
        lp.set_objective(obj);
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective, ratio(1, 20));
        assert!(lp.is_feasible(&out.values));
    }
}
