//! Big-M MILP encoding of the clearing problem and an exact branch-and-bound
//! solver over its binaries.
//!
//! Every implication `cond -> rel` is written with one indicator `z`: `z = 0`
//! enforces `rel`, `z = 1` relaxes it by a bound large enough never to cut a
//! feasible point and, through a link on the acceptance, rules out `cond`.
//! For a supply bid that reads
//!
//! ```text
//! y > 0  -> p <= MCP     p - M z1 <= MCP,   y <= 1 - z1
//! y < 1  -> MCP <= p     MCP - M z2 <= p,   y >= z2
//! ```
//!
//! Ties between optimal points are resolved by solving a sequence of MILPs,
//! each fixing the previous stage's optimum (see [`crate::market::canonical_cmp`]).

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use indexmap::IndexMap;
use num_traits::{One, Zero};

use crate::lp::{solve_lp, LinearExpr, LinearProgram, LpError, LpStatus, Relation, VarId};
use crate::market::{
    feasible_price_interval, validate_instance, ClearingResult, ClearingStatus, MarketInstance,
    ObjectiveVariant, PriceInterval, Side, Violation,
};
use crate::rational::{int, Exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMBounds {
    /// Per period, index `t - 1`.
    pub mcp_upper: Vec<Rational>,
    /// Upper bound of each MIC hourly bid's income variable, by bid id.
    pub income_bound: IndexMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MilpError {
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidInstance(Vec<Violation>),
    #[error("MCP upper bound {} is below the price {} of bid `{bid}`", Exact(.bound), Exact(.price))]
    BoundBelowPrice {
        bound: Rational,
        price: Rational,
        bid: String,
    },
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// The `MCP` upper bound is the instance override or the highest bid price;
/// an override below any bid price is refused.
pub fn compute_big_m(instance: &MarketInstance) -> Result<BigMBounds, MilpError> {
    let upper = instance.effective_mcp_upper();
    let steps = instance
        .simple_bids
        .iter()
        .map(|b| (&b.id, &b.price))
        .chain(instance.mic_bids().map(|b| (&b.id, &b.price)));
    for (id, price) in steps {
        if price > &upper {
            return Err(MilpError::BoundBelowPrice {
                bound: upper,
                price: price.clone(),
                bid: id.clone(),
            });
        }
    }
    let income_bound = instance
        .mic_bids()
        .map(|b| (b.id.clone(), &b.quantity * &upper))
        .collect();
    Ok(BigMBounds {
        mcp_upper: vec![upper; instance.period_count],
        income_bound,
    })
}

/// What a MILP variable stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Role {
    Mcp {
        period: usize,
    },
    Acceptance {
        bid: String,
    },
    Income {
        bid: String,
    },
    Activation {
        order: String,
    },
    Indicator {
        bid: String,
        implication: &'static str,
    },
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Mcp { period } => write!(f, "MCP{period}"),
            Role::Acceptance { bid } => write!(f, "y[{bid}]"),
            Role::Income { bid } => write!(f, "I[{bid}]"),
            Role::Activation { order } => write!(f, "u[{order}]"),
            Role::Indicator { bid, implication } => write!(f, "z[{bid}: {implication}]"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MilpProblem {
    pub instance: MarketInstance,
    pub variant: ObjectiveVariant,
    pub bounds: BigMBounds,
    pub base: LinearProgram,
    /// Ascending variable ids.
    pub binaries: Vec<VarId>,
    /// Indexed by variable id.
    pub entity_map: Vec<Role>,
    mcp: Vec<VarId>,
    acceptance: IndexMap<String, VarId>,
    income: IndexMap<String, VarId>,
    activation: IndexMap<String, VarId>,
}

impl MilpProblem {
    pub fn mcp_var(&self, period: usize) -> VarId {
        self.mcp[period - 1]
    }

    pub fn acceptance_var(&self, bid: &str) -> Option<VarId> {
        self.acceptance.get(bid).copied()
    }

    pub fn income_var(&self, bid: &str) -> Option<VarId> {
        self.income.get(bid).copied()
    }

    pub fn activation_var(&self, order: &str) -> Option<VarId> {
        self.activation.get(order).copied()
    }

    /// Accepted demand volume.
    fn volume_expr(&self) -> LinearExpr {
        let mut e = LinearExpr::new();
        for bid in self
            .instance
            .simple_bids
            .iter()
            .filter(|b| b.side == Side::Demand)
        {
            e.add(self.acceptance[&bid.id], bid.quantity.clone());
        }
        e
    }
}

struct Encoder {
    lp: LinearProgram,
    roles: Vec<Role>,
    binaries: Vec<VarId>,
}

impl Encoder {
    fn var(&mut self, role: Role, lower: Rational, upper: Rational) -> VarId {
        let id = self.lp.add_var(role.to_string(), Some(lower), Some(upper));
        self.roles.push(role);
        id
    }

    fn indicator(&mut self, bid: &str, implication: &'static str) -> VarId {
        let z = self.var(
            Role::Indicator {
                bid: bid.to_string(),
                implication,
            },
            int(0),
            int(1),
        );
        self.binaries.push(z);
        z
    }

    /// `z = 0 -> a <= b` as `a - b - big_m z <= 0`.
    fn relaxed_le(
        &mut self,
        lhs: LinearExpr,
        rhs: &LinearExpr,
        z: VarId,
        big_m: &Rational,
        constant: Rational,
    ) {
        let mut e = lhs;
        e.add_expr(rhs, &-Rational::one());
        e.add(z, -big_m.clone());
        self.lp.add_constraint(e, Relation::Le, constant);
    }

    /// `cond(y > 0) -> price <= MCP` (`seller`) or `MCP <= price`; returns z.
    fn if_positive(
        &mut self,
        bid: &str,
        y: VarId,
        mcp: VarId,
        price: &Rational,
        seller: bool,
        m: &Rational,
    ) -> VarId {
        let z = self.indicator(
            bid,
            if seller {
                "y>0 -> p<=MCP"
            } else {
                "y>0 -> MCP<=p"
            },
        );
        self.price_side(mcp, price, seller, z, m);
        // y <= 1 - z
        self.lp.add_constraint(
            LinearExpr::term(y, int(1)).with(z, int(1)),
            Relation::Le,
            int(1),
        );
        z
    }

    /// `cond(y < 1) -> MCP <= price` (`seller`) or `price <= MCP`; returns z.
    fn if_partial(
        &mut self,
        bid: &str,
        y: VarId,
        mcp: VarId,
        price: &Rational,
        seller: bool,
        m: &Rational,
    ) -> VarId {
        let z = self.indicator(
            bid,
            if seller {
                "y<1 -> MCP<=p"
            } else {
                "y<1 -> p<=MCP"
            },
        );
        self.price_side(mcp, price, !seller, z, m);
        // y >= z
        self.lp.add_constraint(
            LinearExpr::term(y, int(1)).with(z, int(-1)),
            Relation::Ge,
            int(0),
        );
        z
    }

    /// `price <= MCP` when `price_below`, else `MCP <= price`, relaxed by
    /// `M z` with `M` the largest violation possible for `MCP` in
    /// `[0, upper]`.
    fn price_side(
        &mut self,
        mcp: VarId,
        price: &Rational,
        price_below: bool,
        z: VarId,
        upper: &Rational,
    ) {
        if price_below {
            // -MCP - p z <= -p
            self.relaxed_le(
                LinearExpr::new(),
                &LinearExpr::term(mcp, int(1)),
                z,
                price,
                -price.clone(),
            );
        } else {
            // MCP - (upper - p) z <= p
            self.relaxed_le(
                LinearExpr::term(mcp, int(1)),
                &LinearExpr::new(),
                z,
                &(upper - price),
                price.clone(),
            );
        }
    }

    /// `z = 0 -> expr == constant`, as two inequalities relaxed by `above z`
    /// and `below z`, the largest amounts by which `expr` can exceed or fall
    /// short of `constant`.
    fn relaxed_eq(
        &mut self,
        expr: &LinearExpr,
        constant: &Rational,
        z: VarId,
        above: &Rational,
        below: &Rational,
    ) {
        self.lp.add_constraint(
            expr.clone().with(z, -above.clone()),
            Relation::Le,
            constant.clone(),
        );
        self.lp.add_constraint(
            expr.clone().with(z, below.clone()),
            Relation::Ge,
            constant.clone(),
        );
    }
}

/// Builds the MILP for `instance` under `variant`. Variables are created as:
/// prices, acceptances (canonical bid order), incomes, activations, then the
/// indicators bid by bid.
pub fn encode(
    instance: &MarketInstance,
    variant: ObjectiveVariant,
    bounds: &BigMBounds,
) -> MilpProblem {
    let mut enc = Encoder {
        lp: LinearProgram::new(),
        roles: Vec::new(),
        binaries: Vec::new(),
    };
    let mcp: Vec<VarId> = (1..=instance.period_count)
        .map(|t| {
            enc.var(
                Role::Mcp { period: t },
                int(0),
                bounds.mcp_upper[t - 1].clone(),
            )
        })
        .collect();
    let mut acceptance = IndexMap::new();
    for id in instance.bid_ids() {
        let y = enc.var(
            Role::Acceptance {
                bid: id.to_string(),
            },
            int(0),
            int(1),
        );
        acceptance.insert(id.to_string(), y);
    }
    let mut income = IndexMap::new();
    for bid in instance.mic_bids() {
        let i = enc.var(
            Role::Income {
                bid: bid.id.clone(),
            },
            int(0),
            bounds.income_bound[&bid.id].clone(),
        );
        income.insert(bid.id.clone(), i);
    }
    let mut activation = IndexMap::new();
    for order in &instance.mic_orders {
        let u = enc.var(
            Role::Activation {
                order: order.id.clone(),
            },
            int(0),
            int(1),
        );
        enc.binaries.push(u);
        activation.insert(order.id.clone(), u);
    }

    let mut balance = vec![LinearExpr::new(); instance.period_count];
    let mut objective = LinearExpr::new();

    for bid in &instance.simple_bids {
        let y = acceptance[&bid.id];
        let t = bid.period;
        let m = &bounds.mcp_upper[t - 1];
        balance[t - 1].add(y, bid.signed_quantity());
        objective.add(y, -bid.signed_quantity() * &bid.price);
        let seller = bid.side == Side::Supply;
        enc.if_positive(&bid.id, y, mcp[t - 1], &bid.price, seller, m);
        enc.if_partial(&bid.id, y, mcp[t - 1], &bid.price, seller, m);
    }

    for order in &instance.mic_orders {
        let u = activation[&order.id];
        // FT u + VT sum q y - sum I <= 0
        let mut mic = LinearExpr::term(u, order.fixed_term.clone());
        if variant == ObjectiveVariant::MicCostTsw {
            objective.add(u, -order.fixed_term.clone());
        }
        for bid in &order.hourly_bids {
            let y = acceptance[&bid.id];
            let inc = income[&bid.id];
            let t = bid.period;
            let m = &bounds.mcp_upper[t - 1];
            balance[t - 1].add(y, bid.quantity.clone());
            match variant {
                ObjectiveVariant::HourlyTsw => objective.add(y, -&bid.quantity * &bid.price),
                ObjectiveVariant::MicCostTsw => {
                    objective.add(y, -&bid.quantity * &order.variable_term)
                }
            };
            mic.add(y, &order.variable_term * &bid.quantity)
                .add(inc, int(-1));
            enc.lp.add_constraint(
                LinearExpr::term(y, int(1)).with(u, int(-1)),
                Relation::Le,
                int(0),
            );

            // residual ranges over the variable boxes give exact big-Ms
            let income_upper = &bounds.income_bound[&bid.id];
            let qp = &bid.quantity * &bid.price;
            let qm = &bid.quantity * m;
            let z1 = enc.if_positive(&bid.id, y, mcp[t - 1], &bid.price, true, m);
            // y > 0 -> I = y q p + q MCP - q p
            let accepted = LinearExpr::term(inc, int(1))
                .with(y, -qp.clone())
                .with(mcp[t - 1], -bid.quantity.clone());
            enc.relaxed_eq(&accepted, &-qp.clone(), z1, &(income_upper + &qp), &qm);
            // y < 1 -> I = y q p
            let z2 = enc.indicator(&bid.id, "y<1 -> I=yqp");
            enc.lp.add_constraint(
                LinearExpr::term(y, int(1)).with(z2, int(-1)),
                Relation::Ge,
                int(0),
            );
            let partial = LinearExpr::term(inc, int(1)).with(y, -qp.clone());
            enc.relaxed_eq(&partial, &Rational::zero(), z2, income_upper, &qp);
            // valid at every integral point: I <= q MCP and I <= (q upper) y
            enc.lp.add_constraint(
                LinearExpr::term(inc, int(1)).with(mcp[t - 1], -bid.quantity.clone()),
                Relation::Le,
                int(0),
            );
            enc.lp.add_constraint(
                LinearExpr::term(inc, int(1)).with(y, -income_upper.clone()),
                Relation::Le,
                int(0),
            );
        }
        enc.lp.add_constraint(mic, Relation::Le, int(0));
    }

    for expr in balance {
        enc.lp.add_constraint(expr, Relation::Eq, int(0));
    }
    enc.lp.set_objective(objective);
    enc.binaries.sort();

    MilpProblem {
        instance: instance.clone(),
        variant,
        bounds: bounds.clone(),
        base: enc.lp,
        binaries: enc.binaries,
        entity_map: enc.roles,
        mcp,
        acceptance,
        income,
        activation,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BnbStats {
    pub nodes_explored: usize,
    pub lp_solves: usize,
    /// Best open bound each time a node of the welfare stage is expanded.
    pub best_bound_trace: Vec<Rational>,
}

struct Node {
    bound: Rational,
    seq: usize,
    fixings: Vec<(VarId, bool)>,
    values: Vec<Rational>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .cmp(&other.bound)
            .then_with(|| Reverse(self.seq).cmp(&Reverse(other.seq)))
    }
}

fn is_binary_value(v: &Rational) -> bool {
    v.is_zero() || v.is_one()
}

/// Maximises `objective` over `lp` with `binaries` integral. `incumbent` is a
/// known integral feasible point; nodes that cannot beat it are pruned.
fn branch_and_bound(
    lp: &LinearProgram,
    binaries: &[VarId],
    objective: &LinearExpr,
    incumbent: Option<Vec<Rational>>,
    stats: &mut BnbStats,
    trace: bool,
) -> Result<Option<Vec<Rational>>, LpError> {
    let mut work = lp.clone();
    work.set_objective(objective.clone());
    let mut best = incumbent.map(|v| {
        let value = objective.evaluate(&v);
        (v, value)
    });
    let mut seq = 0;
    let mut solve =
        |fixings: &[(VarId, bool)], stats: &mut BnbStats| -> Result<Option<Node>, LpError> {
            let mut node_lp = work.clone();
            for (var, one) in fixings {
                let v = if *one { int(1) } else { int(0) };
                node_lp.set_bounds(*var, Some(v.clone()), Some(v));
            }
            stats.lp_solves += 1;
            let outcome = solve_lp(&node_lp)?;
            seq += 1;
            Ok(match outcome.status {
                LpStatus::Optimal => Some(Node {
                    bound: outcome.objective,
                    seq,
                    fixings: fixings.to_vec(),
                    values: outcome.values,
                }),
                _ => None,
            })
        };

    let mut heap = BinaryHeap::new();
    if let Some(root) = solve(&[], stats)? {
        heap.push(root);
    }
    while let Some(node) = heap.pop() {
        if let Some((_, value)) = &best {
            if &node.bound <= value {
                break;
            }
        }
        stats.nodes_explored += 1;
        if trace {
            stats.best_bound_trace.push(node.bound.clone());
        }
        let Some(&branch) = binaries
            .iter()
            .find(|v| !is_binary_value(&node.values[v.0]))
        else {
            best = Some((node.values, node.bound));
            continue;
        };
        for one in [false, true] {
            let mut fixings = node.fixings.clone();
            fixings.push((branch, one));
            if let Some(child) = solve(&fixings, stats)? {
                if best
                    .as_ref()
                    .map_or(true, |(_, value)| child.bound > *value)
                {
                    heap.push(child);
                }
            }
        }
    }
    Ok(best.map(|(v, _)| v))
}

/// True when `stage` is a single variable already at the bound it pushes
/// towards, so the incumbent is optimal for the stage.
fn at_stage_bound(lp: &LinearProgram, stage: &LinearExpr, values: &[Rational]) -> bool {
    let mut terms = stage.iter();
    let (Some((var, coef)), None) = (terms.next(), terms.next()) else {
        return false;
    };
    let v = &lp.variables[var.0];
    let bound = if coef > &Rational::zero() {
        &v.upper
    } else {
        &v.lower
    };
    bound.as_ref() == Some(&values[var.0])
}

/// Solves the encoded problem to a canonical global optimum.
pub fn solve_milp(problem: &MilpProblem) -> Result<(ClearingResult, BnbStats), MilpError> {
    let instance = &problem.instance;
    let mut stats = BnbStats::default();
    let mut stages = vec![problem.base.objective.clone(), problem.volume_expr()];
    stages.extend(problem.mcp.iter().map(|&v| LinearExpr::term(v, int(-1))));
    stages.extend(
        problem
            .activation
            .values()
            .map(|&v| LinearExpr::term(v, int(-1))),
    );
    stages.extend(
        problem
            .acceptance
            .values()
            .map(|&v| LinearExpr::term(v, int(1))),
    );

    let mut lp = problem.base.clone();
    let mut incumbent: Option<Vec<Rational>> = None;
    for (k, stage) in stages.iter().enumerate() {
        if let Some(values) = &incumbent {
            if at_stage_bound(&lp, stage, values) {
                lp.add_constraint(stage.clone(), Relation::Eq, stage.evaluate(values));
                continue;
            }
        }
        let found = branch_and_bound(
            &lp,
            &problem.binaries,
            stage,
            incumbent.take(),
            &mut stats,
            k == 0,
        )?;
        let Some(values) = found else {
            return Ok((ClearingResult::infeasible(problem.variant), stats));
        };
        lp.add_constraint(stage.clone(), Relation::Eq, stage.evaluate(&values));
        incumbent = Some(values);
    }
    let values = incumbent.expect("at least one stage");
    if stats.nodes_explored == 0 {
        stats.nodes_explored = 1;
    }

    let mut result = ClearingResult {
        status: ClearingStatus::Optimal,
        objective_variant: problem.variant,
        mcp: problem.mcp.iter().map(|v| values[v.0].clone()).collect(),
        mcp_interval: Vec::new(),
        acceptance: problem
            .acceptance
            .iter()
            .map(|(id, v)| (id.clone(), values[v.0].clone()))
            .collect(),
        activation: problem
            .activation
            .iter()
            .map(|(id, v)| (id.clone(), values[v.0].is_one()))
            .collect(),
        bid_income: problem
            .income
            .iter()
            .map(|(id, v)| (id.clone(), values[v.0].clone()))
            .collect(),
        order_income: IndexMap::new(),
        objective_value: problem.base.objective.evaluate(&values),
    };
    for order in &instance.mic_orders {
        let total = order
            .hourly_bids
            .iter()
            .fold(Rational::zero(), |acc, b| acc + &result.bid_income[&b.id]);
        result.order_income.insert(order.id.clone(), total);
    }
    result.mcp_interval = mcp_interval(instance, &result);
    Ok((result, stats))
}

/// Per-period price intervals of an optimal result, with acceptances and
/// activations held fixed and the other periods at their reported prices.
pub fn mcp_interval(instance: &MarketInstance, result: &ClearingResult) -> Vec<PriceInterval> {
    (1..=instance.period_count)
        .map(|t| {
            feasible_price_interval(instance, result, t).unwrap_or_else(|| PriceInterval {
                lo: result.mcp[t - 1].clone(),
                hi: result.mcp[t - 1].clone(),
            })
        })
        .collect()
}

/// Validates, bounds, encodes and solves in one call.
pub fn clear(
    instance: &MarketInstance,
    variant: ObjectiveVariant,
) -> Result<(ClearingResult, BnbStats), MilpError> {
    let violations = validate_instance(instance);
    if !violations.is_empty() {
        return Err(MilpError::InvalidInstance(violations));
    }
    let bounds = compute_big_m(instance)?;
    solve_milp(&encode(instance, variant, &bounds))
}

/// Like [`clear`], with `Some(flag)` entries forcing the activation of the
/// order at the same index.
pub fn clear_with_activation(
    instance: &MarketInstance,
    variant: ObjectiveVariant,
    activation: &[Option<bool>],
) -> Result<(ClearingResult, BnbStats), MilpError> {
    let violations = validate_instance(instance);
    if !violations.is_empty() {
        return Err(MilpError::InvalidInstance(violations));
    }
    let bounds = compute_big_m(instance)?;
    let mut problem = encode(instance, variant, &bounds);
    for (order, forced) in instance.mic_orders.iter().zip(activation) {
        if let Some(on) = forced {
            let v = if *on { int(1) } else { int(0) };
            let u = problem.activation[&order.id];
            problem.base.set_bounds(u, Some(v.clone()), Some(v));
        }
    }
    solve_milp(&problem)
}
