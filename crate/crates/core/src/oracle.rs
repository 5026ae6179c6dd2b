//! Exhaustive clearing by price-regime enumeration.
//!
//! For each activation vector and each period, the clearing price either sits
//! on a participating bid price or inside a gap between two consecutive ones.
//! Inside a regime every bid away from the price is fully accepted or
//! rejected, except in-the-money MIC bids of active orders, which are
//! enumerated as 0 or 1. What remains is a small LP over the prices and the
//! acceptances of bids priced exactly at the regime point.
//!
//! Only [`crate::lp`] is shared with the MILP path; the tie-break is the same
//! [`canonical_cmp`] so whole solutions can be compared.

use std::cmp::Ordering;

use indexmap::IndexMap;
use num_traits::{One, Zero};

use crate::lp::{
    solve_lexicographic, LinearExpr, LinearProgram, LpError, LpStatus, Relation, VarId,
};
use crate::market::{
    canonical_cmp, feasible_price_interval, validate_instance, verify_clearing, ClearingResult,
    MarketInstance, ObjectiveVariant, Side, Violation,
};
use crate::milp::{self, MilpError};
use crate::rational::{int, Rational};

pub const MAX_ORDERS: usize = 12;
pub const MAX_PRICES_PER_PERIOD: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{count} MIC orders exceed the oracle limit of {MAX_ORDERS}")]
    TooManyOrders { count: usize },
    #[error("period {period} has {count} distinct prices, above the oracle limit of {MAX_PRICES_PER_PERIOD}")]
    TooManyPrices { period: usize, count: usize },
    #[error("activation vector has {got} entries for {expected} orders")]
    ActivationLength { expected: usize, got: usize },
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

impl OracleError {
    fn invalid(violations: Vec<Violation>) -> Self {
        OracleError::Milp(MilpError::InvalidInstance(violations))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub activation_vectors: usize,
    /// Regime and in-the-money choices examined, before pruning.
    pub configurations: u128,
    pub lp_solves: u128,
    /// Worst-case number of residual programs for this instance.
    pub bound: u128,
}

/// `2^C * prod_t (2 * prices_t + 2) * 2^H`, with `H` the number of MIC
/// hourly bids.
pub fn runtime_bound(instance: &MarketInstance) -> u128 {
    let mut bound = 1u128 << (instance.mic_orders.len() + instance.mic_bids().count());
    for t in 1..=instance.period_count {
        bound *= 2 * distinct_prices(instance, t).len() as u128 + 2;
    }
    bound
}

fn distinct_prices(instance: &MarketInstance, period: usize) -> Vec<Rational> {
    let bids = instance.bids_in_period(period);
    let mut prices: Vec<Rational> = bids
        .simple
        .iter()
        .map(|b| b.price.clone())
        .chain(bids.mic.iter().map(|b| b.price.clone()))
        .collect();
    prices.sort();
    prices.dedup();
    prices
}

fn check_guard_rails(instance: &MarketInstance) -> Result<(), OracleError> {
    let violations = validate_instance(instance);
    if !violations.is_empty() {
        return Err(OracleError::invalid(violations));
    }
    milp::compute_big_m(instance)?;
    if instance.mic_orders.len() > MAX_ORDERS {
        return Err(OracleError::TooManyOrders {
            count: instance.mic_orders.len(),
        });
    }
    for t in 1..=instance.period_count {
        let count = distinct_prices(instance, t).len();
        if count > MAX_PRICES_PER_PERIOD {
            return Err(OracleError::TooManyPrices { period: t, count });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    Rejected,
    Accepted,
    /// Priced at the regime point: any fraction.
    Marginal,
    /// In-the-money MIC bid: enumerated as 0 or 1.
    Choice,
}

/// One period's regime with the fate of each of its bids (by global bid
/// index) and the chosen values of the in-the-money MIC bids.
#[derive(Debug, Clone)]
struct PeriodConfig {
    lo: Rational,
    hi: Rational,
    fates: Vec<(usize, Fate)>,
}

struct Bid<'a> {
    id: &'a str,
    period: usize,
    /// signed: + supply, - demand
    quantity: Rational,
    price: &'a Rational,
    side: Side,
    order: Option<usize>,
}

struct Enumerator<'a> {
    instance: &'a MarketInstance,
    variant: ObjectiveVariant,
    bids: Vec<Bid<'a>>,
    upper: Rational,
    stats: OracleStats,
}

impl<'a> Enumerator<'a> {
    fn new(instance: &'a MarketInstance, variant: ObjectiveVariant) -> Self {
        let mut bids: Vec<Bid<'a>> = instance
            .simple_bids
            .iter()
            .map(|b| Bid {
                id: &b.id,
                period: b.period,
                quantity: b.signed_quantity(),
                price: &b.price,
                side: b.side,
                order: None,
            })
            .collect();
        for (k, order) in instance.mic_orders.iter().enumerate() {
            bids.extend(order.hourly_bids.iter().map(|b| Bid {
                id: &b.id,
                period: b.period,
                quantity: b.quantity.clone(),
                price: &b.price,
                side: Side::Supply,
                order: Some(k),
            }));
        }
        Self {
            instance,
            variant,
            bids,
            upper: instance.effective_mcp_upper(),
            stats: OracleStats {
                bound: runtime_bound(instance),
                ..OracleStats::default()
            },
        }
    }

    fn participates(&self, bid: &Bid<'_>, activation: &[bool]) -> bool {
        bid.order.map_or(true, |k| activation[k])
    }

    /// Price regimes of a period as closed intervals (points have lo = hi).
    fn regimes(&self, period: usize, activation: &[bool]) -> Vec<(Rational, Rational)> {
        let mut prices: Vec<&Rational> = self
            .bids
            .iter()
            .filter(|b| b.period == period && self.participates(b, activation))
            .map(|b| b.price)
            .collect();
        prices.sort();
        prices.dedup();
        let Some(first) = prices.first() else {
            return vec![(int(0), self.upper.clone())];
        };
        let mut out = Vec::new();
        if first > &&Rational::zero() {
            out.push((int(0), (*first).clone()));
        }
        for (i, p) in prices.iter().enumerate() {
            out.push(((*p).clone(), (*p).clone()));
            if let Some(next) = prices.get(i + 1) {
                out.push(((*p).clone(), (*next).clone()));
            }
        }
        let last = prices[prices.len() - 1];
        if last < &self.upper {
            out.push((last.clone(), self.upper.clone()));
        }
        out
    }

    fn fate(&self, bid: &Bid<'_>, lo: &Rational, hi: &Rational, activation: &[bool]) -> Fate {
        if !self.participates(bid, activation) {
            return Fate::Rejected;
        }
        let point = lo == hi;
        if point && bid.price == lo {
            return Fate::Marginal;
        }
        let below = bid.price <= lo;
        match (bid.side, bid.order) {
            (Side::Supply, None) => {
                if below {
                    Fate::Accepted
                } else {
                    Fate::Rejected
                }
            }
            (Side::Supply, Some(_)) => {
                if below {
                    Fate::Choice
                } else {
                    Fate::Rejected
                }
            }
            (Side::Demand, _) => {
                if below {
                    Fate::Rejected
                } else {
                    Fate::Accepted
                }
            }
        }
    }

    /// Regime configurations of one period whose balance can close.
    fn period_configs(
        &mut self,
        period: usize,
        activation: &[bool],
    ) -> Vec<(PeriodConfig, Vec<bool>)> {
        let mut out = Vec::new();
        for (lo, hi) in self.regimes(period, activation) {
            let fates: Vec<(usize, Fate)> = self
                .bids
                .iter()
                .enumerate()
                .filter(|(_, b)| b.period == period)
                .map(|(i, b)| (i, self.fate(b, &lo, &hi, activation)))
                .collect();
            let choices: Vec<usize> = fates
                .iter()
                .filter(|(_, f)| *f == Fate::Choice)
                .map(|(i, _)| *i)
                .collect();
            for mask in 0..(1u64 << choices.len()) {
                self.stats.configurations += 1;
                let picks: Vec<bool> = (0..choices.len()).map(|j| mask >> j & 1 == 1).collect();
                let mut fixed = Rational::zero();
                let mut supply_room = Rational::zero();
                let mut demand_room = Rational::zero();
                for (i, fate) in &fates {
                    let q = &self.bids[*i].quantity;
                    match fate {
                        Fate::Accepted => fixed += q,
                        Fate::Choice => {
                            let j = choices.iter().position(|c| c == i).unwrap();
                            if picks[j] {
                                fixed += q;
                            }
                        }
                        Fate::Marginal if self.bids[*i].side == Side::Supply => supply_room += q,
                        Fate::Marginal => demand_room -= q,
                        Fate::Rejected => {}
                    }
                }
                // net injection must reach zero
                if &fixed + &supply_room < Rational::zero() || fixed > demand_room {
                    continue;
                }
                let config = PeriodConfig {
                    lo: lo.clone(),
                    hi: hi.clone(),
                    fates: fates.clone(),
                };
                out.push((config, picks));
            }
        }
        out
    }

    fn best_for(&mut self, activation: &[bool]) -> Result<Option<ClearingResult>, OracleError> {
        self.stats.activation_vectors += 1;
        let per_period: Vec<Vec<(PeriodConfig, Vec<bool>)>> = (1..=self.instance.period_count)
            .map(|t| self.period_configs(t, activation))
            .collect();
        if per_period.iter().any(|c| c.is_empty()) {
            return Ok(None);
        }
        let mut best: Option<ClearingResult> = None;
        let mut index = vec![0usize; per_period.len()];
        loop {
            let combo: Vec<&(PeriodConfig, Vec<bool>)> = index
                .iter()
                .enumerate()
                .map(|(t, &i)| &per_period[t][i])
                .collect();
            if let Some(candidate) = self.solve_combo(&combo, activation, best.as_ref())? {
                let better = match &best {
                    None => true,
                    Some(b) => canonical_cmp(self.instance, &candidate, b) == Ordering::Greater,
                };
                if better {
                    best = Some(candidate);
                }
            }
            // odometer over periods
            let mut t = 0;
            loop {
                if t == index.len() {
                    return Ok(best);
                }
                index[t] += 1;
                if index[t] < per_period[t].len() {
                    break;
                }
                index[t] = 0;
                t += 1;
            }
        }
    }

    fn solve_combo(
        &mut self,
        combo: &[&(PeriodConfig, Vec<bool>)],
        activation: &[bool],
        best: Option<&ClearingResult>,
    ) -> Result<Option<ClearingResult>, OracleError> {
        let instance = self.instance;
        let mut lp = LinearProgram::new();
        let mcp: Vec<VarId> = combo
            .iter()
            .enumerate()
            .map(|(t, (c, _))| {
                lp.add_var(
                    format!("MCP{}", t + 1),
                    Some(c.lo.clone()),
                    Some(c.hi.clone()),
                )
            })
            .collect();

        // value of each bid's acceptance: fixed constant or a free variable
        let mut fixed: Vec<Option<Rational>> = vec![None; self.bids.len()];
        let mut free: Vec<Option<VarId>> = vec![None; self.bids.len()];
        for (config, picks) in combo {
            let mut pick = picks.iter();
            for (i, fate) in &config.fates {
                match fate {
                    Fate::Accepted => fixed[*i] = Some(int(1)),
                    Fate::Rejected => fixed[*i] = Some(int(0)),
                    Fate::Choice => {
                        fixed[*i] = Some(if *pick.next().unwrap() {
                            int(1)
                        } else {
                            int(0)
                        })
                    }
                    Fate::Marginal => {
                        free[*i] = Some(lp.add_var(self.bids[*i].id, Some(int(0)), Some(int(1))))
                    }
                }
            }
        }

        let mut objective = LinearExpr::new();
        let mut constant = Rational::zero();
        let mut volume = LinearExpr::new();
        let mut balance = vec![(LinearExpr::new(), Rational::zero()); instance.period_count];
        let mut mic = vec![(LinearExpr::new(), Rational::zero()); instance.mic_orders.len()];
        for (k, order) in instance.mic_orders.iter().enumerate() {
            if activation[k] {
                mic[k].1 -= &order.fixed_term;
                if self.variant == ObjectiveVariant::MicCostTsw {
                    constant -= &order.fixed_term;
                }
            }
        }
        for (i, bid) in self.bids.iter().enumerate() {
            let unit_value = match (bid.order, self.variant) {
                (Some(k), ObjectiveVariant::MicCostTsw) => {
                    -&bid.quantity * &instance.mic_orders[k].variable_term
                }
                _ => -&bid.quantity * bid.price,
            };
            let (bal_expr, bal_const) = &mut balance[bid.period - 1];
            match (&fixed[i], free[i]) {
                (Some(y), _) => {
                    constant += &unit_value * y;
                    *bal_const += &bid.quantity * y;
                }
                (None, Some(v)) => {
                    objective.add(v, unit_value.clone());
                    bal_expr.add(v, bid.quantity.clone());
                    if bid.side == Side::Demand {
                        volume.add(v, -bid.quantity.clone());
                    }
                }
                (None, None) => unreachable!("every bid has a fate"),
            }
            if let Some(k) = bid.order {
                if !activation[k] {
                    continue;
                }
                let order = &instance.mic_orders[k];
                let (mic_expr, mic_const) = &mut mic[k];
                // income - cost >= 0
                match (&fixed[i], free[i]) {
                    (Some(y), _) if y.is_one() => {
                        mic_expr.add(mcp[bid.period - 1], bid.quantity.clone());
                        *mic_const -= &order.variable_term * &bid.quantity;
                    }
                    (Some(_), _) => {}
                    (None, Some(v)) => {
                        mic_expr.add(
                            v,
                            &bid.quantity * bid.price - &order.variable_term * &bid.quantity,
                        );
                    }
                    (None, None) => unreachable!(),
                }
            }
        }

        // objective upper bound: skip combos that cannot reach the incumbent
        if let Some(b) = best {
            let mut bound = constant.clone();
            for (_, c) in objective.iter() {
                if c > &Rational::zero() {
                    bound += c;
                }
            }
            if bound < b.objective_value {
                return Ok(None);
            }
        }

        for (expr, c) in balance {
            lp.add_constraint(expr, Relation::Eq, -c);
        }
        for (k, (expr, c)) in mic.into_iter().enumerate() {
            if activation[k] {
                lp.add_constraint(expr, Relation::Ge, -c);
            }
        }
        let mut stages = vec![objective, volume];
        stages.extend(mcp.iter().map(|&v| LinearExpr::term(v, int(-1))));
        stages.extend(free.iter().flatten().map(|&v| LinearExpr::term(v, int(1))));
        self.stats.lp_solves += 1;
        let outcome = solve_lexicographic(&lp, &stages)?;
        if outcome.status != LpStatus::Optimal {
            return Ok(None);
        }

        let acceptance: IndexMap<String, Rational> = self
            .bids
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let y = match (&fixed[i], free[i]) {
                    (Some(y), _) => y.clone(),
                    (None, Some(v)) => outcome.value(v).clone(),
                    (None, None) => unreachable!(),
                };
                (b.id.to_string(), y)
            })
            .collect();
        let activation_map = instance
            .mic_orders
            .iter()
            .zip(activation)
            .map(|(o, a)| (o.id.clone(), *a))
            .collect();
        let prices = mcp.iter().map(|&v| outcome.value(v).clone()).collect();
        let mut result =
            ClearingResult::assemble(instance, self.variant, prices, acceptance, activation_map);
        debug_assert_eq!(result.objective_value, &outcome.objective + &constant);
        result.mcp_interval = (1..=instance.period_count)
            .map(|t| {
                feasible_price_interval(instance, &result, t).expect("oracle clearing has a price")
            })
            .collect();
        Ok(Some(result))
    }
}

/// Exact canonical optimum by exhaustive regime enumeration. An infeasible
/// instance yields an `Infeasible` result.
pub fn enumerate_clearings(
    instance: &MarketInstance,
    variant: ObjectiveVariant,
) -> Result<(ClearingResult, OracleStats), OracleError> {
    check_guard_rails(instance)?;
    let mut e = Enumerator::new(instance, variant);
    let c = instance.mic_orders.len();
    let mut best: Option<ClearingResult> = None;
    for mask in 0..(1u64 << c) {
        let activation: Vec<bool> = (0..c).map(|k| mask >> k & 1 == 1).collect();
        if let Some(candidate) = e.best_for(&activation)? {
            if best.as_ref().map_or(true, |b| {
                canonical_cmp(instance, &candidate, b) == Ordering::Greater
            }) {
                best = Some(candidate);
            }
        }
    }
    let result = best.unwrap_or_else(|| ClearingResult::infeasible(variant));
    Ok((result, e.stats))
}

/// Canonical optimum with every order's activation forced, or `None` when
/// that activation admits no clearing.
pub fn best_for_activation(
    instance: &MarketInstance,
    variant: ObjectiveVariant,
    activation: &[bool],
) -> Result<Option<ClearingResult>, OracleError> {
    check_guard_rails(instance)?;
    if activation.len() != instance.mic_orders.len() {
        return Err(OracleError::ActivationLength {
            expected: instance.mic_orders.len(),
            got: activation.len(),
        });
    }
    Enumerator::new(instance, variant).best_for(activation)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheckEntry {
    pub variant: ObjectiveVariant,
    pub milp_objective: Option<Rational>,
    pub oracle_objective: Option<Rational>,
    /// MILP minus oracle; `None` when either side is infeasible.
    pub delta: Option<Rational>,
    pub canonical_equal: bool,
    pub milp_violations: Vec<Violation>,
    pub oracle_violations: Vec<Violation>,
}

impl OracleCheckEntry {
    pub fn agrees(&self) -> bool {
        self.canonical_equal
            && self
                .delta
                .as_ref()
                .map_or(self.milp_objective.is_none(), |d| d.is_zero())
            && self.milp_violations.is_empty()
            && self.oracle_violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub entries: Vec<OracleCheckEntry>,
}

impl OracleReport {
    pub fn all_agree(&self) -> bool {
        self.entries.iter().all(OracleCheckEntry::agrees)
    }
}

/// Clears with the MILP and the oracle under both objective variants and
/// compares the canonical solutions.
pub fn oracle_check(instance: &MarketInstance) -> Result<OracleReport, OracleError> {
    let mut entries = Vec::new();
    for variant in ObjectiveVariant::ALL {
        let (oracle, _) = enumerate_clearings(instance, variant)?;
        let (milp, _) = milp::clear(instance, variant)?;
        let objective = |r: &ClearingResult| r.is_optimal().then(|| r.objective_value.clone());
        let violations = |r: &ClearingResult| {
            if r.is_optimal() {
                verify_clearing(instance, r, variant)
            } else {
                Vec::new()
            }
        };
        let (m, o) = (objective(&milp), objective(&oracle));
        entries.push(OracleCheckEntry {
            variant,
            delta: m.as_ref().zip(o.as_ref()).map(|(m, o)| m - o),
            milp_objective: m,
            oracle_objective: o,
            canonical_equal: milp == oracle,
            milp_violations: violations(&milp),
            oracle_violations: violations(&oracle),
        });
    }
    Ok(OracleReport { entries })
}
