//! Market data, clearing results and every economic quantity derived from a
//! candidate clearing.
//!
//! Nothing here depends on how a clearing was produced: the welfare
//! functions, surpluses, order accounting and [`verify_clearing`] all work on
//! any [`ClearingResult`], including hand-built hypothetical dispatches.
//!
//! Demand quantities are stored as positive magnitudes with a [`Side`] tag;
//! [`SimpleBid::signed_quantity`] gives the negative-demand convention used by
//! the welfare and balance formulas.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use indexmap::IndexMap;
use num_traits::{One, Signed, Zero};

use crate::rational::{Exact, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Supply,
    Demand,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Supply => "supply",
            Side::Demand => "demand",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleBid {
    pub id: String,
    pub side: Side,
    /// 1-based trading period.
    pub period: usize,
    /// Positive magnitude in MWh.
    pub quantity: Rational,
    /// EUR/MWh.
    pub price: Rational,
}

impl SimpleBid {
    pub fn supply(
        id: impl Into<String>,
        period: usize,
        quantity: Rational,
        price: Rational,
    ) -> Self {
        Self {
            id: id.into(),
            side: Side::Supply,
            period,
            quantity,
            price,
        }
    }

    pub fn demand(
        id: impl Into<String>,
        period: usize,
        quantity: Rational,
        price: Rational,
    ) -> Self {
        Self {
            id: id.into(),
            side: Side::Demand,
            period,
            quantity,
            price,
        }
    }

    /// `+q` for supply, `-q` for demand.
    pub fn signed_quantity(&self) -> Rational {
        match self.side {
            Side::Supply => self.quantity.clone(),
            Side::Demand => -self.quantity.clone(),
        }
    }
}

/// One hourly supply step of a MIC order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MicHourlyBid {
    pub id: String,
    pub order_id: String,
    pub period: usize,
    pub quantity: Rational,
    pub price: Rational,
}

impl MicHourlyBid {
    /// The owning order id is filled in by [`MicOrder::new`].
    pub fn new(id: impl Into<String>, period: usize, quantity: Rational, price: Rational) -> Self {
        Self {
            id: id.into(),
            order_id: String::new(),
            period,
            quantity,
            price,
        }
    }
}

/// Minimum income condition order: hourly supply steps that are activated or
/// rejected together, and that need their income to cover
/// `fixed_term + variable_term * accepted volume` when activated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MicOrder {
    pub id: String,
    pub fixed_term: Rational,
    pub variable_term: Rational,
    pub hourly_bids: Vec<MicHourlyBid>,
    /// Real cost terms used for profit analysis; invisible to the clearing.
    pub true_fixed_term: Option<Rational>,
    pub true_variable_term: Option<Rational>,
}

impl MicOrder {
    pub fn new(
        id: impl Into<String>,
        fixed_term: Rational,
        variable_term: Rational,
        hourly_bids: Vec<MicHourlyBid>,
    ) -> Self {
        let id = id.into();
        let hourly_bids = hourly_bids
            .into_iter()
            .map(|mut b| {
                b.order_id = id.clone();
                b
            })
            .collect();
        Self {
            id,
            fixed_term,
            variable_term,
            hourly_bids,
            true_fixed_term: None,
            true_variable_term: None,
        }
    }

    pub fn with_true_costs(mut self, fixed_term: Rational, variable_term: Rational) -> Self {
        self.true_fixed_term = Some(fixed_term);
        self.true_variable_term = Some(variable_term);
        self
    }

    pub fn real_fixed_term(&self) -> &Rational {
        self.true_fixed_term.as_ref().unwrap_or(&self.fixed_term)
    }

    pub fn real_variable_term(&self) -> &Rational {
        self.true_variable_term
            .as_ref()
            .unwrap_or(&self.variable_term)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketInstance {
    pub period_count: usize,
    pub simple_bids: Vec<SimpleBid>,
    pub mic_orders: Vec<MicOrder>,
    /// Overrides the default MCP upper bound (the highest bid price).
    pub mcp_upper_bound: Option<Rational>,
}

/// The bids of one period (`B_t`).
#[derive(Debug, Clone, Default)]
pub struct PeriodBids<'a> {
    pub simple: Vec<&'a SimpleBid>,
    pub mic: Vec<&'a MicHourlyBid>,
}

impl MarketInstance {
    pub fn new(
        period_count: usize,
        simple_bids: Vec<SimpleBid>,
        mic_orders: Vec<MicOrder>,
    ) -> Self {
        Self {
            period_count,
            simple_bids,
            mic_orders,
            mcp_upper_bound: None,
        }
    }

    pub fn bids_in_period(&self, period: usize) -> PeriodBids<'_> {
        PeriodBids {
            simple: self
                .simple_bids
                .iter()
                .filter(|b| b.period == period)
                .collect(),
            mic: self.mic_bids().filter(|b| b.period == period).collect(),
        }
    }

    pub fn mic_bids(&self) -> impl Iterator<Item = &MicHourlyBid> {
        self.mic_orders.iter().flat_map(|o| o.hourly_bids.iter())
    }

    pub fn order(&self, id: &str) -> Option<&MicOrder> {
        self.mic_orders.iter().find(|o| o.id == id)
    }

    pub fn order_mut(&mut self, id: &str) -> Option<&mut MicOrder> {
        self.mic_orders.iter_mut().find(|o| o.id == id)
    }

    /// Bid ids in canonical order: simple bids as listed, then MIC hourly
    /// bids order by order.
    pub fn bid_ids(&self) -> Vec<&str> {
        self.simple_bids
            .iter()
            .map(|b| b.id.as_str())
            .chain(self.mic_bids().map(|b| b.id.as_str()))
            .collect()
    }

    pub fn max_bid_price(&self) -> Rational {
        self.simple_bids
            .iter()
            .map(|b| &b.price)
            .chain(self.mic_bids().map(|b| &b.price))
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Override when present, otherwise the highest bid price.
    pub fn effective_mcp_upper(&self) -> Rational {
        self.mcp_upper_bound
            .clone()
            .unwrap_or_else(|| self.max_bid_price())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectiveVariant {
    /// Welfare of all hourly bids, MIC steps valued at their bid prices.
    HourlyTsw,
    /// MIC steps valued by the order's fixed and variable cost terms.
    MicCostTsw,
}

impl ObjectiveVariant {
    pub const ALL: [ObjectiveVariant; 2] =
        [ObjectiveVariant::HourlyTsw, ObjectiveVariant::MicCostTsw];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveVariant::HourlyTsw => "hourly",
            ObjectiveVariant::MicCostTsw => "mic",
        }
    }
}

impl fmt::Display for ObjectiveVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClearingStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl PriceInterval {
    pub fn contains(&self, value: &Rational) -> bool {
        &self.lo <= value && value <= &self.hi
    }
}

impl fmt::Display for PriceInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", Exact(&self.lo), Exact(&self.hi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClearingResult {
    pub status: ClearingStatus,
    pub objective_variant: ObjectiveVariant,
    /// Per period, index `t - 1`.
    pub mcp: Vec<Rational>,
    pub mcp_interval: Vec<PriceInterval>,
    pub acceptance: IndexMap<String, Rational>,
    pub activation: IndexMap<String, bool>,
    pub bid_income: IndexMap<String, Rational>,
    pub order_income: IndexMap<String, Rational>,
    pub objective_value: Rational,
}

impl ClearingResult {
    pub fn infeasible(variant: ObjectiveVariant) -> Self {
        Self {
            status: ClearingStatus::Infeasible,
            objective_variant: variant,
            mcp: Vec::new(),
            mcp_interval: Vec::new(),
            acceptance: IndexMap::new(),
            activation: IndexMap::new(),
            bid_income: IndexMap::new(),
            order_income: IndexMap::new(),
            objective_value: Rational::zero(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == ClearingStatus::Optimal
    }

    pub fn accepted(&self, bid_id: &str) -> Rational {
        self.acceptance
            .get(bid_id)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_active(&self, order: &MicOrder) -> bool {
        match self.activation.get(&order.id) {
            Some(active) => *active,
            None => order
                .hourly_bids
                .iter()
                .any(|b| !self.accepted(&b.id).is_zero()),
        }
    }

    /// Activation flags in instance order.
    pub fn activation_vector(&self, instance: &MarketInstance) -> Vec<bool> {
        instance
            .mic_orders
            .iter()
            .map(|o| self.is_active(o))
            .collect()
    }

    /// Builds a result from acceptances, activations and prices, deriving
    /// incomes (`y * q * MCP`, exact under the income implications) and the
    /// objective value. Price intervals are left empty.
    pub fn assemble(
        instance: &MarketInstance,
        variant: ObjectiveVariant,
        mcp: Vec<Rational>,
        acceptance: IndexMap<String, Rational>,
        activation: IndexMap<String, bool>,
    ) -> Self {
        let mut result = Self {
            status: ClearingStatus::Optimal,
            objective_variant: variant,
            mcp,
            mcp_interval: Vec::new(),
            acceptance,
            activation,
            bid_income: IndexMap::new(),
            order_income: IndexMap::new(),
            objective_value: Rational::zero(),
        };
        for order in &instance.mic_orders {
            let mut total = Rational::zero();
            for bid in &order.hourly_bids {
                let income = result.accepted(&bid.id) * &bid.quantity * &result.mcp[bid.period - 1];
                total += &income;
                result.bid_income.insert(bid.id.clone(), income);
            }
            result.order_income.insert(order.id.clone(), total);
        }
        result.objective_value =
            objective_value(instance, &result, variant).unwrap_or_else(|_| Rational::zero());
        result
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MarketError {
    #[error("no acceptance value for bid `{0}`")]
    MissingAcceptance(String),
    #[error("no activation value for order `{0}`")]
    MissingActivation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    InvalidPeriodCount,
    PeriodOutOfRange,
    NonPositiveQuantity,
    NegativePrice,
    NegativeCostTerm,
    DuplicateId,
    EmptyOrder,
    ForeignHourlyBid,
    SharedOrderPeriod,
    NegativeBound,
    NotOptimal,
    MissingEntry,
    AcceptanceBounds,
    Balance,
    SupplyPriceRule,
    DemandPriceRule,
    ComplexPriceRule,
    MinimumIncome,
    IncomeRule,
    IncomeTotal,
    Activation,
    NegativeMcp,
    ObjectiveMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub entity: String,
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    fn new(entity: impl Into<String>, kind: ViolationKind, detail: impl Into<String>) -> Self {
        Self {
            entity: entity.into(),
            kind,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}: {}", self.entity, self.kind, self.detail)
    }
}

/// Checks the structural invariants of an instance. An empty list means the
/// instance is valid.
pub fn validate_instance(instance: &MarketInstance) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    let t_max = instance.period_count;
    if t_max == 0 {
        out.push(Violation::new(
            "instance",
            InvalidPeriodCount,
            "period_count must be at least 1",
        ));
    }
    let mut seen = HashSet::new();
    let mut check_id = |id: &str, out: &mut Vec<Violation>| {
        if !seen.insert(id.to_string()) {
            out.push(Violation::new(
                id,
                DuplicateId,
                "identifier used more than once",
            ));
        }
    };
    let check_step = |id: &str,
                      period: usize,
                      quantity: &Rational,
                      price: &Rational,
                      out: &mut Vec<Violation>| {
        if period == 0 || period > t_max {
            out.push(Violation::new(
                id,
                PeriodOutOfRange,
                format!("period {period} outside [1, {t_max}]"),
            ));
        }
        if !quantity.is_positive() {
            out.push(Violation::new(
                id,
                NonPositiveQuantity,
                format!("quantity {} must be positive", Exact(quantity)),
            ));
        }
        if price.is_negative() {
            out.push(Violation::new(
                id,
                NegativePrice,
                format!("price {} must be non-negative", Exact(price)),
            ));
        }
    };
    for bid in &instance.simple_bids {
        check_id(&bid.id, &mut out);
        check_step(&bid.id, bid.period, &bid.quantity, &bid.price, &mut out);
    }
    for order in &instance.mic_orders {
        check_id(&order.id, &mut out);
        if order.hourly_bids.is_empty() {
            out.push(Violation::new(
                &order.id,
                EmptyOrder,
                "order has no hourly bids",
            ));
        }
        let terms = [
            ("fixed_term", Some(&order.fixed_term)),
            ("variable_term", Some(&order.variable_term)),
            ("true_fixed_term", order.true_fixed_term.as_ref()),
            ("true_variable_term", order.true_variable_term.as_ref()),
        ];
        for (name, value) in terms {
            if let Some(v) = value {
                if v.is_negative() {
                    out.push(Violation::new(
                        &order.id,
                        NegativeCostTerm,
                        format!("{name} {} is negative", Exact(v)),
                    ));
                }
            }
        }
        let mut periods = HashSet::new();
        for bid in &order.hourly_bids {
            check_id(&bid.id, &mut out);
            check_step(&bid.id, bid.period, &bid.quantity, &bid.price, &mut out);
            if bid.order_id != order.id {
                out.push(Violation::new(
                    &bid.id,
                    ForeignHourlyBid,
                    format!(
                        "references order `{}` but is listed under `{}`",
                        bid.order_id, order.id
                    ),
                ));
            }
            if !periods.insert(bid.period) {
                out.push(Violation::new(
                    &bid.id,
                    SharedOrderPeriod,
                    format!(
                        "order `{}` already has a bid in period {}",
                        order.id, bid.period
                    ),
                ));
            }
        }
    }
    if let Some(bound) = &instance.mcp_upper_bound {
        if bound.is_negative() {
            out.push(Violation::new(
                "instance",
                NegativeBound,
                "mcp_upper_bound must be non-negative",
            ));
        }
    }
    out
}

fn acceptance_of(result: &ClearingResult, id: &str) -> Result<Rational, MarketError> {
    result
        .acceptance
        .get(id)
        .cloned()
        .ok_or_else(|| MarketError::MissingAcceptance(id.to_string()))
}

/// Hourly-bid welfare: `-sum y q p` over all bids with signed quantities.
pub fn tsw_hourly(
    instance: &MarketInstance,
    result: &ClearingResult,
) -> Result<Rational, MarketError> {
    let mut total = Rational::zero();
    for bid in &instance.simple_bids {
        total -= acceptance_of(result, &bid.id)? * bid.signed_quantity() * &bid.price;
    }
    for bid in instance.mic_bids() {
        total -= acceptance_of(result, &bid.id)? * &bid.quantity * &bid.price;
    }
    Ok(total)
}

/// Welfare with MIC orders costed by their fixed and variable terms instead
/// of their hourly bid prices.
pub fn tsw_mic(
    instance: &MarketInstance,
    result: &ClearingResult,
) -> Result<Rational, MarketError> {
    let mut total = Rational::zero();
    for bid in &instance.simple_bids {
        total -= acceptance_of(result, &bid.id)? * bid.signed_quantity() * &bid.price;
    }
    for order in &instance.mic_orders {
        let active = *result
            .activation
            .get(&order.id)
            .ok_or_else(|| MarketError::MissingActivation(order.id.clone()))?;
        if active {
            total -= &order.fixed_term;
        }
        for bid in &order.hourly_bids {
            total -= acceptance_of(result, &bid.id)? * &bid.quantity * &order.variable_term;
        }
    }
    Ok(total)
}

pub fn objective_value(
    instance: &MarketInstance,
    result: &ClearingResult,
    variant: ObjectiveVariant,
) -> Result<Rational, MarketError> {
    match variant {
        ObjectiveVariant::HourlyTsw => tsw_hourly(instance, result),
        ObjectiveVariant::MicCostTsw => tsw_mic(instance, result),
    }
}

/// Consumer and producer surplus at the cleared prices. The consumer surplus
/// carries a leading minus so that it is non-negative under the
/// negative-demand convention, which makes `CS + PS` equal the hourly welfare
/// whenever every period balances.
pub fn surpluses(instance: &MarketInstance, result: &ClearingResult) -> (Rational, Rational) {
    let mut cs = Rational::zero();
    let mut ps = Rational::zero();
    let price = |t: usize| {
        result
            .mcp
            .get(t - 1)
            .cloned()
            .unwrap_or_else(Rational::zero)
    };
    for bid in &instance.simple_bids {
        let y = result.accepted(&bid.id);
        match bid.side {
            Side::Demand => cs -= y * bid.signed_quantity() * (&bid.price - price(bid.period)),
            Side::Supply => ps += y * &bid.quantity * (price(bid.period) - &bid.price),
        }
    }
    for bid in instance.mic_bids() {
        ps += result.accepted(&bid.id) * &bid.quantity * (price(bid.period) - &bid.price);
    }
    (cs, ps)
}

/// Accepted volume of an order's hourly bids.
pub fn order_volume(order: &MicOrder, result: &ClearingResult) -> Rational {
    order.hourly_bids.iter().fold(Rational::zero(), |acc, b| {
        acc + result.accepted(&b.id) * &b.quantity
    })
}

pub fn order_income(order: &MicOrder, result: &ClearingResult) -> Rational {
    match result.order_income.get(&order.id) {
        Some(v) => v.clone(),
        None => order
            .hourly_bids
            .iter()
            .filter_map(|b| result.bid_income.get(&b.id))
            .fold(Rational::zero(), |acc, v| acc + v),
    }
}

/// Declared cost `FT + VT * volume`, or zero for a deactivated order.
pub fn order_cost(order: &MicOrder, result: &ClearingResult) -> Rational {
    if !result.is_active(order) {
        return Rational::zero();
    }
    &order.fixed_term + &order.variable_term * order_volume(order, result)
}

/// True when the order is deactivated or its income covers its declared cost.
pub fn mic_satisfied(order: &MicOrder, result: &ClearingResult) -> bool {
    if !result.is_active(order) || order_volume(order, result).is_zero() {
        return true;
    }
    order_income(order, result) >= order_cost(order, result)
}

/// Income minus the real production cost (true cost terms).
pub fn real_profit(order: &MicOrder, result: &ClearingResult) -> Rational {
    if !result.is_active(order) {
        return Rational::zero();
    }
    let cost = order.real_fixed_term() + order.real_variable_term() * order_volume(order, result);
    order_income(order, result) - cost
}

/// Total traded volume (accepted demand).
pub fn traded_volume(instance: &MarketInstance, result: &ClearingResult) -> Rational {
    instance
        .simple_bids
        .iter()
        .filter(|b| b.side == Side::Demand)
        .fold(Rational::zero(), |acc, b| {
            acc + result.accepted(&b.id) * &b.quantity
        })
}

/// Exact check of every clearing rule against `result`. Empty means valid.
pub fn verify_clearing(
    instance: &MarketInstance,
    result: &ClearingResult,
    variant: ObjectiveVariant,
) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    if !result.is_optimal() {
        out.push(Violation::new(
            "result",
            NotOptimal,
            "result carries no clearing",
        ));
        return out;
    }
    if result.mcp.len() != instance.period_count {
        out.push(Violation::new(
            "result",
            MissingEntry,
            format!(
                "{} prices for {} periods",
                result.mcp.len(),
                instance.period_count
            ),
        ));
        return out;
    }
    for (i, p) in result.mcp.iter().enumerate() {
        if p.is_negative() {
            out.push(Violation::new(
                format!("MCP{}", i + 1),
                NegativeMcp,
                format!("{} < 0", Exact(p)),
            ));
        }
    }
    let mcp = |t: usize| &result.mcp[t - 1];
    let mut balance = vec![Rational::zero(); instance.period_count];
    let acceptance = |id: &str, out: &mut Vec<Violation>| -> Option<Rational> {
        match result.acceptance.get(id) {
            None => {
                out.push(Violation::new(id, MissingEntry, "no acceptance value"));
                None
            }
            Some(y) => {
                if y.is_negative() || y > &Rational::one() {
                    out.push(Violation::new(
                        id,
                        AcceptanceBounds,
                        format!("acceptance {} outside [0, 1]", Exact(y)),
                    ));
                }
                Some(y.clone())
            }
        }
    };

    for bid in &instance.simple_bids {
        let Some(y) = acceptance(&bid.id, &mut out) else {
            continue;
        };
        balance[bid.period - 1] += &y * bid.signed_quantity();
        let price = mcp(bid.period);
        let (positive_ok, partial_ok, kind) = match bid.side {
            Side::Supply => (&bid.price <= price, price <= &bid.price, SupplyPriceRule),
            Side::Demand => (price <= &bid.price, &bid.price <= price, DemandPriceRule),
        };
        if y.is_positive() && !positive_ok {
            out.push(Violation::new(
                &bid.id,
                kind,
                format!(
                    "accepted {} at price {} against MCP {}",
                    Exact(&y),
                    Exact(&bid.price),
                    Exact(price)
                ),
            ));
        }
        if y < Rational::one() && !partial_ok {
            out.push(Violation::new(
                &bid.id,
                kind,
                format!(
                    "not fully accepted ({}) at price {} against MCP {}",
                    Exact(&y),
                    Exact(&bid.price),
                    Exact(price)
                ),
            ));
        }
    }

    for order in &instance.mic_orders {
        let active = match result.activation.get(&order.id) {
            Some(a) => *a,
            None => {
                out.push(Violation::new(
                    &order.id,
                    MissingEntry,
                    "no activation value",
                ));
                continue;
            }
        };
        let mut volume = Rational::zero();
        let mut acceptance_sum = Rational::zero();
        let mut income_sum = Rational::zero();
        for bid in &order.hourly_bids {
            let Some(y) = acceptance(&bid.id, &mut out) else {
                continue;
            };
            balance[bid.period - 1] += &y * &bid.quantity;
            volume += &y * &bid.quantity;
            acceptance_sum += &y;
            let price = mcp(bid.period);
            if y.is_positive() && &bid.price > price {
                out.push(Violation::new(
                    &bid.id,
                    ComplexPriceRule,
                    format!(
                        "accepted {} at price {} against MCP {}",
                        Exact(&y),
                        Exact(&bid.price),
                        Exact(price)
                    ),
                ));
            }
            if !active && !y.is_zero() {
                out.push(Violation::new(
                    &bid.id,
                    Activation,
                    "accepted although its order is deactivated",
                ));
            }
            let Some(income) = result.bid_income.get(&bid.id) else {
                out.push(Violation::new(&bid.id, MissingEntry, "no income value"));
                continue;
            };
            income_sum += income;
            let partial_income = &y * &bid.quantity * &bid.price;
            if y.is_positive() {
                let expected = &partial_income + &bid.quantity * price - &bid.quantity * &bid.price;
                if income != &expected {
                    out.push(Violation::new(
                        &bid.id,
                        IncomeRule,
                        format!(
                            "income {} but accepted bid requires {}",
                            Exact(income),
                            Exact(&expected)
                        ),
                    ));
                }
            }
            if y < Rational::one() && income != &partial_income {
                out.push(Violation::new(
                    &bid.id,
                    IncomeRule,
                    format!(
                        "income {} but unfilled bid requires {}",
                        Exact(income),
                        Exact(&partial_income)
                    ),
                ));
            }
        }
        match result.order_income.get(&order.id) {
            None => out.push(Violation::new(&order.id, MissingEntry, "no order income")),
            Some(total) if total != &income_sum => out.push(Violation::new(
                &order.id,
                IncomeTotal,
                format!(
                    "order income {} differs from bid incomes {}",
                    Exact(total),
                    Exact(&income_sum)
                ),
            )),
            Some(_) => {}
        }
        if active && acceptance_sum.is_zero() {
            out.push(Violation::new(
                &order.id,
                Activation,
                "activated with zero accepted volume",
            ));
        }
        if acceptance_sum.is_positive() {
            let cost = &order.fixed_term + &order.variable_term * &volume;
            if income_sum < cost {
                out.push(Violation::new(
                    &order.id,
                    MinimumIncome,
                    format!("income {} below cost {}", Exact(&income_sum), Exact(&cost)),
                ));
            }
        }
    }

    for (i, net) in balance.iter().enumerate() {
        if !net.is_zero() {
            out.push(Violation::new(
                format!("period {}", i + 1),
                Balance,
                format!("net injection {} (supply minus demand)", Exact(net)),
            ));
        }
    }

    if let Ok(expected) = objective_value(instance, result, variant) {
        if expected != result.objective_value {
            out.push(Violation::new(
                "result",
                ObjectiveMismatch,
                format!(
                    "reported objective {} but bids give {}",
                    Exact(&result.objective_value),
                    Exact(&expected)
                ),
            ));
        }
    }
    out
}

/// The closed interval of `MCP_t` values consistent with the result's
/// acceptances and activations, holding the other periods' prices at their
/// reported values. `None` when no price works.
pub fn feasible_price_interval(
    instance: &MarketInstance,
    result: &ClearingResult,
    period: usize,
) -> Option<PriceInterval> {
    let mut lo = Rational::zero();
    let mut hi = instance.effective_mcp_upper();
    let raise = |lo: &mut Rational, v: &Rational| {
        if v > lo {
            *lo = v.clone();
        }
    };
    let lower = |hi: &mut Rational, v: &Rational| {
        if v < hi {
            *hi = v.clone();
        }
    };
    let bids = instance.bids_in_period(period);
    for bid in &bids.simple {
        let y = result.accepted(&bid.id);
        let partial = y < Rational::one();
        match bid.side {
            Side::Supply => {
                if y.is_positive() {
                    raise(&mut lo, &bid.price);
                }
                if partial {
                    lower(&mut hi, &bid.price);
                }
            }
            Side::Demand => {
                if y.is_positive() {
                    lower(&mut hi, &bid.price);
                }
                if partial {
                    raise(&mut lo, &bid.price);
                }
            }
        }
    }
    for bid in &bids.mic {
        let y = result.accepted(&bid.id);
        if y.is_positive() {
            raise(&mut lo, &bid.price);
            if y < Rational::one() {
                lower(&mut hi, &bid.price);
            }
        }
    }
    for order in &instance.mic_orders {
        if !result.is_active(order) || order_volume(order, result).is_zero() {
            continue;
        }
        // income = full_q * MCP_t + fixed part
        let mut full_q = Rational::zero();
        let mut other = Rational::zero();
        for bid in &order.hourly_bids {
            let y = result.accepted(&bid.id);
            if bid.period == period && y == Rational::one() {
                full_q += &bid.quantity;
            } else if bid.period == period {
                other += &y * &bid.quantity * &bid.price;
            } else {
                other += &y * &bid.quantity * &result.mcp[bid.period - 1];
            }
        }
        let needed = &order.fixed_term + &order.variable_term * order_volume(order, result) - other;
        if full_q.is_zero() {
            if needed.is_positive() {
                return None;
            }
        } else {
            raise(&mut lo, &(needed / full_q));
        }
    }
    (lo <= hi).then_some(PriceInterval { lo, hi })
}

/// Deterministic preference among equally optimal clearings: higher
/// objective, then more traded volume, then the lexicographically smaller
/// price vector, then the smaller activation vector (instance order), then
/// the lexicographically larger acceptance vector (canonical bid order).
/// `Greater` means `a` is preferred.
pub fn canonical_cmp(
    instance: &MarketInstance,
    a: &ClearingResult,
    b: &ClearingResult,
) -> Ordering {
    a.objective_value
        .cmp(&b.objective_value)
        .then_with(|| traded_volume(instance, a).cmp(&traded_volume(instance, b)))
        .then_with(|| b.mcp.cmp(&a.mcp))
        .then_with(|| {
            b.activation_vector(instance)
                .cmp(&a.activation_vector(instance))
        })
        .then_with(|| {
            instance
                .bid_ids()
                .into_iter()
                .map(|id| a.accepted(id).cmp(&b.accepted(id)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoint {
    pub bid_id: String,
    pub cumulative_quantity: Rational,
    pub price: Rational,
}

/// Cumulative supply (ascending price) and demand (descending price) step
/// curves of one period. With a result, hourly bids of deactivated MIC
/// orders are left out.
pub fn build_curves(
    instance: &MarketInstance,
    period: usize,
    result: Option<&ClearingResult>,
) -> (Vec<CurvePoint>, Vec<CurvePoint>) {
    let bids = instance.bids_in_period(period);
    let mut supply: Vec<(&str, &Rational, &Rational)> = bids
        .simple
        .iter()
        .filter(|b| b.side == Side::Supply)
        .map(|b| (b.id.as_str(), &b.quantity, &b.price))
        .collect();
    for bid in &bids.mic {
        let included = match result {
            None => true,
            Some(r) => instance
                .order(&bid.order_id)
                .map_or(true, |o| r.is_active(o)),
        };
        if included {
            supply.push((bid.id.as_str(), &bid.quantity, &bid.price));
        }
    }
    let mut demand: Vec<(&str, &Rational, &Rational)> = bids
        .simple
        .iter()
        .filter(|b| b.side == Side::Demand)
        .map(|b| (b.id.as_str(), &b.quantity, &b.price))
        .collect();
    supply.sort_by(|a, b| a.2.cmp(b.2));
    demand.sort_by(|a, b| b.2.cmp(a.2));
    let accumulate = |steps: Vec<(&str, &Rational, &Rational)>| {
        let mut total = Rational::zero();
        steps
            .into_iter()
            .map(|(id, q, p)| {
                total += q;
                CurvePoint {
                    bid_id: id.to_string(),
                    cumulative_quantity: total.clone(),
                    price: p.clone(),
                }
            })
            .collect::<Vec<_>>()
    };
    (accumulate(supply), accumulate(demand))
}
