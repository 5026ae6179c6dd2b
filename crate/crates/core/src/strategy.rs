//! The published two-period examples and the experiments run on them:
//! scenario clearing with per-order accounting, fixed-term sweeps,
//! paradoxical-rejection flags, optimum multiplicity and objective
//! comparison.

use num_traits::{Signed, Zero};

use crate::market::{
    mic_satisfied, order_cost, order_income, order_volume, real_profit, surpluses, tsw_hourly,
    tsw_mic, ClearingResult, MarketInstance, MicHourlyBid, MicOrder, ObjectiveVariant, SimpleBid,
};
use crate::milp::{self, BnbStats, MilpError};
use crate::oracle::{self, OracleError};
use crate::rational::{int, ratio, to_fraction_string, Exact, Rational};

/// Bids of the two-period example with two MIC orders. `c1` submits
/// `fixed_term_c1`; both orders really cost FT 10 and VT 2.
pub fn table1_instance(fixed_term_c1: Rational) -> MarketInstance {
    table_instance(int(1), fixed_term_c1)
}

/// The second example: `c1`'s hourly bids priced at 5.5, truthful terms.
pub fn table2_instance() -> MarketInstance {
    table_instance(ratio(11, 2), int(10))
}

fn table_instance(c1_price: Rational, fixed_term_c1: Rational) -> MarketInstance {
    let simple = vec![
        SimpleBid::supply("S1", 1, int(2), int(5)),
        SimpleBid::supply("S2", 1, int(2), int(6)),
        SimpleBid::supply("S3", 2, int(2), int(5)),
        SimpleBid::supply("S4", 2, int(2), int(6)),
        SimpleBid::demand("D1", 1, int(5), int(10)),
        SimpleBid::demand("D2", 2, int(5), int(10)),
    ];
    let c1 = MicOrder::new(
        "c1",
        fixed_term_c1,
        int(2),
        vec![
            MicHourlyBid::new("S5", 1, int(2), c1_price.clone()),
            MicHourlyBid::new("S6", 2, int(2), c1_price),
        ],
    )
    .with_true_costs(int(10), int(2));
    let c2 = MicOrder::new(
        "c2",
        int(10),
        int(2),
        vec![
            MicHourlyBid::new("S7", 1, int(2), int(4)),
            MicHourlyBid::new("S8", 2, int(2), int(4)),
        ],
    )
    .with_true_costs(int(10), int(2));
    MarketInstance::new(2, simple, vec![c1, c2])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub instance: MarketInstance,
    pub variant: ObjectiveVariant,
    pub notes: String,
    /// Order whose profit the experiment tracks.
    pub strategist: String,
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    let scenario = |name: &str, instance, variant, notes: &str| Scenario {
        name: name.to_string(),
        instance,
        variant,
        notes: notes.to_string(),
        strategist: "c1".to_string(),
    };
    vec![
        scenario(
            "case1",
            table1_instance(int(10)),
            ObjectiveVariant::HourlyTsw,
            "truthful fixed terms, hourly welfare objective",
        ),
        scenario(
            "case2",
            table1_instance(int(14)),
            ObjectiveVariant::HourlyTsw,
            "c1 overstates its fixed term (14 instead of 10), hourly welfare objective",
        ),
        scenario(
            "case1_mod",
            table1_instance(int(10)),
            ObjectiveVariant::MicCostTsw,
            "truthful fixed terms, MIC orders costed by their fixed and variable terms",
        ),
        scenario(
            "case2_mod",
            table1_instance(int(14)),
            ObjectiveVariant::MicCostTsw,
            "c1 overstates its fixed term, MIC orders costed by their fixed and variable terms",
        ),
        scenario(
            "case3",
            table2_instance(),
            ObjectiveVariant::MicCostTsw,
            "c1 raises its hourly prices to 5.5, MIC orders costed by their fixed and variable terms",
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("unknown MIC order `{0}`")]
    UnknownOrder(String),
    #[error("sweep range [{}, {}] is empty or negative", Exact(.from), Exact(.to))]
    InvalidRange { from: Rational, to: Rational },
    #[error("no feasible clearing at fixed term {}", Exact(.0))]
    InfeasibleAt(Rational),
    #[error("clearing outcome keeps changing just above fixed term {}", Exact(.0))]
    UnstableOutcome(Rational),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderAnalysis {
    pub order_id: String,
    pub active: bool,
    pub volume: Rational,
    pub income: Rational,
    pub cost: Rational,
    /// Income minus declared cost.
    pub mic_slack: Rational,
    pub mic_satisfied: bool,
    pub real_profit: Rational,
    pub paradoxically_rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioAnalysis {
    pub tsw_hourly: Rational,
    pub tsw_mic: Rational,
    pub consumer_surplus: Rational,
    pub producer_surplus: Rational,
    pub orders: Vec<OrderAnalysis>,
    pub stats: BnbStats,
}

impl ScenarioAnalysis {
    pub fn order(&self, id: &str) -> Option<&OrderAnalysis> {
        self.orders.iter().find(|o| o.order_id == id)
    }
}

/// Per-order accounting of a result. Empty for an infeasible result.
pub fn analyse(instance: &MarketInstance, result: &ClearingResult) -> Vec<OrderAnalysis> {
    if !result.is_optimal() {
        return Vec::new();
    }
    let flagged = detect_paradoxical_rejection(instance, result);
    instance
        .mic_orders
        .iter()
        .map(|order| {
            let income = order_income(order, result);
            let cost = order_cost(order, result);
            OrderAnalysis {
                order_id: order.id.clone(),
                active: result.is_active(order),
                volume: order_volume(order, result),
                mic_slack: &income - &cost,
                income,
                cost,
                mic_satisfied: mic_satisfied(order, result),
                real_profit: real_profit(order, result),
                paradoxically_rejected: flagged.contains(&order.id),
            }
        })
        .collect()
}

pub fn run_scenario(
    scenario: &Scenario,
) -> Result<(ClearingResult, ScenarioAnalysis), StrategyError> {
    let (result, stats) = milp::clear(&scenario.instance, scenario.variant)?;
    let zero = Rational::zero;
    let analysis = if result.is_optimal() {
        let (cs, ps) = surpluses(&scenario.instance, &result);
        ScenarioAnalysis {
            tsw_hourly: tsw_hourly(&scenario.instance, &result).unwrap_or_else(|_| zero()),
            tsw_mic: tsw_mic(&scenario.instance, &result).unwrap_or_else(|_| zero()),
            consumer_surplus: cs,
            producer_surplus: ps,
            orders: analyse(&scenario.instance, &result),
            stats,
        }
    } else {
        ScenarioAnalysis {
            tsw_hourly: zero(),
            tsw_mic: zero(),
            consumer_surplus: zero(),
            producer_surplus: zero(),
            orders: Vec::new(),
            stats,
        }
    };
    Ok((result, analysis))
}

pub fn scenario_by_name(name: &str) -> Result<Scenario, StrategyError> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| StrategyError::UnknownScenario(name.to_string()))
}

/// Deactivated orders whose bids all look acceptable at the cleared prices
/// and whose full acceptance at those prices would cover their declared
/// cost. The flag describes appearance only: accepting such an order may
/// still be impossible without breaking balance or price consistency.
pub fn detect_paradoxical_rejection(
    instance: &MarketInstance,
    result: &ClearingResult,
) -> Vec<String> {
    if !result.is_optimal() {
        return Vec::new();
    }
    instance
        .mic_orders
        .iter()
        .filter(|order| !result.is_active(order))
        .filter(|order| {
            let mut income = Rational::zero();
            let mut volume = Rational::zero();
            for bid in &order.hourly_bids {
                let price = &result.mcp[bid.period - 1];
                if &bid.price > price {
                    return false;
                }
                income += &bid.quantity * price;
                volume += &bid.quantity;
            }
            income >= &order.fixed_term + &order.variable_term * volume
        })
        .map(|order| order.id.clone())
        .collect()
}

/// `constant + slope * FT`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub constant: Rational,
    pub slope: Rational,
}

impl Affine {
    pub fn constant(value: Rational) -> Self {
        Self {
            constant: value,
            slope: Rational::zero(),
        }
    }

    /// Line through `(x1, v1)` and `(x2, v2)`; `x1 != x2`.
    fn through(x1: &Rational, v1: &Rational, x2: &Rational, v2: &Rational) -> Self {
        let slope = (v2 - v1) / (x2 - x1);
        Self {
            constant: v1 - &slope * x1,
            slope,
        }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.constant + &self.slope * x
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }
}

impl std::fmt::Display for Affine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_constant() {
            return write!(f, "{}", Exact(&self.constant));
        }
        let sign = if self.slope.is_negative() { '-' } else { '+' };
        let slope = self.slope.abs();
        let slope = if slope == int(1) {
            String::new()
        } else {
            format!("{}*", to_fraction_string(&slope))
        };
        write!(f, "{} {sign} {slope}FT", to_fraction_string(&self.constant))
    }
}

/// What the sweep tracks at a single fixed term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub activation: Vec<(String, bool)>,
    pub mcp: Vec<Rational>,
    pub strategist_profit: Rational,
}

/// Outcome over a window: prices and profit may move linearly with the
/// fixed term while a MIC constraint is binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSummary {
    pub activation: Vec<(String, bool)>,
    pub mcp: Vec<Affine>,
    pub strategist_profit: Affine,
}

impl OutcomeSummary {
    fn constant(o: &Outcome) -> Self {
        Self {
            activation: o.activation.clone(),
            mcp: o.mcp.iter().cloned().map(Affine::constant).collect(),
            strategist_profit: Affine::constant(o.strategist_profit.clone()),
        }
    }

    /// Summary through two outcomes with equal activations.
    fn through(x1: &Rational, o1: &Outcome, x2: &Rational, o2: &Outcome) -> Option<Self> {
        if o1.activation != o2.activation {
            return None;
        }
        Some(Self {
            activation: o1.activation.clone(),
            mcp: o1
                .mcp
                .iter()
                .zip(&o2.mcp)
                .map(|(a, b)| Affine::through(x1, a, x2, b))
                .collect(),
            strategist_profit: Affine::through(
                x1,
                &o1.strategist_profit,
                x2,
                &o2.strategist_profit,
            ),
        })
    }

    pub fn at(&self, fixed_term: &Rational) -> Outcome {
        Outcome {
            activation: self.activation.clone(),
            mcp: self.mcp.iter().map(|p| p.at(fixed_term)).collect(),
            strategist_profit: self.strategist_profit.at(fixed_term),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepWindow {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub summary: OutcomeSummary,
}

impl SweepWindow {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed {
            x >= &self.lo
        } else {
            x > &self.lo
        };
        let below = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        above && below
    }
}

impl std::fmt::Display for SweepWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            Exact(&self.lo),
            Exact(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub order_id: String,
    /// Always `fixed_term`.
    pub field: String,
    pub variant: ObjectiveVariant,
    pub from: Rational,
    pub to: Rational,
    pub breakpoints: Vec<Rational>,
    pub windows: Vec<SweepWindow>,
}

const MAX_PROBES: usize = 48;
const GERM_ATTEMPTS: usize = 8;
const MAX_STEPS: usize = 4096;

struct Sweeper<'a> {
    base: MarketInstance,
    order_id: &'a str,
    variant: ObjectiveVariant,
    to: Rational,
    /// Best MIC-cost objective with the strategist forced off; it does not
    /// depend on the strategist's fixed term.
    off_objective: Option<Rational>,
    /// Probe offset as a fraction of the remaining range.
    resolution: Rational,
}

/// An affine piece found just right of some point: its summary, the probe
/// nearest that point and the clearing there.
struct Germ {
    summary: OutcomeSummary,
    near: Rational,
    result: ClearingResult,
    /// Quantities moving along the piece with the bounds they cannot cross.
    moving: Vec<(Affine, Option<Rational>, Option<Rational>)>,
}

impl Sweeper<'_> {
    fn order(&self) -> &MicOrder {
        self.base.order(self.order_id).expect("checked")
    }

    fn instance_at(&self, fixed_term: &Rational) -> MarketInstance {
        let mut inst = self.base.clone();
        inst.order_mut(self.order_id).expect("checked").fixed_term = fixed_term.clone();
        inst
    }

    fn clear_at(&self, fixed_term: &Rational) -> Result<ClearingResult, StrategyError> {
        let (r, _) = milp::clear(&self.instance_at(fixed_term), self.variant)?;
        if !r.is_optimal() {
            return Err(StrategyError::InfeasibleAt(fixed_term.clone()));
        }
        Ok(r)
    }

    fn outcome(&self, result: &ClearingResult) -> Outcome {
        Outcome {
            activation: result
                .activation
                .iter()
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            mcp: result.mcp.clone(),
            strategist_profit: real_profit(self.order(), result),
        }
    }

    fn outcome_at(&self, fixed_term: &Rational) -> Result<Outcome, StrategyError> {
        Ok(self.outcome(&self.clear_at(fixed_term)?))
    }

    /// The affine piece just right of `x`, from clearings at `x + d`,
    /// `x + 2d` and `x + 4d` for a tiny `d`. `anchor` is the outcome at `x`
    /// itself when the piece may start there.
    fn germ(&self, x: &Rational, anchor: Option<&Outcome>) -> Result<Germ, StrategyError> {
        let mut d = &self.resolution * (&self.to - x);
        for _ in 0..GERM_ATTEMPTS {
            let p1 = x + &d;
            let p2 = x + &d * int(2);
            let p4 = x + &d * int(4);
            let r1 = self.clear_at(&p1)?;
            let r2 = self.clear_at(&p2)?;
            let o1 = self.outcome(&r1);
            let o2 = self.outcome(&r2);
            let o4 = self.outcome_at(&p4)?;
            let fits = |s: &OutcomeSummary| s.at(&p2) == o2 && s.at(&p4) == o4;
            let anchored = anchor
                .and_then(|o| OutcomeSummary::through(x, o, &p1, &o1))
                .filter(|s| fits(s));
            let summary = anchored
                .or_else(|| OutcomeSummary::through(&p1, &o1, &p2, &o2).filter(|s| fits(s)));
            if let Some(summary) = summary {
                let moving = self.moving(&p1, &r1, &p2, &r2);
                return Ok(Germ {
                    summary,
                    near: p1,
                    result: r1,
                    moving,
                });
            }
            d /= int(8);
        }
        Err(StrategyError::UnstableOutcome(x.clone()))
    }

    fn moving(
        &self,
        p1: &Rational,
        r1: &ClearingResult,
        p2: &Rational,
        r2: &ClearingResult,
    ) -> Vec<(Affine, Option<Rational>, Option<Rational>)> {
        let mut out = Vec::new();
        for (t, iv) in r1.mcp_interval.iter().enumerate() {
            let line = Affine::through(p1, &r1.mcp[t], p2, &r2.mcp[t]);
            out.push((line, Some(iv.lo.clone()), Some(iv.hi.clone())));
        }
        for (id, y) in &r1.acceptance {
            let line = Affine::through(p1, y, p2, &r2.accepted(id));
            out.push((line, Some(Rational::zero()), Some(int(1))));
        }
        let (i1, i2) = (self.instance_at(p1), self.instance_at(p2));
        for (o1, o2) in i1.mic_orders.iter().zip(&i2.mic_orders) {
            if r1.is_active(o1) && r2.is_active(o2) {
                let slack1 = order_income(o1, r1) - order_cost(o1, r1);
                let slack2 = order_income(o2, r2) - order_cost(o2, r2);
                out.push((Affine::through(p1, &slack1, p2, &slack2), Some(Rational::zero()), None));
            }
        }
        if r1.is_active(self.order()) {
            // the objective may not sink below the best clearing without
            // the strategist
            let line = Affine::through(p1, &r1.objective_value, p2, &r2.objective_value);
            out.push((line, self.off_objective.clone(), None));
        }
        out.retain(|(line, _, _)| !line.is_constant());
        out
    }

    /// First fixed term past `germ.near` where the piece can end: the
    /// strategist's income limit, or a moving price, acceptance or
    /// objective reaching its bound.
    fn piece_end(&self, germ: &Germ) -> Rational {
        let order = self.order();
        let r = &germ.result;
        let mut candidates = vec![self.to.clone()];
        if r.is_active(order) && !r.mcp_interval.is_empty() {
            let mut top_income = Rational::zero();
            for bid in &order.hourly_bids {
                top_income +=
                    r.accepted(&bid.id) * &bid.quantity * &r.mcp_interval[bid.period - 1].hi;
            }
            candidates.push(top_income - &order.variable_term * order_volume(order, r));
        }
        for (line, lo, hi) in &germ.moving {
            let bound = if line.slope.is_positive() { hi } else { lo };
            if let Some(b) = bound {
                candidates.push((b - &line.constant) / &line.slope);
            }
        }
        candidates
            .into_iter()
            .filter(|c| c > &germ.near)
            .min()
            .unwrap_or_else(|| self.to.clone())
    }
}

/// Sweeps the submitted fixed term of `order_id` over `[from, to]` and
/// reports the windows on which the outcome is one affine piece. The order's
/// real cost terms are pinned to their current values so profits stay
/// comparable.
pub fn ft_sweep(
    instance: &MarketInstance,
    order_id: &str,
    from: &Rational,
    to: &Rational,
    variant: ObjectiveVariant,
) -> Result<SweepReport, StrategyError> {
    if from > to || from < &Rational::zero() {
        return Err(StrategyError::InvalidRange {
            from: from.clone(),
            to: to.clone(),
        });
    }
    let mut base = instance.clone();
    let order = base
        .order_mut(order_id)
        .ok_or_else(|| StrategyError::UnknownOrder(order_id.to_string()))?;
    order
        .true_fixed_term
        .get_or_insert_with(|| order.fixed_term.clone());
    order
        .true_variable_term
        .get_or_insert_with(|| order.variable_term.clone());
    let mut sweeper = Sweeper {
        base,
        order_id,
        variant,
        to: to.clone(),
        off_objective: None,
        resolution: ratio(1, 1 << 20),
    };
    if variant == ObjectiveVariant::MicCostTsw {
        let inst = sweeper.instance_at(from);
        let activation: Vec<Option<bool>> = inst
            .mic_orders
            .iter()
            .map(|o| (o.id == order_id).then_some(false))
            .collect();
        let (r, _) = milp::clear_with_activation(&inst, variant, &activation)?;
        sweeper.off_objective = r.is_optimal().then_some(r.objective_value);
    }

    let mut windows: Vec<SweepWindow> = Vec::new();
    let mut x = from.clone();
    // outcome at `x` when `x` itself is not yet covered by a window
    let mut pending = Some(sweeper.outcome_at(from)?);
    for _ in 0..MAX_STEPS {
        if &x == to {
            if let Some(o) = pending.take() {
                windows.push(SweepWindow {
                    lo: x.clone(),
                    hi: x.clone(),
                    lo_closed: true,
                    hi_closed: true,
                    summary: OutcomeSummary::constant(&o),
                });
            }
            break;
        }
        let germ = sweeper.germ(&x, pending.as_ref())?;
        let mut lo_closed = false;
        if let Some(o) = pending.take() {
            if germ.summary.at(&x) == o {
                lo_closed = true;
            } else {
                windows.push(SweepWindow {
                    lo: x.clone(),
                    hi: x.clone(),
                    lo_closed: true,
                    hi_closed: true,
                    summary: OutcomeSummary::constant(&o),
                });
            }
        }
        let mut end = sweeper.piece_end(&germ);
        let mut checks = 0;
        loop {
            let mid = (&germ.near + &end) / int(2);
            if sweeper.outcome_at(&mid)? == germ.summary.at(&mid) {
                break;
            }
            checks += 1;
            if checks == MAX_PROBES {
                return Err(StrategyError::UnstableOutcome(x));
            }
            end = mid;
        }
        let at_end = sweeper.outcome_at(&end)?;
        let hi_closed = at_end == germ.summary.at(&end);
        windows.push(SweepWindow {
            lo: x,
            hi: end.clone(),
            lo_closed,
            hi_closed,
            summary: germ.summary,
        });
        if !hi_closed {
            pending = Some(at_end);
        } else if &end == to {
            x = end;
            break;
        }
        x = end;
    }
    if &x != to || pending.is_some() {
        return Err(StrategyError::UnstableOutcome(x));
    }

    let mut merged: Vec<SweepWindow> = Vec::new();
    for w in windows {
        match merged.last_mut() {
            Some(last) if last.summary == w.summary => {
                last.hi = w.hi;
                last.hi_closed = w.hi_closed;
            }
            _ => merged.push(w),
        }
    }
    let breakpoints = merged.iter().skip(1).map(|w| w.lo.clone()).collect();
    Ok(SweepReport {
        order_id: order_id.to_string(),
        field: "fixed_term".to_string(),
        variant,
        from: from.clone(),
        to: to.clone(),
        breakpoints,
        windows: merged,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationOptimum {
    pub activation: Vec<(String, bool)>,
    pub objective: Rational,
}

/// Every activation vector whose best clearing reaches the global optimum,
/// each found by forcing the vector and solving exhaustively.
pub fn enumerate_optimal_activations(
    instance: &MarketInstance,
    variant: ObjectiveVariant,
) -> Result<Vec<ActivationOptimum>, StrategyError> {
    let c = instance.mic_orders.len();
    let mut candidates = Vec::new();
    for mask in 0..(1u64 << c) {
        let vector: Vec<bool> = (0..c).map(|k| mask >> k & 1 == 1).collect();
        if let Some(r) = oracle::best_for_activation(instance, variant, &vector)? {
            // an activated order must trade
            if instance
                .mic_orders
                .iter()
                .any(|o| r.is_active(o) && order_volume(o, &r).is_zero())
            {
                continue;
            }
            candidates.push(ActivationOptimum {
                activation: instance
                    .mic_orders
                    .iter()
                    .map(|o| o.id.clone())
                    .zip(vector)
                    .collect(),
                objective: r.objective_value,
            });
        }
    }
    let Some(best) = candidates.iter().map(|c| c.objective.clone()).max() else {
        return Ok(Vec::new());
    };
    Ok(candidates
        .into_iter()
        .filter(|c| c.objective == best)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderProfitDelta {
    pub order_id: String,
    pub hourly: Rational,
    pub mic: Rational,
    /// `mic - hourly`.
    pub delta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectiveComparison {
    pub hourly: ClearingResult,
    pub mic: ClearingResult,
    /// Orders whose activation differs between the two clearings.
    pub differing_activations: Vec<String>,
    pub mcp_differs: bool,
    /// Both welfare accountings of the hourly-objective clearing.
    pub hourly_result_tsw: (Rational, Rational),
    /// Both welfare accountings of the MIC-cost clearing.
    pub mic_result_tsw: (Rational, Rational),
    pub profits: Vec<OrderProfitDelta>,
}

pub fn compare_objectives(instance: &MarketInstance) -> Result<ObjectiveComparison, StrategyError> {
    let (hourly, _) = milp::clear(instance, ObjectiveVariant::HourlyTsw)?;
    let (mic, _) = milp::clear(instance, ObjectiveVariant::MicCostTsw)?;
    let both = |r: &ClearingResult| {
        (
            tsw_hourly(instance, r).unwrap_or_else(|_| Rational::zero()),
            tsw_mic(instance, r).unwrap_or_else(|_| Rational::zero()),
        )
    };
    let differing_activations = instance
        .mic_orders
        .iter()
        .filter(|o| hourly.is_active(o) != mic.is_active(o))
        .map(|o| o.id.clone())
        .collect();
    let profits = instance
        .mic_orders
        .iter()
        .map(|o| {
            let h = real_profit(o, &hourly);
            let m = real_profit(o, &mic);
            OrderProfitDelta {
                order_id: o.id.clone(),
                delta: &m - &h,
                hourly: h,
                mic: m,
            }
        })
        .collect();
    Ok(ObjectiveComparison {
        differing_activations,
        mcp_differs: hourly.mcp != mic.mcp,
        hourly_result_tsw: both(&hourly),
        mic_result_tsw: both(&mic),
        profits,
        hourly,
        mic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{verify_clearing, Side};

    #[test]
    fn scenario_instances_follow_the_tables() {
        let s = builtin_scenarios();
        let names: Vec<_> = s.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["case1", "case2", "case1_mod", "case2_mod", "case3"]);
        let case1 = &s[0].instance;
        assert_eq!(case1.order("c1").unwrap().hourly_bids[0].price, int(1));
        let d1 = case1.simple_bids.iter().find(|b| b.id == "D1").unwrap();
        assert_eq!(d1.side, Side::Demand);
        assert_eq!(d1.signed_quantity(), int(-5));
        assert_eq!(
            s[4].instance.order("c1").unwrap().hourly_bids[0].price,
            ratio(11, 2)
        );

        let mut case2 = s[1].instance.clone();
        assert_ne!(&case2, case1);
        case2.order_mut("c1").unwrap().fixed_term = int(10);
        assert_eq!(&case2, case1);
    }

    #[test]
    fn case1_and_case2_runs() {
        let (r, a) = run_scenario(&scenario_by_name("case1").unwrap()).unwrap();
        assert_eq!(r.activation_vector(&s1()), vec![true, true]);
        assert_eq!(a.order("c1").unwrap().real_profit, int(2));
        assert_eq!(
            a.consumer_surplus.clone() + a.producer_surplus.clone(),
            a.tsw_hourly
        );

        let (r, a) = run_scenario(&scenario_by_name("case2").unwrap()).unwrap();
        let c1 = a.order("c1").unwrap();
        assert_eq!(c1.income, int(24));
        assert_eq!(c1.real_profit, int(6));
        assert!(!a.order("c2").unwrap().active);
        assert!(a.order("c2").unwrap().paradoxically_rejected);
        assert!(
            verify_clearing(&table1_instance(int(14)), &r, ObjectiveVariant::HourlyTsw).is_empty()
        );

        let (_, a) = run_scenario(&scenario_by_name("case2_mod").unwrap()).unwrap();
        let c2 = a.order("c2").unwrap();
        assert!(!a.order("c1").unwrap().active);
        assert_eq!((c2.income.clone(), c2.cost.clone()), (int(24), int(18)));
        assert!(matches!(
            scenario_by_name("case9"),
            Err(StrategyError::UnknownScenario(_))
        ));
    }

    fn s1() -> MarketInstance {
        table1_instance(int(10))
    }

    #[test]
    fn paradoxical_flags() {
        let inst = table1_instance(int(10));
        let (r, _) = milp::clear(&inst, ObjectiveVariant::HourlyTsw).unwrap();
        assert!(detect_paradoxical_rejection(&inst, &r).is_empty());

        // c2 priced above the clearing price is genuinely out of the money
        let mut inst = table1_instance(int(14));
        for b in &mut inst.order_mut("c2").unwrap().hourly_bids {
            b.price = int(7);
        }
        let (r, _) = milp::clear(&inst, ObjectiveVariant::HourlyTsw).unwrap();
        assert!(!r.activation["c2"]);
        assert!(detect_paradoxical_rejection(&inst, &r).is_empty());
    }

    #[test]
    fn ft_window_of_table1() {
        let inst = table1_instance(int(10));
        let rep = ft_sweep(&inst, "c1", &int(0), &int(20), ObjectiveVariant::HourlyTsw).unwrap();
        assert_eq!(rep.breakpoints, vec![int(12), int(16)]);
        let w = &rep.windows;
        assert_eq!(w.len(), 3);
        assert!(
            w[0].lo_closed
                && w[0].hi_closed
                && !w[1].lo_closed
                && w[1].hi_closed
                && !w[2].lo_closed
        );
        assert_eq!(w[0].summary.strategist_profit, Affine::constant(int(2)));
        assert_eq!(w[1].summary.strategist_profit, Affine::constant(int(6)));
        assert_eq!(
            w[1].summary.activation,
            vec![("c1".to_string(), true), ("c2".to_string(), false)]
        );
        assert_eq!(w[2].summary.activation[0], ("c1".to_string(), false));

        let rep = ft_sweep(&inst, "c1", &int(0), &int(5), ObjectiveVariant::HourlyTsw).unwrap();
        assert!(rep.breakpoints.is_empty());
        assert_eq!(rep.windows.len(), 1);
        assert!(matches!(
            ft_sweep(&inst, "c9", &int(0), &int(5), ObjectiveVariant::HourlyTsw),
            Err(StrategyError::UnknownOrder(_))
        ));
    }

    #[test]
    fn optimal_activations() {
        let inst = table1_instance(int(10));
        let v = enumerate_optimal_activations(&inst, ObjectiveVariant::HourlyTsw).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(
            v[0].activation,
            vec![("c1".to_string(), true), ("c2".to_string(), true)]
        );

        let empty = MarketInstance::new(1, vec![SimpleBid::demand("d", 1, int(1), int(1))], vec![]);
        let v = enumerate_optimal_activations(&empty, ObjectiveVariant::HourlyTsw).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].activation.is_empty());
    }

    #[test]
    fn objective_comparison() {
        let cmp = compare_objectives(&table1_instance(int(14))).unwrap();
        assert!(cmp.hourly.activation["c1"] && !cmp.hourly.activation["c2"]);
        assert!(!cmp.mic.activation["c1"] && cmp.mic.activation["c2"]);
        assert_eq!(cmp.differing_activations, vec!["c1", "c2"]);

        let cmp = compare_objectives(&table1_instance(int(10))).unwrap();
        assert!(cmp.differing_activations.is_empty());
        assert!(!cmp.mcp_differs);
        assert_eq!(cmp.hourly.acceptance, cmp.mic.acceptance);
    }
}
