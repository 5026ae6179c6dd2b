//! Bid-set documents and report emission.
//!
//! A bid set is a JSON document (`schema_version` 1). Every numeric field
//! accepts a JSON number or a string holding a decimal or fraction literal
//! and is read exactly; `5.5` and `"11/2"` are the same value.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::market::{
    build_curves, order_cost, order_income, order_volume, real_profit, surpluses, tsw_hourly,
    tsw_mic, validate_instance, ClearingResult, MarketInstance, MicHourlyBid, MicOrder,
    ObjectiveVariant, Side, SimpleBid, Violation,
};
use crate::oracle::OracleReport;
use crate::rational::{parse_rational, to_decimal_string, to_fraction_string, Exact, Rational};
use crate::strategy::{
    ActivationOptimum, ObjectiveComparison, Scenario, ScenarioAnalysis, SweepReport,
};

pub const SCHEMA_VERSION: u32 = 1;

const DECIMALS: usize = 4;

/// A rational read from a JSON number or string without passing through
/// binary floating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactNumber(pub Rational);

impl<'de> Deserialize<'de> for ExactNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let text = match Value::deserialize(deserializer)? {
            Value::String(s) => s,
            // arbitrary_precision keeps the literal digits
            Value::Number(n) => n.to_string(),
            other => {
                return Err(D::Error::custom(format!(
                    "expected a number or numeric string, found {other}"
                )))
            }
        };
        parse_rational(&text)
            .map(ExactNumber)
            .map_err(D::Error::custom)
    }
}

impl Serialize for ExactNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&to_fraction_string(&self.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideTag {
    Supply,
    Demand,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleBidRow {
    pub id: String,
    pub side: SideTag,
    pub period: usize,
    pub quantity: ExactNumber,
    pub price: ExactNumber,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HourlyBidRow {
    /// Defaults to `<order>_t<period>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub period: usize,
    pub quantity: ExactNumber,
    pub price: ExactNumber,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicOrderRow {
    pub id: String,
    pub ft: ExactNumber,
    pub vt: ExactNumber,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_ft: Option<ExactNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_vt: Option<ExactNumber>,
    pub hourly_bids: Vec<HourlyBidRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidSetDocument {
    pub schema_version: u32,
    pub period_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcp_upper_bound: Option<ExactNumber>,
    #[serde(default)]
    pub simple_bids: Vec<SimpleBidRow>,
    #[serde(default)]
    pub mic_orders: Vec<MicOrderRow>,
}

impl BidSetDocument {
    pub fn from_instance(instance: &MarketInstance) -> Self {
        let exact = |r: &Rational| ExactNumber(r.clone());
        Self {
            schema_version: SCHEMA_VERSION,
            period_count: instance.period_count,
            mcp_upper_bound: instance.mcp_upper_bound.as_ref().map(exact),
            simple_bids: instance
                .simple_bids
                .iter()
                .map(|b| SimpleBidRow {
                    id: b.id.clone(),
                    side: match b.side {
                        Side::Supply => SideTag::Supply,
                        Side::Demand => SideTag::Demand,
                    },
                    period: b.period,
                    quantity: exact(&b.quantity),
                    price: exact(&b.price),
                })
                .collect(),
            mic_orders: instance
                .mic_orders
                .iter()
                .map(|o| MicOrderRow {
                    id: o.id.clone(),
                    ft: exact(&o.fixed_term),
                    vt: exact(&o.variable_term),
                    true_ft: o.true_fixed_term.as_ref().map(exact),
                    true_vt: o.true_variable_term.as_ref().map(exact),
                    hourly_bids: o
                        .hourly_bids
                        .iter()
                        .map(|b| HourlyBidRow {
                            id: Some(b.id.clone()),
                            period: b.period,
                            quantity: exact(&b.quantity),
                            price: exact(&b.price),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn into_instance(self) -> MarketInstance {
        let simple = self
            .simple_bids
            .into_iter()
            .map(|r| match r.side {
                SideTag::Supply => SimpleBid::supply(r.id, r.period, r.quantity.0, r.price.0),
                SideTag::Demand => SimpleBid::demand(r.id, r.period, r.quantity.0, r.price.0),
            })
            .collect();
        let orders = self
            .mic_orders
            .into_iter()
            .map(|o| {
                let bids = o
                    .hourly_bids
                    .into_iter()
                    .map(|b| {
                        let id = b.id.unwrap_or_else(|| format!("{}_t{}", o.id, b.period));
                        MicHourlyBid::new(id, b.period, b.quantity.0, b.price.0)
                    })
                    .collect();
                let mut order = MicOrder::new(o.id, o.ft.0, o.vt.0, bids);
                order.true_fixed_term = o.true_ft.map(|x| x.0);
                order.true_variable_term = o.true_vt.map(|x| x.0);
                order
            })
            .collect();
        let mut instance = MarketInstance::new(self.period_count, simple, orders);
        instance.mcp_upper_bound = self.mcp_upper_bound.map(|x| x.0);
        instance
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    UnsupportedVersion(u32),
    #[error("invalid bid set:\n{}", list(.0))]
    Invalid(Vec<Violation>),
}

fn list(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses and validates a bid-set document.
pub fn parse_bidset(text: &str) -> Result<MarketInstance, ParseError> {
    let syntax = |path: String, e: serde_json::Error| ParseError::Syntax {
        path,
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: BidSetDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        syntax(path, e.into_inner())
    })?;
    de.end().map_err(|e| syntax(".".to_string(), e))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(ParseError::UnsupportedVersion(doc.schema_version));
    }
    let instance = doc.into_instance();
    let violations = validate_instance(&instance);
    if violations.is_empty() {
        Ok(instance)
    } else {
        Err(ParseError::Invalid(violations))
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(pos) => message[..pos].to_string(),
        None => message.to_string(),
    }
}

/// Pretty JSON text of an instance; [`parse_bidset`] reads it back unchanged.
pub fn serialize_bidset(instance: &MarketInstance) -> String {
    let mut text = serde_json::to_string_pretty(&BidSetDocument::from_instance(instance))
        .expect("bid-set documents always serialize");
    text.push('\n');
    text
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "human" => Ok(Format::Human),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!(
                "unknown format `{s}` (expected human, csv or json)"
            )),
        }
    }
}

fn exact_json(value: &Rational) -> Value {
    json!({ "exact": to_fraction_string(value), "decimal": to_decimal_string(value, DECIMALS) })
}

/// Long-format csv rows: `section,entity,field,value,decimal`.
struct Rows(Vec<[String; 5]>);

impl Rows {
    fn new() -> Self {
        Rows(Vec::new())
    }

    fn text(&mut self, section: &str, entity: &str, field: &str, value: impl fmt::Display) {
        self.0.push([
            section.into(),
            entity.into(),
            field.into(),
            value.to_string(),
            String::new(),
        ]);
    }

    fn num(&mut self, section: &str, entity: &str, field: &str, value: &Rational) {
        self.0.push([
            section.into(),
            entity.into(),
            field.into(),
            to_fraction_string(value),
            to_decimal_string(value, DECIMALS),
        ]);
    }

    fn render(self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "entity", "field", "value", "decimal"])
            .expect("writing to memory");
        for row in self.0 {
            w.write_record(&row).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
    }
}

fn status_name(result: &ClearingResult) -> &'static str {
    if result.is_optimal() {
        "optimal"
    } else {
        "infeasible"
    }
}

struct BidRow<'a> {
    id: &'a str,
    side: Side,
    period: usize,
    quantity: &'a Rational,
    price: &'a Rational,
    order: Option<&'a str>,
}

fn bid_rows(instance: &MarketInstance) -> Vec<BidRow<'_>> {
    let simple = instance.simple_bids.iter().map(|b| BidRow {
        id: &b.id,
        side: b.side,
        period: b.period,
        quantity: &b.quantity,
        price: &b.price,
        order: None,
    });
    let mic = instance.mic_bids().map(|b| BidRow {
        id: &b.id,
        side: Side::Supply,
        period: b.period,
        quantity: &b.quantity,
        price: &b.price,
        order: Some(&b.order_id),
    });
    simple.chain(mic).collect()
}

fn result_rows(rows: &mut Rows, prefix: &str, instance: &MarketInstance, result: &ClearingResult) {
    let section = |s: &str| {
        if prefix.is_empty() {
            s.to_string()
        } else {
            format!("{prefix}.{s}")
        }
    };
    rows.text(&section("status"), "", "status", status_name(result));
    rows.text(
        &section("status"),
        "",
        "objective",
        result.objective_variant,
    );
    if !result.is_optimal() {
        return;
    }
    rows.num(
        &section("status"),
        "",
        "objective_value",
        &result.objective_value,
    );
    for (t, price) in result.mcp.iter().enumerate() {
        let period = (t + 1).to_string();
        rows.num(&section("mcp"), &period, "price", price);
        if let Some(iv) = result.mcp_interval.get(t) {
            rows.num(&section("mcp"), &period, "interval_lo", &iv.lo);
            rows.num(&section("mcp"), &period, "interval_hi", &iv.hi);
        }
    }
    for bid in bid_rows(instance) {
        rows.num(
            &section("acceptance"),
            bid.id,
            "accepted",
            &result.accepted(bid.id),
        );
    }
    for order in &instance.mic_orders {
        let s = section("order");
        let income = order_income(order, result);
        let cost = order_cost(order, result);
        rows.text(&s, &order.id, "active", result.is_active(order));
        rows.num(&s, &order.id, "volume", &order_volume(order, result));
        rows.num(&s, &order.id, "income", &income);
        rows.num(&s, &order.id, "cost", &cost);
        rows.num(&s, &order.id, "mic_slack", &(&income - &cost));
        rows.num(&s, &order.id, "real_profit", &real_profit(order, result));
    }
    let (cs, ps) = surpluses(instance, result);
    let s = section("welfare");
    if let Ok(v) = tsw_hourly(instance, result) {
        rows.num(&s, "", "tsw_hourly", &v);
    }
    if let Ok(v) = tsw_mic(instance, result) {
        rows.num(&s, "", "tsw_mic", &v);
    }
    rows.num(&s, "", "consumer_surplus", &cs);
    rows.num(&s, "", "producer_surplus", &ps);
}

fn result_json(instance: &MarketInstance, result: &ClearingResult) -> Value {
    let mut out = Map::new();
    out.insert("status".into(), json!(status_name(result)));
    out.insert("objective".into(), json!(result.objective_variant.name()));
    if !result.is_optimal() {
        return Value::Object(out);
    }
    out.insert(
        "objective_value".into(),
        exact_json(&result.objective_value),
    );
    let mcp: Vec<Value> = result
        .mcp
        .iter()
        .enumerate()
        .map(|(t, price)| {
            let mut m = Map::new();
            m.insert("period".into(), json!(t + 1));
            m.insert("price".into(), exact_json(price));
            if let Some(iv) = result.mcp_interval.get(t) {
                m.insert(
                    "interval".into(),
                    json!({ "lo": exact_json(&iv.lo), "hi": exact_json(&iv.hi) }),
                );
            }
            Value::Object(m)
        })
        .collect();
    out.insert("mcp".into(), Value::Array(mcp));
    let acceptance: Vec<Value> = bid_rows(instance)
        .iter()
        .map(|b| {
            json!({
                "bid": b.id,
                "order": b.order,
                "side": b.side.to_string(),
                "period": b.period,
                "accepted": exact_json(&result.accepted(b.id)),
            })
        })
        .collect();
    out.insert("acceptance".into(), Value::Array(acceptance));
    let orders: Vec<Value> = instance
        .mic_orders
        .iter()
        .map(|o| {
            let income = order_income(o, result);
            let cost = order_cost(o, result);
            json!({
                "order": o.id,
                "active": result.is_active(o),
                "volume": exact_json(&order_volume(o, result)),
                "income": exact_json(&income),
                "cost": exact_json(&cost),
                "mic_slack": exact_json(&(&income - &cost)),
                "real_profit": exact_json(&real_profit(o, result)),
            })
        })
        .collect();
    out.insert("orders".into(), Value::Array(orders));
    let (cs, ps) = surpluses(instance, result);
    let mut welfare = Map::new();
    if let Ok(v) = tsw_hourly(instance, result) {
        welfare.insert("tsw_hourly".into(), exact_json(&v));
    }
    if let Ok(v) = tsw_mic(instance, result) {
        welfare.insert("tsw_mic".into(), exact_json(&v));
    }
    welfare.insert("consumer_surplus".into(), exact_json(&cs));
    welfare.insert("producer_surplus".into(), exact_json(&ps));
    out.insert("welfare".into(), Value::Object(welfare));
    Value::Object(out)
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json values always serialize");
    text.push('\n');
    text
}

/// Table with left-aligned columns.
fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut text = line(header.to_vec());
    for row in rows {
        text.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out.push_str(&text);
}

fn result_human(out: &mut String, instance: &MarketInstance, result: &ClearingResult) {
    if !result.is_optimal() {
        let _ = writeln!(
            out,
            "status: infeasible ({} objective)",
            result.objective_variant
        );
        return;
    }
    let _ = writeln!(out, "status: optimal");
    let _ = writeln!(
        out,
        "objective ({}): {}",
        result.objective_variant,
        Exact(&result.objective_value)
    );
    let _ = writeln!(out, "market clearing prices:");
    let mcp_rows: Vec<Vec<String>> = result
        .mcp
        .iter()
        .enumerate()
        .map(|(t, p)| {
            vec![
                (t + 1).to_string(),
                Exact(p).to_string(),
                result
                    .mcp_interval
                    .get(t)
                    .map_or_else(String::new, |iv| iv.to_string()),
            ]
        })
        .collect();
    table(out, &["period", "mcp", "price interval"], &mcp_rows);
    let _ = writeln!(out, "acceptance:");
    let bid_table: Vec<Vec<String>> = bid_rows(instance)
        .iter()
        .map(|b| {
            vec![
                b.id.to_string(),
                b.order.unwrap_or("-").to_string(),
                b.side.to_string(),
                b.period.to_string(),
                Exact(b.quantity).to_string(),
                Exact(b.price).to_string(),
                Exact(&result.accepted(b.id)).to_string(),
            ]
        })
        .collect();
    table(
        out,
        &[
            "bid", "order", "side", "period", "quantity", "price", "accepted",
        ],
        &bid_table,
    );
    if !instance.mic_orders.is_empty() {
        let _ = writeln!(out, "MIC orders:");
        let order_rows: Vec<Vec<String>> = instance
            .mic_orders
            .iter()
            .map(|o| {
                let income = order_income(o, result);
                let cost = order_cost(o, result);
                vec![
                    o.id.clone(),
                    if result.is_active(o) { "yes" } else { "no" }.to_string(),
                    Exact(&order_volume(o, result)).to_string(),
                    Exact(&income).to_string(),
                    Exact(&cost).to_string(),
                    Exact(&(&income - &cost)).to_string(),
                    Exact(&real_profit(o, result)).to_string(),
                ]
            })
            .collect();
        table(
            out,
            &[
                "order",
                "active",
                "volume",
                "income",
                "cost",
                "mic slack",
                "real profit",
            ],
            &order_rows,
        );
    }
    let (cs, ps) = surpluses(instance, result);
    let mut welfare = Vec::new();
    if let Ok(v) = tsw_hourly(instance, result) {
        welfare.push(format!("tsw hourly {}", Exact(&v)));
    }
    if let Ok(v) = tsw_mic(instance, result) {
        welfare.push(format!("tsw mic {}", Exact(&v)));
    }
    welfare.push(format!("consumer surplus {}", Exact(&cs)));
    welfare.push(format!("producer surplus {}", Exact(&ps)));
    let _ = writeln!(out, "welfare: {}", welfare.join(", "));
}

pub fn emit_result(result: &ClearingResult, instance: &MarketInstance, format: Format) -> String {
    match format {
        Format::Human => {
            let mut out = String::new();
            result_human(&mut out, instance, result);
            out
        }
        Format::Csv => {
            let mut rows = Rows::new();
            result_rows(&mut rows, "", instance, result);
            rows.render()
        }
        Format::Json => {
            let mut value = result_json(instance, result);
            if let Value::Object(m) = &mut value {
                m.shift_insert(0, "schema_version".into(), json!(SCHEMA_VERSION));
            }
            pretty(&value)
        }
    }
}

/// Step-curve breakpoints of one period as csv. With a result, bids of
/// deactivated MIC orders are left out.
pub fn emit_curves(
    instance: &MarketInstance,
    period: usize,
    result: Option<&ClearingResult>,
) -> String {
    let (supply, demand) = build_curves(instance, period, result);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "series",
        "bid_id",
        "cumulative_quantity",
        "cumulative_quantity_decimal",
        "price",
        "price_decimal",
    ])
    .expect("writing to memory");
    for (series, points) in [("supply", supply), ("demand", demand)] {
        for p in points {
            w.write_record([
                series.to_string(),
                p.bid_id,
                to_fraction_string(&p.cumulative_quantity),
                to_decimal_string(&p.cumulative_quantity, DECIMALS),
                to_fraction_string(&p.price),
                to_decimal_string(&p.price, DECIMALS),
            ])
            .expect("writing to memory");
        }
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn analysis_json(analysis: &ScenarioAnalysis) -> Value {
    let flagged: Vec<&str> = analysis
        .orders
        .iter()
        .filter(|o| o.paradoxically_rejected)
        .map(|o| o.order_id.as_str())
        .collect();
    json!({
        "mic_satisfied": analysis.orders.iter().map(|o| (o.order_id.clone(), json!(o.mic_satisfied))).collect::<Map<_, _>>(),
        "paradoxically_rejected": flagged,
    })
}

/// Reports of several scenario runs. Solver statistics are left out so the
/// machine formats depend only on the clearing.
pub fn emit_scenarios(
    runs: &[(Scenario, ClearingResult, ScenarioAnalysis)],
    format: Format,
) -> String {
    match format {
        Format::Human => {
            let mut out = String::new();
            for (i, (s, result, analysis)) in runs.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "== {} ({} objective) ==", s.name, s.variant);
                let _ = writeln!(out, "{}", s.notes);
                result_human(&mut out, &s.instance, result);
                let flagged: Vec<&str> = analysis
                    .orders
                    .iter()
                    .filter(|o| o.paradoxically_rejected)
                    .map(|o| o.order_id.as_str())
                    .collect();
                if !flagged.is_empty() {
                    let _ = writeln!(out, "paradoxically rejected: {}", flagged.join(", "));
                }
            }
            out
        }
        Format::Csv => {
            let mut rows = Rows::new();
            for (s, result, analysis) in runs {
                result_rows(&mut rows, &s.name, &s.instance, result);
                for o in &analysis.orders {
                    let section = format!("{}.order", s.name);
                    rows.text(&section, &o.order_id, "mic_satisfied", o.mic_satisfied);
                    rows.text(
                        &section,
                        &o.order_id,
                        "paradoxically_rejected",
                        o.paradoxically_rejected,
                    );
                }
            }
            rows.render()
        }
        Format::Json => {
            let scenarios: Vec<Value> = runs
                .iter()
                .map(|(s, result, analysis)| {
                    json!({
                        "name": s.name,
                        "variant": s.variant.name(),
                        "notes": s.notes,
                        "strategist": s.strategist,
                        "result": result_json(&s.instance, result),
                        "analysis": analysis_json(analysis),
                    })
                })
                .collect();
            pretty(&json!({ "schema_version": SCHEMA_VERSION, "scenarios": scenarios }))
        }
    }
}

fn activation_text(activation: &[(String, bool)]) -> String {
    activation
        .iter()
        .map(|(id, on)| format!("{id}={}", if *on { "on" } else { "off" }))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn emit_sweep(report: &SweepReport, format: Format) -> String {
    match format {
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "sweep of {} {} over [{}, {}] ({} objective)",
                report.order_id,
                report.field,
                Exact(&report.from),
                Exact(&report.to),
                report.variant
            );
            let breakpoints: Vec<String> = report
                .breakpoints
                .iter()
                .map(|b| Exact(b).to_string())
                .collect();
            let _ = writeln!(
                out,
                "breakpoints: {}",
                if breakpoints.is_empty() {
                    "none".into()
                } else {
                    breakpoints.join(", ")
                }
            );
            let rows: Vec<Vec<String>> = report
                .windows
                .iter()
                .map(|w| {
                    vec![
                        w.to_string(),
                        activation_text(&w.summary.activation),
                        w.summary
                            .mcp
                            .iter()
                            .map(|p| p.to_string())
                            .collect::<Vec<_>>()
                            .join(" / "),
                        w.summary.strategist_profit.to_string(),
                    ]
                })
                .collect();
            table(
                &mut out,
                &["window", "activation", "mcp", "real profit"],
                &rows,
            );
            out
        }
        Format::Csv => {
            let mut rows = Rows::new();
            rows.text("sweep", &report.order_id, "field", &report.field);
            rows.text("sweep", &report.order_id, "objective", report.variant);
            rows.num("sweep", &report.order_id, "from", &report.from);
            rows.num("sweep", &report.order_id, "to", &report.to);
            for (i, b) in report.breakpoints.iter().enumerate() {
                rows.num("breakpoint", &(i + 1).to_string(), "value", b);
            }
            for (i, w) in report.windows.iter().enumerate() {
                let entity = (i + 1).to_string();
                rows.num("window", &entity, "lo", &w.lo);
                rows.text("window", &entity, "lo_closed", w.lo_closed);
                rows.num("window", &entity, "hi", &w.hi);
                rows.text("window", &entity, "hi_closed", w.hi_closed);
                for (id, on) in &w.summary.activation {
                    rows.text("window", &entity, &format!("active.{id}"), on);
                }
                // value at fixed term FT is constant + slope * FT
                for (t, p) in w.summary.mcp.iter().enumerate() {
                    rows.num("window", &entity, &format!("mcp.{}", t + 1), &p.constant);
                    rows.num("window", &entity, &format!("mcp_slope.{}", t + 1), &p.slope);
                }
                rows.num(
                    "window",
                    &entity,
                    "real_profit",
                    &w.summary.strategist_profit.constant,
                );
                rows.num(
                    "window",
                    &entity,
                    "real_profit_slope",
                    &w.summary.strategist_profit.slope,
                );
            }
            rows.render()
        }
        Format::Json => {
            let windows: Vec<Value> = report
                .windows
                .iter()
                .map(|w| {
                    json!({
                        "lo": exact_json(&w.lo),
                        "lo_closed": w.lo_closed,
                        "hi": exact_json(&w.hi),
                        "hi_closed": w.hi_closed,
                        "activation": w.summary.activation.iter().map(|(id, on)| (id.clone(), json!(on))).collect::<Map<_, _>>(),
                        "mcp": w.summary.mcp.iter().map(|p| exact_json(&p.constant)).collect::<Vec<_>>(),
                        "mcp_slope": w.summary.mcp.iter().map(|p| exact_json(&p.slope)).collect::<Vec<_>>(),
                        "real_profit": exact_json(&w.summary.strategist_profit.constant),
                        "real_profit_slope": exact_json(&w.summary.strategist_profit.slope),
                    })
                })
                .collect();
            pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "order": report.order_id,
                "field": report.field,
                "objective": report.variant.name(),
                "from": exact_json(&report.from),
                "to": exact_json(&report.to),
                "breakpoints": report.breakpoints.iter().map(exact_json).collect::<Vec<_>>(),
                "windows": windows,
            }))
        }
    }
}

pub fn emit_optima(
    optima: &[ActivationOptimum],
    variant: ObjectiveVariant,
    format: Format,
) -> String {
    match format {
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "optimal activation vectors ({variant} objective): {}",
                optima.len()
            );
            for o in optima {
                let _ = writeln!(
                    out,
                    "  {}  objective {}",
                    activation_text(&o.activation),
                    Exact(&o.objective)
                );
            }
            out
        }
        Format::Csv => {
            let mut rows = Rows::new();
            for (i, o) in optima.iter().enumerate() {
                let entity = (i + 1).to_string();
                for (id, on) in &o.activation {
                    rows.text("optimum", &entity, &format!("active.{id}"), on);
                }
                rows.num("optimum", &entity, "objective", &o.objective);
            }
            rows.render()
        }
        Format::Json => {
            let list: Vec<Value> = optima
                .iter()
                .map(|o| {
                    json!({
                        "activation": o.activation.iter().map(|(id, on)| (id.clone(), json!(on))).collect::<Map<_, _>>(),
                        "objective": exact_json(&o.objective),
                    })
                })
                .collect();
            pretty(
                &json!({ "schema_version": SCHEMA_VERSION, "objective": variant.name(), "optima": list }),
            )
        }
    }
}

pub fn emit_comparison(
    instance: &MarketInstance,
    cmp: &ObjectiveComparison,
    format: Format,
) -> String {
    match format {
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "-- hourly objective --");
            result_human(&mut out, instance, &cmp.hourly);
            let _ = writeln!(out, "-- mic objective --");
            result_human(&mut out, instance, &cmp.mic);
            let _ = writeln!(out, "-- differences --");
            let differing = if cmp.differing_activations.is_empty() {
                "none".to_string()
            } else {
                cmp.differing_activations.join(", ")
            };
            let _ = writeln!(out, "activation differs for: {differing}");
            let _ = writeln!(
                out,
                "prices differ: {}",
                if cmp.mcp_differs { "yes" } else { "no" }
            );
            let rows: Vec<Vec<String>> = cmp
                .profits
                .iter()
                .map(|p| {
                    vec![
                        p.order_id.clone(),
                        Exact(&p.hourly).to_string(),
                        Exact(&p.mic).to_string(),
                        Exact(&p.delta).to_string(),
                    ]
                })
                .collect();
            table(
                &mut out,
                &["order", "profit hourly", "profit mic", "delta"],
                &rows,
            );
            out
        }
        Format::Csv => {
            let mut rows = Rows::new();
            result_rows(&mut rows, "hourly", instance, &cmp.hourly);
            result_rows(&mut rows, "mic", instance, &cmp.mic);
            for id in &cmp.differing_activations {
                rows.text("difference", id, "activation", true);
            }
            rows.text("difference", "", "mcp", cmp.mcp_differs);
            for p in &cmp.profits {
                rows.num("profit", &p.order_id, "hourly", &p.hourly);
                rows.num("profit", &p.order_id, "mic", &p.mic);
                rows.num("profit", &p.order_id, "delta", &p.delta);
            }
            rows.render()
        }
        Format::Json => {
            let profits: Vec<Value> = cmp
                .profits
                .iter()
                .map(|p| {
                    json!({
                        "order": p.order_id,
                        "hourly": exact_json(&p.hourly),
                        "mic": exact_json(&p.mic),
                        "delta": exact_json(&p.delta),
                    })
                })
                .collect();
            pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "hourly": result_json(instance, &cmp.hourly),
                "mic": result_json(instance, &cmp.mic),
                "differing_activations": cmp.differing_activations,
                "mcp_differs": cmp.mcp_differs,
                "profits": profits,
            }))
        }
    }
}

pub fn emit_oracle_report(report: &OracleReport) -> String {
    let mut out = String::new();
    let objective = |o: &Option<Rational>| {
        o.as_ref()
            .map_or("infeasible".to_string(), |v| Exact(v).to_string())
    };
    for e in &report.entries {
        let _ = writeln!(
            out,
            "{}: milp {} oracle {} canonical {} violations {}/{} -> {}",
            e.variant,
            objective(&e.milp_objective),
            objective(&e.oracle_objective),
            if e.canonical_equal {
                "equal"
            } else {
                "different"
            },
            e.milp_violations.len(),
            e.oracle_violations.len(),
            if e.agrees() { "agree" } else { "DISAGREE" }
        );
    }
    let _ = writeln!(
        out,
        "oracle check: {}",
        if report.all_agree() {
            "agree"
        } else {
            "DISAGREE"
        }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::strategy::table1_instance;

    #[test]
    fn fraction_and_decimal_literals_are_exact() {
        let text = r#"{"schema_version":1,"period_count":1,
            "simple_bids":[{"id":"S","side":"supply","period":1,"quantity":2,"price":"3/7"},
                           {"id":"D","side":"demand","period":1,"quantity":0.1,"price":"5.5"}]}"#;
        let inst = parse_bidset(text).unwrap();
        assert_eq!(inst.simple_bids[0].price, ratio(3, 7));
        assert_eq!(inst.simple_bids[1].quantity, ratio(1, 10));
        assert_eq!(inst.simple_bids[1].price, ratio(11, 2));
    }

    #[test]
    fn bad_side_names_the_field() {
        let text = r#"{"schema_version":1,"period_count":1,
            "simple_bids":[{"id":"S","side":"buy","period":1,"quantity":2,"price":1}]}"#;
        match parse_bidset(text) {
            Err(ParseError::Syntax { path, line, .. }) => {
                assert_eq!(path, "simple_bids[0].side");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_and_validation_errors() {
        let text = r#"{"schema_version":2,"period_count":1}"#;
        assert_eq!(parse_bidset(text), Err(ParseError::UnsupportedVersion(2)));
        let text = r#"{"schema_version":1,"period_count":1,
            "simple_bids":[{"id":"S","side":"supply","period":3,"quantity":2,"price":1}]}"#;
        assert!(matches!(parse_bidset(text), Err(ParseError::Invalid(v)) if v.len() == 1));
        assert!(matches!(
            parse_bidset("{} trailing"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn round_trip_keeps_true_costs_and_bound() {
        let mut inst = table1_instance(int(14));
        inst.mcp_upper_bound = Some(ratio(25, 2));
        assert_eq!(parse_bidset(&serialize_bidset(&inst)).unwrap(), inst);
    }

    #[test]
    fn infeasible_result_is_one_line() {
        let inst = table1_instance(int(10));
        let text = emit_result(
            &ClearingResult::infeasible(ObjectiveVariant::HourlyTsw),
            &inst,
            Format::Human,
        );
        assert_eq!(text.lines().count(), 1);
    }

    #[test]
    fn empty_period_curves_are_header_only() {
        let inst = MarketInstance::new(2, vec![SimpleBid::supply("S", 1, int(1), int(1))], vec![]);
        assert_eq!(emit_curves(&inst, 2, None).lines().count(), 1);
    }
}
