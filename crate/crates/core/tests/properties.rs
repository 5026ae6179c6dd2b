mod common;

use mic_clearing::io::{parse_bidset, serialize_bidset};
use mic_clearing::lp::{solve_lp, LinearExpr, LinearProgram, LpStatus, Relation};
use mic_clearing::market::{surpluses, tsw_hourly, verify_clearing};
use mic_clearing::rational::{int, ratio, Rational};
use mic_clearing::{milp, ClearingResult, MarketInstance, ObjectiveVariant};
use num_traits::Zero;
use proptest::prelude::*;

use common::random_instance;

fn variant() -> impl Strategy<Value = ObjectiveVariant> {
    prop_oneof![
        Just(ObjectiveVariant::HourlyTsw),
        Just(ObjectiveVariant::MicCostTsw)
    ]
}

fn fraction() -> impl Strategy<Value = Rational> {
    (0i64..200, 1i64..9).prop_map(|(n, d)| ratio(n, d))
}

fn clear(instance: &MarketInstance, variant: ObjectiveVariant) -> ClearingResult {
    milp::clear(instance, variant).unwrap().0
}

/// Comparable core of a result; price intervals depend on the MCP bound.
fn core(
    r: &ClearingResult,
) -> (
    Vec<Rational>,
    Vec<(String, Rational)>,
    Vec<(String, bool)>,
    Rational,
) {
    (
        r.mcp.clone(),
        r.acceptance
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
        r.activation.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        r.objective_value.clone(),
    )
}

proptest! {
    #![proptest_config(common::proptest_config(64))]

    #[test]
    fn bidset_round_trip(seed in any::<u64>(), bound in proptest::option::of(fraction()),
                         extra in fraction(), true_ft in proptest::option::of(fraction())) {
        let mut inst = random_instance(seed);
        inst.mcp_upper_bound = bound;
        if let Some(b) = inst.simple_bids.first_mut() {
            b.price = &b.price + &extra;
        }
        if let Some(o) = inst.mic_orders.first_mut() {
            o.true_fixed_term = true_ft;
            o.variable_term = &o.variable_term + ratio(1, 3);
        }
        let text = serialize_bidset(&inst);
        let back = parse_bidset(&text);
        // an override below some bid price is legal in a document
        prop_assert_eq!(back.unwrap(), inst);
    }

    #[test]
    fn results_verify_and_surpluses_add_up(seed in any::<u64>(), v in variant()) {
        let inst = random_instance(seed);
        let r = clear(&inst, v);
        prop_assume!(r.is_optimal());
        prop_assert!(verify_clearing(&inst, &r, v).is_empty());
        let (cs, ps) = surpluses(&inst, &r);
        prop_assert!(cs >= Rational::zero());
        prop_assert_eq!(tsw_hourly(&inst, &r).unwrap(), cs + ps);
    }

    #[test]
    fn price_scaling(seed in any::<u64>(), v in variant(), k in (1i64..6, 1i64..4)) {
        let k = ratio(k.0, k.1);
        let inst = random_instance(seed);
        let mut scaled = inst.clone();
        for b in &mut scaled.simple_bids {
            b.price = &b.price * &k;
        }
        for o in &mut scaled.mic_orders {
            o.fixed_term = &o.fixed_term * &k;
            o.variable_term = &o.variable_term * &k;
            for b in &mut o.hourly_bids {
                b.price = &b.price * &k;
            }
        }
        let (a, b) = (clear(&inst, v), clear(&scaled, v));
        prop_assert_eq!(a.status, b.status);
        prop_assume!(a.is_optimal());
        prop_assert_eq!(&a.acceptance, &b.acceptance);
        prop_assert_eq!(&a.activation, &b.activation);
        let mcp: Vec<Rational> = a.mcp.iter().map(|p| p * &k).collect();
        prop_assert_eq!(mcp, b.mcp);
        prop_assert_eq!(&a.objective_value * &k, b.objective_value);
    }

    #[test]
    fn quantity_scaling(seed in any::<u64>(), v in variant(), k in 1i64..5) {
        let k = int(k);
        let inst = random_instance(seed);
        let mut scaled = inst.clone();
        for b in &mut scaled.simple_bids {
            b.quantity = &b.quantity * &k;
        }
        for o in &mut scaled.mic_orders {
            o.fixed_term = &o.fixed_term * &k;
            for b in &mut o.hourly_bids {
                b.quantity = &b.quantity * &k;
            }
        }
        let (a, b) = (clear(&inst, v), clear(&scaled, v));
        prop_assert_eq!(a.status, b.status);
        prop_assume!(a.is_optimal());
        prop_assert_eq!(&a.acceptance, &b.acceptance);
        prop_assert_eq!(&a.mcp, &b.mcp);
        prop_assert_eq!(&a.objective_value * &k, b.objective_value);
    }

    #[test]
    fn big_m_insensitivity(seed in any::<u64>(), v in variant(), extra in 1i64..40) {
        let inst = random_instance(seed);
        let mut loose = inst.clone();
        loose.mcp_upper_bound = Some(inst.max_bid_price() + int(extra));
        let (a, b) = (clear(&inst, v), clear(&loose, v));
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(core(&a), core(&b));
    }

    #[test]
    fn deterministic(seed in any::<u64>(), v in variant()) {
        let inst = random_instance(seed);
        let (a, sa) = milp::clear(&inst, v).unwrap();
        let (b, sb) = milp::clear(&inst, v).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(sa, sb);
    }
}

/// Solves the square system `rows * x = rhs` exactly; `None` if singular.
fn solve_square(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[col][col];
                for c in col..n {
                    let d = &f * &rows[col][c];
                    rows[r][c] -= d;
                }
                let d = &f * &rhs[col];
                rhs[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &rows[i][i]).collect())
}

/// Best objective over all basic solutions of a box-bounded `Ax <= b`.
fn vertex_optimum(a: &[Vec<i64>], b: &[i64], c: &[i64], upper: i64) -> Option<Rational> {
    let n = c.len();
    // every hyperplane: constraint rows, x_j = 0, x_j = upper
    let mut planes: Vec<(Vec<Rational>, Rational)> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| (row.iter().map(|&v| int(v)).collect(), int(*rhs)))
        .collect();
    for j in 0..n {
        let unit: Vec<Rational> = (0..n).map(|k| int((k == j) as i64)).collect();
        planes.push((unit.clone(), int(0)));
        planes.push((unit, int(upper)));
    }
    let feasible = |x: &[Rational]| {
        x.iter().all(|v| v >= &int(0) && v <= &int(upper))
            && a.iter().zip(b).all(|(row, rhs)| {
                row.iter()
                    .zip(x)
                    .map(|(&r, v)| int(r) * v)
                    .sum::<Rational>()
                    <= int(*rhs)
            })
    };
    let mut best: Option<Rational> = None;
    let m = planes.len();
    let mut pick = vec![0usize; n];
    fn next(pick: &mut [usize], m: usize) -> bool {
        let n = pick.len();
        let mut i = n;
        while i > 0 {
            i -= 1;
            if pick[i] < m - (n - i) {
                pick[i] += 1;
                for k in i + 1..n {
                    pick[k] = pick[k - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    for (i, p) in pick.iter_mut().enumerate() {
        *p = i;
    }
    loop {
        let rows = pick.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs = pick.iter().map(|&i| planes[i].1.clone()).collect();
        if let Some(x) = solve_square(rows, rhs) {
            if feasible(&x) {
                let value: Rational = c.iter().zip(&x).map(|(&k, v)| int(k) * v).sum();
                if best.as_ref().map_or(true, |b| &value > b) {
                    best = Some(value);
                }
            }
        }
        if !next(&mut pick, m) {
            break;
        }
    }
    best
}

fn small_lp() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>, Vec<i64>)> {
    (2usize..4, 1usize..4).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec(proptest::collection::vec(-3i64..4, n), m),
            proptest::collection::vec(-4i64..11, m),
            proptest::collection::vec(-3i64..4, n),
        )
    })
}

fn build(a: &[Vec<i64>], b: &[i64], c: &[i64], upper: Option<i64>) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let vars: Vec<_> = (0..c.len())
        .map(|j| lp.add_var(format!("x{j}"), Some(int(0)), upper.map(int)))
        .collect();
    for (row, rhs) in a.iter().zip(b) {
        let mut e = LinearExpr::new();
        for (v, &k) in vars.iter().zip(row) {
            e.add(*v, int(k));
        }
        lp.add_constraint(e, Relation::Le, int(*rhs));
    }
    let mut obj = LinearExpr::new();
    for (v, &k) in vars.iter().zip(c) {
        obj.add(*v, int(k));
    }
    lp.set_objective(obj);
    lp
}

proptest! {
    #![proptest_config(common::proptest_config(256))]

    #[test]
    fn simplex_matches_vertex_enumeration((a, b, c) in small_lp()) {
        let lp = build(&a, &b, &c, Some(5));
        let out = solve_lp(&lp).unwrap();
        match vertex_optimum(&a, &b, &c, 5) {
            Some(best) => {
                prop_assert_eq!(out.status, LpStatus::Optimal);
                prop_assert!(lp.is_feasible(&out.values));
                prop_assert_eq!(out.objective, best);
            }
            None => prop_assert_eq!(out.status, LpStatus::Infeasible),
        }
    }

    #[test]
    fn duality((a, b, c) in small_lp()) {
        // max c.x, Ax <= b, x >= 0   against   min b.y, A^T y >= c, y >= 0
        let primal = solve_lp(&build(&a, &b, &c, None)).unwrap();
        let mut dual = LinearProgram::new();
        let ys: Vec<_> = (0..b.len()).map(|i| dual.add_var(format!("y{i}"), Some(int(0)), None)).collect();
        for j in 0..c.len() {
            let mut e = LinearExpr::new();
            for (i, y) in ys.iter().enumerate() {
                e.add(*y, int(a[i][j]));
            }
            dual.add_constraint(e, Relation::Ge, int(c[j]));
        }
        let mut obj = LinearExpr::new();
        for (y, &rhs) in ys.iter().zip(&b) {
            obj.add(*y, int(-rhs));
        }
        dual.set_objective(obj);
        let dual_out = solve_lp(&dual).unwrap();
        match primal.status {
            LpStatus::Optimal => {
                prop_assert_eq!(dual_out.status, LpStatus::Optimal);
                // weak duality at the dual point, tight at the optimum
                let dual_value = -dual_out.objective.clone();
                prop_assert!(dual_value >= primal.objective);
                prop_assert_eq!(dual_value, primal.objective);
            }
            LpStatus::Unbounded => prop_assert_eq!(dual_out.status, LpStatus::Infeasible),
            LpStatus::Infeasible => prop_assert_ne!(dual_out.status, LpStatus::Optimal),
        }
    }
}
