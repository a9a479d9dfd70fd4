//! Data behind the six figures, and general sweeps.

use anyhow::{bail, Context};

use hpm_core::VanillaOption;

use crate::config::{ContractKind, ExperimentConfig, Method};
use crate::pricing;
use crate::table::{par_rows, Table};

pub const SURFACE_MIN: f64 = 20.0;
pub const SURFACE_MAX: f64 = 60.0;
pub const SURFACE_POINTS: usize = 41;

fn describe(table: &mut Table, cfg: &ExperimentConfig) {
    for (k, v) in cfg.parameters() {
        table.meta(k, v);
    }
}

fn basket_assumptions(table: &mut Table, cfg: &ExperimentConfig) {
    if cfg.settings.corr.is_none() {
        table.meta("assumption", "asset correlation a12 = 0 (not given for this experiment)");
    }
    strike_assumption(table, cfg);
}

fn quanto_assumptions(table: &mut Table, cfg: &ExperimentConfig) {
    if cfg.settings.q.is_none() {
        table.meta("assumption", "dividend yield q = 0 (not given for this experiment)");
    }
    strike_assumption(table, cfg);
}

fn strike_assumption(table: &mut Table, cfg: &ExperimentConfig) {
    if cfg.settings.strike.is_none() || cfg.settings.maturity.is_none() {
        table.meta("assumption", "strike E = 40 and maturity T = 0.5 reused from the single-asset experiment");
    }
}

/// Builds figure `id` (1..=6). The contract is implied by the figure.
pub fn figure(id: u8, base: &ExperimentConfig) -> anyhow::Result<Table> {
    let mut cfg = base.clone();
    cfg.contract = match id {
        1 | 2 => ContractKind::Single,
        3 | 4 => ContractKind::Basket,
        5 | 6 => ContractKind::Quanto,
        _ => bail!("figure must be between 1 and 6, got {id}"),
    };
    let approx = match (id, cfg.method) {
        (_, Method::Exact) => Method::Hpm2,
        (3 | 4, Method::BasketLiteral) => Method::BasketLiteral,
        (_, Method::BasketLiteral) => bail!("method basket-literal applies to basket figures only"),
        (1 | 2, Method::Hpm1) => Method::Hpm1,
        (_, Method::Hpm1) => bail!("method hpm1 applies to single-asset figures only"),
        (_, m) => m,
    };
    cfg.method = approx;
    cfg.validate_contract()?;

    let mut table = match id {
        1 => figure1(&cfg)?,
        2 => figure2(&cfg)?,
        3 | 5 => surface(&cfg, false)?,
        _ => surface(&cfg, true)?,
    };
    let mut head = Table::new(Vec::new());
    head.meta("figure", id.to_string());
    describe(&mut head, &cfg);
    match cfg.contract {
        ContractKind::Basket => basket_assumptions(&mut head, &cfg),
        ContractKind::Quanto => quanto_assumptions(&mut head, &cfg),
        ContractKind::Single => {}
    }
    head.metadata.append(&mut table.metadata);
    table.metadata = head.metadata;
    table.check()?;
    Ok(table)
}

fn figure1(cfg: &ExperimentConfig) -> anyhow::Result<Table> {
    let axis = cfg.axis1(0.0, 100.0, 201)?.values();
    let mut t = Table::new(vec!["S", "exact", "hpm1", "hpm2"]);
    if axis.first() == Some(&0.0) {
        t.meta("note", "the S = 0 row holds the S -> 0+ limits");
    }
    t.rows = par_rows(axis.len(), |i| {
        let spec = VanillaOption { spot: axis[i], ..cfg.single };
        Ok(vec![
            axis[i],
            pricing::single(&spec, Method::Exact, cfg.order)?,
            pricing::single(&spec, Method::Hpm1, cfg.order)?,
            pricing::single(&spec, Method::Hpm2, cfg.order).with_context(|| format!("at S = {}", axis[i]))?,
        ])
    })?;
    Ok(t)
}

fn figure2(cfg: &ExperimentConfig) -> anyhow::Result<Table> {
    let s_axis = cfg.axis1(0.0, 100.0, 201)?.values();
    let t_axis = cfg.time_axis(26)?.values();
    let mut t = Table::new(vec!["S", "t", "error"]);
    t.meta("error", format!("exact - {}", cfg.method.name()));
    let n = s_axis.len() * t_axis.len();
    t.rows = par_rows(n, |k| {
        let (s, tv) = (s_axis[k / t_axis.len()], t_axis[k % t_axis.len()]);
        let spec = VanillaOption { spot: s, valuation_time: tv, ..cfg.single };
        let exact = pricing::single(&spec, Method::Exact, cfg.order)?;
        let approx = pricing::single(&spec, cfg.method, cfg.order).with_context(|| format!("at S = {s}, t = {tv}"))?;
        Ok(vec![s, tv, exact - approx])
    })?;
    Ok(t)
}

fn surface(cfg: &ExperimentConfig, error: bool) -> anyhow::Result<Table> {
    let a1 = cfg.axis1(SURFACE_MIN, SURFACE_MAX, SURFACE_POINTS)?.values();
    let a2 = cfg.axis2(SURFACE_MIN, SURFACE_MAX, SURFACE_POINTS)?.values();
    if a1.first() == Some(&0.0) || a2.first() == Some(&0.0) {
        bail!("two-asset surfaces need strictly positive asset prices");
    }
    let mut t = Table::new(vec!["S1", "S2", if error { "error" } else { "price" }]);
    if error {
        t.meta("error", format!("exact - {}", cfg.method.name()));
    }
    let contract = cfg.contract;
    t.rows = par_rows(a1.len() * a2.len(), |k| {
        let (s1, s2) = (a1[k / a2.len()], a2[k % a2.len()]);
        let price = |m: Method| match contract {
            ContractKind::Basket => pricing::basket(&pricing::basket_at(cfg, s1, s2), m, cfg.order),
            _ => pricing::quanto(&pricing::quanto_at(cfg, s1, s2), m, cfg.order),
        };
        let exact = price(Method::Exact)?;
        let value = if error { exact - price(cfg.method)? } else { exact };
        Ok(vec![s1, s2, value])
    })?;
    Ok(t)
}

/// Price sweep of the configured contract and method, with the exact value
/// and the deviation alongside.
pub fn grid(cfg: &ExperimentConfig) -> anyhow::Result<Table> {
    cfg.validate_contract()?;
    let mut t;
    let method = cfg.method;
    match cfg.contract {
        ContractKind::Single => {
            let axis = cfg.axis1(0.0, 100.0, 201)?.values();
            t = Table::new(vec!["S", "price", "exact", "deviation"]);
            t.rows = par_rows(axis.len(), |i| {
                let spec = VanillaOption { spot: axis[i], ..cfg.single };
                let p = pricing::single(&spec, method, cfg.order).with_context(|| format!("at S = {}", axis[i]))?;
                let e = pricing::single(&spec, Method::Exact, cfg.order)?;
                Ok(vec![axis[i], p, e, p - e])
            })?;
        }
        contract => {
            let a1 = cfg.axis1(SURFACE_MIN, SURFACE_MAX, SURFACE_POINTS)?.values();
            let a2 = cfg.axis2(SURFACE_MIN, SURFACE_MAX, SURFACE_POINTS)?.values();
            t = Table::new(vec!["S1", "S2", "price", "exact", "deviation"]);
            t.rows = par_rows(a1.len() * a2.len(), |k| {
                let (s1, s2) = (a1[k / a2.len()], a2[k % a2.len()]);
                let price = |m: Method| match contract {
                    ContractKind::Basket => pricing::basket(&pricing::basket_at(cfg, s1, s2), m, cfg.order),
                    _ => pricing::quanto(&pricing::quanto_at(cfg, s1, s2), m, cfg.order),
                };
                let (p, e) = (price(method)?, price(Method::Exact)?);
                Ok(vec![s1, s2, p, e, p - e])
            })?;
        }
    }
    let mut head = Table::new(Vec::new());
    describe(&mut head, cfg);
    head.metadata.append(&mut t.metadata);
    t.metadata = head.metadata;
    t.check()?;
    Ok(t)
}
