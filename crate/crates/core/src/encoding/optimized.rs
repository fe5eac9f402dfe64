use super::full::emit_rows;
use super::{
    duration_affine, duration_vars, effect_value, emit, emit_condition, emit_duration_rows, emit_stn_rows, Affine,
    EncodeError, PlanEncoding, Prefix,
};
use crate::lp::{LpModel, RowCmp, VarId};
use crate::model::{Comparison, DiscreteEffect, FluentId, NumericCondition};

/// Reduced encoding: a fluent gets a new variable only where its value can
/// change with the schedule, and invariant rows only where they can bind.
pub fn encode_optimized(prefix: &Prefix<'_>) -> Result<PlanEncoding, EncodeError> {
    let n = prefix.n();
    let problem = prefix.problem;
    let mut model = LpModel::new();
    let time_vars: Vec<VarId> = (1..=n).map(|h| model.add_var(format!("t{h}"), 0.0, f64::INFINITY)).collect();
    let time = |h: usize| if h == 0 { Affine::constant(0.0) } else { Affine::var(time_vars[h - 1]) };
    let dvars = duration_vars(&mut model, prefix);

    let encoded = prefix.ever_dependent();
    let slot = |v: FluentId| encoded.binary_search(&v).ok();
    // value of each encoded fluent after the latest processed happening
    let mut anchor: Vec<Option<Affine>> = encoded.iter().map(|&v| problem.init_values[v].map(Affine::constant)).collect();

    for h in 1..=n {
        let hp = prefix.at(h);
        let pre_lit = prefix.pre_literal(h);
        let mut before: Vec<Option<Affine>> = Vec::with_capacity(encoded.len());
        for (k, &v) in encoded.iter().enumerate() {
            let b = if !prefix.dependent_before(h, v) {
                pre_lit[v].map(Affine::constant)
            } else {
                let delta = prefix.rate_before(h, v);
                match &anchor[k] {
                    Some(a) if delta != 0.0 => {
                        let x = model.add_var(format!("{}_{h}", problem.fluents[v]), f64::NEG_INFINITY, f64::INFINITY);
                        let mut e = Affine::var(x).minus(a);
                        e.add_scaled(&time(h).minus(&time(h - 1)), -delta);
                        emit(&mut model, "flow", &e, RowCmp::Eq, 0.0);
                        Some(Affine::var(x))
                    }
                    a => a.clone(),
                }
            };
            before.push(b);
        }
        let value_before = |f: FluentId| -> Result<Affine, EncodeError> {
            match slot(f) {
                Some(k) => before[k].clone(),
                None => pre_lit[f].map(Affine::constant),
            }
            .ok_or(EncodeError::UnboundFluent(f))
        };

        let dur = duration_affine(prefix, h, &dvars, &time);
        let mut after: Vec<Option<Affine>> = Vec::with_capacity(encoded.len());
        for (k, &v) in encoded.iter().enumerate() {
            let effect = prefix.effects(h).iter().find_map(|e| match e {
                DiscreteEffect::Numeric(ne) if ne.fluent == v => Some(ne),
                _ => None,
            });
            let a = if !hp.dependent.contains(v) {
                hp.post[v].map(Affine::constant)
            } else if let Some(ne) = effect {
                let cur = before[k].clone().ok_or(EncodeError::UnboundFluent(v))?;
                let val = effect_value(ne.op, &ne.rvalue, v, &cur, &value_before, &|f| pre_lit.get(f).copied().flatten(), &dur)?;
                let x = model.add_var(format!("{}'_{h}", problem.fluents[v]), f64::NEG_INFINITY, f64::INFINITY);
                emit(&mut model, "step", &Affine::var(x).minus(&val), RowCmp::Eq, 0.0);
                Some(Affine::var(x))
            } else {
                before[k].clone()
            };
            after.push(a);
        }
        let value_after = |f: FluentId| -> Result<Affine, EncodeError> {
            match slot(f) {
                Some(k) => after[k].clone(),
                None => hp.post[f].map(Affine::constant),
            }
            .ok_or(EncodeError::UnboundFluent(f))
        };

        emit_rows(&mut model, "pre", problem.snap(hp.snap).pre, &value_before)?;
        for &(a, _) in prefix.running_before(h) {
            for c in &problem.durative[a].invariant.numeric {
                let rate: f64 = c.expr.terms().map(|(f, k)| k * prefix.rate_before(h, f)).sum();
                if moves_toward_violation(c.cmp, rate) {
                    emit_one(&mut model, "inv", c, &value_before)?;
                }
            }
        }
        for &(a, s) in &hp.running {
            let inv = &problem.durative[a].invariant;
            if s == h {
                emit_rows(&mut model, "inv", inv, &value_after)?;
                continue;
            }
            for c in &inv.numeric {
                if !c.expr.fluents().any(|f| written(prefix, h, f)) {
                    continue;
                }
                let mut change = Affine::constant(0.0);
                for (f, k) in c.expr.terms() {
                    change.add_scaled(&value_after(f)?.minus(&value_before(f)?), k);
                }
                if !change.is_constant() || moves_toward_violation(c.cmp, change.constant) {
                    emit_one(&mut model, "inv", c, &value_after)?;
                }
            }
        }
        anchor = after;
    }

    emit_stn_rows(&mut model, prefix.stn, &time);
    emit_duration_rows(&mut model, prefix, &dvars, &time);

    let final_values = if n == 0 {
        Vec::new()
    } else {
        encoded.iter().zip(&anchor).filter_map(|(&v, a)| Some((v, a.clone()?))).collect()
    };
    Ok(PlanEncoding {
        model,
        time_vars,
        final_values,
        final_literal: prefix.pre_literal(n + 1).into(),
        dependent_count: encoded.len(),
    })
}

fn written(prefix: &Prefix<'_>, h: usize, f: FluentId) -> bool {
    prefix.effects(h).iter().any(|e| matches!(e, DiscreteEffect::Numeric(ne) if ne.fluent == f))
}

/// Whether a change of `delta` in the expression can break `expr cmp rhs`.
fn moves_toward_violation(cmp: Comparison, delta: f64) -> bool {
    match cmp {
        Comparison::Ge | Comparison::Gt => delta < 0.0,
        Comparison::Le | Comparison::Lt => delta > 0.0,
        Comparison::Eq => delta != 0.0,
    }
}

fn emit_one(
    model: &mut LpModel,
    name: &str,
    c: &NumericCondition,
    value: &dyn Fn(FluentId) -> Result<Affine, EncodeError>,
) -> Result<(), EncodeError> {
    let mut e = Affine::constant(0.0);
    for (f, k) in c.expr.terms() {
        e.add_scaled(&value(f)?, k);
    }
    emit_condition(model, name, &e, c);
    Ok(())
}
