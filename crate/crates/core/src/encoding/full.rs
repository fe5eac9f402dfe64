use super::{
    duration_affine, duration_vars, effect_value, emit, emit_condition, emit_duration_rows, emit_stn_rows, Affine,
    EncodeError, PlanEncoding, Prefix,
};
use crate::lp::{LpModel, RowCmp, VarId};
use crate::model::{Condition, DiscreteEffect, FluentId};

/// Value variables before and after every happening for every fluent that is
/// ever schedule-dependent in the prefix.
pub fn encode_full(prefix: &Prefix<'_>) -> Result<PlanEncoding, EncodeError> {
    let n = prefix.n();
    let problem = prefix.problem;
    let mut model = LpModel::new();
    let time_vars: Vec<VarId> = (1..=n).map(|h| model.add_var(format!("t{h}"), 0.0, f64::INFINITY)).collect();
    let time = |h: usize| if h == 0 { Affine::constant(0.0) } else { Affine::var(time_vars[h - 1]) };
    let dvars = duration_vars(&mut model, prefix);

    let encoded = prefix.ever_dependent();
    let slot = |v: FluentId| encoded.binary_search(&v).ok();
    // pre[k][h - 1], post[k][h - 1]
    let mut pre: Vec<Vec<VarId>> = Vec::with_capacity(encoded.len());
    let mut post: Vec<Vec<VarId>> = Vec::with_capacity(encoded.len());
    for &v in &encoded {
        let name = &problem.fluents[v];
        pre.push((1..=n).map(|h| model.add_var(format!("{name}_{h}"), f64::NEG_INFINITY, f64::INFINITY)).collect());
        post.push((1..=n).map(|h| model.add_var(format!("{name}'_{h}"), f64::NEG_INFINITY, f64::INFINITY)).collect());
    }

    let value = |h: usize, v: FluentId, after: bool| -> Result<Affine, EncodeError> {
        match slot(v) {
            Some(k) => Ok(Affine::var(if after { post[k][h - 1] } else { pre[k][h - 1] })),
            None => {
                let lit = if after { prefix.at(h).post[v] } else { prefix.pre_literal(h)[v] };
                lit.map(Affine::constant).ok_or(EncodeError::UnboundFluent(v))
            }
        }
    };

    for (k, &v) in encoded.iter().enumerate() {
        for h in 1..=n {
            let prev = if h == 1 {
                match problem.init_values[v] {
                    Some(x) => Affine::constant(x),
                    None => continue,
                }
            } else {
                Affine::var(post[k][h - 2])
            };
            let delta = prefix.rate_before(h, v);
            let mut e = Affine::var(pre[k][h - 1]).minus(&prev);
            e.add_scaled(&time(h).minus(&time(h - 1)), -delta);
            emit(&mut model, "flow", &e, RowCmp::Eq, 0.0);
        }
    }

    for h in 1..=n {
        let dur = duration_affine(prefix, h, &dvars, &time);
        let pre_lit = prefix.pre_literal(h);
        for (k, &v) in encoded.iter().enumerate() {
            let effect = prefix.effects(h).iter().find_map(|e| match e {
                DiscreteEffect::Numeric(ne) if ne.fluent == v => Some(ne),
                _ => None,
            });
            let before = Affine::var(pre[k][h - 1]);
            let after = match effect {
                Some(ne) => effect_value(ne.op, &ne.rvalue, v, &before, &|f| value(h, f, false), &|f| pre_lit.get(f).copied().flatten(), &dur)?,
                None => before,
            };
            let e = Affine::var(post[k][h - 1]).minus(&after);
            emit(&mut model, "step", &e, RowCmp::Eq, 0.0);
        }

        emit_rows(&mut model, "pre", problem.snap(prefix.at(h).snap).pre, &|f| value(h, f, false))?;
        for &(a, _) in prefix.running_before(h) {
            emit_rows(&mut model, "inv", &problem.durative[a].invariant, &|f| value(h, f, false))?;
        }
        for &(a, _) in &prefix.at(h).running {
            emit_rows(&mut model, "inv", &problem.durative[a].invariant, &|f| value(h, f, true))?;
        }
    }

    emit_stn_rows(&mut model, prefix.stn, &time);
    emit_duration_rows(&mut model, prefix, &dvars, &time);

    let final_values = if n == 0 {
        Vec::new()
    } else {
        encoded.iter().enumerate().map(|(k, &v)| (v, Affine::var(post[k][n - 1]))).collect()
    };
    Ok(PlanEncoding {
        model,
        time_vars,
        final_values,
        final_literal: prefix.pre_literal(n + 1).into(),
        dependent_count: encoded.len(),
    })
}

pub(crate) fn emit_rows(
    model: &mut LpModel,
    name: &str,
    cond: &Condition,
    value: &dyn Fn(FluentId) -> Result<Affine, EncodeError>,
) -> Result<(), EncodeError> {
    for c in &cond.numeric {
        let mut e = Affine::constant(0.0);
        for (f, k) in c.expr.terms() {
            e.add_scaled(&value(f)?, k);
        }
        emit_condition(model, name, &e, c);
    }
    Ok(())
}
