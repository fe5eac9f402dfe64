//! CPLEX LP text output.

use std::fmt::Write;

use super::model::{LpModel, RowCmp, Sense};

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' }).collect()
}

fn terms(out: &mut String, model: &LpModel, ts: &[(usize, f64)]) {
    if ts.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (k, &(v, c)) in ts.iter().enumerate() {
        let sign = if c < 0.0 { "-" } else if k == 0 { "" } else { "+" };
        let _ = write!(out, " {sign} {} {}", c.abs(), sanitize(&model.vars[v].name));
    }
}

/// Renders the model in CPLEX LP format. Variable names are sanitized.
pub fn to_lp_format(model: &LpModel) -> String {
    let mut out = String::new();
    match &model.objective {
        Some(o) => {
            out.push_str(if o.sense == Sense::Minimize { "Minimize\n obj:" } else { "Maximize\n obj:" });
            terms(&mut out, model, &o.terms);
        }
        None => out.push_str("Minimize\n obj: 0"),
    }
    out.push_str("\nSubject To\n");
    for (i, r) in model.rows.iter().enumerate() {
        let _ = write!(out, " r{i}_{}:", sanitize(&r.name));
        terms(&mut out, model, &r.terms);
        let op = match r.cmp {
            RowCmp::Le => "<=",
            RowCmp::Ge => ">=",
            RowCmp::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", r.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.vars {
        let n = sanitize(&v.name);
        match (v.lb.is_finite(), v.ub.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " {n} free");
            }
            (true, true) => {
                let _ = writeln!(out, " {} <= {n} <= {}", v.lb, v.ub);
            }
            (true, false) => {
                let _ = writeln!(out, " {n} >= {}", v.lb);
            }
            (false, true) => {
                let _ = writeln!(out, " -inf <= {n} <= {}", v.ub);
            }
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{Objective, RowCmp};

    #[test]
    fn renders_sections() {
        let mut m = LpModel::new();
        let x = m.add_var("t[1]", 0.0, f64::INFINITY);
        let y = m.add_var("fuel'", f64::NEG_INFINITY, f64::INFINITY);
        m.add_row("sep", &[(x, 1.0), (y, -2.5)], RowCmp::Ge, 0.001);
        m.objective = Some(Objective::minimize(vec![(x, 1.0)]));
        let s = to_lp_format(&m);
        assert!(s.starts_with("Minimize\n obj:  1 t_1_"));
        assert!(s.contains("r0_sep:  1 t_1_ - 2.5 fuel_ >= 0.001"));
        assert!(s.contains(" fuel_ free"));
        assert!(s.ends_with("End\n"));
    }
}
