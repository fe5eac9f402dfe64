//! PDDL text output for the AST. `parse(print(ast)) == ast` for every parsed AST.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::*;

fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => f.write_str(c),
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_char(')')
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let nary = |f: &mut Formatter<'_>, op: &str, xs: &[Expr]| -> fmt::Result {
            write!(f, "({op}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            f.write_char(')')
        };
        match self {
            Expr::Num(v) => f.write_str(&fmt_num(*v)),
            Expr::Fluent(a) => write!(f, "{a}"),
            Expr::Duration => f.write_str("?duration"),
            Expr::Time => f.write_str("#t"),
            Expr::Add(xs) => nary(f, "+", xs),
            Expr::Mul(xs) => nary(f, "*", xs),
            Expr::Sub(a, b) => write!(f, "(- {a} {b})"),
            Expr::Neg(a) => write!(f, "(- {a})"),
            Expr::Div(a, b) => write!(f, "(/ {a} {b})"),
        }
    }
}

impl Display for Gd {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Gd::And(xs) => {
                f.write_str("(and")?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                f.write_char(')')
            }
            Gd::Atom(a) => write!(f, "{a}"),
            Gd::Not(a) => write!(f, "(not {a})"),
            Gd::Compare(c, a, b) => write!(f, "({} {a} {b})", c.symbol()),
        }
    }
}

impl Display for Effect {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Effect::Add(a) => write!(f, "{a}"),
            Effect::Del(a) => write!(f, "(not {a})"),
            Effect::Numeric(k, a, e) => write!(f, "({} {a} {e})", k.keyword()),
        }
    }
}

fn typed(names: &[TypedName], var: bool) -> String {
    names
        .iter()
        .map(|t| format!("{}{} - {}", if var { "?" } else { "" }, t.name, t.ty))
        .collect::<Vec<_>>()
        .join(" ")
}

fn signature(s: &Signature) -> String {
    if s.params.is_empty() {
        format!("({})", s.name)
    } else {
        format!("({} {})", s.name, typed(&s.params, true))
    }
}

impl Display for DomainAst {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (domain {})", self.name)?;
        if !self.requirements.is_empty() {
            writeln!(f, "  (:requirements {})", self.requirements.join(" "))?;
        }
        if !self.types.is_empty() {
            writeln!(f, "  (:types {})", typed(&self.types, false))?;
        }
        if !self.constants.is_empty() {
            writeln!(f, "  (:constants {})", typed(&self.constants, false))?;
        }
        if !self.predicates.is_empty() {
            let ps: Vec<String> = self.predicates.iter().map(signature).collect();
            writeln!(f, "  (:predicates {})", ps.join(" "))?;
        }
        if !self.functions.is_empty() {
            let fs: Vec<String> = self.functions.iter().map(|s| format!("{} - number", signature(s))).collect();
            writeln!(f, "  (:functions {})", fs.join(" "))?;
        }
        for a in &self.actions {
            writeln!(f, "  (:action {}", a.name)?;
            writeln!(f, "    :parameters ({})", typed(&a.params, true))?;
            writeln!(f, "    :precondition {}", a.precondition)?;
            let effs: Vec<String> = a.effects.iter().map(|e| e.to_string()).collect();
            writeln!(f, "    :effect (and {}))", effs.join(" "))?;
        }
        for a in &self.durative_actions {
            writeln!(f, "  (:durative-action {}", a.name)?;
            writeln!(f, "    :parameters ({})", typed(&a.params, true))?;
            let ds: Vec<String> =
                a.duration.iter().map(|d| format!("({} ?duration {})", d.cmp.symbol(), d.expr)).collect();
            writeln!(f, "    :duration (and {})", ds.join(" "))?;
            let cs: Vec<String> = a
                .condition
                .iter()
                .map(|c| match c {
                    TimedGd::AtStart(g) => format!("(at start {g})"),
                    TimedGd::AtEnd(g) => format!("(at end {g})"),
                    TimedGd::OverAll(g) => format!("(over all {g})"),
                })
                .collect();
            writeln!(f, "    :condition (and {})", cs.join(" "))?;
            let es: Vec<String> = a
                .effects
                .iter()
                .map(|e| match e {
                    TimedEffect::AtStart(e) => format!("(at start {e})"),
                    TimedEffect::AtEnd(e) => format!("(at end {e})"),
                    TimedEffect::Continuous { increase, fluent, rate } => {
                        format!("({} {fluent} (* #t {rate}))", if *increase { "increase" } else { "decrease" })
                    }
                })
                .collect();
            writeln!(f, "    :effect (and {}))", es.join(" "))?;
        }
        f.write_str(")\n")
    }
}

impl Display for ProblemAst {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (problem {})", self.name)?;
        writeln!(f, "  (:domain {})", self.domain)?;
        if !self.objects.is_empty() {
            writeln!(f, "  (:objects {})", typed(&self.objects, false))?;
        }
        f.write_str("  (:init")?;
        for el in &self.init {
            match el {
                InitElement::Fact(a) => write!(f, "\n    {a}")?,
                InitElement::Value(a, v) => write!(f, "\n    (= {a} {})", fmt_num(*v))?,
            }
        }
        f.write_str(")\n")?;
        writeln!(f, "  (:goal {})", self.goal)?;
        if let Some(m) = &self.metric {
            writeln!(f, "  (:metric {} {})", if m.minimize { "minimize" } else { "maximize" }, m.expr)?;
        }
        f.write_str(")\n")
    }
}
