//! Grounding: typed parameter enumeration, static folding and normalization.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::ast::*;
use super::PddlError;
use crate::model::{
    AssignOp, Condition, ContinuousEffect, DiscreteEffect, DurationCmp, DurationConstraint as GDur,
    DurativeAction, FactSet, GroundExpr, GroundedProblem, InstantAction, LinearExpr, Metric, NumericCondition,
    NumericEffect, Rvalue,
};

fn semantic(msg: impl Into<String>) -> PddlError {
    PddlError::Semantic(msg.into())
}

/// Why a binding produced no grounded action.
enum Skip {
    Prune,
    Fail(PddlError),
}

impl From<PddlError> for Skip {
    fn from(e: PddlError) -> Self {
        Skip::Fail(e)
    }
}

struct Grounder<'a> {
    domain: &'a DomainAst,
    predicates: HashMap<&'a str, usize>,
    functions: HashMap<&'a str, usize>,
    /// object -> type
    objects: BTreeMap<String, String>,
    /// type -> parent
    parents: HashMap<String, String>,
    static_preds: HashSet<String>,
    static_funcs: HashSet<String>,
    static_true: HashSet<String>,
    static_values: HashMap<String, f64>,
    facts: Vec<String>,
    fact_ids: HashMap<String, usize>,
    fluents: Vec<String>,
    fluent_ids: HashMap<String, usize>,
}

fn key(name: &str, args: &[String]) -> String {
    let mut s = format!("({name}");
    for a in args {
        s.push(' ');
        s.push_str(a);
    }
    s.push(')');
    s
}

fn effect_heads(d: &DomainAst) -> (HashSet<String>, HashSet<String>) {
    let mut preds = HashSet::new();
    let mut funcs = HashSet::new();
    let mut note = |e: &Effect| match e {
        Effect::Add(a) | Effect::Del(a) => {
            preds.insert(a.name.clone());
        }
        Effect::Numeric(_, a, _) => {
            funcs.insert(a.name.clone());
        }
    };
    for a in &d.actions {
        a.effects.iter().for_each(&mut note);
    }
    let mut cont = Vec::new();
    for a in &d.durative_actions {
        for e in &a.effects {
            match e {
                TimedEffect::AtStart(e) | TimedEffect::AtEnd(e) => note(e),
                TimedEffect::Continuous { fluent, .. } => cont.push(fluent.name.clone()),
            }
        }
    }
    funcs.extend(cont);
    (preds, funcs)
}

impl<'a> Grounder<'a> {
    fn new(domain: &'a DomainAst, problem: &ProblemAst) -> Result<Self, PddlError> {
        let mut parents = HashMap::new();
        for t in &domain.types {
            parents.insert(t.name.clone(), t.ty.clone());
        }
        let mut objects = BTreeMap::new();
        for o in domain.constants.iter().chain(&problem.objects) {
            if o.ty != "object" && !parents.contains_key(&o.ty) {
                return Err(semantic(format!("object {} has undeclared type {}", o.name, o.ty)));
            }
            objects.insert(o.name.clone(), o.ty.clone());
        }
        let predicates = domain.predicates.iter().map(|p| (p.name.as_str(), p.params.len())).collect();
        let functions = domain.functions.iter().map(|p| (p.name.as_str(), p.params.len())).collect();
        let (dyn_preds, dyn_funcs) = effect_heads(domain);
        let static_preds = domain.predicates.iter().map(|p| p.name.clone()).filter(|p| !dyn_preds.contains(p)).collect();
        let static_funcs = domain.functions.iter().map(|p| p.name.clone()).filter(|p| !dyn_funcs.contains(p)).collect();
        Ok(Grounder {
            domain,
            predicates,
            functions,
            objects,
            parents,
            static_preds,
            static_funcs,
            static_true: HashSet::new(),
            static_values: HashMap::new(),
            facts: vec![],
            fact_ids: HashMap::new(),
            fluents: vec![],
            fluent_ids: HashMap::new(),
        })
    }

    fn is_subtype(&self, ty: &str, of: &str) -> bool {
        let mut t = ty.to_string();
        for _ in 0..=self.parents.len() {
            if t == of {
                return true;
            }
            match self.parents.get(&t) {
                Some(p) => t = p.clone(),
                None => return of == "object",
            }
        }
        false
    }

    fn objects_of(&self, ty: &str) -> Vec<String> {
        self.objects.iter().filter(|(_, t)| self.is_subtype(t, ty)).map(|(o, _)| o.clone()).collect()
    }

    fn resolve(&self, args: &[Term], binding: &HashMap<&str, String>) -> Result<Vec<String>, PddlError> {
        args.iter()
            .map(|t| match t {
                Term::Var(v) => binding.get(v.as_str()).cloned().ok_or_else(|| semantic(format!("unbound variable ?{v}"))),
                Term::Const(c) => {
                    if self.objects.contains_key(c) {
                        Ok(c.clone())
                    } else {
                        Err(semantic(format!("undeclared object {c}")))
                    }
                }
            })
            .collect()
    }

    fn check_pred(&self, a: &Atom) -> Result<(), PddlError> {
        match self.predicates.get(a.name.as_str()) {
            None => Err(semantic(format!("undeclared predicate {}", a.name))),
            Some(&n) if n != a.args.len() => Err(semantic(format!("predicate {} expects {n} arguments", a.name))),
            _ => Ok(()),
        }
    }

    fn check_func(&self, a: &Atom) -> Result<(), PddlError> {
        match self.functions.get(a.name.as_str()) {
            None => Err(semantic(format!("undeclared function {}", a.name))),
            Some(&n) if n != a.args.len() => Err(semantic(format!("function {} expects {n} arguments", a.name))),
            _ => Ok(()),
        }
    }

    fn fact(&mut self, k: String) -> usize {
        if let Some(&id) = self.fact_ids.get(&k) {
            return id;
        }
        let id = self.facts.len();
        self.facts.push(k.clone());
        self.fact_ids.insert(k, id);
        id
    }

    fn fluent(&mut self, k: String) -> usize {
        if let Some(&id) = self.fluent_ids.get(&k) {
            return id;
        }
        let id = self.fluents.len();
        self.fluents.push(k.clone());
        self.fluent_ids.insert(k, id);
        id
    }

    fn load_init(&mut self, problem: &ProblemAst) -> Result<(Vec<usize>, Vec<(usize, f64)>), PddlError> {
        let empty = HashMap::new();
        let mut facts = Vec::new();
        let mut values = Vec::new();
        for el in &problem.init {
            match el {
                InitElement::Fact(a) => {
                    self.check_pred(a)?;
                    let k = key(&a.name, &self.resolve(&a.args, &empty)?);
                    if self.static_preds.contains(&a.name) {
                        self.static_true.insert(k);
                    } else {
                        facts.push(self.fact(k));
                    }
                }
                InitElement::Value(a, v) => {
                    self.check_func(a)?;
                    let k = key(&a.name, &self.resolve(&a.args, &empty)?);
                    if self.static_funcs.contains(&a.name) {
                        self.static_values.insert(k, *v);
                    } else {
                        values.push((self.fluent(k), *v));
                    }
                }
            }
        }
        Ok((facts, values))
    }

    /// Grounds an expression; `Prune` when a static fluent is undefined.
    fn expr(&mut self, e: &Expr, b: &HashMap<&str, String>, total_time: bool) -> Result<GroundExpr, Skip> {
        Ok(match e {
            Expr::Num(v) => GroundExpr::Num(*v),
            Expr::Duration => GroundExpr::Duration,
            Expr::Time => return Err(Skip::Fail(semantic("#t outside a continuous effect"))),
            Expr::Fluent(a) if total_time && a.name == "total-time" && a.args.is_empty() => GroundExpr::Duration,
            Expr::Fluent(a) => {
                self.check_func(a)?;
                let k = key(&a.name, &self.resolve(&a.args, b)?);
                if self.static_funcs.contains(&a.name) {
                    match self.static_values.get(&k) {
                        Some(v) => GroundExpr::Num(*v),
                        None => return Err(Skip::Prune),
                    }
                } else {
                    GroundExpr::Fluent(self.fluent(k))
                }
            }
            Expr::Add(xs) => GroundExpr::Add(xs.iter().map(|x| self.expr(x, b, total_time)).collect::<Result<_, _>>()?),
            Expr::Mul(xs) => GroundExpr::Mul(xs.iter().map(|x| self.expr(x, b, total_time)).collect::<Result<_, _>>()?),
            Expr::Sub(x, y) => {
                GroundExpr::Sub(Box::new(self.expr(x, b, total_time)?), Box::new(self.expr(y, b, total_time)?))
            }
            Expr::Neg(x) => GroundExpr::Sub(Box::new(GroundExpr::Num(0.0)), Box::new(self.expr(x, b, total_time)?)),
            Expr::Div(x, y) => {
                GroundExpr::Div(Box::new(self.expr(x, b, total_time)?), Box::new(self.expr(y, b, total_time)?))
            }
        })
    }

    /// Adds `gd` to `cond`; `Prune` when a static part is false.
    fn condition(&mut self, gd: &Gd, b: &HashMap<&str, String>, cond: &mut Condition) -> Result<(), Skip> {
        match gd {
            Gd::And(xs) => {
                for x in xs {
                    self.condition(x, b, cond)?;
                }
            }
            Gd::Atom(a) | Gd::Not(a) => {
                self.check_pred(a)?;
                let positive = matches!(gd, Gd::Atom(_));
                let k = key(&a.name, &self.resolve(&a.args, b)?);
                if self.static_preds.contains(&a.name) {
                    if self.static_true.contains(&k) != positive {
                        return Err(Skip::Prune);
                    }
                } else {
                    let id = self.fact(k);
                    if positive {
                        cond.positive.push(id);
                    } else {
                        cond.negative.push(id);
                    }
                }
            }
            Gd::Compare(cmp, l, r) => {
                let l = self.expr(l, b, false)?;
                let r = self.expr(r, b, false)?;
                let diff = GroundExpr::Sub(Box::new(l), Box::new(r));
                if diff.mentions_duration() {
                    return Err(Skip::Fail(PddlError::Unsupported {
                        construct: "?duration in a condition".into(),
                        pos: Default::default(),
                    }));
                }
                let (lin, _) = match diff.linearize() {
                    Some(x) => x,
                    None => {
                        // constant but nonlinear, e.g. a product of static values
                        if let Ok(v) = diff.evaluate(&[], None) {
                            (LinearExpr::constant(v), 0.0)
                        } else {
                            return Err(Skip::Fail(PddlError::Nonlinear(format!("condition {gd}"))));
                        }
                    }
                };
                let nc = NumericCondition::new(lin, *cmp, 0.0);
                if nc.expr.is_constant() {
                    if !nc.holds_value(0.0) {
                        return Err(Skip::Prune);
                    }
                } else {
                    cond.numeric.push(nc);
                }
            }
        }
        Ok(())
    }

    fn effect(&mut self, e: &Effect, b: &HashMap<&str, String>) -> Result<DiscreteEffect, Skip> {
        Ok(match e {
            Effect::Add(a) | Effect::Del(a) => {
                self.check_pred(a)?;
                let id = {
                    let k = key(&a.name, &self.resolve(&a.args, b)?);
                    self.fact(k)
                };
                if matches!(e, Effect::Add(_)) {
                    DiscreteEffect::Add(id)
                } else {
                    DiscreteEffect::Delete(id)
                }
            }
            Effect::Numeric(kind, a, rv) => {
                self.check_func(a)?;
                let k = key(&a.name, &self.resolve(&a.args, b)?);
                let fluent = self.fluent(k);
                let g = self.expr(rv, b, false)?;
                let rvalue = match g.linearize() {
                    Some((expr, duration_coeff)) => Rvalue::Linear { expr, duration_coeff },
                    None => Rvalue::Nonlinear(g),
                };
                let op = match kind {
                    AssignKind::Assign => AssignOp::Assign,
                    AssignKind::Increase => AssignOp::Increase,
                    AssignKind::Decrease => AssignOp::Decrease,
                    AssignKind::ScaleUp => AssignOp::ScaleUp,
                    AssignKind::ScaleDown => AssignOp::ScaleDown,
                };
                DiscreteEffect::Numeric(NumericEffect { fluent, op, rvalue })
            }
        })
    }

    fn bindings(&self, params: &[TypedName]) -> Result<Vec<Vec<String>>, PddlError> {
        let mut out: Vec<Vec<String>> = vec![vec![]];
        for p in params {
            if p.ty != "object" && !self.parents.contains_key(&p.ty) {
                return Err(semantic(format!("parameter ?{} has undeclared type {}", p.name, p.ty)));
            }
            let objs = self.objects_of(&p.ty);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    objs.iter().map(move |o| {
                        let mut v = prefix.clone();
                        v.push(o.clone());
                        v
                    })
                })
                .collect();
        }
        Ok(out)
    }

    fn instant(&mut self, s: &ActionSchema, args: &[String]) -> Result<InstantAction, Skip> {
        let b: HashMap<&str, String> = s.params.iter().map(|p| p.name.as_str()).zip(args.iter().cloned()).collect();
        let mut pre = Condition::default();
        self.condition(&s.precondition, &b, &mut pre)?;
        let mut effects = Vec::new();
        for e in &s.effects {
            let ge = self.effect(e, &b)?;
            if let DiscreteEffect::Numeric(n) = &ge {
                if n.rvalue.mentions_duration() {
                    return Err(Skip::Fail(semantic(format!("?duration in instantaneous action {}", s.name))));
                }
            }
            effects.push(ge);
        }
        Ok(InstantAction { name: s.name.clone(), args: args.to_vec(), pre, effects })
    }

    fn durative(&mut self, s: &DurativeSchema, args: &[String]) -> Result<DurativeAction, Skip> {
        let b: HashMap<&str, String> = s.params.iter().map(|p| p.name.as_str()).zip(args.iter().cloned()).collect();
        let mut duration = Vec::new();
        for d in &s.duration {
            let g = self.expr(&d.expr, &b, false)?;
            let expr = match g.linearize() {
                Some((e, _)) => e,
                None => match g.evaluate(&[], None) {
                    Ok(v) => LinearExpr::constant(v),
                    Err(_) => {
                        return Err(Skip::Fail(PddlError::Unsupported {
                            construct: format!("nonlinear duration expression in {}", s.name),
                            pos: Default::default(),
                        }))
                    }
                },
            };
            let cmp = match d.cmp {
                Comparison::Le => DurationCmp::Le,
                Comparison::Ge => DurationCmp::Ge,
                _ => DurationCmp::Eq,
            };
            duration.push(GDur { cmp, expr });
        }
        let mut a = DurativeAction {
            name: s.name.clone(),
            args: args.to_vec(),
            duration,
            start_cond: Condition::default(),
            end_cond: Condition::default(),
            invariant: Condition::default(),
            start_effects: vec![],
            end_effects: vec![],
            continuous: vec![],
        };
        if let Ok((lb, ub)) = a.duration_bounds(&[]) {
            if lb > ub + 1e-9 || ub < 0.0 {
                return Err(Skip::Prune);
            }
        }
        for c in &s.condition {
            match c {
                TimedGd::AtStart(g) => self.condition(g, &b, &mut a.start_cond)?,
                TimedGd::AtEnd(g) => self.condition(g, &b, &mut a.end_cond)?,
                TimedGd::OverAll(g) => self.condition(g, &b, &mut a.invariant)?,
            }
        }
        for e in &s.effects {
            match e {
                TimedEffect::AtStart(e) => {
                    let ge = self.effect(e, &b)?;
                    a.start_effects.push(ge);
                }
                TimedEffect::AtEnd(e) => {
                    let ge = self.effect(e, &b)?;
                    a.end_effects.push(ge);
                }
                TimedEffect::Continuous { increase, fluent, rate } => {
                    self.check_func(fluent)?;
                    let k = key(&fluent.name, &self.resolve(&fluent.args, &b)?);
                    let fid = self.fluent(k);
                    let g = self.expr(rate, &b, false)?;
                    if g.mentions_duration() {
                        return Err(Skip::Fail(PddlError::Unsupported {
                            construct: "?duration in a continuous rate".into(),
                            pos: Default::default(),
                        }));
                    }
                    let lin = match g.linearize() {
                        Some((e, _)) => e,
                        None => match g.evaluate(&[], None) {
                            Ok(v) => LinearExpr::constant(v),
                            Err(_) => return Err(Skip::Fail(PddlError::Nonlinear(format!("rate of {fluent} in {}", s.name)))),
                        },
                    };
                    let rate = if *increase { lin } else { lin.scaled(-1.0) };
                    a.continuous.push(ContinuousEffect { fluent: fid, rate });
                }
            }
        }
        Ok(a)
    }
}

/// Grounds a parsed domain and problem. Action order is lexicographic by
/// schema name, then by bound objects.
pub fn ground(domain: &DomainAst, problem: &ProblemAst) -> Result<GroundedProblem, PddlError> {
    if !problem.domain.is_empty() && problem.domain != domain.name {
        return Err(semantic(format!("problem is for domain {}, not {}", problem.domain, domain.name)));
    }
    let mut g = Grounder::new(domain, problem)?;
    let (init_facts, init_values) = g.load_init(problem)?;

    let mut instant = Vec::new();
    let mut schemas: Vec<&ActionSchema> = g.domain.actions.iter().collect();
    schemas.sort_by(|a, b| a.name.cmp(&b.name));
    for s in schemas {
        for args in g.bindings(&s.params)? {
            match g.instant(s, &args) {
                Ok(a) => instant.push(a),
                Err(Skip::Prune) => {}
                Err(Skip::Fail(e)) => return Err(e),
            }
        }
    }
    let mut durative = Vec::new();
    let mut schemas: Vec<&DurativeSchema> = g.domain.durative_actions.iter().collect();
    schemas.sort_by(|a, b| a.name.cmp(&b.name));
    for s in schemas {
        for args in g.bindings(&s.params)? {
            match g.durative(s, &args) {
                Ok(a) => durative.push(a),
                Err(Skip::Prune) => {}
                Err(Skip::Fail(e)) => return Err(e),
            }
        }
    }

    let empty = HashMap::new();
    let mut goal = Condition::default();
    match g.condition(&problem.goal, &empty, &mut goal) {
        Ok(()) => {}
        // statically false goal: keep an unsatisfiable row so the problem is unsolvable
        Err(Skip::Prune) => goal.numeric.push(NumericCondition::new(LinearExpr::constant(0.0), Comparison::Ge, 1.0)),
        Err(Skip::Fail(e)) => return Err(e),
    }

    let metric = match &problem.metric {
        None => None,
        Some(m) => {
            let ge = match g.expr(&m.expr, &empty, true) {
                Ok(x) => x,
                Err(Skip::Prune) => return Err(semantic("metric references an undefined static fluent")),
                Err(Skip::Fail(e)) => return Err(e),
            };
            let (expr, total_time) = ge.linearize().ok_or_else(|| PddlError::Nonlinear("metric".into()))?;
            Some(Metric { minimize: m.minimize, expr, total_time })
        }
    };

    let mut values = vec![None; g.fluents.len()];
    for (f, v) in init_values {
        values[f] = Some(v);
    }
    let mut seen = BTreeSet::new();
    for a in &durative {
        if !seen.insert(a.display_name()) {
            return Err(semantic(format!("duplicate grounded action {}", a.display_name())));
        }
    }
    Ok(GroundedProblem {
        name: problem.name.clone(),
        facts: g.facts,
        fluents: g.fluents,
        instant,
        durative,
        init_facts: FactSet::from_iter(init_facts),
        init_values: values,
        goal,
        metric,
    })
}

#[cfg(test)]
mod tests {
    use super::super::load;
    use super::*;

    const DOM: &str = "(define (domain d) (:requirements :typing :fluents :durative-actions)
      (:types car loc)
      (:predicates (at ?c - car ?l - loc) (road ?a ?b - loc))
      (:functions (fuel ?c - car) (speed ?a ?b - loc))
      (:action hop :parameters (?c - car) :precondition (and) :effect (increase (fuel ?c) 1))
      (:durative-action drive :parameters (?c - car ?a ?b - loc)
        :duration (= ?duration 10)
        :condition (and (at start (at ?c ?a)) (at start (road ?a ?b)) (over all (>= (fuel ?c) 1)))
        :effect (and (at start (not (at ?c ?a))) (at end (at ?c ?b))
                     (decrease (fuel ?c) (* #t (/ (speed ?a ?b) 100))))))";

    const PROB: &str = "(define (problem p) (:domain d)
      (:objects c1 c2 - car x y - loc)
      (:init (at c1 x) (road x y) (= (speed x y) 60) (= (fuel c1) 5))
      (:goal (at c1 y)))";

    #[test]
    fn one_unary_schema_two_objects() {
        let p = load(DOM, PROB).unwrap();
        assert_eq!(p.instant.len(), 2);
        assert_eq!(p.instant[0].display_name(), "(hop c1)");
        assert_eq!(p.instant[1].display_name(), "(hop c2)");
    }

    #[test]
    fn static_rate_folded() {
        let p = load(DOM, PROB).unwrap();
        // only road x y is declared
        assert_eq!(p.durative.len(), 2);
        let d = &p.durative[0];
        assert_eq!(d.display_name(), "(drive c1 x y)");
        assert!(d.continuous[0].rate.is_constant());
        assert!((d.continuous[0].rate.constant + 0.6).abs() < 1e-12);
        assert_eq!(p.init_values[p.fluent_id("(fuel c1)").unwrap()], Some(5.0));
        assert_eq!(p.init_values[p.fluent_id("(fuel c2)").unwrap()], None);
    }

    #[test]
    fn undeclared_object_is_semantic_error() {
        let bad = PROB.replace("(:goal (at c1 y))", "(:goal (at c9 y))");
        assert!(matches!(load(DOM, &bad), Err(PddlError::Semantic(_))));
    }

    #[test]
    fn grounding_is_deterministic() {
        assert_eq!(load(DOM, PROB).unwrap(), load(DOM, PROB).unwrap());
    }

    #[test]
    fn nonlinear_condition_rejected() {
        let dom = DOM.replace("(>= (fuel ?c) 1)", "(>= (* (fuel ?c) (fuel ?c)) 1)");
        assert!(matches!(load(&dom, PROB), Err(PddlError::Nonlinear(_))));
    }
}
