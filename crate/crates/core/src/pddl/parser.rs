use super::ast::*;
use super::sexpr::{read_one, Pos, SExpr};
use super::PddlError;

pub const SUPPORTED_REQUIREMENTS: &[&str] = &[
    ":strips",
    ":typing",
    ":durative-actions",
    ":duration-inequalities",
    ":fluents",
    ":numeric-fluents",
    ":continuous-effects",
    ":negative-preconditions",
];

fn syntax(pos: Pos, expected: &str, found: &SExpr) -> PddlError {
    let found = match found {
        SExpr::Atom(a, _) => format!("'{a}'"),
        SExpr::List(..) => "list".to_string(),
    };
    PddlError::Syntax { pos, expected: expected.to_string(), found }
}

fn unsupported(construct: &str, pos: Pos) -> PddlError {
    PddlError::Unsupported { construct: construct.to_string(), pos }
}

fn list<'a>(e: &'a SExpr, what: &str) -> Result<&'a [SExpr], PddlError> {
    e.as_list().ok_or_else(|| syntax(e.pos(), what, e))
}

fn atom<'a>(e: &'a SExpr, what: &str) -> Result<&'a str, PddlError> {
    e.as_atom().ok_or_else(|| syntax(e.pos(), what, e))
}

fn expect_keyword(e: &SExpr, kw: &str) -> Result<(), PddlError> {
    match e.as_atom() {
        Some(a) if a == kw => Ok(()),
        _ => Err(syntax(e.pos(), &format!("'{kw}'"), e)),
    }
}

/// Parses `a b - t c - u d` into typed names; untyped names get `object`.
fn typed_list(items: &[SExpr], strip_var: bool) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let a = atom(&items[i], "name")?;
        if a == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| syntax(items[i].pos(), "type name", &items[i]))?;
            if ty.head() == Some("either") {
                return Err(unsupported("either", ty.pos()));
            }
            let ty = atom(ty, "type name")?;
            out.extend(pending.drain(..).map(|name| TypedName { name, ty: ty.to_string() }));
            i += 2;
            continue;
        }
        let name = if strip_var {
            a.strip_prefix('?')
                .ok_or_else(|| syntax(items[i].pos(), "variable", &items[i]))?
                .to_string()
        } else {
            a.to_string()
        };
        pending.push(name);
        i += 1;
    }
    out.extend(pending.into_iter().map(|name| TypedName { name, ty: "object".into() }));
    Ok(out)
}

fn parse_atom(e: &SExpr) -> Result<Atom, PddlError> {
    let items = list(e, "atom")?;
    let (head, rest) = items.split_first().ok_or_else(|| syntax(e.pos(), "predicate name", e))?;
    let name = atom(head, "predicate name")?.to_string();
    let args = rest
        .iter()
        .map(|a| atom(a, "argument").map(Term::parse))
        .collect::<Result<_, _>>()?;
    Ok(Atom { name, args })
}

fn parse_fluent_ref(e: &SExpr) -> Result<Atom, PddlError> {
    match e {
        // PDDL allows a bare symbol for a 0-ary function in some dialects.
        SExpr::Atom(a, _) if !a.starts_with('?') && a.parse::<f64>().is_err() => {
            Ok(Atom { name: a.clone(), args: vec![] })
        }
        _ => parse_atom(e),
    }
}

pub(crate) fn parse_expr(e: &SExpr) -> Result<Expr, PddlError> {
    match e {
        SExpr::Atom(a, pos) => {
            if a == "?duration" {
                Ok(Expr::Duration)
            } else if a == "#t" {
                Ok(Expr::Time)
            } else if let Ok(v) = a.parse::<f64>() {
                Ok(Expr::Num(v))
            } else if a.starts_with('?') {
                Err(unsupported("numeric variable outside ?duration", *pos))
            } else {
                Ok(Expr::Fluent(Atom { name: a.clone(), args: vec![] }))
            }
        }
        SExpr::List(items, pos) => {
            let head = items.first().and_then(SExpr::as_atom).unwrap_or("");
            let args = || -> Result<Vec<Expr>, PddlError> { items[1..].iter().map(parse_expr).collect() };
            match head {
                "+" => Ok(Expr::Add(args()?)),
                "*" => Ok(Expr::Mul(args()?)),
                "-" => {
                    let mut a = args()?;
                    match a.len() {
                        1 => Ok(Expr::Neg(Box::new(a.remove(0)))),
                        2 => {
                            let r = a.pop().unwrap();
                            Ok(Expr::Sub(Box::new(a.pop().unwrap()), Box::new(r)))
                        }
                        _ => Err(syntax(*pos, "one or two operands", e)),
                    }
                }
                "/" => {
                    let mut a = args()?;
                    if a.len() != 2 {
                        return Err(syntax(*pos, "two operands", e));
                    }
                    let r = a.pop().unwrap();
                    Ok(Expr::Div(Box::new(a.pop().unwrap()), Box::new(r)))
                }
                "" => Err(syntax(*pos, "expression", e)),
                _ => Ok(Expr::Fluent(parse_atom(e)?)),
            }
        }
    }
}

fn parse_gd(e: &SExpr) -> Result<Gd, PddlError> {
    let items = list(e, "condition")?;
    let head = match items.first() {
        None => return Ok(Gd::And(vec![])),
        Some(h) => atom(h, "condition keyword")?,
    };
    match head {
        "and" => Ok(Gd::And(items[1..].iter().map(parse_gd).collect::<Result<_, _>>()?)),
        "not" => {
            let inner = items.get(1).ok_or_else(|| syntax(e.pos(), "atom", e))?;
            match inner.head() {
                Some(h) if is_gd_keyword(h) => Err(unsupported("negation of compound condition", inner.pos())),
                _ => Ok(Gd::Not(parse_atom(inner)?)),
            }
        }
        "or" | "imply" | "exists" | "forall" | "when" => Err(unsupported(head, e.pos())),
        _ => {
            if let Some(cmp) = Comparison::from_symbol(head) {
                if items.len() != 3 {
                    return Err(syntax(e.pos(), "two operands", e));
                }
                Ok(Gd::Compare(cmp, parse_expr(&items[1])?, parse_expr(&items[2])?))
            } else {
                Ok(Gd::Atom(parse_atom(e)?))
            }
        }
    }
}

fn is_gd_keyword(h: &str) -> bool {
    matches!(h, "and" | "or" | "not" | "imply" | "exists" | "forall") || Comparison::from_symbol(h).is_some()
}

fn parse_timed_gd(e: &SExpr, out: &mut Vec<TimedGd>) -> Result<(), PddlError> {
    let items = list(e, "timed condition")?;
    let head = match items.first() {
        None => return Ok(()),
        Some(h) => atom(h, "timed condition keyword")?,
    };
    match head {
        "and" => {
            for i in &items[1..] {
                parse_timed_gd(i, out)?;
            }
            Ok(())
        }
        "at" => {
            let when = items.get(1).map(|w| atom(w, "'start' or 'end'")).transpose()?;
            let gd = parse_gd(items.get(2).ok_or_else(|| syntax(e.pos(), "condition", e))?)?;
            match when {
                Some("start") => out.push(TimedGd::AtStart(gd)),
                Some("end") => out.push(TimedGd::AtEnd(gd)),
                _ => return Err(syntax(e.pos(), "'start' or 'end'", e)),
            }
            Ok(())
        }
        "over" => {
            match items.get(1).and_then(SExpr::as_atom) {
                Some("all") => {}
                _ => return Err(syntax(e.pos(), "'all'", e)),
            }
            let gd = parse_gd(items.get(2).ok_or_else(|| syntax(e.pos(), "condition", e))?)?;
            out.push(TimedGd::OverAll(gd));
            Ok(())
        }
        _ => Err(unsupported("untimed condition in durative action", e.pos())),
    }
}

fn parse_effect(e: &SExpr, out: &mut Vec<Effect>) -> Result<(), PddlError> {
    let items = list(e, "effect")?;
    let head = match items.first() {
        None => return Ok(()),
        Some(h) => atom(h, "effect keyword")?,
    };
    match head {
        "and" => {
            for i in &items[1..] {
                parse_effect(i, out)?;
            }
        }
        "not" => out.push(Effect::Del(parse_atom(items.get(1).ok_or_else(|| syntax(e.pos(), "atom", e))?)?)),
        "when" | "forall" => return Err(unsupported(head, e.pos())),
        _ => {
            if let Some(kind) = AssignKind::from_keyword(head) {
                if items.len() != 3 {
                    return Err(syntax(e.pos(), "fluent and expression", e));
                }
                out.push(Effect::Numeric(kind, parse_fluent_ref(&items[1])?, parse_expr(&items[2])?));
            } else {
                out.push(Effect::Add(parse_atom(e)?));
            }
        }
    }
    Ok(())
}

fn contains_time(e: &Expr) -> bool {
    match e {
        Expr::Time => true,
        Expr::Num(_) | Expr::Fluent(_) | Expr::Duration => false,
        Expr::Add(v) | Expr::Mul(v) => v.iter().any(contains_time),
        Expr::Sub(a, b) | Expr::Div(a, b) => contains_time(a) || contains_time(b),
        Expr::Neg(a) => contains_time(a),
    }
}

/// Splits `(* #t e)` / `(* e #t)` / `#t` into the rate `e`.
fn strip_time(e: &Expr, pos: Pos) -> Result<Expr, PddlError> {
    match e {
        Expr::Time => Ok(Expr::Num(1.0)),
        Expr::Mul(factors) => {
            let n_time = factors.iter().filter(|f| matches!(f, Expr::Time)).count();
            let rest: Vec<Expr> = factors.iter().filter(|f| !matches!(f, Expr::Time)).cloned().collect();
            if n_time != 1 || rest.iter().any(contains_time) {
                return Err(unsupported("nonlinear use of #t", pos));
            }
            Ok(match rest.len() {
                0 => Expr::Num(1.0),
                1 => rest.into_iter().next().unwrap(),
                _ => Expr::Mul(rest),
            })
        }
        _ => Err(unsupported("continuous effect not of the form (* #t rate)", pos)),
    }
}

fn parse_timed_effect(e: &SExpr, out: &mut Vec<TimedEffect>) -> Result<(), PddlError> {
    let items = list(e, "timed effect")?;
    let head = match items.first() {
        None => return Ok(()),
        Some(h) => atom(h, "timed effect keyword")?,
    };
    match head {
        "and" => {
            for i in &items[1..] {
                parse_timed_effect(i, out)?;
            }
            Ok(())
        }
        "at" => {
            let when = items.get(1).and_then(SExpr::as_atom);
            let inner = items.get(2).ok_or_else(|| syntax(e.pos(), "effect", e))?;
            let mut effs = Vec::new();
            parse_effect(inner, &mut effs)?;
            for eff in effs {
                if let Effect::Numeric(_, _, rv) = &eff {
                    if contains_time(rv) {
                        return Err(unsupported("#t in discrete effect", inner.pos()));
                    }
                }
                match when {
                    Some("start") => out.push(TimedEffect::AtStart(eff)),
                    Some("end") => out.push(TimedEffect::AtEnd(eff)),
                    _ => return Err(syntax(e.pos(), "'start' or 'end'", e)),
                }
            }
            Ok(())
        }
        "increase" | "decrease" => {
            if items.len() != 3 {
                return Err(syntax(e.pos(), "fluent and rate", e));
            }
            let fluent = parse_fluent_ref(&items[1])?;
            let rv = parse_expr(&items[2])?;
            if !contains_time(&rv) {
                return Err(unsupported("untimed discrete effect in durative action", e.pos()));
            }
            let rate = strip_time(&rv, items[2].pos())?;
            out.push(TimedEffect::Continuous { increase: head == "increase", fluent, rate });
            Ok(())
        }
        "when" | "forall" => Err(unsupported(head, e.pos())),
        _ => Err(unsupported("untimed effect in durative action", e.pos())),
    }
}

fn parse_duration(e: &SExpr, out: &mut Vec<DurationConstraint>) -> Result<(), PddlError> {
    let items = list(e, "duration constraint")?;
    let head = match items.first() {
        None => return Ok(()),
        Some(h) => atom(h, "duration constraint")?,
    };
    if head == "and" {
        for i in &items[1..] {
            parse_duration(i, out)?;
        }
        return Ok(());
    }
    if head == "at" {
        return Err(unsupported("timed duration constraint", e.pos()));
    }
    let cmp = Comparison::from_symbol(head).ok_or_else(|| syntax(e.pos(), "comparison", e))?;
    if cmp == Comparison::Lt || cmp == Comparison::Gt {
        return Err(unsupported("strict duration constraint", e.pos()));
    }
    if items.len() != 3 || items[1].as_atom() != Some("?duration") {
        return Err(syntax(e.pos(), "(<op> ?duration expr)", e));
    }
    let expr = parse_expr(&items[2])?;
    if contains_duration(&expr) {
        return Err(unsupported("?duration on both sides of duration constraint", e.pos()));
    }
    out.push(DurationConstraint { cmp, expr });
    Ok(())
}

pub(crate) fn contains_duration(e: &Expr) -> bool {
    match e {
        Expr::Duration => true,
        Expr::Num(_) | Expr::Fluent(_) | Expr::Time => false,
        Expr::Add(v) | Expr::Mul(v) => v.iter().any(contains_duration),
        Expr::Sub(a, b) | Expr::Div(a, b) => contains_duration(a) || contains_duration(b),
        Expr::Neg(a) => contains_duration(a),
    }
}

/// Reads `:key value` pairs in an action body.
fn keyed<'a>(items: &'a [SExpr]) -> Result<Vec<(&'a str, &'a SExpr)>, PddlError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let k = atom(&items[i], "keyword")?;
        if !k.starts_with(':') {
            return Err(syntax(items[i].pos(), "keyword", &items[i]));
        }
        let v = items.get(i + 1).ok_or_else(|| syntax(items[i].pos(), "value after keyword", &items[i]))?;
        out.push((k, v));
        i += 2;
    }
    Ok(out)
}

fn parse_action(items: &[SExpr], pos: Pos) -> Result<ActionSchema, PddlError> {
    let name = atom(items.get(1).ok_or_else(|| PddlError::Syntax {
        pos,
        expected: "action name".into(),
        found: "nothing".into(),
    })?, "action name")?
    .to_string();
    let mut a = ActionSchema { name, params: vec![], precondition: Gd::And(vec![]), effects: vec![] };
    for (k, v) in keyed(&items[2..])? {
        match k {
            ":parameters" => a.params = typed_list(list(v, "parameter list")?, true)?,
            ":precondition" => a.precondition = parse_gd(v)?,
            ":effect" => parse_effect(v, &mut a.effects)?,
            _ => return Err(syntax(v.pos(), ":parameters, :precondition or :effect", v)),
        }
    }
    Ok(a)
}

fn parse_durative(items: &[SExpr], pos: Pos) -> Result<DurativeSchema, PddlError> {
    let name = atom(items.get(1).ok_or_else(|| PddlError::Syntax {
        pos,
        expected: "action name".into(),
        found: "nothing".into(),
    })?, "action name")?
    .to_string();
    let mut a = DurativeSchema { name, params: vec![], duration: vec![], condition: vec![], effects: vec![] };
    for (k, v) in keyed(&items[2..])? {
        match k {
            ":parameters" => a.params = typed_list(list(v, "parameter list")?, true)?,
            ":duration" => parse_duration(v, &mut a.duration)?,
            ":condition" => parse_timed_gd(v, &mut a.condition)?,
            ":effect" => parse_timed_effect(v, &mut a.effects)?,
            ":duration-variables" => return Err(unsupported(":duration-variables", v.pos())),
            _ => return Err(syntax(v.pos(), ":parameters, :duration, :condition or :effect", v)),
        }
    }
    if a.duration.is_empty() {
        return Err(PddlError::Syntax { pos, expected: ":duration".into(), found: "nothing".into() });
    }
    Ok(a)
}

fn define_header<'a>(e: &'a SExpr, kind: &str) -> Result<(&'a [SExpr], String), PddlError> {
    let items = list(e, "(define ...)")?;
    expect_keyword(items.first().ok_or_else(|| syntax(e.pos(), "'define'", e))?, "define")?;
    let hdr = items.get(1).ok_or_else(|| syntax(e.pos(), &format!("({kind} name)"), e))?;
    let h = list(hdr, &format!("({kind} name)"))?;
    if h.len() != 2 {
        return Err(syntax(hdr.pos(), &format!("({kind} name)"), hdr));
    }
    expect_keyword(&h[0], kind)?;
    Ok((&items[2..], atom(&h[1], "name")?.to_string()))
}

/// Parses a complete `(define (domain ...))` form.
pub fn parse_domain(text: &str) -> Result<DomainAst, PddlError> {
    let top = read_one(text)?;
    let (sections, name) = define_header(&top, "domain")?;
    let mut d = DomainAst { name, ..Default::default() };
    for s in sections {
        let items = list(s, "domain section")?;
        let head = atom(items.first().ok_or_else(|| syntax(s.pos(), "section keyword", s))?, "section keyword")?;
        match head {
            ":requirements" => {
                for r in &items[1..] {
                    let r_name = atom(r, "requirement")?;
                    if !SUPPORTED_REQUIREMENTS.contains(&r_name) {
                        return Err(unsupported(r_name, r.pos()));
                    }
                    d.requirements.push(r_name.to_string());
                }
            }
            ":types" => d.types = typed_list(&items[1..], false)?,
            ":constants" => d.constants = typed_list(&items[1..], false)?,
            ":predicates" => {
                for p in &items[1..] {
                    let pl = list(p, "predicate signature")?;
                    let (h, rest) = pl.split_first().ok_or_else(|| syntax(p.pos(), "predicate name", p))?;
                    d.predicates.push(Signature { name: atom(h, "predicate name")?.into(), params: typed_list(rest, true)? });
                }
            }
            ":functions" => {
                let mut i = 1;
                while i < items.len() {
                    let pl = list(&items[i], "function signature")?;
                    let (h, rest) = pl.split_first().ok_or_else(|| syntax(items[i].pos(), "function name", &items[i]))?;
                    d.functions.push(Signature { name: atom(h, "function name")?.into(), params: typed_list(rest, true)? });
                    i += 1;
                    // optional `- number` return type
                    if items.get(i).and_then(SExpr::as_atom) == Some("-") {
                        match items.get(i + 1).and_then(SExpr::as_atom) {
                            Some("number") => i += 2,
                            _ => return Err(unsupported("non-numeric function type", items[i].pos())),
                        }
                    }
                }
            }
            ":action" => d.actions.push(parse_action(items, s.pos())?),
            ":durative-action" => d.durative_actions.push(parse_durative(items, s.pos())?),
            ":process" => return Err(unsupported("process", s.pos())),
            ":event" => return Err(unsupported("event", s.pos())),
            ":derived" => return Err(unsupported("derived predicate", s.pos())),
            other => return Err(unsupported(other, s.pos())),
        }
    }
    Ok(d)
}

/// Parses a complete `(define (problem ...))` form. Names are resolved at grounding.
pub fn parse_problem(text: &str) -> Result<ProblemAst, PddlError> {
    let top = read_one(text)?;
    let (sections, name) = define_header(&top, "problem")?;
    let mut p = ProblemAst { name, domain: String::new(), objects: vec![], init: vec![], goal: Gd::And(vec![]), metric: None };
    for s in sections {
        let items = list(s, "problem section")?;
        let head = atom(items.first().ok_or_else(|| syntax(s.pos(), "section keyword", s))?, "section keyword")?;
        match head {
            ":domain" => p.domain = atom(items.get(1).ok_or_else(|| syntax(s.pos(), "domain name", s))?, "domain name")?.into(),
            ":requirements" => {}
            ":objects" => p.objects = typed_list(&items[1..], false)?,
            ":init" => {
                for el in &items[1..] {
                    match el.head() {
                        Some("=") => {
                            let l = el.as_list().unwrap();
                            if l.len() != 3 {
                                return Err(syntax(el.pos(), "(= (f args) value)", el));
                            }
                            let f = parse_fluent_ref(&l[1])?;
                            let v = atom(&l[2], "number")?
                                .parse::<f64>()
                                .map_err(|_| syntax(l[2].pos(), "number", &l[2]))?;
                            p.init.push(InitElement::Value(f, v));
                        }
                        Some("at")
                            if el.as_list().unwrap().get(1).and_then(SExpr::as_atom).is_some_and(|t| t.parse::<f64>().is_ok()) =>
                        {
                            return Err(unsupported("timed initial literal", el.pos()))
                        }
                        Some("not") => {}
                        _ => p.init.push(InitElement::Fact(parse_atom(el)?)),
                    }
                }
            }
            ":goal" => p.goal = parse_gd(items.get(1).ok_or_else(|| syntax(s.pos(), "goal", s))?)?,
            ":metric" => {
                let dir = atom(items.get(1).ok_or_else(|| syntax(s.pos(), "minimize|maximize", s))?, "minimize|maximize")?;
                let minimize = match dir {
                    "minimize" => true,
                    "maximize" => false,
                    _ => return Err(syntax(items[1].pos(), "minimize|maximize", &items[1])),
                };
                let expr = parse_expr(items.get(2).ok_or_else(|| syntax(s.pos(), "metric expression", s))?)?;
                p.metric = Some(MetricAst { minimize, expr });
            }
            other => return Err(unsupported(other, s.pos())),
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instant_domain() {
        let d = parse_domain("(define (domain d) (:action a :parameters () :effect (p)))").unwrap();
        assert_eq!(d.actions.len(), 1);
        assert_eq!(d.actions[0].precondition, Gd::And(vec![]));
        assert_eq!(d.actions[0].effects, vec![Effect::Add(Atom { name: "p".into(), args: vec![] })]);
    }

    #[test]
    fn process_is_unsupported() {
        let err = parse_domain("(define (domain d)\n  (:process flow :parameters () :precondition (and) :effect (and)))")
            .unwrap_err();
        match err {
            PddlError::Unsupported { construct, pos } => {
                assert_eq!(construct, "process");
                assert_eq!(pos.line, 2);
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn unknown_requirement_is_unsupported() {
        let err = parse_domain("(define (domain d) (:requirements :adl))").unwrap_err();
        assert!(matches!(err, PddlError::Unsupported { ref construct, .. } if construct == ":adl"));
    }

    #[test]
    fn continuous_effect_rate_extracted() {
        let d = parse_domain(
            "(define (domain d) (:functions (v))
              (:durative-action a :parameters () :duration (= ?duration 1)
               :condition (and) :effect (and (decrease (v) (* #t (/ 60 100))))))",
        )
        .unwrap();
        match &d.durative_actions[0].effects[0] {
            TimedEffect::Continuous { increase, rate, .. } => {
                assert!(!increase);
                assert_eq!(*rate, Expr::Div(Box::new(Expr::Num(60.0)), Box::new(Expr::Num(100.0))));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn empty_goal_and_metric() {
        let p = parse_problem("(define (problem p) (:domain d) (:init) (:goal (and)) (:metric minimize (total-time)))")
            .unwrap();
        assert_eq!(p.goal, Gd::And(vec![]));
        assert!(p.metric.unwrap().minimize);
    }

    #[test]
    fn undeclared_object_parses() {
        // resolution happens at grounding
        assert!(parse_problem("(define (problem p) (:domain d) (:init (at ghost)) (:goal (and)))").is_ok());
    }
}
