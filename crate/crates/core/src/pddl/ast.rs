//! Lifted (pre-grounding) syntax tree for the supported PDDL subset.

#[derive(Debug, Clone, PartialEq)]
pub struct TypedName {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub name: String,
    pub params: Vec<TypedName>,
}

/// An argument position: `?x` variable or a constant/object name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn parse(s: &str) -> Term {
        match s.strip_prefix('?') {
            Some(v) => Term::Var(v.to_string()),
            None => Term::Const(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Fluent(Atom),
    /// `?duration`
    Duration,
    /// `#t`
    Time,
    Add(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Comparison {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Eq => "=",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Comparison> {
        Some(match s {
            "<" => Comparison::Lt,
            "<=" => Comparison::Le,
            "=" => Comparison::Eq,
            ">=" => Comparison::Ge,
            ">" => Comparison::Gt,
            _ => return None,
        })
    }

    /// The comparison obtained by swapping sides.
    pub fn flip(self) -> Comparison {
        match self {
            Comparison::Lt => Comparison::Gt,
            Comparison::Le => Comparison::Ge,
            Comparison::Eq => Comparison::Eq,
            Comparison::Ge => Comparison::Le,
            Comparison::Gt => Comparison::Lt,
        }
    }
}

/// Goal description. Negation only wraps atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum Gd {
    And(Vec<Gd>),
    Atom(Atom),
    Not(Atom),
    Compare(Comparison, Expr, Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimedGd {
    AtStart(Gd),
    AtEnd(Gd),
    OverAll(Gd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignKind {
    Assign,
    Increase,
    Decrease,
    ScaleUp,
    ScaleDown,
}

impl AssignKind {
    pub fn keyword(self) -> &'static str {
        match self {
            AssignKind::Assign => "assign",
            AssignKind::Increase => "increase",
            AssignKind::Decrease => "decrease",
            AssignKind::ScaleUp => "scale-up",
            AssignKind::ScaleDown => "scale-down",
        }
    }

    pub fn from_keyword(s: &str) -> Option<AssignKind> {
        Some(match s {
            "assign" => AssignKind::Assign,
            "increase" => AssignKind::Increase,
            "decrease" => AssignKind::Decrease,
            "scale-up" => AssignKind::ScaleUp,
            "scale-down" => AssignKind::ScaleDown,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Effect {
    Add(Atom),
    Del(Atom),
    Numeric(AssignKind, Atom, Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimedEffect {
    AtStart(Effect),
    AtEnd(Effect),
    /// `(increase f (* #t rate))` / `(decrease ...)`; `rate` excludes `#t`.
    Continuous { increase: bool, fluent: Atom, rate: Expr },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurationConstraint {
    pub cmp: Comparison,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypedName>,
    pub precondition: Gd,
    pub effects: Vec<Effect>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurativeSchema {
    pub name: String,
    pub params: Vec<TypedName>,
    pub duration: Vec<DurationConstraint>,
    pub condition: Vec<TimedGd>,
    pub effects: Vec<TimedEffect>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DomainAst {
    pub name: String,
    pub requirements: Vec<String>,
    /// Declared types with their parent (`object` when omitted).
    pub types: Vec<TypedName>,
    pub constants: Vec<TypedName>,
    pub predicates: Vec<Signature>,
    pub functions: Vec<Signature>,
    pub actions: Vec<ActionSchema>,
    pub durative_actions: Vec<DurativeSchema>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitElement {
    Fact(Atom),
    Value(Atom, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricAst {
    pub minimize: bool,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemAst {
    pub name: String,
    pub domain: String,
    pub objects: Vec<TypedName>,
    pub init: Vec<InitElement>,
    pub goal: Gd,
    pub metric: Option<MetricAst>,
}
