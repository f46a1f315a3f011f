//! Monadic second-order logic over digraphs: syntax, quantifier rank, and
//! brute-force satisfaction.
//!
//! Concrete syntax:
//!
//! ```text
//! φ ::= E(v,v) | v=v | v in V | ~φ | (φ & φ) | (φ | φ) | (φ -> φ) | ex id. φ | all id. φ
//! ```
//!
//! Lowercase identifiers (`[a-z][a-z0-9]*`) range over vertices, capitalised
//! ones (`[A-Z][a-z0-9]*`) over vertex sets.

mod eval;
mod parser;

pub use eval::{eval, eval_with, Valuation, SET_QUANTIFIER_LIMIT};
pub use parser::parse;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MsoError {
    #[error("syntax error at byte {position}: {message}")]
    ParseError { position: usize, message: String },
    #[error("scope error: {0}")]
    ScopeError(String),
    #[error("set quantification over {n} vertices exceeds the brute-force limit of {limit}")]
    TooLargeForBruteForce { n: usize, limit: usize },
    #[error("bad valuation: {0}")]
    BadValuation(String),
}

impl MsoError {
    pub fn kind(&self) -> &'static str {
        match self {
            MsoError::ParseError { .. } => "ParseError",
            MsoError::ScopeError(_) => "ScopeError",
            MsoError::TooLargeForBruteForce { .. } => "TooLargeForBruteForce",
            MsoError::BadValuation(_) => "BadValuation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Edge(String, String),
    Eq(String, String),
    Member(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ExistsPoint(String, Box<Formula>),
    ForallPoint(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

pub(crate) fn is_point_name(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_lowercase())
}

impl Formula {
    pub fn edge(x: &str, y: &str) -> Formula {
        Formula::Edge(x.into(), y.into())
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Eq(x.into(), y.into())
    }

    pub fn member(x: &str, set: &str) -> Formula {
        Formula::Member(x.into(), set.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    /// `ex var. body`, picking a point or set quantifier from the name's case.
    pub fn exists(var: &str, body: Formula) -> Formula {
        if is_point_name(var) {
            Formula::ExistsPoint(var.into(), Box::new(body))
        } else {
            Formula::ExistsSet(var.into(), Box::new(body))
        }
    }

    /// `all var. body`, picking a point or set quantifier from the name's case.
    pub fn forall(var: &str, body: Formula) -> Formula {
        if is_point_name(var) {
            Formula::ForallPoint(var.into(), Box::new(body))
        } else {
            Formula::ForallSet(var.into(), Box::new(body))
        }
    }

    /// Quantifier rank: the total number of quantifiers, not the alternation depth.
    pub fn rank(&self) -> usize {
        match self {
            Formula::Edge(..) | Formula::Eq(..) | Formula::Member(..) => 0,
            Formula::Not(f) => f.rank(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.rank() + b.rank(),
            Formula::ExistsPoint(_, f)
            | Formula::ForallPoint(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallSet(_, f) => 1 + f.rank(),
        }
    }

    pub fn has_set_quantifier(&self) -> bool {
        match self {
            Formula::Edge(..) | Formula::Eq(..) | Formula::Member(..) => false,
            Formula::Not(f) | Formula::ExistsPoint(_, f) | Formula::ForallPoint(_, f) => f.has_set_quantifier(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_set_quantifier() || b.has_set_quantifier()
            }
            Formula::ExistsSet(..) | Formula::ForallSet(..) => true,
        }
    }

    /// Variables used without an enclosing binder, in name order.
    pub fn free_variables(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut note = |v: &String, bound: &Vec<String>| {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            };
            match f {
                Formula::Edge(a, b) | Formula::Eq(a, b) | Formula::Member(a, b) => {
                    note(a, bound);
                    note(b, bound);
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::ExistsPoint(v, g)
                | Formula::ForallPoint(v, g)
                | Formula::ExistsSet(v, g)
                | Formula::ForallSet(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Rejects shadowed binders and any variable not in `context` or bound.
    pub fn check_scope(&self, context: &[String]) -> Result<(), MsoError> {
        fn walk(f: &Formula, bound: &mut Vec<String>) -> Result<(), MsoError> {
            let check = |v: &String, bound: &Vec<String>| {
                if bound.contains(v) {
                    Ok(())
                } else {
                    Err(MsoError::ScopeError(format!("variable {v} is not bound")))
                }
            };
            match f {
                Formula::Edge(a, b) | Formula::Eq(a, b) | Formula::Member(a, b) => {
                    check(a, bound)?;
                    check(b, bound)
                }
                Formula::Not(g) => walk(g, bound),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, bound)?;
                    walk(b, bound)
                }
                Formula::ExistsPoint(v, g)
                | Formula::ForallPoint(v, g)
                | Formula::ExistsSet(v, g)
                | Formula::ForallSet(v, g) => {
                    if bound.contains(v) {
                        return Err(MsoError::ScopeError(format!("variable {v} shadows an outer binder")));
                    }
                    bound.push(v.clone());
                    let r = walk(g, bound);
                    bound.pop();
                    r
                }
            }
        }
        walk(self, &mut context.to_vec())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Edge(a, b) => write!(f, "E({a},{b})"),
            Formula::Eq(a, b) => write!(f, "{a}={b}"),
            Formula::Member(a, b) => write!(f, "{a} in {b}"),
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::ExistsPoint(v, g) | Formula::ExistsSet(v, g) => write!(f, "ex {v}. {g}"),
            Formula::ForallPoint(v, g) | Formula::ForallSet(v, g) => write!(f, "all {v}. {g}"),
        }
    }
}

/// `E*(x, y)`: every vertex set that contains `x` and is closed under edges
/// contains `y`. The set variable must be fresh in the surrounding formula;
/// the two inner point variables are derived from its name.
pub fn reach_macro(x: &str, y: &str, set_var: &str) -> Formula {
    let base = set_var.to_ascii_lowercase();
    let (u, v) = (format!("{base}u"), format!("{base}v"));
    let closed = Formula::forall(
        &u,
        Formula::forall(
            &v,
            Formula::member(&u, set_var)
                .and(Formula::edge(&u, &v))
                .implies(Formula::member(&v, set_var)),
        ),
    );
    Formula::forall(
        set_var,
        Formula::member(x, set_var).and(closed).implies(Formula::member(y, set_var)),
    )
}

/// Named sentences used throughout the tests and examples.
pub mod sentences {
    pub const LOOP: &str = "ex x. E(x,x)";
    pub const LOOP_UNIQUE: &str = "all x. all z. ((E(x,x) & E(z,z)) -> x=z)";
    pub const DETERMINISM: &str = "all x. all y. all z. ((E(x,y) & E(x,z)) -> y=z)";
    pub const NONTRIVIAL_CYCLE: &str =
        "ex X. ((ex x. x in X) & all x. (x in X -> ex y. (y in X & (~x=y & E(x,y)))))";
    pub const CLIQUE: &str = "all x. all y. E(x,y)";
    pub const CLIQUE_IRREFLEXIVE: &str = "all x. all y. (~x=y -> E(x,y))";
    pub const TAUTOLOGY: &str = "all x. x=x";

    /// Twenty sentences of rank at most 2, four of them of rank 1.
    pub const BATTERY: [&str; 20] = [
        "ex x. E(x,x)",
        "all x. E(x,x)",
        "ex x. x=x",
        "all x. ~E(x,x)",
        "ex x. ex y. E(x,y)",
        "ex x. ex y. ~x=y",
        "all x. all y. x=y",
        "ex x. ex y. (E(x,y) & ~x=y)",
        "all x. ex y. E(x,y)",
        "ex x. all y. ~E(y,x)",
        "ex x. ex y. (E(x,y) & E(y,x))",
        "all x. all y. (E(x,y) -> E(y,x))",
        "ex x. (E(x,x) & all y. (E(x,y) -> x=y))",
        "ex X. ex x. x in X",
        "ex X. all x. x in X",
        "all x. ex y. E(y,x)",
        "ex x. all y. E(x,y)",
        "ex x. all y. (E(x,y) -> E(y,y))",
        "all x. all y. (E(x,y) | E(y,x))",
        "ex x. (~E(x,x) & ex y. E(x,y))",
    ];

    pub fn battery() -> Vec<super::Formula> {
        BATTERY.iter().map(|t| super::parse(t).expect("battery sentences parse")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(parse(sentences::LOOP).unwrap().rank(), 1);
        assert_eq!(parse(sentences::DETERMINISM).unwrap().rank(), 3);
        assert_eq!(parse(sentences::NONTRIVIAL_CYCLE).unwrap().rank(), 4);
        let phi = parse(sentences::DETERMINISM).unwrap();
        assert_eq!(phi.clone().not().rank(), phi.rank());
    }

    #[test]
    fn reach_macro_shape() {
        let r = reach_macro("x", "y", "R");
        assert_eq!(r.rank(), 3);
        assert_eq!(r.free_variables(), BTreeSet::from(["x".to_string(), "y".to_string()]));
        assert!(r.check_scope(&["x".into(), "y".into()]).is_ok());
        let sentence = Formula::forall("x", Formula::forall("y", r));
        assert!(sentence.check_scope(&[]).is_ok());
        assert_eq!(parse(&sentence.to_string()).unwrap(), sentence);
    }

    #[test]
    fn battery_ranks() {
        let b = sentences::battery();
        assert_eq!(b.len(), 20);
        assert!(b.iter().all(|f| f.rank() <= 2));
        assert_eq!(b.iter().filter(|f| f.rank() == 1).count(), 4);
    }

    #[test]
    fn shadowing_is_a_scope_error() {
        let f = Formula::exists("x", Formula::exists("x", Formula::edge("x", "x")));
        assert_eq!(f.check_scope(&[]).unwrap_err().kind(), "ScopeError");
    }
}
