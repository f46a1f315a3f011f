use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{Formula, MsoError};
use crate::graph::Digraph;

/// Largest vertex count over which set variables are enumerated.
pub const SET_QUANTIFIER_LIMIT: usize = 24;

/// Assignment of vertices and vertex sets to free variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    pub points: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, BTreeSet<usize>>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_point(mut self, name: &str, vertex: usize) -> Self {
        self.points.insert(name.to_string(), vertex);
        self
    }

    pub fn with_set(mut self, name: &str, vertices: impl IntoIterator<Item = usize>) -> Self {
        self.sets.insert(name.to_string(), vertices.into_iter().collect());
        self
    }
}

/// Slot-resolved formula: point and set variables become stack indices.
enum Node {
    Edge(usize, usize),
    Eq(usize, usize),
    Member(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    ExistsPoint(Box<Node>),
    ForallPoint(Box<Node>),
    ExistsSet(Box<Node>),
    ForallSet(Box<Node>),
}

fn resolve(names: &[String], name: &str) -> usize {
    names.iter().rposition(|n| n == name).expect("scope was checked")
}

fn compile(f: &Formula, points: &mut Vec<String>, sets: &mut Vec<String>) -> Node {
    let mut bind = |v: &String, g: &Formula, point: bool| {
        let stack = if point { &mut *points } else { &mut *sets };
        stack.push(v.clone());
        let body = compile(g, points, sets);
        if point {
            points.pop();
        } else {
            sets.pop();
        }
        Box::new(body)
    };
    match f {
        Formula::Edge(a, b) => Node::Edge(resolve(points, a), resolve(points, b)),
        Formula::Eq(a, b) => Node::Eq(resolve(points, a), resolve(points, b)),
        Formula::Member(a, s) => Node::Member(resolve(points, a), resolve(sets, s)),
        Formula::Not(g) => Node::Not(Box::new(compile(g, points, sets))),
        Formula::And(a, b) => Node::And(Box::new(compile(a, points, sets)), Box::new(compile(b, points, sets))),
        Formula::Or(a, b) => Node::Or(Box::new(compile(a, points, sets)), Box::new(compile(b, points, sets))),
        Formula::Implies(a, b) => {
            Node::Implies(Box::new(compile(a, points, sets)), Box::new(compile(b, points, sets)))
        }
        Formula::ExistsPoint(v, g) => Node::ExistsPoint(bind(v, g, true)),
        Formula::ForallPoint(v, g) => Node::ForallPoint(bind(v, g, true)),
        Formula::ExistsSet(v, g) => Node::ExistsSet(bind(v, g, false)),
        Formula::ForallSet(v, g) => Node::ForallSet(bind(v, g, false)),
    }
}

struct Evaluator<'a> {
    graph: &'a Digraph,
    n: usize,
}

#[derive(Clone)]
struct Env {
    points: Vec<usize>,
    sets: Vec<u32>,
}

impl Evaluator<'_> {
    fn eval(&self, node: &Node, env: &mut Env) -> bool {
        match node {
            Node::Edge(a, b) => self.graph.has_edge(env.points[*a], env.points[*b]),
            Node::Eq(a, b) => env.points[*a] == env.points[*b],
            Node::Member(a, s) => env.sets[*s] >> env.points[*a] & 1 == 1,
            Node::Not(g) => !self.eval(g, env),
            Node::And(a, b) => self.eval(a, env) && self.eval(b, env),
            Node::Or(a, b) => self.eval(a, env) || self.eval(b, env),
            Node::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Node::ExistsPoint(g) => self.quantify_point(g, env, true),
            Node::ForallPoint(g) => !self.quantify_point(g, env, false),
            Node::ExistsSet(g) => self.quantify_set(g, env, true),
            Node::ForallSet(g) => !self.quantify_set(g, env, false),
        }
    }

    /// Whether some vertex makes the body evaluate to `want`.
    fn quantify_point(&self, body: &Node, env: &mut Env, want: bool) -> bool {
        let mut found = false;
        for v in 0..self.n {
            env.points.push(v);
            found = self.eval(body, env) == want;
            env.points.pop();
            if found {
                break;
            }
        }
        found
    }

    /// Whether some subset, in increasing binary order, makes the body evaluate to `want`.
    fn quantify_set(&self, body: &Node, env: &mut Env, want: bool) -> bool {
        let mut found = false;
        for mask in 0..(1u32 << self.n) {
            env.sets.push(mask);
            found = self.eval(body, env) == want;
            env.sets.pop();
            if found {
                break;
            }
        }
        found
    }

    /// Top-level quantifier branches fan out over rayon; `any` makes the
    /// result independent of scheduling.
    fn eval_root(&self, node: &Node, env: &Env) -> bool {
        const PAR_MIN: usize = 8;
        match node {
            Node::ExistsPoint(g) | Node::ForallPoint(g) if self.n >= PAR_MIN => {
                let want = matches!(node, Node::ExistsPoint(_));
                let hit = (0..self.n).into_par_iter().any(|v| {
                    let mut e = env.clone();
                    e.points.push(v);
                    self.eval(g, &mut e) == want
                });
                hit == want
            }
            Node::ExistsSet(g) | Node::ForallSet(g) if self.n >= PAR_MIN => {
                let want = matches!(node, Node::ExistsSet(_));
                let hit = (0..(1u32 << self.n)).into_par_iter().any(|mask| {
                    let mut e = env.clone();
                    e.sets.push(mask);
                    self.eval(g, &mut e) == want
                });
                hit == want
            }
            _ => self.eval(node, &mut env.clone()),
        }
    }
}

/// Satisfaction of a sentence on an explicit digraph.
pub fn eval(graph: &Digraph, phi: &Formula) -> Result<bool, MsoError> {
    eval_with(graph, phi, &Valuation::new())
}

/// Satisfaction of a formula under a valuation of its free variables.
pub fn eval_with(graph: &Digraph, phi: &Formula, valuation: &Valuation) -> Result<bool, MsoError> {
    let n = graph.vertex_count();
    let context: Vec<String> = valuation.points.keys().chain(valuation.sets.keys()).cloned().collect();
    phi.check_scope(&context)?;
    if (phi.has_set_quantifier() || !valuation.sets.is_empty()) && n > SET_QUANTIFIER_LIMIT {
        return Err(MsoError::TooLargeForBruteForce {
            n,
            limit: SET_QUANTIFIER_LIMIT,
        });
    }
    let mut env = Env {
        points: Vec::new(),
        sets: Vec::new(),
    };
    let mut point_names = Vec::new();
    let mut set_names = Vec::new();
    for (name, &v) in &valuation.points {
        if v >= n || !super::is_point_name(name) {
            return Err(MsoError::BadValuation(format!("{name} = {v} on a graph of {n} vertices")));
        }
        point_names.push(name.clone());
        env.points.push(v);
    }
    for (name, members) in &valuation.sets {
        if super::is_point_name(name) || members.iter().any(|&v| v >= n) {
            return Err(MsoError::BadValuation(format!("set {name} on a graph of {n} vertices")));
        }
        set_names.push(name.clone());
        env.sets.push(members.iter().fold(0, |m, &v| m | 1 << v));
    }
    let node = compile(phi, &mut point_names, &mut set_names);
    Ok(Evaluator { graph, n }.eval_root(&node, &env))
}
