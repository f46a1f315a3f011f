use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::ReduceError;

/// A CNF over variables `1..=vars`. Literal `v` is variable `v`, `-v` its
/// negation. An empty clause list is the always-true conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfInstance {
    vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, ReduceError> {
        if vars == 0 {
            return Err(ReduceError::ParseError {
                line: 0,
                message: "an instance needs at least one variable".into(),
            });
        }
        for clause in &clauses {
            if clause.is_empty() {
                return Err(ReduceError::ParseError {
                    line: 0,
                    message: "empty clause".into(),
                });
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > vars {
                    return Err(ReduceError::BadLiteral { literal: lit, vars });
                }
            }
        }
        Ok(CnfInstance { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// Value under the assignment giving variable `j + 1` the value of bit `j`.
    pub fn eval_bits(&self, bit: impl Fn(usize) -> bool) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = bit(lit.unsigned_abs() as usize - 1);
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }

    pub fn eval_u64(&self, assignment: u64) -> bool {
        self.eval_bits(|j| j < 64 && assignment >> j & 1 == 1)
    }

    pub fn eval(&self, assignment: &BigUint) -> bool {
        self.eval_bits(|j| assignment.bit(j as u64))
    }

    /// Letter `q` of the word over `{0, 1}` that marks falsifying assignments.
    pub fn sbar_at(&self, q: &BigUint) -> Result<bool, ReduceError> {
        if q.bits() > self.vars as u64 {
            return Err(ReduceError::IndexOutOfRange {
                index: q.clone(),
                bound: BigUint::one() << self.vars,
            });
        }
        Ok(!self.eval(q))
    }

    /// The full word `S̄(0) S̄(1) …` as a string of `0`/`1`; only sensible for small `vars`.
    pub fn sbar_string(&self) -> String {
        (0..1u64 << self.vars).map(|q| if self.eval_u64(q) { '0' } else { '1' }).collect()
    }

    pub fn parse_dimacs(text: &str) -> Result<CnfInstance, ReduceError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('c') {
                continue;
            }
            if content.starts_with('%') {
                break;
            }
            let perr = |message: String| ReduceError::ParseError { line, message };
            if content.starts_with('p') {
                let toks: Vec<&str> = content.split_whitespace().collect();
                let ["p", "cnf", v, c] = toks[..] else {
                    return Err(perr("header must read `p cnf <vars> <clauses>`".into()));
                };
                if header.is_some() {
                    return Err(perr("duplicate header".into()));
                }
                let v = v.parse().map_err(|_| perr(format!("bad variable count {v:?}")))?;
                let c = c.parse().map_err(|_| perr(format!("bad clause count {c:?}")))?;
                header = Some((v, c));
                continue;
            }
            let Some((vars, _)) = header else {
                return Err(perr("clause before header".into()));
            };
            for tok in content.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| perr(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    if current.is_empty() {
                        return Err(perr("empty clause".into()));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > vars {
                    return Err(ReduceError::BadLiteral { literal: lit, vars });
                } else {
                    current.push(lit);
                }
            }
        }
        let (vars, count) = header.ok_or(ReduceError::ParseError {
            line: 0,
            message: "missing `p cnf` header".into(),
        })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != count {
            return Err(ReduceError::ParseError {
                line: 0,
                message: format!("header declares {count} clauses, found {}", clauses.len()),
            });
        }
        CnfInstance::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for CnfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "⊤");
        }
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "(")?;
            for (j, &lit) in clause.iter().enumerate() {
                if j > 0 {
                    write!(f, " ∨ ")?;
                }
                if lit < 0 {
                    write!(f, "¬")?;
                }
                write!(f, "v{}", lit.unsigned_abs())?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_examples() {
        let s = CnfInstance::parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(s.clauses(), &[vec![1]]);
        let contra = CnfInstance::parse_dimacs("c contradiction\np cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert_eq!(contra.clauses().len(), 2);
        let empty = CnfInstance::parse_dimacs("p cnf 2 0\n").unwrap();
        assert!(empty.clauses().is_empty());
        assert!(empty.eval_u64(0) && empty.eval_u64(3));
        let spanning = CnfInstance::parse_dimacs("p cnf 3 2\n1 -2\n3 0 2\n0\n").unwrap();
        assert_eq!(spanning.clauses(), &[vec![1, -2, 3], vec![2]]);
        assert_eq!(CnfInstance::parse_dimacs(&spanning.to_dimacs()).unwrap(), spanning);
    }

    #[test]
    fn dimacs_errors() {
        assert_eq!(CnfInstance::parse_dimacs("p cnf 1 1\n2 0\n").unwrap_err().kind(), "BadLiteral");
        for bad in ["1 0\n", "p cnf 1 2\n1 0\n", "p dnf 1 1\n1 0\n", "p cnf 1 1\nx 0\n", "p cnf 1 1\n0\n", ""] {
            assert_eq!(CnfInstance::parse_dimacs(bad).unwrap_err().kind(), "ParseError", "{bad:?}");
        }
    }

    #[test]
    fn sbar_examples() {
        let s = CnfInstance::new(1, vec![vec![1]]).unwrap();
        assert!(s.sbar_at(&0u32.into()).unwrap());
        assert!(!s.sbar_at(&1u32.into()).unwrap());
        assert_eq!(s.sbar_at(&2u32.into()).unwrap_err().kind(), "IndexOutOfRange");
        assert_eq!(s.sbar_string(), "10");
        let contra = CnfInstance::new(2, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(contra.sbar_string(), "1111");
        let empty = CnfInstance::new(3, vec![]).unwrap();
        assert_eq!(empty.sbar_string(), "00000000");
        // bit j of the index is variable j + 1
        let second = CnfInstance::new(2, vec![vec![2]]).unwrap();
        assert_eq!(second.sbar_string(), "1100");
    }
}
