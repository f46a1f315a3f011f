//! Gate-level Boolean circuits deciding adjacency between vertex labels.
//!
//! A circuit over `label_bits = n` reads `2n` input wires. Wires `0..n` carry
//! the source label `x` least-significant bit first, wires `n..2n` carry the
//! target label `y` in the same order.

mod builder;
mod format;

pub use builder::{CircuitBuilder, WireBundle, MAX_BUNDLE_WIDTH};
pub(crate) use format::{json_error, RawCircuit};

use num_bigint::BigUint;
use thiserror::Error;

/// Index of a gate inside a circuit's gate list.
pub type GateId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("label pair ({x}, {y}) is out of range for {label_bits}-bit labels")]
    InputOutOfRange {
        label_bits: usize,
        x: BigUint,
        y: BigUint,
    },
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("gate {gate} references gate {target}, which is not strictly earlier")]
    TopologyError { gate: GateId, target: GateId },
    #[error("gate {gate} reads wire {wire}, but the circuit only has {wires} input wires")]
    WireOutOfRange {
        gate: GateId,
        wire: usize,
        wires: usize,
    },
    #[error("output gate {output} is out of range ({gates} gates)")]
    OutputOutOfRange { output: GateId, gates: usize },
}

impl CircuitError {
    pub fn kind(&self) -> &'static str {
        match self {
            CircuitError::InputOutOfRange { .. } => "InputOutOfRange",
            CircuitError::BadParam(_) => "BadParam",
            CircuitError::ParseError { .. } => "ParseError",
            CircuitError::TopologyError { .. } => "TopologyError",
            CircuitError::WireOutOfRange { .. } => "WireOutOfRange",
            CircuitError::OutputOutOfRange { .. } => "OutputOutOfRange",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(usize),
    Const(bool),
    Not(GateId),
    And(GateId, GateId),
    Or(GateId, GateId),
}

impl Gate {
    fn operands(&self) -> impl Iterator<Item = GateId> {
        let (a, b) = match *self {
            Gate::Input(_) | Gate::Const(_) => (None, None),
            Gate::Not(g) => (Some(g), None),
            Gate::And(g, h) | Gate::Or(g, h) => (Some(g), Some(h)),
        };
        a.into_iter().chain(b)
    }
}

/// An immutable, topologically ordered circuit with a single output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolCircuit {
    label_bits: usize,
    gates: Vec<Gate>,
    output: GateId,
}

impl BoolCircuit {
    /// Checks the structural invariants and wraps the gate list.
    pub fn new(label_bits: usize, gates: Vec<Gate>, output: GateId) -> Result<Self, CircuitError> {
        let wires = 2 * label_bits;
        for (idx, gate) in gates.iter().enumerate() {
            if let Gate::Input(w) = *gate {
                if w >= wires {
                    return Err(CircuitError::WireOutOfRange {
                        gate: idx,
                        wire: w,
                        wires,
                    });
                }
            }
            if let Some(target) = gate.operands().find(|&t| t >= idx) {
                return Err(CircuitError::TopologyError { gate: idx, target });
            }
        }
        if output >= gates.len() {
            return Err(CircuitError::OutputOutOfRange {
                output,
                gates: gates.len(),
            });
        }
        Ok(BoolCircuit {
            label_bits,
            gates,
            output,
        })
    }

    /// The circuit with a single constant gate.
    pub fn constant(label_bits: usize, value: bool) -> Self {
        BoolCircuit {
            label_bits,
            gates: vec![Gate::Const(value)],
            output: 0,
        }
    }

    pub fn label_bits(&self) -> usize {
        self.label_bits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Evaluates the circuit on an explicit wire assignment of length `2n`.
    pub fn eval_wires(&self, wires: &[bool]) -> bool {
        debug_assert_eq!(wires.len(), 2 * self.label_bits);
        let mut values: Vec<bool> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let v = match *gate {
                Gate::Input(w) => wires[w],
                Gate::Const(b) => b,
                Gate::Not(g) => !values[g],
                Gate::And(g, h) => values[g] && values[h],
                Gate::Or(g, h) => values[g] || values[h],
            };
            values.push(v);
        }
        values[self.output]
    }

    /// Evaluates `C(x, y)`.
    pub fn eval(&self, x: &BigUint, y: &BigUint) -> Result<bool, CircuitError> {
        let n = self.label_bits as u64;
        if x.bits() > n || y.bits() > n {
            return Err(CircuitError::InputOutOfRange {
                label_bits: self.label_bits,
                x: x.clone(),
                y: y.clone(),
            });
        }
        let mut wires = vec![false; 2 * self.label_bits];
        for i in 0..self.label_bits {
            wires[i] = x.bit(i as u64);
            wires[self.label_bits + i] = y.bit(i as u64);
        }
        Ok(self.eval_wires(&wires))
    }

    /// Fast path of [`BoolCircuit::eval`] for labels that fit in a machine word.
    pub fn eval_u64(&self, x: u64, y: u64) -> Result<bool, CircuitError> {
        let n = self.label_bits;
        let fits = |v: u64| n >= 64 || v >> n == 0;
        if !fits(x) || !fits(y) {
            return Err(CircuitError::InputOutOfRange {
                label_bits: n,
                x: x.into(),
                y: y.into(),
            });
        }
        let mut wires = vec![false; 2 * n];
        for i in 0..n.min(64) {
            wires[i] = (x >> i) & 1 == 1;
            wires[n + i] = (y >> i) & 1 == 1;
        }
        Ok(self.eval_wires(&wires))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_true_accepts_everything() {
        let c = BoolCircuit::constant(2, true);
        for x in 0..4 {
            for y in 0..4 {
                assert!(c.eval_u64(x, y).unwrap());
            }
        }
        assert_eq!(c.gate_count(), 1);
    }

    #[test]
    fn out_of_range_label() {
        let c = BoolCircuit::constant(2, true);
        assert_eq!(c.eval_u64(4, 0).unwrap_err().kind(), "InputOutOfRange");
        let big = BigUint::from(4u32);
        assert!(c.eval(&big, &BigUint::from(0u32)).is_err());
    }

    #[test]
    fn forward_reference_is_rejected() {
        let err = BoolCircuit::new(1, vec![Gate::Not(1), Gate::Input(0)], 0).unwrap_err();
        assert_eq!(err, CircuitError::TopologyError { gate: 0, target: 1 });
        let err = BoolCircuit::new(1, vec![Gate::Not(0)], 0).unwrap_err();
        assert_eq!(err.kind(), "TopologyError");
    }

    #[test]
    fn wire_and_output_ranges() {
        let err = BoolCircuit::new(1, vec![Gate::Input(2)], 0).unwrap_err();
        assert_eq!(err.kind(), "WireOutOfRange");
        let err = BoolCircuit::new(1, vec![Gate::Input(1)], 1).unwrap_err();
        assert_eq!(err.kind(), "OutputOutOfRange");
    }

    #[test]
    fn big_and_small_eval_agree() {
        // x0 AND NOT y1
        let gates = vec![Gate::Input(0), Gate::Input(3), Gate::Not(1), Gate::And(0, 2)];
        let c = BoolCircuit::new(2, gates, 3).unwrap();
        for x in 0..4u64 {
            for y in 0..4u64 {
                let want = x & 1 == 1 && (y >> 1) & 1 == 0;
                assert_eq!(c.eval_u64(x, y).unwrap(), want);
                assert_eq!(c.eval(&x.into(), &y.into()).unwrap(), want);
            }
        }
    }
}
