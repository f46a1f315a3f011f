use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{BoolCircuit, CircuitError, Gate, GateId};

/// Widest bundle any primitive will produce.
pub const MAX_BUNDLE_WIDTH: usize = 4096;

/// Gate indices read as an unsigned integer, least-significant bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireBundle(Vec<GateId>);

impl WireBundle {
    pub fn new(bits: Vec<GateId>) -> Self {
        WireBundle(bits)
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &[GateId] {
        &self.0
    }

    pub fn bit(&self, i: usize) -> GateId {
        self.0[i]
    }

    /// The low `width` bits (the value modulo `2^width`).
    pub fn truncated(&self, width: usize) -> WireBundle {
        WireBundle(self.0[..width.min(self.0.len())].to_vec())
    }

    /// Reads the bundle's value out of a full gate valuation.
    pub fn value(&self, gate_values: &[bool]) -> BigUint {
        let mut v = BigUint::zero();
        for (i, &g) in self.0.iter().enumerate() {
            if gate_values[g] {
                v.set_bit(i as u64, true);
            }
        }
        v
    }
}

/// Single-owner builder that appends gates and synthesizes arithmetic primitives.
///
/// Gates are hash-consed and constants are folded, so requesting the same
/// sub-expression twice costs nothing.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    label_bits: usize,
    gates: Vec<Gate>,
    index: HashMap<Gate, GateId>,
}

impl CircuitBuilder {
    pub fn new(label_bits: usize) -> Self {
        CircuitBuilder {
            label_bits,
            gates: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn label_bits(&self) -> usize {
        self.label_bits
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    fn push(&mut self, gate: Gate) -> GateId {
        if let Some(&id) = self.index.get(&gate) {
            return id;
        }
        let id = self.gates.len();
        self.gates.push(gate);
        self.index.insert(gate, id);
        id
    }

    fn const_value(&self, g: GateId) -> Option<bool> {
        match self.gates[g] {
            Gate::Const(b) => Some(b),
            _ => None,
        }
    }

    pub fn constant(&mut self, value: bool) -> GateId {
        self.push(Gate::Const(value))
    }

    pub fn input(&mut self, wire: usize) -> Result<GateId, CircuitError> {
        if wire >= 2 * self.label_bits {
            return Err(CircuitError::BadParam(format!(
                "input wire {wire} out of range for {} wires",
                2 * self.label_bits
            )));
        }
        Ok(self.push(Gate::Input(wire)))
    }

    /// The source label `x` as a bundle of input gates.
    pub fn x_label(&mut self) -> WireBundle {
        let bits = (0..self.label_bits).map(|w| self.push(Gate::Input(w))).collect();
        WireBundle(bits)
    }

    /// The target label `y` as a bundle of input gates.
    pub fn y_label(&mut self) -> WireBundle {
        let n = self.label_bits;
        let bits = (n..2 * n).map(|w| self.push(Gate::Input(w))).collect();
        WireBundle(bits)
    }

    pub fn not(&mut self, g: GateId) -> GateId {
        match self.gates[g] {
            Gate::Const(b) => self.constant(!b),
            Gate::Not(h) => h,
            _ => self.push(Gate::Not(g)),
        }
    }

    pub fn and(&mut self, a: GateId, b: GateId) -> GateId {
        match (self.const_value(a), self.const_value(b)) {
            (Some(false), _) | (_, Some(false)) => self.constant(false),
            (Some(true), _) => b,
            (_, Some(true)) => a,
            _ if a == b => a,
            _ => self.push(Gate::And(a.min(b), a.max(b))),
        }
    }

    pub fn or(&mut self, a: GateId, b: GateId) -> GateId {
        match (self.const_value(a), self.const_value(b)) {
            (Some(true), _) | (_, Some(true)) => self.constant(true),
            (Some(false), _) => b,
            (_, Some(false)) => a,
            _ if a == b => a,
            _ => self.push(Gate::Or(a.min(b), a.max(b))),
        }
    }

    pub fn xor(&mut self, a: GateId, b: GateId) -> GateId {
        match (self.const_value(a), self.const_value(b)) {
            (Some(x), _) => {
                if x {
                    self.not(b)
                } else {
                    b
                }
            }
            (_, Some(y)) => {
                if y {
                    self.not(a)
                } else {
                    a
                }
            }
            _ => {
                let either = self.or(a, b);
                let both = self.and(a, b);
                let not_both = self.not(both);
                self.and(either, not_both)
            }
        }
    }

    pub fn xnor(&mut self, a: GateId, b: GateId) -> GateId {
        match (self.const_value(a), self.const_value(b)) {
            (Some(_), _) | (_, Some(_)) => {
                let x = self.xor(a, b);
                self.not(x)
            }
            _ => {
                let both = self.and(a, b);
                let either = self.or(a, b);
                let neither = self.not(either);
                self.or(both, neither)
            }
        }
    }

    /// Left-leaning ladder of binary ANDs; the empty conjunction is `true`.
    pub fn and_all<I: IntoIterator<Item = GateId>>(&mut self, gates: I) -> GateId {
        let mut acc = self.constant(true);
        for g in gates {
            acc = self.and(acc, g);
        }
        acc
    }

    /// Left-leaning ladder of binary ORs; the empty disjunction is `false`.
    pub fn or_all<I: IntoIterator<Item = GateId>>(&mut self, gates: I) -> GateId {
        let mut acc = self.constant(false);
        for g in gates {
            acc = self.or(acc, g);
        }
        acc
    }

    /// `if select { when_true } else { when_false }`
    pub fn mux2(&mut self, select: GateId, when_false: GateId, when_true: GateId) -> GateId {
        if when_false == when_true {
            return when_false;
        }
        let ns = self.not(select);
        let a = self.and(ns, when_false);
        let b = self.and(select, when_true);
        self.or(a, b)
    }

    pub fn constant_bundle(&mut self, value: &BigUint, width: usize) -> WireBundle {
        let bits = (0..width).map(|i| self.constant(value.bit(i as u64))).collect();
        WireBundle(bits)
    }

    fn zero_extend(&mut self, b: &WireBundle, width: usize) -> WireBundle {
        let mut bits = b.0.clone();
        while bits.len() < width {
            bits.push(self.constant(false));
        }
        WireBundle(bits)
    }

    fn check_width(width: usize) -> Result<(), CircuitError> {
        if width == 0 {
            return Err(CircuitError::BadParam("bundle width must be positive".into()));
        }
        if width > MAX_BUNDLE_WIDTH {
            return Err(CircuitError::BadParam(format!(
                "result width {width} exceeds {MAX_BUNDLE_WIDTH}"
            )));
        }
        Ok(())
    }

    /// `bundle == c`
    pub fn eq_const(&mut self, bundle: &WireBundle, c: &BigUint) -> Result<GateId, CircuitError> {
        Self::check_width(bundle.width())?;
        if c.bits() > bundle.width() as u64 {
            return Ok(self.constant(false));
        }
        let mut lits = Vec::with_capacity(bundle.width());
        for (i, &g) in bundle.0.iter().enumerate() {
            lits.push(if c.bit(i as u64) { g } else { self.not(g) });
        }
        Ok(self.and_all(lits))
    }

    /// `a == b`, zero-extending the narrower operand.
    pub fn eq(&mut self, a: &WireBundle, b: &WireBundle) -> Result<GateId, CircuitError> {
        Self::check_width(a.width())?;
        Self::check_width(b.width())?;
        let w = a.width().max(b.width());
        let a = self.zero_extend(a, w);
        let b = self.zero_extend(b, w);
        let same: Vec<GateId> = (0..w).map(|i| self.xnor(a.0[i], b.0[i])).collect();
        Ok(self.and_all(same))
    }

    /// `bundle < c`
    pub fn less_const(&mut self, bundle: &WireBundle, c: &BigUint) -> Result<GateId, CircuitError> {
        Self::check_width(bundle.width())?;
        if c.bits() > bundle.width() as u64 {
            return Ok(self.constant(true));
        }
        // Scan from the least significant bit: lt holds the verdict on the prefix seen so far.
        let mut lt = self.constant(false);
        for (i, &g) in bundle.0.iter().enumerate() {
            let ng = self.not(g);
            lt = if c.bit(i as u64) {
                self.or(ng, lt)
            } else {
                self.and(ng, lt)
            };
        }
        Ok(lt)
    }

    /// Ripple-carry sum; the result is one bit wider than the wider operand.
    pub fn add(&mut self, a: &WireBundle, b: &WireBundle) -> Result<WireBundle, CircuitError> {
        let w = a.width().max(b.width());
        Self::check_width(w + 1)?;
        let a = self.zero_extend(a, w);
        let b = self.zero_extend(b, w);
        let mut carry = self.constant(false);
        let mut out = Vec::with_capacity(w + 1);
        for i in 0..w {
            let half = self.xor(a.0[i], b.0[i]);
            out.push(self.xor(half, carry));
            let gen = self.and(a.0[i], b.0[i]);
            let prop = self.and(half, carry);
            carry = self.or(gen, prop);
        }
        out.push(carry);
        Ok(WireBundle(out))
    }

    /// `bundle + c`, wide enough never to overflow.
    pub fn add_const(&mut self, bundle: &WireBundle, c: &BigUint) -> Result<WireBundle, CircuitError> {
        Self::check_width(bundle.width())?;
        let w = bundle.width().max(c.bits() as usize);
        Self::check_width(w + 1)?;
        let b = self.zero_extend(bundle, w);
        let mut carry = self.constant(false);
        let mut out = Vec::with_capacity(w + 1);
        for i in 0..w {
            let g = b.0[i];
            if c.bit(i as u64) {
                let s = self.xnor(g, carry);
                out.push(s);
                carry = self.or(g, carry);
            } else {
                let s = self.xor(g, carry);
                out.push(s);
                carry = self.and(g, carry);
            }
        }
        out.push(carry);
        Ok(WireBundle(out))
    }

    /// `(bundle - c) mod 2^width`, keeping the operand's width.
    pub fn sub_const(&mut self, bundle: &WireBundle, c: &BigUint) -> Result<WireBundle, CircuitError> {
        Self::check_width(bundle.width())?;
        let w = bundle.width();
        let modulus = BigUint::one() << w;
        let neg = (&modulus - (c % &modulus)) % &modulus;
        let sum = self.add_const(bundle, &neg)?;
        Ok(sum.truncated(w))
    }

    /// `bundle * c` by shift-and-add.
    pub fn mul_const(&mut self, bundle: &WireBundle, c: &BigUint) -> Result<WireBundle, CircuitError> {
        Self::check_width(bundle.width())?;
        let width = bundle.width() + c.bits() as usize;
        Self::check_width(width)?;
        if c.is_zero() {
            return Ok(self.constant_bundle(c, 1));
        }
        let mut acc: Option<WireBundle> = None;
        for i in 0..c.bits() as usize {
            if !c.bit(i as u64) {
                continue;
            }
            let zero = self.constant(false);
            let mut shifted = vec![zero; i];
            shifted.extend_from_slice(&bundle.0);
            let shifted = WireBundle(shifted);
            acc = Some(match acc {
                None => shifted,
                Some(prev) => self.add(&prev, &shifted)?.truncated(width),
            });
        }
        let acc = acc.expect("nonzero multiplier has a set bit");
        Ok(self.zero_extend(&acc, width))
    }

    /// Restoring long division by a positive constant: one conditional
    /// subtraction per dividend bit. Returns `(quotient, remainder)`.
    pub fn divmod_const(
        &mut self,
        bundle: &WireBundle,
        d: &BigUint,
    ) -> Result<(WireBundle, WireBundle), CircuitError> {
        Self::check_width(bundle.width())?;
        if d.is_zero() {
            return Err(CircuitError::BadParam("division by zero".into()));
        }
        let dw = d.bits() as usize;
        Self::check_width(dw + 1)?;
        let w = bundle.width();
        let mut quotient = vec![0; w];
        let mut rem: Vec<GateId> = Vec::new();
        for i in (0..w).rev() {
            // shifted = 2 * rem + bit_i; fits in dw + 1 bits because rem < d.
            let mut shifted = Vec::with_capacity(rem.len() + 1);
            shifted.push(bundle.0[i]);
            shifted.extend_from_slice(&rem);
            let shifted = self.zero_extend(&WireBundle(shifted), dw + 1).truncated(dw + 1);
            let lt = self.less_const(&shifted, d)?;
            let ge = self.not(lt);
            let diff = self.sub_const(&shifted, d)?;
            rem = (0..dw)
                .map(|k| self.mux2(ge, shifted.0[k], diff.0[k]))
                .collect();
            quotient[i] = ge;
        }
        Ok((WireBundle(quotient), WireBundle(rem)))
    }

    /// Selects `table[select]`, reading the select bits least-significant first.
    pub fn mux(&mut self, select: &[GateId], table: &[WireBundle]) -> Result<WireBundle, CircuitError> {
        if select.len() >= usize::BITS as usize || table.len() != 1usize << select.len() {
            return Err(CircuitError::BadParam(format!(
                "mux table has {} entries, expected 2^{}",
                table.len(),
                select.len()
            )));
        }
        let w = table.iter().map(WireBundle::width).max().unwrap_or(0);
        Self::check_width(w)?;
        let mut level: Vec<WireBundle> = table.iter().map(|b| self.zero_extend(b, w)).collect();
        for &s in select {
            level = level
                .chunks(2)
                .map(|pair| {
                    let bits = (0..w).map(|k| self.mux2(s, pair[0].0[k], pair[1].0[k])).collect();
                    WireBundle(bits)
                })
                .collect();
        }
        Ok(level.pop().expect("table is nonempty"))
    }

    /// Evaluates a CNF whose variable `v` (1-based) is bit `v - 1` of `vars`.
    pub fn cnf_eval(&mut self, clauses: &[Vec<i32>], vars: &WireBundle) -> Result<GateId, CircuitError> {
        let mut clause_gates = Vec::with_capacity(clauses.len());
        for clause in clauses {
            let mut lits = Vec::with_capacity(clause.len());
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if var == 0 || var > vars.width() {
                    return Err(CircuitError::BadParam(format!(
                        "literal {lit} outside the {}-variable bundle",
                        vars.width()
                    )));
                }
                let g = vars.0[var - 1];
                lits.push(if lit > 0 { g } else { self.not(g) });
            }
            clause_gates.push(self.or_all(lits));
        }
        Ok(self.and_all(clause_gates))
    }

    /// Values of every gate under the given wire assignment.
    pub fn evaluate(&self, wires: &[bool]) -> Vec<bool> {
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
        values
    }

    pub fn finish(self, output: GateId) -> Result<BoolCircuit, CircuitError> {
        BoolCircuit::new(self.label_bits, self.gates, output)
    }
}
