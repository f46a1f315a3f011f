use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BoolCircuit, CircuitError, Gate};

pub const FORMAT_VERSION: u32 = 1;

/// On-disk shape of a circuit before the topology checks run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawCircuit {
    version: u32,
    label_bits: usize,
    gates: Vec<Gate>,
    output: usize,
}

impl RawCircuit {
    pub(crate) fn into_circuit(self) -> Result<BoolCircuit, CircuitError> {
        if self.version != FORMAT_VERSION {
            return Err(CircuitError::ParseError {
                line: 0,
                column: 0,
                message: format!("unsupported circuit format version {}", self.version),
            });
        }
        BoolCircuit::new(self.label_bits, self.gates, self.output)
    }
}

impl From<&BoolCircuit> for RawCircuit {
    fn from(c: &BoolCircuit) -> Self {
        RawCircuit {
            version: FORMAT_VERSION,
            label_bits: c.label_bits,
            gates: c.gates.clone(),
            output: c.output,
        }
    }
}

impl Serialize for Gate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let len = match self {
            Gate::Input(_) | Gate::Const(_) | Gate::Not(_) => 2,
            Gate::And(..) | Gate::Or(..) => 3,
        };
        let mut seq = serializer.serialize_seq(Some(len))?;
        match *self {
            Gate::Input(w) => {
                seq.serialize_element("input")?;
                seq.serialize_element(&w)?;
            }
            Gate::Const(b) => {
                seq.serialize_element("const")?;
                seq.serialize_element(&u8::from(b))?;
            }
            Gate::Not(g) => {
                seq.serialize_element("not")?;
                seq.serialize_element(&g)?;
            }
            Gate::And(g, h) => {
                seq.serialize_element("and")?;
                seq.serialize_element(&g)?;
                seq.serialize_element(&h)?;
            }
            Gate::Or(g, h) => {
                seq.serialize_element("or")?;
                seq.serialize_element(&g)?;
                seq.serialize_element(&h)?;
            }
        }
        seq.end()
    }
}

struct GateVisitor;

impl<'de> Visitor<'de> for GateVisitor {
    type Value = Gate;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a gate record such as [\"and\", 0, 1]")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Gate, A::Error> {
        let tag: String = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let mut operand = |i: usize| -> Result<usize, A::Error> {
            seq.next_element()?
                .ok_or_else(|| de::Error::invalid_length(i, &self))
        };
        let gate = match tag.as_str() {
            "input" => Gate::Input(operand(1)?),
            "const" => match operand(1)? {
                0 => Gate::Const(false),
                1 => Gate::Const(true),
                other => return Err(de::Error::custom(format!("const gate value {other} is not 0 or 1"))),
            },
            "not" => Gate::Not(operand(1)?),
            "and" => {
                let g = operand(1)?;
                Gate::And(g, operand(2)?)
            }
            "or" => {
                let g = operand(1)?;
                Gate::Or(g, operand(2)?)
            }
            other => return Err(de::Error::unknown_variant(other, &["input", "const", "not", "and", "or"])),
        };
        if seq.next_element::<de::IgnoredAny>()?.is_some() {
            return Err(de::Error::custom(format!("too many operands for {tag} gate")));
        }
        Ok(gate)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Gate, D::Error> {
        deserializer.deserialize_seq(GateVisitor)
    }
}

impl Serialize for BoolCircuit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawCircuit::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BoolCircuit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<BoolCircuit, D::Error> {
        RawCircuit::deserialize(deserializer)?
            .into_circuit()
            .map_err(de::Error::custom)
    }
}

pub(crate) fn json_error(e: serde_json::Error) -> CircuitError {
    CircuitError::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl BoolCircuit {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawCircuit::from(self)).expect("circuit serialization is infallible")
    }

    /// Parses the JSON circuit format. Syntax problems are reported with their
    /// line and column; structural problems keep their own error kinds.
    pub fn from_json(text: &str) -> Result<BoolCircuit, CircuitError> {
        let raw: RawCircuit = serde_json::from_str(text).map_err(json_error)?;
        raw.into_circuit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use proptest::prelude::*;

    #[test]
    fn constant_true_round_trip() {
        let c = BoolCircuit::constant(3, true);
        let text = c.to_json();
        assert_eq!(text, r#"{"version":1,"label_bits":3,"gates":[["const",1]],"output":0}"#);
        assert_eq!(BoolCircuit::from_json(&text).unwrap(), c);
    }

    #[test]
    fn forward_reference_in_text() {
        let text = r#"{"version":1,"label_bits":1,"gates":[["input",0],["and",0,2],["not",0]],"output":1}"#;
        let err = BoolCircuit::from_json(text).unwrap_err();
        assert_eq!(err, CircuitError::TopologyError { gate: 1, target: 2 });
    }

    #[test]
    fn malformed_text_reports_position() {
        let text = "{\"version\":1,\n\"label_bits\":1,\n\"gates\":[[\"nand\",0,1]],\"output\":0}";
        match BoolCircuit::from_json(text).unwrap_err() {
            CircuitError::ParseError { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            BoolCircuit::from_json(r#"{"version":1,"label_bits":1,"gates":[["const",2]],"output":0}"#)
                .unwrap_err()
                .kind(),
            "ParseError"
        );
        assert_eq!(
            BoolCircuit::from_json(r#"{"version":1,"label_bits":1,"gates":[["not",0,1]],"output":0}"#)
                .unwrap_err()
                .kind(),
            "ParseError"
        );
    }

    fn arbitrary_circuit() -> impl Strategy<Value = BoolCircuit> {
        (1usize..4, prop::collection::vec((0u8..5, any::<u16>(), any::<u16>()), 1..40)).prop_map(
            |(n, recipe)| {
                let mut gates = Vec::new();
                for (i, (kind, a, b)) in recipe.into_iter().enumerate() {
                    let gate = if i == 0 {
                        Gate::Input(a as usize % (2 * n))
                    } else {
                        let (a, b) = (a as usize % i, b as usize % i);
                        match kind {
                            0 => Gate::Input(a % (2 * n)),
                            1 => Gate::Const(b % 2 == 0),
                            2 => Gate::Not(a),
                            3 => Gate::And(a, b),
                            _ => Gate::Or(a, b),
                        }
                    };
                    gates.push(gate);
                }
                let out = gates.len() - 1;
                BoolCircuit::new(n, gates, out).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn parse_inverts_serialize(c in arbitrary_circuit()) {
            let back = BoolCircuit::from_json(&c.to_json()).unwrap();
            prop_assert_eq!(back.gate_count(), c.gate_count());
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn synthesized_circuit_round_trip() {
        let mut b = CircuitBuilder::new(4);
        let x = b.x_label();
        let y = b.y_label();
        let (q, _) = b.divmod_const(&x, &3u32.into()).unwrap();
        let out = b.eq(&q, &y).unwrap();
        let c = b.finish(out).unwrap();
        assert_eq!(BoolCircuit::from_json(&c.to_json()).unwrap(), c);
    }
}
