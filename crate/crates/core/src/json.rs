//! Shared pieces of the JSON output format.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::rational::{self, Rational};

pub const SCHEMA: &str = "phi4-hopf/1";

/// Wraps a result with the schema tag and the configuration that produced it.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub schema: &'static str,
    pub config: &'a C,
    pub result: &'a R,
}

impl<'a, C: Serialize, R: Serialize> Envelope<'a, C, R> {
    pub fn new(config: &'a C, result: &'a R) -> Self {
        Envelope {
            schema: SCHEMA,
            config,
            result,
        }
    }

    pub fn to_string_pretty(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

pub fn rational<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(value))
}

pub fn rationals<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&rational::format(v))?;
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        #[serde(serialize_with = "rationals")]
        values: Vec<Rational>,
    }

    #[test]
    fn envelope_shape() {
        let row = Row {
            values: vec![rational::ratio(-3, 4), rational::int(2)],
        };
        let text = serde_json::to_string(&Envelope::new(&"cfg", &row)).unwrap();
        assert_eq!(text, r#"{"schema":"phi4-hopf/1","config":"cfg","result":{"values":["-3/4","2/1"]}}"#);
    }
}
