//! Machine-readable search logs.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// An ordered list of JSON events, written out as JSON lines.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transcript {
    pub events: Vec<Value>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `{"event": name, ...fields}`.
    pub fn record(&mut self, name: &str, fields: Value) {
        let mut obj = json!({ "event": name });
        if let (Some(map), Value::Object(extra)) = (obj.as_object_mut(), fields) {
            map.extend(extra);
        }
        self.events.push(obj);
    }

    pub fn extend(&mut self, other: Transcript) {
        self.events.extend(other.events);
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_lines() {
        let mut t = Transcript::new();
        t.record("try", json!({ "conjugator": [1, 0] }));
        t.record("done", json!({}));
        assert_eq!(t.to_json_lines(), "{\"conjugator\":[1,0],\"event\":\"try\"}\n{\"event\":\"done\"}\n");
        assert_eq!(t.len(), 2);
    }
}
