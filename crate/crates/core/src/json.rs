//! Canonical JSON forms of box tables and tensors.
//!
//! Keys are written in sorted order and probabilities as exact fraction
//! strings, so equal values always serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::table::{bitstring, parse_bitstring, BoxTable};
use crate::tensor::{GptTensor, Role};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntry {
    a: String,
    p: Dyadic,
    x: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    entries: Vec<TableEntry>,
    n_parties: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDoc {
    entries: Vec<Dyadic>,
    n_parties: usize,
    role: Role,
}

fn table_doc(t: &BoxTable) -> TableDoc {
    let n = t.n_parties();
    let mut entries = Vec::new();
    for x in 0..t.strings() {
        for a in 0..t.strings() {
            let p = t.get(x, a);
            if !p.is_zero() {
                entries.push(TableEntry { a: bitstring(a, n), p, x: bitstring(x, n) });
            }
        }
    }
    TableDoc { entries, n_parties: n }
}

pub fn table_to_value(t: &BoxTable) -> serde_json::Value {
    serde_json::to_value(table_doc(t)).expect("table serializes")
}

pub fn table_to_json(t: &BoxTable) -> String {
    serde_json::to_string_pretty(&table_doc(t)).expect("table serializes")
}

/// Parse and fully validate a table. Repeated `(x, a)` keys are rejected.
pub fn table_from_json(s: &str) -> Result<BoxTable> {
    table_from_value(serde_json::from_str(s)?)
}

pub fn table_from_value(v: serde_json::Value) -> Result<BoxTable> {
    let doc: TableDoc = serde_json::from_value(v)?;
    let n = doc.n_parties;
    if n == 0 {
        return Err(Error::ZeroParties);
    }
    if n > 16 {
        return Err(Error::TooManyParties { n, max: 16 });
    }
    let size = 1usize << n;
    let mut probs = vec![None; size * size];
    for e in &doc.entries {
        let x = parse_bitstring(&e.x, n)?;
        let a = parse_bitstring(&e.a, n)?;
        let slot = &mut probs[(x << n) | a];
        if slot.replace(e.p).is_some() {
            return Err(Error::Parse(format!("duplicate entry x={} a={}", e.x, e.a)));
        }
    }
    BoxTable::new(n, probs.into_iter().map(|p| p.unwrap_or(Dyadic::ZERO)).collect())
}

fn tensor_doc(t: &GptTensor) -> TensorDoc {
    TensorDoc { entries: t.entries().to_vec(), n_parties: t.n_parties(), role: t.role() }
}

pub fn tensor_to_value(t: &GptTensor) -> serde_json::Value {
    serde_json::to_value(tensor_doc(t)).expect("tensor serializes")
}

pub fn tensor_to_json(t: &GptTensor) -> String {
    serde_json::to_string_pretty(&tensor_doc(t)).expect("tensor serializes")
}

/// Parse a tensor. States must be normalized; no polytope check is made here.
pub fn tensor_from_json(s: &str) -> Result<GptTensor> {
    tensor_from_value(serde_json::from_str(s)?)
}

pub fn tensor_from_value(v: serde_json::Value) -> Result<GptTensor> {
    let doc: TensorDoc = serde_json::from_value(v)?;
    match doc.role {
        Role::State => GptTensor::state(doc.n_parties, doc.entries),
        Role::Effect => GptTensor::effect(doc.n_parties, doc.entries),
    }
}
