//! JSON and CSV rendering. Every rational is written as an `a/b` string.

use std::fmt::Display;
use std::hash::Hash;

use qtsetlin::hecke_chains::LinearOperator;
use qtsetlin::stationary::StationaryVector;
use qtsetlin::{format_rational, Rational};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A rectangular table with a header row, rendered either way.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn matrix_json<S: Clone + Eq + Hash + Display>(op: &LinearOperator<Rational, S>) -> Value {
    let states: Vec<String> = op.states().iter().map(ToString::to_string).collect();
    let entries: Vec<Vec<String>> =
        op.matrix().to_rows().iter().map(|row| row.iter().map(format_rational).collect()).collect();
    json!({ "states": states, "entries": entries })
}

pub fn matrix_table<S: Clone + Eq + Hash + Display>(op: &LinearOperator<Rational, S>) -> Table {
    let mut header = vec!["state".to_string()];
    header.extend(op.states().iter().map(ToString::to_string));
    let rows = op
        .states()
        .iter()
        .zip(op.matrix().to_rows())
        .map(|(s, row)| std::iter::once(s.to_string()).chain(row.iter().map(format_rational)).collect())
        .collect();
    Table { header, rows }
}

pub fn vector_json<S: Clone + Eq + Hash + Display>(v: &StationaryVector<Rational, S>) -> Value {
    let map: Map<String, Value> = v.iter().map(|(s, x)| (s.to_string(), Value::String(format_rational(x)))).collect();
    Value::Object(map)
}

/// One column per method, states in the order of the first vector.
pub fn vectors_table<S: Clone + Eq + Hash + Display>(methods: &[(&str, StationaryVector<Rational, S>)]) -> Table {
    let mut header = vec!["state".to_string()];
    header.extend(methods.iter().map(|(name, _)| name.to_string()));
    let rows = match methods.first() {
        None => vec![],
        Some((_, first)) => (0..first.states().len())
            .map(|i| {
                std::iter::once(first.states()[i].to_string())
                    .chain(methods.iter().map(|(_, v)| format_rational(&v.values()[i])))
                    .collect()
            })
            .collect(),
    };
    Table { header, rows }
}
