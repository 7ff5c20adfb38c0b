//! JSON and CSV rendering of reports.
//!
//! Numbers are written in shortest round-trip form, so identical jobs give
//! byte-identical output.

use serde_json::{Map, Value};

use crate::error::JobError;
use crate::report::Report;

pub fn render_json(report: &Report) -> Result<String, JobError> {
    let mut s = serde_json::to_string_pretty(&report.to_json())?;
    s.push('\n');
    Ok(s)
}

fn is_complex_pair(v: &[Value]) -> bool {
    v.len() == 2 && v.iter().all(|x| x.is_number() || x.is_null())
}

/// Flatten scalars into `(column, value)` pairs. Complex pairs become
/// `key_re`/`key_im`, nested objects `outer.inner`; other arrays are dropped.
fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, Value)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(m) => {
            for (k, v) in m {
                match v {
                    Value::Array(a) if is_complex_pair(a) => {
                        out.push((format!("{}_re", key(k)), a[0].clone()));
                        out.push((format!("{}_im", key(k)), a[1].clone()));
                    }
                    Value::Array(_) => {}
                    Value::Object(_) => flatten(&key(k), v, out),
                    _ => out.push((key(k), v.clone())),
                }
            }
        }
        _ => out.push((prefix.to_string(), value.clone())),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One record per table row (summary columns first), or a single summary
/// record when the command has no table.
pub fn records(report: &Report) -> Vec<Vec<(String, Value)>> {
    let mut summary_obj = Map::new();
    for (k, v) in &report.results {
        if Some(k.as_str()) != report.table {
            summary_obj.insert(k.clone(), v.clone());
        }
    }
    let mut summary = Vec::new();
    flatten("", &Value::Object(summary_obj), &mut summary);

    let rows = report
        .table
        .and_then(|t| report.results.get(t))
        .and_then(Value::as_array)
        .filter(|rows| !rows.is_empty());
    match rows {
        None => vec![summary],
        Some(rows) => rows
            .iter()
            .map(|row| {
                let mut rec = summary.clone();
                flatten("", row, &mut rec);
                rec
            })
            .collect(),
    }
}

pub fn render_csv(report: &Report) -> Result<String, JobError> {
    let recs = records(report);
    let mut header: Vec<String> = Vec::new();
    for rec in &recs {
        for (k, _) in rec {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for rec in &recs {
        let line: Vec<String> = header
            .iter()
            .map(|h| rec.iter().find(|(k, _)| k == h).map_or_else(String::new, |(_, v)| cell(v)))
            .collect();
        w.write_record(&line)?;
    }
    let bytes = w.into_inner().map_err(|e| JobError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flatten_splits_complex_pairs() {
        let mut out = Vec::new();
        flatten("", &json!({"a": [1.0, 2.0], "b": {"c": true}, "m": [[1, 2], [3, 4], [5, 6]]}), &mut out);
        let keys: Vec<_> = out.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, vec!["a_re", "a_im", "b.c"]);
    }
}
