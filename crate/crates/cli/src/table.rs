//! Two-column `path,value` tables that convert losslessly to and from JSON.
//!
//! Paths use `.key` for object members and `[i]` for array elements; keys that
//! are not plain identifiers are written as quoted JSON strings. Values are
//! compact JSON scalars, or `[]` / `{}` for empty containers.

use std::io::{Read, Write};

use serde_json::{Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: {reason}")]
    Row { row: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq)]
enum Segment {
    Key(String),
    Index(usize),
}

fn is_plain(key: &str) -> bool {
    !key.is_empty()
        && key
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && !key.starts_with(|c: char| c.is_ascii_digit())
}

fn render_path(path: &[Segment]) -> String {
    let mut out = String::new();
    for seg in path {
        match seg {
            Segment::Key(k) if is_plain(k) => {
                out.push('.');
                out.push_str(k);
            }
            Segment::Key(k) => {
                out.push('.');
                out.push_str(&Value::String(k.clone()).to_string());
            }
            Segment::Index(i) => out.push_str(&format!("[{i}]")),
        }
    }
    out
}

fn parse_path(text: &str) -> Result<Vec<Segment>, String> {
    let bytes = text.as_bytes();
    let mut segs = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'.' if bytes.get(i + 1) == Some(&b'"') => {
                let mut de =
                    serde_json::Deserializer::from_str(&text[i + 1..]).into_iter::<String>();
                let key = de
                    .next()
                    .ok_or("missing quoted key")?
                    .map_err(|e| format!("bad quoted key: {e}"))?;
                i += 1 + de.byte_offset();
                segs.push(Segment::Key(key));
            }
            b'.' => {
                let end = text[i + 1..]
                    .find(['.', '['])
                    .map_or(text.len(), |e| i + 1 + e);
                let key = &text[i + 1..end];
                if !is_plain(key) {
                    return Err(format!("bad key {key:?}"));
                }
                segs.push(Segment::Key(key.to_string()));
                i = end;
            }
            b'[' => {
                let close = text[i..].find(']').ok_or("unclosed index")? + i;
                let idx = text[i + 1..close]
                    .parse()
                    .map_err(|e| format!("bad index: {e}"))?;
                segs.push(Segment::Index(idx));
                i = close + 1;
            }
            _ => return Err(format!("unexpected character at offset {i}")),
        }
    }
    Ok(segs)
}

/// Leaf rows of `value` in document order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(v: &Value, path: &mut Vec<Segment>, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, child) in map {
                    path.push(Segment::Key(k.clone()));
                    walk(child, path, out);
                    path.pop();
                }
            }
            Value::Array(items) if !items.is_empty() => {
                for (i, child) in items.iter().enumerate() {
                    path.push(Segment::Index(i));
                    walk(child, path, out);
                    path.pop();
                }
            }
            leaf => out.push((render_path(path), leaf.to_string())),
        }
    }
    let mut out = Vec::new();
    walk(value, &mut Vec::new(), &mut out);
    out
}

fn insert(target: &mut Value, path: &[Segment], leaf: Value) -> Result<(), String> {
    let Some((head, rest)) = path.split_first() else {
        if !target.is_null() {
            return Err("path assigned twice".into());
        }
        *target = leaf;
        return Ok(());
    };
    match head {
        Segment::Key(k) => {
            if target.is_null() {
                *target = Value::Object(Map::new());
            }
            let map = target.as_object_mut().ok_or("key under a non-object")?;
            insert(map.entry(k.clone()).or_insert(Value::Null), rest, leaf)
        }
        Segment::Index(i) => {
            if target.is_null() {
                *target = Value::Array(Vec::new());
            }
            let items = target.as_array_mut().ok_or("index under a non-array")?;
            if *i > items.len() {
                return Err(format!("index {i} skips elements"));
            }
            if *i == items.len() {
                items.push(Value::Null);
            }
            insert(&mut items[*i], rest, leaf)
        }
    }
}

/// Rebuilds the JSON document from its leaf rows.
pub fn unflatten(rows: &[(String, String)]) -> Result<Value, TableError> {
    let mut root = Value::Null;
    for (n, (path, raw)) in rows.iter().enumerate() {
        let row = n + 1;
        let segs = parse_path(path).map_err(|reason| TableError::Row { row, reason })?;
        let leaf: Value = serde_json::from_str(raw).map_err(|e| TableError::Row {
            row,
            reason: format!("value is not JSON: {e}"),
        })?;
        insert(&mut root, &segs, leaf).map_err(|reason| TableError::Row { row, reason })?;
    }
    Ok(root)
}

pub fn write_csv<W: Write>(value: &Value, out: W) -> Result<(), TableError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["path", "value"])?;
    for (path, val) in flatten(value) {
        w.write_record([path, val])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Value, TableError> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r
        .deserialize::<(String, String)>()
        .collect::<Result<Vec<_>, _>>()?;
    unflatten(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    fn roundtrip(v: Value) {
        let mut buf = Vec::new();
        write_csv(&v, &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), v);
    }

    #[test]
    fn nested_documents() {
        roundtrip(json!({
            "betti": {"values": [0, 1, 1]},
            "cells": {"0": ["a,b", "c\"d"], "odd key.x": null},
            "empty": [], "none": {},
            "x": 1.5e-9, "flag": true,
            "rows": [[1, 2], [], [{"k": "v"}]]
        }));
        roundtrip(json!(3));
        roundtrip(json!([]));
    }

    #[test]
    fn paths() {
        let rows = flatten(&json!({"a": [{"b": 1}], "1x": 2}));
        assert_eq!(rows[0].0, ".\"1x\"");
        assert_eq!(rows[1].0, ".a[0].b");
    }

    #[test]
    fn malformed_rows() {
        let bad = |p: &str, v: &str| unflatten(&[(p.to_string(), v.to_string())]).is_err();
        assert!(bad(".a", "nope"));
        assert!(bad("a", "1"));
        assert!(bad("[2]", "1"));
        assert!(unflatten(&[(".a".into(), "1".into()), (".a".into(), "2".into())]).is_err());
    }

    fn arb_json() -> impl Strategy<Value = Value> {
        let leaf = prop_oneof![
            Just(Value::Null),
            any::<bool>().prop_map(Value::from),
            any::<i64>().prop_map(Value::from),
            (-1e12f64..1e12).prop_map(Value::from),
            ".{0,8}".prop_map(Value::from),
        ];
        leaf.prop_recursive(4, 32, 5, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..5).prop_map(Value::Array),
                prop::collection::btree_map(".{0,6}", inner, 0..5)
                    .prop_map(|m| Value::Object(m.into_iter().collect())),
            ]
        })
    }

    proptest! {
        #[test]
        fn any_document_round_trips(v in arb_json()) {
            let mut buf = Vec::new();
            write_csv(&v, &mut buf).unwrap();
            prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), v);
        }
    }
}
