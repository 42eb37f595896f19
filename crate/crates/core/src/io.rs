//! JSON and grid text formats. JSON keys come out sorted and every number is
//! an integer; indices in outline files are 1-based.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::constructions::ConstructionTrace;
use crate::latin::{Composition, LatinSquare, SubsquareSpec, Symbol};
use crate::necessary::{ExistenceVerdict, NecessaryViolation};
use crate::outline::OutlineRectangle;

/// Malformed input; `field` names the offending JSON path or grid position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{field}: {message}")]
pub struct ParseError {
    pub field: String,
    pub message: String,
}

impl ParseError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError {
            field: field.into(),
            message: message.into(),
        }
    }
}

type Parsed<T> = std::result::Result<T, ParseError>;

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
    s.push('\n');
    s
}

pub fn square_to_json(square: &LatinSquare, subsquares: &[SubsquareSpec]) -> Value {
    json!({
        "order": square.order(),
        "grid": square.rows(),
        "subsquares": subsquares
            .iter()
            .map(|s| json!({"row_offset": s.row_offset, "col_offset": s.col_offset, "order": s.order}))
            .collect::<Vec<_>>(),
    })
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Parsed<&'a Value> {
    obj.get(name)
        .ok_or_else(|| ParseError::new(name, "missing field"))
}

fn as_usize(v: &Value, name: &str) -> Parsed<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| ParseError::new(name, "expected a nonnegative integer"))
}

fn as_usize_list(v: &Value, name: &str) -> Parsed<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| ParseError::new(name, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("{name}[{i}]")))
        .collect()
}

fn parse_value(text: &str) -> Parsed<Map<String, Value>> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(ParseError::new("$", "expected a JSON object")),
        Err(e) => Err(ParseError::new(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )),
    }
}

/// Reads a square file; `subsquares` is optional. Only the shape is checked
/// here, not the latin property.
pub fn square_from_json(text: &str) -> Parsed<(LatinSquare, Vec<SubsquareSpec>)> {
    let obj = parse_value(text)?;
    let rows = field(&obj, "grid")?
        .as_array()
        .ok_or_else(|| ParseError::new("grid", "expected an array of rows"))?;
    let mut grid = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let name = format!("grid[{r}]");
        let cells = as_usize_list(row, &name)?;
        grid.push(cells.into_iter().map(|s| s as Symbol).collect::<Vec<_>>());
    }
    if let Some(order) = obj.get("order") {
        let order = as_usize(order, "order")?;
        if order != grid.len() {
            return Err(ParseError::new(
                "order",
                format!("says {order} but the grid has {} rows", grid.len()),
            ));
        }
    }
    let square = LatinSquare::from_rows(grid).map_err(|e| ParseError::new("grid", e.to_string()))?;
    let mut specs = Vec::new();
    if let Some(list) = obj.get("subsquares") {
        let list = list
            .as_array()
            .ok_or_else(|| ParseError::new("subsquares", "expected an array"))?;
        for (t, s) in list.iter().enumerate() {
            let name = format!("subsquares[{t}]");
            let o = s
                .as_object()
                .ok_or_else(|| ParseError::new(&name, "expected an object"))?;
            let get = |k: &str| -> Parsed<usize> {
                let path = format!("{name}.{k}");
                as_usize(o.get(k).ok_or_else(|| ParseError::new(&path, "missing field"))?, &path)
            };
            let (row_offset, col_offset, order) = (get("row_offset")?, get("col_offset")?, get("order")?);
            if row_offset + order > square.order() || col_offset + order > square.order() {
                return Err(ParseError::new(name, "block does not fit in the grid"));
            }
            let symbols = {
                let mut v: Vec<Symbol> = (0..order).map(|b| square.get(row_offset, col_offset + b)).collect();
                v.sort_unstable();
                v
            };
            specs.push(SubsquareSpec {
                row_offset,
                col_offset,
                order,
                symbols,
            });
        }
    }
    Ok((square, specs))
}

pub fn outline_to_json(o: &OutlineRectangle) -> Value {
    let mut cells = Vec::new();
    for i in 0..o.rows() {
        for j in 0..o.cols() {
            for (l, &count) in o.cell(i, j).iter().enumerate() {
                if count > 0 {
                    cells.push(json!({"i": i + 1, "j": j + 1, "symbol": l + 1, "count": count}));
                }
            }
        }
    }
    json!({
        "P": o.p().parts(),
        "Q": o.q().parts(),
        "R": o.r().parts(),
        "cells": cells,
    })
}

pub fn outline_from_json(text: &str) -> Parsed<OutlineRectangle> {
    let obj = parse_value(text)?;
    let comp = |name: &str| -> Parsed<Composition> {
        let parts = as_usize_list(field(&obj, name)?, name)?;
        Composition::new(parts).map_err(|e| ParseError::new(name, e.to_string()))
    };
    let (p, q, r) = (comp("P")?, comp("Q")?, comp("R")?);
    if p.total() != q.total() || q.total() != r.total() {
        return Err(ParseError::new("P", "P, Q and R must have the same total"));
    }
    let mut o = OutlineRectangle::zero(p, q, r);
    let cells = field(&obj, "cells")?
        .as_array()
        .ok_or_else(|| ParseError::new("cells", "expected an array"))?;
    for (t, c) in cells.iter().enumerate() {
        let name = format!("cells[{t}]");
        let c = c
            .as_object()
            .ok_or_else(|| ParseError::new(&name, "expected an object"))?;
        let get = |k: &str, bound: usize| -> Parsed<usize> {
            let path = format!("{name}.{k}");
            let v = as_usize(c.get(k).ok_or_else(|| ParseError::new(&path, "missing field"))?, &path)?;
            if bound > 0 && (v == 0 || v > bound) {
                return Err(ParseError::new(path, format!("must be in 1..={bound}")));
            }
            Ok(v)
        };
        let i = get("i", o.rows())?;
        let j = get("j", o.cols())?;
        let l = get("symbol", o.symbols())?;
        let count = get("count", 0)?;
        o.add(i - 1, j - 1, l - 1, count as u64);
    }
    Ok(o)
}

pub fn violation_to_json(v: &NecessaryViolation) -> Value {
    serde_json::to_value(v).expect("plain data")
}

pub fn trace_to_json(t: &ConstructionTrace) -> Value {
    serde_json::to_value(t).expect("plain data")
}

/// `{"status", "basis", "witness"?, "certificate"?}`; the witness uses the
/// square format.
pub fn verdict_to_json(v: &ExistenceVerdict, parts: &[usize]) -> Value {
    let mut m = Map::new();
    m.insert("status".into(), serde_json::to_value(v.status).expect("enum"));
    m.insert("basis".into(), Value::String(v.basis.clone()));
    if let Some(w) = &v.witness {
        m.insert("witness".into(), square_to_json(w, &w.subsquare_specs(parts)));
    }
    if let Some(c) = &v.certificate {
        m.insert("certificate".into(), serde_json::to_value(c).expect("plain data"));
    }
    Value::Object(m)
}

/// One row per line, symbols separated by whitespace.
pub fn square_to_grid(square: &LatinSquare) -> String {
    square.to_string()
}

pub fn square_from_grid(text: &str) -> Parsed<LatinSquare> {
    let mut rows = Vec::new();
    for (r, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let row = line
            .split_whitespace()
            .enumerate()
            .map(|(c, t)| {
                t.parse::<Symbol>()
                    .map_err(|_| ParseError::new(format!("row {} column {}", r + 1, c + 1), format!("bad symbol `{t}`")))
            })
            .collect::<Parsed<Vec<_>>>()?;
        rows.push(row);
    }
    LatinSquare::from_rows(rows).map_err(|e| ParseError::new("grid", e.to_string()))
}

/// Accepts a square file as JSON or as a bare grid.
pub fn read_square(text: &str) -> Parsed<(LatinSquare, Vec<SubsquareSpec>)> {
    if text.trim_start().starts_with('{') {
        square_from_json(text)
    } else {
        Ok((square_from_grid(text)?, Vec::new()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{sample_square, sample_outline};

    #[test]
    fn square_roundtrip() {
        let sq = sample_square();
        let specs = sq.subsquare_specs(&[3, 2, 1]);
        let text = to_pretty(&square_to_json(&sq, &specs));
        let (back, back_specs) = square_from_json(&text).unwrap();
        assert_eq!(back, sq);
        assert_eq!(back_specs, specs);
        assert_eq!(square_from_grid(&square_to_grid(&sq)).unwrap(), sq);
    }

    #[test]
    fn outline_roundtrip() {
        let o = sample_outline();
        let v = outline_to_json(&o);
        assert_eq!(outline_from_json(&v.to_string()).unwrap(), o);
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["P", "Q", "R", "cells"]);
    }

    #[test]
    fn errors_name_fields() {
        let e = square_from_json(r#"{"grid": [[1, 2], [2, "x"]]}"#).unwrap_err();
        assert_eq!(e.field, "grid[1][1]");
        let e = outline_from_json(r#"{"P": [1], "Q": [1], "R": [1], "cells": [{"i": 2, "j": 1, "symbol": 1, "count": 1}]}"#)
            .unwrap_err();
        assert_eq!(e.field, "cells[0].i");
        let e = square_from_json("[1]").unwrap_err();
        assert_eq!(e.field, "$");
        assert!(square_from_grid("1 2\n2 y").is_err());
    }
}
