//! JSON documents for elements, state lists, payoff matrices and polygons.

use ejq_core::division::{Coefficient, Ring};
use ejq_core::jordan::{Algebra, Element, StateElement};
use ejq_core::polygon::{parse_rational, Point, PolygonSpace};
use serde_json::{json, Value};

use crate::CliError;

fn schema(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.to_owned(),
        msg: msg.into(),
    }
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(path, "expected an object"))?;
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn number(v: &Value, path: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| schema(path, "expected a number"))
}

fn count(v: &Value, path: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

pub fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))
}

pub fn parse_algebra(v: &Value, path: &str) -> Result<Algebra, CliError> {
    let kind = field(v, path, "kind")?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}.kind"), "expected a string"))?;
    let alg = match kind {
        "spin" => Algebra::spin(count(field(v, path, "d")?, &format!("{path}.d"))?),
        "herm" => {
            let base = field(v, path, "base")?
                .as_str()
                .ok_or_else(|| schema(&format!("{path}.base"), "expected \"R\", \"C\" or \"H\""))?;
            let ring = match base {
                "R" => Ring::R,
                "C" => Ring::C,
                "H" => Ring::H,
                other => {
                    return Err(schema(
                        &format!("{path}.base"),
                        format!("unknown base {other:?}, expected R, C or H"),
                    ))
                }
            };
            Algebra::herm(ring, count(field(v, path, "n")?, &format!("{path}.n"))?)
        }
        "albert" => Ok(Algebra::Albert),
        other => return Err(schema(&format!("{path}.kind"), format!("unknown kind {other:?}"))),
    };
    alg.map_err(|e| schema(path, e.to_string()))
}

/// `spin:D`, `herm:R|C|H:N` or `albert`.
pub fn parse_algebra_descriptor(text: &str) -> Result<Algebra, CliError> {
    let bad = || CliError::Usage(format!("bad algebra {text:?}; use spin:D, herm:R|C|H:N or albert"));
    let parts: Vec<&str> = text.trim().split(':').collect();
    let alg = match parts.as_slice() {
        ["albert"] => Ok(Algebra::Albert),
        ["spin", d] => Algebra::spin(d.parse().map_err(|_| bad())?),
        ["herm", base, n] => {
            let ring = match *base {
                "R" => Ring::R,
                "C" => Ring::C,
                "H" => Ring::H,
                _ => return Err(bad()),
            };
            Algebra::herm(ring, n.parse().map_err(|_| bad())?)
        }
        _ => return Err(bad()),
    };
    alg.map_err(|e| CliError::Usage(e.to_string()))
}

pub fn algebra_descriptor(alg: Algebra) -> String {
    match alg {
        Algebra::Spin(d) => format!("spin:{d}"),
        Algebra::Herm(r, n) => format!("herm:{}:{n}", r.symbol()),
        Algebra::Albert => "albert".into(),
    }
}

pub fn algebra_json(alg: Algebra) -> Value {
    match alg {
        Algebra::Spin(d) => json!({"kind": "spin", "d": d}),
        Algebra::Herm(r, n) => json!({"kind": "herm", "base": r.symbol(), "n": n}),
        Algebra::Albert => json!({"kind": "albert"}),
    }
}

/// The `data` payload of an element of `alg`.
pub fn parse_data(alg: Algebra, v: &Value, path: &str) -> Result<Element, CliError> {
    match alg {
        Algebra::Spin(d) => {
            let s = number(field(v, path, "s")?, &format!("{path}.s"))?;
            let vp = format!("{path}.v");
            let vec = array(field(v, path, "v")?, &vp)?;
            if vec.len() != d {
                return Err(schema(&vp, format!("expected {d} components, got {}", vec.len())));
            }
            let v = vec
                .iter()
                .enumerate()
                .map(|(i, x)| number(x, &format!("{vp}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Element::spin(s, v).map_err(|e| schema(path, e.to_string()))
        }
        Algebra::Herm(..) | Algebra::Albert => {
            let (ring, n) = match alg {
                Algebra::Herm(r, n) => (r, n),
                _ => (Ring::O, 3),
            };
            let rows = array(v, path)?;
            if rows.len() != n {
                return Err(schema(path, format!("expected {n} rows, got {}", rows.len())));
            }
            let mut entries = Vec::with_capacity(n * n);
            for (i, row) in rows.iter().enumerate() {
                let rp = format!("{path}[{i}]");
                let row = array(row, &rp)?;
                if row.len() != n {
                    return Err(schema(&rp, format!("expected {n} entries, got {}", row.len())));
                }
                for (j, c) in row.iter().enumerate() {
                    let cp = format!("{rp}[{j}]");
                    let coords = array(c, &cp)?
                        .iter()
                        .enumerate()
                        .map(|(k, x)| number(x, &format!("{cp}[{k}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    if coords.len() != ring.dim() {
                        return Err(schema(
                            &cp,
                            format!("expected {} coordinates, got {}", ring.dim(), coords.len()),
                        ));
                    }
                    entries.push(Coefficient::new(ring, &coords).map_err(|e| schema(&cp, e.to_string()))?);
                }
            }
            Element::hermitian(alg, entries).map_err(|e| schema(path, e.to_string()))
        }
    }
}

pub fn parse_element(text: &str) -> Result<Element, CliError> {
    let v = parse_json(text)?;
    let alg = parse_algebra(field(&v, "$", "algebra")?, "$.algebra")?;
    parse_data(alg, field(&v, "$", "data")?, "$.data")
}

pub fn parse_state(text: &str) -> Result<StateElement, CliError> {
    let e = parse_element(text)?;
    StateElement::new(e).map_err(|e| schema("$.data", e.to_string()))
}

pub fn parse_state_list(text: &str) -> Result<Vec<StateElement>, CliError> {
    let v = parse_json(text)?;
    let alg = parse_algebra(field(&v, "$", "algebra")?, "$.algebra")?;
    let list = array(field(&v, "$", "states")?, "$.states")?;
    if list.is_empty() {
        return Err(schema("$.states", "expected at least one state"));
    }
    list.iter()
        .enumerate()
        .map(|(i, d)| {
            let p = format!("$.states[{i}]");
            StateElement::new(parse_data(alg, d, &p)?).map_err(|e| schema(&p, e.to_string()))
        })
        .collect()
}

/// `{"payoff": [[…], …]}`.
pub fn parse_payoff(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let v = parse_json(text)?;
    let rows = array(field(&v, "$", "payoff")?, "$.payoff")?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let p = format!("$.payoff[{i}]");
            array(r, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| number(x, &format!("{p}[{j}]")))
                .collect()
        })
        .collect()
}

/// `{"vertices": [["p/q", "r/s"], …]}`.
pub fn parse_polygon(text: &str) -> Result<PolygonSpace, CliError> {
    let v = parse_json(text)?;
    let list = array(field(&v, "$", "vertices")?, "$.vertices")?;
    let mut pts = Vec::with_capacity(list.len());
    for (i, p) in list.iter().enumerate() {
        let path = format!("$.vertices[{i}]");
        let xy = array(p, &path)?;
        if xy.len() != 2 {
            return Err(schema(&path, "expected a pair of rationals"));
        }
        let coord = |k: usize| {
            let cp = format!("{path}[{k}]");
            let s = match &xy[k] {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(schema(&cp, "expected a rational string such as \"1/2\"")),
            };
            parse_rational(&s).map_err(|e| schema(&cp, e.to_string()))
        };
        pts.push(Point::new(coord(0)?, coord(1)?));
    }
    PolygonSpace::new(pts).map_err(|e| schema("$.vertices", e.to_string()))
}

pub fn render_data(e: &Element) -> Value {
    if let Some((s, v)) = e.spin_parts() {
        return json!({"s": s, "v": v});
    }
    let (_, n) = match e.algebra() {
        Algebra::Herm(r, n) => (r, n),
        _ => (Ring::O, 3),
    };
    let entries = e.entries().expect("matrix element");
    Value::Array(
        (0..n)
            .map(|i| {
                Value::Array(
                    (0..n)
                        .map(|j| json!(entries[i * n + j].coords()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn render_element(e: &Element) -> String {
    json!({"algebra": algebra_json(e.algebra()), "data": render_data(e)}).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_document() {
        let e = parse_element(r#"{"algebra":{"kind":"spin","d":3},"data":{"s":0.5,"v":[0.5,0,0]}}"#)
            .unwrap();
        assert_eq!(e.algebra(), Algebra::Spin(3));
        assert!(StateElement::new(e).is_ok());
    }

    #[test]
    fn herm_identity_document() {
        let e = parse_element(
            r#"{"algebra":{"kind":"herm","base":"C","n":2},"data":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#,
        )
        .unwrap();
        assert_eq!(e, Element::unit(Algebra::Herm(Ring::C, 2)));
    }

    #[test]
    fn errors_name_the_path() {
        let err = parse_element(r#"{"algebra":{"kind":"spin","d":3},"data":{"v":[0,0,0]}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("$.data") && err.contains("\"s\""), "{err}");
        let err = parse_element(r#"{"algebra":{"kind":"spin","d":3}}"#).unwrap_err().to_string();
        assert!(err.contains("missing field \"data\""), "{err}");
        let err = parse_element(r#"{"algebra":{"kind":"herm","base":"C","n":2},"data":[[[1,0],[0,1]],[[0,0],[1,0]]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("Hermitian"), "{err}");
        let err = parse_element(r#"{"algebra":{"kind":"herm","base":"R","n":2},"data":[[[1],[0]],[[0],["x"]]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("$.data[1][1][0]"), "{err}");
        assert!(parse_element("{\"algebra\":").is_err());
    }

    #[test]
    fn round_trip() {
        for alg in [Algebra::Spin(4), Algebra::Herm(Ring::H, 2), Algebra::Albert] {
            let e = ejq_core::random::random_element(alg, 3);
            let back = parse_element(&render_element(&e)).unwrap();
            assert!(back.distance(&e) <= 1e-15 * (1.0 + e.norm()), "{alg}");
        }
    }

    #[test]
    fn descriptors() {
        assert_eq!(parse_algebra_descriptor("herm:C:3").unwrap(), Algebra::Herm(Ring::C, 3));
        assert_eq!(parse_algebra_descriptor("albert").unwrap(), Algebra::Albert);
        assert!(parse_algebra_descriptor("herm:O:3").is_err());
        assert!(parse_algebra_descriptor("spin:0").is_err());
        for a in [Algebra::Spin(3), Algebra::Herm(Ring::R, 2), Algebra::Albert] {
            assert_eq!(parse_algebra_descriptor(&algebra_descriptor(a)).unwrap(), a);
        }
    }

    #[test]
    fn polygon_document() {
        let p = parse_polygon(r#"{"vertices":[["0","0"],["1","0"],["1/2","1"]]}"#).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert!(parse_polygon(r#"{"vertices":[["0","0"],["1/2","1"],["1","0"]]}"#).is_err());
    }
}
