//! Ordered JSON values with fixed float formatting, so that reports are
//! byte-identical across runs.

use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl From<f64> for Json {
    fn from(v: f64) -> Self {
        Json::Num(v)
    }
}

impl From<bool> for Json {
    fn from(v: bool) -> Self {
        Json::Bool(v)
    }
}

impl From<usize> for Json {
    fn from(v: usize) -> Self {
        Json::Int(v as i64)
    }
}

impl From<&str> for Json {
    fn from(v: &str) -> Self {
        Json::Str(v.to_string())
    }
}

impl From<String> for Json {
    fn from(v: String) -> Self {
        Json::Str(v)
    }
}

impl<T: Into<Json>> From<Option<T>> for Json {
    fn from(v: Option<T>) -> Self {
        v.map_or(Json::Null, Into::into)
    }
}

impl<T: Into<Json>> From<Vec<T>> for Json {
    fn from(v: Vec<T>) -> Self {
        Json::Arr(v.into_iter().map(Into::into).collect())
    }
}

/// Object builder preserving insertion order.
#[derive(Debug, Default)]
pub struct Obj(Vec<(String, Json)>);

impl Obj {
    pub fn new() -> Self {
        Obj(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }
}

impl From<Obj> for Json {
    fn from(o: Obj) -> Self {
        Json::Obj(o.0)
    }
}

/// 17 significant digits; non-finite values have no JSON form and become null.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

fn write(out: &mut String, v: &Json, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Json::Null => out.push_str("null"),
        Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Json::Int(i) => write!(out, "{i}").unwrap(),
        Json::Num(x) => out.push_str(&float(*x)),
        Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Json::Arr(items) if items.iter().all(|i| !matches!(i, Json::Arr(_) | Json::Obj(_))) => {
            out.push('[');
            for (k, i) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write(out, i, indent);
            }
            out.push(']');
        }
        Json::Arr(items) => {
            out.push_str("[\n");
            for (k, i) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write(out, i, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Json::Obj(fields) if fields.is_empty() => out.push_str("{}"),
        Json::Obj(fields) => {
            out.push_str("{\n");
            for (k, (key, val)) in fields.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                out.push_str(": ");
                write(out, val, indent + 1);
                out.push_str(if k + 1 < fields.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

pub fn render(v: &Json) -> String {
    let mut s = String::new();
    write(&mut s, v, 0);
    s.push('\n');
    s
}

/// Flattens to `path,value` rows, for CSV output of non-tabular reports.
pub fn flatten(v: &Json, prefix: &str, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Json::Arr(items) => items.iter().enumerate().for_each(|(k, i)| flatten(i, &join(&k.to_string()), rows)),
        Json::Obj(fields) => fields.iter().for_each(|(k, i)| flatten(i, &join(k), rows)),
        Json::Str(s) => rows.push((prefix.to_string(), s.clone())),
        other => {
            let mut s = String::new();
            write(&mut s, other, 0);
            rows.push((prefix.to_string(), s));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(-2.0), "-2.0000000000000000e0");
        assert_eq!(float(f64::NAN), "null");
        for x in [0.1, 1.0 / 3.0, 9.869604401089358, -1e-300, 6.02e23] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn rendering_is_valid_and_ordered() {
        let v: Json = Obj::new().with("z", 1.5).with("a", vec![1usize, 2]).with("m", Obj::new().with("s", "q\"x")).into();
        let text = render(&v);
        assert!(text.find("\"z\"").unwrap() < text.find("\"a\"").unwrap());
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["m"]["s"], "q\"x");
        assert_eq!(back["z"].as_f64(), Some(1.5));
        let mut rows = Vec::new();
        flatten(&v, "", &mut rows);
        assert_eq!(rows[1], ("a.0".to_string(), "1".to_string()));
    }
}
