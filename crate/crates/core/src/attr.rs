//! Typed attribute values attached to vertices and edges.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single attribute value. Columns in input files are untyped, so the
/// variant is chosen per column by [`infer_column`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttributeValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
}

/// The tag of an [`AttributeValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrType {
    Bool,
    Int,
    Float,
    Str,
}

impl AttrType {
    pub fn is_numeric(self) -> bool {
        matches!(self, AttrType::Int | AttrType::Float)
    }
}

impl fmt::Display for AttrType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttrType::Bool => "bool",
            AttrType::Int => "int",
            AttrType::Float => "float",
            AttrType::Str => "string",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot order a {left} value against a {right} value")]
pub struct IncomparableValues {
    pub left: AttrType,
    pub right: AttrType,
}

impl AttributeValue {
    pub fn attr_type(&self) -> AttrType {
        match self {
            AttributeValue::Bool(_) => AttrType::Bool,
            AttributeValue::Int(_) => AttrType::Int,
            AttributeValue::Float(_) => AttrType::Float,
            AttributeValue::Str(_) => AttrType::Str,
        }
    }

    fn as_f64(&self) -> Option<f64> {
        match *self {
            AttributeValue::Int(i) => Some(i as f64),
            AttributeValue::Float(x) => Some(x),
            _ => None,
        }
    }

    /// Equality used by predicates. Values of different tags are never equal,
    /// except that integers and floats compare numerically.
    pub fn matches_eq(&self, other: &AttributeValue) -> bool {
        match (self, other) {
            (AttributeValue::Int(a), AttributeValue::Int(b)) => a == b,
            (AttributeValue::Str(a), AttributeValue::Str(b)) => a == b,
            (AttributeValue::Bool(a), AttributeValue::Bool(b)) => a == b,
            _ => match (self.as_f64(), other.as_f64()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    }

    /// Ordering used by `<`, `<=`, `>`, `>=` predicates. Comparing across
    /// tags (other than int/float) is an error rather than `false`.
    pub fn try_compare(&self, other: &AttributeValue) -> Result<Ordering, IncomparableValues> {
        let err = || IncomparableValues {
            left: self.attr_type(),
            right: other.attr_type(),
        };
        match (self, other) {
            (AttributeValue::Int(a), AttributeValue::Int(b)) => Ok(a.cmp(b)),
            (AttributeValue::Str(a), AttributeValue::Str(b)) => Ok(a.cmp(b)),
            (AttributeValue::Bool(a), AttributeValue::Bool(b)) => Ok(a.cmp(b)),
            _ => match (self.as_f64(), other.as_f64()) {
                (Some(a), Some(b)) => a.partial_cmp(&b).ok_or_else(err),
                _ => Err(err()),
            },
        }
    }

    /// Text as written back to CSV.
    pub fn to_csv_field(&self) -> String {
        match self {
            AttributeValue::Bool(b) => b.to_string(),
            AttributeValue::Int(i) => i.to_string(),
            AttributeValue::Float(x) => format_float(*x),
            AttributeValue::Str(s) => s.clone(),
        }
    }
}

/// Shortest representation that parses back to the same float and is never
/// mistaken for an integer.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:?}");
    if s.contains(['.', 'e', 'E', 'i', 'N']) {
        s
    } else {
        format!("{s}.0")
    }
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeValue::Str(s) => write!(f, "{s:?}"),
            other => f.write_str(&other.to_csv_field()),
        }
    }
}

impl From<&str> for AttributeValue {
    fn from(s: &str) -> Self {
        AttributeValue::Str(s.to_string())
    }
}

impl From<i64> for AttributeValue {
    fn from(i: i64) -> Self {
        AttributeValue::Int(i)
    }
}

impl From<f64> for AttributeValue {
    fn from(x: f64) -> Self {
        AttributeValue::Float(x)
    }
}

impl From<bool> for AttributeValue {
    fn from(b: bool) -> Self {
        AttributeValue::Bool(b)
    }
}

/// Infers the type of a column from its non-empty raw cells: integer if all
/// parse as integers, else float, else boolean (`true`/`false`), else string.
/// An all-empty column is typed as string.
pub fn infer_column<'a, I>(cells: I) -> AttrType
where
    I: IntoIterator<Item = &'a str> + Clone,
{
    let non_empty = || cells.clone().into_iter().filter(|c| !c.is_empty());
    if non_empty().next().is_none() {
        return AttrType::Str;
    }
    if non_empty().all(|c| c.parse::<i64>().is_ok()) {
        AttrType::Int
    } else if non_empty().all(|c| c.parse::<f64>().is_ok()) {
        AttrType::Float
    } else if non_empty().all(|c| c == "true" || c == "false") {
        AttrType::Bool
    } else {
        AttrType::Str
    }
}

/// Converts a raw cell to a value of the given column type. Empty cells are
/// absent values. Panics only if `ty` was not inferred from this cell.
pub fn parse_cell(cell: &str, ty: AttrType) -> Option<AttributeValue> {
    if cell.is_empty() {
        return None;
    }
    Some(match ty {
        AttrType::Int => AttributeValue::Int(cell.parse().expect("inferred int column")),
        AttrType::Float => AttributeValue::Float(cell.parse().expect("inferred float column")),
        AttrType::Bool => AttributeValue::Bool(cell == "true"),
        AttrType::Str => AttributeValue::Str(cell.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_inference_order() {
        assert_eq!(infer_column(["1", "2", "-3"]), AttrType::Int);
        assert_eq!(infer_column(["1", "2.5"]), AttrType::Float);
        assert_eq!(infer_column(["true", "false"]), AttrType::Bool);
        assert_eq!(infer_column(["true", "1"]), AttrType::Str);
        assert_eq!(infer_column(["KC", "MBON"]), AttrType::Str);
        assert_eq!(infer_column(["", "4"]), AttrType::Int);
        assert_eq!(infer_column(["", ""]), AttrType::Str);
    }

    #[test]
    fn cross_tag_ordering_is_an_error() {
        let s = AttributeValue::from("a");
        let i = AttributeValue::from(3);
        assert!(s.try_compare(&i).is_err());
        assert!(!s.matches_eq(&i));
        assert_eq!(
            AttributeValue::Int(2).try_compare(&AttributeValue::Float(2.5)),
            Ok(Ordering::Less)
        );
        assert!(AttributeValue::Int(2).matches_eq(&AttributeValue::Float(2.0)));
        assert!(AttributeValue::Bool(true)
            .try_compare(&AttributeValue::Int(1))
            .is_err());
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [2.0, 0.1, -1e-7, 1e300, 3.25] {
            let s = format_float(x);
            assert!(s.parse::<i64>().is_err(), "{s}");
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }
}
