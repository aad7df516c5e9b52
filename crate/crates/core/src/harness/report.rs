use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A ratio, or `NA` when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    NA,
}

impl Cell {
    pub fn ratio(num: f64, den: f64) -> Cell {
        if den > 0.0 {
            Cell::Value(num / den)
        } else {
            Cell::NA
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::NA => None,
        }
    }

    pub fn is_na(self) -> bool {
        self == Cell::NA
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::NA, Cell::Value)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{v}"),
            Cell::NA => f.write_str("NA"),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Value(v) => s.serialize_f64(*v),
            Cell::NA => s.serialize_str("NA"),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct CellVisitor;
        impl Visitor<'_> for CellVisitor {
            type Value = Cell;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"NA\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Cell, E> {
                Ok(Cell::Value(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Cell, E> {
                Ok(Cell::Value(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Cell, E> {
                Ok(Cell::Value(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Cell, E> {
                if v == "NA" {
                    Ok(Cell::NA)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(CellVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&Cell::NA).unwrap(), "\"NA\"");
        assert_eq!(serde_json::to_string(&Cell::Value(0.5)).unwrap(), "0.5");
        let v: Vec<Cell> = serde_json::from_str("[1, 0.25, \"NA\"]").unwrap();
        assert_eq!(v, vec![Cell::Value(1.0), Cell::Value(0.25), Cell::NA]);
        assert!(serde_json::from_str::<Cell>("\"nope\"").is_err());
    }

    #[test]
    fn ratio() {
        assert_eq!(Cell::ratio(1.0, 0.0), Cell::NA);
        assert_eq!(Cell::ratio(1.0, 4.0), Cell::Value(0.25));
    }
}
