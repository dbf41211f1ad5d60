//! Instance files: JSON with exact fractions written as strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use pointcover_core::{CoverObject, Curve, Family, Plane3, Point, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Parses `-?[0-9]+(/[1-9][0-9]*)?`.
pub fn parse_fraction(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Invalid(format!("malformed fraction {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        None => BigInt::one(),
        Some(d) => {
            if !d.bytes().all(|b| b.is_ascii_digit()) || !d.starts_with(|c: char| ('1'..='9').contains(&c)) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
    };
    Ok(Rational::new(n, d))
}

/// Lowest terms; the denominator is omitted when it is 1.
pub fn format_fraction(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// What to do with repeated points when loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Duplicates {
    Reject,
    /// Keep the first copy; the caller is told how many were dropped.
    Dedup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawInstance {
    dimension: usize,
    family: String,
    k: usize,
    points: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub family: Family,
    pub k: usize,
    pub points: Vec<Point>,
    /// Free-form annotations, e.g. a generator's planted cover.
    pub metadata: BTreeMap<String, Value>,
}

impl Instance {
    pub fn new(family: Family, k: usize, points: Vec<Point>) -> Instance {
        Instance { family, k, points, metadata: BTreeMap::new() }
    }

    pub fn dimension(&self) -> usize {
        self.family.dim()
    }

    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            dimension: self.dimension(),
            family: self.family.tag().to_string(),
            k: self.k,
            points: self.points.iter().map(|p| p.coords().iter().map(format_fraction).collect()).collect(),
            metadata: self.metadata.clone(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Parses an instance; returns it with the number of dropped duplicates.
    pub fn from_json(text: &str, dups: Duplicates) -> Result<(Instance, usize), CliError> {
        let raw: RawInstance = serde_json::from_str(text).map_err(|e| CliError::Invalid(e.to_string()))?;
        let family = Family::from_tag(&raw.family)
            .ok_or_else(|| CliError::Invalid(format!("unknown family {:?}", raw.family)))?;
        if raw.dimension != family.dim() {
            return Err(CliError::Invalid(format!(
                "family {} lives in dimension {}, file says {}",
                raw.family,
                family.dim(),
                raw.dimension
            )));
        }
        let mut points = Vec::with_capacity(raw.points.len());
        for (i, coords) in raw.points.iter().enumerate() {
            if coords.len() != raw.dimension {
                return Err(CliError::Invalid(format!("point {i} has {} coordinates", coords.len())));
            }
            let c = coords.iter().map(|s| parse_fraction(s)).collect::<Result<Vec<_>, _>>()?;
            points.push(Point::new(c).map_err(CliError::from)?);
        }
        let deduped = pointcover_core::geometry::dedup_points(&points);
        let dropped = points.len() - deduped.len();
        if dropped > 0 && dups == Duplicates::Reject {
            return Err(CliError::Invalid(format!("{dropped} duplicate point(s)")));
        }
        Ok((Instance { family, k: raw.k, points: deduped, metadata: raw.metadata }, dropped))
    }
}

/// A cover object as written in records: family tag and canonical
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectRecord {
    pub kind: String,
    pub coefficients: Vec<String>,
}

impl ObjectRecord {
    pub fn of(obj: &CoverObject) -> ObjectRecord {
        ObjectRecord {
            kind: obj.kind_tag().to_string(),
            coefficients: obj.coefficients().iter().map(format_fraction).collect(),
        }
    }

    pub fn to_object(&self) -> Result<CoverObject, CliError> {
        let family = Family::from_tag(&self.kind)
            .ok_or_else(|| CliError::Invalid(format!("unknown object kind {:?}", self.kind)))?;
        let c = self.coefficients.iter().map(|s| parse_fraction(s)).collect::<Result<Vec<_>, _>>()?;
        match family {
            Family::Curve(f) => Ok(CoverObject::Curve(Curve::from_coefficients(f, &c)?)),
            Family::Plane => {
                let [a, b, cc, e]: [Rational; 4] =
                    c.try_into().map_err(|_| CliError::Invalid("a plane has four coefficients".into()))?;
                Ok(CoverObject::Plane(Plane3::new(a, b, cc, e)?))
            }
        }
    }
}

/// Objects listed under a metadata key, e.g. `"planted"`.
pub fn objects_in(meta: &BTreeMap<String, Value>, key: &str) -> Result<Option<Vec<CoverObject>>, CliError> {
    let Some(v) = meta.get(key) else { return Ok(None) };
    let recs: Vec<ObjectRecord> =
        serde_json::from_value(v.clone()).map_err(|e| CliError::Invalid(format!("metadata {key}: {e}")))?;
    recs.iter().map(ObjectRecord::to_object).collect::<Result<Vec<_>, _>>().map(Some)
}

pub fn objects_value(objs: &[CoverObject]) -> Value {
    serde_json::to_value(objs.iter().map(ObjectRecord::of).collect::<Vec<_>>()).expect("plain data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use pointcover_core::geometry::{rat, ratio};
    use pointcover_core::CurveFamily;

    #[test]
    fn fraction_grammar() {
        assert_eq!(parse_fraction("3").unwrap(), rat(3));
        assert_eq!(parse_fraction("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_fraction("0/7").unwrap(), rat(0));
        for bad in ["", "-", "1/0", "1/-2", "+1", "1.5", "1/", "/2", "1/02", "a", " 1"] {
            assert!(parse_fraction(bad).is_err(), "{bad:?}");
        }
        assert_eq!(format_fraction(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_fraction(&rat(5)), "5");
    }

    #[test]
    fn round_trip() {
        let mut inst = Instance::new(
            Family::Curve(CurveFamily::Circle),
            2,
            vec![Point::xy(ratio(1, 3), rat(-2)), Point::xy(rat(0), ratio(7, 5))],
        );
        inst.metadata.insert("note".into(), Value::from("x"));
        let text = inst.to_json();
        let (back, dropped) = Instance::from_json(&text, Duplicates::Reject).unwrap();
        assert_eq!(dropped, 0);
        assert_eq!(back, inst);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn duplicates_and_shape() {
        let text = r#"{"dimension":2,"family":"line2","k":1,"points":[["1","2"],["2/2","4/2"],["0","0"]]}"#;
        assert!(matches!(Instance::from_json(text, Duplicates::Reject), Err(CliError::Invalid(_))));
        let (inst, dropped) = Instance::from_json(text, Duplicates::Dedup).unwrap();
        assert_eq!((inst.points.len(), dropped), (2, 1));
        let wrong_dim = r#"{"dimension":3,"family":"line2","k":1,"points":[]}"#;
        assert!(Instance::from_json(wrong_dim, Duplicates::Reject).is_err());
        let short = r#"{"dimension":3,"family":"plane3","k":1,"points":[["1","2"]]}"#;
        assert!(Instance::from_json(short, Duplicates::Reject).is_err());
    }

    #[test]
    fn objects_round_trip() {
        let h = Plane3::new(rat(1), ratio(1, 2), rat(0), rat(-3)).unwrap();
        let objs = vec![CoverObject::Plane(h)];
        let mut meta = BTreeMap::new();
        meta.insert("planted".into(), objects_value(&objs));
        assert_eq!(objects_in(&meta, "planted").unwrap().unwrap(), objs);
        assert!(objects_in(&meta, "missing").unwrap().is_none());
    }
}
