//! Configuration documents and run reports.
//!
//! A configuration document looks like
//!
//! ```json
//! {"schema_version": 1, "mode": "continuous", "points": [["0", "0"], ["1.25", "-0.5"]]}
//! ```
//!
//! Lattice points are JSON integers; continuous points are decimal strings,
//! parsed to the nearest double and written back in shortest round-trip form.
//! `schema_version` may be omitted and defaults to 1.

use std::fmt;
use std::fmt::Write as _;

use serde::de::{self, DeserializeSeed, Deserializer, IgnoredAny, MapAccess, SeqAccess, Visitor};
use serde::Serialize;
use serde_json::Value;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::geometry::{Mode, Point, ANGLE_TAU, EXACT_EPS, GUARD_TAU};

pub const SCHEMA_VERSION: u32 = 1;

/// Parses a configuration document.
pub fn parse_config(bytes: &[u8]) -> Result<Configuration> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let raw = DocumentSeed.deserialize(&mut de).and_then(|r| de.end().map(|_| r)).map_err(parse_error)?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            msg: format!("unsupported schema_version {}", raw.schema_version),
        });
    }
    Configuration::new(raw.points, raw.mode)
}

fn parse_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    // serde_json appends " at line L column C"; keep the bare message
    let msg = match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    };
    Error::Parse { line: e.line(), column: e.column(), msg }
}

/// Serializes a configuration in canonical form: one point per line.
pub fn write_config(config: &Configuration) -> String {
    let mode = match config.mode() {
        Mode::Lattice => "lattice",
        Mode::Continuous => "continuous",
    };
    let mut out = format!("{{\n  \"schema_version\": {SCHEMA_VERSION},\n  \"mode\": \"{mode}\",\n  \"points\": [");
    for (i, p) in config.points().iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        match config.mode() {
            Mode::Lattice => {
                let (x, y) = p.ix();
                write!(out, "[{x}, {y}]").unwrap();
            }
            Mode::Continuous => write!(out, "[\"{}\", \"{}\"]", decimal(p.x), decimal(p.y)).unwrap(),
        }
    }
    out.push_str(if config.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

fn decimal(v: f64) -> String {
    // Display is the shortest string that parses back to the same double
    format!("{}", v + 0.0)
}

struct RawDocument {
    schema_version: u32,
    mode: Mode,
    points: Vec<Point>,
}

/// Points are buffered as raw tokens because `mode` may come after them.
enum Coord {
    Int(i64),
    Str(f64),
}

struct DocumentSeed;

impl<'de> DeserializeSeed<'de> for DocumentSeed {
    type Value = RawDocument;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> std::result::Result<RawDocument, D::Error> {
        d.deserialize_map(self)
    }
}

impl<'de> Visitor<'de> for DocumentSeed {
    type Value = RawDocument;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a configuration object")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<RawDocument, A::Error> {
        let mut version = None;
        let mut mode: Option<Mode> = None;
        let mut points: Option<Vec<[Coord; 2]>> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "schema_version" => set_once(&mut version, map.next_value::<u32>()?, "schema_version")?,
                "mode" => set_once(&mut mode, map.next_value::<Mode>()?, "mode")?,
                "points" => set_once(&mut points, map.next_value_seed(PointsSeed)?, "points")?,
                _ => {
                    map.next_value::<IgnoredAny>()?;
                }
            }
        }
        let mode = mode.ok_or_else(|| de::Error::missing_field("mode"))?;
        let points = points.ok_or_else(|| de::Error::missing_field("points"))?;
        let points = points
            .into_iter()
            .enumerate()
            .map(|(i, [x, y])| match (mode, x, y) {
                (Mode::Lattice, Coord::Int(x), Coord::Int(y)) => Ok(Point::lattice(x, y)),
                (Mode::Continuous, Coord::Str(x), Coord::Str(y)) => Ok(Point::new(x, y)),
                (Mode::Lattice, ..) => Err(de::Error::custom(format!("point {i}: lattice coordinates must be integers"))),
                (Mode::Continuous, ..) => {
                    Err(de::Error::custom(format!("point {i}: continuous coordinates must be decimal strings")))
                }
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(RawDocument { schema_version: version.unwrap_or(SCHEMA_VERSION), mode, points })
    }
}

fn set_once<T, E: de::Error>(slot: &mut Option<T>, v: T, name: &'static str) -> std::result::Result<(), E> {
    if slot.replace(v).is_some() {
        return Err(E::duplicate_field(name));
    }
    Ok(())
}

struct PointsSeed;

impl<'de> DeserializeSeed<'de> for PointsSeed {
    type Value = Vec<[Coord; 2]>;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> std::result::Result<Self::Value, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for PointsSeed {
    type Value = Vec<[Coord; 2]>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list of [x, y] pairs")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
        let mut out = Vec::new();
        while let Some(p) = seq.next_element_seed(PairSeed)? {
            out.push(p);
        }
        Ok(out)
    }
}

struct PairSeed;

impl<'de> DeserializeSeed<'de> for PairSeed {
    type Value = [Coord; 2];

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> std::result::Result<Self::Value, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for PairSeed {
    type Value = [Coord; 2];

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an [x, y] pair")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
        let x = seq.next_element_seed(CoordSeed)?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let y = seq.next_element_seed(CoordSeed)?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        Ok([x, y])
    }
}

struct CoordSeed;

impl<'de> DeserializeSeed<'de> for CoordSeed {
    type Value = Coord;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> std::result::Result<Coord, D::Error> {
        d.deserialize_any(self)
    }
}

impl<'de> Visitor<'de> for CoordSeed {
    type Value = Coord;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Coord, E> {
        Ok(Coord::Int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Coord, E> {
        i64::try_from(v).map(Coord::Int).map_err(|_| E::custom("integer coordinate out of range"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Coord, E> {
        parse_decimal(v).map(Coord::Str).ok_or_else(|| E::custom(format!("invalid decimal coordinate {v:?}")))
    }
}

/// `-?digits[.digits][e[+-]digits]`, or a non-finite spelling that the
/// configuration check will reject as such.
fn parse_decimal(s: &str) -> Option<f64> {
    let lower = s.to_ascii_lowercase();
    let body = lower.strip_prefix(['-', '+']).unwrap_or(&lower);
    if matches!(body, "inf" | "infinity" | "nan") {
        return s.parse().ok();
    }
    let (mantissa, exponent) = match body.split_once('e') {
        Some((m, e)) => (m, Some(e)),
        None => (body, None),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let ok = !int.is_empty()
        && digits(int)
        && digits(frac)
        && !(mantissa.ends_with('.'))
        && exponent.is_none_or(|e| {
            let e = e.strip_prefix(['-', '+']).unwrap_or(e);
            !e.is_empty() && digits(e)
        });
    if ok {
        s.parse().ok()
    } else {
        None
    }
}

/// Tolerances in force during a run.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Tolerances {
    pub exact_eps: f64,
    pub guard_tau: f64,
    pub angle_tau: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub requested: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { exact_eps: EXACT_EPS, guard_tau: GUARD_TAU, angle_tau: ANGLE_TAU, requested: None }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Provenance {
    pub version: String,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
}

/// A named scalar of a run, tagged with the symbol it stands for.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Quantity {
    pub symbol: String,
    pub value: Value,
}

/// Machine-readable record of one operation.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub provenance: Provenance,
    /// `false` when a checked identity or bound failed.
    pub passed: bool,
    pub quantities: Vec<Quantity>,
    pub details: Value,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            provenance: Provenance {
                version: env!("CARGO_PKG_VERSION").to_string(),
                seed: None,
                tolerances: Tolerances::default(),
            },
            passed: true,
            quantities: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.provenance.seed = seed;
        self
    }

    pub fn requested_tolerance(mut self, tol: Option<f64>) -> Self {
        self.provenance.tolerances.requested = tol;
        self
    }

    pub fn quantity(mut self, symbol: &str, value: impl Into<Value>) -> Self {
        self.quantities.push(Quantity { symbol: symbol.to_string(), value: value.into() });
        self
    }

    pub fn details<T: Serialize>(mut self, details: &T) -> Self {
        self.details = serde_json::to_value(details).expect("report details serialize");
        self
    }

    pub fn check(mut self, ok: bool) -> Self {
        self.passed &= ok;
        self
    }

    pub fn get(&self, symbol: &str) -> Option<&Value> {
        self.quantities.iter().find(|q| q.symbol == symbol).map(|q| &q.value)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
