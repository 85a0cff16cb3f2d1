//! Fixed-column two-line element set decoding.

use chrono::{DateTime, Duration, TimeZone, Utc};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

const LINE_LEN: usize = 69;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TleLine {
    One,
    Two,
}

impl fmt::Display for TleLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TleLine::One => f.write_str("1"),
            TleLine::Two => f.write_str("2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TleErrorKind {
    /// Input did not contain exactly two non-empty lines.
    LineCount(usize),
    LineLength(usize),
    NonAscii,
    LineNumber(char),
    Checksum {
        expected: u8,
        found: char,
    },
    Malformed(&'static str),
    CatalogMismatch,
    Element(&'static str),
}

/// A decoding failure, located by line (1 or 2) and 1-based column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("TLE line {line}, column {column}: {kind}")]
pub struct TleError {
    pub line: TleLine,
    pub column: usize,
    pub kind: TleErrorKind,
}

impl fmt::Display for TleErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TleErrorKind::LineCount(n) => write!(f, "expected exactly two lines, found {n}"),
            TleErrorKind::LineLength(n) => write!(f, "expected {LINE_LEN} characters, found {n}"),
            TleErrorKind::NonAscii => f.write_str("non-ASCII character"),
            TleErrorKind::LineNumber(c) => write!(f, "unexpected line number {c:?}"),
            TleErrorKind::Checksum { expected, found } => {
                write!(f, "checksum mismatch: computed {expected}, found {found:?}")
            }
            TleErrorKind::Malformed(field) => write!(f, "malformed {field} field"),
            TleErrorKind::CatalogMismatch => f.write_str("catalog numbers of the two lines differ"),
            TleErrorKind::Element(what) => write!(f, "invalid element: {what}"),
        }
    }
}

/// Mean orbital elements decoded from a two-line element set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TleElements {
    pub catalog_number: u32,
    pub epoch: DateTime<Utc>,
    /// degrees
    pub inclination: f64,
    /// degrees
    pub raan: f64,
    pub eccentricity: f64,
    /// degrees
    pub arg_perigee: f64,
    /// degrees
    pub mean_anomaly: f64,
    /// revolutions per day
    pub mean_motion: f64,
    pub bstar: f64,
}

impl TleElements {
    /// Circular-orbit element set at the given altitude, other elements kept.
    pub fn with_altitude(&self, altitude_km: f64) -> Self {
        let a = super::EARTH_RADIUS_KM + altitude_km;
        let n = (super::MU_EARTH / (a * a * a)).sqrt();
        Self { mean_motion: n * 86_400.0 / std::f64::consts::TAU, ..self.clone() }
    }

    /// Encode back into the two fixed-column lines, with checksums.
    ///
    /// Precision is limited to what the format carries (4 decimals on
    /// angles, 7 on eccentricity, 8 on mean motion).
    pub fn to_lines(&self) -> (String, String) {
        use chrono::Datelike;
        let year = self.epoch.year();
        let start = Utc.with_ymd_and_hms(year, 1, 1, 0, 0, 0).unwrap();
        let day = crate::time::seconds_between(start, self.epoch) / 86_400.0 + 1.0;
        let ecc = (self.eccentricity * 1e7).round() as u64;
        let l1 = format!(
            "1 {:05}U 00000A   {:02}{:012.8}  .00000000  00000-0 {} 0  999",
            self.catalog_number % 100_000,
            year % 100,
            day,
            format_implied_exp(self.bstar),
        );
        let l2 = format!(
            "2 {:05} {:8.4} {:8.4} {:07} {:8.4} {:8.4} {:11.8}    0",
            self.catalog_number % 100_000,
            self.inclination,
            self.raan.rem_euclid(360.0),
            ecc.min(9_999_999),
            self.arg_perigee.rem_euclid(360.0),
            self.mean_anomaly.rem_euclid(360.0),
            self.mean_motion,
        );
        (with_checksum(&l1), with_checksum(&l2))
    }
}

fn format_implied_exp(v: f64) -> String {
    if v == 0.0 {
        return " 00000-0".to_string();
    }
    let sign = if v < 0.0 { '-' } else { ' ' };
    let mut exp = v.abs().log10().floor() as i32 + 1;
    let mut mant = (v.abs() / 10f64.powi(exp) * 1e5).round() as u32;
    if mant >= 100_000 {
        mant /= 10;
        exp += 1;
    }
    let esign = if exp < 0 { '-' } else { '+' };
    format!("{sign}{mant:05}{esign}{}", exp.unsigned_abs().min(9))
}

fn with_checksum(line: &str) -> String {
    let body = format!("{line:<68}");
    let sum = checksum(body.as_bytes());
    format!("{body}{sum}")
}

fn checksum(body: &[u8]) -> u8 {
    let total: u32 = body
        .iter()
        .map(|&b| match b {
            b'0'..=b'9' => u32::from(b - b'0'),
            b'-' => 1,
            _ => 0,
        })
        .sum();
    (total % 10) as u8
}

struct Cols<'a> {
    line: &'a str,
    which: TleLine,
}

impl<'a> Cols<'a> {
    /// 1-based inclusive column range.
    fn get(&self, from: usize, to: usize) -> &'a str {
        &self.line[from - 1..to]
    }

    fn err(&self, column: usize, kind: TleErrorKind) -> TleError {
        TleError { line: self.which, column, kind }
    }

    fn float(&self, from: usize, to: usize, field: &'static str) -> Result<f64, TleError> {
        let s = self.get(from, to).trim();
        parse_decimal(s).ok_or_else(|| self.err(from, TleErrorKind::Malformed(field)))
    }

    fn int(&self, from: usize, to: usize, field: &'static str) -> Result<u32, TleError> {
        let s = self.get(from, to).trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.err(from, TleErrorKind::Malformed(field)));
        }
        s.parse().map_err(|_| self.err(from, TleErrorKind::Malformed(field)))
    }

    /// Fields like " 35198-4" meaning 0.35198e-4.
    fn implied_exp(&self, from: usize, to: usize, field: &'static str) -> Result<f64, TleError> {
        let s = self.get(from, to).trim();
        parse_implied_exp(s).ok_or_else(|| self.err(from, TleErrorKind::Malformed(field)))
    }

    fn space(&self, col: usize) -> Result<(), TleError> {
        if self.get(col, col) != " " {
            return Err(self.err(col, TleErrorKind::Malformed("separator")));
        }
        Ok(())
    }
}

/// Plain decimal number: optional sign, digits, optional single point.
fn parse_decimal(s: &str) -> Option<f64> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || body == "." {
        return None;
    }
    let mut points = 0;
    for b in body.bytes() {
        match b {
            b'0'..=b'9' => {}
            b'.' => points += 1,
            _ => return None,
        }
    }
    if points > 1 {
        return None;
    }
    s.parse().ok()
}

fn parse_implied_exp(s: &str) -> Option<f64> {
    if s.is_empty() {
        return Some(0.0);
    }
    let (sign, rest) = match s.as_bytes()[0] {
        b'-' => (-1.0, &s[1..]),
        b'+' => (1.0, &s[1..]),
        _ => (1.0, s),
    };
    if rest.len() < 3 {
        return None;
    }
    let (mant, exp) = rest.split_at(rest.len() - 2);
    let mant = mant.strip_prefix('.').unwrap_or(mant);
    if mant.is_empty() || !mant.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let exp_sign = match exp.as_bytes()[0] {
        b'-' => -1,
        b'+' | b' ' => 1,
        b'0' => 1,
        _ => return None,
    };
    let exp_digit = exp.as_bytes()[1];
    if !exp_digit.is_ascii_digit() {
        return None;
    }
    let m: f64 = format!("0.{mant}").parse().ok()?;
    Some(sign * m * 10f64.powi(exp_sign * i32::from(exp_digit - b'0')))
}

fn check_line(line: &str, which: TleLine) -> Result<Cols<'_>, TleError> {
    let cols = Cols { line, which };
    if !line.is_ascii() {
        let column = line.char_indices().position(|(_, c)| !c.is_ascii()).unwrap_or(0) + 1;
        return Err(cols.err(column, TleErrorKind::NonAscii));
    }
    if line.len() != LINE_LEN {
        return Err(cols.err(1, TleErrorKind::LineLength(line.len())));
    }
    let expected_no = match which {
        TleLine::One => "1",
        TleLine::Two => "2",
    };
    if cols.get(1, 1) != expected_no {
        return Err(cols.err(1, TleErrorKind::LineNumber(line.as_bytes()[0] as char)));
    }
    let expected = checksum(&line.as_bytes()[..68]);
    let found = line.as_bytes()[68];
    if found != b'0' + expected {
        return Err(cols.err(69, TleErrorKind::Checksum { expected, found: found as char }));
    }
    Ok(cols)
}

/// Decode a two-line element set.
///
/// Blank lines and trailing whitespace (including `\r`) are ignored; any
/// other content must be exactly the two 69-column lines.
pub fn parse_tle(text: &str) -> Result<TleElements, TleError> {
    let lines: Vec<&str> = text.lines().map(str::trim_end).filter(|l| !l.is_empty()).collect();
    if lines.len() != 2 {
        return Err(TleError { line: TleLine::One, column: 1, kind: TleErrorKind::LineCount(lines.len()) });
    }
    let l1 = check_line(lines[0], TleLine::One)?;
    let l2 = check_line(lines[1], TleLine::Two)?;

    l1.space(2)?;
    let catalog = l1.int(3, 7, "catalog number")?;
    l1.space(9)?;
    l1.space(18)?;
    let year = l1.int(19, 20, "epoch year")?;
    let day = l1.float(21, 32, "epoch day")?;
    if !(1.0..367.0).contains(&day) {
        return Err(l1.err(21, TleErrorKind::Malformed("epoch day")));
    }
    l1.float(34, 43, "first derivative of mean motion")?;
    l1.implied_exp(45, 52, "second derivative of mean motion")?;
    let bstar = l1.implied_exp(54, 61, "BSTAR")?;

    l2.space(2)?;
    if l2.int(3, 7, "catalog number")? != catalog {
        return Err(l2.err(3, TleErrorKind::CatalogMismatch));
    }
    let inclination = l2.float(9, 16, "inclination")?;
    let raan = l2.float(18, 25, "right ascension of ascending node")?;
    let ecc_field = l2.get(27, 33);
    if !ecc_field.bytes().all(|b| b.is_ascii_digit() || b == b' ') || ecc_field.trim().is_empty() {
        return Err(l2.err(27, TleErrorKind::Malformed("eccentricity")));
    }
    let eccentricity: f64 =
        format!("0.{}", ecc_field.trim()).parse().map_err(|_| l2.err(27, TleErrorKind::Malformed("eccentricity")))?;
    let arg_perigee = l2.float(35, 42, "argument of perigee")?;
    let mean_anomaly = l2.float(44, 51, "mean anomaly")?;
    let mean_motion = l2.float(53, 63, "mean motion")?;

    if !(0.0..=180.0).contains(&inclination) {
        return Err(l2.err(9, TleErrorKind::Element("inclination outside [0, 180]")));
    }
    if mean_motion <= 0.0 {
        return Err(l2.err(53, TleErrorKind::Element("mean motion must be positive")));
    }

    let full_year = if year < 57 { 2000 + year as i32 } else { 1900 + year as i32 };
    let start = Utc.with_ymd_and_hms(full_year, 1, 1, 0, 0, 0).unwrap();
    let micros = ((day - 1.0) * 86_400e6).round() as i64;
    let epoch = start + Duration::microseconds(micros);

    Ok(TleElements {
        catalog_number: catalog,
        epoch,
        inclination,
        raan,
        eccentricity,
        arg_perigee,
        mean_anomaly,
        mean_motion,
        bstar,
    })
}
