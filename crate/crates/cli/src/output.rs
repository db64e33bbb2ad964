use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use netgame_core::games::Cost;
use netgame_core::{Error, Extended, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Digits kept by every decimal column.
pub const SIGNIFICANT_DIGITS: u32 = 12;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
    Invariant(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Budget(m) => f.write_str(m),
            Failure::Invariant(m) => write!(f, "invariant violated: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("csv: {e}"))
    }
}

/// Rendered output plus an optional failure. The record is written even
/// when the failure is set, so it can be inspected.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub failure: Option<Failure>,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Outcome {
            text,
            failure: None,
        }
    }

    pub fn emit(self, path: Option<&Path>) -> Result<(), Failure> {
        match path {
            Some(p) => fs::write(p, &self.text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?,
            None => io::stdout()
                .write_all(self.text.as_bytes())
                .map_err(|e| Failure::Usage(format!("stdout: {e}")))?,
        }
        match self.failure {
            Some(f) => Err(f),
            None => Ok(()),
        }
    }
}

pub fn json(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialise");
    text.push('\n');
    text
}

pub fn csv_text(rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields is utf-8"))
}

pub fn exact(r: Rational) -> String {
    r.to_string()
}

pub fn exact_cost(c: Cost) -> String {
    c.to_string()
}

pub fn decimal_cost(c: Cost) -> String {
    match c {
        Extended::Finite(r) => decimal(r),
        Extended::Infinite => "inf".into(),
    }
}

/// `r` rounded half away from zero to 12 significant digits, in positional
/// notation with trailing zeros removed.
pub fn decimal(r: Rational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let negative = r.is_negative();
    let a = BigInt::from(*r.numer()).abs();
    let b = BigInt::from(*r.denom());
    let ten = BigInt::from(10);

    // e = floor(log10(a / b))
    let mut e = a.to_string().len() as i64 - b.to_string().len() as i64;
    let (lhs, rhs) = scaled(&a, &b, -e, &ten);
    if lhs < rhs {
        e -= 1;
    }
    let shift = SIGNIFICANT_DIGITS as i64 - 1 - e;
    let (num, den) = scaled(&a, &b, shift, &ten);
    let mut digits: BigInt = (num * 2 + &den) / (den * 2);
    if digits == ten.pow(SIGNIFICANT_DIGITS) {
        digits /= 10;
        e += 1;
    }
    let digits = digits.to_string();
    let body = if e >= SIGNIFICANT_DIGITS as i64 - 1 {
        let zeros = (e - (SIGNIFICANT_DIGITS as i64 - 1)) as usize;
        format!("{digits}{}", "0".repeat(zeros))
    } else if e >= 0 {
        let (int, frac) = digits.split_at(e as usize + 1);
        join(int, frac)
    } else {
        let lead = "0".repeat((-e - 1) as usize);
        join("0", &format!("{lead}{digits}"))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

// (a·10^s, b) or (a, b·10^-s)
fn scaled(a: &BigInt, b: &BigInt, s: i64, ten: &BigInt) -> (BigInt, BigInt) {
    if s >= 0 {
        (a * ten.pow(s as u32), b.clone())
    } else {
        (a.clone(), b * ten.pow((-s) as u32))
    }
}

fn join(int: &str, frac: &str) -> String {
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}
