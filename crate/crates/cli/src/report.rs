//! Deterministic JSON output: struct field order, pretty layout, and every
//! float written with 17 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "trace-report/1";

struct FixedFloats<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", fixed(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

/// `{:.16e}`, the shortest format that always carries 17 significant digits.
pub fn fixed(value: f64) -> String {
    format!("{value:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::with_indent(b"  ")));
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Numerical(format!("cannot serialize report: {e}")))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// The exponent as given on the command line, so that `inf` survives JSON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}
