//! Output plumbing: stdout-or-file sink, outward f64 views and the JSON
//! shapes shared by several commands. CSV uses '.' decimals and shortest
//! round-trip float formatting, so identical flags give byte-identical
//! files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use survdim::dimension::DimensionResult;
use survdim::orbits::PlateauRecord;
use survdim::rat::{to_f64_hi, to_f64_lo, Rational};
use survdim::Error;

pub struct Sink {
    out: Box<dyn Write>,
}

pub fn out_writer(path: Option<&Path>) -> Result<Sink, Error> {
    let out: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Error::InvalidInput(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    };
    Ok(Sink { out })
}

impl Sink {
    pub fn line(&mut self, s: &str) -> Result<(), Error> {
        writeln!(self.out, "{s}").map_err(|e| Error::InvalidInput(format!("write failed: {e}")))
    }

    pub fn emit_json(&mut self, v: &serde_json::Value) -> Result<(), Error> {
        let rendered = serde_json::to_string_pretty(v)
            .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
        self.line(&rendered)
    }

    pub fn finish(&mut self) -> Result<(), Error> {
        self.out
            .flush()
            .map_err(|e| Error::InvalidInput(format!("flush failed: {e}")))
    }
}

/// Downward f64 view of a rational lower bound.
pub fn f64_lo(x: &Rational) -> f64 {
    to_f64_lo(x)
}

/// Upward f64 view of a rational upper bound.
pub fn f64_hi(x: &Rational) -> f64 {
    to_f64_hi(x)
}

pub fn dimension_json(r: &DimensionResult) -> serde_json::Value {
    serde_json::json!({
        "t": r.t.to_string(),
        "lambda_lo": f64_lo(&r.lambda.lo),
        "lambda_hi": f64_hi(&r.lambda.hi),
        "eta_lo": f64_lo(&r.eta_lo),
        "eta_hi": f64_hi(&r.eta_hi),
        "exact": r.exact,
    })
}

pub fn plateau_json(p: &PlateauRecord) -> serde_json::Value {
    serde_json::json!({
        "label": p.label.to_string(),
        "left": p.left.to_string(),
        "right": p.right.to_string(),
        "length": p.length(),
    })
}
