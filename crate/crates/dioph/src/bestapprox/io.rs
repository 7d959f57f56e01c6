//! Sequence persistence: a canonical JSON document and a flat CSV export.
//!
//! Heights are decimal strings and zeta endpoints exact decimal strings
//! (dyadic values always terminate in decimal), so documents round-trip
//! byte-identically through read followed by write.

use std::error::Error;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::realnum::DyadicInterval;

use super::{ApproxSequence, BestApproxRecord};

#[derive(Clone, Debug)]
pub struct IoError(pub String);

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sequence document error: {}", self.0)
    }
}

impl Error for IoError {}

#[derive(Serialize, Deserialize)]
struct SequenceDoc {
    config_hash: String,
    m: usize,
    n: usize,
    #[serde(rename = "T")]
    max_height: String,
    start_bits: u32,
    cap_bits: u32,
    flags: Vec<String>,
    records: Vec<RecordDoc>,
}

#[derive(Serialize, Deserialize)]
struct RecordDoc {
    nu: usize,
    x: Vec<i64>,
    y: Vec<i64>,
    #[serde(rename = "M")]
    height: String,
    zeta_lo: String,
    zeta_hi: String,
    bits: u32,
}

pub fn sequence_to_json(seq: &ApproxSequence) -> String {
    let doc = SequenceDoc {
        config_hash: seq.config_hash.clone(),
        m: seq.m,
        n: seq.n,
        max_height: seq.max_height.to_string(),
        start_bits: seq.start_bits,
        cap_bits: seq.cap_bits,
        flags: seq.flags.clone(),
        records: seq
            .records
            .iter()
            .map(|r| {
                let zeta = r.zeta.canonical_reduce();
                RecordDoc {
                    nu: r.nu,
                    x: r.x.clone(),
                    y: r.y.clone(),
                    height: r.height.to_string(),
                    zeta_lo: zeta.decimal_lo(),
                    zeta_hi: zeta.decimal_hi(),
                    bits: r.bits,
                }
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("sequence serialization");
    s.push('\n');
    s
}

pub fn sequence_from_json(text: &str) -> Result<ApproxSequence, IoError> {
    let doc: SequenceDoc = serde_json::from_str(text).map_err(|e| IoError(e.to_string()))?;
    let mut records = Vec::with_capacity(doc.records.len());
    for r in doc.records {
        let zeta = DyadicInterval::from_decimals(&r.zeta_lo, &r.zeta_hi).map_err(IoError)?;
        records.push(BestApproxRecord {
            nu: r.nu,
            x: r.x,
            y: r.y,
            height: r.height.parse().map_err(|e| IoError(format!("bad height: {e}")))?,
            zeta,
            bits: r.bits,
        });
    }
    Ok(ApproxSequence {
        config_hash: doc.config_hash,
        m: doc.m,
        n: doc.n,
        max_height: doc.max_height.parse().map_err(|e| IoError(format!("bad T: {e}")))?,
        start_bits: doc.start_bits,
        cap_bits: doc.cap_bits,
        records,
        flags: doc.flags,
    })
}

/// One record per row, for plotting.
pub fn sequence_to_csv(seq: &ApproxSequence) -> String {
    let mut out = String::new();
    let xs: Vec<String> = (1..=seq.m).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (1..=seq.n).map(|j| format!("y{j}")).collect();
    out.push_str(&format!("nu,M,{},{},zeta_lo,zeta_hi,bits\n", xs.join(","), ys.join(",")));
    for r in &seq.records {
        let xs: Vec<String> = r.x.iter().map(|v| v.to_string()).collect();
        let ys: Vec<String> = r.y.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{},{:e},{:e},{}\n",
            r.nu,
            r.height,
            xs.join(","),
            ys.join(","),
            r.zeta.to_f64_lo(),
            r.zeta.to_f64_hi(),
            r.bits
        ));
    }
    out
}
