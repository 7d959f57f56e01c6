//! Run configuration: a flat key-value text file.
//!
//! ```text
//! # comment
//! m = 1
//! n = 3
//! entry.1.1 = algebraic poly=-1,-1,0,0,1 lo=1 hi=2
//! entry.2.1 = rational 2/7
//! entry.3.1 = decimal 0.4142135623730950488
//! max_height = 1000
//! precision_cap_bits = 4096
//! workers = 4
//! tail_start = 3
//! ```
//!
//! `entry.<j>.<i>` addresses form row `j` and variable column `i`, one-based.
//! Trivially parseable on purpose; parse errors carry line numbers.

use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::forms::{PrecisionPolicy, ThetaMatrix};
use crate::realnum::CertifiedReal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "config line {}: {}", self.line, self.message)
        } else {
            write!(f, "config: {}", self.message)
        }
    }
}

impl Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub m: usize,
    pub n: usize,
    /// Entries keyed by (row j, column i), one-based.
    pub entries: BTreeMap<(usize, usize), CertifiedReal>,
    pub max_height: Option<u64>,
    pub precision_cap_bits: Option<u32>,
    pub workers: Option<usize>,
    pub tail_start: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut m: Option<usize> = None;
        let mut n: Option<usize> = None;
        let mut entries: BTreeMap<(usize, usize), (usize, CertifiedReal)> = BTreeMap::new();
        let mut max_height = None;
        let mut precision_cap_bits = None;
        let mut workers = None;
        let mut tail_start = None;
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(lineno, format!("expected `key = value`, got {raw:?}")))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "m" => m = Some(parse_num(lineno, key, value)?),
                "n" => n = Some(parse_num(lineno, key, value)?),
                "max_height" => max_height = Some(parse_num(lineno, key, value)?),
                "precision_cap_bits" => precision_cap_bits = Some(parse_num(lineno, key, value)?),
                "workers" => workers = Some(parse_num(lineno, key, value)?),
                "tail_start" => tail_start = Some(parse_num(lineno, key, value)?),
                _ => {
                    let Some(rest) = key.strip_prefix("entry.") else {
                        return Err(err(lineno, format!("unknown key {key:?}")));
                    };
                    let (j, i) = rest
                        .split_once('.')
                        .ok_or_else(|| err(lineno, "entry keys look like entry.<j>.<i>"))?;
                    let j: usize = j
                        .parse()
                        .map_err(|_| err(lineno, format!("bad row index {j:?}")))?;
                    let i: usize = i
                        .parse()
                        .map_err(|_| err(lineno, format!("bad column index {i:?}")))?;
                    if j == 0 || i == 0 {
                        return Err(err(lineno, "entry indices are one-based"));
                    }
                    let entry = parse_entry(lineno, value)?;
                    if entries.insert((j, i), (lineno, entry)).is_some() {
                        return Err(err(lineno, format!("duplicate entry.{j}.{i}")));
                    }
                }
            }
        }
        let m = m.ok_or_else(|| err(0, "missing key `m`"))?;
        let n = n.ok_or_else(|| err(0, "missing key `n`"))?;
        if m == 0 || n == 0 {
            return Err(err(0, "m and n must be at least 1"));
        }
        let mut clean = BTreeMap::new();
        for ((j, i), (lineno, entry)) in entries {
            if j > n || i > m {
                return Err(err(lineno, format!("entry.{j}.{i} is outside the {n}x{m} matrix")));
            }
            clean.insert((j, i), entry);
        }
        for j in 1..=n {
            for i in 1..=m {
                if !clean.contains_key(&(j, i)) {
                    return Err(err(0, format!("missing entry.{j}.{i}")));
                }
            }
        }
        Ok(RunConfig {
            m,
            n,
            entries: clean,
            max_height,
            precision_cap_bits,
            workers,
            tail_start,
        })
    }

    pub fn to_theta(&self) -> Result<ThetaMatrix, ConfigError> {
        let mut flat = Vec::with_capacity(self.m * self.n);
        for j in 1..=self.n {
            for i in 1..=self.m {
                flat.push(self.entries[&(j, i)].clone());
            }
        }
        ThetaMatrix::new(self.m, self.n, flat).map_err(|e| err(0, e.to_string()))
    }

    pub fn policy(&self, cap_override: Option<u32>) -> PrecisionPolicy {
        let mut policy = PrecisionPolicy::default();
        if let Some(cap) = cap_override.or(self.precision_cap_bits) {
            policy.cap_bits = cap;
        }
        policy
    }

    /// Desk-scale default height bound per variable count.
    pub fn default_height(&self) -> u64 {
        match self.m {
            1 => 100_000,
            2 => 10_000,
            _ => 500,
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| err(line, format!("bad value {value:?} for {key}")))
}

fn parse_rational(line: usize, text: &str) -> Result<BigRational, ConfigError> {
    let parse_int = |s: &str| -> Result<BigInt, ConfigError> {
        s.trim().parse().map_err(|_| err(line, format!("bad integer {s:?}")))
    };
    match text.split_once('/') {
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom == BigInt::from(0) {
                return Err(err(line, "zero denominator"));
            }
            Ok(BigRational::new(parse_int(p)?, denom))
        }
        None => {
            // allow plain integers and decimal literals as exact rationals
            if let Some((int_part, frac)) = text.split_once('.') {
                let digits = format!("{int_part}{frac}");
                let num = parse_int(digits.trim_start_matches('-'))?;
                let sign = if text.trim_start().starts_with('-') { -1 } else { 1 };
                Ok(BigRational::new(
                    num * BigInt::from(sign),
                    BigInt::from(10).pow(frac.len() as u32),
                ))
            } else {
                Ok(BigRational::from(parse_int(text)?))
            }
        }
    }
}

fn parse_entry(line: usize, value: &str) -> Result<CertifiedReal, ConfigError> {
    let (kind, rest) = match value.split_once(char::is_whitespace) {
        Some((k, r)) => (k, r.trim()),
        None => (value, ""),
    };
    match kind {
        "rational" => Ok(CertifiedReal::rational(parse_rational(line, rest)?)),
        "decimal" => CertifiedReal::decimal(rest).map_err(|e| err(line, e.to_string())),
        "algebraic" => {
            let mut poly: Option<Vec<BigInt>> = None;
            let mut lo: Option<BigRational> = None;
            let mut hi: Option<BigRational> = None;
            for part in rest.split_whitespace() {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| err(line, format!("expected key=value in {part:?}")))?;
                match k {
                    "poly" => {
                        let coeffs: Result<Vec<BigInt>, _> = v
                            .split(',')
                            .map(|c| {
                                c.trim()
                                    .parse()
                                    .map_err(|_| err(line, format!("bad coefficient {c:?}")))
                            })
                            .collect();
                        poly = Some(coeffs?);
                    }
                    "lo" => lo = Some(parse_rational(line, v)?),
                    "hi" => hi = Some(parse_rational(line, v)?),
                    _ => return Err(err(line, format!("unknown algebraic field {k:?}"))),
                }
            }
            let poly = poly.ok_or_else(|| err(line, "algebraic entry needs poly="))?;
            let lo = lo.ok_or_else(|| err(line, "algebraic entry needs lo="))?;
            let hi = hi.ok_or_else(|| err(line, "algebraic entry needs hi="))?;
            CertifiedReal::algebraic(poly, lo, hi).map_err(|e| err(line, e.to_string()))
        }
        _ => Err(err(line, format!("unknown entry kind {kind:?} (rational/algebraic/decimal)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# quartic column
m = 1
n = 3
entry.1.1 = algebraic poly=-1,-1,0,0,1 lo=1 hi=2
entry.2.1 = algebraic poly=1,-1,-2,0,1 lo=1 hi=2
entry.3.1 = algebraic poly=-1,-1,3,-3,1 lo=1 hi=2
max_height = 500
workers = 2
";

    #[test]
    fn parses_a_full_config() {
        let cfg = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!((cfg.m, cfg.n), (1, 3));
        assert_eq!(cfg.max_height, Some(500));
        assert_eq!(cfg.workers, Some(2));
        let theta = cfg.to_theta().unwrap();
        assert_eq!(theta.d(), 4);
    }

    #[test]
    fn error_messages_carry_line_numbers() {
        let bad = "m = 1\nn = 1\nentry.1.1 = quaternion 1\n";
        let e = RunConfig::parse(bad).unwrap_err();
        assert_eq!(e.line, 3);
        let missing = "m = 1\nn = 2\nentry.1.1 = rational 1/2\n";
        let e = RunConfig::parse(missing).unwrap_err();
        assert!(e.message.contains("missing entry.2.1"));
        let out_of_range = "m = 1\nn = 1\nentry.1.1 = rational 1/2\nentry.2.1 = rational 1/3\n";
        let e = RunConfig::parse(out_of_range).unwrap_err();
        assert_eq!(e.line, 4);
        let dup = "m = 1\nn = 1\nentry.1.1 = rational 1/2\nentry.1.1 = rational 1/3\n";
        assert!(RunConfig::parse(dup).is_err());
        let zero_denom = "m = 1\nn = 1\nentry.1.1 = rational 1/0\n";
        assert!(RunConfig::parse(zero_denom).is_err());
    }

    #[test]
    fn rational_values_accept_decimals_and_fractions() {
        let cfg = RunConfig::parse(
            "m = 2\nn = 1\nentry.1.1 = rational -3/7\nentry.1.2 = rational 0.25\n",
        )
        .unwrap();
        let theta = cfg.to_theta().unwrap();
        assert_eq!(
            theta.entry(0, 1).as_rational().unwrap(),
            &BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(cfg.default_height(), 10_000);
    }

    #[test]
    fn corpus_configs_round_trip() {
        for inst in crate::corpus::builtin_corpus() {
            let text = crate::corpus::instance_config(&inst, 100);
            let cfg = RunConfig::parse(&text).unwrap();
            let theta = cfg.to_theta().unwrap();
            assert_eq!(theta.m(), inst.theta.m());
            assert_eq!(theta.n(), inst.theta.n());
            assert_eq!(theta.canonical_desc(), inst.theta.canonical_desc());
            assert_eq!(cfg.max_height, Some(100));
        }
    }
}
