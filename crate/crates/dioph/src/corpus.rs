//! Built-in test matrices: algebraic power vectors whose entries are
//! provably independent with 1 over the integers (the generator's degree
//! exceeds the ambient dimension), the classical square-root-of-two case,
//! and Liouville-type decimal instances engineered so the individual
//! exponent visibly exceeds the uniform one at desk scale.
//!
//! Minimal polynomials of the generator powers are computed offline and
//! embedded here with their isolating intervals; each shipped polynomial's
//! irreducibility was checked externally and is re-screened at construction
//! (degree bound, rational-root test, Sturm isolation).

use std::error::Error;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::forms::{CaseTag, FormsError, ThetaMatrix};
use crate::realnum::{CertifiedReal, IntPoly};

#[derive(Clone, Debug, PartialEq)]
pub enum CorpusError {
    /// The generator's degree is below `m + n`, so `(1, entries)` would be
    /// linearly dependent over the integers.
    DegreeTooLow { degree: usize, required: usize },
    /// A rational root or zero constant term fails the irreducibility screen.
    ReducibleGenerator(String),
    /// Only generators with embedded power tables are supported.
    UnsupportedGenerator(String),
    EmptySchedule,
    BadSchedule(String),
    Forms(String),
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::DegreeTooLow { degree, required } => {
                write!(f, "generator degree {degree} is below the required {required}")
            }
            CorpusError::ReducibleGenerator(msg) => write!(f, "reducible generator: {msg}"),
            CorpusError::UnsupportedGenerator(msg) => {
                write!(f, "unsupported generator: {msg} (power tables are embedded offline)")
            }
            CorpusError::EmptySchedule => write!(f, "gap schedule must be nonempty"),
            CorpusError::BadSchedule(msg) => write!(f, "bad gap schedule: {msg}"),
            CorpusError::Forms(msg) => write!(f, "{msg}"),
        }
    }
}

impl Error for CorpusError {}

impl From<FormsError> for CorpusError {
    fn from(e: FormsError) -> Self {
        CorpusError::Forms(e.to_string())
    }
}

/// One named instance with its default height bound and loose expectations.
#[derive(Debug)]
pub struct CorpusInstance {
    pub name: String,
    pub theta: ThetaMatrix,
    pub default_height: u64,
    pub expected_alpha: Option<(f64, f64)>,
    pub expected_beta: Option<(f64, f64)>,
    /// Why the independence hypothesis holds (or fails) for this instance.
    pub independence_note: String,
    pub precision_limited: bool,
}

#[derive(Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub case: CaseTag,
    pub m: usize,
    pub n: usize,
    pub default_height: u64,
    pub expected_alpha: Option<(f64, f64)>,
    pub expected_beta: Option<(f64, f64)>,
    pub independence_note: String,
    pub precision_limited: bool,
    pub config: String,
}

/// Power tables: minimal polynomial (ascending coefficients) and isolating
/// interval of `xi^k` for the supported generators, computed offline.
struct PowerTable {
    generator: &'static [i64],
    powers: &'static [&'static [i64]],
}

/// xi root of x^4 - x - 1 in (1, 2); xi^2, xi^3 have the listed minimal
/// polynomials, each with exactly one real root in (1, 2).
const QUARTIC_TABLE: PowerTable = PowerTable {
    generator: &[-1, -1, 0, 0, 1],
    powers: &[&[-1, -1, 0, 0, 1], &[1, -1, -2, 0, 1], &[-1, -1, 3, -3, 1]],
};

/// xi root of x^5 - x - 1 in (1, 2); powers up to xi^4.
const QUINTIC_TABLE: PowerTable = PowerTable {
    generator: &[-1, -1, 0, 0, 0, 1],
    powers: &[
        &[-1, -1, 0, 0, 0, 1],
        &[-1, 1, 0, -2, 0, 1],
        &[-1, -1, -3, 0, 0, 1],
        &[-1, 1, -4, 6, -4, 1],
    ],
};

/// Cheap irreducibility screen: nonzero constant term and no rational root
/// (candidates p/q with p | c0 and q | lead).
fn screen_irreducible(poly: &IntPoly) -> Result<(), CorpusError> {
    let coeffs = poly.coeffs();
    let c0 = &coeffs[0];
    let lead = coeffs.last().unwrap();
    if c0.is_zero() {
        return Err(CorpusError::ReducibleGenerator("zero constant term (root at 0)".into()));
    }
    let divisors = |v: &BigInt| -> Vec<BigInt> {
        let v = v.abs();
        let mut out = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= v {
            if (&v % &d).is_zero() {
                out.push(d.clone());
                out.push(&v / &d);
            }
            d += 1;
        }
        out
    };
    for p in divisors(c0) {
        for q in divisors(lead) {
            for sign in [1, -1] {
                let cand = BigRational::new(&p * BigInt::from(sign), q.clone());
                if poly.sign_at_rational(&cand) == 0 {
                    return Err(CorpusError::ReducibleGenerator(format!(
                        "rational root {cand}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Algebraic power vector for one of the three theorem cases: the entries
/// are consecutive powers of the generator's root, arranged as a column
/// (m=1), a row (n=1), or a 2x2 square read row-wise.
pub fn make_algebraic_vector(
    case: CaseTag,
    generator: &[i64],
    interval: (i64, i64),
) -> Result<CorpusInstance, CorpusError> {
    let (m, n) = match case {
        CaseTag::M1N3 => (1, 3),
        CaseTag::M3N1 => (3, 1),
        CaseTag::M2N2 => (2, 2),
        CaseTag::Other => {
            return Err(CorpusError::UnsupportedGenerator("case must be m1n3, m3n1 or m2n2".into()))
        }
    };
    let d = m + n;
    let poly = IntPoly::from_i64(generator);
    if poly.degree() < d {
        return Err(CorpusError::DegreeTooLow { degree: poly.degree(), required: d });
    }
    screen_irreducible(&poly)?;
    let table = [&QUARTIC_TABLE, &QUINTIC_TABLE]
        .into_iter()
        .find(|t| t.generator == generator)
        .ok_or_else(|| {
            CorpusError::UnsupportedGenerator(format!("{generator:?} has no embedded power table"))
        })?;
    if interval != (1, 2) {
        return Err(CorpusError::UnsupportedGenerator(
            "embedded tables isolate the root in (1, 2)".into(),
        ));
    }
    let entries: Result<Vec<CertifiedReal>, _> = (0..m * n)
        .map(|k| CertifiedReal::algebraic_i64(table.powers[k], (1, 1), (2, 1)))
        .collect();
    let entries = entries.map_err(|e| CorpusError::Forms(e.to_string()))?;
    let theta = ThetaMatrix::new(m, n, entries)?;
    let (name, default_height, ea, eb) = match case {
        CaseTag::M1N3 => ("quartic-m1n3", 1_000_000, (0.28, 0.45), (0.28, 0.55)),
        CaseTag::M3N1 => ("quartic-m3n1", 200, (2.0, 4.2), (2.0, 6.0)),
        CaseTag::M2N2 => ("quintic-m2n2", 10_000, (0.6, 1.4), (0.6, 2.0)),
        CaseTag::Other => unreachable!(),
    };
    Ok(CorpusInstance {
        name: name.to_string(),
        theta,
        default_height,
        expected_alpha: Some(ea),
        expected_beta: Some(eb),
        independence_note: format!(
            "entries are powers of an algebraic number of degree {} > d - 1 = {}, so 1 and the entries are linearly independent over the integers",
            poly.degree(),
            d - 1
        ),
        precision_limited: false,
    })
}

/// Number of decimal digits carried by the Liouville instances. Deep enough
/// that certification stays available beyond 8192 bits, so precision-doubling
/// experiments behave like the algebraic instances.
pub const LIOUVILLE_DIGITS: usize = 2600;

fn liouville_digit(coord: usize, island: usize) -> u8 {
    (((3 * coord + 5 * island + 7) % 9) + 1) as u8
}

/// Liouville-type instance: every entry is a finite decimal with digit
/// islands at the schedule positions, truncated at the precision budget and
/// flagged precision-limited. The islands are aligned across coordinates (so
/// a single power of ten approximates all forms simultaneously) but carry
/// different digits per coordinate and island, which avoids visible integer
/// dependences at desk scale.
pub fn make_liouville(
    case: CaseTag,
    schedule: &[u64],
    digits: usize,
) -> Result<CorpusInstance, CorpusError> {
    if schedule.is_empty() {
        return Err(CorpusError::EmptySchedule);
    }
    for w in schedule.windows(2) {
        if w[1] < 2 * w[0] {
            return Err(CorpusError::BadSchedule(format!(
                "schedule must be strictly increasing with ratio >= 2, got {} after {}",
                w[1], w[0]
            )));
        }
    }
    if schedule[0] == 0 {
        return Err(CorpusError::BadSchedule("positions are 1-based".into()));
    }
    let (m, n) = match case {
        CaseTag::M1N3 => (1, 3),
        CaseTag::M3N1 => (3, 1),
        CaseTag::M2N2 => (2, 2),
        CaseTag::Other => {
            return Err(CorpusError::UnsupportedGenerator("case must be m1n3, m3n1 or m2n2".into()))
        }
    };
    let mut entries = Vec::with_capacity(m * n);
    for coord in 1..=m * n {
        let mut digs = vec![b'0'; digits];
        for (k, &c) in schedule.iter().enumerate() {
            if (c as usize) <= digits {
                digs[c as usize - 1] = b'0' + liouville_digit(coord, k + 1);
            }
        }
        let text = format!("0.{}", String::from_utf8(digs).expect("ascii digits"));
        entries.push(CertifiedReal::decimal(&text).map_err(|e| CorpusError::Forms(e.to_string()))?);
    }
    let theta = ThetaMatrix::new(m, n, entries)?;
    Ok(CorpusInstance {
        name: format!("liouville-{}", CaseTag::from_shape(m, n).name()),
        theta,
        default_height: 100_000,
        expected_alpha: None,
        expected_beta: Some((2.0, f64::INFINITY)),
        independence_note: "truncated decimals are rational, so the independence hypothesis fails beyond the digit budget; islands carry distinct digits to avoid visible dependences at desk scale".into(),
        precision_limited: true,
    })
}

/// The shipped corpus.
pub fn builtin_corpus() -> Vec<CorpusInstance> {
    let sqrt2 = CorpusInstance {
        name: "sqrt2-m1n1".into(),
        theta: ThetaMatrix::new(
            1,
            1,
            vec![CertifiedReal::algebraic_i64(&[-2, 0, 1], (1, 1), (2, 1))
                .expect("sqrt2 isolation")],
        )
        .expect("1x1 shape"),
        default_height: 200,
        expected_alpha: Some((0.8, 1.2)),
        expected_beta: Some((0.9, 1.8)),
        independence_note: "a quadratic irrational and 1 are linearly independent over the integers".into(),
        precision_limited: false,
    };
    vec![
        sqrt2,
        make_algebraic_vector(CaseTag::M1N3, &[-1, -1, 0, 0, 1], (1, 2)).expect("quartic column"),
        make_algebraic_vector(CaseTag::M3N1, &[-1, -1, 0, 0, 1], (1, 2)).expect("quartic row"),
        make_algebraic_vector(CaseTag::M2N2, &[-1, -1, 0, 0, 0, 1], (1, 2)).expect("quintic square"),
        make_liouville(CaseTag::M1N3, &[1, 5, 20, 80, 320, 1280], LIOUVILLE_DIGITS)
            .expect("liouville column"),
    ]
}

/// Render an instance as a config file understood by the command line.
pub fn instance_config(inst: &CorpusInstance, max_height: u64) -> String {
    let mut out = String::new();
    out.push_str(&format!("# corpus instance {}\n", inst.name));
    out.push_str(&format!("# {}\n", inst.independence_note));
    out.push_str(&format!("m = {}\n", inst.theta.m()));
    out.push_str(&format!("n = {}\n", inst.theta.n()));
    for j in 0..inst.theta.n() {
        for i in 0..inst.theta.m() {
            let e = inst.theta.entry(j, i);
            let rendered = match e {
                CertifiedReal::Rational(q) => format!("rational {}/{}", q.numer(), q.denom()),
                CertifiedReal::Algebraic(a) => {
                    let coeffs: Vec<String> =
                        a.poly().coeffs().iter().map(|c| c.to_string()).collect();
                    let (lo, hi) = a.isolating_interval();
                    format!("algebraic poly={} lo={} hi={}", coeffs.join(","), lo, hi)
                }
                CertifiedReal::Decimal(d) => format!("decimal {}", d.text()),
            };
            out.push_str(&format!("entry.{}.{} = {}\n", j + 1, i + 1, rendered));
        }
    }
    out.push_str(&format!("max_height = {max_height}\n"));
    out
}

/// Manifest of the shipped corpus, as a JSON document.
pub fn manifest_json() -> String {
    let entries: Vec<ManifestEntry> = builtin_corpus()
        .iter()
        .map(|inst| ManifestEntry {
            name: inst.name.clone(),
            case: inst.theta.case(),
            m: inst.theta.m(),
            n: inst.theta.n(),
            default_height: inst.default_height,
            expected_alpha: inst.expected_alpha,
            expected_beta: inst.expected_beta,
            independence_note: inst.independence_note.clone(),
            precision_limited: inst.precision_limited,
            config: format!("{}.cfg", inst.name),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&entries).expect("manifest serialization");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bestapprox::compute_sequence;
    use crate::forms::{zeta, PrecisionPolicy};

    #[test]
    fn quartic_and_quintic_tables_isolate_their_roots() {
        // Construction validates the Sturm count; exercising both tables is
        // the test.
        for case in [CaseTag::M1N3, CaseTag::M3N1] {
            let inst = make_algebraic_vector(case, &[-1, -1, 0, 0, 1], (1, 2)).unwrap();
            assert_eq!(inst.theta.case(), case);
        }
        let inst = make_algebraic_vector(CaseTag::M2N2, &[-1, -1, 0, 0, 0, 1], (1, 2)).unwrap();
        assert_eq!(inst.theta.d(), 4);
    }

    #[test]
    fn degree_screen_rejects_low_degree() {
        match make_algebraic_vector(CaseTag::M1N3, &[-2, 0, 1], (1, 2)) {
            Err(CorpusError::DegreeTooLow { degree: 2, required: 4 }) => {}
            other => panic!("expected degree error, got {other:?}"),
        }
    }

    #[test]
    fn rational_root_screen() {
        // (x - 1)(x^3 + x + 1) = x^4 - x^3 + x^2 - 1 has the rational root 1
        match make_algebraic_vector(CaseTag::M1N3, &[-1, 0, 1, -1, 1], (1, 2)) {
            Err(CorpusError::ReducibleGenerator(_)) | Err(CorpusError::UnsupportedGenerator(_)) => {}
            other => panic!("expected a screen rejection, got {other:?}"),
        }
    }

    #[test]
    fn liouville_schedule_validation() {
        assert!(matches!(
            make_liouville(CaseTag::M1N3, &[], 100),
            Err(CorpusError::EmptySchedule)
        ));
        assert!(make_liouville(CaseTag::M1N3, &[2, 3], 100).is_err()); // ratio < 2
        let inst = make_liouville(CaseTag::M1N3, &[1, 5, 20], 64).unwrap();
        assert!(inst.precision_limited);
        assert!(inst.theta.precision_limited());
    }

    #[test]
    fn liouville_records_match_designed_islands() {
        // digits at positions 1, 5 force a record at x = 10 with
        // zeta = 9e-4 (the largest island-2 digit is 9)
        let inst = make_liouville(CaseTag::M1N3, &[1, 5, 20, 80, 320, 1280], 400).unwrap();
        let policy = PrecisionPolicy::default();
        let seq = compute_sequence(&inst.theta, 12, &policy, 1).unwrap();
        let heights: Vec<u64> = seq.records.iter().map(|r| r.height).collect();
        assert_eq!(heights, vec![1, 2, 3, 7, 10]);
        let last = seq.records.last().unwrap();
        assert!((last.zeta.to_f64_mid() - 9e-4).abs() < 1e-9);
        assert_eq!(last.y, vec![-7, -1, -4]);
        // and the forms stay clear of exact hits up to that height
        for x in 1..=12i64 {
            assert!(zeta(&inst.theta, &[x], &policy).is_ok());
        }
    }

    #[test]
    fn corpus_is_well_formed() {
        let corpus = builtin_corpus();
        assert_eq!(corpus.len(), 5);
        let names: Vec<&str> = corpus.iter().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"quartic-m1n3"));
        assert!(names.contains(&"liouville-m1n3"));
        for inst in &corpus {
            let cfg = instance_config(inst, inst.default_height);
            assert!(cfg.contains("max_height"));
        }
        assert!(manifest_json().contains("quartic-m3n1"));
    }
}
