//! Best-approximation sequences.
//!
//! A nonzero integer vector `x` is a best approximation when `zeta(x)` is
//! minimal among all nonzero vectors of height at most `M(x)`. Under the
//! usual independence hypothesis the best approximations form a sequence
//! with strictly increasing heights and strictly decreasing errors; this
//! module enumerates that sequence up to a height bound by a certified
//! shell sweep, with an independent brute-force oracle and a
//! self-verification pass.
//!
//! Only one candidate per sign pair is considered (canonical representative:
//! first nonzero coordinate positive), since `zeta(x) = zeta(-x)`. Within a
//! shell at most one record can be appended: any other point at the same
//! height is already beaten at equal height.

mod fixed;
mod io;
mod oracle;
mod verify;

pub use io::{sequence_from_json, sequence_to_csv, sequence_to_json, IoError};
pub use oracle::{oracle_sequence, ORACLE_BITS};
pub use verify::{verify_sequence, VerifyReport};

use std::error::Error;
use std::fmt;

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::forms::{self, FormsError, PrecisionPolicy, ThetaMatrix};
use crate::realnum::{certified_compare, CmpOutcome, DyadicInterval, RealNumError};

use fixed::FixedEntries;

/// One best approximation: canonical vector, nearest-integer offsets,
/// height, and the certified error interval at `bits` of entry precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestApproxRecord {
    pub nu: usize,
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub height: u64,
    pub zeta: DyadicInterval,
    pub bits: u32,
}

/// Ordered records with provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxSequence {
    pub config_hash: String,
    pub m: usize,
    pub n: usize,
    pub max_height: u64,
    pub start_bits: u32,
    pub cap_bits: u32,
    pub records: Vec<BestApproxRecord>,
    /// Degeneracy and provenance notes (exact hits, ties, precision limits).
    pub flags: Vec<String>,
}

impl ApproxSequence {
    pub fn record(&self, nu: usize) -> &BestApproxRecord {
        &self.records[nu - 1]
    }

    /// Record data without the stored zeta precision, for cross-run and
    /// engine-vs-oracle comparisons.
    pub fn skeleton(&self) -> Vec<(usize, Vec<i64>, Vec<i64>, u64)> {
        self.records
            .iter()
            .map(|r| (r.nu, r.x.clone(), r.y.clone(), r.height))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    /// Certification failed at some height even at the precision cap.
    Precision { height: u64, detail: String },
    Forms(FormsError),
    Input(String),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Precision { height, detail } => {
                write!(f, "precision exhausted at height {height}: {detail}")
            }
            EngineError::Forms(e) => write!(f, "{e}"),
            EngineError::Input(msg) => write!(f, "bad input: {msg}"),
        }
    }
}

impl Error for EngineError {}

impl From<FormsError> for EngineError {
    fn from(e: FormsError) -> Self {
        EngineError::Forms(e)
    }
}

/// Short hash of the canonical matrix description.
pub fn config_hash(theta: &ThetaMatrix) -> String {
    let mut h = Sha256::new();
    h.update(theta.canonical_desc().as_bytes());
    let digest = h.finalize();
    let mut out = String::with_capacity(16);
    for b in &digest[..8] {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Canonical sign representative: first nonzero coordinate positive.
pub fn is_canonical(x: &[i64]) -> bool {
    for &c in x {
        if c != 0 {
            return c > 0;
        }
    }
    false
}

/// Number of canonical representatives on the sup-norm shell `M(x) = t`.
pub fn shell_size(m: usize, t: u64) -> u64 {
    match m {
        1 => 1,
        2 => 4 * t,
        3 => 12 * t * t + 1,
        _ => panic!("shell enumeration supports m <= 3"),
    }
}

/// The `idx`-th canonical point of the shell `M(x) = t`, as a fixed array
/// with the first `m` entries in use. Pure index arithmetic so shells can be
/// scanned in parallel without materializing them.
pub fn shell_point(m: usize, t: u64, idx: u64) -> [i64; 3] {
    let ti = t as i64;
    match m {
        1 => {
            debug_assert_eq!(idx, 0);
            [ti, 0, 0]
        }
        2 => {
            let (a, b) = shell2_point(ti, idx);
            [a, b, 0]
        }
        3 => {
            let side = 2 * t + 1;
            if idx < side * side {
                // face x1 = t
                let b = -ti + (idx / side) as i64;
                let c = -ti + (idx % side) as i64;
                [ti, b, c]
            } else {
                let idx = idx - side * side;
                let ring = 8 * t;
                if idx < (t - 1) * ring {
                    // 1 <= x1 <= t-1, (x2, x3) on the square boundary
                    let a = 1 + (idx / ring) as i64;
                    let (b, c) = square_boundary_point(ti, idx % ring);
                    [a, b, c]
                } else {
                    // x1 = 0: canonical 2-d shell in (x2, x3)
                    let (b, c) = shell2_point(ti, idx - (t - 1) * ring);
                    [0, b, c]
                }
            }
        }
        _ => panic!("shell enumeration supports m <= 3"),
    }
}

/// Canonical 2-d shell points: (t, b) for all b, then (a, +-t) for
/// 0 < a < t, then (0, t).
fn shell2_point(t: i64, idx: u64) -> (i64, i64) {
    let side = (2 * t + 1) as u64;
    if idx < side {
        (t, -t + idx as i64)
    } else if idx < side + 2 * (t as u64 - 1) {
        let j = idx - side;
        let a = 1 + (j / 2) as i64;
        let b = if j % 2 == 0 { -t } else { t };
        (a, b)
    } else {
        debug_assert_eq!(idx, side + 2 * (t as u64 - 1));
        (0, t)
    }
}

/// All points (signed) of the square boundary `max(|b|, |c|) = t`.
fn square_boundary_point(t: i64, idx: u64) -> (i64, i64) {
    let side = (2 * t + 1) as u64;
    if idx < side {
        (-t + idx as i64, t)
    } else if idx < 2 * side {
        (-t + (idx - side) as i64, -t)
    } else {
        let j = idx - 2 * side;
        let inner = (2 * t - 1) as u64;
        if j < inner {
            (-t, -t + 1 + j as i64)
        } else {
            (t, -t + 1 + (j - inner) as i64)
        }
    }
}

/// Internal abort signal for shell scans.
enum ScanAbort {
    Hit { x: Vec<i64>, form: usize, height: u64 },
    Precision { height: u64, detail: String },
    Forms(FormsError),
}

impl From<FormsError> for ScanAbort {
    fn from(e: FormsError) -> Self {
        ScanAbort::Forms(e)
    }
}

/// A shell candidate that survived the cheap pass.
struct Candidate {
    idx: u64,
    x: Vec<i64>,
    /// Certified strictly-better data, or `None` when escalation is needed.
    better: Option<(DyadicInterval, Vec<i64>)>,
}

struct RunningBest {
    x: Vec<i64>,
    zeta: DyadicInterval,
}

/// Compute the full best-approximation sequence up to height `max_height`.
///
/// Shell sweep: for each height t the canonical shell is scanned (in
/// parallel when `workers > 1`) against the running record; a record is
/// appended iff the certified shell minimum is strictly below the running
/// record. Output is deterministic and independent of `workers`.
pub fn compute_sequence(
    theta: &ThetaMatrix,
    max_height: u64,
    policy: &PrecisionPolicy,
    workers: usize,
) -> Result<ApproxSequence, EngineError> {
    if max_height < 1 {
        return Err(EngineError::Input("max height must be at least 1".into()));
    }
    if theta.m() > 3 {
        return Err(EngineError::Input("sequence enumeration supports m <= 3".into()));
    }
    let mut seq = ApproxSequence {
        config_hash: config_hash(theta),
        m: theta.m(),
        n: theta.n(),
        max_height,
        start_bits: policy.start_bits,
        cap_bits: policy.cap_bits,
        records: Vec::new(),
        flags: Vec::new(),
    };
    if theta.precision_limited() {
        seq.flags.push(format!(
            "precision-limited: decimal entries cap certification at {} bits",
            theta.feasible_bits()
        ));
    }
    if theta.all_rational().is_some() {
        compute_exact(theta, max_height, policy, &mut seq)?;
        return Ok(seq);
    }
    compute_interval(theta, max_height, policy, workers, &mut seq)?;
    Ok(seq)
}

/// Exact path for all-rational matrices. Ties are decided exactly; the
/// sequence stops, flagged, at the first exact integer hit.
fn compute_exact(
    theta: &ThetaMatrix,
    max_height: u64,
    policy: &PrecisionPolicy,
    seq: &mut ApproxSequence,
) -> Result<(), EngineError> {
    let rats = theta.all_rational().expect("exact path requires rational entries");
    let record_bits = policy.cap_bits;
    let mut best: Option<num_rational::BigRational> = None;
    for t in 1..=max_height {
        let mut shell_best: Option<(num_rational::BigRational, Vec<i64>, Vec<BigInt>)> = None;
        for idx in 0..shell_size(theta.m(), t) {
            let pt = shell_point(theta.m(), t, idx);
            let x = &pt[..theta.m()];
            match forms::zeta_rational(&rats, theta.m(), theta.n(), x) {
                Ok((z, offs)) => {
                    let replace = match &shell_best {
                        None => true,
                        Some((bz, bx, _)) => {
                            if z < *bz {
                                true
                            } else if z == *bz {
                                seq.flags.push(format!(
                                    "degenerate-tie height={t} x={:?} x'={:?}",
                                    bx, x
                                ));
                                x < &bx[..]
                            } else {
                                false
                            }
                        }
                    };
                    if replace {
                        shell_best = Some((z, x.to_vec(), offs));
                    }
                }
                Err(FormsError::ExactIntegerHit { form }) => {
                    seq.flags.push(format!(
                        "exact-integer-hit height={t} x={x:?} form={form}: sequence stopped"
                    ));
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            }
        }
        let (z, x, offs) = shell_best.expect("nonempty shell");
        if best.as_ref().is_none_or(|b| z < *b) {
            let y = offsets_to_i64(&offs)?;
            seq.records.push(BestApproxRecord {
                nu: seq.records.len() + 1,
                x,
                y,
                height: t,
                zeta: DyadicInterval::from_rational_hull(&z, record_bits),
                bits: record_bits,
            });
            best = Some(z);
        }
    }
    Ok(())
}

fn offsets_to_i64(offs: &[BigInt]) -> Result<Vec<i64>, EngineError> {
    offs.iter()
        .map(|o| {
            i64::try_from(o).map_err(|_| EngineError::Input("offset exceeds i64 range".into()))
        })
        .collect()
}

/// Interval path: cheap fixed-width scan per shell, escalation only for the
/// rare candidates whose error interval touches the record's.
fn compute_interval(
    theta: &ThetaMatrix,
    max_height: u64,
    policy: &PrecisionPolicy,
    workers: usize,
    seq: &mut ApproxSequence,
) -> Result<(), EngineError> {
    let cap = policy.cap_bits.min(theta.feasible_bits());
    let start = policy.start_bits.min(cap);
    let record_bits = cap;
    let refined = theta.refined(start);
    let fixed = FixedEntries::build(&refined, theta.m(), max_height);
    let m = theta.m();
    let n = theta.n();

    let pool = if workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| EngineError::Input(format!("worker pool: {e}")))?,
        )
    } else {
        None
    };

    let mut best: Option<RunningBest> = None;
    for t in 1..=max_height {
        let size = shell_size(m, t);
        // Record interval at the scan scale, outward.
        let rec_fixed = best.as_ref().map(|b| fixed::clamp_interval(&b.zeta, start));
        let scan = |idx: u64| -> Result<Option<Candidate>, ScanAbort> {
            let pt = shell_point(m, t, idx);
            let x = &pt[..m];
            match &fixed {
                Some(fx) => match fx.eval(x, rec_fixed) {
                    fixed::FastVerdict::NotBetter => Ok(None),
                    fixed::FastVerdict::Better { zeta, offsets } => Ok(Some(Candidate {
                        idx,
                        x: x.to_vec(),
                        better: Some((zeta, offsets)),
                    })),
                    fixed::FastVerdict::Uncertain => {
                        Ok(Some(Candidate { idx, x: x.to_vec(), better: None }))
                    }
                    fixed::FastVerdict::ExactZero { form } => {
                        Err(ScanAbort::Hit { x: x.to_vec(), form, height: t })
                    }
                },
                None => {
                    // No fixed-width representation: certified BigInt pass.
                    match forms::zeta_refined_once(&refined, m, n, x) {
                        Ok(Some((zeta, offs))) => {
                            let better = match &rec_fixed {
                                None => true,
                                Some(_) => {
                                    let rec = &best.as_ref().unwrap().zeta;
                                    if zeta.strictly_less_than(rec) {
                                        true
                                    } else if rec.strictly_less_than(&zeta)
                                        || rec.hi_rational() <= zeta.lo_rational()
                                    {
                                        return Ok(None);
                                    } else {
                                        return Ok(Some(Candidate {
                                            idx,
                                            x: x.to_vec(),
                                            better: None,
                                        }));
                                    }
                                }
                            };
                            if better {
                                let offs = offsets_to_i64(&offs)
                                    .map_err(|_| ScanAbort::Precision {
                                        height: t,
                                        detail: "offset overflow".into(),
                                    })?;
                                Ok(Some(Candidate {
                                    idx,
                                    x: x.to_vec(),
                                    better: Some((zeta, offs)),
                                }))
                            } else {
                                Ok(None)
                            }
                        }
                        Ok(None) => Ok(Some(Candidate { idx, x: x.to_vec(), better: None })),
                        Err(FormsError::ExactIntegerHit { form }) => {
                            Err(ScanAbort::Hit { x: x.to_vec(), form, height: t })
                        }
                        Err(e) => Err(e.into()),
                    }
                }
            }
        };

        let scanned: Result<Vec<Candidate>, ScanAbort> = match &pool {
            Some(pool) if size >= 4096 => pool.install(|| {
                use rayon::prelude::*;
                (0..size as usize)
                    .into_par_iter()
                    .with_min_len(2048)
                    .try_fold(Vec::new, |mut acc, idx| {
                        if let Some(c) = scan(idx as u64)? {
                            acc.push(c);
                        }
                        Ok(acc)
                    })
                    .try_reduce(Vec::new, |mut a, mut b| {
                        a.append(&mut b);
                        Ok(a)
                    })
            }),
            _ => (0..size).try_fold(Vec::new(), |mut acc, idx| {
                if let Some(c) = scan(idx)? {
                    acc.push(c);
                }
                Ok(acc)
            }),
        };
        let mut candidates = match scanned {
            Ok(c) => c,
            Err(ScanAbort::Hit { x, form, height }) => {
                seq.flags.push(format!(
                    "exact-integer-hit height={height} x={x:?} form={form}: sequence stopped"
                ));
                return Ok(());
            }
            Err(ScanAbort::Precision { height, detail }) => {
                return Err(EngineError::Precision { height, detail })
            }
            Err(ScanAbort::Forms(e)) => return Err(e.into()),
        };
        candidates.sort_by_key(|c| c.idx);

        // Escalate the uncertain candidates against the record.
        let mut winner: Option<(Vec<i64>, DyadicInterval, Vec<i64>)> = None;
        for cand in candidates {
            let resolved = match cand.better {
                Some((zeta, offs)) => Some((cand.x, zeta, offs)),
                None => {
                    match resolve_vs_record(theta, &cand.x, best.as_ref(), start, cap, t)? {
                        Some((zeta, offs)) => Some((cand.x, zeta, offs)),
                        None => None,
                    }
                }
            };
            let Some((cx, czeta, coffs)) = resolved else { continue };
            winner = Some(match winner {
                None => (cx, czeta, coffs),
                Some((wx, wzeta, woffs)) => {
                    match compare_zeta(theta, (&wx, &wzeta), (&cx, &czeta), cap) {
                        Ok(CmpOutcome::Less) => (wx, wzeta, woffs),
                        Ok(CmpOutcome::Greater) => (cx, czeta, coffs),
                        Ok(CmpOutcome::Equal) => {
                            seq.flags.push(format!(
                                "degenerate-tie height={t} x={:?} x'={:?}",
                                wx, cx
                            ));
                            if wx <= cx {
                                (wx, wzeta, woffs)
                            } else {
                                (cx, czeta, coffs)
                            }
                        }
                        Ok(CmpOutcome::Undecided) => {
                            return Err(EngineError::Precision {
                                height: t,
                                detail: format!(
                                    "cannot order shell candidates {wx:?} and {cx:?} within {cap} bits"
                                ),
                            })
                        }
                        Err(e) => return Err(e),
                    }
                }
            });
        }

        if let Some((x, _, _)) = winner {
            // Store the record at the cap so downstream log computations can
            // bound their own error; doubling the cap halves stored widths.
            let (zeta_stored, offs) = match forms::zeta_at_bits(theta, &x, record_bits) {
                Ok(Some(v)) => v,
                Ok(None) => {
                    return Err(EngineError::Precision {
                        height: t,
                        detail: "record ambiguous at the precision cap".into(),
                    })
                }
                Err(FormsError::ExactIntegerHit { form }) => {
                    seq.flags.push(format!(
                        "exact-integer-hit height={t} x={x:?} form={form}: sequence stopped"
                    ));
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
            let y = offsets_to_i64(&offs)?;
            seq.records.push(BestApproxRecord {
                nu: seq.records.len() + 1,
                x: x.clone(),
                y,
                height: t,
                zeta: zeta_stored.clone(),
                bits: record_bits,
            });
            best = Some(RunningBest { x, zeta: zeta_stored });
        }
    }
    Ok(())
}

/// Escalating refiner for `zeta(x)`: retries at doubled precision until the
/// nearest integers resolve, then returns the certified interval.
fn zeta_refiner(
    theta: &ThetaMatrix,
    x: &[i64],
    bits: u32,
    cap: u32,
) -> Result<DyadicInterval, RealNumError> {
    let mut b = bits.min(cap);
    loop {
        match forms::zeta_at_bits(theta, x, b) {
            Ok(Some((zeta, _))) => return Ok(zeta),
            Ok(None) => {
                if b >= cap {
                    return Err(RealNumError::PrecisionExhausted {
                        requested_bits: b,
                        available_bits: cap,
                    });
                }
                b = (b * 2).min(cap);
            }
            Err(_) => {
                return Err(RealNumError::PrecisionExhausted { requested_bits: b, available_bits: cap })
            }
        }
    }
}

/// Certified comparison of the errors of two vectors.
fn compare_zeta(
    theta: &ThetaMatrix,
    a: (&[i64], &DyadicInterval),
    b: (&[i64], &DyadicInterval),
    cap: u32,
) -> Result<CmpOutcome, EngineError> {
    Ok(certified_compare(
        a.1.clone(),
        b.1.clone(),
        |p| zeta_refiner(theta, a.0, p, cap),
        |p| zeta_refiner(theta, b.0, p, cap),
        cap,
    ))
}

/// Decide whether `x` is certified strictly better than the running record,
/// escalating both sides. Returns the certified data when it is.
#[allow(clippy::type_complexity)]
fn resolve_vs_record(
    theta: &ThetaMatrix,
    x: &[i64],
    best: Option<&RunningBest>,
    start: u32,
    cap: u32,
    height: u64,
) -> Result<Option<(DyadicInterval, Vec<i64>)>, EngineError> {
    // Certified zeta of the candidate at escalating precision.
    let mut bits = start;
    let (zeta, offs) = loop {
        match forms::zeta_at_bits(theta, x, bits) {
            Ok(Some(v)) => break v,
            Ok(None) => {
                if bits >= cap {
                    return Err(EngineError::Precision {
                        height,
                        detail: format!("nearest integer ambiguous for {x:?} at cap"),
                    });
                }
                bits = (bits * 2).min(cap);
            }
            Err(FormsError::ExactIntegerHit { .. }) => {
                // Surfaced through the scan path; treat as a precision stop here.
                return Err(EngineError::Precision {
                    height,
                    detail: format!("exact integer hit while escalating {x:?}"),
                });
            }
            Err(e) => return Err(e.into()),
        }
    };
    let offs = offsets_to_i64(&offs)?;
    let Some(rec) = best else {
        return Ok(Some((zeta, offs)));
    };
    match compare_zeta(theta, (x, &zeta), (&rec.x, &rec.zeta), cap)? {
        CmpOutcome::Less => Ok(Some((zeta, offs))),
        CmpOutcome::Greater | CmpOutcome::Equal => Ok(None),
        CmpOutcome::Undecided => Err(EngineError::Precision {
            height,
            detail: format!("cannot compare {x:?} against the record within {cap} bits"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::CertifiedReal;
    use num_rational::BigRational;

    fn sqrt2_theta() -> ThetaMatrix {
        ThetaMatrix::new(
            1,
            1,
            vec![CertifiedReal::algebraic_i64(&[-2, 0, 1], (1, 1), (2, 1)).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn shell_sizes_and_points_are_consistent() {
        for (m, t) in [(1usize, 1u64), (1, 9), (2, 1), (2, 5), (3, 1), (3, 4), (3, 7)] {
            let size = shell_size(m, t);
            let mut seen = std::collections::HashSet::new();
            for idx in 0..size {
                let pt = shell_point(m, t, idx);
                let x = &pt[..m];
                assert_eq!(forms::height(x), t, "wrong height at m={m} t={t} idx={idx}");
                assert!(is_canonical(x), "not canonical at m={m} t={t} idx={idx}");
                assert!(seen.insert(x.to_vec()), "duplicate point at m={m} t={t} idx={idx}");
            }
            // cross-check the count against a brute-force filter
            let brute = brute_count(m, t);
            assert_eq!(size, brute, "shell size mismatch at m={m} t={t}");
        }
    }

    fn brute_count(m: usize, t: u64) -> u64 {
        let ti = t as i64;
        let mut count = 0u64;
        let mut x = [0i64; 3];
        let r = -ti..=ti;
        for a in r.clone() {
            x[0] = a;
            if m == 1 {
                if forms::height(&x[..1]) == t && is_canonical(&x[..1]) {
                    count += 1;
                }
                continue;
            }
            for b in r.clone() {
                x[1] = b;
                if m == 2 {
                    if forms::height(&x[..2]) == t && is_canonical(&x[..2]) {
                        count += 1;
                    }
                    continue;
                }
                for c in r.clone() {
                    x[2] = c;
                    if forms::height(&x[..3]) == t && is_canonical(&x[..3]) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn sqrt2_sequence_matches_continued_fraction_convergents() {
        let theta = sqrt2_theta();
        let seq = compute_sequence(&theta, 200, &PrecisionPolicy::default(), 1).unwrap();
        let heights: Vec<u64> = seq.records.iter().map(|r| r.height).collect();
        assert_eq!(heights, vec![1, 2, 5, 12, 29, 70, 169]);
        let ys: Vec<i64> = seq.records.iter().map(|r| r.y[0]).collect();
        assert_eq!(ys, vec![-1, -3, -7, -17, -41, -99, -239]);
        // certified strict monotonicity of the stored intervals
        for w in seq.records.windows(2) {
            assert!(w[0].height < w[1].height);
            assert!(w[1].zeta.strictly_less_than(&w[0].zeta));
        }
    }

    #[test]
    fn single_record_at_height_one_for_m1() {
        let theta = sqrt2_theta();
        let seq = compute_sequence(&theta, 1, &PrecisionPolicy::default(), 1).unwrap();
        assert_eq!(seq.records.len(), 1);
        assert_eq!(seq.records[0].x, vec![1]);
        assert!((seq.records[0].zeta.to_f64_mid() - 0.41421356237).abs() < 1e-9);
    }

    #[test]
    fn rational_theta_stops_flagged_at_exact_hit() {
        let theta = ThetaMatrix::new(
            1,
            1,
            vec![CertifiedReal::rational(BigRational::new(1.into(), 3.into()))],
        )
        .unwrap();
        let seq = compute_sequence(&theta, 10, &PrecisionPolicy::default(), 1).unwrap();
        // zeta(1) = 1/3 is the only record; x=2 ties (1/3), x=3 hits 1 exactly
        assert_eq!(seq.records.len(), 1);
        assert_eq!(seq.records[0].x, vec![1]);
        assert!(seq.flags.iter().any(|f| f.contains("exact-integer-hit height=3")));
    }

    #[test]
    fn workers_do_not_change_output() {
        let theta = ThetaMatrix::new(
            3,
            1,
            vec![
                CertifiedReal::algebraic_i64(&[-1, -1, 0, 0, 1], (1, 1), (2, 1)).unwrap(),
                CertifiedReal::algebraic_i64(&[1, -1, -2, 0, 1], (1, 1), (2, 1)).unwrap(),
                CertifiedReal::algebraic_i64(&[-1, -1, 3, -3, 1], (1, 1), (2, 1)).unwrap(),
            ],
        )
        .unwrap();
        let policy = PrecisionPolicy::default();
        let s1 = compute_sequence(&theta, 25, &policy, 1).unwrap();
        let s2 = compute_sequence(&theta, 25, &policy, 2).unwrap();
        let s8 = compute_sequence(&theta, 25, &policy, 8).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1, s8);
        assert!(!s1.records.is_empty());
    }
}
