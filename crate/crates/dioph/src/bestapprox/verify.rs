//! Self-verification of a computed sequence: structural invariants, record
//! consistency, and the defining emptiness property (no canonical vector
//! below the next record height beats the current record), checked by
//! exhaustive rescan.

use crate::forms::{self, FormsError, PrecisionPolicy, ThetaMatrix};
use crate::realnum::CmpOutcome;

use super::fixed::{clamp_interval, FastVerdict, FixedEntries};
use super::{
    compare_zeta, config_hash, is_canonical, shell_point, shell_size, ApproxSequence,
    BestApproxRecord, EngineError,
};

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub pass: bool,
    pub indices_ok: bool,
    pub canonical_ok: bool,
    pub heights_strictly_increasing: bool,
    pub zeta_strictly_decreasing: bool,
    pub records_consistent: bool,
    pub emptiness_ok: bool,
    pub scanned_points: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn fail(&mut self, msg: String) {
        if self.failures.len() < 32 {
            self.failures.push(msg);
        }
    }
}

pub fn verify_sequence(
    theta: &ThetaMatrix,
    seq: &ApproxSequence,
    policy: &PrecisionPolicy,
) -> Result<VerifyReport, EngineError> {
    let mut report = VerifyReport {
        indices_ok: true,
        canonical_ok: true,
        heights_strictly_increasing: true,
        zeta_strictly_decreasing: true,
        records_consistent: true,
        emptiness_ok: true,
        ..VerifyReport::default()
    };
    if seq.config_hash != config_hash(theta) {
        report.notes.push("config hash differs from the supplied matrix".into());
    }
    let cap = policy.cap_bits.min(theta.feasible_bits());

    for (i, rec) in seq.records.iter().enumerate() {
        if rec.nu != i + 1 {
            report.indices_ok = false;
            report.fail(format!("record {} has index {}", i + 1, rec.nu));
        }
        if !is_canonical(&rec.x) || forms::height(&rec.x) != rec.height || rec.height < 1 {
            report.canonical_ok = false;
            report.fail(format!("record {} is not a canonical point of its height", rec.nu));
        }
        // Recompute the certified profile at the stored precision.
        match forms::zeta_at_bits(theta, &rec.x, rec.bits) {
            Ok(Some((zeta, offs))) => {
                let y: Vec<i64> = offs
                    .iter()
                    .map(|o| i64::try_from(o).unwrap_or(i64::MAX))
                    .collect();
                if y != rec.y {
                    report.records_consistent = false;
                    report.fail(format!(
                        "record {}: stored offsets {:?} differ from recomputed {:?}",
                        rec.nu, rec.y, y
                    ));
                }
                let disjoint = zeta.strictly_less_than(&rec.zeta)
                    || rec.zeta.strictly_less_than(&zeta);
                if disjoint {
                    report.records_consistent = false;
                    report.fail(format!(
                        "record {}: stored zeta does not enclose the recomputed value",
                        rec.nu
                    ));
                }
            }
            Ok(None) => report.notes.push(format!(
                "record {}: ambiguous at stored precision, skipped consistency check",
                rec.nu
            )),
            Err(FormsError::ExactIntegerHit { form }) => {
                report.records_consistent = false;
                report.fail(format!("record {}: exact integer hit on form {form}", rec.nu));
            }
            Err(e) => return Err(e.into()),
        }
    }
    for w in seq.records.windows(2) {
        if w[0].height >= w[1].height {
            report.heights_strictly_increasing = false;
            report.fail(format!(
                "heights not strictly increasing at nu={} ({} -> {})",
                w[0].nu, w[0].height, w[1].height
            ));
        }
        let decreasing = if w[1].zeta.strictly_less_than(&w[0].zeta) {
            true
        } else {
            matches!(
                compare_zeta(theta, (&w[1].x, &w[1].zeta), (&w[0].x, &w[0].zeta), cap)?,
                CmpOutcome::Less
            )
        };
        if !decreasing {
            report.zeta_strictly_decreasing = false;
            report.fail(format!("zeta not strictly decreasing at nu={}", w[0].nu));
        }
    }

    // Emptiness rescan up to the last record height.
    if let Some(last) = seq.records.last() {
        let start = policy.start_bits.min(cap);
        let refined = theta.refined(start);
        let fixed = FixedEntries::build(&refined, theta.m(), last.height);
        let mut current: Option<&BestApproxRecord> = None;
        let mut next_idx = 0usize;
        for t in 1..=last.height {
            while next_idx < seq.records.len() && seq.records[next_idx].height <= t {
                current = Some(&seq.records[next_idx]);
                next_idx += 1;
            }
            let Some(rec) = current else {
                // No record at or below this height: the shell minimum at
                // t=1 is always a record, so this is itself a failure.
                report.emptiness_ok = false;
                report.fail(format!("no record at or below height {t}"));
                break;
            };
            let rec_fixed = clamp_interval(&rec.zeta, start);
            for idx in 0..shell_size(theta.m(), t) {
                report.scanned_points += 1;
                let pt = shell_point(theta.m(), t, idx);
                let x = &pt[..theta.m()];
                if x == &rec.x[..] {
                    continue;
                }
                let uncertain = match &fixed {
                    Some(fx) => match fx.eval(x, Some(rec_fixed)) {
                        FastVerdict::NotBetter => false,
                        FastVerdict::Better { .. } => {
                            report.emptiness_ok = false;
                            report.fail(format!(
                                "x={x:?} at height {t} beats record nu={} (height {})",
                                rec.nu, rec.height
                            ));
                            false
                        }
                        FastVerdict::Uncertain => true,
                        FastVerdict::ExactZero { form } => {
                            report.notes.push(format!(
                                "exact integer hit at x={x:?} form {form} during rescan"
                            ));
                            false
                        }
                    },
                    None => true,
                };
                if uncertain {
                    match escalate_not_better(theta, x, rec, start, cap, t)? {
                        NotBetterOutcome::NotBetter => {}
                        NotBetterOutcome::Tie => {
                            report.notes.push(format!(
                                "x={x:?} ties record nu={} at height {t}",
                                rec.nu
                            ));
                        }
                        NotBetterOutcome::Better => {
                            report.emptiness_ok = false;
                            report.fail(format!(
                                "x={x:?} at height {t} beats record nu={} (height {})",
                                rec.nu, rec.height
                            ));
                        }
                    }
                }
            }
        }
    }

    report.pass = report.indices_ok
        && report.canonical_ok
        && report.heights_strictly_increasing
        && report.zeta_strictly_decreasing
        && report.records_consistent
        && report.emptiness_ok
        && report.failures.is_empty();
    Ok(report)
}

enum NotBetterOutcome {
    NotBetter,
    Tie,
    Better,
}

fn escalate_not_better(
    theta: &ThetaMatrix,
    x: &[i64],
    rec: &BestApproxRecord,
    start: u32,
    cap: u32,
    height: u64,
) -> Result<NotBetterOutcome, EngineError> {
    let mut bits = start;
    let zeta = loop {
        match forms::zeta_at_bits(theta, x, bits) {
            Ok(Some((zeta, _))) => break zeta,
            Ok(None) => {
                if bits >= cap {
                    return Err(EngineError::Precision {
                        height,
                        detail: format!("rescan ambiguous for {x:?} at cap"),
                    });
                }
                bits = (bits * 2).min(cap);
            }
            Err(FormsError::ExactIntegerHit { .. }) => return Ok(NotBetterOutcome::NotBetter),
            Err(e) => return Err(e.into()),
        }
    };
    match compare_zeta(theta, (x, &zeta), (&rec.x, &rec.zeta), cap)? {
        CmpOutcome::Less => Ok(NotBetterOutcome::Better),
        CmpOutcome::Greater => Ok(NotBetterOutcome::NotBetter),
        CmpOutcome::Equal => Ok(NotBetterOutcome::Tie),
        CmpOutcome::Undecided => Err(EngineError::Precision {
            height,
            detail: format!("rescan cannot order {x:?} against record nu={}", rec.nu),
        }),
    }
}
