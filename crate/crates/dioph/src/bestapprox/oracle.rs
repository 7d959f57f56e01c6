//! Independent brute-force oracle.
//!
//! Same contract as the engine, implemented as a single-threaded double loop
//! at one fixed high precision with no shell bookkeeping: the outer loop
//! walks heights, the inner loop walks the whole cube `[-t, t]^m` and keeps
//! only the points of height exactly `t`. Deliberately shares nothing with
//! the engine's shell indexing, fixed-width fast path, or escalation logic,
//! so agreement between the two is meaningful evidence. Intended for small
//! heights (full enumeration; for m = 3 keep T at or below 500).

use num_rational::BigRational;

use crate::forms::{self, FormsError, ThetaMatrix};
use crate::realnum::DyadicInterval;

use super::{
    config_hash, is_canonical, offsets_to_i64, ApproxSequence, BestApproxRecord, EngineError,
};

pub const ORACLE_BITS: u32 = 8192;

pub fn oracle_sequence(theta: &ThetaMatrix, max_height: u64) -> Result<ApproxSequence, EngineError> {
    if max_height < 1 {
        return Err(EngineError::Input("max height must be at least 1".into()));
    }
    if theta.m() > 3 {
        return Err(EngineError::Input("oracle enumeration supports m <= 3".into()));
    }
    let bits = ORACLE_BITS.min(theta.feasible_bits());
    let mut seq = ApproxSequence {
        config_hash: config_hash(theta),
        m: theta.m(),
        n: theta.n(),
        max_height,
        start_bits: bits,
        cap_bits: bits,
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
        oracle_exact(theta, max_height, &mut seq)?;
    } else {
        oracle_interval(theta, max_height, bits, &mut seq)?;
    }
    Ok(seq)
}

fn oracle_exact(
    theta: &ThetaMatrix,
    max_height: u64,
    seq: &mut ApproxSequence,
) -> Result<(), EngineError> {
    let rats = theta.all_rational().expect("rational oracle path");
    let (m, n) = (theta.m(), theta.n());
    let mut best: Option<BigRational> = None;
    for t in 1..=max_height {
        let mut shell: Option<(BigRational, Vec<i64>, Vec<i64>)> = None;
        let mut hit: Option<(Vec<i64>, usize)> = None;
        for_each_canonical(m, t, |x| {
            if hit.is_some() {
                return;
            }
            match forms::zeta_rational(&rats, m, n, x) {
                Ok((z, offs)) => {
                    let take = match &shell {
                        None => true,
                        Some((bz, bx, _)) => z < *bz || (z == *bz && x < &bx[..]),
                    };
                    if let Some((bz, bx, _)) = &shell {
                        if z == *bz && x != &bx[..] {
                            seq.flags
                                .push(format!("degenerate-tie height={t} x={bx:?} x'={x:?}"));
                        }
                    }
                    if take {
                        let offs = offsets_to_i64(&offs).expect("small offsets");
                        shell = Some((z, x.to_vec(), offs));
                    }
                }
                Err(FormsError::ExactIntegerHit { form }) => hit = Some((x.to_vec(), form)),
                Err(e) => panic!("unexpected forms error in oracle: {e}"),
            }
        });
        if let Some((x, form)) = hit {
            seq.flags.push(format!(
                "exact-integer-hit height={t} x={x:?} form={form}: sequence stopped"
            ));
            return Ok(());
        }
        let (z, x, y) = shell.expect("nonempty shell");
        if best.as_ref().is_none_or(|b| z < *b) {
            seq.records.push(BestApproxRecord {
                nu: seq.records.len() + 1,
                x,
                y,
                height: t,
                zeta: DyadicInterval::from_rational_hull(&z, ORACLE_BITS),
                bits: ORACLE_BITS,
            });
            best = Some(z);
        }
    }
    Ok(())
}

fn oracle_interval(
    theta: &ThetaMatrix,
    max_height: u64,
    bits: u32,
    seq: &mut ApproxSequence,
) -> Result<(), EngineError> {
    let refined = theta.refined(bits);
    let (m, n) = (theta.m(), theta.n());
    let mut best: Option<DyadicInterval> = None;
    for t in 1..=max_height {
        let mut shell: Option<(DyadicInterval, Vec<i64>, Vec<i64>)> = None;
        let mut abort: Option<Result<(Vec<i64>, usize), EngineError>> = None;
        for_each_canonical(m, t, |x| {
            if abort.is_some() {
                return;
            }
            match forms::zeta_refined_once(&refined, m, n, x) {
                Ok(Some((z, offs))) => {
                    let take = match &shell {
                        None => true,
                        Some((bz, bx, _)) => {
                            if z.strictly_less_than(bz) {
                                true
                            } else if bz.strictly_less_than(&z) {
                                false
                            } else if z == *bz {
                                seq.flags
                                    .push(format!("degenerate-tie height={t} x={bx:?} x'={x:?}"));
                                x < &bx[..]
                            } else {
                                abort = Some(Err(EngineError::Precision {
                                    height: t,
                                    detail: format!(
                                        "oracle cannot order {bx:?} and {x:?} at {bits} bits"
                                    ),
                                }));
                                false
                            }
                        }
                    };
                    if take {
                        let offs = offsets_to_i64(&offs).expect("small offsets");
                        shell = Some((z, x.to_vec(), offs));
                    }
                }
                Ok(None) => {
                    abort = Some(Err(EngineError::Precision {
                        height: t,
                        detail: format!("oracle nearest integer ambiguous for {x:?} at {bits} bits"),
                    }));
                }
                Err(FormsError::ExactIntegerHit { form }) => {
                    abort = Some(Ok((x.to_vec(), form)));
                }
                Err(e) => abort = Some(Err(e.into())),
            }
        });
        match abort {
            Some(Ok((x, form))) => {
                seq.flags.push(format!(
                    "exact-integer-hit height={t} x={x:?} form={form}: sequence stopped"
                ));
                return Ok(());
            }
            Some(Err(e)) => return Err(e),
            None => {}
        }
        let (z, x, y) = shell.expect("nonempty shell");
        let better = match &best {
            None => true,
            Some(b) => {
                if z.strictly_less_than(b) {
                    true
                } else if b.strictly_less_than(&z) || z == *b {
                    false
                } else {
                    return Err(EngineError::Precision {
                        height: t,
                        detail: format!("oracle cannot compare shell minimum {x:?} to the record"),
                    });
                }
            }
        };
        if better {
            best = Some(z.clone());
            seq.records.push(BestApproxRecord {
                nu: seq.records.len() + 1,
                x,
                y,
                height: t,
                zeta: z,
                bits: refined.bits,
            });
        }
    }
    Ok(())
}

/// Dumb rescan of the cube `[-t, t]^m`, filtering to canonical points of
/// height exactly `t`.
fn for_each_canonical<F: FnMut(&[i64])>(m: usize, t: u64, mut f: F) {
    let ti = t as i64;
    match m {
        1 => f(&[ti]),
        2 => {
            for a in -ti..=ti {
                for b in -ti..=ti {
                    let x = [a, b];
                    if forms::height(&x) == t && is_canonical(&x) {
                        f(&x);
                    }
                }
            }
        }
        3 => {
            for a in -ti..=ti {
                for b in -ti..=ti {
                    for c in -ti..=ti {
                        let x = [a, b, c];
                        if forms::height(&x) == t && is_canonical(&x) {
                            f(&x);
                        }
                    }
                }
            }
        }
        _ => unreachable!("oracle supports m <= 3"),
    }
}
