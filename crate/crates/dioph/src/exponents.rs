//! Diophantine exponent estimation from a computed sequence.
//!
//! Write `psi(t)` for the best error achievable with height at most `t`.
//! Along a best-approximation sequence, `psi` is the step function that
//! equals `zeta_nu` on the interval `[M_nu, M_(nu+1))`. For `gamma > 0`,
//! `t^gamma psi(t)` is increasing in `t` on each step, so
//!
//!   sup over `[M_nu, M_(nu+1))` of `t^gamma psi(t)` -> `M_(nu+1)^gamma zeta_nu`,
//!   inf over `[M_nu, M_(nu+1))` of `t^gamma psi(t)`  =  `M_nu^gamma zeta_nu`.
//!
//! Hence `limsup_t t^gamma psi(t)` is finite exactly when
//! `gamma <= liminf_nu a_nu` with `a_nu = -log zeta_nu / log M_(nu+1)`, and
//! `liminf_t t^gamma psi(t)` is finite exactly when
//! `gamma <= limsup_nu b_nu` with `b_nu = -log zeta_nu / log M_nu`: the
//! uniform exponent is `liminf a_nu` and the individual exponent is
//! `limsup b_nu`. A finite run replaces liminf/limsup by min/max over an
//! explicit tail, so the estimates are honest finite-sample proxies with
//! user-visible `tail_start`; the synthetic-step-function tests below pin
//! the characterization.
//!
//! Logs are taken on the certified interval endpoints, so every ratio
//! carries an interval whose width reflects the stored zeta precision.

use std::error::Error;
use std::fmt;

use serde::Serialize;

use crate::bestapprox::ApproxSequence;
use crate::realnum::mantissa_ln;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentsError {
    /// Fewer than two records: no ratio is defined.
    TooFewRecords { available: usize },
    /// Fewer than three ratios at or past the tail start.
    InsufficientData { tail_ratios: usize },
    /// A record's stored zeta interval touches zero; its log is unbounded.
    NonpositiveZeta { nu: usize },
    BadTailStart { tail_start: usize, last: usize },
}

impl fmt::Display for ExponentsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentsError::TooFewRecords { available } => {
                write!(f, "need at least 2 records for ratios, have {available}")
            }
            ExponentsError::InsufficientData { tail_ratios } => {
                write!(f, "insufficient data: only {tail_ratios} tail ratios (need 3)")
            }
            ExponentsError::NonpositiveZeta { nu } => {
                write!(f, "record {nu} has a zeta interval touching zero")
            }
            ExponentsError::BadTailStart { tail_start, last } => {
                write!(f, "tail start {tail_start} must be below the last index {last}")
            }
        }
    }
}

impl Error for ExponentsError {}

/// Log-ratio diagnostics of one record. Each ratio is an interval derived
/// from the certified zeta endpoints; `b` is absent for the height-1 record
/// (its log vanishes).
#[derive(Clone, Debug, Serialize)]
pub struct RatioPoint {
    pub nu: usize,
    pub log_height: f64,
    pub neg_log_zeta: f64,
    pub a_lo: f64,
    pub a_hi: f64,
    pub b_lo: Option<f64>,
    pub b_hi: Option<f64>,
}

impl RatioPoint {
    pub fn a_mid(&self) -> f64 {
        0.5 * (self.a_lo + self.a_hi)
    }

    pub fn b_mid(&self) -> Option<f64> {
        match (self.b_lo, self.b_hi) {
            (Some(lo), Some(hi)) => Some(0.5 * (lo + hi)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentEstimate {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// Worst half-width of a contributing ratio interval.
    pub alpha_err: f64,
    pub beta_err: f64,
    pub tail_start: usize,
    pub tail_ratios: usize,
    pub ratios: Vec<RatioPoint>,
}

/// Per-record ratios `a_nu = -log zeta_nu / log M_(nu+1)` and
/// `b_nu = -log zeta_nu / log M_nu`, for `1 <= nu <= last - 1`.
pub fn local_ratios(seq: &ApproxSequence) -> Result<Vec<RatioPoint>, ExponentsError> {
    if seq.records.len() < 2 {
        return Err(ExponentsError::TooFewRecords { available: seq.records.len() });
    }
    let mut out = Vec::with_capacity(seq.records.len() - 1);
    for w in seq.records.windows(2) {
        let rec = &w[0];
        let next = &w[1];
        if !rec.zeta.is_strictly_positive() {
            return Err(ExponentsError::NonpositiveZeta { nu: rec.nu });
        }
        // -log zeta as an interval: the upper endpoint gives the lower bound.
        let neg_log_lo = -mantissa_ln(rec.zeta.hi_mantissa(), rec.zeta.bits());
        let neg_log_hi = -mantissa_ln(rec.zeta.lo_mantissa(), rec.zeta.bits());
        let log_m = (rec.height as f64).ln();
        let log_m_next = (next.height as f64).ln();
        let (b_lo, b_hi) = if rec.height >= 2 {
            (Some(neg_log_lo / log_m), Some(neg_log_hi / log_m))
        } else {
            (None, None)
        };
        out.push(RatioPoint {
            nu: rec.nu,
            log_height: log_m,
            neg_log_zeta: 0.5 * (neg_log_lo + neg_log_hi),
            a_lo: neg_log_lo / log_m_next,
            a_hi: neg_log_hi / log_m_next,
            b_lo,
            b_hi,
        });
    }
    Ok(out)
}

/// Default tail: the first record of height at least `T^(1/4)`, which
/// discards boundary effects while keeping most records. Falls back to
/// keeping the last few ratios when every height is below the threshold.
pub fn default_tail_start(seq: &ApproxSequence) -> usize {
    let cutoff = (seq.max_height as f64).powf(0.25);
    let candidate = seq
        .records
        .iter()
        .find(|r| (r.height as f64) >= cutoff)
        .map(|r| r.nu)
        .unwrap_or(usize::MAX);
    let last = seq.records.len();
    // Need tail_start < last and ideally >= 3 tail ratios.
    candidate.min(last.saturating_sub(3)).max(1)
}

/// Finite-sample exponent estimates over the tail `nu >= tail_start`:
/// `alpha_hat = min a_nu`, `beta_hat = max b_nu`.
pub fn estimate_exponents(
    seq: &ApproxSequence,
    tail_start: usize,
) -> Result<ExponentEstimate, ExponentsError> {
    let ratios = local_ratios(seq)?;
    let last = seq.records.len();
    if tail_start >= last {
        return Err(ExponentsError::BadTailStart { tail_start, last });
    }
    let tail: Vec<&RatioPoint> = ratios.iter().filter(|r| r.nu >= tail_start).collect();
    if tail.len() < 3 {
        return Err(ExponentsError::InsufficientData { tail_ratios: tail.len() });
    }
    let mut alpha_hat = f64::INFINITY;
    let mut alpha_err = 0f64;
    let mut beta_hat = f64::NEG_INFINITY;
    let mut beta_err = 0f64;
    let mut have_b = false;
    for r in &tail {
        if r.a_mid() < alpha_hat {
            alpha_hat = r.a_mid();
        }
        alpha_err = alpha_err.max(0.5 * (r.a_hi - r.a_lo));
        if let (Some(bm), Some(bl), Some(bh)) = (r.b_mid(), r.b_lo, r.b_hi) {
            have_b = true;
            if bm > beta_hat {
                beta_hat = bm;
            }
            beta_err = beta_err.max(0.5 * (bh - bl));
        }
    }
    if !have_b {
        return Err(ExponentsError::InsufficientData { tail_ratios: 0 });
    }
    Ok(ExponentEstimate {
        alpha_hat,
        beta_hat,
        alpha_err,
        beta_err,
        tail_start,
        tail_ratios: tail.len(),
        ratios,
    })
}

pub fn estimate_to_json(est: &ExponentEstimate) -> String {
    let mut s = serde_json::to_string_pretty(est).expect("estimate serialization");
    s.push('\n');
    s
}

/// CSV of `(nu, log M, -log zeta, a, b)` for log-log plots.
pub fn ratios_to_csv(ratios: &[RatioPoint]) -> String {
    let mut out = String::from("nu,log_M,neg_log_zeta,a,b\n");
    for r in ratios {
        let b = r.b_mid().map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.nu, r.log_height, r.neg_log_zeta, r.a_mid(), b
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bestapprox::{ApproxSequence, BestApproxRecord};
    use crate::realnum::DyadicInterval;
    use num_bigint::BigInt;

    /// Synthetic sequence with exact dyadic data: `M_nu = 2^(e_nu)`,
    /// `zeta_nu = 2^(-f_nu)`.
    fn synthetic(points: &[(u32, u32)]) -> ApproxSequence {
        let records = points
            .iter()
            .enumerate()
            .map(|(i, &(e, f))| BestApproxRecord {
                nu: i + 1,
                x: vec![1i64 << e.min(60)],
                y: vec![0],
                height: 1u64 << e.min(60),
                zeta: DyadicInterval::point(BigInt::from(1), f),
                bits: 64,
            })
            .collect();
        ApproxSequence {
            config_hash: "synthetic".into(),
            m: 1,
            n: 1,
            max_height: 1u64 << points.last().unwrap().0.min(60),
            start_bits: 64,
            cap_bits: 64,
            records,
            flags: vec![],
        }
    }

    #[test]
    fn ratio_arithmetic_on_round_numbers() {
        // The analogue of (M, zeta, M_next) = (10, 0.01, 100) in powers of
        // two: M = 2^10, zeta = 2^-20, M_next = 2^20 gives b = 2, a = 1.
        let seq = synthetic(&[(10, 20), (20, 40)]);
        let ratios = local_ratios(&seq).unwrap();
        assert_eq!(ratios.len(), 1);
        assert!((ratios[0].a_mid() - 1.0).abs() < 1e-12);
        assert!((ratios[0].b_mid().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn prescribed_exponents_recovered_exactly() {
        // e_(nu+1) = 2 e_nu and f_nu = e_(nu+1) / 2: a_nu = 1/2, b_nu = 1.
        let pts: Vec<(u32, u32)> = (0..5).map(|k| (3 << k, 3 << k)).collect();
        let est = estimate_exponents(&synthetic(&pts), 1).unwrap();
        assert!((est.alpha_hat - 0.5).abs() < 1e-12);
        assert!((est.beta_hat - 1.0).abs() < 1e-12);
        // zeta_nu = M_(nu+1)^(-1/3) exactly: e = 3^k, f = 3^k so that
        // f / e_next = 3^k / 3^(k+1) = 1/3 for every nu.
        let pts: Vec<(u32, u32)> = (1..4).map(|k| (3u32.pow(k), 3u32.pow(k))).collect();
        let ratios = local_ratios(&synthetic(&pts)).unwrap();
        for r in &ratios {
            assert!((r.a_mid() - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_dominates_alpha() {
        // b_nu >= a_nu pointwise since M_nu <= M_(nu+1).
        let pts: Vec<(u32, u32)> = vec![(3, 5), (5, 9), (9, 11), (13, 21), (21, 30)];
        let est = estimate_exponents(&synthetic(&pts), 1).unwrap();
        assert!(est.beta_hat >= est.alpha_hat - est.alpha_err - est.beta_err);
    }

    #[test]
    fn insufficient_data_paths() {
        let seq = synthetic(&[(3, 5), (5, 9)]);
        assert!(matches!(
            estimate_exponents(&seq, 1),
            Err(ExponentsError::BadTailStart { .. }) | Err(ExponentsError::InsufficientData { .. })
        ));
        let three = synthetic(&[(3, 5), (5, 9), (9, 11)]);
        assert!(matches!(
            estimate_exponents(&three, 1),
            Err(ExponentsError::InsufficientData { tail_ratios: 2 })
        ));
        let one = synthetic(&[(3, 5)]);
        assert!(matches!(local_ratios(&one), Err(ExponentsError::TooFewRecords { available: 1 })));
    }

    #[test]
    fn height_one_record_contributes_no_b() {
        let seq = synthetic(&[(0, 2), (2, 4), (4, 8), (8, 16), (16, 32)]);
        let ratios = local_ratios(&seq).unwrap();
        assert!(ratios[0].b_mid().is_none()); // M = 1
        assert!(ratios[1].b_mid().is_some());
        let est = estimate_exponents(&seq, 1).unwrap();
        assert!(est.beta_hat.is_finite());
    }

    #[test]
    fn csv_has_one_line_per_ratio() {
        let seq = synthetic(&[(3, 5), (5, 9), (9, 11), (13, 21)]);
        let ratios = local_ratios(&seq).unwrap();
        assert_eq!(ratios_to_csv(&ratios).lines().count(), ratios.len() + 1);
    }
}
