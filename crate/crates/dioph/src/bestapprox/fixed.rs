//! Fixed-width shell evaluation.
//!
//! At the scan precision the refined entry mantissas fit in `i128` with
//! headroom for the dot product, so the per-candidate work (interval dot
//! product, nearest integer, distance, comparison against the record) is
//! plain integer arithmetic with no allocation. The arithmetic is exact, so
//! verdicts agree bit-for-bit with the BigInt path.

use num_bigint::BigInt;

use crate::forms::RefinedEntries;
use crate::realnum::DyadicInterval;

const MAX_FORMS: usize = 8;

pub(super) struct FixedEntries {
    bits: u32,
    m: usize,
    n: usize,
    lo: Vec<i128>,
    hi: Vec<i128>,
}

pub(super) enum FastVerdict {
    /// Certified not strictly below the record.
    NotBetter,
    /// Certified strictly below the record.
    Better { zeta: DyadicInterval, offsets: Vec<i64> },
    /// Interval overlaps the record or a nearest integer is ambiguous.
    Uncertain,
    /// A form distance is exactly zero.
    ExactZero { form: usize },
}

/// Outward i128 clamp of a record interval at scale `2^(-bits)`; saturation
/// only widens, so comparisons stay certified.
pub(super) fn clamp_interval(zeta: &DyadicInterval, bits: u32) -> (i128, i128) {
    let hull = zeta.hull_at(bits);
    let lo = i128::try_from(hull.lo_mantissa()).unwrap_or(i128::MIN);
    let hi = i128::try_from(hull.hi_mantissa()).unwrap_or(i128::MAX);
    (lo, hi)
}

impl FixedEntries {
    /// `None` when the mantissas or the accumulator would not fit in i128
    /// for heights up to `t_max`, or when there are too many forms.
    pub(super) fn build(refined: &RefinedEntries, m: usize, t_max: u64) -> Option<Self> {
        let n = refined.lo.len() / m;
        if n > MAX_FORMS {
            return None;
        }
        let budget = u64::from(128 - 4 - (64 - (m as u64 * t_max).leading_zeros()) as u32);
        let mut lo = Vec::with_capacity(refined.lo.len());
        let mut hi = Vec::with_capacity(refined.hi.len());
        for (l, h) in refined.lo.iter().zip(&refined.hi) {
            if l.bits() > budget || h.bits() > budget {
                return None;
            }
            lo.push(i128::try_from(l).ok()?);
            hi.push(i128::try_from(h).ok()?);
        }
        Some(FixedEntries { bits: refined.bits, m, n, lo, hi })
    }

    pub(super) fn eval(&self, x: &[i64], rec: Option<(i128, i128)>) -> FastVerdict {
        let b = self.bits;
        let half = 1i128 << (b - 1);
        let mut zlo = 0i128;
        let mut zhi = 0i128;
        let mut ks = [0i64; MAX_FORMS];
        for j in 0..self.n {
            let row = j * self.m;
            let mut acc_lo = 0i128;
            let mut acc_hi = 0i128;
            for (i, &c) in x.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let c = c as i128;
                let (elo, ehi) = (self.lo[row + i], self.hi[row + i]);
                if c > 0 {
                    acc_lo += elo * c;
                    acc_hi += ehi * c;
                } else {
                    acc_lo += ehi * c;
                    acc_hi += elo * c;
                }
            }
            let k_lo = (acc_lo + half) >> b;
            let k_hi = (acc_hi + half) >> b;
            if k_lo != k_hi {
                return FastVerdict::Uncertain;
            }
            let shifted = k_lo << b;
            let dlo = acc_lo - shifted;
            let dhi = acc_hi - shifted;
            let (alo, ahi) = if dlo >= 0 {
                (dlo, dhi)
            } else if dhi <= 0 {
                (-dhi, -dlo)
            } else {
                (0, (-dlo).max(dhi))
            };
            if alo == 0 && ahi == 0 {
                return FastVerdict::ExactZero { form: j };
            }
            if let Some((_, rhi)) = rec {
                // This form alone already certifies "not strictly better".
                if alo >= rhi {
                    return FastVerdict::NotBetter;
                }
            }
            ks[j] = k_lo as i64;
            zlo = zlo.max(alo);
            zhi = zhi.max(ahi);
        }
        match rec {
            Some((rlo, _)) if zhi >= rlo => FastVerdict::Uncertain,
            _ => FastVerdict::Better {
                zeta: DyadicInterval::new(BigInt::from(zlo), BigInt::from(zhi), b),
                offsets: (0..self.n).map(|j| -ks[j]).collect(),
            },
        }
    }
}
