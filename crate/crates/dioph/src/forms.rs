//! The matrix of linear forms and the certified approximation error.
//!
//! For an `n x m` matrix `theta` the forms are `L_j(x) = sum_i theta[j][i] x_i`
//! and the error of an integer vector is `zeta(x) = max_j ||L_j(x)||`, the
//! maximum distance of a form value to its nearest integer. Evaluation is
//! interval-certified: entries are refined until every nearest-integer
//! decision is unambiguous, or exactly rational when the whole matrix is.

use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::realnum::{nearest_int_dist, CertifiedReal, DyadicInterval, NearestInt, RealNumError};

/// Case tag derived from the matrix shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CaseTag {
    M1N3,
    M3N1,
    M2N2,
    Other,
}

impl CaseTag {
    pub fn from_shape(m: usize, n: usize) -> Self {
        match (m, n) {
            (1, 3) => CaseTag::M1N3,
            (3, 1) => CaseTag::M3N1,
            (2, 2) => CaseTag::M2N2,
            _ => CaseTag::Other,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::M1N3 => "m1n3",
            CaseTag::M3N1 => "m3n1",
            CaseTag::M2N2 => "m2n2",
            CaseTag::Other => "other",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormsError {
    Precision(RealNumError),
    /// Some form value landed exactly on an integer: the entries are not
    /// linearly independent with 1 over the integers. Reported, not fatal.
    ExactIntegerHit { form: usize },
    ZeroVector,
    Shape(String),
}

impl fmt::Display for FormsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormsError::Precision(e) => write!(f, "{e}"),
            FormsError::ExactIntegerHit { form } => {
                write!(f, "form {form} hit an integer exactly (dependent entries)")
            }
            FormsError::ZeroVector => write!(f, "zeta is undefined for the zero vector"),
            FormsError::Shape(msg) => write!(f, "shape error: {msg}"),
        }
    }
}

impl Error for FormsError {}

impl From<RealNumError> for FormsError {
    fn from(e: RealNumError) -> Self {
        FormsError::Precision(e)
    }
}

/// Refinement policy: start coarse, double on ambiguity, stop at the cap.
/// Geometric escalation keeps total cost within a small factor of the cost
/// at the final precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start_bits: 64, cap_bits: 4096 }
    }
}

/// Matrix entries refined to a common scale `2^(-bits)`, row-major.
#[derive(Clone, Debug)]
pub struct RefinedEntries {
    pub bits: u32,
    pub lo: Vec<BigInt>,
    pub hi: Vec<BigInt>,
    pub clamped: bool,
}

/// The matrix `theta` of an approximation problem: `n` forms in `m` integer
/// variables. Immutable and shareable; refined snapshots of the entries are
/// memoized per precision.
#[derive(Debug)]
pub struct ThetaMatrix {
    m: usize,
    n: usize,
    entries: Vec<CertifiedReal>,
    cache: RwLock<BTreeMap<u32, Arc<RefinedEntries>>>,
}

impl ThetaMatrix {
    pub fn new(m: usize, n: usize, entries: Vec<CertifiedReal>) -> Result<Self, FormsError> {
        if m == 0 || n == 0 {
            return Err(FormsError::Shape("m and n must be at least 1".into()));
        }
        if entries.len() != m * n {
            return Err(FormsError::Shape(format!(
                "expected {} entries for a {n}x{m} matrix, got {}",
                m * n,
                entries.len()
            )));
        }
        Ok(ThetaMatrix { m, n, entries, cache: RwLock::new(BTreeMap::new()) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient dimension of the extended approximation vectors.
    pub fn d(&self) -> usize {
        self.m + self.n
    }

    pub fn case(&self) -> CaseTag {
        CaseTag::from_shape(self.m, self.n)
    }

    /// Entry of row `j` (form index) and column `i`, zero-based.
    pub fn entry(&self, j: usize, i: usize) -> &CertifiedReal {
        &self.entries[j * self.m + i]
    }

    pub fn entries(&self) -> &[CertifiedReal] {
        &self.entries
    }

    /// Exact rational view of the whole matrix, when available.
    pub fn all_rational(&self) -> Option<Vec<&BigRational>> {
        self.entries.iter().map(CertifiedReal::as_rational).collect()
    }

    /// Highest precision every entry can certify (`u32::MAX` if unbounded).
    pub fn feasible_bits(&self) -> u32 {
        self.entries
            .iter()
            .filter_map(CertifiedReal::max_feasible_bits)
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Do any entries carry a declared-error decimal?
    pub fn precision_limited(&self) -> bool {
        self.entries.iter().any(CertifiedReal::precision_limited)
    }

    /// Memoized refinement of all entries at scale `2^(-bits)` (clamped to
    /// what decimals allow).
    pub fn refined(&self, bits: u32) -> Arc<RefinedEntries> {
        let eff = bits.min(self.feasible_bits()).max(1);
        if let Some(hit) = self.cache.read().unwrap().get(&eff) {
            return hit.clone();
        }
        let mut lo = Vec::with_capacity(self.entries.len());
        let mut hi = Vec::with_capacity(self.entries.len());
        let mut clamped = false;
        for e in &self.entries {
            let (iv, cl) = e.refine_clamped(eff);
            let iv = iv.hull_at(eff);
            clamped |= cl;
            lo.push(iv.lo_mantissa().clone());
            hi.push(iv.hi_mantissa().clone());
        }
        let arc = Arc::new(RefinedEntries { bits: eff, lo, hi, clamped });
        self.cache.write().unwrap().insert(eff, arc.clone());
        arc
    }

    /// Canonical text form used for config hashing.
    pub fn canonical_desc(&self) -> String {
        let mut s = format!("m={};n={}", self.m, self.n);
        for (idx, e) in self.entries.iter().enumerate() {
            let j = idx / self.m + 1;
            let i = idx % self.m + 1;
            s.push_str(&format!(";e{j}.{i}={}", e.canonical_text()));
        }
        s
    }
}

/// Sup-norm height `max_i |x_i|`.
pub fn height(x: &[i64]) -> u64 {
    x.iter().map(|&c| c.unsigned_abs()).max().unwrap_or(0)
}

/// Certified values of all forms at `x`, entries refined at `bits`. The j-th
/// interval contains `L_j(x)` with width at most `m * M(x) * 2^(-bits)`.
pub fn eval_forms(
    theta: &ThetaMatrix,
    x: &[i64],
    bits: u32,
) -> Result<Vec<DyadicInterval>, FormsError> {
    if x.len() != theta.m() {
        return Err(FormsError::Shape(format!(
            "vector length {} does not match m = {}",
            x.len(),
            theta.m()
        )));
    }
    // Exact rational fast path.
    if let Some(rats) = theta.all_rational() {
        let vals = eval_forms_rational(&rats, theta.m(), theta.n(), x);
        return Ok(vals
            .into_iter()
            .map(|v| DyadicInterval::from_rational_hull(&v, bits))
            .collect());
    }
    if theta.feasible_bits() < bits {
        return Err(FormsError::Precision(RealNumError::PrecisionExhausted {
            requested_bits: bits,
            available_bits: theta.feasible_bits(),
        }));
    }
    let refined = theta.refined(bits);
    Ok(eval_forms_refined(&refined, theta.m(), theta.n(), x))
}

fn eval_forms_rational(rats: &[&BigRational], m: usize, n: usize, x: &[i64]) -> Vec<BigRational> {
    (0..n)
        .map(|j| {
            let mut acc = BigRational::zero();
            for i in 0..m {
                if x[i] != 0 {
                    acc += rats[j * m + i] * BigRational::from(BigInt::from(x[i]));
                }
            }
            acc
        })
        .collect()
}

/// Interval dot products against a refined snapshot of the entries.
pub fn eval_forms_refined(
    refined: &RefinedEntries,
    m: usize,
    n: usize,
    x: &[i64],
) -> Vec<DyadicInterval> {
    (0..n)
        .map(|j| {
            let mut lo = BigInt::zero();
            let mut hi = BigInt::zero();
            for i in 0..m {
                let c = x[i];
                if c == 0 {
                    continue;
                }
                let (elo, ehi) = (&refined.lo[j * m + i], &refined.hi[j * m + i]);
                if c > 0 {
                    lo += elo * c;
                    hi += ehi * c;
                } else {
                    lo += ehi * c;
                    hi += elo * c;
                }
            }
            DyadicInterval::new(lo, hi, refined.bits)
        })
        .collect()
}

/// Certified error of one vector: the distance interval, the offsets, and
/// whether only a declared-error decimal stopped further refinement.
#[derive(Clone, Debug)]
pub struct ErrorProfile {
    pub zeta: DyadicInterval,
    pub offsets: Vec<BigInt>,
    /// Exact value when the whole matrix is rational.
    pub exact: Option<BigRational>,
    /// Entry precision at which the profile was certified.
    pub bits: u32,
}

/// Exact rational `zeta` with round-half-up nearest integers.
pub fn zeta_rational(
    rats: &[&BigRational],
    m: usize,
    n: usize,
    x: &[i64],
) -> Result<(BigRational, Vec<BigInt>), FormsError> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut best = BigRational::zero();
    let mut offsets = Vec::with_capacity(n);
    let mut hit = None;
    for (j, v) in eval_forms_rational(rats, m, n, x).iter().enumerate() {
        let k = (v + &half).floor().to_integer();
        let dist = (v - BigRational::from(k.clone())).abs();
        if dist.is_zero() && hit.is_none() {
            hit = Some(j);
        }
        offsets.push(-k);
        if dist > best {
            best = dist;
        }
    }
    if let Some(form) = hit {
        return Err(FormsError::ExactIntegerHit { form });
    }
    Ok((best, offsets))
}

/// One evaluation pass at fixed precision; `None` means some nearest-integer
/// decision was ambiguous and the caller should escalate.
pub fn zeta_refined_once(
    refined: &RefinedEntries,
    m: usize,
    n: usize,
    x: &[i64],
) -> Result<Option<(DyadicInterval, Vec<BigInt>)>, FormsError> {
    let forms = eval_forms_refined(refined, m, n, x);
    let mut offsets = Vec::with_capacity(n);
    let mut zlo: Option<BigInt> = None;
    let mut zhi: Option<BigInt> = None;
    for (j, v) in forms.iter().enumerate() {
        match nearest_int_dist(v) {
            NearestInt::Ambiguous => return Ok(None),
            NearestInt::Unique { offset, dist } => {
                if dist.is_point() && dist.lo_mantissa().is_zero() {
                    return Err(FormsError::ExactIntegerHit { form: j });
                }
                offsets.push(offset);
                let (dlo, dhi) = (dist.lo_mantissa().clone(), dist.hi_mantissa().clone());
                zlo = Some(match zlo {
                    Some(z) => z.max(dlo),
                    None => dlo,
                });
                zhi = Some(match zhi {
                    Some(z) => z.max(dhi),
                    None => dhi,
                });
            }
        }
    }
    let zeta = DyadicInterval::new(zlo.unwrap(), zhi.unwrap(), refined.bits);
    Ok(Some((zeta, offsets)))
}

/// Certified `zeta(x) = max_j ||L_j(x)||` with adaptive refinement.
pub fn zeta(theta: &ThetaMatrix, x: &[i64], policy: &PrecisionPolicy) -> Result<ErrorProfile, FormsError> {
    if x.iter().all(|&c| c == 0) {
        return Err(FormsError::ZeroVector);
    }
    if let Some(rats) = theta.all_rational() {
        let (exact, offsets) = zeta_rational(&rats, theta.m(), theta.n(), x)?;
        let zeta = DyadicInterval::from_rational_hull(&exact, policy.cap_bits);
        return Ok(ErrorProfile { zeta, offsets, exact: Some(exact), bits: policy.cap_bits });
    }
    let cap = policy.cap_bits.min(theta.feasible_bits());
    let mut bits = policy.start_bits.min(cap);
    loop {
        let refined = theta.refined(bits);
        if let Some((zeta, offsets)) = zeta_refined_once(&refined, theta.m(), theta.n(), x)? {
            return Ok(ErrorProfile { zeta, offsets, exact: None, bits: refined.bits });
        }
        if bits >= cap {
            return Err(FormsError::Precision(RealNumError::PrecisionExhausted {
                requested_bits: bits.saturating_mul(2),
                available_bits: cap,
            }));
        }
        bits = (bits * 2).min(cap);
    }
}

/// `zeta` recomputed at one fixed precision (used for record storage and for
/// comparison refiners). `None` on ambiguity.
pub fn zeta_at_bits(
    theta: &ThetaMatrix,
    x: &[i64],
    bits: u32,
) -> Result<Option<(DyadicInterval, Vec<BigInt>)>, FormsError> {
    if let Some(rats) = theta.all_rational() {
        let (exact, offsets) = zeta_rational(&rats, theta.m(), theta.n(), x)?;
        return Ok(Some((DyadicInterval::from_rational_hull(&exact, bits), offsets)));
    }
    let refined = theta.refined(bits);
    zeta_refined_once(&refined, theta.m(), theta.n(), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rational_theta(m: usize, n: usize, vals: &[(i64, i64)]) -> ThetaMatrix {
        ThetaMatrix::new(
            m,
            n,
            vals.iter().map(|&(a, b)| CertifiedReal::rational(q(a, b))).collect(),
        )
        .unwrap()
    }

    /// (sqrt2-1, sqrt3-1, sqrt5-2) as a column, the m=1, n=3 test vector.
    fn surd_column() -> ThetaMatrix {
        ThetaMatrix::new(
            1,
            3,
            vec![
                CertifiedReal::algebraic_i64(&[-1, 2, 1], (0, 1), (1, 1)).unwrap(),
                CertifiedReal::algebraic_i64(&[-2, 2, 1], (0, 1), (1, 1)).unwrap(),
                CertifiedReal::algebraic_i64(&[-1, 4, 1], (0, 1), (1, 1)).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn height_examples() {
        assert_eq!(height(&[3, -5, 2]), 5);
        assert_eq!(height(&[0, 0, 0]), 0);
        assert_eq!(height(&[-7]), 7);
    }

    #[test]
    fn case_tags() {
        assert_eq!(CaseTag::from_shape(1, 3), CaseTag::M1N3);
        assert_eq!(CaseTag::from_shape(3, 1), CaseTag::M3N1);
        assert_eq!(CaseTag::from_shape(2, 2), CaseTag::M2N2);
        assert_eq!(CaseTag::from_shape(1, 1), CaseTag::Other);
    }

    #[test]
    fn eval_forms_rational_is_exact() {
        let theta = rational_theta(1, 3, &[(1, 3), (1, 3), (1, 3)]);
        let vals = eval_forms(&theta, &[3], 64).unwrap();
        for v in vals {
            assert!(v.is_point());
            assert_eq!(v.lo_rational(), BigRational::one());
        }
        let zeros = eval_forms(&theta, &[0], 64).unwrap();
        for v in zeros {
            assert!(v.is_point());
            assert!(v.lo_rational().is_zero());
        }
    }

    #[test]
    fn eval_forms_algebraic_enclosure() {
        let theta = surd_column();
        let vals = eval_forms(&theta, &[1], 64).unwrap();
        let expect = [0.41421356237309515, 0.7320508075688772, 0.2360679774997896];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v.to_f64_mid() - e).abs() < 1e-12);
        }
    }

    #[test]
    fn zeta_surd_column() {
        let theta = surd_column();
        let profile = zeta(&theta, &[1], &PrecisionPolicy::default()).unwrap();
        // max(0.414213.., 0.267949.., 0.236067..) = ||sqrt2 - 1||
        assert!((profile.zeta.to_f64_mid() - 0.41421356237309515).abs() < 1e-12);
        let offs: Vec<i64> = profile.offsets.iter().map(|o| i64::try_from(o).unwrap()).collect();
        // sqrt3 - 1 = 0.732.. rounds to 1, so its offset is -1
        assert_eq!(offs, vec![0, -1, 0]);
    }

    #[test]
    fn zeta_exact_integer_hit() {
        let theta = rational_theta(1, 1, &[(1, 2)]);
        match zeta(&theta, &[2], &PrecisionPolicy::default()) {
            Err(FormsError::ExactIntegerHit { form: 0 }) => {}
            other => panic!("expected exact integer hit, got {other:?}"),
        }
    }

    #[test]
    fn zeta_rejects_zero_vector() {
        let theta = surd_column();
        assert!(matches!(
            zeta(&theta, &[0], &PrecisionPolicy::default()),
            Err(FormsError::ZeroVector)
        ));
    }

    #[test]
    fn zeta_single_term_sum() {
        // x = (1, 0, 0) picks out the first entry of a 1x3 row
        let theta = rational_theta(3, 1, &[(2, 7), (3, 5), (1, 9)]);
        let profile = zeta(&theta, &[1, 0, 0], &PrecisionPolicy::default()).unwrap();
        assert_eq!(profile.exact.as_ref().unwrap(), &q(2, 7));
    }

    #[test]
    fn zeta_symmetric_under_negation() {
        let theta = surd_column();
        let policy = PrecisionPolicy::default();
        for x in [1i64, 2, 5, 17] {
            let a = zeta(&theta, &[x], &policy).unwrap();
            let b = zeta(&theta, &[-x], &policy).unwrap();
            assert_eq!(a.zeta, b.zeta);
            let neg: Vec<BigInt> = b.offsets.iter().map(|o| -o).collect();
            assert_eq!(a.offsets, neg);
        }
    }

    #[test]
    fn zeta_upper_bounded_by_half() {
        let theta = surd_column();
        let policy = PrecisionPolicy::default();
        let half_plus = q(1, 2) + q(1, 1 << 20);
        for x in 1i64..50 {
            let p = zeta(&theta, &[x], &policy).unwrap();
            assert!(p.zeta.hi_rational() <= half_plus);
        }
    }

    #[test]
    fn zeta_rational_multiple_of_inverse_denominator() {
        let theta = rational_theta(1, 2, &[(3, 7), (5, 7)]);
        for x in 1i64..=6 {
            let p = zeta(&theta, &[x], &PrecisionPolicy::default()).unwrap();
            let exact = p.exact.unwrap();
            let scaled = exact * q(7, 1);
            assert!(scaled.is_integer(), "zeta not a multiple of 1/7 at x={x}");
        }
    }

    #[test]
    fn decimal_matrix_is_precision_limited() {
        let theta = ThetaMatrix::new(
            1,
            1,
            vec![CertifiedReal::decimal("0.4142135623730950488").unwrap()],
        )
        .unwrap();
        assert!(theta.precision_limited());
        assert!(theta.feasible_bits() < u32::MAX);
        let policy = PrecisionPolicy { start_bits: 48, cap_bits: 4096 };
        let p = zeta(&theta, &[1], &policy).unwrap();
        assert!((p.zeta.to_f64_mid() - 0.41421356237).abs() < 1e-9);
        assert!(p.bits <= theta.feasible_bits());
        // requesting more than the digits carry propagates the precision error
        assert!(matches!(
            eval_forms(&theta, &[1], 4096),
            Err(FormsError::Precision(RealNumError::PrecisionExhausted { .. }))
        ));
    }
}
