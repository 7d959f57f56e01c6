//! Certified real arithmetic.
//!
//! A [`CertifiedReal`] is an exact description of a real number: a rational,
//! an algebraic number (integer minimal polynomial plus an isolating interval
//! containing exactly one real root), or a pasted decimal constant with a
//! declared error of `10^(-N)`. Rationals and algebraics refine to dyadic
//! intervals of any requested width; decimals refine only down to their
//! declared error and then report [`RealNumError::PrecisionExhausted`].
//!
//! Values are immutable after construction. Refinement returns fresh
//! intervals, so instances can be shared freely across worker threads.

mod dyadic;
mod poly;

pub use dyadic::{mantissa_ln, mantissa_to_f64, DyadicInterval};
pub use poly::{gcd_rational, IntPoly};

use std::error::Error;
use std::fmt;

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::One;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealNumError {
    /// A decimal constant was asked for more precision than its digits carry.
    PrecisionExhausted { requested_bits: u32, available_bits: u32 },
    /// The polynomial/interval pair does not isolate exactly one real root.
    InvalidIsolation(String),
    /// Malformed decimal literal.
    InvalidDecimal(String),
}

impl fmt::Display for RealNumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealNumError::PrecisionExhausted { requested_bits, available_bits } => write!(
                f,
                "precision exhausted: {requested_bits} bits requested, {available_bits} available from declared digits"
            ),
            RealNumError::InvalidIsolation(msg) => write!(f, "invalid isolation: {msg}"),
            RealNumError::InvalidDecimal(msg) => write!(f, "invalid decimal: {msg}"),
        }
    }
}

impl Error for RealNumError {}

/// Algebraic number: minimal polynomial plus isolating interval with rational
/// endpoints. Invariant: the polynomial has exactly one real root strictly
/// inside `(lo, hi)` and nonzero values of opposite signs at the endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicReal {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
}

/// Decimal constant `value +- 10^(-places)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalReal {
    value: BigRational,
    places: u32,
    text: String,
    feasible_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifiedReal {
    Rational(BigRational),
    Algebraic(AlgebraicReal),
    Decimal(DecimalReal),
}

impl CertifiedReal {
    pub fn rational(q: BigRational) -> Self {
        CertifiedReal::Rational(q)
    }

    pub fn from_int(v: i64) -> Self {
        CertifiedReal::Rational(BigRational::from(BigInt::from(v)))
    }

    /// Build an algebraic number, validating the isolation invariant by a
    /// sign change at the endpoints plus a Sturm root count of one.
    pub fn algebraic(
        coeffs: Vec<BigInt>,
        lo: BigRational,
        hi: BigRational,
    ) -> Result<Self, RealNumError> {
        let poly = IntPoly::new(coeffs);
        if poly.is_zero() || poly.degree() == 0 {
            return Err(RealNumError::InvalidIsolation("polynomial must be nonconstant".into()));
        }
        if lo >= hi {
            return Err(RealNumError::InvalidIsolation("interval endpoints out of order".into()));
        }
        let slo = poly.sign_at_rational(&lo);
        let shi = poly.sign_at_rational(&hi);
        if slo == 0 || shi == 0 {
            return Err(RealNumError::InvalidIsolation(
                "polynomial vanishes at an isolating endpoint".into(),
            ));
        }
        if slo == shi {
            return Err(RealNumError::InvalidIsolation("no sign change over the interval".into()));
        }
        if poly.count_roots_between(&lo, &hi) != 1 {
            return Err(RealNumError::InvalidIsolation(
                "interval does not isolate exactly one real root".into(),
            ));
        }
        Ok(CertifiedReal::Algebraic(AlgebraicReal { poly, lo, hi }))
    }

    pub fn algebraic_i64(coeffs: &[i64], lo: (i64, i64), hi: (i64, i64)) -> Result<Self, RealNumError> {
        Self::algebraic(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            BigRational::new(BigInt::from(lo.0), BigInt::from(lo.1)),
            BigRational::new(BigInt::from(hi.0), BigInt::from(hi.1)),
        )
    }

    /// Parse a decimal constant; the error bound is `10^(-frac_digits)`.
    pub fn decimal(text: &str) -> Result<Self, RealNumError> {
        let t = text.trim();
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((a, b)) => (a, b),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(RealNumError::InvalidDecimal(format!("empty literal {text:?}")));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(RealNumError::InvalidDecimal(format!("bad literal {text:?}")));
        }
        let places = frac_part.len() as u32;
        let num: BigInt = format!("{}{}", int_part, frac_part)
            .parse()
            .map_err(|e| RealNumError::InvalidDecimal(format!("{text:?}: {e}")))?;
        let num = if negative { -num } else { num };
        let value = BigRational::new(num, BigInt::from(10).pow(places));
        // Largest p for which the hull of value +- 10^(-places) at scale
        // p + DECIMAL_GUARD_BITS still has width <= 2^(-p). The bound is
        // roughly `places * log2(10) - 1`; bisect to pin it exactly.
        let feasible = {
            let ok = |p: u32| decimal_refine(&value, places, p).is_some();
            let mut lo = 0u32;
            let mut hi = 4 * places + 16;
            debug_assert!(!ok(hi));
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        Ok(CertifiedReal::Decimal(DecimalReal { value, places, text: t.to_string(), feasible_bits: feasible }))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CertifiedReal::Rational(_) => "rational",
            CertifiedReal::Algebraic(_) => "algebraic",
            CertifiedReal::Decimal(_) => "decimal",
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, CertifiedReal::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            CertifiedReal::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Algebraic degree used for the comparison stall bound (decimals count
    /// as degree one).
    fn degree(&self) -> usize {
        match self {
            CertifiedReal::Algebraic(a) => a.poly.degree(),
            _ => 1,
        }
    }

    /// Maximum precision this value can certify, `None` when unbounded.
    pub fn max_feasible_bits(&self) -> Option<u32> {
        match self {
            CertifiedReal::Decimal(d) => Some(d.feasible_bits),
            _ => None,
        }
    }

    /// Is every downstream result derived from this value precision-limited?
    pub fn precision_limited(&self) -> bool {
        matches!(self, CertifiedReal::Decimal(_))
    }

    /// Stable canonical rendering, used for config hashing and manifests.
    pub fn canonical_text(&self) -> String {
        match self {
            CertifiedReal::Rational(q) => format!("r:{}/{}", q.numer(), q.denom()),
            CertifiedReal::Algebraic(a) => {
                let coeffs: Vec<String> = a.poly.coeffs().iter().map(|c| c.to_string()).collect();
                format!(
                    "a:{}|{}/{}|{}/{}",
                    coeffs.join(","),
                    a.lo.numer(),
                    a.lo.denom(),
                    a.hi.numer(),
                    a.hi.denom()
                )
            }
            CertifiedReal::Decimal(d) => format!("d:{}", d.text),
        }
    }

    /// Refine to an enclosing dyadic interval of width at most `2^(-bits)`.
    pub fn refine(&self, bits: u32) -> Result<DyadicInterval, RealNumError> {
        assert!(bits >= 1, "refine requires at least one bit of precision");
        match self {
            CertifiedReal::Rational(q) => Ok(DyadicInterval::from_rational_hull(q, bits)),
            CertifiedReal::Algebraic(a) => Ok(a.refine(bits)),
            CertifiedReal::Decimal(d) => decimal_refine(&d.value, d.places, bits).ok_or(
                RealNumError::PrecisionExhausted { requested_bits: bits, available_bits: d.feasible_bits },
            ),
        }
    }

    /// Refine as far as the value allows, clamping a decimal to its declared
    /// digits. Returns the interval and whether clamping happened.
    pub fn refine_clamped(&self, bits: u32) -> (DyadicInterval, bool) {
        match self.max_feasible_bits() {
            Some(fb) if fb < bits => (self.refine(fb.max(1)).expect("feasible refine"), true),
            _ => (self.refine(bits).expect("unbounded refine"), false),
        }
    }

    /// Certified three-way comparison of two reals, refining adaptively up to
    /// `cap` bits. `Equal` is returned only when equality is established
    /// exactly (identical rationals, a rational root of the other's minimal
    /// polynomial, or a shared root found by a gcd common-root test after
    /// bisection has stalled for `4 * deg(a) * deg(b)` rounds).
    pub fn certified_cmp(&self, other: &CertifiedReal, cap: u32) -> CmpOutcome {
        if let (CertifiedReal::Rational(a), CertifiedReal::Rational(b)) = (self, other) {
            return match a.cmp(b) {
                std::cmp::Ordering::Less => CmpOutcome::Less,
                std::cmp::Ordering::Greater => CmpOutcome::Greater,
                std::cmp::Ordering::Equal => CmpOutcome::Equal,
            };
        }
        let stall_rounds = 4 * self.degree() * other.degree();
        let mut bits = 32u32;
        let mut rounds = 0usize;
        let mut exact_tested = false;
        loop {
            let (ia, _) = self.refine_clamped(bits);
            let (ib, _) = other.refine_clamped(bits);
            if ia.strictly_less_than(&ib) {
                return CmpOutcome::Less;
            }
            if ib.strictly_less_than(&ia) {
                return CmpOutcome::Greater;
            }
            rounds += 1;
            if !exact_tested && rounds >= stall_rounds {
                exact_tested = true;
                if self.exactly_equal(other) {
                    return CmpOutcome::Equal;
                }
            }
            if bits >= cap {
                if !exact_tested && self.exactly_equal(other) {
                    return CmpOutcome::Equal;
                }
                return CmpOutcome::Undecided;
            }
            bits = (bits * 2).min(cap);
        }
    }

    /// Exact equality decision for rational/algebraic kinds. Decimals denote
    /// intervals, never a unique real, so they are only equal to themselves
    /// structurally.
    fn exactly_equal(&self, other: &CertifiedReal) -> bool {
        match (self, other) {
            (CertifiedReal::Rational(a), CertifiedReal::Rational(b)) => a == b,
            (CertifiedReal::Rational(q), CertifiedReal::Algebraic(a))
            | (CertifiedReal::Algebraic(a), CertifiedReal::Rational(q)) => {
                a.poly.sign_at_rational(q) == 0 && q > &a.lo && q < &a.hi
            }
            (CertifiedReal::Algebraic(a), CertifiedReal::Algebraic(b)) => {
                let g = gcd_rational(&a.poly, &b.poly);
                if g.degree() == 0 {
                    return false;
                }
                let lo = (&a.lo).max(&b.lo).clone();
                let hi = (&a.hi).min(&b.hi).clone();
                if lo >= hi {
                    return false;
                }
                // Endpoints of the overlap may be roots of g; nudge inward by
                // refining both numbers below the overlap width first.
                let mut glo = lo;
                let mut ghi = hi;
                if g.sign_at_rational(&glo) == 0 || g.sign_at_rational(&ghi) == 0 {
                    // A root of g sits on the overlap boundary; shrink using
                    // high-precision enclosures of both numbers.
                    let ia = a.refine(128);
                    let ib = b.refine(128);
                    glo = ia.lo_rational().min(ib.lo_rational());
                    ghi = ia.hi_rational().max(ib.hi_rational());
                    if g.sign_at_rational(&glo) == 0 || g.sign_at_rational(&ghi) == 0 {
                        return false;
                    }
                }
                g.count_roots_between(&glo, &ghi) >= 1
            }
            (CertifiedReal::Decimal(a), CertifiedReal::Decimal(b)) => {
                a.text == b.text && a.places == b.places
            }
            _ => false,
        }
    }
}

impl AlgebraicReal {
    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn isolating_interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }
}

impl DecimalReal {
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn places(&self) -> u32 {
        self.places
    }
}

impl AlgebraicReal {
    /// Sign-preserving bisection down to width `2^(-bits)`.
    ///
    /// The rational isolating interval is first pinched to a dyadic bracket
    /// (which keeps all midpoints dyadic and polynomial sign evaluations
    /// cheap), then bisected. Deterministic for a fixed value, and deeper
    /// targets extend the same bisection path, so refinements are nested.
    fn refine(&self, bits: u32) -> DyadicInterval {
        let slo = self.poly.sign_at_rational(&self.lo);
        // Find a dyadic bracket inside (lo, hi) preserving the sign change.
        let mut scale = 4u32;
        let (mut lo_m, mut hi_m, mut cur) = loop {
            let lo_c = DyadicInterval::from_rational_hull(&self.lo, scale);
            let hi_c = DyadicInterval::from_rational_hull(&self.hi, scale);
            let lo_m = lo_c.hi_mantissa().clone(); // >= lo
            let hi_m = hi_c.lo_mantissa().clone(); // <= hi
            if lo_m < hi_m {
                let sl = self.poly.sign_at_dyadic(&lo_m, scale);
                let sh = self.poly.sign_at_dyadic(&hi_m, scale);
                if sl == 0 {
                    return DyadicInterval::point(lo_m, scale);
                }
                if sh == 0 {
                    return DyadicInterval::point(hi_m, scale);
                }
                if sl == slo && sh != slo {
                    break (lo_m, hi_m, scale);
                }
            }
            scale += 8;
        };
        // Bisect: mantissas live at scale `cur`, doubling each split.
        while {
            let width_ok = if cur >= bits {
                (&hi_m - &lo_m) <= (BigInt::one() << (cur - bits))
            } else {
                false
            };
            !width_ok
        } {
            lo_m <<= 1;
            hi_m <<= 1;
            cur += 1;
            let mid = (&lo_m + &hi_m) >> 1;
            match self.poly.sign_at_dyadic(&mid, cur) {
                0 => return DyadicInterval::point(mid, cur),
                s if s == slo => lo_m = mid,
                _ => hi_m = mid,
            }
        }
        DyadicInterval::new(lo_m, hi_m, cur)
    }
}

/// Guard bits used when hulling a decimal's rational interval, so the check
/// `width <= 2^(-bits)` is driven by the declared error and not by rounding.
const DECIMAL_GUARD_BITS: u32 = 8;

fn decimal_refine(value: &BigRational, places: u32, bits: u32) -> Option<DyadicInterval> {
    let err = BigRational::new(BigInt::one(), BigInt::from(10).pow(places));
    let lo = value - &err;
    let hi = value + &err;
    let hull = DyadicInterval::from_rational_bounds(&lo, &hi, bits + DECIMAL_GUARD_BITS);
    if hull.width_le_pow2(bits) {
        Some(hull)
    } else {
        None
    }
}

/// Result of resolving the nearest integer of an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NearestInt {
    /// Unique nearest integer `k`; `offset = -k` satisfies `|v + offset| = dist`.
    Unique { offset: BigInt, dist: DyadicInterval },
    /// The interval straddles a half-integer at this resolution.
    Ambiguous,
}

/// Nearest integer of `m * 2^(-bits)` under the round-half-up rule: ties at
/// `k + 1/2` resolve to `k + 1`. Fixed so outputs are deterministic; for
/// matrices satisfying the usual independence hypothesis the tie is
/// unreachable.
fn round_half_up(m: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        m.clone()
    } else {
        (m + (BigInt::one() << (bits - 1))) >> bits
    }
}

/// Certified distance to the nearest integer, with the integer offset.
pub fn nearest_int_dist(v: &DyadicInterval) -> NearestInt {
    let bits = v.bits();
    let k_lo = round_half_up(v.lo_mantissa(), bits);
    let k_hi = round_half_up(v.hi_mantissa(), bits);
    if k_lo != k_hi {
        return NearestInt::Ambiguous;
    }
    let shifted = &k_lo << bits;
    let dlo = v.lo_mantissa() - &shifted;
    let dhi = v.hi_mantissa() - &shifted;
    let dist = DyadicInterval::new(dlo, dhi, bits).abs();
    NearestInt::Unique { offset: -k_lo, dist }
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOutcome {
    Less,
    Greater,
    Equal,
    Undecided,
}

/// Compare two certified quantities through refinement callbacks.
///
/// The callbacks reproduce each side at a requested precision; a side that
/// runs out of precision (a decimal-backed quantity) keeps its last interval.
/// Returns `Less`/`Greater` on strict separation, `Equal` only when both
/// sides are exact points and identical, and `Undecided` once `cap` bits have
/// been spent without a decision.
pub fn certified_compare<FA, FB>(
    a0: DyadicInterval,
    b0: DyadicInterval,
    mut refine_a: FA,
    mut refine_b: FB,
    cap: u32,
) -> CmpOutcome
where
    FA: FnMut(u32) -> Result<DyadicInterval, RealNumError>,
    FB: FnMut(u32) -> Result<DyadicInterval, RealNumError>,
{
    let mut a = a0;
    let mut b = b0;
    let mut a_saturated = false;
    let mut b_saturated = false;
    let mut bits = 64u32;
    loop {
        if a.strictly_less_than(&b) {
            return CmpOutcome::Less;
        }
        if b.strictly_less_than(&a) {
            return CmpOutcome::Greater;
        }
        if a.is_point() && b.is_point() && a.lo_rational() == b.lo_rational() {
            return CmpOutcome::Equal;
        }
        if bits > cap || (a_saturated && b_saturated) {
            return CmpOutcome::Undecided;
        }
        if !a_saturated {
            match refine_a(bits) {
                Ok(ia) => a = ia,
                Err(RealNumError::PrecisionExhausted { .. }) => a_saturated = true,
                Err(_) => return CmpOutcome::Undecided,
            }
        }
        if !b_saturated {
            match refine_b(bits) {
                Ok(ib) => b = ib,
                Err(RealNumError::PrecisionExhausted { .. }) => b_saturated = true,
                Err(_) => return CmpOutcome::Undecided,
            }
        }
        if bits == cap {
            bits += 1; // one final check at cap, then bail out
        } else {
            bits = (bits * 2).min(cap);
        }
    }
}
