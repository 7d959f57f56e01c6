//! Dyadic interval arithmetic: closed intervals with endpoints `mantissa * 2^(-bits)`.
//!
//! Every certified quantity in the pipeline (refined constants, form values,
//! nearest-integer distances, bound functions) is carried as one of these
//! intervals. Addition, subtraction and multiplication are exact; rounding
//! only ever happens outward, so an interval always encloses the value it
//! certifies.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Closed interval `[lo, hi] * 2^(-bits)` with integer mantissas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

/// Shift a mantissa from scale `from` to scale `to`, rounding toward -inf.
fn mantissa_floor(m: &BigInt, from: u32, to: u32) -> BigInt {
    if to >= from {
        m << (to - from)
    } else {
        m >> (from - to) // BigInt shr rounds toward -inf
    }
}

/// Shift a mantissa from scale `from` to scale `to`, rounding toward +inf.
fn mantissa_ceil(m: &BigInt, from: u32, to: u32) -> BigInt {
    if to >= from {
        m << (to - from)
    } else {
        -(&(-m) >> (from - to))
    }
}

impl DyadicInterval {
    pub fn new(lo: BigInt, hi: BigInt, bits: u32) -> Self {
        assert!(lo <= hi, "dyadic interval endpoints out of order");
        Self { lo, hi, bits }
    }

    pub fn point(v: BigInt, bits: u32) -> Self {
        Self { lo: v.clone(), hi: v, bits }
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(BigInt::from(v), 0)
    }

    pub fn zero() -> Self {
        Self::point(BigInt::zero(), 0)
    }

    /// Tight outward hull of a rational at scale `2^(-bits)`.
    pub fn from_rational_hull(q: &BigRational, bits: u32) -> Self {
        let scaled = q.numer() << bits;
        let lo = scaled.div_floor(q.denom());
        let hi = scaled.div_ceil(q.denom());
        Self { lo, hi, bits }
    }

    /// Hull of a rational interval `[a, b]` at scale `2^(-bits)`.
    pub fn from_rational_bounds(a: &BigRational, b: &BigRational, bits: u32) -> Self {
        assert!(a <= b);
        let lo = (a.numer() << bits).div_floor(a.denom());
        let hi = (b.numer() << bits).div_ceil(b.denom());
        Self { lo, hi, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo_mantissa(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_mantissa(&self) -> &BigInt {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::from(1) << self.bits)
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::from(1) << self.bits)
    }

    pub fn midpoint_rational(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, BigInt::from(1) << (self.bits + 1))
    }

    /// True width as a rational.
    pub fn width_rational(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::from(1) << self.bits)
    }

    /// Does the interval have width at most `2^(-target)`?
    pub fn width_le_pow2(&self, target: u32) -> bool {
        let diff = &self.hi - &self.lo;
        if self.bits >= target {
            diff <= (BigInt::from(1) << (self.bits - target))
        } else {
            diff.is_zero()
        }
    }

    /// Rewrite both operands at a common scale (the finer of the two).
    fn aligned(&self, other: &Self) -> (BigInt, BigInt, BigInt, BigInt, u32) {
        let bits = self.bits.max(other.bits);
        (
            mantissa_floor(&self.lo, self.bits, bits),
            mantissa_floor(&self.hi, self.bits, bits),
            mantissa_floor(&other.lo, other.bits, bits),
            mantissa_floor(&other.hi, other.bits, bits),
            bits,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (alo, ahi, blo, bhi, bits) = self.aligned(other);
        Self { lo: alo + blo, hi: ahi + bhi, bits }
    }

    pub fn neg(&self) -> Self {
        Self { lo: -&self.hi, hi: -&self.lo, bits: self.bits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = (-&self.lo).max(self.hi.clone());
            Self { lo: BigInt::zero(), hi, bits: self.bits }
        }
    }

    pub fn mul_int(&self, c: &BigInt) -> Self {
        if c.is_negative() {
            Self { lo: &self.hi * c, hi: &self.lo * c, bits: self.bits }
        } else {
            Self { lo: &self.lo * c, hi: &self.hi * c, bits: self.bits }
        }
    }

    /// Exact interval product (scales add).
    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Self { lo, hi, bits: self.bits + other.bits }
    }

    /// Outward rounding to scale `2^(-bits)`.
    pub fn hull_at(&self, bits: u32) -> Self {
        Self {
            lo: mantissa_floor(&self.lo, self.bits, bits),
            hi: mantissa_ceil(&self.hi, self.bits, bits),
            bits,
        }
    }

    /// `self` entirely below `other` (strict separation).
    pub fn strictly_less_than(&self, other: &Self) -> bool {
        let (_, ahi, blo, _, _) = self.aligned(other);
        ahi < blo
    }

    /// Set containment after alignment.
    pub fn contains_interval(&self, inner: &Self) -> bool {
        let (alo, ahi, blo, bhi, _) = self.aligned(inner);
        alo <= blo && bhi <= ahi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo_rational() <= q && q <= &self.hi_rational()
    }

    /// Strip shared factors of two from the scale. Canonical form for storage.
    pub fn canonical_reduce(&self) -> Self {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        let mut bits = self.bits;
        while bits > 0 && lo.is_even() && hi.is_even() {
            lo >>= 1;
            hi >>= 1;
            bits -= 1;
        }
        Self { lo, hi, bits }
    }

    pub fn to_f64_lo(&self) -> f64 {
        mantissa_to_f64(&self.lo, self.bits)
    }

    pub fn to_f64_hi(&self) -> f64 {
        mantissa_to_f64(&self.hi, self.bits)
    }

    pub fn to_f64_mid(&self) -> f64 {
        mantissa_to_f64(&(&self.lo + &self.hi), self.bits + 1)
    }

    /// Exact decimal rendering of the lower endpoint.
    pub fn decimal_lo(&self) -> String {
        dyadic_to_decimal(&self.lo, self.bits)
    }

    /// Exact decimal rendering of the upper endpoint.
    pub fn decimal_hi(&self) -> String {
        dyadic_to_decimal(&self.hi, self.bits)
    }

    /// Rebuild an interval from two exact decimal endpoints.
    pub fn from_decimals(lo: &str, hi: &str) -> Result<Self, String> {
        let (mlo, blo) = decimal_to_dyadic(lo)?;
        let (mhi, bhi) = decimal_to_dyadic(hi)?;
        let bits = blo.max(bhi);
        let lo = mantissa_floor(&mlo, blo, bits);
        let hi = mantissa_floor(&mhi, bhi, bits);
        if lo > hi {
            return Err("interval endpoints out of order".into());
        }
        Ok(Self { lo, hi, bits })
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.decimal_lo(), self.decimal_hi())
    }
}

/// `mantissa * 2^(-bits)` as f64, safe against huge mantissas.
pub fn mantissa_to_f64(m: &BigInt, bits: u32) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let bl = m.bits();
    let shift = bl.saturating_sub(53);
    let top = (m >> shift).to_f64().unwrap_or(0.0);
    let exp = shift as i64 - bits as i64;
    if exp > 1023 {
        return if m.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    if exp < -1100 {
        return 0.0;
    }
    top * (exp as f64).exp2()
}

/// Natural log bounds of a positive dyadic `m * 2^(-bits)`; accurate to ~1 ulp
/// past the f64 mantissa, which is far below every tolerance used downstream.
pub fn mantissa_ln(m: &BigInt, bits: u32) -> f64 {
    assert!(m.is_positive(), "log of non-positive dyadic");
    let bl = m.bits();
    let shift = bl.saturating_sub(53);
    let top = (m >> shift).to_f64().unwrap();
    top.ln() + (shift as f64 - bits as f64) * std::f64::consts::LN_2
}

/// Exact decimal string of `m * 2^(-bits)`.
fn dyadic_to_decimal(m: &BigInt, bits: u32) -> String {
    // Reduce so the fractional part has no trailing zeros.
    let mut m = m.clone();
    let mut bits = bits;
    if m.is_zero() {
        return "0".to_string();
    }
    while bits > 0 && m.is_even() {
        m >>= 1;
        bits -= 1;
    }
    let negative = m.is_negative();
    let scaled = m.abs() * BigInt::from(5).pow(bits); // |m|/2^bits = scaled/10^bits
    let digits = scaled.to_string();
    let body = if bits == 0 {
        digits
    } else {
        let frac_len = bits as usize;
        let padded = if digits.len() <= frac_len {
            format!("{}{}", "0".repeat(frac_len + 1 - digits.len()), digits)
        } else {
            digits
        };
        let split = padded.len() - frac_len;
        format!("{}.{}", &padded[..split], &padded[split..])
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Parse an exact decimal produced by `dyadic_to_decimal`.
fn decimal_to_dyadic(s: &str) -> Result<(BigInt, u32), String> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("empty decimal literal {s:?}"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("bad decimal literal {s:?}"));
    }
    let k = frac_part.len() as u32;
    let num: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|e| format!("bad decimal literal {s:?}: {e}"))?;
    // num / 10^k must be dyadic: num divisible by 5^k.
    let five_k = BigInt::from(5).pow(k);
    let (mant, rem) = num.div_rem(&five_k);
    if !rem.is_zero() {
        return Err(format!("decimal {s:?} is not an exact dyadic value"));
    }
    Ok((if negative { -mant } else { mant }, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn di(lo: i64, hi: i64, bits: u32) -> DyadicInterval {
        DyadicInterval::new(BigInt::from(lo), BigInt::from(hi), bits)
    }

    #[test]
    fn bigint_shr_is_floor() {
        // The rounding of all outward hulls rests on this.
        assert_eq!(BigInt::from(-5) >> 1, BigInt::from(-3));
        assert_eq!(BigInt::from(5) >> 1, BigInt::from(2));
        assert_eq!(BigInt::from(-4) >> 2, BigInt::from(-1));
    }

    #[test]
    fn rational_hull_width() {
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        for bits in [1u32, 7, 64, 200] {
            let h = DyadicInterval::from_rational_hull(&third, bits);
            assert!(h.contains_rational(&third));
            assert!(h.width_le_pow2(bits));
        }
        // exactly representable rational collapses to a point
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let h = DyadicInterval::from_rational_hull(&half, 10);
        assert!(h.is_point());
    }

    #[test]
    fn arithmetic_identities() {
        let a = di(3, 5, 2); // [0.75, 1.25]
        let b = di(-1, 1, 1); // [-0.5, 0.5]
        let sum = a.add(&b);
        assert_eq!(sum, di(1, 7, 2));
        let prod = a.mul(&b);
        assert_eq!(prod, di(-5, 5, 3));
        assert_eq!(a.sub(&a).abs().lo_mantissa(), &BigInt::zero());
    }

    #[test]
    fn hull_is_outward_and_nested() {
        let x = di(27, 29, 5);
        let coarse = x.hull_at(3);
        assert!(coarse.contains_interval(&x));
        let finer = x.hull_at(9);
        assert!(finer.contains_interval(&x));
    }

    #[test]
    fn decimal_round_trip() {
        for (lo, hi, bits) in [(3i64, 5, 2), (-7, -3, 4), (0, 0, 0), (1, 1, 20), (-1, 3, 1)] {
            let x = di(lo, hi, bits);
            let back =
                DyadicInterval::from_decimals(&x.decimal_lo(), &x.decimal_hi()).unwrap();
            assert_eq!(back.lo_rational(), x.lo_rational());
            assert_eq!(back.hi_rational(), x.hi_rational());
            // canonical: re-rendering the parsed value gives the same strings
            assert_eq!(back.decimal_lo(), x.decimal_lo());
            assert_eq!(back.decimal_hi(), x.decimal_hi());
        }
        assert_eq!(di(1, 1, 1).decimal_lo(), "0.5");
        assert_eq!(di(-3, -3, 2).decimal_hi(), "-0.75");
        assert!(DyadicInterval::from_decimals("0.3", "0.4").is_err()); // not dyadic
    }

    #[test]
    fn f64_conversion_handles_large_scales() {
        // value ~ 1e-3 stored at 4096 fractional bits
        let third_ish = BigRational::new(BigInt::one(), BigInt::from(1000));
        let x = DyadicInterval::from_rational_hull(&third_ish, 4096);
        assert!((x.to_f64_mid() - 1e-3).abs() < 1e-12);
        let l = mantissa_ln(x.hi_mantissa(), x.bits());
        assert!((l - (-3.0 * std::f64::consts::LN_10)).abs() < 1e-9);
    }
}
