//! Integer polynomials with just enough machinery for real root isolation:
//! exact sign evaluation at rationals and dyadics, derivatives, and Sturm
//! chains for counting real roots in an interval.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Dense polynomial with BigInt coefficients, ascending powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

fn sign_big(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_rat(v: &BigRational) -> i8 {
    sign_big(v.numer())
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Sign of `f(p/q)` via the integer form `sum c_i p^i q^(d-i)`.
    pub fn sign_at_rational(&self, x: &BigRational) -> i8 {
        if self.coeffs.is_empty() {
            return 0;
        }
        let p = x.numer();
        let q = x.denom();
        let mut acc = self.coeffs.last().unwrap().clone();
        let mut qpow = BigInt::from(1);
        for c in self.coeffs.iter().rev().skip(1) {
            qpow *= q;
            acc = acc * p + c * &qpow;
        }
        sign_big(&acc)
    }

    /// Sign of `f(m * 2^(-bits))` via the integer form `sum c_i m^i 2^(bits(d-i))`.
    pub fn sign_at_dyadic(&self, m: &BigInt, bits: u32) -> i8 {
        if self.coeffs.is_empty() {
            return 0;
        }
        let mut acc = self.coeffs.last().unwrap().clone();
        let mut shift = 0u64;
        for c in self.coeffs.iter().rev().skip(1) {
            shift += bits as u64;
            acc = acc * m + (c << shift);
        }
        sign_big(&acc)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::new(vec![]);
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    /// Requires nonzero values at both endpoints.
    pub fn count_roots_between(&self, lo: &BigRational, hi: &BigRational) -> usize {
        assert!(lo < hi);
        let sf = self.squarefree_part();
        assert!(
            sf.sign_at_rational(lo) != 0 && sf.sign_at_rational(hi) != 0,
            "root counting requires nonzero endpoint values"
        );
        let chain = sturm_chain(&sf);
        let va = sign_variations(&chain, lo);
        let vb = sign_variations(&chain, hi);
        va - vb
    }

    /// `self / gcd(self, self')`, normalized to integer coefficients.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.is_zero() || self.degree() == 0 {
            return self.clone();
        }
        let g = gcd_rational(self, &self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        let q = qpoly_div(&to_q(self), &to_q(&g)).0;
        from_q(&q)
    }
}

type QPoly = Vec<BigRational>;

fn to_q(p: &IntPoly) -> QPoly {
    p.coeffs.iter().map(|c| BigRational::from(c.clone())).collect()
}

fn from_q(p: &QPoly) -> IntPoly {
    // Clear denominators, divide out integer content.
    let mut lcm = BigInt::from(1);
    for c in p {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let mut ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from(lcm.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = num_integer::gcd(content, c.clone());
    }
    if !content.is_zero() {
        for c in &mut ints {
            *c /= &content;
        }
    }
    if ints.last().is_some_and(Signed::is_negative) {
        for c in &mut ints {
            *c = -&*c;
        }
    }
    IntPoly::new(ints)
}

fn qtrim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn qpoly_div(num: &QPoly, den: &QPoly) -> (QPoly, QPoly) {
    assert!(!den.is_empty());
    let mut rem = num.clone();
    qtrim(&mut rem);
    let dd = den.len() - 1;
    let lead = den.last().unwrap();
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = rem.last().unwrap() / lead;
        for i in 0..=dd {
            let sub = &den[i] * &c;
            rem[k + i] -= sub;
        }
        quot[k] = c;
        qtrim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    (quot, rem)
}

/// Polynomial gcd over the rationals, returned as a primitive integer poly.
pub fn gcd_rational(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut f = to_q(a);
    let mut g = to_q(b);
    qtrim(&mut f);
    qtrim(&mut g);
    while !g.is_empty() {
        let (_, r) = qpoly_div(&f, &g);
        f = g;
        g = r;
    }
    from_q(&f)
}

fn sturm_chain(p: &IntPoly) -> Vec<QPoly> {
    let mut chain = vec![to_q(p), to_q(&p.derivative())];
    qtrim(&mut chain[1]);
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = qpoly_div(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
    chain
}

fn eval_q(p: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn sign_variations(chain: &[QPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let s = sign_rat(&eval_q(p, x));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sign_evaluation() {
        let p = IntPoly::from_i64(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(p.sign_at_rational(&q(1, 1)), -1);
        assert_eq!(p.sign_at_rational(&q(3, 2)), 1);
        assert_eq!(p.sign_at_rational(&q(7, 5)), -1); // 49/25 < 2
        assert_eq!(p.sign_at_dyadic(&BigInt::from(11), 3), -1); // (11/8)^2 < 2
        assert_eq!(p.sign_at_dyadic(&BigInt::from(12), 3), 1); // (3/2)^2 > 2
        let lin = IntPoly::from_i64(&[-1, 2]); // 2x - 1
        assert_eq!(lin.sign_at_rational(&q(1, 2)), 0);
    }

    #[test]
    fn root_counting() {
        let p = IntPoly::from_i64(&[-2, 0, 1]); // roots +-sqrt(2)
        assert_eq!(p.count_roots_between(&q(1, 1), &q(2, 1)), 1);
        assert_eq!(p.count_roots_between(&q(-2, 1), &q(2, 1)), 2);
        assert_eq!(p.count_roots_between(&q(2, 1), &q(3, 1)), 0);
        // quartic with two real roots
        let quartic = IntPoly::from_i64(&[-1, -1, 0, 0, 1]); // x^4 - x - 1
        assert_eq!(quartic.count_roots_between(&q(1, 1), &q(2, 1)), 1);
        assert_eq!(quartic.count_roots_between(&q(-1, 1), &q(0, 1)), 1);
        assert_eq!(quartic.count_roots_between(&q(-10, 1), &q(10, 1)), 2);
        // repeated root handled through the squarefree part
        let sq = IntPoly::from_i64(&[1, -2, 1]); // (x-1)^2
        assert_eq!(sq.count_roots_between(&q(0, 1), &q(2, 1)), 1);
    }

    #[test]
    fn unique_real_root_of_depressed_cubic() {
        let cubic = IntPoly::from_i64(&[-1, 2, -1, 1]); // x^3 - x^2 + 2x - 1
        assert_eq!(cubic.count_roots_between(&q(0, 1), &q(1, 1)), 1);
        assert_eq!(cubic.count_roots_between(&q(-100, 1), &q(100, 1)), 1);
    }

    #[test]
    fn gcd_detects_common_roots() {
        // (x^2 - 2)(x - 3) and (x^2 - 2)(x + 5) share x^2 - 2
        let a = IntPoly::from_i64(&[6, -2, -3, 1]);
        let b = IntPoly::from_i64(&[-10, -2, 5, 1]);
        let g = gcd_rational(&a, &b);
        assert_eq!(g, IntPoly::from_i64(&[-2, 0, 1]));
    }
}
