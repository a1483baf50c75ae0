//! Sparse multivariate power series truncated at per-variable degree caps.
//!
//! Exponents above the caps are discarded; everything retained is exact.
//! Coefficients are any [`Scalar`] (rationals or cyclotomic numbers).

use std::collections::BTreeMap;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// The minimal ring interface the series engine needs.
pub trait Scalar: Clone {
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    /// Multiply by a rational (series machinery produces factorial weights).
    fn times_rational(&self, q: &Rational) -> Self;
    fn is_zero(&self) -> bool;
}

impl Scalar for Rational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_rational(&self, q: &Rational) -> Self {
        self * q
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl Scalar for CycNum {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn times_rational(&self, q: &Rational) -> Self {
        self.scale(q)
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
}

#[derive(Clone, Debug)]
pub struct TruncSeries<T: Scalar> {
    caps: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> TruncSeries<T> {
    pub fn new(caps: Vec<u32>) -> Self {
        TruncSeries {
            caps,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(caps: Vec<u32>, value: T) -> Self {
        let mut s = TruncSeries::new(caps);
        let e = vec![0; s.nvars()];
        s.add_term(&e, value);
        s
    }

    pub fn nvars(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&T> {
        self.coeffs.get(exps)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.coeffs.iter()
    }

    pub fn within_caps(&self, exps: &[u32]) -> bool {
        exps.len() == self.caps.len() && exps.iter().zip(&self.caps).all(|(e, c)| e <= c)
    }

    /// Adds `value` onto the coefficient at `exps`; silently drops exponents
    /// above the caps (that is the truncation contract).
    pub fn add_term(&mut self, exps: &[u32], value: T) {
        if !self.within_caps(exps) {
            return;
        }
        if value.is_zero() {
            return;
        }
        match self.coeffs.get_mut(exps) {
            Some(c) => {
                let sum = c.plus(&value);
                if sum.is_zero() {
                    self.coeffs.remove(exps);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.coeffs.insert(exps.to_vec(), value);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.caps != other.caps {
            return Err(Error::CapMismatch);
        }
        let mut out = self.clone();
        for (e, v) in other.coeffs.iter() {
            out.add_term(e, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = TruncSeries::new(self.caps.clone());
        if q.is_zero() {
            return out;
        }
        for (e, v) in self.coeffs.iter() {
            out.add_term(e, v.times_rational(q));
        }
        out
    }

    /// Exact product; exponents exceeding the caps are discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.caps != other.caps {
            return Err(Error::CapMismatch);
        }
        let mut out = TruncSeries::new(self.caps.clone());
        let mut sum_exps = vec![0u32; self.nvars()];
        for (ea, va) in self.coeffs.iter() {
            for (eb, vb) in other.coeffs.iter() {
                let mut ok = true;
                for i in 0..sum_exps.len() {
                    let s = ea[i] + eb[i];
                    if s > self.caps[i] {
                        ok = false;
                        break;
                    }
                    sum_exps[i] = s;
                }
                if ok {
                    out.add_term(&sum_exps, va.times(vb));
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar + PartialEq> PartialEq for TruncSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.caps == other.caps && self.coeffs == other.coeffs
    }
}

/// Free function mirror of [`TruncSeries::mul`].
pub fn series_mul<T: Scalar>(a: &TruncSeries<T>, b: &TruncSeries<T>) -> Result<TruncSeries<T>> {
    a.mul(b)
}

/// Expands f(gamma * (t_slot + ... + t_{r-1})) into a truncated series, where
/// `uni[m]` is the coefficient of y^m in f(y). Substitution is performed by
/// multinomial expansion directly into the sparse map.
pub fn expand_tail_substitution<T: Scalar>(
    uni: &[T],
    gamma: &Rational,
    slot: usize,
    caps: &[u32],
) -> TruncSeries<T> {
    let r = caps.len();
    assert!(slot < r);
    let mut out = TruncSeries::new(caps.to_vec());
    let tail_caps: Vec<u32> = caps[slot..].to_vec();
    let mut exps = vec![0u32; r];
    for (m, u) in uni.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        let gpow = gamma.pow(m as i64);
        // all compositions (nu_slot..nu_{r-1}) of m within the tail caps
        let mut comp = vec![0u32; r - slot];
        compositions(m as u32, &tail_caps, &mut comp, 0, &mut |comp| {
            let mut weight = gpow.clone(); // gamma^m * m! / prod nu_i!
            weight = weight * Rational::from_int(crate::bernoulli::factorial(m as u32));
            for &nu in comp.iter() {
                weight = weight / Rational::from_int(crate::bernoulli::factorial(nu));
            }
            exps[..slot].fill(0);
            exps[slot..].copy_from_slice(comp);
            out.add_term(&exps, u.times_rational(&weight));
        });
    }
    out
}

/// Coefficient at `n` of prod_j f_j(gamma_j (t_j+...+t_r)), where `uni[j]`
/// lists the y-coefficients of f_j. Same arithmetic as folding
/// [`TruncSeries::mul`] over the tail-substituted factors, except that after
/// factor j is absorbed the exponents of t_1..t_j are final, so partial
/// products are pruned to the target prefix as the fold advances.
pub fn tail_product_coeff<T: Scalar>(uni: &[&[T]], gammas: &[Rational], n: &[u32]) -> Option<T> {
    let r = n.len();
    assert_eq!(uni.len(), r);
    assert_eq!(gammas.len(), r);
    let mut acc: Option<TruncSeries<T>> = None;
    for j in 0..r {
        let factor = expand_tail_substitution(uni[j], &gammas[j], j, n);
        let mut next = match acc {
            None => factor,
            Some(p) => p.mul(&factor).expect("matching caps"),
        };
        next.coeffs.retain(|e, _| e[..=j] == n[..=j]);
        acc = Some(next);
    }
    acc.and_then(|s| s.coeff(n).cloned())
}

fn compositions(
    total: u32,
    caps: &[u32],
    comp: &mut [u32],
    idx: usize,
    f: &mut impl FnMut(&[u32]),
) {
    if idx == comp.len() - 1 {
        if total <= caps[idx] {
            comp[idx] = total;
            f(comp);
        }
        return;
    }
    let hi = total.min(caps[idx]);
    for v in 0..=hi {
        comp[idx] = v;
        compositions(total - v, caps, comp, idx + 1, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs(pairs: &[(&[u32], i64)], caps: &[u32]) -> TruncSeries<Rational> {
        let mut s = TruncSeries::new(caps.to_vec());
        for (e, v) in pairs {
            s.add_term(e, Rational::from_int(*v));
        }
        s
    }

    #[test]
    fn product_truncates() {
        // (1+t1)(1+t2) at caps (1,1)
        let a = rs(&[(&[0, 0], 1), (&[1, 0], 1)], &[1, 1]);
        let b = rs(&[(&[0, 0], 1), (&[0, 1], 1)], &[1, 1]);
        let p = a.mul(&b).unwrap();
        for e in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            assert_eq!(p.coeff(&e), Some(&Rational::one()), "at {e:?}");
        }

        // (1+t1)^2 at caps (1,): t1^2 dropped
        let c = rs(&[(&[0], 1), (&[1], 1)], &[1]);
        let sq = c.mul(&c).unwrap();
        assert_eq!(sq.coeff(&[0]), Some(&Rational::one()));
        assert_eq!(sq.coeff(&[1]), Some(&Rational::from_int(2)));
    }

    #[test]
    fn identity_and_mismatch() {
        let a = rs(&[(&[1, 2], 5), (&[0, 1], -3)], &[2, 2]);
        let one = TruncSeries::constant(vec![2, 2], Rational::one());
        assert_eq!(a.mul(&one).unwrap(), a);
        let b = rs(&[(&[0], 1)], &[3]);
        assert_eq!(a.mul(&b).err(), Some(Error::CapMismatch));
    }

    #[test]
    fn tail_substitution_matches_hand_expansion() {
        // f(y) = y with gamma=2, slot 0 of 2 vars: 2(t1+t2)
        let uni = vec![Rational::zero(), Rational::one()];
        let s = expand_tail_substitution(&uni, &Rational::from_int(2), 0, &[2, 2]);
        assert_eq!(s.coeff(&[1, 0]), Some(&Rational::from_int(2)));
        assert_eq!(s.coeff(&[0, 1]), Some(&Rational::from_int(2)));
        // f(y) = y^2: 4(t1+t2)^2 = 4t1^2 + 8t1t2 + 4t2^2
        let uni2 = vec![Rational::zero(), Rational::zero(), Rational::one()];
        let s2 = expand_tail_substitution(&uni2, &Rational::from_int(2), 0, &[2, 2]);
        assert_eq!(s2.coeff(&[2, 0]), Some(&Rational::from_int(4)));
        assert_eq!(s2.coeff(&[1, 1]), Some(&Rational::from_int(8)));
        assert_eq!(s2.coeff(&[0, 2]), Some(&Rational::from_int(4)));
        // slot 1: substitution only involves t2
        let s3 = expand_tail_substitution(&uni, &Rational::one(), 1, &[2, 2]);
        assert_eq!(s3.coeff(&[0, 1]), Some(&Rational::one()));
        assert_eq!(s3.coeff(&[1, 0]), None);
    }

    fn arb_series() -> impl Strategy<Value = TruncSeries<Rational>> {
        proptest::collection::vec(((0u32..=2, 0u32..=2), -4i64..=4), 0..6).prop_map(|terms| {
            let mut s = TruncSeries::new(vec![2, 2]);
            for ((e1, e2), v) in terms {
                s.add_term(&[e1, e2], Rational::from_int(v));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn mul_commutative(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn mul_associative(a in arb_series(), b in arb_series(), c in arb_series()) {
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
