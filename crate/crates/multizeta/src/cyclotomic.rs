//! Cyclotomic field arithmetic: Q(zeta_N) as Q[X]/(Phi_N).
//!
//! Phi_N is computed by iterated exact division
//! Phi_N = (X^N - 1) / prod_{d|N, d<N} Phi_d, so no factorization machinery
//! is involved. Elements are polynomial residues with `Rational`
//! coefficients in the power basis 1, zeta, ..., zeta^(phi(N)-1).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The N-th cyclotomic field. Shared behind an `Arc`; obtain via [`CycField::get`].
pub struct CycField {
    n: u32,
    /// Phi_N, monic, integer coefficients, ascending degree.
    phi: Vec<BigInt>,
    degree: usize,
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycField>>>> = OnceLock::new();

impl CycField {
    pub fn get(n: u32) -> Arc<CycField> {
        assert!(n >= 1, "conductor must be positive");
        let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = map.lock().unwrap();
        map.entry(n)
            .or_insert_with(|| {
                let phi = cyclotomic_polynomial(n);
                let degree = phi.len() - 1;
                Arc::new(CycField { n, phi, degree })
            })
            .clone()
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn phi_coeffs(&self) -> &[BigInt] {
        &self.phi
    }

    pub fn zero(self: &Arc<Self>) -> CycNum {
        CycNum {
            field: self.clone(),
            coeffs: vec![Rational::zero(); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycNum {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> CycNum {
        let mut coeffs = vec![Rational::zero(); self.degree];
        coeffs[0] = q;
        CycNum {
            field: self.clone(),
            coeffs,
        }
    }

    /// zeta_N^k for any integer exponent k (taken mod N).
    pub fn root(self: &Arc<Self>, k: i64) -> CycNum {
        let e = k.rem_euclid(self.n as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        CycNum {
            field: self.clone(),
            coeffs: reduce_mod_phi(poly, &self.phi, self.degree),
        }
    }

    /// A root of unity of order d | N at exponent a: zeta_N^(a N/d).
    pub fn root_of_order(self: &Arc<Self>, d: u32, a: i64) -> CycNum {
        assert!(d >= 1 && self.n % d == 0, "order {d} does not divide {}", self.n);
        self.root(a * (self.n / d) as i64)
    }
}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.n)
    }
}

/// Phi_n as ascending integer coefficients, by iterated exact division.
/// Self-contained recursion (no detour through the field cache, which may be
/// locked by the caller).
fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    fn compute(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        // X^n - 1
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::from(1);
        for d in 1..n {
            if n % d == 0 {
                let phi_d = compute(d, memo);
                num = int_poly_div_exact(&num, &phi_d);
            }
        }
        memo.insert(n, num.clone());
        num
    }
    compute(n, &mut HashMap::new())
}

/// Exact division of integer polynomials; `den` must be monic and divide exactly.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c == &BigInt::from(1)).unwrap_or(false));
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let out_len = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); out_len];
    for i in (0..out_len).rev() {
        let c = rem[i + dd].clone();
        if !c.is_zero() {
            quot[i] = c.clone();
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

fn reduce_mod_phi(mut poly: Vec<Rational>, phi: &[BigInt], degree: usize) -> Vec<Rational> {
    let dd = phi.len() - 1;
    while poly.len() > dd {
        let lead = poly.pop().unwrap();
        if !lead.is_zero() {
            let offset = poly.len() - dd;
            for (j, pc) in phi.iter().take(dd).enumerate() {
                let sub = &lead * &Rational::from_int(pc.clone());
                poly[offset + j] = &poly[offset + j] - &sub;
            }
        }
    }
    poly.resize(degree, Rational::zero());
    poly
}

/// An element of Q(zeta_N) in the power basis.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CycField>,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Rationality test: all coefficients above the constant term vanish.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn assert_same_field(&self, other: &CycNum) {
        assert_eq!(
            self.field.n, other.field.n,
            "mixed cyclotomic fields Q(zeta_{}) and Q(zeta_{})",
            self.field.n, other.field.n
        );
    }

    pub fn mul(&self, other: &CycNum) -> CycNum {
        self.assert_same_field(other);
        let d = self.field.degree;
        let mut prod = vec![Rational::zero(); 2 * d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        CycNum {
            field: self.field.clone(),
            coeffs: reduce_mod_phi(prod, &self.field.phi, d),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[X].
    pub fn invert(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::ZeroInversion);
        }
        // Run xgcd on (Phi_N, a): maintain r = t * a (mod Phi_N).
        let phi: Vec<Rational> = self
            .field
            .phi
            .iter()
            .map(|c| Rational::from_int(c.clone()))
            .collect();
        let mut r0 = phi;
        let mut r1 = trim(self.coeffs.clone());
        let mut t0 = vec![];
        let mut t1 = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, rem) = rat_poly_divmod(&r0, &r1);
            let t2 = rat_poly_sub(&t0, &rat_poly_mul(&q, &t1));
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        // r0 is the gcd; Phi_N irreducible and a != 0 force deg(r0) = 0.
        assert_eq!(r0.len(), 1, "cyclotomic inversion hit a nontrivial gcd");
        let scale = r0[0].recip();
        let coeffs: Vec<Rational> = t0.iter().map(|c| c * &scale).collect();
        Ok(CycNum {
            field: self.field.clone(),
            coeffs: reduce_mod_phi(coeffs, &self.field.phi, self.field.degree),
        })
    }

    pub fn pow(&self, exp: i64) -> Result<CycNum> {
        if exp == 0 {
            return Ok(self.field.one());
        }
        let base = if exp < 0 { self.invert()? } else { self.clone() };
        let mut acc = self.field.one();
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn rat_poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = den.len() - 1;
    let lead_inv = den[dd].recip();
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return (vec![], trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] * &lead_inv;
        if !c.is_zero() {
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dc);
            }
        }
        quot[i] = c;
    }
    (trim(quot), trim(rem))
}

fn rat_poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

fn rat_poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = &out[i] - y;
    }
    trim(out)
}

impl std::ops::Add<&CycNum> for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.assert_same_field(rhs);
        CycNum {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub<&CycNum> for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.assert_same_field(rhs);
        CycNum {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.coeffs == other.coeffs
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum(N={}; {:?})", self.field.n, self.coeffs)
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CycNum", 2)?;
        s.serialize_field("N", &self.field.n)?;
        s.serialize_field("coeffs", &self.coeffs)?;
        s.end()
    }
}

/// Inverse in Q[X]/(Phi_N); the operation behind 1/(1-xi) factors.
pub fn cyclotomic_invert(a: &CycNum) -> Result<CycNum> {
    a.invert()
}
