//! Finite-precision p-adic integers (odd p only), the Teichmuller character
//! omega, the principal-unit projection <.>, and rational reduction.
//!
//! A value is residue * p^(-shift) with 0 <= residue < p^precision; the shift
//! is only used transiently for 1/p^d factors. Arithmetic never raises
//! precision: results carry the minimum of the operand precisions (after
//! aligning shifts).

use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::{Integer, One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u32,
    precision: u32,
    residue: BigUint,
    shift: u32,
}

impl PadicInt {
    /// From an integer residue; reduces mod p^precision.
    pub fn new<T: Into<BigInt>>(value: T, p: u32, precision: u32) -> Self {
        assert!(p >= 3 && is_prime(p), "p must be an odd prime (got {p})");
        assert!(precision >= 1);
        let modulus = BigInt::from(pow_u(p, precision));
        let residue = value.into().mod_floor(&modulus);
        PadicInt {
            p,
            precision,
            residue: residue.to_biguint().unwrap(),
            shift: 0,
        }
    }

    pub fn zero(p: u32, precision: u32) -> Self {
        PadicInt::new(0, p, precision)
    }

    pub fn one(p: u32, precision: u32) -> Self {
        PadicInt::new(1, p, precision)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn modulus(&self) -> BigUint {
        pow_u(self.p, self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// Unit test: p does not divide the residue (shift must be 0).
    pub fn is_unit(&self) -> bool {
        self.shift == 0 && !(&self.residue % self.p).is_zero()
    }

    fn align(&self, other: &PadicInt) -> (PadicInt, PadicInt) {
        assert_eq!(self.p, other.p, "mixed primes");
        let shift = self.shift.max(other.shift);
        (self.with_shift(shift), other.with_shift(shift))
    }

    /// Rescales the representation to a larger shift (same value).
    fn with_shift(&self, shift: u32) -> PadicInt {
        assert!(shift >= self.shift);
        if shift == self.shift {
            return self.clone();
        }
        let extra = shift - self.shift;
        let m = self.modulus();
        let res = (&self.residue * pow_u(self.p, extra)) % &m;
        PadicInt {
            p: self.p,
            precision: self.precision,
            residue: res,
            shift,
        }
    }

    pub fn add(&self, other: &PadicInt) -> PadicInt {
        let (a, b) = self.align(other);
        let precision = a.precision.min(b.precision);
        let m = pow_u(a.p, precision);
        PadicInt {
            p: a.p,
            precision,
            residue: (&a.residue + &b.residue) % &m,
            shift: a.shift,
        }
    }

    pub fn sub(&self, other: &PadicInt) -> PadicInt {
        let (a, b) = self.align(other);
        let precision = a.precision.min(b.precision);
        let m = pow_u(a.p, precision);
        let res = ((&a.residue % &m) + (&m - (&b.residue % &m))) % &m;
        PadicInt {
            p: a.p,
            precision,
            residue: res,
            shift: a.shift,
        }
    }

    pub fn neg(&self) -> PadicInt {
        PadicInt::zero(self.p, self.precision).sub(self)
    }

    pub fn mul(&self, other: &PadicInt) -> PadicInt {
        assert_eq!(self.p, other.p, "mixed primes");
        let precision = self.precision.min(other.precision);
        let m = pow_u(self.p, precision);
        PadicInt {
            p: self.p,
            precision,
            residue: (&self.residue * &other.residue) % &m,
            shift: self.shift + other.shift,
        }
    }

    /// Inverse of a unit mod p^precision.
    pub fn inv(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let m = BigInt::from(self.modulus());
        let a = BigInt::from(self.residue.clone());
        let e = a.extended_gcd(&m);
        debug_assert!(e.gcd.is_one());
        let inv = e.x.mod_floor(&m);
        Ok(PadicInt {
            p: self.p,
            precision: self.precision,
            residue: inv.to_biguint().unwrap(),
            shift: 0,
        })
    }

    /// Integer power; negative exponents need a unit base.
    pub fn pow(&self, exp: i64) -> Result<PadicInt> {
        if exp == 0 {
            return Ok(PadicInt::one(self.p, self.precision));
        }
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        assert!(
            exp > 0 || base.shift == 0,
            "negative powers of shifted values are not representable"
        );
        let m = base.modulus();
        let res = base.residue.modpow(&BigUint::from(exp.unsigned_abs()), &m);
        Ok(PadicInt {
            p: base.p,
            precision: base.precision,
            residue: res,
            shift: base.shift * u32::try_from(exp.unsigned_abs()).unwrap_or(u32::MAX),
        })
    }

    /// Drops to a lower precision (residue reduced accordingly).
    pub fn reduce_precision(&self, precision: u32) -> PadicInt {
        assert!(precision >= 1);
        if precision >= self.precision {
            return self.clone();
        }
        PadicInt {
            p: self.p,
            precision,
            residue: &self.residue % pow_u(self.p, precision),
            shift: self.shift,
        }
    }

    /// Congruence mod p^digits (both sides must carry enough precision).
    pub fn congruent(&self, other: &PadicInt, digits: u32) -> bool {
        let (a, b) = self.align(other);
        assert!(
            a.precision >= digits && b.precision >= digits,
            "not enough precision to compare {digits} digits"
        );
        let m = pow_u(a.p, digits);
        (&a.residue % &m) == (&b.residue % &m)
    }

    /// p-adic valuation of the represented value, i.e. v(residue) - shift.
    /// `None` when the residue is 0 at this precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.residue.is_zero() {
            return None;
        }
        let p = BigUint::from(self.p);
        let mut v: i64 = 0;
        let mut r = self.residue.clone();
        while (&r % &p).is_zero() {
            r /= &p;
            v += 1;
        }
        Some(v - self.shift as i64)
    }

    /// Teichmuller lift omega(x): the unique (p-1)-th root of unity congruent
    /// to x mod p, computed by iterating x -> x^p to the fixed point.
    pub fn teichmuller(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let m = self.modulus();
        let p = BigUint::from(self.p);
        let mut x = self.residue.clone();
        for _ in 0..self.precision {
            x = x.modpow(&p, &m);
        }
        debug_assert_eq!(x.modpow(&p, &m), x, "Teichmuller iteration not settled");
        Ok(PadicInt {
            p: self.p,
            precision: self.precision,
            residue: x,
            shift: 0,
        })
    }

    /// <x> = x / omega(x), the principal-unit part.
    pub fn principal_unit(&self) -> Result<PadicInt> {
        let w = self.teichmuller()?;
        Ok(self.mul(&w.inv()?))
    }

    /// <x>^(-s) * omega(x)^k for integer s, k.
    pub fn unit_character(&self, s: i64, k: i64) -> Result<PadicInt> {
        let u = self.principal_unit()?;
        let w = self.teichmuller()?;
        Ok(u.pow(-s)?.mul(&w.pow(k)?))
    }
}

/// Reduction of a rational into Z_p at the given precision. A negative
/// p-valuation is absorbed into the shift.
pub fn rational_to_padic(q: &Rational, p: u32, precision: u32) -> PadicInt {
    if q.is_zero() {
        return PadicInt::zero(p, precision);
    }
    let v = q.p_valuation(p).unwrap();
    let (scaled, shift) = if v < 0 {
        let pv = Rational::from_int(p as i64).pow(-v);
        (q * &pv, (-v) as u32)
    } else {
        (q.clone(), 0)
    };
    let m = BigInt::from(pow_u(p, precision));
    let num = scaled.numer().mod_floor(&m);
    let den = scaled.denom().mod_floor(&m);
    let e = den.extended_gcd(&m);
    assert!(e.gcd.is_one(), "denominator not invertible mod p^M");
    let res = (num * e.x.mod_floor(&m)).mod_floor(&m);
    PadicInt {
        p,
        precision,
        residue: res.to_biguint().unwrap(),
        shift,
    }
}

pub(crate) fn pow_u(p: u32, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{} + O({}^{})", self.residue, self.p, self.precision)
        } else {
            write!(
                f,
                "{}/{}^{} + O({}^{})",
                self.residue, self.p, self.shift, self.p, self.precision
            )
        }
    }
}

impl Serialize for PadicInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PadicInt", 4)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("precision", &self.precision)?;
        s.serialize_field("residue", &self.residue.to_string())?;
        s.serialize_field("shift", &self.shift)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn teichmuller_examples() {
        let w1 = PadicInt::new(1, 5, 3).teichmuller().unwrap();
        assert_eq!(w1.residue(), &BigUint::from(1u32));

        // p=5, M=2: omega(2) = 7 mod 25
        let w2 = PadicInt::new(2, 5, 2).teichmuller().unwrap();
        assert_eq!(w2.residue(), &BigUint::from(7u32));

        // omega(-1) = -1
        let m = PadicInt::new(-1, 7, 4);
        let wm = m.teichmuller().unwrap();
        assert_eq!(wm, m);

        assert_eq!(PadicInt::new(10, 5, 3).teichmuller(), Err(Error::NonUnit));
    }

    #[test]
    fn teichmuller_is_root_of_unity_and_congruent() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        for p in [3u32, 5, 7, 11] {
            let prec = 6;
            for _ in 0..50 {
                let x: u64 = rng.gen_range(1..100_000);
                if x % p as u64 == 0 {
                    continue;
                }
                let xp = PadicInt::new(x as i64, p, prec);
                let w = xp.teichmuller().unwrap();
                assert!(w.pow(p as i64 - 1).unwrap().congruent(
                    &PadicInt::one(p, prec),
                    prec
                ));
                // omega(x) = x mod p
                assert!(w.congruent(&xp, 1));
            }
        }
    }

    #[test]
    fn multiplicativity() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let p = 7u32;
            let prec = 5;
            let a: u64 = rng.gen_range(1..10_000);
            let b: u64 = rng.gen_range(1..10_000);
            if a % p as u64 == 0 || b % p as u64 == 0 {
                continue;
            }
            let ap = PadicInt::new(a as i64, p, prec);
            let bp = PadicInt::new(b as i64, p, prec);
            let prod = ap.mul(&bp);
            assert_eq!(
                prod.teichmuller().unwrap(),
                ap.teichmuller().unwrap().mul(&bp.teichmuller().unwrap())
            );
            assert_eq!(
                prod.principal_unit().unwrap(),
                ap.principal_unit()
                    .unwrap()
                    .mul(&bp.principal_unit().unwrap())
            );
        }
    }

    #[test]
    fn unit_character_identities() {
        let x = PadicInt::new(2, 5, 4);
        assert_eq!(x.unit_character(0, 0).unwrap(), PadicInt::one(5, 4));
        // <x> omega(x) = x
        assert_eq!(x.unit_character(-1, 1).unwrap(), x);
        // <x>^(-n) omega^(-n) = x^(-n)
        assert_eq!(x.unit_character(2, -2).unwrap(), x.pow(-2).unwrap());
        // <7> = 1 mod 25 since 7 = omega(2) there
        let y = PadicInt::new(7, 5, 2);
        assert_eq!(y.principal_unit().unwrap(), PadicInt::one(5, 2));
    }

    #[test]
    fn rational_reduction() {
        assert!(rational_to_padic(&Rational::zero(), 5, 3).is_zero());

        let q = rational_to_padic(&Rational::new(1, 12), 5, 3);
        assert_eq!(q.residue(), &BigUint::from(73u32));
        assert_eq!(q.shift(), 0);

        let fifth = rational_to_padic(&Rational::new(1, 5), 5, 3);
        assert_eq!(fifth.residue(), &BigUint::from(1u32));
        assert_eq!(fifth.shift(), 1);
        assert_eq!(fifth.valuation(), Some(-1));
    }

    #[test]
    fn precision_discipline() {
        let a = PadicInt::new(12, 5, 4);
        let b = PadicInt::new(9, 5, 2);
        assert_eq!(a.add(&b).precision(), 2);
        assert_eq!(a.mul(&b).precision(), 2);
        // shift alignment: 1/5 + 4/5 = 1
        let x = rational_to_padic(&Rational::new(1, 5), 5, 3);
        let y = rational_to_padic(&Rational::new(4, 5), 5, 3);
        let s = x.add(&y);
        assert_eq!(s.valuation(), Some(0));
        let one = PadicInt::one(5, 3).with_shift(1); // 5/5
        assert_eq!(s, one);
    }

    #[test]
    fn json_format() {
        let x = rational_to_padic(&Rational::new(1, 5), 5, 3);
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"p":5,"precision":3,"residue":"1","shift":1}"#);
    }
}
