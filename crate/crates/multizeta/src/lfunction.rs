//! p-adic multiple L-values at integer argument tuples, through three
//! deliberately independent routes:
//!
//! * `l_value_riemann` — Riemann sums of the defining measure integral in
//!   Z/p^M (needs c | p-1);
//! * `l_value_nonpos_closed` — the exact twisted-Bernoulli double sum in
//!   Q(zeta_pc): the (c-1)^r xi-tuples plus all (-1/p)^d rho-correction
//!   layers, asserted rational and p-integral;
//! * `l_genfun_special` — the rational Bernoulli generating function for the
//!   shape gamma_1 unit, gamma_j in pZ_p (j >= 2).
//!
//! The multiple Kummer congruence checker and the parity functional-relation
//! residual are built on the closed route.

use std::collections::HashMap;

use crate::bernoulli::{bernoulli, factorial};
use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use crate::measure::{integrate_riemann, MeasureSpec, Region};
use crate::padic::{rational_to_padic, PadicInt};
use crate::rational::Rational;
use crate::series::{expand_tail_substitution, tail_product_coeff, TruncSeries};
use crate::twisted::h_series_coeffs;

/// Argument data for one L-value evaluation.
#[derive(Clone, Debug)]
pub struct LSpec {
    pub p: u32,
    pub c: u32,
    /// argument tuple s_1..s_r (integers; negative for the closed form)
    pub s: Vec<i64>,
    /// character exponents k_1..k_r for omega^(k_j)
    pub k: Vec<i64>,
    pub gammas: Vec<Rational>,
}

impl LSpec {
    pub fn depth(&self) -> usize {
        self.s.len()
    }

    fn validate(&self) -> Result<()> {
        if self.s.is_empty() || self.s.len() != self.k.len() || self.s.len() != self.gammas.len() {
            return Err(Error::PreconditionViolation(
                "s, k, gamma must have equal positive length".into(),
            ));
        }
        if self.c < 2 || self.c % self.p == 0 {
            return Err(Error::PreconditionViolation(
                "need c >= 2 with gcd(c, p) = 1".into(),
            ));
        }
        for g in &self.gammas {
            if !g.is_p_integral(self.p) {
                return Err(Error::PreconditionViolation(format!(
                    "gamma = {g} is not {}-integral",
                    self.p
                )));
            }
        }
        Ok(())
    }
}

/// gamma mod p for a p-integral rational.
fn rational_mod_p(q: &Rational, p: u32) -> u32 {
    let r = rational_to_padic(q, p, 1);
    u32::try_from(r.residue().clone()).unwrap() % p
}

/// The defining integral as a Riemann sum at the given level, evaluated in
/// Z/p^M. Requires c | p-1 so every c-th root of unity is a Teichmuller lift.
pub fn l_value_riemann(spec: &LSpec, level: u32, precision: u32) -> Result<PadicInt> {
    spec.validate()?;
    let (p, c) = (spec.p, spec.c);
    if (p - 1) % c != 0 {
        return Err(Error::UnsupportedC { c, p });
    }
    let out_prec = level.min(precision);
    let gmod: Vec<u32> = spec.gammas.iter().map(|g| rational_mod_p(g, p)).collect();
    if gmod[0] == 0 {
        // the restricted region is empty: the zero function
        return Ok(PadicInt::zero(p, out_prec));
    }
    let gpads: Vec<PadicInt> = spec
        .gammas
        .iter()
        .map(|g| rational_to_padic(g, p, precision))
        .collect();
    let region = Region::new(gmod, p, true);
    let axis = MeasureSpec::c_average(c, p, precision)?;
    let specs = vec![axis; spec.depth()];

    // unit_character(y_j, s_j, k_j) memoized per axis by the residue of y_j
    let mut memo: Vec<HashMap<Vec<u8>, PadicInt>> = vec![HashMap::new(); spec.depth()];
    let s = spec.s.clone();
    let k = spec.k.clone();
    let mut integrand = |cell: &[u64]| -> Result<PadicInt> {
        let mut y = PadicInt::zero(p, precision);
        let mut prod = PadicInt::one(p, precision);
        for (j, &a) in cell.iter().enumerate() {
            y = y.add(&PadicInt::new(a as i64, p, precision).mul(&gpads[j]));
            let key = y.residue().to_bytes_le();
            let val = match memo[j].get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = y.unit_character(s[j], k[j])?;
                    memo[j].insert(key, v.clone());
                    v
                }
            };
            prod = prod.mul(&val);
        }
        Ok(prod)
    };
    integrate_riemann(&mut integrand, &region, &specs, level, precision)
}

/// Exact evaluation of L_(p,r)((-n_j); (omega^(n_j)); (gamma_j); c) in
/// Q(zeta_pc): the xi-sums over (mu_c \ 1)^r plus, for every nonempty subset
/// {i_1 < ... < i_d} and every rho-tuple in mu_p^d, the twisted sum weighted
/// by (-1/p)^d, with slot j twisted by (prod_(j <= i_l) rho_(i_l))^(gamma_j).
/// Asserts rationality, and p-integrality when the gammas are p-integral.
pub fn l_value_nonpos_closed(n: &[u32], gammas: &[Rational], c: u32, p: u32) -> Result<Rational> {
    let r = n.len();
    if r == 0 || gammas.len() != r {
        return Err(Error::PreconditionViolation(
            "need r >= 1 indices with matching gammas".into(),
        ));
    }
    if c < 2 || c % p == 0 {
        return Err(Error::PreconditionViolation(
            "need c >= 2 with gcd(c, p) = 1".into(),
        ));
    }
    for g in gammas {
        if !g.is_p_integral(p) {
            return Err(Error::PreconditionViolation(format!(
                "gamma = {g} is not {p}-integral (rho^gamma undefined)"
            )));
        }
    }

    let field = CycField::get(p * c);
    let maxdeg: u32 = n.iter().sum();
    let gmod: Vec<u32> = gammas.iter().map(|g| rational_mod_p(g, p)).collect();

    // univariate H-coefficients per twist root, keyed by exponent of zeta_pc
    let mut uni: HashMap<u32, Vec<CycNum>> = HashMap::new();
    // product coefficient at n per twist-exponent vector
    let mut coeff_memo: HashMap<Vec<u32>, CycNum> = HashMap::new();

    let pc = p * c;
    let mut total = field.zero();

    // subsets of {1..r} including the empty one (the main term)
    for mask in 0u32..(1 << r) {
        let subset: Vec<usize> = (0..r).filter(|j| mask & (1 << j) != 0).collect();
        let d = subset.len();
        let weight = if d == 0 {
            Rational::one()
        } else {
            Rational::new((-1i64).pow(d as u32), num::bigint::BigInt::from(p).pow(d as u32))
        };
        // enumerate rho exponent tuples in [0, p)^d and xi exponents in [1, c)^r
        let mut rho = vec![0u32; d];
        loop {
            // alpha exponent (in mu_p) for each slot
            let mut alpha = vec![0u32; r];
            for j in 0..r {
                let sum: u32 = subset
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| i >= j)
                    .map(|(l, _)| rho[l])
                    .sum();
                alpha[j] = sum % p * gmod[j] % p;
            }
            let mut xi = vec![1u32; r];
            loop {
                let exps: Vec<u32> = (0..r)
                    .map(|j| (c * alpha[j] + p * xi[j]) % pc)
                    .collect();
                let coeff = match coeff_memo.get(&exps) {
                    Some(v) => v.clone(),
                    None => {
                        let v = product_coeff(&exps, gammas, n, maxdeg, &field, &mut uni)?;
                        coeff_memo.insert(exps.clone(), v.clone());
                        v
                    }
                };
                total = &total + &coeff.scale(&weight);
                // advance xi odometer
                let mut j = 0;
                loop {
                    if j == r {
                        break;
                    }
                    xi[j] += 1;
                    if xi[j] < c {
                        break;
                    }
                    xi[j] = 1;
                    j += 1;
                }
                if j == r {
                    break;
                }
            }
            // advance rho odometer
            let mut l = 0;
            loop {
                if l == d {
                    break;
                }
                rho[l] += 1;
                if rho[l] < p {
                    break;
                }
                rho[l] = 0;
                l += 1;
            }
            if l == d {
                break;
            }
        }
    }

    let mut fact = Rational::one();
    for &nj in n {
        fact = fact * Rational::from_int(factorial(nj));
    }
    total = total.scale(&fact);

    let value = total.to_rational().ok_or(Error::NonRationalSum {
        context: format!("L_(p,{r}) closed form at n={n:?}"),
    })?;
    if !value.is_p_integral(p) {
        return Err(Error::NonIntegralValue {
            value: value.to_string(),
            p,
        });
    }
    Ok(value)
}

/// Coefficient at `n` of prod_j H(gamma_j (t_j+...+t_r); zeta_pc^(e_j)).
fn product_coeff(
    exps: &[u32],
    gammas: &[Rational],
    n: &[u32],
    maxdeg: u32,
    field: &std::sync::Arc<CycField>,
    uni: &mut HashMap<u32, Vec<CycNum>>,
) -> Result<CycNum> {
    let r = n.len();
    for j in 0..r {
        let e = exps[j];
        if !uni.contains_key(&e) {
            let list = h_series_coeffs(maxdeg, &field.root(e as i64))?;
            uni.insert(e, list);
        }
    }
    let lists: Vec<&[CycNum]> = (0..r)
        .map(|j| {
            let totdeg: u32 = n[j..].iter().sum();
            &uni[&exps[j]][..=totdeg as usize]
        })
        .collect();
    Ok(tail_product_coeff(&lists, gammas, n).unwrap_or_else(|| field.zero()))
}

/// Generating function for the special shape gamma_1 in Z_p^* and
/// gamma_j in pZ_p (j >= 2): the product of the (1 - p^m)-damped Bernoulli
/// series in gamma_1(t_1+...+t_r) with plain c-damped series in the tails.
/// The (n_j) coefficient times n_1!...n_r! is the L-value.
pub fn l_genfun_special(
    gammas: &[Rational],
    c: u32,
    p: u32,
    caps: &[u32],
) -> Result<TruncSeries<Rational>> {
    let r = gammas.len();
    if r == 0 || caps.len() != r {
        return Err(Error::PreconditionViolation("depth mismatch".into()));
    }
    if !gammas[0].is_p_integral(p) || rational_mod_p(&gammas[0], p) == 0 {
        return Err(Error::PreconditionViolation(
            "gamma_1 must be a p-adic unit".into(),
        ));
    }
    for g in &gammas[1..] {
        if !g.is_p_integral(p) || rational_mod_p(g, p) != 0 {
            return Err(Error::PreconditionViolation(
                "gamma_j (j >= 2) must lie in pZ_p".into(),
            ));
        }
    }
    let cq = Rational::from_int(c as i64);
    let pq = Rational::from_int(p as i64);
    let mut product: Option<TruncSeries<Rational>> = None;
    for j in 0..r {
        let totdeg: u32 = caps[j..].iter().sum();
        let uni: Vec<Rational> = (0..=totdeg)
            .map(|m| {
                let mut w = (Rational::one() - cq.pow(m as i64 + 1)) * bernoulli(m + 1)
                    / Rational::from_int(factorial(m + 1));
                if j == 0 {
                    w = w * (Rational::one() - pq.pow(m as i64));
                }
                w
            })
            .collect();
        let factor = expand_tail_substitution(&uni, &gammas[j], j, caps);
        product = Some(match product {
            None => factor,
            Some(acc) => acc.mul(&factor)?,
        });
    }
    Ok(product.unwrap())
}

/// L-value from the generating-function route.
pub fn l_genfun_value(n: &[u32], gammas: &[Rational], c: u32, p: u32) -> Result<Rational> {
    let series = l_genfun_special(gammas, c, p, n)?;
    let mut v = series.coeff(n).cloned().unwrap_or_else(Rational::zero);
    for &nj in n {
        v = v * Rational::from_int(factorial(nj));
    }
    Ok(v)
}

/// B(n; gamma; c) = (1 - c^(n+1)) B_(n+1) gamma^n / (n+1), n >= 1.
pub fn cal_b_scalar(n: u32, gamma: &Rational, c: u32) -> Rational {
    assert!(n >= 1);
    (Rational::one() - Rational::from_int(c as i64).pow(n as i64 + 1))
        * bernoulli(n + 1)
        * gamma.pow(n as i64)
        / Rational::from_int(n as i64 + 1)
}

/// Multi-index B(n_1..n_r; gamma; c) from the product of the centered
/// series H_1 = h~_1 - (c-1)/2; vanishes when sum n_j != r mod 2.
pub fn cal_b_multi(n: &[u32], gammas: &[Rational], c: u32) -> Result<Rational> {
    let r = n.len();
    if r == 0 || gammas.len() != r || n.iter().any(|&x| x == 0) {
        return Err(Error::PreconditionViolation(
            "multi-index B needs r >= 1 and all n_j >= 1".into(),
        ));
    }
    let cq = Rational::from_int(c as i64);
    let mut product: Option<TruncSeries<Rational>> = None;
    for j in 0..r {
        let totdeg: u32 = n[j..].iter().sum();
        let mut uni = crate::twisted::tilde_h1_coeffs(totdeg, &cq);
        uni[0] = Rational::zero(); // drop the (c-1)/2 constant
        let factor = expand_tail_substitution(&uni, &gammas[j], j, n);
        product = Some(match product {
            None => factor,
            Some(acc) => acc.mul(&factor)?,
        });
    }
    let mut v = product
        .unwrap()
        .coeff(n)
        .cloned()
        .unwrap_or_else(Rational::zero);
    for &nj in n {
        v = v * Rational::from_int(factorial(nj));
    }
    Ok(v)
}

/// Multiple Kummer congruence check. Validates the hypothesis
/// m_j = n_j mod (p-1) p^(l_j - 1), computes both closed-form values, and
/// returns v_p of the difference (`None` when the difference is exactly 0).
/// The congruence of Theorem level min(l_j) is asserted.
pub fn kummer_check(
    m: &[u32],
    n: &[u32],
    l: &[u32],
    gammas: &[Rational],
    c: u32,
    p: u32,
) -> Result<Option<i64>> {
    let r = m.len();
    if n.len() != r || l.len() != r || gammas.len() != r || l.iter().any(|&x| x == 0) {
        return Err(Error::PreconditionViolation(
            "m, n, l, gamma must have equal length and l_j >= 1".into(),
        ));
    }
    for j in 0..r {
        let modulus = (p as u64 - 1) * (p as u64).pow(l[j] - 1);
        if (m[j] as u64 % modulus) != (n[j] as u64 % modulus) {
            return Err(Error::PreconditionViolation(format!(
                "m_{j} and n_{j} are not congruent mod (p-1)p^(l_{j}-1) = {modulus}"
            )));
        }
    }
    let vm = l_value_nonpos_closed(m, gammas, c, p)?;
    let vn = l_value_nonpos_closed(n, gammas, c, p)?;
    let diff = vm - vn;
    if diff.is_zero() {
        return Ok(None);
    }
    let val = diff.p_valuation(p).unwrap();
    let need = *l.iter().min().unwrap() as i64;
    assert!(
        val >= need,
        "Kummer congruence violated: v_{p}(difference) = {val} < {need} at m={m:?} n={n:?}"
    );
    Ok(Some(val))
}

/// Residual of the parity functional relation: the sum over all subsets J of
/// {1..r} containing 1 (J = {1..r} contributing the left-hand side) of
/// ((1-c)/2)^(r-|J|) L_(p,|J|) at the block-summed arguments. Exactly 0 when
/// k_1+...+k_r != r mod 2.
pub fn functional_relation_residual(
    n: &[u32],
    k: &[i64],
    gammas: &[Rational],
    c: u32,
    p: u32,
) -> Result<Rational> {
    let r = n.len();
    if r < 2 || k.len() != r || gammas.len() != r {
        return Err(Error::PreconditionViolation(
            "need r >= 2 with matching k and gamma".into(),
        ));
    }
    let ksum: i64 = k.iter().sum();
    if (ksum.rem_euclid(2)) == (r as i64).rem_euclid(2) {
        return Err(Error::ParityViolation);
    }
    for j in 0..r {
        if n[j] == 0 {
            return Err(Error::PreconditionViolation("need n_j >= 1".into()));
        }
        if (k[j] - n[j] as i64).rem_euclid(p as i64 - 1) != 0 {
            return Err(Error::PreconditionViolation(format!(
                "k_{j} must be congruent to n_{j} mod p-1 for the closed form"
            )));
        }
    }
    if !gammas[0].is_p_integral(p) {
        return Err(Error::PreconditionViolation("gamma_1 must be p-integral".into()));
    }
    for (j, g) in gammas.iter().enumerate().skip(1) {
        if !g.is_p_integral(p) || rational_mod_p(g, p) != 0 {
            return Err(Error::PreconditionViolation(format!(
                "gamma_{} must lie in pZ_p",
                j + 1
            )));
        }
    }

    let half = Rational::new(1 - c as i64, 2);
    let mut residual = Rational::zero();
    for mask in 0u32..(1 << r) {
        if mask & 1 == 0 {
            continue; // 1 must lie in J
        }
        let members: Vec<usize> = (0..r).filter(|j| mask & (1 << j) != 0).collect();
        // block sums: member j_mu absorbs l in [j_mu, j_(mu+1))
        let mut blocks = Vec::with_capacity(members.len());
        for (mu, &jm) in members.iter().enumerate() {
            let end = members.get(mu + 1).copied().unwrap_or(r);
            blocks.push(n[jm..end].iter().sum::<u32>());
        }
        let gam: Vec<Rational> = members.iter().map(|&j| gammas[j].clone()).collect();
        let term = l_value_nonpos_closed(&blocks, &gam, c, p)?;
        residual = residual + half.pow((r - members.len()) as i64) * term;
    }
    Ok(residual)
}
