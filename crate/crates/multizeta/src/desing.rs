//! Desingularized multiple zeta values at non-positive integers.
//!
//! Three routes live here: the G-polynomial coefficient table a_(l,m) (the
//! shift/Pochhammer weights of the finite linear combination that removes
//! every singularity), the Bernoulli-matrix closed form for
//! zeta^des_r((-k_j);(gamma_j)), and a generating-function oracle built by
//! exact series division.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::Zero;
use serde::Serialize;

use crate::bernoulli::{bernoulli, binomial, factorial};
use crate::rational::Rational;
use crate::series::{expand_tail_substitution, TruncSeries};

/// Exponent pair of one Laurent monomial: u-exponents (non-negative) and
/// v-exponents (signed, summing to zero).
pub type GMonomial = (Vec<u32>, Vec<i32>);

/// Integer coefficients a_(l,m) of the expansion of
/// G((u_j),(v_j)) = prod_j (1 - (u_j v_j + ... + u_r v_r)(v_j^-1 - v_(j-1)^-1)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesingCoeffTable {
    r: usize,
    entries: BTreeMap<GMonomial, BigInt>,
}

#[derive(Serialize)]
pub struct DesingEntry {
    pub l: Vec<u32>,
    pub m: Vec<i32>,
    pub a: String,
}

impl DesingCoeffTable {
    pub fn depth(&self) -> usize {
        self.r
    }

    pub fn entries(&self) -> &BTreeMap<GMonomial, BigInt> {
        &self.entries
    }

    pub fn get(&self, l: &[u32], m: &[i32]) -> BigInt {
        self.entries
            .get(&(l.to_vec(), m.to_vec()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn to_json_entries(&self) -> Vec<DesingEntry> {
        self.entries
            .iter()
            .map(|((l, m), a)| DesingEntry {
                l: l.clone(),
                m: m.clone(),
                a: a.to_string(),
            })
            .collect()
    }
}

/// Expands G and collects the integer coefficient table.
pub fn desing_coeffs(r: usize) -> DesingCoeffTable {
    assert!(r >= 1);
    let mut acc: BTreeMap<GMonomial, BigInt> = BTreeMap::new();
    acc.insert((vec![0; r], vec![0; r]), BigInt::from(1));
    for j in 0..r {
        // factor_j = 1 - sum_{k>=j} u_k v_k (v_j^-1 - v_(j-1)^-1), v_0^-1 = 0
        let mut factor: BTreeMap<GMonomial, BigInt> = BTreeMap::new();
        factor.insert((vec![0; r], vec![0; r]), BigInt::from(1));
        for k in j..r {
            let mut u = vec![0u32; r];
            let mut v = vec![0i32; r];
            u[k] = 1;
            v[k] += 1;
            v[j] -= 1;
            add_monomial(&mut factor, (u.clone(), v), BigInt::from(-1));
            if j >= 1 {
                let mut v = vec![0i32; r];
                v[k] += 1;
                v[j - 1] -= 1;
                add_monomial(&mut factor, (u, v), BigInt::from(1));
            }
        }
        acc = laurent_mul(&acc, &factor);
    }
    debug_assert!(
        acc.keys().all(|(_, m)| m.iter().sum::<i32>() == 0),
        "G expansion must be homogeneous of degree 0 in the v_j"
    );
    DesingCoeffTable { r, entries: acc }
}

fn add_monomial(map: &mut BTreeMap<GMonomial, BigInt>, key: GMonomial, coeff: BigInt) {
    let entry = map.entry(key).or_insert_with(BigInt::zero);
    *entry += coeff;
    if entry.is_zero() {
        let key = map
            .iter()
            .find(|(_, v)| v.is_zero())
            .map(|(k, _)| k.clone())
            .unwrap();
        map.remove(&key);
    }
}

fn laurent_mul(
    a: &BTreeMap<GMonomial, BigInt>,
    b: &BTreeMap<GMonomial, BigInt>,
) -> BTreeMap<GMonomial, BigInt> {
    let mut out = BTreeMap::new();
    for ((ua, va), ca) in a {
        for ((ub, vb), cb) in b {
            let u: Vec<u32> = ua.iter().zip(ub).map(|(x, y)| x + y).collect();
            let v: Vec<i32> = va.iter().zip(vb).map(|(x, y)| x + y).collect();
            add_monomial(&mut out, (u, v), ca * cb);
        }
    }
    out
}

/// zeta^des_r((-k_j);(gamma_j)) by the finite Bernoulli-matrix sum: over all
/// upper-triangular matrices (nu_(dj))_(d<=j) with column sums k_j, the
/// product of B_(1+rowsum_j) gamma_j^(rowsum_j) / prod nu!, scaled by
/// prod_l (-1)^(k_l) k_l!.
pub fn desing_value_nonpos(k: &[u32], gammas: &[Rational]) -> Rational {
    let r = k.len();
    assert_eq!(r, gammas.len());
    assert!(r >= 1);

    // per-column compositions: column j splits k_j into j+1 cells
    let mut total = Rational::zero();
    let mut matrix: Vec<Vec<u32>> = vec![vec![]; r];
    enumerate_columns(k, 0, &mut matrix, &mut |matrix| {
        let mut term = Rational::one();
        for j in 0..r {
            // row j collects nu_(j,l) for l >= j: cell index j within column l
            let row_sum: u32 = (j..r).map(|l| matrix[l][j]).sum();
            term = term * bernoulli(1 + row_sum) * gammas[j].pow(row_sum as i64);
        }
        for col in matrix.iter() {
            for &nu in col {
                if nu > 1 {
                    term = term / Rational::from_int(factorial(nu));
                }
            }
        }
        total = &total + &term;
    });

    for &kl in k {
        let sign = if kl % 2 == 1 { -1 } else { 1 };
        total = total * Rational::from_int(sign * factorial(kl));
    }
    total
}

fn enumerate_columns(
    k: &[u32],
    col: usize,
    matrix: &mut Vec<Vec<u32>>,
    f: &mut impl FnMut(&Vec<Vec<u32>>),
) {
    if col == k.len() {
        f(matrix);
        return;
    }
    let parts = col + 1;
    let mut comp = vec![0u32; parts];
    fn rec(
        total: u32,
        idx: usize,
        comp: &mut Vec<u32>,
        k: &[u32],
        col: usize,
        matrix: &mut Vec<Vec<u32>>,
        f: &mut impl FnMut(&Vec<Vec<u32>>),
    ) {
        if idx == comp.len() - 1 {
            comp[idx] = total;
            matrix[col] = comp.clone();
            enumerate_columns(k, col + 1, matrix, f);
            return;
        }
        for v in 0..=total {
            comp[idx] = v;
            rec(total - v, idx + 1, comp, k, col, matrix, f);
        }
    }
    rec(k[col], 0, &mut comp, k, col, matrix, f);
}

/// The r = 2 single-sum closed form:
/// (-1)^(k+l) sum_nu C(l,nu) B_(k+nu+1) B_(l-nu+1) g1^(k+nu) g2^(l-nu).
pub fn desing_value_r2_closed(k: u32, l: u32, g1: &Rational, g2: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for nu in 0..=l {
        acc = acc
            + Rational::from_int(binomial(l, nu))
                * bernoulli(k + nu + 1)
                * bernoulli(l - nu + 1)
                * g1.pow((k + nu) as i64)
                * g2.pow((l - nu) as i64);
    }
    let sign = if (k + l) % 2 == 1 { -1 } else { 1 };
    acc * Rational::from_int(sign)
}

/// Generating-function oracle: expands
/// prod_j ((1 - y_j) e^(y_j) - 1)/(e^(y_j) - 1)^2, y_j = gamma_j (t_j+...+t_r).
/// The (m_j) coefficient times (-1)^(sum m_j) prod m_j! equals
/// zeta^des((-m_j);(gamma_j)).
pub fn desing_genfun_oracle(gammas: &[Rational], caps: &[u32]) -> TruncSeries<Rational> {
    assert_eq!(gammas.len(), caps.len());
    let r = caps.len();
    let mut product: Option<TruncSeries<Rational>> = None;
    for j in 0..r {
        let totdeg: u32 = caps[j..].iter().sum();
        let uni = e_kernel_coeffs(totdeg);
        let factor = expand_tail_substitution(&uni, &gammas[j], j, caps);
        product = Some(match product {
            None => factor,
            Some(acc) => acc.mul(&factor).expect("caps agree by construction"),
        });
    }
    product.unwrap()
}

/// Coefficients of y^n, n <= order, in E(y) = ((1-y)e^y - 1)/(e^y - 1)^2,
/// by exact division of the y^2-reduced numerator by ((e^y-1)/y)^2.
pub(crate) fn e_kernel_coeffs(order: u32) -> Vec<Rational> {
    let len = order as usize + 1;
    // numerator (1-y)e^y - 1 = sum_{n>=2} (1-n) y^n / n!, shifted down by y^2
    let mut num = vec![Rational::zero(); len];
    for n in 2..(len + 2) as u32 {
        num[(n - 2) as usize] =
            Rational::from_int(1 - n as i64) / Rational::from_int(factorial(n));
    }
    // (e^y - 1)/y = sum_k y^k/(k+1)!
    let mut g = vec![Rational::zero(); len];
    for k in 0..len as u32 {
        g[k as usize] = Rational::from_int(factorial(k + 1)).recip();
    }
    // den = g^2 (truncated), monic in the sense den[0] = 1
    let mut den = vec![Rational::zero(); len];
    for i in 0..len {
        for j in 0..len - i {
            den[i + j] = &den[i + j] + &(&g[i] * &g[j]);
        }
    }
    // series division num/den
    let mut out = vec![Rational::zero(); len];
    for n in 0..len {
        let mut acc = num[n].clone();
        for i in 1..=n {
            acc = acc - &den[i] * &out[n - i];
        }
        out[n] = acc; // den[0] = 1
    }
    out
}
