//! Twisted Bernoulli numbers B_n(xi), their multiple analogues
//! B((n_j);(xi_j);(gamma_j)), and the c-averaged generating function.
//!
//! B_n(xi) (xi a root of unity != 1) comes from 1/(1 - xi e^t): B_{-1} = 0,
//! B_0 = 1/(1-xi), and (1-xi) B_n = xi sum_{k=1..n} C(n,k) B_{n-k}. The
//! multiple numbers are coefficients of prod_j 1/(1 - xi_j exp(gamma_j
//! (t_j+...+t_r))), extracted through the truncated-series engine.

use crate::bernoulli::{bernoulli, binomial, factorial};
use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::{expand_tail_substitution, TruncSeries};

/// Depth-r twist data: roots of unity xi_j and weights gamma_j.
#[derive(Clone, Debug)]
pub struct TwistSpec {
    xis: Vec<CycNum>,
    gammas: Vec<Rational>,
}

impl TwistSpec {
    pub fn new(xis: Vec<CycNum>, gammas: Vec<Rational>) -> Result<Self> {
        if xis.is_empty() || xis.len() != gammas.len() {
            return Err(Error::PreconditionViolation(
                "need r >= 1 twists with matching gamma count".into(),
            ));
        }
        for xi in &xis {
            let n = xi.field().conductor();
            if !xi.pow(n as i64)?.is_one() {
                return Err(Error::PreconditionViolation(format!(
                    "twist is not a root of unity in Q(zeta_{n})"
                )));
            }
        }
        Ok(TwistSpec { xis, gammas })
    }

    pub fn depth(&self) -> usize {
        self.xis.len()
    }

    pub fn xis(&self) -> &[CycNum] {
        &self.xis
    }

    pub fn gammas(&self) -> &[Rational] {
        &self.gammas
    }

    /// A spec is degenerate when some xi_j = 1; the generating function then
    /// has a pole at the origin and coefficient extraction is refused.
    pub fn is_degenerate(&self) -> bool {
        self.xis.iter().any(|xi| xi.is_one())
    }
}

/// B_n(xi) for n >= -1 and xi != 1 a root of unity.
pub fn twisted_bernoulli(n: i64, xi: &CycNum) -> Result<CycNum> {
    if n == -1 {
        return Ok(xi.field().zero());
    }
    assert!(n >= -1, "twisted Bernoulli index must be >= -1");
    Ok(twisted_bernoulli_upto(n as u32, xi)?.pop().unwrap())
}

/// The list B_0(xi), ..., B_n(xi); one inversion of (1 - xi), then the
/// recurrence.
pub fn twisted_bernoulli_upto(n: u32, xi: &CycNum) -> Result<Vec<CycNum>> {
    if xi.is_one() {
        return Err(Error::UnityTwist);
    }
    let field = xi.field();
    let inv = (&field.one() - xi).invert().expect("1 - xi nonzero for xi != 1");
    let mut vals: Vec<CycNum> = Vec::with_capacity(n as usize + 1);
    vals.push(inv.clone());
    for m in 1..=n {
        let mut acc = field.zero();
        for k in 1..=m {
            let b = Rational::from_int(binomial(m, k));
            acc = &acc + &vals[(m - k) as usize].scale(&b);
        }
        vals.push(xi.mul(&acc).mul(&inv));
    }
    Ok(vals)
}

/// B((n_j);(xi_j);(gamma_j)) = n_1! ... n_r! * [t^(n_j)] prod_j H(y_j; xi_j),
/// y_j = gamma_j (t_j + ... + t_r).
pub fn twisted_multi_bernoulli(spec: &TwistSpec, n: &[u32]) -> Result<CycNum> {
    if spec.is_degenerate() {
        return Err(Error::UnityTwist);
    }
    if n.len() != spec.depth() {
        return Err(Error::PreconditionViolation(
            "index tuple length differs from depth".into(),
        ));
    }
    let r = spec.depth();
    let mut product: Option<TruncSeries<CycNum>> = None;
    for j in 0..r {
        let totdeg: u32 = n[j..].iter().sum();
        let uni = h_series_coeffs(totdeg, &spec.xis[j])?;
        let factor = expand_tail_substitution(&uni, &spec.gammas[j], j, n);
        product = Some(match product {
            None => factor,
            Some(acc) => acc.mul(&factor)?,
        });
    }
    let series = product.unwrap();
    let coeff = series
        .coeff(n)
        .cloned()
        .unwrap_or_else(|| spec.xis[0].field().zero());
    let fact: Rational = n
        .iter()
        .map(|&k| Rational::from_int(factorial(k)))
        .fold(Rational::one(), |a, b| a * b);
    Ok(coeff.scale(&fact))
}

/// Coefficients of y^m (m <= n) in H(y; xi) = 1/(1 - xi e^y), i.e. B_m(xi)/m!.
pub(crate) fn h_series_coeffs(n: u32, xi: &CycNum) -> Result<Vec<CycNum>> {
    let vals = twisted_bernoulli_upto(n, xi)?;
    Ok(vals
        .into_iter()
        .enumerate()
        .map(|(m, v)| v.scale(&Rational::new(1, factorial(m as u32))))
        .collect())
}

/// sum_{xi^c = 1, xi != 1} B_n(xi), asserted rational. Equals
/// (1 - c^(n+1)) B_(n+1)/(n+1).
pub fn root_sum_twisted(n: u32, c: u32) -> Result<Rational> {
    if c < 2 {
        return Err(Error::PreconditionViolation("need c >= 2".into()));
    }
    let field = CycField::get(c);
    let mut acc = field.zero();
    for k in 1..c {
        let xi = field.root(k as i64);
        acc = &acc + &twisted_bernoulli(n as i64, &xi)?;
    }
    acc.to_rational().ok_or(Error::NonRationalSum {
        context: format!("sum of B_{n}(xi) over xi^{c}=1"),
    })
}

/// Truncated expansion of the c-averaged generating function
/// prod_j sum_{m>=1} (1 - c^m) B_m (gamma_j (t_j+...+t_r))^(m-1)/m!.
/// `c` may be any rational != 1; integrality is not required.
pub fn tilde_h_coeffs(gammas: &[Rational], c: &Rational, caps: &[u32]) -> TruncSeries<Rational> {
    assert_eq!(gammas.len(), caps.len());
    let r = caps.len();
    let mut product: Option<TruncSeries<Rational>> = None;
    for j in 0..r {
        let totdeg: u32 = caps[j..].iter().sum();
        let uni = tilde_h1_coeffs(totdeg, c);
        let factor = expand_tail_substitution(&uni, &gammas[j], j, caps);
        product = Some(match product {
            None => factor,
            Some(acc) => acc.mul(&factor).expect("caps agree by construction"),
        });
    }
    product.unwrap()
}

/// Coefficients of y^n in 1/(e^y - 1) - c/(e^(cy) - 1), that is
/// (1 - c^(n+1)) B_(n+1)/(n+1)!.
pub(crate) fn tilde_h1_coeffs(n: u32, c: &Rational) -> Vec<Rational> {
    (0..=n)
        .map(|m| {
            let cm = Rational::one() - c.pow(m as i64 + 1);
            cm * bernoulli(m + 1) / Rational::from_int(factorial(m + 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus(xi: &CycNum) -> CycNum {
        &xi.field().one() - xi
    }

    #[test]
    fn closed_forms_small_n() {
        // B_0 = 1/(1-xi), B_1 = xi/(1-xi)^2, B_2 = xi(xi+1)/(1-xi)^3,
        // B_3 = xi(xi^2+4xi+1)/(1-xi)^4, B_4 = xi(xi^3+11xi^2+11xi+1)/(1-xi)^5
        for (n_field, exp) in [(5u32, 1i64), (12, 5), (7, 3)] {
            let f = CycField::get(n_field);
            let xi = f.root(exp);
            let d = one_minus(&xi).invert().unwrap();
            let four = Rational::from_int(4);
            let eleven = Rational::from_int(11);
            let expected = [
                d.clone(),
                xi.mul(&d.pow(2).unwrap()),
                xi.mul(&(&xi + &f.one())).mul(&d.pow(3).unwrap()),
                xi.mul(&(&(&xi.pow(2).unwrap() + &xi.scale(&four)) + &f.one()))
                    .mul(&d.pow(4).unwrap()),
                xi.mul(
                    &(&(&xi.pow(3).unwrap() + &xi.pow(2).unwrap().scale(&eleven))
                        + &(&xi.scale(&eleven) + &f.one())),
                )
                .mul(&d.pow(5).unwrap()),
            ];
            for (n, want) in expected.iter().enumerate() {
                let got = twisted_bernoulli(n as i64, &xi).unwrap();
                assert_eq!(&got, want, "B_{n}(zeta_{n_field}^{exp})");
            }
        }
    }

    #[test]
    fn edge_cases() {
        let f = CycField::get(4);
        let xi = f.root(1);
        assert!(twisted_bernoulli(-1, &xi).unwrap().is_zero());
        assert_eq!(twisted_bernoulli(0, &f.one()), Err(Error::UnityTwist));

        // B_1(-1) = -1/4
        let f2 = CycField::get(2);
        let minus_one = f2.root(1);
        let b1 = twisted_bernoulli(1, &minus_one).unwrap();
        assert_eq!(b1.to_rational().unwrap(), Rational::new(-1, 4));
    }

    #[test]
    fn root_sums() {
        assert_eq!(root_sum_twisted(0, 2).unwrap(), Rational::new(1, 2));
        assert_eq!(root_sum_twisted(1, 2).unwrap(), Rational::new(-1, 4));
        // (1 - c^(n+1)) B_(n+1)/(n+1) for a few (n, c)
        for c in 2u32..=6 {
            for n in 0u32..=10 {
                let lhs = root_sum_twisted(n, c).unwrap();
                let rhs = (Rational::one() - Rational::from_int(c as i64).pow(n as i64 + 1))
                    * bernoulli(n + 1)
                    / Rational::from_int(n as i64 + 1);
                assert_eq!(lhs, rhs, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn multi_bernoulli_depth_two_closed_forms() {
        let f = CycField::get(12);
        let xi1 = f.root(4); // order 3
        let xi2 = f.root(3); // order 4
        let g1 = Rational::new(2, 1);
        let g2 = Rational::new(1, 3);
        let spec = TwistSpec::new(vec![xi1.clone(), xi2.clone()], vec![g1.clone(), g2.clone()])
            .unwrap();

        let d1 = one_minus(&xi1).invert().unwrap();
        let d2 = one_minus(&xi2).invert().unwrap();

        // B(0,0) = 1/((1-xi1)(1-xi2))
        let got = twisted_multi_bernoulli(&spec, &[0, 0]).unwrap();
        assert_eq!(got, d1.mul(&d2));

        // B(1,0) = xi1 gamma1 / ((1-xi1)^2 (1-xi2))
        let got = twisted_multi_bernoulli(&spec, &[1, 0]).unwrap();
        assert_eq!(got, xi1.mul(&d1.pow(2).unwrap()).mul(&d2).scale(&g1));

        // B(0,1) = (xi1 g1 + xi2 g2 - xi1 xi2 (g1+g2)) / ((1-xi1)^2 (1-xi2)^2)
        let got = twisted_multi_bernoulli(&spec, &[0, 1]).unwrap();
        let num = &(&xi1.scale(&g1) + &xi2.scale(&g2)) - &xi1.mul(&xi2).scale(&(&g1 + &g2));
        let expected = num.mul(&d1.pow(2).unwrap()).mul(&d2.pow(2).unwrap());
        assert_eq!(got, expected);

        // B(1,1) = (xi1^2 g1 (g1 - xi2(g1+g2)) + xi1 g1 (g1 - xi2(g1-g2)))
        //          / ((1-xi1)^3 (1-xi2)^2)
        let got = twisted_multi_bernoulli(&spec, &[1, 1]).unwrap();
        let t1 = xi1
            .pow(2)
            .unwrap()
            .mul(&(&f.from_rational(g1.clone()) - &xi2.scale(&(&g1 + &g2))))
            .scale(&g1);
        let t2 = xi1
            .mul(&(&f.from_rational(g1.clone()) - &xi2.scale(&(&g1 - &g2))))
            .scale(&g1);
        let expected = (&t1 + &t2).mul(&d1.pow(3).unwrap()).mul(&d2.pow(2).unwrap());
        assert_eq!(got, expected);
    }

    #[test]
    fn multi_bernoulli_matches_convolution() {
        // B(k,l) = sum_j C(l,j) B_(k+j)(xi1) B_(l-j)(xi2) g1^(k+j) g2^(l-j)
        let f = CycField::get(15);
        let xi1 = f.root(5); // order 3
        let xi2 = f.root(3); // order 5
        let g1 = Rational::new(1, 2);
        let g2 = Rational::new(3, 1);
        let spec =
            TwistSpec::new(vec![xi1.clone(), xi2.clone()], vec![g1.clone(), g2.clone()]).unwrap();
        for k in 0u32..=3 {
            for l in 0u32..=3 {
                let got = twisted_multi_bernoulli(&spec, &[k, l]).unwrap();
                let mut want = f.zero();
                for j in 0..=l {
                    let c = Rational::from_int(binomial(l, j));
                    let a = twisted_bernoulli((k + j) as i64, &xi1).unwrap();
                    let b = twisted_bernoulli((l - j) as i64, &xi2).unwrap();
                    let w = c * g1.pow((k + j) as i64) * g2.pow((l - j) as i64);
                    want = &want + &a.mul(&b).scale(&w);
                }
                assert_eq!(got, want, "(k,l)=({k},{l})");
            }
        }
    }

    #[test]
    fn degenerate_spec_refused() {
        let f = CycField::get(4);
        let spec = TwistSpec::new(
            vec![f.one(), f.root(1)],
            vec![Rational::one(), Rational::one()],
        )
        .unwrap();
        assert!(spec.is_degenerate());
        assert_eq!(
            twisted_multi_bernoulli(&spec, &[1, 1]),
            Err(Error::UnityTwist)
        );
    }

    #[test]
    fn log_der_identity() {
        // 1/(X-1) - k/(X^k-1) = sum_{xi in mu_k, xi != 1} 1/(1 - xi X)
        let x = Rational::new(7, 3);
        for k in 2u32..=6 {
            let f = CycField::get(k);
            let xq = f.from_rational(x.clone());
            let lhs_a = (&xq - &f.one()).invert().unwrap();
            let xk = f.from_rational(x.pow(k as i64));
            let lhs_b = (&xk - &f.one())
                .invert()
                .unwrap()
                .scale(&Rational::from_int(k as i64));
            let lhs = &lhs_a - &lhs_b;
            let mut rhs = f.zero();
            for a in 1..k {
                let xi = f.root(a as i64);
                rhs = &rhs + &(&f.one() - &xi.mul(&xq)).invert().unwrap();
            }
            assert_eq!(lhs, rhs, "k={k}");
        }
    }

    #[test]
    fn alpha_shifted_root_sum() {
        // sum_{xi^c=1, xi!=1} B_n(alpha xi) = c^(n+1) B_n(alpha^c) - B_n(alpha)
        // for alpha != 1 with alpha^c != 1; here alpha = zeta_3 in Q(zeta_6), c = 2.
        let f = CycField::get(6);
        let alpha = f.root(2); // zeta_3
        let c = 2u32;
        for n in 0u32..=6 {
            let mut lhs = f.zero();
            for k in 1..c {
                let xi = f.root_of_order(c, k as i64);
                lhs = &lhs + &twisted_bernoulli(n as i64, &alpha.mul(&xi)).unwrap();
            }
            let ac = alpha.pow(c as i64).unwrap();
            let rhs = &twisted_bernoulli(n as i64, &ac)
                .unwrap()
                .scale(&Rational::from_int(c as i64).pow(n as i64 + 1))
                - &twisted_bernoulli(n as i64, &alpha).unwrap();
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn rho_xi_double_sum() {
        // sum_{rho^p=1} sum_{xi^c=1, xi!=1} B_n(rho xi)
        //   = p^(n+1) (1 - c^(n+1)) B_(n+1)/(n+1), in Q(zeta_6) for p=3, c=2.
        let p = 3u32;
        let c = 2u32;
        let f = CycField::get(p * c);
        for n in 0u32..=6 {
            let mut acc = f.zero();
            for a in 0..p {
                let rho = f.root_of_order(p, a as i64);
                for k in 1..c {
                    let xi = f.root_of_order(c, k as i64);
                    acc = &acc + &twisted_bernoulli(n as i64, &rho.mul(&xi)).unwrap();
                }
            }
            let want = Rational::from_int(p as i64).pow(n as i64 + 1)
                * (Rational::one() - Rational::from_int(c as i64).pow(n as i64 + 1))
                * bernoulli(n + 1)
                / Rational::from_int(n as i64 + 1);
            assert_eq!(acc.to_rational().unwrap(), want, "n={n}");
        }
    }

    #[test]
    fn tilde_h_depth_one_constant_term() {
        let caps = [3u32];
        let s = tilde_h_coeffs(&[Rational::one()], &Rational::from_int(5), &caps);
        // (c-1)/2 = 2
        assert_eq!(s.coeff(&[0]), Some(&Rational::from_int(2)));
    }

    #[test]
    fn tilde_h_depth_two_matches_bernoulli_convolution() {
        // [t1^k t2^l] * k! l! = sum_j C(l,j)(1-c^(k+j+1))(1-c^(l-j+1))
        //   B_(k+j+1) B_(l-j+1) / ((k+j+1)(l-j+1)) g1^(k+j) g2^(l-j)
        let g1 = Rational::new(2, 3);
        let g2 = Rational::new(5, 1);
        let c = Rational::new(7, 2); // non-integer c is allowed here
        let caps = [3u32, 3];
        let s = tilde_h_coeffs(&[g1.clone(), g2.clone()], &c, &caps);
        for k in 0u32..=3 {
            for l in 0u32..=3 {
                let got = s.coeff(&[k, l]).cloned().unwrap_or_else(Rational::zero)
                    * Rational::from_int(factorial(k))
                    * Rational::from_int(factorial(l));
                let mut want = Rational::zero();
                for j in 0..=l {
                    let a = (Rational::one() - c.pow((k + j) as i64 + 1))
                        * bernoulli(k + j + 1)
                        / Rational::from_int((k + j) as i64 + 1);
                    let b = (Rational::one() - c.pow((l - j) as i64 + 1))
                        * bernoulli(l - j + 1)
                        / Rational::from_int((l - j) as i64 + 1);
                    want = want
                        + Rational::from_int(binomial(l, j))
                            * a
                            * b
                            * g1.pow((k + j) as i64)
                            * g2.pow((l - j) as i64);
                }
                assert_eq!(got, want, "(k,l)=({k},{l})");
            }
        }
    }
}
