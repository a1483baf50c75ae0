//! Koblitz measures m_xi and the Mazur-type average m~_c as cell functions,
//! plus a multi-dimensional Riemann-sum integrator over the restricted
//! region (Z_p^r)'.
//!
//! The integrator keeps everything inside Z/p^M by requiring c | p-1, so all
//! c-th roots of unity are Teichmuller lifts. Guaranteed output precision is
//! min(M, N) for 1-Lipschitz integrands.

use num::bigint::BigUint;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{pow_u, PadicInt};

/// Which measure sits on one axis.
#[derive(Clone, Debug)]
pub enum MeasureSpec {
    /// Koblitz measure for one Teichmuller root xi != 1 of order prime to p.
    SingleRoot { xi: PadicInt },
    /// Mazur average over all xi in mu_c \ {1}; requires c | p-1.
    CAverage { c: u32, p: u32, precision: u32 },
}

impl MeasureSpec {
    pub fn single_root(xi: PadicInt) -> Result<Self> {
        let p = xi.p();
        if !xi.is_unit() {
            return Err(Error::NonUnit);
        }
        let ord = p as i64 - 1;
        if !xi.pow(ord)?.congruent(&PadicInt::one(p, xi.precision()), xi.precision()) {
            return Err(Error::PreconditionViolation(
                "xi must be a Teichmuller root of unity".into(),
            ));
        }
        if xi.congruent(&PadicInt::one(p, xi.precision()), xi.precision()) {
            return Err(Error::PreconditionViolation("xi = 1 is not allowed".into()));
        }
        Ok(MeasureSpec::SingleRoot { xi })
    }

    pub fn c_average(c: u32, p: u32, precision: u32) -> Result<Self> {
        if c < 2 || (p - 1) % c != 0 {
            return Err(Error::UnsupportedC { c, p });
        }
        Ok(MeasureSpec::CAverage { c, p, precision })
    }

    fn p(&self) -> u32 {
        match self {
            MeasureSpec::SingleRoot { xi } => xi.p(),
            MeasureSpec::CAverage { p, .. } => *p,
        }
    }

    fn precision(&self) -> u32 {
        match self {
            MeasureSpec::SingleRoot { xi } => xi.precision(),
            MeasureSpec::CAverage { precision, .. } => *precision,
        }
    }
}

/// All c-th roots of unity in Z_p at the given precision (c | p-1),
/// as Teichmuller lifts of the residues a with a^c = 1 mod p.
pub fn teichmuller_roots_of_order(c: u32, p: u32, precision: u32) -> Result<Vec<PadicInt>> {
    if (p - 1) % c != 0 {
        return Err(Error::UnsupportedC { c, p });
    }
    let mut roots = Vec::new();
    for a in 1..p {
        let mut acc = 1u64;
        for _ in 0..c {
            acc = acc * a as u64 % p as u64;
        }
        if acc == 1 {
            roots.push(PadicInt::new(a as i64, p, precision).teichmuller()?);
        }
    }
    debug_assert_eq!(roots.len(), c as usize);
    Ok(roots)
}

/// m(j + p^N Z_p): xi^j / (1 - xi^(p^N)) for a single root, summed over
/// mu_c \ {1} for the Mazur average.
pub fn measure_cell(spec: &MeasureSpec, j: &BigUint, level: u32) -> Result<PadicInt> {
    match spec {
        MeasureSpec::SingleRoot { xi } => single_cell(xi, j, level),
        MeasureSpec::CAverage { c, p, precision } => {
            let mut acc = PadicInt::zero(*p, *precision);
            for xi in teichmuller_roots_of_order(*c, *p, *precision)? {
                if xi.congruent(&PadicInt::one(*p, *precision), 1) {
                    continue; // xi = 1 excluded
                }
                acc = acc.add(&single_cell(&xi, j, level)?);
            }
            Ok(acc)
        }
    }
}

fn single_cell(xi: &PadicInt, j: &BigUint, level: u32) -> Result<PadicInt> {
    let m = xi.modulus();
    let num = xi.residue().modpow(j, &m);
    let pn = pow_u(xi.p(), level);
    let xipn = xi.residue().modpow(&pn, &m);
    let den = PadicInt::new(
        num::bigint::BigInt::from(1) - num::bigint::BigInt::from(xipn),
        xi.p(),
        xi.precision(),
    );
    if !den.is_unit() {
        return Err(Error::DegenerateCell);
    }
    Ok(PadicInt::new(num::bigint::BigInt::from(num), xi.p(), xi.precision()).mul(&den.inv()?))
}

/// Membership filter for (Z_p^r)'_(gamma): every prefix sum
/// x_1 gamma_1 + ... + x_j gamma_j must be a unit.
#[derive(Clone, Debug)]
pub struct Region {
    gammas_mod_p: Vec<u32>,
    p: u32,
    pub restricted: bool,
}

impl Region {
    pub fn new(gammas_mod_p: Vec<u32>, p: u32, restricted: bool) -> Self {
        Region {
            gammas_mod_p,
            p,
            restricted,
        }
    }

    pub fn contains(&self, cell: &[u64]) -> bool {
        if !self.restricted {
            return true;
        }
        let p = self.p as u64;
        let mut acc = 0u64;
        for (a, g) in cell.iter().zip(&self.gammas_mod_p) {
            acc = (acc + a % p * (*g as u64)) % p;
            if acc == 0 {
                return false;
            }
        }
        true
    }
}

/// Riemann sum at level N: sum over cells (a_1..a_r) in [0, p^N)^r passing
/// the region filter of f(a) * prod_j m_j(a_j + p^N Z_p), reduced to
/// precision min(M, N).
pub fn integrate_riemann(
    f: &mut dyn FnMut(&[u64]) -> Result<PadicInt>,
    region: &Region,
    specs: &[MeasureSpec],
    level: u32,
    precision: u32,
) -> Result<PadicInt> {
    let r = specs.len();
    assert!(r >= 1 && level >= 1);
    let p = specs[0].p();
    assert!(specs.iter().all(|s| s.p() == p && s.precision() >= precision));

    let pn: u64 = u64::try_from(&pow_u(p, level)).expect("level too large to enumerate");

    // per-axis cell tables
    let mut cells: Vec<Vec<PadicInt>> = Vec::with_capacity(r);
    for spec in specs {
        let mut table = Vec::with_capacity(pn as usize);
        for j in 0..pn {
            table.push(measure_cell(spec, &BigUint::from(j), level)?);
        }
        cells.push(table);
    }

    let mut total = PadicInt::zero(p, precision);
    let mut tuple = vec![0u64; r];
    loop {
        if region.contains(&tuple) {
            let mut weight = f(&tuple)?;
            for (j, &a) in tuple.iter().enumerate() {
                weight = weight.mul(&cells[j][a as usize]);
            }
            total = total.add(&weight);
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == r {
                let digits = precision.min(level);
                return Ok(total.reduce_precision(digits));
            }
            tuple[i] += 1;
            if tuple[i] < pn {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}
