//! Möbius, divisor-count and Euler functions on `F_q[x]`, the prime
//! counting function `π(U)`, and the exhaustive degree sums over monic
//! polynomials of a fixed degree.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{sat_pow, Budget, Error, Result};
use crate::field::Field;
use crate::poly::{monic_blocks, monic_range, Factorization, Poly};

/// Seed for factorizations whose result is seed-independent anyway.
const SEED: u64 = 0;

pub fn mobius_of(fac: &Factorization) -> i8 {
    if fac.factors.iter().any(|(_, e)| *e > 1) {
        0
    } else if fac.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn divisor_count_of(fac: &Factorization) -> u128 {
    fac.factors.iter().map(|(_, e)| *e as u128 + 1).product()
}

pub fn euler_phi_of(fac: &Factorization) -> u128 {
    fac.factors
        .iter()
        .map(|(p, e)| {
            let (norm, _) = p.norm_sgn().unwrap();
            norm.pow(*e - 1) * (norm - 1)
        })
        .product()
}

/// `μ(f)`: zero unless `f` is square-free, else `(-1)^t` for `t` prime factors.
pub fn mobius(f: &Poly) -> Result<i8> {
    Ok(mobius_of(&f.factor(SEED)?))
}

/// Number of monic divisors of `f`.
pub fn divisor_count(f: &Poly) -> Result<u128> {
    Ok(divisor_count_of(&f.factor(SEED)?))
}

/// `φ(f) = |(A/fA)^×|`.
pub fn euler_phi(f: &Poly) -> Result<u128> {
    Ok(euler_phi_of(&f.factor(SEED)?))
}

/// Classical Möbius function on positive integers.
pub fn mobius_int(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `u`, by Möbius inversion of
/// `q^U = sum_{D | U} D π(D)`.
pub fn irreducible_count(field: &Field, u: u32) -> Result<u128> {
    if u < 1 {
        return Err(Error::InvalidArgument("π(U) needs U >= 1".into()));
    }
    let q = field.order();
    let total: i128 = (1..=u)
        .filter(|d| u % d == 0)
        .map(|d| mobius_int(d as u64) as i128 * sat_pow(q, u / d) as i128)
        .sum();
    Ok((total / u as i128) as u128)
}

/// Exhaustive sums of `μ`, `φ`, `d` over monic polynomials of degree `U`,
/// together with the number of irreducibles among them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSummary {
    pub q: u64,
    #[serde(rename = "U")]
    pub degree: u32,
    pub sum_mu: i128,
    pub sum_phi: u128,
    pub sum_d: u128,
    pub pi: u128,
}

#[derive(Default)]
struct Partial {
    mu: i128,
    phi: u128,
    d: u128,
    irreducible: u128,
}

/// Enumerates all `q^U` monic polynomials of degree `U`, then checks the
/// sums against their closed forms before returning.
pub fn degree_summary(field: &Field, u: u32, budget: Budget) -> Result<DegreeSummary> {
    let q = field.order();
    let count = sat_pow(q, u);
    budget.check(count)?;
    let degree = u as usize;
    let parts: Vec<Partial> = monic_blocks(field, degree, degree.min(2))
        .into_par_iter()
        .map(|range| {
            let mut acc = Partial::default();
            for f in monic_range(field, degree, range) {
                let fac = f.factor(SEED).expect("nonzero");
                acc.mu += mobius_of(&fac) as i128;
                acc.phi += euler_phi_of(&fac);
                acc.d += divisor_count_of(&fac);
                if fac.factors.len() == 1 && fac.factors[0].1 == 1 {
                    acc.irreducible += 1;
                }
            }
            acc
        })
        .collect();
    let mut summary = DegreeSummary {
        q,
        degree: u,
        sum_mu: 0,
        sum_phi: 0,
        sum_d: 0,
        pi: 0,
    };
    for part in parts {
        summary.sum_mu += part.mu;
        summary.sum_phi += part.phi;
        summary.sum_d += part.d;
        summary.pi += part.irreducible;
    }
    check_closed_forms(field, &summary)?;
    Ok(summary)
}

fn check_closed_forms(field: &Field, s: &DegreeSummary) -> Result<()> {
    let q = field.order();
    let u = s.degree;
    let expected_mu = match u {
        0 => 1,
        1 => -(q as i128),
        _ => 0,
    };
    let expected_phi = if u == 0 {
        1
    } else {
        sat_pow(q, 2 * u - 1) * (q as u128 - 1)
    };
    let expected_d = sat_pow(q, u) * (u as u128 + 1);
    let mut failures = Vec::new();
    if s.sum_mu != expected_mu {
        failures.push(format!("sum mu = {} != {expected_mu}", s.sum_mu));
    }
    if s.sum_phi != expected_phi {
        failures.push(format!("sum phi = {} != {expected_phi}", s.sum_phi));
    }
    if s.sum_d != expected_d {
        failures.push(format!("sum d = {} != {expected_d}", s.sum_d));
    }
    if u >= 1 {
        let gauss = irreducible_count(field, u)?;
        if s.pi != gauss {
            failures.push(format!("enumerated pi = {} != {gauss}", s.pi));
        }
        if s.pi * u as u128 > sat_pow(q, u) {
            failures.push(format!("pi = {} exceeds q^U/U", s.pi));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::Invariant(format!(
            "degree summary q={q} U={u}: {}",
            failures.join("; ")
        )))
    }
}
