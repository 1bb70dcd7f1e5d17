//! Quadratic residue symbols over `F_q[x]`, the congruence count `ρ_m`,
//! and exhaustive character sums.
//!
//! The primitive symbol is `(a/b)` with `b` monic of positive degree: the
//! product of quadratic characters of `a` modulo the prime factors of `b`.
//! [`jacobi`] evaluates it with the reciprocity law
//! `(a/b)(b/a) = (-1)^{(q-1)/2 deg a deg b}` (monic `a`, `b`) and the
//! constant rule `(c/b) = χ(c)^{deg b}`; [`jacobi_euler`] is the slow
//! factor-by-factor Euler criterion kept as an oracle.

use serde::Serialize;
use serde_json::Value;

use crate::error::{sat_pow, Budget, Error, Result};
use crate::field::Field;
use crate::poly::{enumerate_monic, Factorization, Poly};

fn check_modulus(b: &Poly) -> Result<()> {
    if !b.is_monic() || b.is_constant() {
        return Err(Error::InvalidArgument(format!(
            "Jacobi symbol needs a monic non-constant modulus, got {b}"
        )));
    }
    Ok(())
}

/// `(a/b)` via reciprocity and Euclidean degree reduction.
pub fn jacobi(a: &Poly, b: &Poly) -> Result<i8> {
    check_modulus(b)?;
    let field = b.field().clone();
    let flip_on_odd_degrees = (field.order() - 1) / 2 % 2 == 1;
    let mut sign = 1i8;
    let mut num = a.rem(b)?;
    let mut den = b.clone();
    loop {
        if num.is_zero() {
            return Ok(0);
        }
        let deg_den = den.degree().unwrap();
        let c = num.leading().unwrap();
        if deg_den % 2 == 1 && field.legendre(c) == -1 {
            sign = -sign;
        }
        let monic = num.monic();
        if monic.is_one() {
            return Ok(sign);
        }
        let deg_num = monic.degree().unwrap();
        if flip_on_odd_degrees && deg_num % 2 == 1 && deg_den % 2 == 1 {
            sign = -sign;
        }
        num = den.rem(&monic)?;
        den = monic;
    }
}

/// Quadratic character of `a` modulo an irreducible `p`, by Euler's criterion.
pub fn legendre_mod_prime(a: &Poly, p: &Poly) -> Result<i8> {
    let (norm, _) = p.norm_sgn()?;
    let r = a.powmod((norm - 1) / 2, p)?;
    Ok(if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    })
}

/// `(a/b)` as a product of Euler-criterion symbols over the factorization of `b`.
pub fn jacobi_euler(a: &Poly, b: &Poly) -> Result<i8> {
    check_modulus(b)?;
    let fac = b.factor(0)?;
    let mut acc = 1i8;
    for (p, e) in &fac.factors {
        let s = legendre_mod_prime(a, p)?;
        if s == 0 {
            return Ok(0);
        }
        if e % 2 == 1 {
            acc *= s;
        }
    }
    Ok(acc)
}

fn check_odd_g(g: u32) -> Result<()> {
    if g % 2 == 0 {
        return Err(Error::InvalidArgument(format!("g must be odd, got {g}")));
    }
    Ok(())
}

/// `ρ_m(l)` from a factorization of `l`: `prod_{p | l} (1 + (m/p))`.
pub fn rho_factored(m: &Poly, l: &Factorization) -> Result<u64> {
    let mut acc = 1u64;
    for p in l.distinct_primes() {
        match jacobi(m, p)? {
            0 => return Err(Error::NotCoprime("rho requires gcd(m, l) = 1")),
            1 => acc *= 2,
            _ => return Ok(0),
        }
    }
    Ok(acc)
}

/// Number of residues `n mod l` with `n^2 ≡ m^g (mod l)`, for `gcd(m, l) = 1`
/// and odd `g`. Since `g` is odd, `(m^g/p) = (m/p)` and `ρ_m(p^α) = ρ_m(p)`.
pub fn rho(m: &Poly, l: &Poly, g: u32) -> Result<u64> {
    check_odd_g(g)?;
    check_modulus(l)?;
    if !m.is_coprime(l)? {
        return Err(Error::NotCoprime("rho requires gcd(m, l) = 1"));
    }
    rho_factored(m, &l.factor(0)?)
}

/// True when `b = c * s^2` for a constant `c` (including perfect squares).
pub fn is_constant_times_square(b: &Poly) -> Result<bool> {
    Ok(b.factor(0)?.factors.iter().all(|(_, e)| e % 2 == 0))
}

/// One row of a character-sum experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharSumResult {
    pub q: u64,
    /// Fixed `b` (coefficient array) for single sums, absent for double sums.
    pub b: Option<Value>,
    /// `deg b`, or the summation degree `B` for double sums.
    #[serde(rename = "B")]
    pub b_degree: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub value: i128,
    pub predicted: Option<i128>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    /// For even `D` in double sums: the closed form without the `(q-1)`
    /// factor, `(1 - 1/q) q^{B + D/2}`.
    pub predicted_without_unit_factor: Option<i128>,
}

impl CharSumResult {
    /// The `B_or_b` CSV column: the coefficient array of `b`, or `B`.
    pub fn b_column(&self) -> String {
        match &self.b {
            Some(v) => v.to_string(),
            None => self.b_degree.to_string(),
        }
    }
}

/// `sum_{a monic, deg a = D} (b/a)`. The predicted value `0` applies for
/// `D >= deg b` when `b` is not a constant times a square.
pub fn char_sum_fixed(b: &Poly, d: usize, budget: Budget) -> Result<CharSumResult> {
    let deg_b = match b.degree() {
        Some(k) if k >= 1 => k,
        _ => {
            return Err(Error::InvalidArgument(
                "character sum needs a non-constant b".into(),
            ))
        }
    };
    if d < 1 {
        return Err(Error::InvalidArgument("D must be at least 1".into()));
    }
    let field = b.field();
    budget.check(sat_pow(field.order(), d as u32))?;
    let mut value = 0i128;
    for a in enumerate_monic(field, d) {
        value += jacobi(b, &a)? as i128;
    }
    let hypothesis = !is_constant_times_square(b)?;
    let predicted = (hypothesis && d >= deg_b).then_some(0);
    Ok(CharSumResult {
        q: field.order(),
        b: Some(b.to_json()),
        b_degree: deg_b,
        d,
        value,
        predicted,
        matches: predicted.map(|p| p == value),
        predicted_without_unit_factor: None,
    })
}

/// `sum_{b monic, deg B} sum_{a monic, deg D} (b/a)` for `1 <= D <= B - 1`.
/// The prediction is `0` for odd `D` and `(q-1)(1-1/q) q^{B+D/2}` for even `D`.
pub fn char_sum_double(
    field: &Field,
    big_b: usize,
    d: usize,
    budget: Budget,
) -> Result<CharSumResult> {
    if d < 1 || d + 1 > big_b {
        return Err(Error::InvalidArgument(format!(
            "double character sum needs 1 <= D <= B - 1, got B = {big_b}, D = {d}"
        )));
    }
    let q = field.order();
    budget.check(sat_pow(q, (big_b + d) as u32))?;
    let moduli: Vec<Poly> = enumerate_monic(field, d).collect();
    let mut value = 0i128;
    for b in enumerate_monic(field, big_b) {
        for a in &moduli {
            value += jacobi(&b, a)? as i128;
        }
    }
    let (predicted, without) = if d % 2 == 1 {
        (0, None)
    } else {
        // (1 - 1/q) q^{B + D/2} = (q - 1) q^{B + D/2 - 1}
        let phi = (q as i128 - 1) * sat_pow(q, (big_b + d / 2 - 1) as u32) as i128;
        ((q as i128 - 1) * phi, Some(phi))
    };
    Ok(CharSumResult {
        q,
        b: None,
        b_degree: big_b,
        d,
        value,
        predicted: Some(predicted),
        matches: Some(predicted == value),
        predicted_without_unit_factor: without,
    })
}

/// Exact `sum_{m} sum_{t, (t,m)=1} ρ_m(t^2)` over monic `m`, `t` of degrees
/// `M`, `T`, with its `d = 1` main term `q^{M+T}(1 - 1/q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoAverage {
    pub q: u64,
    #[serde(rename = "M")]
    pub m_degree: usize,
    #[serde(rename = "T")]
    pub t_degree: usize,
    pub g: u32,
    pub total: i128,
    pub main_term: i128,
    pub residual: i128,
}

pub fn rho_average(
    field: &Field,
    m_degree: usize,
    t_degree: usize,
    g: u32,
    budget: Budget,
) -> Result<RhoAverage> {
    check_odd_g(g)?;
    if m_degree < 1 || t_degree < 1 {
        return Err(Error::InvalidArgument("M and T must be at least 1".into()));
    }
    let q = field.order();
    budget.check(sat_pow(q, (m_degree + t_degree) as u32))?;
    let ts: Vec<(Poly, Factorization)> = enumerate_monic(field, t_degree)
        .map(|t| {
            let fac = t.factor(0)?;
            Ok((t, fac))
        })
        .collect::<Result<_>>()?;
    let mut total = 0i128;
    for m in enumerate_monic(field, m_degree) {
        for (t, fac) in &ts {
            if m.is_coprime(t)? {
                // ρ_m(t^2) = ρ_m(t): same prime support
                total += rho_factored(&m, fac)? as i128;
            }
        }
    }
    let main_term = (q as i128 - 1) * sat_pow(q, (m_degree + t_degree - 1) as u32) as i128;
    Ok(RhoAverage {
        q,
        m_degree,
        t_degree,
        g,
        total,
        main_term,
        residual: total - main_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::enumerate_below;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn p(field: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(field, c)
    }

    fn rho_brute(m: &Poly, l: &Poly, g: u32) -> u64 {
        let target = m.pow(g).rem(l).unwrap();
        enumerate_below(l.field(), l.degree().unwrap())
            .filter(|n| n.mulmod(n, l).unwrap() == target)
            .count() as u64
    }

    #[test]
    fn jacobi_examples() {
        let f3 = f(3);
        let x = Poly::x(&f3);
        assert_eq!(jacobi(&x, &p(&f3, &[1, 1])).unwrap(), -1);
        assert_eq!(jacobi(&x, &p(&f3, &[1, 0, 1])).unwrap(), 1);
        assert_eq!(jacobi(&x, &p(&f3, &[0, 1, 1])).unwrap(), 0);
        assert!(jacobi(&x, &p(&f3, &[1, 2])).is_err());
        assert!(jacobi(&x, &Poly::one(&f3)).is_err());
    }

    #[test]
    fn jacobi_matches_euler_small() {
        for q in [3u64, 5, 9] {
            let field = f(q);
            let nums: Vec<Poly> = enumerate_below(&field, 3).collect();
            for d in 1..=2 {
                for b in enumerate_monic(&field, d) {
                    for a in &nums {
                        assert_eq!(jacobi(a, &b).unwrap(), jacobi_euler(a, &b).unwrap(), "({a}/{b})");
                    }
                }
            }
        }
    }

    #[test]
    fn rho_examples() {
        let f3 = f(3);
        let x = Poly::x(&f3);
        let l = p(&f3, &[1, 1]).pow(2);
        assert_eq!(rho(&x, &l, 3).unwrap(), 0);
        assert_eq!(rho_brute(&x, &l, 3), 0);
        let l = p(&f3, &[2, 1]);
        assert_eq!(rho(&x, &l, 3).unwrap(), 2);
        assert_eq!(rho_brute(&x, &l, 3), 2);
        // x+2 and x^2+1 are both primes with (x/p) = +1
        let l = p(&f3, &[2, 1]) * p(&f3, &[1, 0, 1]);
        assert_eq!(rho(&x, &l, 3).unwrap(), 4);
        assert!(matches!(rho(&x, &x, 3), Err(Error::NotCoprime(_))));
        assert!(rho(&x, &l, 4).is_err());
    }

    #[test]
    fn char_sum_fixed_examples() {
        let f3 = f(3);
        let x = Poly::x(&f3);
        let r = char_sum_fixed(&x, 1, Budget::default()).unwrap();
        assert_eq!((r.value, r.predicted), (0, Some(0)));
        let r = char_sum_fixed(&x, 2, Budget::default()).unwrap();
        assert_eq!((r.value, r.predicted), (0, Some(0)));
        let r = char_sum_fixed(&x.pow(2), 1, Budget::default()).unwrap();
        assert_eq!(r.predicted, None);
        // 2x^2 = 2 * x^2 is a constant times a square
        let r = char_sum_fixed(&p(&f3, &[0, 0, 2]), 2, Budget::default()).unwrap();
        assert_eq!(r.predicted, None);
        assert!(char_sum_fixed(&Poly::one(&f3), 1, Budget::default()).is_err());
    }

    #[test]
    fn char_sum_double_examples() {
        let f3 = f(3);
        let b = Budget::default();
        let r = char_sum_double(&f3, 2, 1, b).unwrap();
        assert_eq!((r.value, r.matches), (0, Some(true)));
        let r = char_sum_double(&f3, 3, 1, b).unwrap();
        assert_eq!((r.value, r.matches), (0, Some(true)));
        // Only square moduli a = s^2 survive: 3^{B-D} * sum_s phi(s^2) = 3 * 3 * 6.
        let r = char_sum_double(&f3, 3, 2, b).unwrap();
        assert_eq!(r.value, 54);
        assert_eq!(r.predicted, Some(108));
        assert_eq!(r.matches, Some(false));
        assert_eq!(r.predicted_without_unit_factor, Some(54));
        assert!(char_sum_double(&f3, 2, 2, b).is_err());
        assert!(char_sum_double(&f3, 5, 4, Budget(10)).is_err());
    }

    #[test]
    fn rho_average_examples() {
        let f3 = f(3);
        let b = Budget::default();
        let r = rho_average(&f3, 2, 1, 3, b).unwrap();
        assert_eq!(r.main_term, 18);
        assert_eq!(r.total, r.main_term + r.residual);
        let r5 = rho_average(&f3, 2, 1, 5, b).unwrap();
        assert_eq!(r.total, r5.total);
        let r = rho_average(&f3, 1, 1, 3, b).unwrap();
        assert_eq!(r.main_term, 6);
    }

    #[test]
    fn rho_average_matches_direct_sum() {
        // independent route: brute-force residue counts mod t^2
        let f3 = f(3);
        for (mdeg, tdeg) in [(1usize, 1usize), (2, 1)] {
            let mut total = 0i128;
            for m in enumerate_monic(&f3, mdeg) {
                for t in enumerate_monic(&f3, tdeg) {
                    if m.is_coprime(&t).unwrap() {
                        total += rho_brute(&m, &t.pow(2), 3) as i128;
                    }
                }
            }
            let r = rho_average(&f3, mdeg, tdeg, 3, Budget::default()).unwrap();
            assert_eq!(r.total, total);
        }
    }
}
