//! Dense univariate polynomials over `F_q`.
//!
//! Coefficients are stored constant term first with no trailing zeros, so
//! the zero polynomial is the empty vector and has no degree. The total
//! order on polynomials is by degree, then by coefficient index from the
//! leading term down; restricted to monic polynomials of a fixed degree it
//! coincides with [`enumerate_monic`] order.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Range, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{sat_pow, Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, Elem::ONE, 1)
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::from_elems(field, vec![c])
    }

    pub fn monomial(field: &Field, c: Elem, deg: usize) -> Poly {
        let mut coeffs = vec![Elem::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::from_elems(field, coeffs)
    }

    /// Builds a polynomial from raw coefficients (constant first), trimming
    /// trailing zeros.
    pub fn from_elems(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Coefficients given as integers, mapped through `Z -> F_p`.
    pub fn from_ints(field: &Field, ints: &[i64]) -> Poly {
        Poly::from_elems(field, ints.iter().map(|&n| field.from_int(n)).collect())
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`, convenient in degree comparisons.
    #[inline]
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Elem::ONE
    }

    #[inline]
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Leading coefficient (`sgn`), `None` for zero.
    #[inline]
    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Elem::ONE)
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Poly::from_elems(f, coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Poly::from_elems(f, coeffs))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Poly::from_elems(f, out))
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::from_elems(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// `self / sgn(self)`; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(c) if c == Elem::ONE => self.clone(),
            Some(c) => self.scale(self.field.inv(c).unwrap()),
        }
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q * b + r` with `deg r < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(b)?;
        let lead = b.leading().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        if self.coeffs.len() < b.coeffs.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv(lead).unwrap();
        let db = b.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + db], inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &bi) in b.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, bi));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_elems(f, quot), Poly::from_elems(f, rem)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    /// Quotient when `b` divides `self`, `None` otherwise.
    pub fn div_exact(&self, b: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.divmod(b)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn divides(&self, a: &Poly) -> Result<bool> {
        Ok(a.rem(self)?.is_zero())
    }

    pub fn mulmod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        self.try_mul(other)?.rem(modulus)
    }

    pub fn powmod(&self, mut k: u128, modulus: &Poly) -> Result<Poly> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(&self.field).rem(modulus)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mulmod(&base, modulus)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mulmod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::from_elems(f, coeffs)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Greatest common monic divisor.
    pub fn gcd_monic(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial("gcd of two zero polynomials"));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `(g, s, t)` with `g` monic and `s*self + t*other = g`.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial("gcd of two zero polynomials"));
        }
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = f.inv(r0.leading().unwrap()).unwrap();
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Inverse modulo `m`, or `None` when not coprime.
    pub fn inv_mod(&self, m: &Poly) -> Result<Option<Poly>> {
        let (g, s, _) = self.rem(m)?.ext_gcd(m)?;
        if g.is_one() {
            Ok(Some(s.rem(m)?))
        } else {
            Ok(None)
        }
    }

    pub fn is_coprime(&self, other: &Poly) -> Result<bool> {
        Ok(self.gcd_monic(other)?.is_one())
    }

    /// `(|f|, sgn f)` with `|f| = q^deg f`.
    pub fn norm_sgn(&self) -> Result<(u128, Elem)> {
        let d = self
            .degree()
            .ok_or(Error::ZeroPolynomial("norm of zero is undefined"))?;
        Ok((sat_pow(self.field.order(), d as u32), self.leading().unwrap()))
    }

    /// True iff no square of a non-constant polynomial divides `self`.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("square-freeness of zero"));
        }
        if self.is_constant() {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd_monic(&d)?.is_one())
    }

    /// Rabin's test. Constants are not irreducible.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let g = self.monic();
        let q = self.field.order() as u128;
        let x = Poly::x(&self.field);
        let frob = |p: &Poly| p.powmod(q, &g).unwrap();
        // x^{q^k} mod g for k = 0..=n
        let mut powers = Vec::with_capacity(n + 1);
        powers.push(x.rem(&g).unwrap());
        for k in 1..=n {
            let next = frob(&powers[k - 1]);
            powers.push(next);
        }
        if powers[n] != powers[0] {
            return false;
        }
        prime_divisors(n as u64).into_iter().all(|r| {
            let h = &powers[n / r as usize] - &x;
            g.gcd_monic(&h).unwrap().is_one()
        })
    }

    /// `self^{1/p}` for a polynomial in `x^p`.
    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        // c^{1/p} = c^{p^{e-1}}
        let root_exp = (f.characteristic() as u128).pow(f.degree() - 1);
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.pow(c, root_exp))
            .collect();
        Poly::from_elems(f, coeffs)
    }

    /// Complete factorization into a unit and monic irreducible powers.
    /// Equal-degree splitting draws from a generator seeded with `seed`.
    pub fn factor(&self, seed: u64) -> Result<Factorization> {
        let unit = self
            .leading()
            .ok_or(Error::ZeroPolynomial("factorization of zero"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        for (sqf, mult) in squarefree_decomposition(&self.monic()) {
            for (block, d) in distinct_degree(&sqf) {
                let mut parts = Vec::new();
                equal_degree(&block, d, &mut rng, &mut parts);
                factors.extend(parts.into_iter().map(|p| (p, mult)));
            }
        }
        factors.sort();
        // Merge equal primes (cannot happen for a correct decomposition, kept
        // so the invariant below is checked rather than assumed).
        let mut merged: Vec<(Poly, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((last, le)) if *last == p => *le += e,
                _ => merged.push((p, e)),
            }
        }
        let fac = Factorization {
            unit,
            factors: merged,
        };
        for (p, _) in &fac.factors {
            if !p.is_monic() || !p.is_irreducible() {
                return Err(Error::Invariant(format!("factor {p} failed irreducibility check")));
            }
        }
        if fac.expand(&self.field) != *self {
            return Err(Error::Invariant("factorization does not multiply out".into()));
        }
        Ok(fac)
    }

    /// Little-endian coefficient array; prime-field coefficients as integers,
    /// extension-field coefficients as residue vectors.
    pub fn to_json(&self) -> Value {
        let f = &self.field;
        Value::Array(
            self.coeffs
                .iter()
                .map(|&c| {
                    if f.degree() == 1 {
                        Value::from(c.index())
                    } else {
                        Value::from(f.digits(c))
                    }
                })
                .collect(),
        )
    }

    pub fn from_json(field: &Field, value: &Value) -> Result<Poly> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Parse(format!("expected a coefficient array, got {value}")))?;
        let coeffs = arr
            .iter()
            .map(|v| parse_coeff_json(field, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_elems(field, coeffs))
    }

    /// Parses either a JSON coefficient array (`[1,2,1,4]`) or an expression
    /// such as `4*x^3+x^2+2*x+1` (prime fields; integer coefficients).
    pub fn parse(field: &Field, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.starts_with('[') {
            let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return Poly::from_json(field, &v);
        }
        parse_expression(field, s)
    }
}

fn parse_coeff_json(field: &Field, v: &Value) -> Result<Elem> {
    if let Some(n) = v.as_i64() {
        return Ok(field.from_int(n));
    }
    if let Some(arr) = v.as_array() {
        let digits = arr
            .iter()
            .map(|d| {
                d.as_u64()
                    .and_then(|d| u32::try_from(d).ok())
                    .ok_or_else(|| Error::Parse(format!("bad residue digit {d}")))
            })
            .collect::<Result<Vec<_>>>()?;
        return field.from_digits(&digits);
    }
    Err(Error::Parse(format!("bad coefficient {v}")))
}

fn parse_expression(field: &Field, s: &str) -> Result<Poly> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bad = |t: &str| Error::Parse(format!("cannot parse term '{t}'"));
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in cleaned.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !cleaned[..i].ends_with('^') {
            terms.push(&cleaned[start..i]);
            start = i;
        }
    }
    terms.push(&cleaned[start..]);

    let mut acc: Vec<i64> = Vec::new();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1i64, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        if body.is_empty() {
            return Err(bad(term));
        }
        let (coef, exp) = match body.find('x') {
            None => (body.parse::<i64>().map_err(|_| bad(term))?, 0usize),
            Some(pos) => {
                let c = body[..pos].strip_suffix('*').unwrap_or(&body[..pos]);
                let c = if c.is_empty() {
                    1
                } else {
                    c.parse::<i64>().map_err(|_| bad(term))?
                };
                let rest = &body[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| bad(term))?
                };
                (c, e)
            }
        };
        if acc.len() <= exp {
            acc.resize(exp + 1, 0);
        }
        acc[exp] += sign * coef;
    }
    Ok(Poly::from_ints(field, &acc))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = &self.field;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if field.degree() == 1 {
                c.index().to_string()
            } else {
                format!("{:?}", field.digits(c))
            };
            match (i, c == Elem::ONE) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{cs}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{cs}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("polynomials over different fields")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_elems(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// `unit * prod p_i^{e_i}` with distinct monic irreducible `p_i`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit), |acc, (p, e)| &acc * &p.pow(*e))
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(p, _)| p)
    }
}

pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Square-free decomposition of a monic polynomial: pairs `(a_i, i)` with
/// `f = prod a_i^i`, each `a_i` square-free and monic.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let p = f.field().characteristic();
    let mut c = f.gcd_monic(&f.derivative()).unwrap();
    let mut w = f.div_exact(&c).unwrap().unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd_monic(&c).unwrap();
        let fac = w.div_exact(&y).unwrap().unwrap();
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = c.div_exact(&y).unwrap().unwrap();
        w = y;
        i += 1;
    }
    if !c.is_one() {
        for (fac, j) in squarefree_decomposition(&c.pth_root()) {
            out.push((fac, j * p));
        }
    }
    out
}

/// Splits a monic square-free polynomial into products of equal-degree primes.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.order() as u128;
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg() >= 2 * d as isize {
        h = h.powmod(q, &rest).unwrap();
        let g = rest.gcd_monic(&(&h - &x)).unwrap();
        if !g.is_one() {
            rest = rest.div_exact(&g).unwrap().unwrap();
            h = h.rem(&rest).unwrap();
            out.push((g, d));
        }
        d += 1;
    }
    if !rest.is_one() {
        let deg = rest.degree().unwrap();
        out.push((rest, deg));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of degree-`d` primes (odd `q`).
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let q = field.order();
    let half = ((q - 1) / 2) as u128;
    loop {
        let a = Poly::from_elems(
            field,
            (0..n).map(|_| Elem(rng.gen_range(0..q as u32))).collect(),
        );
        if a.is_constant() {
            continue;
        }
        // a^{(q^d - 1)/2} = (a * a^q * ... * a^{q^{d-1}})^{(q-1)/2}
        let mut conj = a.clone();
        let mut norm = a.clone();
        for _ in 1..d {
            conj = conj.powmod(q as u128, f).unwrap();
            norm = norm.mulmod(&conj, f).unwrap();
        }
        let b = norm.powmod(half, f).unwrap();
        let g = f.gcd_monic(&(&b - &Poly::one(field))).unwrap();
        if !g.is_one() && g.degree() != f.degree() {
            let cofactor = f.div_exact(&g).unwrap().unwrap();
            equal_degree(&g, d, rng, out);
            equal_degree(&cofactor, d, rng, out);
            return;
        }
    }
}

/// Monic polynomial of degree `degree` whose lower coefficients are the
/// base-`q` digits of `index` (constant coefficient least significant).
pub fn monic_from_index(field: &Field, degree: usize, mut index: u128) -> Poly {
    let q = field.order() as u128;
    let mut coeffs = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        coeffs.push(Elem((index % q) as u32));
        index /= q;
    }
    coeffs.push(Elem::ONE);
    Poly::from_elems(field, coeffs)
}

/// Polynomial of degree `< len` with base-`q` digits `index` (zero at index 0).
pub fn poly_from_index(field: &Field, len: usize, mut index: u128) -> Poly {
    let q = field.order() as u128;
    let coeffs = (0..len)
        .map(|_| {
            let c = Elem((index % q) as u32);
            index /= q;
            c
        })
        .collect();
    Poly::from_elems(field, coeffs)
}

/// Iterator over monic polynomials of one degree, in index order.
#[derive(Clone, Debug)]
pub struct MonicIter {
    field: Field,
    degree: usize,
    next: u128,
    end: u128,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.next >= self.end {
            return None;
        }
        let p = monic_from_index(&self.field, self.degree, self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for MonicIter {}

/// All `q^degree` monic polynomials of the given degree, constant
/// coefficient varying fastest: for `F_3`, degree 1 gives `x, x+1, x+2`.
pub fn enumerate_monic(field: &Field, degree: usize) -> MonicIter {
    monic_range(field, degree, 0..sat_pow(field.order(), degree as u32))
}

/// A contiguous slice of [`enumerate_monic`] by index.
pub fn monic_range(field: &Field, degree: usize, range: Range<u128>) -> MonicIter {
    let total = sat_pow(field.order(), degree as u32);
    MonicIter {
        field: field.clone(),
        degree,
        next: range.start.min(total),
        end: range.end.min(total),
    }
}

/// Partition of the monic polynomials of `degree` by their top
/// `prefix_len` non-leading coefficients; each block is a contiguous index
/// range, listed in enumeration order.
pub fn monic_blocks(field: &Field, degree: usize, prefix_len: usize) -> Vec<Range<u128>> {
    let prefix_len = prefix_len.min(degree);
    let blocks = sat_pow(field.order(), prefix_len as u32);
    let size = sat_pow(field.order(), (degree - prefix_len) as u32);
    (0..blocks).map(|b| b * size..(b + 1) * size).collect()
}

/// All polynomials of degree `< len` (including zero), `q^len` of them.
pub fn enumerate_below(field: &Field, len: usize) -> impl Iterator<Item = Poly> + '_ {
    (0..sat_pow(field.order(), len as u32)).map(move |i| poly_from_index(field, len, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn p(field: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(field, c)
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = f(5);
        let x = Poly::x(&f5);
        let one = Poly::one(&f5);
        let lhs = (&x + &one).pow(2) - x.pow(3);
        assert_eq!(lhs, p(&f5, &[1, 2, 1, 4]));
        assert_eq!(&lhs + &Poly::zero(&f5), lhs);

        let f3 = f(3);
        assert_eq!(p(&f3, &[1, 1]) * p(&f3, &[2, 1]), p(&f3, &[2, 0, 1]));
    }

    #[test]
    fn mismatched_fields() {
        let a = Poly::x(&f(3));
        let b = Poly::x(&f(5));
        assert_eq!(a.try_add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.try_mul(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn divmod_examples() {
        let f5 = f(5);
        let a = p(&f5, &[1, 2, 1, 4]);
        let b = p(&f5, &[1, 1, 1]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(r, p(&f5, &[4, 1]));
        assert_eq!(&(&q * &b) + &r, a);
        let (q, r) = a.divmod(&a).unwrap();
        assert!(q.is_one() && r.is_zero());
        let (q, r) = b.divmod(&a).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, b);
        assert_eq!(a.divmod(&Poly::zero(&f5)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let f5 = f(5);
        assert!(p(&f5, &[0, 1]).gcd_monic(&p(&f5, &[1, 1])).unwrap().is_one());
        let f3 = f(3);
        let g = p(&f3, &[0, -1, 1]).gcd_monic(&p(&f3, &[-1, 0, 1])).unwrap();
        assert_eq!(g, p(&f3, &[2, 1]));
        let a = p(&f3, &[1, 0, 2]);
        assert_eq!(a.gcd_monic(&Poly::zero(&f3)).unwrap(), a.monic());
        assert!(Poly::zero(&f3).gcd_monic(&Poly::zero(&f3)).is_err());
    }

    #[test]
    fn norm_and_sign() {
        let f3 = f(3);
        assert_eq!(p(&f3, &[1, 0, 2]).norm_sgn().unwrap(), (9, f3.from_int(2)));
        let f5 = f(5);
        assert_eq!(p(&f5, &[1, 2, 1, 4]).norm_sgn().unwrap(), (125, f5.from_int(4)));
        assert_eq!(p(&f5, &[3]).norm_sgn().unwrap(), (1, f5.from_int(3)));
        assert!(Poly::zero(&f5).norm_sgn().is_err());
    }

    #[test]
    fn squarefree_examples() {
        let f5 = f(5);
        assert!(p(&f5, &[1, 2, 1, 4]).is_squarefree().unwrap());
        let f3 = f(3);
        assert!(!p(&f3, &[0, 0, 1]).is_squarefree().unwrap());
        assert!(p(&f3, &[0, -1, 0, 1]).is_squarefree().unwrap());
        // x^3 + 1 = (x + 1)^3 has zero derivative in characteristic 3.
        assert!(!p(&f3, &[1, 0, 0, 1]).is_squarefree().unwrap());
        assert!(Poly::zero(&f3).is_squarefree().is_err());
    }

    #[test]
    fn factor_examples() {
        let f3 = f(3);
        let fac = p(&f3, &[0, -1, 0, 1]).factor(0).unwrap();
        assert_eq!(fac.unit, Elem::ONE);
        assert_eq!(
            fac.factors,
            vec![(p(&f3, &[0, 1]), 1), (p(&f3, &[1, 1]), 1), (p(&f3, &[2, 1]), 1)]
        );
        let fac = p(&f3, &[0, 0, 2]).factor(0).unwrap();
        assert_eq!(fac.unit, f3.from_int(2));
        assert_eq!(fac.factors, vec![(p(&f3, &[0, 1]), 2)]);
        let fac = p(&f3, &[1, 0, 1]).factor(0).unwrap();
        assert_eq!(fac.factors, vec![(p(&f3, &[1, 0, 1]), 1)]);
    }

    #[test]
    fn factor_pth_powers() {
        let f3 = f(3);
        // (x^2+1)^3 (x+2)^4 x over F_3
        let g = p(&f3, &[1, 0, 1]).pow(3) * p(&f3, &[2, 1]).pow(4) * Poly::x(&f3);
        let fac = g.factor(7).unwrap();
        assert_eq!(
            fac.factors,
            vec![(p(&f3, &[0, 1]), 1), (p(&f3, &[2, 1]), 4), (p(&f3, &[1, 0, 1]), 3)]
        );
        let f9 = f(9);
        let z = f9.from_digits(&[0, 1]).unwrap();
        let lin = Poly::from_elems(&f9, vec![z, Elem::ONE]);
        let fac = lin.pow(9).factor(1).unwrap();
        assert_eq!(fac.factors, vec![(lin, 9)]);
    }

    #[test]
    fn enumerate_examples() {
        let f3 = f(3);
        let lin: Vec<_> = enumerate_monic(&f3, 1).collect();
        assert_eq!(lin, vec![p(&f3, &[0, 1]), p(&f3, &[1, 1]), p(&f3, &[2, 1])]);
        let consts: Vec<_> = enumerate_monic(&f3, 0).collect();
        assert_eq!(consts, vec![Poly::one(&f3)]);
        let quad: Vec<_> = enumerate_monic(&f3, 2).collect();
        assert_eq!(quad.len(), 9);
        assert_eq!(quad[0], p(&f3, &[0, 0, 1]));
        assert_eq!(quad[8], p(&f3, &[2, 2, 1]));
        assert!(quad.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumerate_counts_and_blocks() {
        for q in [3u64, 5] {
            let field = f(q);
            for d in 0..=4usize {
                let all: std::collections::HashSet<_> = enumerate_monic(&field, d).collect();
                assert_eq!(all.len() as u128, sat_pow(q, d as u32));
                assert!(all.iter().all(|p| p.is_monic() && p.degree() == Some(d)));
                let blocks = monic_blocks(&field, d, 2);
                let joined: Vec<_> = blocks
                    .iter()
                    .flat_map(|r| monic_range(&field, d, r.clone()))
                    .collect();
                assert_eq!(joined, enumerate_monic(&field, d).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn squarefree_agrees_with_factor_exhaustive() {
        let f3 = f(3);
        for d in 1..=4 {
            for g in enumerate_monic(&f3, d) {
                let fac = g.factor(0).unwrap();
                let all_one = fac.factors.iter().all(|(_, e)| *e == 1);
                assert_eq!(g.is_squarefree().unwrap(), all_one, "{g}");
            }
        }
    }

    #[test]
    fn irreducible_count_degree_two_f3() {
        let f3 = f(3);
        let irr: Vec<_> = enumerate_monic(&f3, 2).filter(|g| g.is_irreducible()).collect();
        assert_eq!(irr, vec![p(&f3, &[1, 0, 1]), p(&f3, &[2, 1, 1]), p(&f3, &[2, 2, 1])]);
    }

    #[test]
    fn parse_formats() {
        let f5 = f(5);
        let a = Poly::parse(&f5, "[1,2,1,4]").unwrap();
        let b = Poly::parse(&f5, "4*x^3+x^2+2*x+1").unwrap();
        let c = Poly::parse(&f5, "-x^3 + x^2 + 2x + 1").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.to_json(), serde_json::json!([1, 2, 1, 4]));
        assert_eq!(a.to_string(), "4*x^3 + x^2 + 2*x + 1");
        assert!(Poly::parse(&f5, "3*y").is_err());
        let f9 = f(9);
        let e = Poly::parse(&f9, "[[1,2],[0,1],1]").unwrap();
        assert_eq!(e.to_json(), serde_json::json!([[1, 2], [0, 1], [1, 0]]));
        assert_eq!(Poly::from_json(&f9, &e.to_json()).unwrap(), e);
    }

    #[test]
    fn ext_gcd_bezout() {
        let f5 = f(5);
        let a = p(&f5, &[1, 2, 1, 4]);
        let b = p(&f5, &[3, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        let inv = b.inv_mod(&a).unwrap().unwrap();
        assert!(inv.mulmod(&b, &a).unwrap().is_one());
    }

    fn arb_poly(q: u64, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..q as u32, 0..=max_len).prop_map(move |c| {
            let field = Field::with_order(q).unwrap();
            Poly::from_elems(&field, c.into_iter().map(Elem).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn factor_round_trip(
            (qi, coeffs, seed) in (0usize..3, prop::collection::vec(0u32..9, 1..=9), any::<u64>())
        ) {
            let q = [3u64, 5, 9][qi];
            let field = Field::with_order(q).unwrap();
            let g = Poly::from_elems(&field, coeffs.into_iter().map(|c| Elem(c % q as u32)).collect());
            prop_assume!(!g.is_zero());
            let fac = g.factor(seed).unwrap();
            prop_assert_eq!(&fac.expand(&field), &g);
            for w in fac.factors.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            prop_assert_eq!(g.factor(seed.wrapping_add(1)).unwrap(), fac);
        }

        #[test]
        fn divmod_identity(a in arb_poly(5, 9), b in arb_poly(5, 5)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.deg() < b.deg());
        }
    }
}
