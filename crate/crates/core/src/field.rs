//! Arithmetic in `F_q`, `q = p^e` with `p` an odd prime.
//!
//! An element is stored as the integer `a_0 + a_1 p + ... + a_{e-1} p^{e-1}`
//! where `a_0 + a_1 x + ...` is its residue modulo the defining polynomial.
//! That integer is the canonical form: two elements are equal iff their
//! indices are equal. For `e > 1` multiplication goes through discrete
//! log/antilog tables built once per field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{enumerate_monic, Poly};

/// Largest extension field for which tables are built.
const MAX_EXT_ORDER: u64 = 1 << 22;

/// A field element in canonical (index) form, meaningful only relative to
/// the [`Field`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    /// Addition table, `q * q` entries, only for small extension fields.
    add: Option<Vec<u32>>,
}

const ADD_TABLE_LIMIT: u32 = 256;

/// Parameters of `F_q`. Shared through [`Field`].
#[derive(Debug)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Monic defining polynomial over `F_p`, constant term first, length `e + 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Handle to a finite field; cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.e, self.0.modulus)
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest == 1 && p < (1 << 31) {
        Some((p as u32, e))
    } else {
        None
    }
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if p == 2 || !is_prime(p as u64) || p >= (1 << 31) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime below 2^31")));
        }
        Ok(Field(Arc::new(FieldSpec {
            p,
            e: 1,
            q: p,
            modulus: vec![0, 1],
            tables: None,
        })))
    }

    /// `F_{p^e}` defined by the least monic irreducible of degree `e` in
    /// enumeration order (constant coefficient varying fastest).
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let base = Field::prime(p)?;
        if e == 1 {
            return Ok(base);
        }
        check_ext_size(p, e)?;
        let modulus = enumerate_monic(&base, e as usize)
            .find(|f| f.is_irreducible())
            .expect("irreducible polynomials exist in every degree");
        Self::build(p, e, modulus.coeffs().iter().map(|c| c.0).collect())
    }

    /// `F_q` for an odd prime power `q`, with the default modulus.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Field::new(p, e)
    }

    /// `F_{p^e}` with a caller-supplied modulus (e.g. a Conway polynomial),
    /// constant term first.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field> {
        let base = Field::prime(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree >= 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        if e == 1 {
            return Ok(base);
        }
        check_ext_size(p, e)?;
        let coeffs = modulus
            .iter()
            .map(|&c| base.elem(c))
            .collect::<Result<Vec<_>>>()?;
        if !Poly::from_elems(&base, coeffs).is_irreducible() {
            return Err(Error::InvalidField("modulus is not irreducible".into()));
        }
        Self::build(p, e, modulus.to_vec())
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Result<Field> {
        let q = p.pow(e);
        let mut spec = FieldSpec {
            p,
            e,
            q,
            modulus,
            tables: None,
        };
        spec.tables = Some(build_tables(&spec));
        Ok(Field(Arc::new(spec)))
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.e
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.0.q as u64
    }

    /// Defining polynomial over `F_p`, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Element with the given canonical index.
    pub fn elem(&self, index: u32) -> Result<Elem> {
        if index < self.0.q {
            Ok(Elem(index))
        } else {
            Err(Error::InvalidArgument(format!(
                "{index} is not an element index of a field of order {}",
                self.0.q
            )))
        }
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Residue vector `[a_0, .., a_{e-1}]`.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.e)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() > self.0.e as usize || digits.iter().any(|&d| d >= self.0.p) {
            return Err(Error::InvalidArgument(format!(
                "{digits:?} is not a residue vector for {self:?}"
            )));
        }
        Ok(Elem(digits.iter().rev().fold(0, |acc, &d| acc * self.0.p + d)))
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.e == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Elem((s % p as u64) as u32);
        }
        if let Some(add) = self.0.tables.as_ref().and_then(|t| t.add.as_ref()) {
            return Elem(add[(a.0 * self.0.q + b.0) as usize]);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if self.0.e == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &self.0.tables {
            None => Elem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Some(t) => {
                let n = self.0.q - 1;
                let s = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % n as u64;
                Elem(t.exp[s as usize])
            }
        }
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        match &self.0.tables {
            None => Some(self.pow(a, (self.0.p - 2) as u128)),
            Some(t) => {
                let n = self.0.q - 1;
                let l = t.log[a.0 as usize];
                Some(Elem(t.exp[((n - l) % n) as usize]))
            }
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    /// `a^k` with `0^0 = 1`.
    pub fn pow(&self, a: Elem, k: u128) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let n = (self.0.q - 1) as u128;
            let l = (t.log[a.0 as usize] as u128 * (k % n)) % n;
            return Elem(t.exp[l as usize]);
        }
        let p = self.0.p as u64;
        let (mut base, mut acc, mut k) = (a.0 as u64, 1u64, k);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            k >>= 1;
        }
        Elem(acc as u32)
    }

    /// Quadratic character: `0`, `1` or `-1`, via Euler's criterion.
    pub fn legendre(&self, c: Elem) -> i8 {
        if c.is_zero() {
            return 0;
        }
        let r = self.pow(c, ((self.0.q - 1) / 2) as u128);
        if r == Elem::ONE {
            1
        } else {
            -1
        }
    }

    /// Wraps a raw element with its field.
    pub fn wrap(&self, value: Elem) -> FieldElem {
        FieldElem {
            field: self.clone(),
            value,
        }
    }
}

fn check_ext_size(p: u32, e: u32) -> Result<()> {
    let q = crate::error::sat_pow(p as u64, e);
    if q > MAX_EXT_ORDER as u128 {
        return Err(Error::InvalidField(format!(
            "extension fields are limited to order {MAX_EXT_ORDER}"
        )));
    }
    Ok(())
}

/// Multiplies two residue vectors modulo the defining polynomial.
fn mul_residues(spec: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let p = spec.p as u64;
    let e = spec.e as usize;
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..e {
            let m = spec.modulus[i] as u64;
            prod[k - e + i] = (prod[k - e + i] + (p - m) * c) % p;
        }
    }
    prod.truncate(e);
    prod
}

fn build_tables(spec: &FieldSpec) -> Tables {
    let p = spec.p as u64;
    let q = spec.q as usize;
    let e = spec.e as usize;
    let to_vec = |mut idx: usize| {
        (0..e)
            .map(|_| {
                let d = (idx as u64) % p;
                idx /= p as usize;
                d
            })
            .collect::<Vec<u64>>()
    };
    let to_idx = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32;

    'candidate: for g in 2..q {
        let gen = to_vec(g);
        let mut exp = Vec::with_capacity(q - 1);
        let mut cur = to_vec(1);
        for k in 0..q - 1 {
            let idx = to_idx(&cur);
            if k > 0 && idx == 1 {
                continue 'candidate;
            }
            exp.push(idx);
            cur = mul_residues(spec, &cur, &gen);
        }
        let mut log = vec![0u32; q];
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        let add = (spec.q <= ADD_TABLE_LIMIT).then(|| {
            let mut table = Vec::with_capacity(q * q);
            for a in 0..q {
                let va = to_vec(a);
                for b in 0..q {
                    let vb = to_vec(b);
                    let sum: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| (x + y) % p).collect();
                    table.push(to_idx(&sum));
                }
            }
            table
        });
        return Tables { exp, log, add };
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

/// A field element bundled with its field, for the checked public API.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.field.digits(self.value))
    }
}

impl FieldElem {
    pub fn new(field: &Field, digits: &[u32]) -> Result<FieldElem> {
        Ok(field.wrap(field.from_digits(digits)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn digits(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn pow(&self, k: u128) -> FieldElem {
        self.field.wrap(self.field.pow(self.value, k))
    }

    pub fn legendre(&self) -> i8 {
        self.field.legendre(self.value)
    }
}
