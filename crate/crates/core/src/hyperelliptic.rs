//! Imaginary hyperelliptic curves `y^2 = f(x)` with `deg f` odd, their
//! Jacobians in Mumford representation, and class numbers.
//!
//! For odd `deg f` the ideal class group of `F_q[x][√f]` is the group of
//! rational points of the Jacobian; every class has a unique reduced
//! representative `[u, v]` with `u` monic, `deg v < deg u <= genus` and
//! `u | v^2 - f`. The group law is Cantor's composition and reduction.

use serde::Serialize;
use serde_json::Value;

use crate::error::{sat_pow, Budget, Error, Result};
use crate::field::Field;
use crate::poly::{enumerate_below, enumerate_monic, Poly};
use crate::search::SolutionTuple;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    f: Poly,
    genus: usize,
}

/// Reduced divisor class `[u, v]`; `[1, 0]` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MumfordDivisor {
    pub u: Poly,
    pub v: Poly,
}

impl MumfordDivisor {
    pub fn is_identity(&self) -> bool {
        self.u.is_one()
    }
}

impl Curve {
    /// The curve `y^2 = f` for square-free `f` of odd degree at least 3.
    pub fn new(f: &Poly) -> Result<Curve> {
        if f.field().characteristic() == 2 {
            return Err(Error::InvalidField("curves need odd characteristic".into()));
        }
        let d = f
            .degree()
            .ok_or(Error::ZeroPolynomial("curve equation"))?;
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "imaginary model needs odd deg f >= 3, got {d}"
            )));
        }
        if !f.is_squarefree()? {
            return Err(Error::InvalidArgument(format!("{f} is not square-free")));
        }
        Ok(Curve {
            f: f.clone(),
            genus: (d - 1) / 2,
        })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn identity(&self) -> MumfordDivisor {
        MumfordDivisor {
            u: Poly::one(self.field()),
            v: Poly::zero(self.field()),
        }
    }

    /// Validates `[u, v]` and returns its reduced form.
    pub fn divisor(&self, u: &Poly, v: &Poly) -> Result<MumfordDivisor> {
        if !u.is_monic() {
            return Err(Error::InvalidArgument(format!("u = {u} must be monic")));
        }
        let v = v.rem(u)?;
        if !u.divides(&(&v.pow(2) - &self.f))? {
            return Err(Error::InvalidArgument(format!("u = {u} does not divide v^2 - f")));
        }
        self.reduce(u.clone(), v)
    }

    fn check(&self, d: &MumfordDivisor) -> Result<()> {
        if d.u.field() != self.field() || d.v.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        let ok = d.u.is_monic()
            && d.v.deg() < d.u.deg()
            && d.u.deg() <= self.genus as isize
            && d.u.divides(&(&d.v.pow(2) - &self.f))?;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "[{}, {}] is not a reduced divisor on y^2 = {}",
                d.u, d.v, self.f
            )))
        }
    }

    fn reduce(&self, mut u: Poly, mut v: Poly) -> Result<MumfordDivisor> {
        while u.deg() > self.genus as isize {
            let u_next = (&self.f - &v.pow(2))
                .div_exact(&u)?
                .ok_or_else(|| Error::Invariant("reduction: u does not divide f - v^2".into()))?
                .monic();
            v = (-&v).rem(&u_next)?;
            u = u_next;
        }
        let v = v.rem(&u)?;
        Ok(MumfordDivisor { u, v })
    }

    /// Sum of two classes (Cantor).
    pub fn add(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> Result<MumfordDivisor> {
        self.check(a)?;
        self.check(b)?;
        self.add_unchecked(a, b)
    }

    fn add_unchecked(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> Result<MumfordDivisor> {
        if a.is_identity() {
            return Ok(b.clone());
        }
        if b.is_identity() {
            return Ok(a.clone());
        }
        let (d1, e1, e2) = a.u.ext_gcd(&b.u)?;
        let vsum = &a.v + &b.v;
        let (d, c1, c2) = d1.ext_gcd(&vsum)?;
        let s1 = &c1 * &e1;
        let s2 = &c1 * &e2;
        let u = (&a.u * &b.u)
            .div_exact(&d.pow(2))?
            .ok_or_else(|| Error::Invariant("composition: d^2 does not divide u1 u2".into()))?;
        let num = &(&(&s1 * &a.u) * &b.v) + &(&(&s2 * &b.u) * &a.v);
        let num = &num + &(&c2 * &(&(&a.v * &b.v) + &self.f));
        let v = num
            .div_exact(&d)?
            .ok_or_else(|| Error::Invariant("composition: d does not divide v".into()))?
            .rem(&u)?;
        self.reduce(u, v)
    }

    pub fn neg(&self, a: &MumfordDivisor) -> MumfordDivisor {
        MumfordDivisor {
            u: a.u.clone(),
            v: (-&a.v).rem(&a.u).unwrap(),
        }
    }

    /// `k * a` by double-and-add.
    pub fn mul(&self, a: &MumfordDivisor, mut k: u128) -> Result<MumfordDivisor> {
        self.check(a)?;
        let mut acc = self.identity();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add_unchecked(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Exact order of `a`, given the factorization of a multiple `h` of it.
    pub fn divisor_order(&self, a: &MumfordDivisor, h_factored: &[(u128, u32)]) -> Result<u128> {
        let h: u128 = h_factored.iter().map(|(p, e)| p.pow(*e)).product();
        if !self.mul(a, h)?.is_identity() {
            return Err(Error::Invariant(format!("h = {h} does not annihilate [{}, {}]", a.u, a.v)));
        }
        let mut order = h;
        for &(p, e) in h_factored {
            for _ in 0..e {
                if self.mul(a, order / p)?.is_identity() {
                    order /= p;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// `#C(F_{q^i})`, counting the single point at infinity.
    pub fn count_points(&self, i: usize, budget: Budget) -> Result<u128> {
        if i < 1 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let field = self.field();
        let size = sat_pow(field.order(), i as u32);
        budget.check(size)?;
        let mut affine: i128 = 0;
        if i == 1 {
            for x in field.elements() {
                affine += 1 + field.legendre(self.f.eval(x)) as i128;
            }
        } else {
            let h = enumerate_monic(field, i)
                .find(|h| h.is_irreducible())
                .expect("irreducibles exist in every degree");
            let half = (size - 1) / 2;
            let coeffs: Vec<Poly> = self
                .f
                .coeffs()
                .iter()
                .map(|&c| Poly::constant(field, c))
                .collect();
            for x in enumerate_below(field, i) {
                let mut y = Poly::zero(field);
                for c in coeffs.iter().rev() {
                    y = (&y.mulmod(&x, &h)? + c).rem(&h)?;
                }
                affine += if y.is_zero() {
                    1
                } else if y.powmod(half, &h)?.is_one() {
                    2
                } else {
                    0
                };
            }
        }
        Ok(affine as u128 + 1)
    }

    /// L-polynomial and class number from `N_1 .. N_genus`.
    pub fn l_polynomial(&self, budget: Budget) -> Result<ClassGroupSummary> {
        let g = self.genus;
        let q = self.field().order() as i128;
        let counts = (1..=g)
            .map(|i| self.count_points(i, budget))
            .collect::<Result<Vec<_>>>()?;
        // s_k = sum of k-th powers of the Frobenius eigenvalues
        let s: Vec<i128> = counts
            .iter()
            .enumerate()
            .map(|(k, &n)| q.pow(k as u32 + 1) + 1 - n as i128)
            .collect();
        let mut a = vec![0i128; 2 * g + 1];
        a[0] = 1;
        for i in 1..=g {
            let acc: i128 = (1..=i).map(|j| s[j - 1] * a[i - j]).sum();
            if acc % i as i128 != 0 {
                return Err(Error::Invariant(format!(
                    "L-polynomial coefficient a_{i} is not an integer"
                )));
            }
            a[i] = -acc / i as i128;
        }
        for i in 0..g {
            a[2 * g - i] = q.pow((g - i) as u32) * a[i];
        }
        let h: i128 = a.iter().sum();
        if h < 1 {
            return Err(Error::Invariant(format!("class number P(1) = {h} is not positive")));
        }
        let n1 = counts[0] as i128;
        let trace = n1 - q - 1;
        if trace * trace > 4 * (g as i128).pow(2) * q {
            return Err(Error::Invariant(format!("N_1 = {n1} violates the Weil bound")));
        }
        let h = h as u128;
        Ok(ClassGroupSummary {
            q: q as u64,
            f: self.f.to_json(),
            genus: g,
            point_counts: counts,
            l_poly: a,
            h,
            h_factored: factor_integer(h),
        })
    }

    /// Number of reduced pairs `[u, v]`, counted by enumerating every
    /// monic `u` with `deg u <= genus` and every `v` with `deg v < deg u`.
    pub fn class_group_brute(&self, budget: Budget) -> Result<u128> {
        let field = self.field();
        let q = field.order();
        let needed: u128 = (0..=self.genus as u32).map(|d| sat_pow(q, 2 * d)).sum();
        budget.check(needed)?;
        let mut count = 0u128;
        for d in 0..=self.genus {
            for u in enumerate_monic(field, d) {
                let target = self.f.rem(&u)?;
                for v in enumerate_below(field, d) {
                    if v.mulmod(&v, &u)? == target {
                        count += 1;
                    }
                }
            }
        }
        Ok(count)
    }

    /// Class of the ideal `(m, √f + n/t)` dividing `(n + t√f)`, reduced:
    /// `[m, -n t^{-1} mod m]`.
    pub fn ideal_class_of(&self, sol: &SolutionTuple) -> Result<MumfordDivisor> {
        if sol.f != self.f {
            return Err(Error::InvalidArgument("solution belongs to a different curve".into()));
        }
        let t_inv = sol
            .t
            .inv_mod(&sol.m)?
            .ok_or(Error::NotCoprime("ideal class needs gcd(m, t) = 1"))?;
        let v = (-&sol.n).mulmod(&t_inv, &sol.m)?;
        self.divisor(&sol.m, &v)
    }
}

/// Zeta data of one curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassGroupSummary {
    pub q: u64,
    pub f: Value,
    pub genus: usize,
    #[serde(rename = "N")]
    pub point_counts: Vec<u128>,
    #[serde(rename = "L_poly")]
    pub l_poly: Vec<i128>,
    pub h: u128,
    pub h_factored: Vec<(u128, u32)>,
}

/// Trial division.
pub fn factor_integer(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Outcome of checking that the class attached to a solution has order `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub m: Value,
    pub n: Value,
    pub t: Value,
    pub f: Value,
    pub h: u128,
    pub order: u128,
    pub pass: bool,
}

/// Computes `h`, the class of the ideal over `m`, and its exact order;
/// passes iff the order is `g`.
pub fn verify_order_g(sol: &SolutionTuple, g: u32, budget: Budget) -> Result<Certificate> {
    let curve = Curve::new(&sol.f)?;
    let summary = curve.l_polynomial(budget)?;
    let d = curve.ideal_class_of(sol)?;
    let order = curve.divisor_order(&d, &summary.h_factored)?;
    Ok(Certificate {
        m: sol.m.to_json(),
        n: sol.n.to_json(),
        t: sol.t.to_json(),
        f: sol.f.to_json(),
        h: summary.h,
        order,
        pass: order == g as u128 && summary.h % g as u128 == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(field: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(field, c)
    }

    fn example_curve() -> Curve {
        let f5 = Field::prime(5).unwrap();
        Curve::new(&p(&f5, &[1, 2, 1, 4])).unwrap()
    }

    #[test]
    fn curve_construction() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(Curve::new(&p(&f3, &[0, 2, 0, 1])).unwrap().genus(), 1);
        assert_eq!(example_curve().genus(), 1);
        // x^5 + x + 1 has the double root 1 over F_3
        assert!(Curve::new(&p(&f3, &[1, 1, 0, 0, 0, 1])).is_err());
        assert_eq!(Curve::new(&p(&f3, &[1, 2, 0, 0, 0, 1])).unwrap().genus(), 2);
        assert!(Curve::new(&p(&f3, &[0, 0, 1, 1])).is_err());
        assert!(Curve::new(&p(&f3, &[1, 0, 1, 0, 1])).is_err());
        assert!(Curve::new(&p(&f3, &[0, 1])).is_err());
    }

    #[test]
    fn point_count_examples() {
        let f3 = Field::prime(3).unwrap();
        let c = Curve::new(&p(&f3, &[0, 2, 0, 1])).unwrap();
        let b = Budget::default();
        assert_eq!(c.count_points(1, b).unwrap(), 4);
        assert_eq!(c.count_points(2, b).unwrap(), 16);
        assert_eq!(example_curve().count_points(1, b).unwrap() % 3, 0);
    }

    #[test]
    fn l_polynomial_examples() {
        let f3 = Field::prime(3).unwrap();
        let c = Curve::new(&p(&f3, &[0, 2, 0, 1])).unwrap();
        let s = c.l_polynomial(Budget::default()).unwrap();
        assert_eq!(s.l_poly, vec![1, 0, 3]);
        assert_eq!(s.h, 4);
        assert_eq!(s.h_factored, vec![(2, 2)]);
        assert_eq!(c.class_group_brute(Budget::default()).unwrap(), 4);
        let e = example_curve().l_polynomial(Budget::default()).unwrap();
        assert_eq!(e.h, e.point_counts[0]);
    }

    #[test]
    fn cantor_examples() {
        let c = example_curve();
        let f5 = c.field().clone();
        let d = c.divisor(&Poly::x(&f5), &Poly::one(&f5)).unwrap();
        assert_eq!(c.add(&d, &c.identity()).unwrap(), d);
        assert!(c.add(&d, &c.neg(&d)).unwrap().is_identity());
        let twice = c.add(&d, &d).unwrap();
        assert_eq!(twice, c.neg(&d));
        assert_eq!(twice.v, p(&f5, &[4]));
        let h = c.l_polynomial(Budget::default()).unwrap();
        assert_eq!(c.divisor_order(&d, &h.h_factored).unwrap(), 3);
        assert_eq!(c.divisor_order(&c.identity(), &h.h_factored).unwrap(), 1);
        assert!(c.divisor(&Poly::x(&f5), &p(&f5, &[2])).is_err());
    }

    #[test]
    fn two_torsion() {
        let f3 = Field::prime(3).unwrap();
        let c = Curve::new(&p(&f3, &[0, 2, 0, 1])).unwrap();
        let d = c.divisor(&Poly::x(&f3), &Poly::zero(&f3)).unwrap();
        let h = c.l_polynomial(Budget::default()).unwrap();
        assert_eq!(c.divisor_order(&d, &h.h_factored).unwrap(), 2);
    }

    #[test]
    fn curve_mismatch_rejected() {
        let f3 = Field::prime(3).unwrap();
        let c = Curve::new(&p(&f3, &[0, 2, 0, 1])).unwrap();
        let e = example_curve();
        let d = e.divisor(&Poly::x(e.field()), &Poly::one(e.field())).unwrap();
        assert!(c.add(&d, &d).is_err());
    }

    /// Random element: a random point-sum built from affine points over F_q.
    fn random_divisor(c: &Curve, rng: &mut ChaCha8Rng) -> MumfordDivisor {
        let field = c.field();
        let mut acc = c.identity();
        for _ in 0..c.genus() + 1 {
            let x = field.elem(rng.gen_range(0..field.order() as u32)).unwrap();
            let y2 = c.f().eval(x);
            if field.legendre(y2) < 0 {
                continue;
            }
            let y = field.elements().find(|&y| field.mul(y, y) == y2).unwrap();
            let u = Poly::from_elems(field, vec![field.neg(x), field.one()]);
            let d = c.divisor(&u, &Poly::constant(field, y)).unwrap();
            acc = c.add(&acc, &d).unwrap();
        }
        acc
    }

    #[test]
    fn group_laws_random() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        let curves = [
            example_curve(),
            Curve::new(&p(&f3, &[1, 2, 0, 0, 0, 1])).unwrap(),
            Curve::new(&p(&f5, &[2, 0, 1, 0, 3, 1])).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in &curves {
            let h = c.l_polynomial(Budget::default()).unwrap();
            assert_eq!(h.h, c.class_group_brute(Budget::default()).unwrap());
            for _ in 0..1000 {
                let a = random_divisor(c, &mut rng);
                let b = random_divisor(c, &mut rng);
                let d = random_divisor(c, &mut rng);
                assert_eq!(c.add(&a, &b).unwrap(), c.add(&b, &a).unwrap());
                let left = c.add(&c.add(&a, &b).unwrap(), &d).unwrap();
                let right = c.add(&a, &c.add(&b, &d).unwrap()).unwrap();
                assert_eq!(left, right);
            }
            for _ in 0..100 {
                let a = random_divisor(c, &mut rng);
                assert!(c.mul(&a, h.h).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn functional_equation_and_weil() {
        let f5 = Field::prime(5).unwrap();
        let c = Curve::new(&p(&f5, &[2, 0, 1, 0, 3, 1])).unwrap();
        let s = c.l_polynomial(Budget::default()).unwrap();
        let g = c.genus();
        for i in 0..=2 * g {
            if i <= g {
                assert_eq!(s.l_poly[2 * g - i], 5i128.pow((g - i) as u32) * s.l_poly[i]);
            }
        }
        let trace = s.point_counts[0] as i128 - 6;
        assert!(trace * trace <= 4 * (g as i128).pow(2) * 5);
    }

    #[test]
    fn certificate_example() {
        let f5 = Field::prime(5).unwrap();
        let sol = SolutionTuple {
            m: Poly::x(&f5),
            n: p(&f5, &[1, 1]),
            t: Poly::one(&f5),
            f: p(&f5, &[1, 2, 1, 4]),
            s_class: None,
        };
        let cert = verify_order_g(&sol, 3, Budget::default()).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.order, 3);
        assert_eq!(cert.h % 3, 0);
        let curve = Curve::new(&sol.f).unwrap();
        let d = curve.ideal_class_of(&sol).unwrap();
        assert_eq!(d.v, p(&f5, &[4]));
        // the opposite sign convention gives the inverse class, same order
        let h = curve.l_polynomial(Budget::default()).unwrap();
        let flipped = curve.divisor(&sol.m, &sol.n).unwrap();
        assert_eq!(flipped, curve.neg(&d));
        assert_eq!(curve.divisor_order(&flipped, &h.h_factored).unwrap(), 3);
    }

    #[test]
    fn factor_integer_small() {
        assert_eq!(factor_integer(1), vec![]);
        assert_eq!(factor_integer(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factor_integer(97), vec![(97, 1)]);
    }
}
