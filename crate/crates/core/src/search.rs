//! Search for square-free `f` of odd degree `L` with `n^2 - m^g = t^2 f`,
//! `(m, n) = 1`, over monic `m`, `n`, `t` of degrees `M`, `N`, `T`.
//!
//! The fast enumerator walks coprime pairs `(m, t)`, solves
//! `n^2 ≡ m^g (mod t^2)` prime by prime (Tonelli-Shanks in `F_q[x]/p`,
//! Newton lifting to `p^{2α}`, CRT), and then runs over the degree-`N`
//! monic lifts of each root. The naive enumerator scans every triple and
//! is kept as the completeness oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{sat_pow, Budget, Error, Result};
use crate::field::Field;
use crate::poly::{enumerate_below, enumerate_monic, monic_blocks, monic_range, Factorization, Poly};

/// Degree regime of one search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchParams {
    pub q: u64,
    pub g: u32,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    /// Upper degree of the medium primes, `ceil((L - T + 2 log_q L) / 3)`.
    #[serde(rename = "Q")]
    pub big_q: usize,
    /// `log_q L`.
    pub log_l: f64,
    /// Largest integer `k` with `q^k <= L`, i.e. `floor(log_q L)`.
    pub small_prime_degree: usize,
}

impl SearchParams {
    /// Checks the degree relations the construction relies on.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        if self.g < 3 || self.g % 2 == 0 {
            return fail(format!("g = {} must be odd and at least 3", self.g));
        }
        if self.l < 3 || self.l % 2 == 0 {
            return fail(format!("L = {} must be odd and at least 3", self.l));
        }
        if 2 * self.t >= self.l {
            return fail(format!("T = {} must satisfy T < L/2", self.t));
        }
        if self.m * self.g as usize != 2 * self.t + self.l {
            return fail(format!("M*g = {} != 2T + L = {}", self.m * self.g as usize, 2 * self.t + self.l));
        }
        if self.n != self.t + (self.l - 1) / 2 {
            return fail(format!("N = {} != T + (L-1)/2", self.n));
        }
        let mg = self.m * self.g as usize;
        if mg <= (2 * self.n).max(4 * self.t) {
            return fail(format!("M*g = {mg} must exceed max(2N, 4T)"));
        }
        Ok(())
    }

    pub fn field(&self) -> Result<Field> {
        Field::with_order(self.q)
    }
}

fn params_for(q: u64, g: u32, l: usize, t: usize) -> SearchParams {
    let log_l = (l as f64).ln() / (q as f64).ln();
    let mut small = 0;
    while sat_pow(q, small as u32 + 1) <= l as u128 {
        small += 1;
    }
    SearchParams {
        q,
        g,
        l,
        t,
        m: (2 * t + l) / g as usize,
        n: t + (l - 1) / 2,
        big_q: ((l as f64 - t as f64 + 2.0 * log_l) / 3.0).ceil() as usize,
        log_l,
        small_prime_degree: small,
    }
}

/// Chooses `T` nearest to `L(g-2)/(4(g+1))` among `0 <= T < L/2` with
/// `g | 2T + L` (ties go to the smaller `T`), unless `t_override` is given.
pub fn derive_params(q: u64, g: u32, l: usize, t_override: Option<usize>) -> Result<SearchParams> {
    Field::with_order(q)?;
    if g < 3 || g % 2 == 0 {
        return Err(Error::InvalidParams(format!("g = {g} must be odd and at least 3")));
    }
    if l < 3 || l % 2 == 0 {
        return Err(Error::InvalidParams(format!("L = {l} must be odd and at least 3")));
    }
    let t = match t_override {
        Some(t) => t,
        None => {
            let ideal = l as f64 * (g as f64 - 2.0) / (4.0 * (g as f64 + 1.0));
            let mut best: Option<usize> = None;
            for t in (0..l).take_while(|t| 2 * t < l) {
                if (2 * t + l) % g as usize != 0 {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => (t as f64 - ideal).abs() < (b as f64 - ideal).abs(),
                };
                if better {
                    best = Some(t);
                }
            }
            best.ok_or_else(|| {
                Error::InvalidParams(format!(
                    "no T with 0 <= T < L/2 makes 2T + L divisible by g (g = {g}, L = {l})"
                ))
            })?
        }
    };
    if (2 * t + l) % g as usize != 0 {
        return Err(Error::InvalidParams(format!("g = {g} does not divide 2T + L = {}", 2 * t + l)));
    }
    let params = params_for(q, g, l, t);
    params.validate()?;
    Ok(params)
}

/// Why a triple does not produce a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    NotMonic,
    NotCoprime,
    NotDivisible,
    DegreeCondition,
    NotSquarefree,
    EvenDegree,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rejection::NotMonic => "m, n, t must be monic",
            Rejection::NotCoprime => "not coprime",
            Rejection::NotDivisible => "t^2 does not divide n^2 - m^g",
            Rejection::DegreeCondition => "degree condition",
            Rejection::NotSquarefree => "f is not square-free",
            Rejection::EvenDegree => "f has even degree",
        })
    }
}

/// `f = (n^2 - m^g) / t^2` after checking, in order: coprimality of `m`
/// and `n`, divisibility by `t^2`, `deg m^g > max(2 deg n, 4 deg t)`, and
/// that `f` is square-free of odd degree.
pub fn build_f(m: &Poly, n: &Poly, t: &Poly, g: u32) -> std::result::Result<Poly, Rejection> {
    if !(m.is_monic() && n.is_monic() && t.is_monic()) {
        return Err(Rejection::NotMonic);
    }
    if !m.is_coprime(n).map_err(|_| Rejection::NotMonic)? {
        return Err(Rejection::NotCoprime);
    }
    let mg = m.pow(g);
    let t2 = t.pow(2);
    let diff = &n.pow(2) - &mg;
    let f = match diff.div_exact(&t2) {
        Ok(Some(f)) => f,
        _ => return Err(Rejection::NotDivisible),
    };
    let (dm, dn, dt) = (mg.deg(), n.deg(), t.deg());
    if dm <= (2 * dn).max(4 * dt) {
        return Err(Rejection::DegreeCondition);
    }
    if !f.is_squarefree().map_err(|_| Rejection::NotSquarefree)? {
        return Err(Rejection::NotSquarefree);
    }
    if f.deg() % 2 == 0 {
        return Err(Rejection::EvenDegree);
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SClass {
    S1,
    S2,
    S3,
}

/// Membership of a triple in the three overlapping prime-square classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SMembership {
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
}

impl SMembership {
    /// Single label: S2 or S3 when a medium or large prime square divides
    /// the quotient (S2 first), otherwise S1 if no small prime square does.
    pub fn primary(self) -> Option<SClass> {
        if self.s2 {
            Some(SClass::S2)
        } else if self.s3 {
            Some(SClass::S3)
        } else if self.s1 {
            Some(SClass::S1)
        } else {
            None
        }
    }
}

/// Classes of a quotient `h = (n^2 - m^g)/t^2` by the degrees of primes `p`
/// with `p^2 | h`.
pub fn classify_quotient(h: &Poly, params: &SearchParams) -> Result<SMembership> {
    let fac = h.factor(0)?;
    let mut out = SMembership {
        s1: true,
        ..Default::default()
    };
    for (p, e) in &fac.factors {
        if *e < 2 {
            continue;
        }
        let d = p.degree().unwrap();
        if d <= params.small_prime_degree {
            out.s1 = false;
        } else if d <= params.big_q {
            out.s2 = true;
        } else {
            out.s3 = true;
        }
    }
    Ok(out)
}

/// Classification of a raw triple; the quotient need not be square-free.
pub fn classify_raw(m: &Poly, n: &Poly, t: &Poly, params: &SearchParams) -> Result<SMembership> {
    let diff = &n.pow(2) - &m.pow(params.g);
    let h = diff
        .div_exact(&t.pow(2))?
        .ok_or_else(|| Error::InvalidArgument("t^2 does not divide n^2 - m^g".into()))?;
    classify_quotient(&h, params)
}

/// A witness `n^2 - m^g = t^2 f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionTuple {
    pub m: Poly,
    pub n: Poly,
    pub t: Poly,
    pub f: Poly,
    pub s_class: Option<SClass>,
}

#[derive(Serialize)]
struct SolutionLine<'a> {
    q: u64,
    g: u32,
    m: Value,
    n: Value,
    t: Value,
    f: Value,
    s_class: &'a Option<SClass>,
}

impl SolutionTuple {
    pub fn classify(&self, params: &SearchParams) -> Result<SClass> {
        classify_quotient(&self.f, params)?
            .primary()
            .ok_or_else(|| Error::Invariant(format!("solution with f = {} in no class", self.f)))
    }

    /// One JSONL record.
    pub fn to_json_line(&self, q: u64, g: u32) -> String {
        serde_json::to_string(&SolutionLine {
            q,
            g,
            m: self.m.to_json(),
            n: self.n.to_json(),
            t: self.t.to_json(),
            f: self.f.to_json(),
            s_class: &self.s_class,
        })
        .expect("serializable")
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<(SolutionTuple, u32)> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("missing field '{k}'")))
        };
        let g = get("g")?
            .as_u64()
            .ok_or_else(|| Error::Parse("g must be an integer".into()))? as u32;
        let s_class = match v.get("s_class").and_then(|s| s.as_str()) {
            Some("S1") => Some(SClass::S1),
            Some("S2") => Some(SClass::S2),
            Some("S3") => Some(SClass::S3),
            _ => None,
        };
        Ok((
            SolutionTuple {
                m: Poly::from_json(field, get("m")?)?,
                n: Poly::from_json(field, get("n")?)?,
                t: Poly::from_json(field, get("t")?)?,
                f: Poly::from_json(field, get("f")?)?,
                s_class,
            },
            g,
        ))
    }

    fn sort_key(&self) -> (&Poly, &Poly, &Poly) {
        (&self.m, &self.t, &self.n)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Congruence solving and lifting.
    #[default]
    Lifting,
    /// Every monic triple; the completeness oracle.
    Naive,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub budget: Budget,
    pub workers: usize,
    pub strategy: Strategy,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: Budget::DEFAULT,
            workers: 1,
            strategy: Strategy::Lifting,
        }
    }
}

/// Upper bound on the number of candidate triples a search will touch.
pub fn node_estimate(params: &SearchParams, strategy: Strategy) -> u128 {
    let q = params.q;
    match strategy {
        Strategy::Naive => sat_pow(q, (params.m + params.n + params.t) as u32),
        Strategy::Lifting => {
            let pairs = sat_pow(q, (params.m + params.t) as u32);
            let lifts = sat_pow(q, params.n.saturating_sub(2 * params.t) as u32);
            let roots = 1u128 << params.t.min(100);
            pairs.saturating_mul(roots.saturating_mul(lifts).saturating_add(1))
        }
    }
}

/// Every solution in the regime, sorted by `(m, t, n)`.
pub fn enumerate_solutions(params: &SearchParams, options: &SearchOptions) -> Result<Vec<SolutionTuple>> {
    params.validate()?;
    options.budget.check(node_estimate(params, options.strategy))?;
    let field = params.field()?;
    let blocks = monic_blocks(&field, params.m, params.m.min(2));
    let ts: Vec<(Poly, Factorization)> = enumerate_monic(&field, params.t)
        .map(|t| {
            let fac = t.factor(0)?;
            Ok((t, fac))
        })
        .collect::<Result<_>>()?;

    let run_block = |range| -> Result<Vec<SolutionTuple>> {
        let mut out = Vec::new();
        for m in monic_range(&field, params.m, range) {
            match options.strategy {
                Strategy::Lifting => lifting_for_m(params, &m, &ts, &mut out)?,
                Strategy::Naive => naive_for_m(params, &m, &ts, &mut out)?,
            }
        }
        Ok(out)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let chunks: Vec<Result<Vec<SolutionTuple>>> =
        pool.install(|| blocks.into_par_iter().map(run_block).collect());
    let mut all = Vec::new();
    for chunk in chunks {
        all.extend(chunk?);
    }
    all.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(all)
}

fn emit(params: &SearchParams, m: &Poly, n: &Poly, t: &Poly, out: &mut Vec<SolutionTuple>) -> Result<()> {
    if let Ok(f) = build_f(m, n, t, params.g) {
        if f.degree() != Some(params.l) {
            return Err(Error::Invariant(format!("f = {f} has degree other than L")));
        }
        let mut sol = SolutionTuple {
            m: m.clone(),
            n: n.clone(),
            t: t.clone(),
            f,
            s_class: None,
        };
        sol.s_class = Some(sol.classify(params)?);
        out.push(sol);
    }
    Ok(())
}

fn naive_for_m(
    params: &SearchParams,
    m: &Poly,
    ts: &[(Poly, Factorization)],
    out: &mut Vec<SolutionTuple>,
) -> Result<()> {
    let field = m.field();
    let mut found = Vec::new();
    for (t, _) in ts {
        for n in enumerate_monic(field, params.n) {
            emit(params, m, &n, t, &mut found)?;
        }
    }
    found.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out.extend(found);
    Ok(())
}

fn lifting_for_m(
    params: &SearchParams,
    m: &Poly,
    ts: &[(Poly, Factorization)],
    out: &mut Vec<SolutionTuple>,
) -> Result<()> {
    let field = m.field();
    let mg = m.pow(params.g);
    for (t, t_fac) in ts {
        // a prime dividing m and t would divide n, contradicting (m, n) = 1
        if !m.is_coprime(t)? {
            continue;
        }
        let t2 = t.pow(2);
        let mut found = Vec::new();
        for r in sqrt_mod_square(&mg, t_fac)? {
            for n in lifts(field, &r, &t2, params.n) {
                emit(params, m, &n, t, &mut found)?;
            }
        }
        found.sort_by(|a, b| a.n.cmp(&b.n));
        out.extend(found);
    }
    Ok(())
}

/// Monic `n` of degree `n_degree` with `n ≡ r (mod modulus)`, `deg r < deg modulus`.
fn lifts(field: &Field, r: &Poly, modulus: &Poly, n_degree: usize) -> Vec<Poly> {
    let k = modulus.degree().unwrap();
    if n_degree >= k {
        enumerate_monic(field, n_degree - k)
            .map(|s| r + &(modulus * &s))
            .collect()
    } else if r.is_monic() && r.degree() == Some(n_degree) {
        vec![r.clone()]
    } else {
        Vec::new()
    }
}

/// All `n mod t^2` with `n^2 ≡ c`, given the factorization of monic `t`
/// and `gcd(c, t) = 1`. For `t = 1` the single residue is `0`.
pub fn sqrt_mod_square(c: &Poly, t_fac: &Factorization) -> Result<Vec<Poly>> {
    let field = c.field();
    let mut acc: Vec<Poly> = vec![Poly::zero(field)];
    let mut acc_mod = Poly::one(field);
    for (p, alpha) in &t_fac.factors {
        let pk = p.pow(2 * alpha);
        let Some(r) = sqrt_mod_prime(c, p)? else {
            return Ok(Vec::new());
        };
        let lifted = hensel_lift_sqrt(c, &r, &pk)?;
        let roots = [lifted.clone(), (-&lifted).rem(&pk)?];
        let mut next = Vec::with_capacity(acc.len() * 2);
        for a in &acc {
            for b in &roots {
                next.push(crt(a, &acc_mod, b, &pk)?);
            }
        }
        acc = next;
        acc_mod = &acc_mod * &pk;
    }
    acc.sort();
    Ok(acc)
}

/// `x ≡ a (mod ma)`, `x ≡ b (mod mb)` for coprime moduli.
fn crt(a: &Poly, ma: &Poly, b: &Poly, mb: &Poly) -> Result<Poly> {
    let inv = ma
        .inv_mod(mb)?
        .ok_or(Error::NotCoprime("CRT moduli must be coprime"))?;
    let k = (&(b - a) * &inv).rem(mb)?;
    (a + &(ma * &k)).rem(&(ma * mb))
}

/// Newton iteration for `r^2 ≡ c` from modulus `p` up to `pk = p^j`.
fn hensel_lift_sqrt(c: &Poly, r: &Poly, pk: &Poly) -> Result<Poly> {
    let field = c.field();
    let two = Poly::constant(field, field.from_int(2));
    let target = c.rem(pk)?;
    let mut r = r.rem(pk)?;
    for _ in 0..64 {
        let err = (&r.mulmod(&r, pk)? - &target).rem(pk)?;
        if err.is_zero() {
            return Ok(r);
        }
        let inv = (&two * &r)
            .inv_mod(pk)?
            .ok_or(Error::NotCoprime("Hensel lifting needs an invertible root"))?;
        r = (&r - &err.mulmod(&inv, pk)?).rem(pk)?;
    }
    Err(Error::Invariant("Hensel lifting did not converge".into()))
}

/// A square root of `c` in `F_q[x]/(p)` for irreducible monic `p`, by
/// Tonelli-Shanks; `None` when `c` is a non-residue.
pub fn sqrt_mod_prime(c: &Poly, p: &Poly) -> Result<Option<Poly>> {
    let c = c.rem(p)?;
    if c.is_zero() {
        return Ok(Some(c));
    }
    let field = p.field();
    let d = p.degree().unwrap();
    let order = sat_pow(field.order(), d as u32);
    if order == u128::MAX {
        return Err(Error::InvalidArgument("residue field too large".into()));
    }
    let half = (order - 1) / 2;
    if !c.powmod(half, p)?.is_one() {
        return Ok(None);
    }
    let mut odd = order - 1;
    let mut s = 0u32;
    while odd % 2 == 0 {
        odd /= 2;
        s += 1;
    }
    let z = enumerate_below(field, d)
        .skip(1)
        .find(|z| !z.powmod(half, p).unwrap().is_one())
        .expect("a non-residue exists in every odd-order field");
    let mut m = s;
    let mut cc = z.powmod(odd, p)?;
    let mut t = c.powmod(odd, p)?;
    let mut r = c.powmod(odd.div_ceil(2), p)?;
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = t2.mulmod(&t2, p)?;
            i += 1;
            if i == m {
                return Err(Error::Invariant("Tonelli-Shanks: element is not a square".into()));
            }
        }
        let mut b = cc.clone();
        for _ in 0..(m - i - 1) {
            b = b.mulmod(&b, p)?;
        }
        m = i;
        cc = b.mulmod(&b, p)?;
        t = t.mulmod(&cc, p)?;
        r = r.mulmod(&b, p)?;
    }
    Ok(Some(r))
}

/// Exact rational `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Ratio {
        let g = num_integer::gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn ceil(self) -> u128 {
        self.num.div_ceil(self.den)
    }
}

/// Aggregate statistics of one exhaustive search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub params: SearchParams,
    #[serde(rename = "N_g_LT")]
    pub n_g_lt: u64,
    #[serde(rename = "sum_R")]
    pub sum_r: u128,
    #[serde(rename = "sum_R_pairs")]
    pub sum_r_pairs: u128,
    /// `R -> number of f with that many witnesses`.
    pub r_histogram: BTreeMap<u64, u64>,
    /// Tuples in S1, S2, S3 (classes may overlap).
    pub s_counts: (u64, u64, u64),
    /// `(sum R)^2 / sum R^2`; zero over one when there are no solutions.
    pub cauchy_lower: Ratio,
    /// Distinct `f` in sorted order, as coefficient arrays.
    pub distinct_f: Vec<Value>,
}

impl CensusReport {
    pub const CSV_HEADER: [&'static str; 12] = [
        "q", "g", "L", "T", "M", "N", "N_g_LT", "sum_R", "sum_R_pairs", "N1", "N2", "N3",
    ];

    pub fn csv_row(&self) -> Vec<String> {
        let p = &self.params;
        vec![
            p.q.to_string(),
            p.g.to_string(),
            p.l.to_string(),
            p.t.to_string(),
            p.m.to_string(),
            p.n.to_string(),
            self.n_g_lt.to_string(),
            self.sum_r.to_string(),
            self.sum_r_pairs.to_string(),
            self.s_counts.0.to_string(),
            self.s_counts.1.to_string(),
            self.s_counts.2.to_string(),
        ]
    }
}

/// Builds the census from an already computed solution list.
pub fn census_from(params: &SearchParams, solutions: &[SolutionTuple]) -> Result<CensusReport> {
    let mut by_f: HashMap<&Poly, u64> = HashMap::new();
    let (mut s1, mut s2, mut s3) = (0, 0, 0);
    for sol in solutions {
        *by_f.entry(&sol.f).or_default() += 1;
        let member = classify_quotient(&sol.f, params)?;
        s1 += member.s1 as u64;
        s2 += member.s2 as u64;
        s3 += member.s3 as u64;
    }
    let mut distinct: Vec<(&Poly, u64)> = by_f.into_iter().collect();
    distinct.sort();
    let mut hist = BTreeMap::new();
    let (mut sum_r, mut sum_r2) = (0u128, 0u128);
    for (_, r) in &distinct {
        *hist.entry(*r).or_default() += 1;
        sum_r += *r as u128;
        sum_r2 += (*r as u128) * (*r as u128);
    }
    let n_g = distinct.len() as u64;
    let cauchy = if sum_r2 == 0 {
        Ratio { num: 0, den: 1 }
    } else {
        Ratio::new(sum_r * sum_r, sum_r2)
    };
    let report = CensusReport {
        params: params.clone(),
        n_g_lt: n_g,
        sum_r,
        sum_r_pairs: sum_r2 - sum_r,
        r_histogram: hist,
        s_counts: (s1, s2, s3),
        cauchy_lower: cauchy,
        distinct_f: distinct.iter().map(|(f, _)| f.to_json()).collect(),
    };
    check_census(&report)?;
    Ok(report)
}

fn check_census(r: &CensusReport) -> Result<()> {
    let hist_r: u128 = r.r_histogram.iter().map(|(k, c)| *k as u128 * *c as u128).sum();
    let hist_r2: u128 = r
        .r_histogram
        .iter()
        .map(|(k, c)| (*k as u128).pow(2) * *c as u128)
        .sum();
    if hist_r != r.sum_r || hist_r2 != r.sum_r + r.sum_r_pairs {
        return Err(Error::Invariant("census histogram disagrees with moment sums".into()));
    }
    if (r.n_g_lt as u128) < r.cauchy_lower.ceil() {
        return Err(Error::Invariant(format!(
            "Cauchy-Schwarz violated: N = {} < {}/{}",
            r.n_g_lt, r.cauchy_lower.num, r.cauchy_lower.den
        )));
    }
    Ok(())
}

/// Exhaustive search followed by aggregation by `f`.
pub fn census(params: &SearchParams, options: &SearchOptions) -> Result<(CensusReport, Vec<SolutionTuple>)> {
    let solutions = enumerate_solutions(params, options)?;
    Ok((census_from(params, &solutions)?, solutions))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(field, c)
    }

    #[test]
    fn derive_examples() {
        let pr = derive_params(5, 3, 5, None).unwrap();
        assert_eq!((pr.t, pr.m, pr.n), (2, 3, 4));
        let pr = derive_params(5, 3, 7, None).unwrap();
        assert_eq!((pr.t, pr.m, pr.n), (1, 3, 4));
        let pr = derive_params(5, 5, 11, None).unwrap();
        assert_eq!((pr.t, pr.m, pr.n), (2, 3, 7));
        assert_eq!(pr.small_prime_degree, 1);
    }

    #[test]
    fn derive_errors() {
        // g = 9, L = 3: T in {0, 1} gives 2T + 3 in {3, 5}
        let err = derive_params(5, 9, 3, None).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
        assert!(derive_params(5, 4, 5, None).is_err());
        assert!(derive_params(5, 3, 6, None).is_err());
        assert!(derive_params(6, 3, 5, None).is_err());
        assert!(derive_params(5, 3, 5, Some(1)).is_err());
        assert!(derive_params(5, 3, 5, Some(2)).is_ok());
    }

    #[test]
    fn derive_invariants_range() {
        for g in [3u32, 5, 7, 9] {
            for l in (3..=99).step_by(2) {
                match derive_params(5, g, l, None) {
                    Ok(pr) => {
                        pr.validate().unwrap();
                        let ideal = l as f64 * (g as f64 - 2.0) / (4.0 * (g as f64 + 1.0));
                        // no valid T is strictly closer to the ideal
                        for t in 0..l {
                            if 2 * t < l && (2 * t + l) % g as usize == 0 {
                                assert!((t as f64 - ideal).abs() >= (pr.t as f64 - ideal).abs());
                            }
                        }
                    }
                    Err(_) => assert!((0..l).all(|t| 2 * t >= l || (2 * t + l) % g as usize != 0)),
                }
            }
        }
    }

    #[test]
    fn build_f_examples() {
        let f5 = Field::prime(5).unwrap();
        let x = Poly::x(&f5);
        let one = Poly::one(&f5);
        let f = build_f(&x, &p(&f5, &[1, 1]), &one, 3).unwrap();
        assert_eq!(f, p(&f5, &[1, 2, 1, 4]));
        assert_eq!(build_f(&x, &x, &one, 3), Err(Rejection::NotCoprime));
        assert_eq!(build_f(&x, &p(&f5, &[1, 0, 1]), &one, 3), Err(Rejection::DegreeCondition));
        assert_eq!(Rejection::DegreeCondition.to_string(), "degree condition");
        assert_eq!(build_f(&x, &p(&f5, &[1, 1]), &p(&f5, &[1, 1]), 3), Err(Rejection::NotDivisible));
    }

    #[test]
    fn tonelli_and_lifting() {
        let f3 = Field::prime(3).unwrap();
        for d in 1..=3 {
            for pr in enumerate_monic(&f3, d).filter(|g| g.is_irreducible()) {
                for c in enumerate_below(&f3, d).skip(1) {
                    let brute = enumerate_below(&f3, d).any(|r| r.mulmod(&r, &pr).unwrap() == c);
                    let r = sqrt_mod_prime(&c, &pr).unwrap();
                    assert_eq!(r.is_some(), brute);
                    if let Some(r) = r {
                        assert_eq!(r.mulmod(&r, &pr).unwrap(), c);
                    }
                }
            }
        }
        let t = p(&f3, &[1, 1]) * p(&f3, &[1, 0, 1]);
        let fac = t.factor(0).unwrap();
        let t2 = t.pow(2);
        let c = p(&f3, &[1, 0, 0, 1]);
        let roots = sqrt_mod_square(&c, &fac).unwrap();
        let brute: Vec<Poly> = enumerate_below(&f3, 6)
            .filter(|n| n.mulmod(n, &t2).unwrap() == c.rem(&t2).unwrap())
            .collect();
        assert_eq!(roots, brute);
    }

    #[test]
    fn classify_examples() {
        let params = derive_params(3, 3, 5, None).unwrap();
        let f3 = Field::prime(3).unwrap();
        let sqf = p(&f3, &[1, 0, 1]) * Poly::x(&f3);
        assert_eq!(classify_quotient(&sqf, &params).unwrap().primary(), Some(SClass::S1));
        // floor(log_3 5) = 1 and Q = ceil((5 - 2 + 2 log_3 5) / 3) = 2
        assert_eq!((params.small_prime_degree, params.big_q), (1, 2));
        let small = p(&f3, &[1, 1]).pow(2) * Poly::x(&f3);
        let mem = classify_quotient(&small, &params).unwrap();
        assert_eq!(mem, SMembership::default());
        assert_eq!(mem.primary(), None);
        let medium = p(&f3, &[1, 0, 1]).pow(2) * Poly::x(&f3);
        let mem = classify_quotient(&medium, &params).unwrap();
        assert!(mem.s1 && mem.s2 && !mem.s3);
        assert_eq!(mem.primary(), Some(SClass::S2));
        let large = p(&f3, &[1, 2, 0, 1]).pow(2);
        let mem = classify_quotient(&large, &params).unwrap();
        assert!(mem.s1 && mem.s3 && !mem.s2);
        assert_eq!(mem.primary(), Some(SClass::S3));
        // raw triples go through the same quotient
        let (m, n, t) = (Poly::x(&f3), p(&f3, &[1, 1]), Poly::one(&f3));
        let h = &n.pow(2) - &m.pow(3);
        assert_eq!(
            classify_raw(&m, &n, &t, &params).unwrap(),
            classify_quotient(&h, &params).unwrap()
        );
        assert!(classify_raw(&m, &n, &p(&f3, &[1, 1]), &params).is_err());
    }

    #[test]
    fn census_small() {
        let params = derive_params(3, 3, 5, None).unwrap();
        let (report, sols) = census(&params, &SearchOptions::default()).unwrap();
        assert_eq!(report.sum_r, sols.len() as u128);
        for s in &sols {
            assert_eq!(&s.n.pow(2) - &s.m.pow(3), &s.t.pow(2) * &s.f);
            assert_eq!(s.f.leading(), Some(Field::prime(3).unwrap().from_int(-1)));
        }
    }

    #[test]
    fn json_line_format() {
        let f5 = Field::prime(5).unwrap();
        let sol = SolutionTuple {
            m: Poly::x(&f5),
            n: p(&f5, &[1, 1]),
            t: Poly::one(&f5),
            f: p(&f5, &[1, 2, 1, 4]),
            s_class: Some(SClass::S1),
        };
        let line = sol.to_json_line(5, 3);
        assert_eq!(
            line,
            r#"{"q":5,"g":3,"m":[0,1],"n":[1,1],"t":[1],"f":[1,2,1,4],"s_class":"S1"}"#
        );
        let v: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(SolutionTuple::from_json(&f5, &v).unwrap(), (sol, 3));
    }
}
