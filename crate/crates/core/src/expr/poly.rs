//! Sparse distributed multivariate polynomials over exact rationals.
//!
//! Terms are kept sorted in descending graded-lexicographic order with no
//! zero coefficients, so structural equality is polynomial equality.
//! Variables are ordered by name; the alphabetically first variable is the
//! most significant one in the lexicographic tie-break.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A variable name. Ordering is by name.
pub type Var = Arc<str>;

/// A power product `v1^e1 * v2^e2 * ...` with variables sorted by name and
/// strictly positive exponents. `Ord` is graded lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &str) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| &**w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            let oe = if j < other.0.len() && other.0[j].0 == *v {
                j += 1;
                other.0[j - 1].1
            } else {
                0
            };
            match e.cmp(&oe) {
                Ordering::Less => return None,
                Ordering::Equal => {}
                Ordering::Greater => out.push((v.clone(), e - oe)),
            }
        }
        if j != other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((a.clone(), *ea.min(eb)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    /// Removes `v` from the monomial, returning the remaining part and the
    /// exponent that was removed.
    pub fn split_off(&self, v: &str) -> (Monomial, u32) {
        let mut exp = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, e)| {
                if &**w == v {
                    exp = *e;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (Monomial(rest), exp)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, (v, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial with `BigRational` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    /// Descending graded-lex order, nonzero coefficients.
    terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly {
            terms: vec![(Monomial::var(v, 1), BigRational::one())],
        }
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    fn from_map(map: BTreeMap<Monomial, BigRational>) -> Self {
        let terms = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    /// Variables occurring in the polynomial, sorted by name.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.factors().iter().map(|(v, _)| v.clone()))
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                acc.entry(m).and_modify(|e| *e += &c).or_insert(c);
            }
        }
        Poly::from_map(acc)
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // Multiplying by a monomial preserves the term order.
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), tc * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, tc)| (m.clone(), tc * c))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Scales so that the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            let qm = rm.div(lm)?;
            let qc = &rc / lc;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.insert(qm, qc);
        }
        Some(Poly::from_map(quot))
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(v))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients with respect to `v`: entry `d` is the coefficient of `v^d`.
    pub fn coeffs_in(&self, v: &str) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut maps: Vec<BTreeMap<Monomial, BigRational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            maps[e as usize].insert(rest, c.clone());
        }
        maps.into_iter().map(Poly::from_map).collect()
    }

    fn leading_coeff_in(&self, v: &str) -> Poly {
        let deg = self.degree_in(v);
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            if e == deg {
                map.insert(rest, c.clone());
            }
        }
        Poly::from_map(map)
    }

    pub fn diff(&self, v: &str) -> Poly {
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            if e == 0 {
                continue;
            }
            let nm = rest.mul(&Monomial::var(Arc::from(v), e - 1));
            let nc = c * BigRational::from_integer(BigInt::from(e));
            map.entry(nm).and_modify(|x| *x += &nc).or_insert(nc);
        }
        Poly::from_map(map)
    }

    /// Substitutes rational values for some variables.
    fn specialize(&self, point: &[(Var, BigRational)]) -> Poly {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (w, e) in m.factors() {
                match point.iter().find(|(p, _)| p == w) {
                    Some((_, val)) => coeff *= num_traits::pow(val.clone(), *e as usize),
                    None => rest.push((w.clone(), *e)),
                }
            }
            let entry = map.entry(Monomial(rest)).or_insert_with(BigRational::zero);
            *entry += coeff;
        }
        Poly::from_map(map)
    }

    /// Evaluates at rational values; `None` if a variable is unbound.
    pub fn eval_with<F>(&self, mut lookup: F) -> Option<BigRational>
    where
        F: FnMut(&str) -> Option<BigRational>,
    {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let val = lookup(v)?;
                t *= num_traits::pow(val, *e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Greatest common divisor, normalized to be monic (zero only when both
    /// inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        let ma = self.monomial_content();
        let mb = other.monomial_content();
        let mono = ma.gcd(&mb);
        let a = self.div_monomial(&ma);
        let b = other.div_monomial(&mb);
        gcd_without_monomials(&a, &b)
            .mul_term(&mono, &BigRational::one())
            .monic()
    }

    /// The largest monomial dividing every term.
    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, (m, _)| acc.gcd(m))
    }

    fn div_monomial(&self, m: &Monomial) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.div(m).expect("monomial content divides"), c.clone()))
                .collect(),
        }
    }

    /// Scales to integer coefficients with no common factor and a positive
    /// leading coefficient.
    fn integer_primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let content = self.terms.iter().fold(BigInt::zero(), |acc, (_, c)| {
            acc.gcd(&(c.numer() * (&den / c.denom())))
        });
        let mut f = BigRational::new(den, content);
        if self.leading_coeff().is_negative() {
            f = -f;
        }
        self.scale(&f)
    }

    /// Content with respect to `v`: the gcd of the coefficients of powers of `v`.
    pub fn content_in(&self, v: &str) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, v: &str) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `divisor` viewed as univariate in `v`,
    /// up to a power of the divisor's leading coefficient.
    fn pseudo_rem_in(&self, divisor: &Poly, v: &str) -> Poly {
        let db = divisor.degree_in(v);
        let lb = divisor.leading_coeff_in(v);
        let var: Var = Arc::from(v);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.leading_coeff_in(v);
            let shift = Poly::term(Monomial::var(var.clone(), dr - db), BigRational::one());
            r = lb.mul(&r).sub(&lr.mul(&shift).mul(divisor));
        }
        r
    }
}

/// Gcd of polynomials that have no monomial factor. Not normalized.
fn gcd_without_monomials(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let (small, large) = if a.terms.len() <= b.terms.len() {
        (a, b)
    } else {
        (b, a)
    };
    if large.div_exact(small).is_some() {
        return small.clone();
    }
    let va = a.variables();
    let vb = b.variables();
    // A variable present in one operand only: the gcd divides each of that
    // operand's coefficients in it.
    for (p, q, vp, vq) in [(a, b, &va, &vb), (b, a, &vb, &va)] {
        if let Some(v) = vp.iter().find(|v| !vq.contains(v)) {
            let mut g = q.clone();
            for c in p.coeffs_in(v) {
                if c.is_zero() {
                    continue;
                }
                g = g.gcd(&c);
                if g.is_one() {
                    break;
                }
            }
            return g;
        }
    }
    // Same variables on both sides: recurse on the one of least degree.
    let var = va
        .iter()
        .min_by_key(|v| (a.degree_in(v).max(b.degree_in(v)), (*v).clone()))
        .expect("non-constant polynomial")
        .clone();
    let ca = a.content_in(&var);
    let cb = b.content_in(&var);
    let content = ca.gcd(&cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    if images_coprime(&pa, &pb, &var) {
        return content;
    }
    content.mul(&primitive_prs_gcd(pa, pb, &var))
}

/// Sufficient test for `gcd(a, b)` having degree 0 in `v`: specialize every
/// other variable to a small integer that keeps both leading coefficients
/// nonzero; the univariate gcd degree bounds the true one from above.
fn images_coprime(a: &Poly, b: &Poly, v: &str) -> bool {
    let mut others: Vec<Var> = a.variables();
    others.extend(b.variables());
    others.sort();
    others.dedup();
    others.retain(|w| &**w != v);
    if others.is_empty() {
        return false;
    }
    let (la, lb) = (a.leading_coeff_in(v), b.leading_coeff_in(v));
    for attempt in 0..4i64 {
        let point: Vec<(Var, BigRational)> = others
            .iter()
            .enumerate()
            .map(|(k, w)| {
                (
                    w.clone(),
                    BigRational::from_integer(BigInt::from(2 + 3 * k as i64 + 7 * attempt)),
                )
            })
            .collect();
        let at = |p: &Poly| p.specialize(&point);
        if at(&la).is_zero() || at(&lb).is_zero() {
            continue;
        }
        return primitive_prs_gcd(at(a), at(b), v).is_constant();
    }
    false
}

/// Primitive polynomial remainder sequence gcd for operands that are
/// primitive with respect to `v`.
fn primitive_prs_gcd(a: Poly, b: Poly, v: &str) -> Poly {
    let (a, b) = (a.integer_primitive(), b.integer_primitive());
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    if b.degree_in(v) == 0 {
        return Poly::one();
    }
    loop {
        let r = a.pseudo_rem_in(&b, v);
        if r.is_zero() {
            return b.primitive_part_in(v).monic();
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        b = r.primitive_part_in(v).integer_primitive();
    }
}

fn fmt_coeff_abs(c: &BigRational) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", fmt_coeff_abs(c))?;
            } else if c.abs().is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_coeff_abs(c))?;
            }
        }
        Ok(())
    }
}
