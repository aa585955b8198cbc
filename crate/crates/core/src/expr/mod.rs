//! Exact scalar arithmetic: canonical multivariate rational functions over
//! named symbols with rational coefficients.

mod parse;
pub mod poly;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use parse::{parse_expr, ParseError};
pub use poly::{Monomial, Poly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is unbound")]
    Unbound(String),
    #[error("pole: denominator `{0}` vanishes at the binding")]
    Pole(String),
    #[error("substituting `{symbol}` makes the denominator identically zero")]
    DegenerateSubstitution { symbol: String },
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    /// Chart coordinate; admits nonzero partial derivatives.
    Coordinate,
    /// Free parameter; constant along the manifold.
    Parameter,
}

impl SymbolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SymbolKind::Coordinate => "coordinate",
            SymbolKind::Parameter => "parameter",
        }
    }
}

impl FromStr for SymbolKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coordinate" => Ok(SymbolKind::Coordinate),
            "parameter" => Ok(SymbolKind::Parameter),
            other => Err(format!("unknown symbol kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    name: Var,
    kind: SymbolKind,
}

impl Symbol {
    pub fn coordinate(name: &str) -> Self {
        Symbol {
            name: Arc::from(name),
            kind: SymbolKind::Coordinate,
        }
    }

    pub fn parameter(name: &str) -> Self {
        Symbol {
            name: Arc::from(name),
            kind: SymbolKind::Parameter,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_parameter(&self) -> bool {
        self.kind == SymbolKind::Parameter
    }

    pub fn expr(&self) -> Expr {
        Expr::from_poly(Poly::var(self.name.clone()))
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Ordered table of uniquely named symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_symbols<I: IntoIterator<Item = Symbol>>(iter: I) -> Result<Self, ExprError> {
        let mut table = SymbolTable::new();
        for s in iter {
            table.insert(s)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, symbol: Symbol) -> Result<(), ExprError> {
        if !valid_name(symbol.name()) {
            return Err(ExprError::InvalidName(symbol.name().to_string()));
        }
        if self.get(symbol.name()).is_some() {
            return Err(ExprError::DuplicateSymbol(symbol.name().to_string()));
        }
        self.symbols.push(symbol);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name() == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn coordinates(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter().filter(|s| !s.is_parameter())
    }

    pub fn parameters(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter().filter(|s| s.is_parameter())
    }

    pub fn symbol_expr(&self, name: &str) -> Result<Expr, ExprError> {
        self.get(name)
            .map(Symbol::expr)
            .ok_or_else(|| ExprError::UnknownSymbol(name.to_string()))
    }

    /// Partial derivative with respect to a registered symbol.
    pub fn diff(&self, e: &Expr, name: &str) -> Result<Expr, ExprError> {
        let s = self
            .get(name)
            .ok_or_else(|| ExprError::UnknownSymbol(name.to_string()))?;
        Ok(e.diff(s))
    }

    /// Whether every variable in `e` is a registered parameter.
    pub fn is_parameter_only(&self, e: &Expr) -> bool {
        e.variables()
            .iter()
            .all(|v| self.get(v).is_some_and(Symbol::is_parameter))
    }

    pub fn parse(&self, src: &str) -> Result<Expr, ParseError> {
        parse_expr(src, self)
    }
}

/// Canonical rational function `numerator / denominator`.
///
/// Invariants: the denominator is nonzero and monic in graded-lex order,
/// numerator and denominator are coprime, and zero is `0/1`. Equality of
/// values is therefore structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Expr {
    pub fn zero() -> Self {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Expr::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Expr {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Expr::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Expr::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(q: BigRational) -> Self {
        Expr::from_poly(Poly::constant(q))
    }

    /// Builds the canonical form of `num / den`.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = den.as_constant() {
            return Expr {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::from_coprime(num, den)
    }

    /// Normalizes the denominator's leading coefficient of an already
    /// reduced fraction.
    fn from_coprime(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Expr::zero();
        }
        let lc = den.leading_coeff();
        if lc.is_one() {
            Expr { num, den }
        } else {
            let inv = lc.recip();
            Expr {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Variables appearing in numerator or denominator, sorted by name.
    pub fn variables(&self) -> BTreeSet<Var> {
        self.num
            .variables()
            .into_iter()
            .chain(self.den.variables())
            .collect()
    }

    pub fn try_div(&self, other: &Expr) -> Result<Expr, ExprError> {
        if other.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if other.den.is_one() && self.den.is_one() {
            if let Some(c) = other.num.as_constant() {
                return Ok(Expr::from_poly(self.num.scale(&c.recip())));
            }
        }
        Ok(Self::normalize(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn recip(&self) -> Result<Expr, ExprError> {
        Expr::one().try_div(self)
    }

    pub fn pow(&self, exp: i32) -> Result<Expr, ExprError> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let e = exp.unsigned_abs();
        Ok(Expr {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Partial derivative. Parameters differentiate to zero.
    pub fn diff(&self, s: &Symbol) -> Expr {
        if s.is_parameter() {
            return Expr::zero();
        }
        self.diff_var(s.name())
    }

    /// Partial derivative with respect to a raw variable name.
    pub fn diff_var(&self, v: &str) -> Expr {
        let dn = self.num.diff(v);
        if self.den.is_one() {
            return Expr::from_poly(dn);
        }
        let dd = self.den.diff(v);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalize(num, self.den.mul(&self.den))
    }

    /// Evaluates at a rational binding of every variable.
    pub fn eval(&self, bindings: &HashMap<String, BigRational>) -> Result<BigRational, ExprError> {
        let mut missing = None;
        let mut lookup = |name: &str| {
            let v = bindings.get(name).cloned();
            if v.is_none() && missing.is_none() {
                missing = Some(name.to_string());
            }
            v
        };
        let den = self.den.eval_with(&mut lookup);
        let num = self.num.eval_with(&mut lookup);
        match (num, den) {
            (Some(n), Some(d)) => {
                if d.is_zero() {
                    Err(ExprError::Pole(self.den.to_string()))
                } else {
                    Ok(n / d)
                }
            }
            _ => Err(ExprError::Unbound(missing.unwrap_or_default())),
        }
    }

    /// Replaces `name` by `value` and re-canonicalizes.
    pub fn substitute(&self, name: &str, value: &Expr) -> Result<Expr, ExprError> {
        if !self.num.contains_var(name) && !self.den.contains_var(name) {
            return Ok(self.clone());
        }
        let num = subst_poly(&self.num, name, value);
        let den = subst_poly(&self.den, name, value);
        if den.is_zero() {
            return Err(ExprError::DegenerateSubstitution {
                symbol: name.to_string(),
            });
        }
        num.try_div(&den)
    }

    /// Substitutes several rational values at once.
    pub fn substitute_all(&self, bindings: &[(String, Expr)]) -> Result<Expr, ExprError> {
        bindings
            .iter()
            .try_fold(self.clone(), |acc, (name, value)| {
                acc.substitute(name, value)
            })
    }
}

fn subst_poly(p: &Poly, name: &str, value: &Expr) -> Expr {
    let mut powers: Vec<Expr> = vec![Expr::one()];
    let mut total = Expr::zero();
    for (m, c) in p.terms() {
        let (rest, e) = m.split_off(name);
        while powers.len() <= e as usize {
            let next = powers.last().expect("nonempty") * value;
            powers.push(next);
        }
        let t = Expr::from_poly(Poly::term(rest, c.clone())) * &powers[e as usize];
        total = total + t;
    }
    total
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Self {
        Expr::rational(q)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.terms().len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let simple_den = self.den.terms().len() == 1 && self.den.terms()[0].0.factors().len() == 1;
        if simple_den {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;

    fn add(self, rhs: &Expr) -> Expr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let num = self.num.add(&rhs.num);
            if self.den.is_one() {
                return Expr::from_poly(num);
            }
            return Expr::normalize(num, self.den.clone());
        }
        // a/b + c/d = (a·d' + c·b') / (b·d') with g = gcd(b,d), b = g·b', d = g·d'
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            return Expr::from_coprime(num, self.den.mul(&rhs.den));
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&rhs.num.mul(&b1));
        Expr::normalize(num, self.den.mul(&d1))
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;

    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;

    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Expr::from_poly(self.num.mul(&rhs.num));
        }
        // cross-cancel; the factors of each operand are already coprime
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let cancel = |p: &Poly, g: &Poly| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = cancel(&self.num, &g1).mul(&cancel(&rhs.num, &g2));
        let den = cancel(&self.den, &g2).mul(&cancel(&rhs.den, &g1));
        Expr::from_coprime(num, den)
    }
}

impl Div<&Expr> for &Expr {
    type Output = Expr;

    /// Panics on division by zero; use [`Expr::try_div`] for a checked quotient.
    fn div(self, rhs: &Expr) -> Expr {
        self.try_div(rhs).expect("division by the zero expression")
    }
}

impl Neg for &Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                (&self).$method(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| a + b)
    }
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::zero()
    }

    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
}

impl One for Expr {
    fn one() -> Self {
        Expr::one()
    }
}
