//! Exact multivariate polynomial arithmetic over the rationals.
//!
//! `Polynomial` is the carrier algebra for every bracket in this crate:
//! a sparse map from exponent vectors to nonzero `BigRational` coefficients,
//! kept in graded-lexicographic order so printing is deterministic.
//! Negative exponents are accepted (Laurent polynomials); the expression
//! parser rejects them unless explicitly asked not to.

mod parse;

pub use parse::{
    parse_poly, parse_poly_laurent, parse_poly_with_names, parse_poly_with_names_laurent,
};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// A vector of derivative orders, one per variable.
///
/// Ordering is by total order first, then derivatives in *earlier* variables
/// first, so that sorting a list of multiindices reproduces the canonical jet
/// coordinate order `1, D_x, D_y, D_xx, D_xy, D_yy, ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(vars: usize) -> Self {
        MultiIndex(vec![0; vars])
    }

    /// Single derivative in variable `var`, of the given order.
    pub fn single(vars: usize, var: usize, order: u32) -> Self {
        let mut entries = vec![0; vars];
        entries[var] = order;
        MultiIndex(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total derivative order `|sigma|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert!(other.divides(self));
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// All multiindices in `vars` variables with total order at most `max_order`,
    /// in canonical jet order.
    pub fn all_up_to_order(vars: usize, max_order: u32) -> Vec<MultiIndex> {
        fn rec(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, left: u32) {
            if pos + 1 == current.len() {
                current[pos] = left;
                out.push(MultiIndex(current.clone()));
                current[pos] = 0;
                return;
            }
            for v in 0..=left {
                current[pos] = v;
                rec(out, current, pos + 1, left - v);
                current[pos] = 0;
            }
        }
        let mut out = Vec::new();
        let mut current = vec![0u32; vars];
        for order in 0..=max_order {
            let mut exact = Vec::new();
            rec(&mut exact, &mut current, 0, order);
            exact.sort();
            out.extend(exact);
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            // earlier-variable derivatives first: (1,0) precedes (0,1)
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Monomial exponent vector. Entries may be negative (Laurent monomials).
/// Ordered graded-lexicographically: total degree first, then lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial(exponents)
    }

    pub fn constant(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact multivariate polynomial over the rationals.
///
/// Invariants: no stored zero coefficients; all monomial keys have exactly
/// `vars` entries. Values are immutable: every operation returns a new value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn constant(vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(vars), c);
        }
        p
    }

    /// The variable `x_index` as a polynomial.
    pub fn variable(vars: usize, index: usize) -> Result<Self> {
        if index >= vars {
            return Err(Error::VariableOutOfRange { index, vars });
        }
        let mut exps = vec![0i64; vars];
        exps[index] = 1;
        Ok(Self::monomial(vars, exps, Rat::one()))
    }

    pub fn monomial(vars: usize, exponents: Vec<i64>, coeff: Rat) -> Self {
        assert_eq!(
            exponents.len(),
            vars,
            "exponent vector length must equal vars"
        );
        let mut p = Self::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(Monomial::new(exponents), coeff);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Maximum total degree, or None for the zero polynomial.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coeff(&self, exponents: &[i64]) -> Rat {
        self.terms
            .get(&Monomial::new(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.vars])
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.vars);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact partial derivative with respect to variable `var`.
    pub fn derive(&self, var: usize) -> Result<Self> {
        if var >= self.vars {
            return Err(Error::VariableOutOfRange {
                index: var,
                vars: self.vars,
            });
        }
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] = e - 1;
            out.add_term(Monomial::new(exps), c * rat(e));
        }
        Ok(out)
    }

    /// Iterated partial derivative `D_sigma`; partials commute, so the
    /// iteration order is irrelevant.
    pub fn apply_multiindex(&self, sigma: &MultiIndex) -> Result<Self> {
        if sigma.len() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                got: sigma.len(),
            });
        }
        let mut p = self.clone();
        for (var, &times) in sigma.entries().iter().enumerate() {
            for _ in 0..times {
                if p.is_zero() {
                    return Ok(p);
                }
                p = p.derive(var)?;
            }
        }
        Ok(p)
    }

    /// Substitute the polynomial `value` for variable `var`.
    /// Requires all exponents of `var` to be non-negative.
    pub fn substitute(&self, var: usize, value: &Polynomial) -> Result<Self> {
        if var >= self.vars {
            return Err(Error::VariableOutOfRange {
                index: var,
                vars: self.vars,
            });
        }
        if value.vars != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                got: value.vars,
            });
        }
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e < 0 {
                return Err(Error::InvalidParameter(
                    "cannot substitute into a negative power".into(),
                ));
            }
            let mut rest = m.exponents().to_vec();
            rest[var] = 0;
            let base = Self::monomial(self.vars, rest, c.clone());
            out = &out + &(&base * &value.pow(e as u32));
        }
        Ok(out)
    }

    /// Discard all terms of total degree greater than `max_degree`.
    pub fn truncate(&self, max_degree: i64) -> Self {
        Polynomial {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// All monomials of total degree at most `degree`, ascending graded-lex.
    pub fn monomial_basis(vars: usize, degree: u32) -> Vec<Polynomial> {
        let mut exps: Vec<Vec<i64>> = Vec::new();
        let mut cur = vec![0i64; vars];
        fn rec(out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, pos: usize, left: i64) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..=left {
                cur[pos] = v;
                rec(out, cur, pos + 1, left - v);
                cur[pos] = 0;
            }
        }
        rec(&mut exps, &mut cur, 0, degree as i64);
        let mut monos: Vec<Monomial> = exps.into_iter().map(Monomial::new).collect();
        monos.sort();
        monos
            .into_iter()
            .map(|m| Polynomial::monomial(vars, m.exponents().to_vec(), Rat::one()))
            .collect()
    }

    /// Canonical variable name for position `index` among `vars` variables.
    pub fn variable_name(vars: usize, index: usize) -> String {
        if vars <= 3 {
            ["x", "y", "z"][index].to_string()
        } else {
            format!("x{}", index + 1)
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: Self) -> Polynomial {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: Self) -> Polynomial {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: Self) -> Polynomial {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = Polynomial::zero(self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, other: Self) -> Polynomial {
        &self + &other
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, other: Self) -> Polynomial {
        &self - &other
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, other: Self) -> Polynomial {
        &self * &other
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn fmt_coeff(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Canonical form: descending graded-lexicographic term order; explicit
    /// `*` between factors; the same grammar the parser accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_constant() {
                factors.push(fmt_coeff(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = Polynomial::variable_name(self.vars, i);
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{} vars]({})", self.vars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, vars: usize) -> Polynomial {
        parse_poly(text, vars).unwrap()
    }

    #[test]
    fn zero_and_constant() {
        assert!(Polynomial::zero(2).is_zero());
        assert_eq!(Polynomial::constant(1, rat(0)), Polynomial::zero(1));
        assert_eq!(Polynomial::one(3).to_string(), "1");
    }

    #[test]
    fn derive_power_rule() {
        let x3 = p("x^3", 1);
        assert_eq!(x3.derive(0).unwrap(), p("3*x^2", 1));
        assert_eq!(p("5", 1).derive(0).unwrap(), Polynomial::zero(1));
        assert_eq!(p("x^2*y - 1/2", 2).derive(1).unwrap(), p("x^2", 2));
    }

    #[test]
    fn derive_out_of_range() {
        assert_eq!(
            p("x", 1).derive(1),
            Err(Error::VariableOutOfRange { index: 1, vars: 1 })
        );
    }

    #[test]
    fn multiindex_application() {
        let q = p("x*y", 2);
        let sigma = MultiIndex::new(vec![1, 1]);
        assert_eq!(q.apply_multiindex(&sigma).unwrap(), p("1", 2));
        let q2 = p("x^2*y", 2);
        assert_eq!(
            q2.apply_multiindex(&MultiIndex::new(vec![2, 0])).unwrap(),
            p("2*y", 2)
        );
        // identity multiindex leaves the polynomial unchanged
        assert_eq!(q2.apply_multiindex(&MultiIndex::zero(2)).unwrap(), q2);
        // dimension mismatch
        assert!(q2.apply_multiindex(&MultiIndex::zero(3)).is_err());
    }

    #[test]
    fn multiindex_jet_order() {
        let all = MultiIndex::all_up_to_order(2, 2);
        let expect: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![1, 1],
            vec![0, 2],
        ];
        assert_eq!(
            all.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>(),
            expect
        );
    }

    #[test]
    fn laurent_derivative() {
        let q = Polynomial::monomial(1, vec![-1], rat(1));
        let dq = q.derive(0).unwrap();
        assert_eq!(dq, Polynomial::monomial(1, vec![-2], rat(-1)));
    }

    #[test]
    fn substitution_composes() {
        // (y^2) with y = x + x^2 gives x^2 + 2x^3 + x^4
        let phi = p("x^2", 1);
        let y = p("x + x^2", 1);
        assert_eq!(phi.substitute(0, &y).unwrap(), p("x^4 + 2*x^3 + x^2", 1));
    }

    #[test]
    fn truncate_drops_high_degrees() {
        let q = p("x^4 + x^2 + 1", 1);
        assert_eq!(q.truncate(3), p("x^2 + 1", 1));
    }

    #[test]
    fn monomial_basis_counts() {
        assert_eq!(Polynomial::monomial_basis(1, 4).len(), 5);
        assert_eq!(Polynomial::monomial_basis(2, 2).len(), 6);
        assert_eq!(Polynomial::monomial_basis(3, 2).len(), 10);
    }

    #[test]
    fn display_roundtrip_examples() {
        let q = p("x^2*y - 1/2", 2);
        assert_eq!(q.to_string(), "x^2*y - 1/2");
        assert_eq!(p(&q.to_string(), 2), q);
        let z = Polynomial::zero(2);
        assert_eq!(z.to_string(), "0");
    }
}
