//! The associative algebra of differential operators with polynomial
//! coefficients, and the N-linear alternating composition bracket.
//!
//! Operators are `sum_sigma w_sigma(x) D^sigma` with Laurent-polynomial
//! coefficients allowed. Composition follows the Leibniz rule exactly.
//! The alternating bracket `[a_1,...,a_N] = sum_{sigma in S_N} (-1)^sigma
//! a_{sigma(1)} o ... o a_{sigma(N)}` is computed over a prefix-sharing
//! permutation tree so the N = 6 cases stay tractable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::unshuffles;
use crate::poly::{rat, MultiIndex, Polynomial, Rat};
use crate::seeded::SplitMix64;
use crate::wronskian::wronskian;

/// Differential operator with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    vars: usize,
    terms: BTreeMap<MultiIndex, Polynomial>,
}

impl DiffOp {
    pub fn zero(vars: usize) -> Self {
        DiffOp {
            vars,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator (order 0, coefficient 1).
    pub fn one(vars: usize) -> Self {
        Self::from_term(MultiIndex::zero(vars), Polynomial::one(vars))
    }

    /// `coeff * D^sigma`.
    pub fn from_term(sigma: MultiIndex, coeff: Polynomial) -> Self {
        let vars = sigma.len();
        assert_eq!(coeff.vars(), vars);
        let mut op = Self::zero(vars);
        op.add_term(sigma, coeff);
        op
    }

    /// One-variable `w(z) * d^j`.
    pub fn single(order: u32, coeff: Polynomial) -> Self {
        Self::from_term(MultiIndex::new(vec![order]), coeff)
    }

    fn add_term(&mut self, sigma: MultiIndex, coeff: Polynomial) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(sigma) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total derivative order present.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|s| s.order()).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, sigma: &MultiIndex) -> Polynomial {
        self.terms
            .get(sigma)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.vars))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        DiffOp {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(s, w)| (s.clone(), w.scale(c)))
                .collect(),
        }
    }

    /// Exact operator composition by the Leibniz rule:
    /// `D^sigma o (w D^tau) = sum_{rho <= sigma} C(sigma, rho) D^rho(w)
    /// D^{sigma - rho + tau}`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        assert_eq!(self.vars, other.vars, "operator variable mismatch");
        let mut out = DiffOp::zero(self.vars);
        for (sigma, w) in &self.terms {
            for (tau, v) in &other.terms {
                // enumerate rho <= sigma componentwise
                let mut rho = vec![0u32; self.vars];
                loop {
                    let rho_idx = MultiIndex::new(rho.clone());
                    let dv = v.apply_multiindex(&rho_idx).expect("same vars");
                    if !dv.is_zero() {
                        let mut binom = rat(1);
                        for (a, b) in sigma.entries().iter().zip(rho.iter()) {
                            binom *= rat(choose(*a as u64, *b as u64) as i64);
                        }
                        let coeff = &w.scale(&binom) * &dv;
                        let exponent = sigma.sub(&rho_idx).add(tau);
                        out.add_term(exponent, coeff);
                    }
                    // next rho in the box [0, sigma]
                    let mut pos = 0;
                    loop {
                        if pos == self.vars {
                            break;
                        }
                        if rho[pos] < sigma.entries()[pos] {
                            rho[pos] += 1;
                            break;
                        }
                        rho[pos] = 0;
                        pos += 1;
                    }
                    if pos == self.vars {
                        break;
                    }
                }
            }
        }
        out
    }

    /// Apply the operator to a polynomial.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.vars);
        for (sigma, w) in &self.terms {
            let df = f.apply_multiindex(sigma).expect("same vars");
            out = &out + &(w * &df);
        }
        out
    }
}

fn choose(n: u64, k: u64) -> u64 {
    crate::perm::binomial(n, k)
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, other: Self) -> DiffOp {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (s, w) in &other.terms {
            out.add_term(s.clone(), w.clone());
        }
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, other: Self) -> DiffOp {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (s, w) in &other.terms {
            out.add_term(s.clone(), -w);
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            vars: self.vars,
            terms: self.terms.iter().map(|(s, w)| (s.clone(), -w)).collect(),
        }
    }
}

impl Add for DiffOp {
    type Output = DiffOp;
    fn add(self, other: Self) -> DiffOp {
        &self + &other
    }
}

impl Sub for DiffOp {
    type Output = DiffOp;
    fn sub(self, other: Self) -> DiffOp {
        &self - &other
    }
}

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        -&self
    }
}

impl fmt::Display for DiffOp {
    /// One variable prints as `w(z)*d^j` sums; several variables use
    /// `D(a,b,...)` for the derivative multiindex.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (sigma, w) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let d = if self.vars == 1 {
                format!("d^{}", sigma.entries()[0])
            } else {
                format!("D{sigma}")
            };
            if sigma.order() == 0 {
                write!(f, "({w})")?;
            } else {
                write!(f, "({w})*{d}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}

/// `sum_{sigma in S_N} (-1)^sigma a_{sigma(1)} o ... o a_{sigma(N)}`.
///
/// The permutation tree is walked depth-first; each node carries the composed
/// prefix, so every shared prefix is composed once. Signs accumulate via the
/// Lehmer count of smaller elements still unchosen.
pub fn alt_bracket(args: &[DiffOp]) -> Result<DiffOp> {
    if args.is_empty() {
        return Err(Error::InvalidParameter(
            "alternating bracket needs at least one argument".into(),
        ));
    }
    let vars = args[0].vars();
    if args.iter().any(|a| a.vars() != vars) {
        return Err(Error::DimensionMismatch {
            expected: vars,
            got: args.iter().map(|a| a.vars()).find(|&v| v != vars).unwrap(),
        });
    }
    fn walk(
        args: &[DiffOp],
        remaining: &mut Vec<usize>,
        prefix: Option<&DiffOp>,
        sign: i8,
        acc: &mut DiffOp,
    ) {
        if remaining.is_empty() {
            let value = prefix.expect("nonempty arguments");
            *acc = if sign == 1 {
                &*acc + value
            } else {
                &*acc - value
            };
            return;
        }
        for p in 0..remaining.len() {
            let idx = remaining.remove(p);
            // p smaller-index elements remain for later: p new inversions
            let s = if p % 2 == 0 { sign } else { -sign };
            let next = match prefix {
                None => args[idx].clone(),
                Some(pre) => pre.compose(&args[idx]),
            };
            walk(args, remaining, Some(&next), s, acc);
            remaining.insert(p, idx);
        }
    }
    // fan out over the first factor; branch results merge in index order,
    // so the value is independent of the schedule
    let n = args.len();
    let branches: Vec<DiffOp> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut acc = DiffOp::zero(vars);
            let mut remaining: Vec<usize> = (0..n).filter(|&i| i != first).collect();
            let sign = if first % 2 == 0 { 1 } else { -1 };
            walk(args, &mut remaining, Some(&args[first]), sign, &mut acc);
            acc
        })
        .collect();
    let mut total = DiffOp::zero(vars);
    for b in branches {
        total = &total + &b;
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct OnlyWronskianReport {
    pub arity: usize,
    pub power: u32,
    /// Exponent `N p' - N(N-1)/2` of the expected single term.
    pub balance_exponent: u32,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
    /// `actual - expected` when nonzero.
    pub residual: Option<String>,
}

/// Compare `[w_1 d^{p'}, ..., w_N d^{p'}]` against the single Wronskian term
/// `W^{0..N-1}(w) d^{N p' - N(N-1)/2}` and report the exact residual.
/// The reduction holds at p' = N/2; for larger p' the residual is the
/// honest remainder of the Leibniz expansion.
pub fn check_only_wronskian(
    arity: usize,
    power: u32,
    weights: &[Polynomial],
) -> Result<OnlyWronskianReport> {
    if !arity.is_multiple_of(2) {
        return Err(Error::OddArity { arity });
    }
    if weights.len() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            got: weights.len(),
        });
    }
    let n = arity as u32;
    if 2 * power + 1 < n {
        return Err(Error::InvalidParameter(format!(
            "power {power} below (N-1)/2 for N = {n}"
        )));
    }
    let ops: Vec<DiffOp> = weights
        .iter()
        .map(|w| DiffOp::single(power, w.clone()))
        .collect();
    let actual = alt_bracket(&ops)?;
    let balance = n * power - n * (n - 1) / 2;
    let w = wronskian(weights)?;
    let expected = DiffOp::single(balance, w);
    let diff = &actual - &expected;
    Ok(OnlyWronskianReport {
        arity,
        power,
        balance_exponent: balance,
        pass: diff.is_zero(),
        expected: expected.to_string(),
        actual: actual.to_string(),
        residual: if diff.is_zero() {
            None
        } else {
            Some(diff.to_string())
        },
    })
}

/// Action `Delta_outer[Delta_inner]` of the alternating brackets on a tuple
/// of operators, expanded over unshuffles exactly as for polynomial operators.
fn bracket_action(outer: usize, inner: usize, args: &[DiffOp]) -> Result<DiffOp> {
    let m = outer + inner - 1;
    if args.len() != m {
        return Err(Error::ArityMismatch {
            expected: m,
            got: args.len(),
        });
    }
    let vars = args[0].vars();
    let mut acc = DiffOp::zero(vars);
    for u in unshuffles(m, inner) {
        let head: Vec<DiffOp> = u.head.iter().map(|&i| args[i].clone()).collect();
        let mut outer_args = Vec::with_capacity(outer);
        outer_args.push(alt_bracket(&head)?);
        for &i in &u.tail {
            outer_args.push(args[i].clone());
        }
        let term = alt_bracket(&outer_args)?;
        acc = if u.sign == 1 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    Ok(acc)
}

/// Which identity the parities of (outer, inner) select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaIdentity {
    /// both arities even: the action vanishes
    BothEven,
    /// outer odd, inner even: the action is the (k+l-1)-bracket
    InnerEven,
    /// inner odd: the action is outer-arity times the (k+l-1)-bracket
    InnerOdd,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaIdentityReport {
    pub outer: usize,
    pub inner: usize,
    pub identity: DeltaIdentity,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
    pub residual: Option<String>,
}

/// Verify the parity identities of the composition brackets on a sample
/// tuple: `D_{2k}[D_{2l}] = 0`, `D_{2k+1}[D_{2l}] = D_{2k+2l}`,
/// `D_k[D_{2l+1}] = k * D_{2l+k}`.
pub fn delta_identity_check(
    outer: usize,
    inner: usize,
    sample: &[DiffOp],
) -> Result<DeltaIdentityReport> {
    if outer < 2 || inner < 2 {
        return Err(Error::InvalidParameter(
            "bracket arities must be at least 2".into(),
        ));
    }
    let m = outer + inner - 1;
    if sample.len() != m {
        return Err(Error::ArityMismatch {
            expected: m,
            got: sample.len(),
        });
    }
    let actual = bracket_action(outer, inner, sample)?;
    let (identity, expected) = if inner.is_multiple_of(2) {
        if outer.is_multiple_of(2) {
            (DeltaIdentity::BothEven, DiffOp::zero(sample[0].vars()))
        } else {
            (DeltaIdentity::InnerEven, alt_bracket(sample)?)
        }
    } else {
        (
            DeltaIdentity::InnerOdd,
            alt_bracket(sample)?.scale(&rat(outer as i64)),
        )
    };
    let diff = &actual - &expected;
    Ok(DeltaIdentityReport {
        outer,
        inner,
        identity,
        pass: diff.is_zero(),
        expected: expected.to_string(),
        actual: actual.to_string(),
        residual: if diff.is_zero() {
            None
        } else {
            Some(diff.to_string())
        },
    })
}

/// Seeded sample of operators `w(z) d^j` with `j <= max_order` and
/// coefficient degree at most `coeff_degree`.
pub fn sample_diffops(count: usize, max_order: u32, coeff_degree: u32, seed: u64) -> Vec<DiffOp> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let order = rng.next_range(0, max_order as i64) as u32;
            let mut coeff = rng.next_poly(1, coeff_degree, 3);
            if coeff.is_zero() {
                coeff = Polynomial::one(1);
            }
            DiffOp::single(order, coeff)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct VectorFieldClosureReport {
    pub arity: usize,
    pub vars: usize,
    pub closed: bool,
    /// Orders present in the bracket value (a vector field shows only 1).
    pub orders_present: Vec<u32>,
    pub bracket: String,
}

/// Evaluate the N-bracket on first-order operators without constant term
/// (vector fields) and report whether the value is again one.
pub fn vector_field_closure_check(fields: &[DiffOp]) -> Result<VectorFieldClosureReport> {
    let vars = fields.first().map(|f| f.vars()).unwrap_or(0);
    for f in fields {
        let pure_first_order = f.terms().all(|(sigma, _)| sigma.order() == 1);
        if !pure_first_order {
            return Err(Error::InvalidParameter(
                "arguments must be vector fields (pure first-order terms)".into(),
            ));
        }
    }
    let bracket = alt_bracket(fields)?;
    let mut orders: Vec<u32> = bracket.terms().map(|(s, _)| s.order()).collect();
    orders.sort_unstable();
    orders.dedup();
    let closed = orders.iter().all(|&o| o == 1);
    Ok(VectorFieldClosureReport {
        arity: fields.len(),
        vars,
        closed,
        orders_present: orders,
        bracket: bracket.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, parse_poly_laurent};

    fn p(s: &str) -> Polynomial {
        parse_poly(s, 1).unwrap()
    }

    fn d(order: u32, coeff: &str) -> DiffOp {
        DiffOp::single(order, p(coeff))
    }

    #[test]
    fn leibniz_composition() {
        // d o (z * 1) = z*d + 1
        let dz = d(1, "1");
        let z = d(0, "x");
        let c = dz.compose(&z);
        assert_eq!(c, &d(1, "x") + &d(0, "1"));
        // identity composes trivially
        let a = d(2, "x^2 - 1");
        assert_eq!(DiffOp::one(1).compose(&a), a);
        assert_eq!(a.compose(&DiffOp::one(1)), a);
        // (z d) o d = z d^2: no derivative of a constant coefficient
        let zd = d(1, "x");
        assert_eq!(zd.compose(&dz), d(2, "x"));
    }

    #[test]
    fn compose_order_adds() {
        let a = d(2, "x");
        let b = d(3, "x^2+1");
        assert_eq!(a.compose(&b).order(), Some(5));
    }

    #[test]
    fn compose_against_application() {
        // (A o B) f = A (B f) on a few polynomials
        let a = &d(1, "x") + &d(0, "x^2");
        let b = &d(2, "1") + &d(1, "-x");
        let ab = a.compose(&b);
        for f in ["x^4", "x^3 - 2x", "7"] {
            let f = p(f);
            assert_eq!(ab.apply(&f), a.apply(&b.apply(&f)));
        }
    }

    #[test]
    fn associativity_random() {
        let ops = sample_diffops(9, 2, 2, 11);
        for c in ops.chunks(3) {
            let lhs = c[0].compose(&c[1]).compose(&c[2]);
            let rhs = c[0].compose(&c[1].compose(&c[2]));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn laurent_coefficients_compose() {
        let a = DiffOp::single(1, parse_poly_laurent("x^-1", 1).unwrap());
        let b = DiffOp::single(0, parse_poly_laurent("x^-2", 1).unwrap());
        let c = a.compose(&b);
        // x^{-1} d o x^{-2} = x^{-1}(-2 x^{-3}) + x^{-3} d
        let expect = &DiffOp::single(0, parse_poly_laurent("-2*x^-4", 1).unwrap())
            + &DiffOp::single(1, parse_poly_laurent("x^-3", 1).unwrap());
        assert_eq!(c, expect);
    }

    #[test]
    fn commutator_is_vector_field_bracket() {
        // [w1 d, w2 d] = (w1 w2' - w2 w1') d
        let w1 = p("x^2 + 1");
        let w2 = p("x^3 - x");
        let a = DiffOp::single(1, w1.clone());
        let b = DiffOp::single(1, w2.clone());
        let bracket = alt_bracket(&[a, b]).unwrap();
        let coeff = &(&w1 * &w2.derive(0).unwrap()) - &(&w2 * &w1.derive(0).unwrap());
        assert_eq!(bracket, DiffOp::single(1, coeff));
    }

    #[test]
    fn repeated_argument_vanishes() {
        let a = d(1, "x^2");
        let b = d(2, "x");
        assert!(alt_bracket(&[a.clone(), b, a]).unwrap().is_zero());
    }

    #[test]
    fn bracket_matches_naive_permutation_sum() {
        // independent oracle: recompute every permutation from scratch
        let ops = sample_diffops(4, 2, 2, 5);
        let fast = alt_bracket(&ops).unwrap();
        let mut naive = DiffOp::zero(1);
        for (perm, sign) in crate::perm::permutations_with_signs(4) {
            let mut word = ops[perm[0]].clone();
            for &i in &perm[1..] {
                word = word.compose(&ops[i]);
            }
            naive = if sign == 1 {
                &naive + &word
            } else {
                &naive - &word
            };
        }
        assert_eq!(fast, naive);
    }

    #[test]
    fn only_wronskian_at_balance_power() {
        // N=2, p'=1: the commutator case reduces to exactly W*d
        let r = check_only_wronskian(2, 1, &[p("x^2+1"), p("x^3-x")]).unwrap();
        assert!(r.pass, "residual: {:?}", r.residual);
        assert_eq!(r.balance_exponent, 1);
        // odd N is out of scope
        assert!(matches!(
            check_only_wronskian(3, 2, &[p("1"), p("x"), p("x^2")]),
            Err(Error::OddArity { .. })
        ));
    }

    #[test]
    fn equal_power_bracket_constants() {
        // The bracket of N order-p' operators concentrates on the single
        // Wronskian term at the balance exponent, but with a combinatorial
        // constant that is 1 only for (N, p') = (2, 1). Frozen machine facts,
        // cross-validated by the naive permutation-sum oracle above:
        //   [w d^2]^4 = 2  * W^{0,1,2,3}(w) d^2
        //   [w d^3]^4 = 126* W^{0,1,2,3}(w) d^6
        let weights = [p("1"), p("x"), p("x^2"), p("x^3")];
        let w = wronskian(&weights).unwrap(); // = 12
        assert_eq!(w, p("12"));
        for (power, constant, balance) in [(2u32, 2i64, 2u32), (3, 126, 6)] {
            let ops: Vec<DiffOp> = weights
                .iter()
                .map(|f| DiffOp::single(power, f.clone()))
                .collect();
            let bracket = alt_bracket(&ops).unwrap();
            assert_eq!(
                bracket,
                DiffOp::single(balance, w.scale(&rat(constant))),
                "p' = {power}"
            );
            let report = check_only_wronskian(4, power, weights.as_ref()).unwrap();
            assert!(!report.pass);
            assert_eq!(report.balance_exponent, balance);
        }
    }

    #[test]
    fn only_wronskian_residual_above_balance_power() {
        // [w1 d^2, w2 d^2] = 2 W d^3 + W' d^2: the single-term reduction
        // fails for p' > N/2 and the residual is reported exactly.
        let w1 = p("x");
        let w2 = p("x^2");
        let r = check_only_wronskian(2, 2, &[w1.clone(), w2.clone()]).unwrap();
        assert!(!r.pass);
        let w = wronskian(&[w1, w2]).unwrap();
        let expected_actual = &DiffOp::single(3, w.scale(&rat(2))) + &DiffOp::single(2, p("2x"));
        let actual = alt_bracket(&[d(2, "x"), d(2, "x^2")]).unwrap();
        assert_eq!(actual, expected_actual);
    }

    #[test]
    fn delta_identities_small() {
        // (2,2): commutator Jacobi on three vector fields
        let sample = [d(1, "1"), d(1, "x"), d(1, "x^2")];
        let r = delta_identity_check(2, 2, &sample).unwrap();
        assert_eq!(r.identity, DeltaIdentity::BothEven);
        assert!(r.pass, "residual: {:?}", r.residual);
    }

    #[test]
    fn vector_fields_one_var_input_validation() {
        let not_vf = d(2, "x");
        assert!(vector_field_closure_check(&[not_vf]).is_err());
    }
}
