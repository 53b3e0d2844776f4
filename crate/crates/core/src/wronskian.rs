//! One-variable generalized Wronskians and their closed forms.
//!
//! Covers the determinant evaluations, the monomial Wronskian (whose
//! coefficient is a Vandermonde determinant), Witt-type structure constants,
//! the closure recurrence for the monomials `x^m/m!`, and the
//! conformal-weight transformation law under a change of variable.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{poly_det, rat_det};
use crate::poly::{rat, Polynomial, Rat};

fn check_one_var(args: &[Polynomial]) -> Result<()> {
    for a in args {
        if a.vars() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: a.vars(),
            });
        }
    }
    Ok(())
}

/// Classical Wronskian `det || d^{i-1} a_j / dx^{i-1} ||`, rows i = 1..N.
pub fn wronskian(args: &[Polynomial]) -> Result<Polynomial> {
    let n = args.len();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "Wronskian needs at least one argument".into(),
        ));
    }
    let indices: Vec<u32> = (0..n as u32).collect();
    generalized_wronskian(&indices, args)
}

/// Generalized Wronskian `W^{i_1,...,i_N}` with strictly increasing rows.
pub fn generalized_wronskian(indices: &[u32], args: &[Polynomial]) -> Result<Polynomial> {
    check_one_var(args)?;
    if indices.len() != args.len() {
        return Err(Error::ArityMismatch {
            expected: indices.len(),
            got: args.len(),
        });
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NonIncreasingMultiindex {
            context: format!("{indices:?}"),
        });
    }
    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(indices.len());
    for &i in indices {
        let mut row = Vec::with_capacity(args.len());
        for a in args {
            let mut d = a.clone();
            for _ in 0..i {
                d = d.derive(0)?;
            }
            row.push(d);
        }
        rows.push(row);
    }
    Ok(poly_det(&rows))
}

/// A single formal monomial `c * x^nu` with rational exponent.
/// The Wronskian of monomials is again a monomial, so this closed type
/// suffices; no general Puiseux ring is needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMonomial {
    pub coeff: Rat,
    pub exponent: Rat,
}

impl FormalMonomial {
    pub fn new(coeff: Rat, exponent: Rat) -> Self {
        if coeff.is_zero() {
            FormalMonomial {
                coeff,
                exponent: Rat::zero(),
            }
        } else {
            FormalMonomial { coeff, exponent }
        }
    }

    pub fn zero() -> Self {
        FormalMonomial {
            coeff: Rat::zero(),
            exponent: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// d/dx (c x^nu) = c*nu x^{nu-1}.
    pub fn derivative(&self) -> Self {
        FormalMonomial::new(&self.coeff * &self.exponent, &self.exponent - Rat::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        FormalMonomial::new(&self.coeff * &other.coeff, &self.exponent + &other.exponent)
    }
}

impl fmt::Display for FormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.coeff)?;
        if !self.exponent.is_zero() {
            write!(f, "*x^({})", self.exponent)?;
        }
        Ok(())
    }
}

/// Wronskian of the monomials `x^{nu_1},...,x^{nu_N}`, computed from the
/// falling-factorial coefficient determinant. Every expansion term carries
/// exponent `sum(nu) - N(N-1)/2`, so the result is a single monomial; the
/// Vandermonde product form is the independent oracle the tests compare to.
pub fn wronskian_monomials(exponents: &[Rat]) -> FormalMonomial {
    let n = exponents.len();
    if n == 0 {
        return FormalMonomial::new(Rat::one(), Rat::zero());
    }
    // row i (0-based) holds nu_j (nu_j - 1) ... (nu_j - i + 1)
    let mut mat: Vec<Vec<Rat>> = vec![vec![Rat::one(); n]; n];
    for i in 1..n {
        for j in 0..n {
            let factor = &exponents[j] - rat(i as i64 - 1);
            mat[i][j] = &mat[i - 1][j] * &factor;
        }
    }
    let coeff = rat_det(&mat);
    let total: Rat = exponents.iter().fold(Rat::zero(), |acc, v| acc + v);
    let shift = rat((n as i64) * (n as i64 - 1) / 2);
    FormalMonomial::new(coeff, total - shift)
}

/// The Vandermonde product `prod_{i<j} (nu_j - nu_i)`.
pub fn vandermonde_product(exponents: &[Rat]) -> Rat {
    let mut acc = Rat::one();
    for i in 0..exponents.len() {
        for j in i + 1..exponents.len() {
            acc *= &exponents[j] - &exponents[i];
        }
    }
    acc
}

/// Structure constant of the N-ary Witt-type algebra on monomial generators:
/// `Omega(i_1,...,i_N) = prod_{j<k} (i_k - i_j)`. Translation invariance of
/// the Vandermonde determinant makes the representation shift drop out.
pub fn witt_structure_constant(indices: &[i64]) -> Rat {
    let exps: Vec<Rat> = indices.iter().map(|&i| rat(i)).collect();
    vandermonde_product(&exps)
}

/// `W_m` computed by the last-row decomposition recurrence
/// `W_m = sum_{l=1}^{m-1} W_{m-l} (-1)^{l+1} x^l/l! - (-1)^m x^m/m!`;
/// closed form `x^m/m!` (tested, not assumed here).
pub fn recurrence_wm(m: u32) -> Result<Polynomial> {
    if m < 1 {
        return Err(Error::InvalidParameter("recurrence needs m >= 1".into()));
    }
    let mut factorial: Vec<Rat> = vec![Rat::one()];
    for i in 1..=m as i64 {
        let next = factorial.last().unwrap() * rat(i);
        factorial.push(next);
    }
    let x_pow =
        |l: u32| Polynomial::monomial(1, vec![l as i64], factorial[l as usize].clone().recip());
    let mut w: Vec<Polynomial> = vec![Polynomial::zero(1)]; // W_0 unused
    for mm in 1..=m {
        let mut acc = Polynomial::zero(1);
        for l in 1..mm {
            let term = &w[(mm - l) as usize] * &x_pow(l);
            if l % 2 == 1 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
        let last = x_pow(mm);
        if mm % 2 == 0 {
            acc = &acc - &last;
        } else {
            acc = &acc + &last;
        }
        w.push(acc);
    }
    Ok(w.pop().expect("m >= 1"))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformalReport {
    pub arity: usize,
    /// Exponent of dy/dx actually used on the right-hand side.
    pub weight: u32,
    pub pass: bool,
    /// Degree up to which the identity is certified.
    pub certificate_degree: u32,
    pub lhs: String,
    pub rhs: String,
}

/// Verify the change-of-variable law for the Wronskian of N weight-zero
/// scalar fields: `W_x(phi o y) = (dy/dx)^w (W_y phi) o y` with
/// `w = N(N-1)/2`, as truncated series up to degree `max_degree`.
///
/// `weight_override` substitutes a different exponent (negative controls).
/// The check refuses to certify when the truncation degree is below the
/// total degree of either side.
pub fn conformal_weight_check(
    y: &Polynomial,
    phis: &[Polynomial],
    max_degree: u32,
    weight_override: Option<u32>,
) -> Result<ConformalReport> {
    let n = phis.len();
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one field".into()));
    }
    check_one_var(phis)?;
    if y.vars() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: y.vars(),
        });
    }
    if !y.constant_term().is_zero() {
        return Err(Error::InvalidParameter(
            "change of variable must fix the origin: y(0) = 0".into(),
        ));
    }
    let dy = y.derive(0)?;
    if dy.constant_term().is_zero() {
        return Err(Error::InvalidParameter(
            "change of variable must be invertible at the origin: y'(0) != 0".into(),
        ));
    }
    let weight = weight_override.unwrap_or((n * (n - 1) / 2) as u32);

    let composed: Vec<Polynomial> = phis
        .iter()
        .map(|phi| phi.substitute(0, y))
        .collect::<Result<_>>()?;
    let lhs = wronskian(&composed)?;
    let wy = wronskian(phis)?;
    let rhs = &dy.pow(weight) * &wy.substitute(0, y)?;

    let needed = lhs
        .total_degree()
        .unwrap_or(0)
        .max(rhs.total_degree().unwrap_or(0))
        .max(0) as u32;
    if max_degree < needed {
        return Err(Error::TruncationTooSmall {
            given: max_degree,
            needed,
        });
    }
    let pass = lhs.truncate(max_degree as i64) == rhs.truncate(max_degree as i64);
    Ok(ConformalReport {
        arity: n,
        weight,
        pass,
        certificate_degree: max_degree,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, ratio};
    use crate::skewop::{op_equal_on, SkewOp, TestSpace};

    fn p(s: &str) -> Polynomial {
        parse_poly(s, 1).unwrap()
    }

    #[test]
    fn sl2_relations() {
        assert_eq!(wronskian(&[p("-2x"), p("1")]).unwrap(), p("2"));
        assert_eq!(wronskian(&[p("-2x"), p("-x^2")]).unwrap(), p("2x^2"));
        assert_eq!(wronskian(&[p("1"), p("-x^2")]).unwrap(), p("-2x"));
    }

    #[test]
    fn single_argument_is_identity() {
        assert_eq!(wronskian(&[p("x^3 - x")]).unwrap(), p("x^3 - x"));
        assert!(wronskian(&[]).is_err());
    }

    #[test]
    fn generalized_values() {
        assert_eq!(
            generalized_wronskian(&[0, 2], &[p("x"), p("x^2")]).unwrap(),
            p("2x")
        );
        assert!(generalized_wronskian(&[0, 2], &[p("x"), p("x")])
            .unwrap()
            .is_zero());
        assert_eq!(
            generalized_wronskian(&[1, 2], &[p("x"), p("x^2")]).unwrap(),
            p("2")
        );
        assert!(matches!(
            generalized_wronskian(&[2, 0], &[p("x"), p("x^2")]),
            Err(Error::NonIncreasingMultiindex { .. })
        ));
        assert!(generalized_wronskian(&[0, 1], &[p("x")]).is_err());
    }

    #[test]
    fn wronskian_agrees_with_wedge_route() {
        for n in 1..=5usize {
            let indices: Vec<u32> = (0..n as u32).collect();
            let det_op = SkewOp::generalized_wronskian(&indices).unwrap();
            let mut wedge_op = SkewOp::partial_power(0);
            for i in 1..n as u32 {
                wedge_op = wedge_op.wedge(&SkewOp::partial_power(i)).unwrap();
            }
            let space = TestSpace::monomials(1, n as u32 + 1);
            let r = op_equal_on(&det_op, &wedge_op, &space).unwrap();
            assert!(r.equal && !r.vacuous, "N={n}");
        }
    }

    #[test]
    fn monomial_wronskian_matches_vandermonde_oracle() {
        let cases: Vec<Vec<Rat>> = vec![
            vec![rat(0), rat(1)],
            vec![rat(0), rat(1), rat(2)],
            vec![ratio(1, 2), ratio(5, 2), ratio(9, 2)],
            vec![rat(3), rat(3)],
            vec![rat(-1), rat(0), rat(2), rat(5)],
        ];
        for nu in cases {
            let n = nu.len() as i64;
            let m = wronskian_monomials(&nu);
            let v = vandermonde_product(&nu);
            assert_eq!(m.coeff, v, "coefficient for {nu:?}");
            if !v.is_zero() {
                let total: Rat = nu.iter().fold(Rat::zero(), |a, b| a + b);
                assert_eq!(m.exponent, total - rat(n * (n - 1) / 2));
            }
        }
        // specific values from the closed form
        let m = wronskian_monomials(&[rat(0), rat(1)]);
        assert_eq!(m.coeff, rat(1));
        assert!(m.exponent.is_zero());
        let m2 = wronskian_monomials(&[rat(0), rat(1), rat(2)]);
        assert_eq!(m2.coeff, rat(2));
        assert!(m2.exponent.is_zero());
        assert!(wronskian_monomials(&[rat(4), rat(4), rat(7)]).is_zero());
    }

    #[test]
    fn monomial_wronskian_cross_checks_determinant_route() {
        // integer exponents: compare against the polynomial Wronskian
        let nus = [vec![0i64, 1, 3], vec![1, 2, 4], vec![0, 2, 3, 5]];
        for nu in nus {
            let args: Vec<Polynomial> = nu
                .iter()
                .map(|&e| Polynomial::monomial(1, vec![e], rat(1)))
                .collect();
            let direct = wronskian(&args).unwrap();
            let exps: Vec<Rat> = nu.iter().map(|&e| rat(e)).collect();
            let formal = wronskian_monomials(&exps);
            let expect = Polynomial::monomial(
                1,
                vec![i64::try_from(formal.exponent.to_integer()).unwrap()],
                formal.coeff.clone(),
            );
            assert_eq!(direct, expect, "nu = {nu:?}");
        }
    }

    #[test]
    fn witt_constants() {
        // N = 2: Omega(i, j) = j - i
        for i in -5..=5i64 {
            for j in -5..=5i64 {
                assert_eq!(witt_structure_constant(&[i, j]), rat(j - i));
            }
        }
        assert!(witt_structure_constant(&[4, 4, 9]).is_zero());
        assert_eq!(witt_structure_constant(&[0, 1, 3]), rat(6));
        // agreement with the monomial representation a_i = x^{i + N/2}
        let shifted: Vec<Rat> = [0i64, 1, 3].iter().map(|&i| rat(i) + ratio(3, 2)).collect();
        assert_eq!(
            wronskian_monomials(&shifted).coeff,
            witt_structure_constant(&[0, 1, 3])
        );
    }

    #[test]
    fn formal_monomial_rules() {
        // d/dx (c x^nu) = c nu x^{nu-1}
        let m = FormalMonomial::new(rat(2), ratio(1, 2));
        let d = m.derivative();
        assert_eq!(d.coeff, rat(1));
        assert_eq!(d.exponent, ratio(-1, 2));
        // derivative of a constant is the zero monomial
        let c = FormalMonomial::new(rat(5), Rat::zero());
        assert!(c.derivative().is_zero());
        // products add exponents and multiply coefficients
        let p = m.mul(&FormalMonomial::new(rat(3), ratio(3, 2)));
        assert_eq!(p.coeff, rat(6));
        assert_eq!(p.exponent, rat(2));
        // zero absorbs and normalizes its exponent
        let z = FormalMonomial::new(Rat::zero(), rat(7));
        assert!(z.is_zero());
        assert_eq!(z, FormalMonomial::zero());
    }

    #[test]
    fn witt_skew_and_translation_invariant() {
        let base = [2i64, -1, 5];
        let mut swapped = base;
        swapped.swap(0, 1);
        assert_eq!(
            witt_structure_constant(&base),
            -witt_structure_constant(&swapped)
        );
        for c in [-3i64, 1, 7] {
            let translated: Vec<i64> = base.iter().map(|&i| i + c).collect();
            assert_eq!(
                witt_structure_constant(&base),
                witt_structure_constant(&translated)
            );
        }
    }

    #[test]
    fn recurrence_reproduces_monomials() {
        assert_eq!(recurrence_wm(1).unwrap(), p("x"));
        assert_eq!(recurrence_wm(2).unwrap(), p("x^2/2"));
        assert_eq!(recurrence_wm(6).unwrap(), p("x^6/720"));
        assert!(recurrence_wm(0).is_err());
    }

    #[test]
    fn recurrence_matches_determinant_route() {
        // W_m is the Wronskian of (x, x^2/2!, ..., x^m/m!)
        for m in 1..=6u32 {
            let mut fact = rat(1);
            let args: Vec<Polynomial> = (1..=m as i64)
                .map(|k| {
                    fact *= rat(k);
                    Polynomial::monomial(1, vec![k], fact.clone().recip())
                })
                .collect();
            assert_eq!(recurrence_wm(m).unwrap(), wronskian(&args).unwrap());
        }
    }

    #[test]
    fn conformal_weight_identity_and_controls() {
        // identity change: both sides equal for any phi
        let r = conformal_weight_check(&p("x"), &[p("x"), p("x^2")], 6, None).unwrap();
        assert!(r.pass);
        assert_eq!(r.weight, 1);

        // N=2, y=2x, phi=(y, y^2): W(2x,4x^2) = 8x^2 = 2 * (2x)^2
        let r2 = conformal_weight_check(&p("2x"), &[p("x"), p("x^2")], 6, None).unwrap();
        assert!(r2.pass);

        // N=3, y=x+x^2, phi=(1, y, y^2), degree 8
        let y = p("x + x^2");
        let phis = [p("1"), p("x"), p("x^2")];
        let r3 = conformal_weight_check(&y, &phis, 8, None).unwrap();
        assert!(r3.pass);
        assert_eq!(r3.weight, 3);

        // negative control: perturbing the exponent breaks it both ways
        for w in [2u32, 4] {
            let bad = conformal_weight_check(&y, &phis, 10, Some(w)).unwrap();
            assert!(!bad.pass, "weight {w} should fail");
        }

        // truncation too small is an error, not a silent pass
        assert!(matches!(
            conformal_weight_check(&y, &phis, 2, None),
            Err(Error::TruncationTooSmall { .. })
        ));

        // non-invertible change rejected
        assert!(conformal_weight_check(&p("x^2"), &phis, 8, None).is_err());
        assert!(conformal_weight_check(&p("x+1"), &phis, 8, None).is_err());
    }
}
