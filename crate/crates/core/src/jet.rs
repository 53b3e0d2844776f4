//! Wronskian brackets over several independent variables.
//!
//! The arity-`C(n+k, n)` bracket `box_k(a_1,...,a_N) = det || D_{sigma_i}(a_j) ||`
//! runs over all derivative multiindices of order at most k, rows in canonical
//! jet order. `check_cross_vanishing` sweeps `box_{k_out}[box_{k_in}]` over a
//! monomial test space at the documented soundness degree bound and certifies
//! the exact-zero verdict.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::poly_det;
use crate::perm::{binomial, combinations};
use crate::poly::{MultiIndex, Polynomial};
use crate::seeded::SplitMix64;
use crate::skewop::{SkewOp, SpaceDescriptor, TestSpace};

/// Dimension of the order-`k` jet fiber over `n` base variables, computed
/// both as `sum_i C(n+i-1, n-1)` and as `C(n+k, n)`; the two must agree.
pub fn jet_dimension(n: usize, k: u32) -> Result<u64> {
    if n < 1 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    let sum_form: u64 = (0..=k)
        .map(|i| binomial(n as u64 + i as u64 - 1, n as u64 - 1))
        .sum();
    let closed_form = binomial(n as u64 + k as u64, n as u64);
    assert_eq!(sum_form, closed_form, "jet dimension forms disagree");
    Ok(closed_form)
}

/// Row data of the `box_k` bracket: the ordered list of all multiindices of
/// order at most k.
#[derive(Debug, Clone)]
pub struct JetBracketSpec {
    n: usize,
    k: u32,
    basis: Vec<MultiIndex>,
}

impl JetBracketSpec {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        let expected = jet_dimension(n, k)?;
        let basis = MultiIndex::all_up_to_order(n, k);
        assert_eq!(basis.len() as u64, expected);
        Ok(JetBracketSpec { n, k, basis })
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    /// Bracket arity `N = C(n+k, n)`.
    pub fn arity(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    /// Norm metadata `|box_k| = sum |sigma|` over the rows.
    pub fn norm(&self) -> u64 {
        self.basis.iter().map(|s| s.order() as u64).sum()
    }

    /// The bracket as a skew operator (determinant evaluator).
    pub fn as_skew_op(&self) -> SkewOp {
        SkewOp::det_rows(
            format!("box({},{})", self.n, self.k),
            self.n,
            self.basis.clone(),
        )
    }
}

/// `det || D_{sigma_i}(a_j) ||` for the given spec.
pub fn box_bracket(spec: &JetBracketSpec, args: &[Polynomial]) -> Result<Polynomial> {
    if args.len() != spec.arity() {
        return Err(Error::ArityMismatch {
            expected: spec.arity(),
            got: args.len(),
        });
    }
    for a in args {
        if a.vars() != spec.n {
            return Err(Error::DimensionMismatch {
                expected: spec.n,
                got: a.vars(),
            });
        }
    }
    let rows: Vec<Vec<Polynomial>> = spec
        .basis
        .iter()
        .map(|sigma| {
            args.iter()
                .map(|a| a.apply_multiindex(sigma).expect("checked"))
                .collect()
        })
        .collect();
    Ok(poly_det(&rows))
}

/// Jacobian determinant of `n` functions of `n` variables.
pub fn nambu_bracket(args: &[Polynomial]) -> Result<Polynomial> {
    let n = args.len();
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one function".into()));
    }
    for a in args {
        if a.vars() != n {
            return Err(Error::ArityMismatch {
                expected: a.vars(),
                got: n,
            });
        }
    }
    let rows: Vec<Vec<Polynomial>> = args
        .iter()
        .map(|f| (0..n).map(|j| f.derive(j).expect("in range")).collect())
        .collect();
    Ok(poly_det(&rows))
}

/// The Nambu bracket as a skew operator.
pub fn nambu_op(n: usize) -> SkewOp {
    SkewOp::from_fn(format!("nambu({n})"), n, n, 1, move |args| {
        nambu_bracket(args).expect("validated by SkewOp::evaluate")
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossVanishReport {
    pub n: usize,
    pub k_in: u32,
    pub k_out: u32,
    pub arity_in: usize,
    pub arity_out: usize,
    /// Per-slot soundness degree bound recorded with the verdict: agreement on
    /// monomials up to this degree proves the identity for operators of this
    /// differential order.
    pub soundness_degree: u32,
    /// Degree actually tested (soundness bound plus any margin).
    pub test_degree: u32,
    pub certifying: bool,
    pub space: SpaceDescriptor,
    pub tuples_checked: u64,
    pub pass: bool,
    pub witness: Option<Vec<String>>,
    /// Norm bookkeeping: `|box_out[box_in]| = |box_in| + |box_out|`.
    pub norm_in: u64,
    pub norm_out: u64,
    pub norm_action: u64,
}

/// Verify `box_{k_out}[box_{k_in}] = 0` on every strictly increasing tuple of
/// monomials of per-slot degree at most `k_in + k_out + margin`.
///
/// Refuses (rather than samples) when the tuple count exceeds `budget`;
/// `sample` switches to a seeded non-certifying subset of that size.
pub fn check_cross_vanishing(
    n: usize,
    k_in: u32,
    k_out: u32,
    margin: u32,
    budget: u64,
    sample: Option<(u64, u64)>,
) -> Result<CrossVanishReport> {
    if n < 1 || k_in < 1 || k_out < 1 {
        return Err(Error::InvalidParameter("need n, k_in, k_out >= 1".into()));
    }
    let spec_in = JetBracketSpec::new(n, k_in)?;
    let spec_out = JetBracketSpec::new(n, k_out)?;
    let op_in = spec_in.as_skew_op();
    let op_out = spec_out.as_skew_op();
    let action = op_out.action(&op_in)?;
    let soundness = k_in + k_out;
    let test_degree = soundness + margin;
    let space = TestSpace::monomials(n, test_degree);
    let arity = action.arity();

    let total = binomial(space.len() as u64, arity as u64);
    let combos: Vec<Vec<usize>> = match sample {
        None => {
            if total > budget {
                return Err(Error::BudgetExceeded {
                    needed: total,
                    budget,
                });
            }
            combinations(space.len(), arity)
        }
        Some((count, seed)) => {
            let mut rng = SplitMix64::new(seed);
            let mut out = Vec::new();
            for _ in 0..count {
                let mut picks: Vec<usize> = Vec::new();
                while picks.len() < arity {
                    let c = rng.next_range(0, space.len() as i64 - 1) as usize;
                    if !picks.contains(&c) {
                        picks.push(c);
                    }
                }
                picks.sort_unstable();
                out.push(picks);
            }
            out
        }
    };
    let tuples = combos.len() as u64;
    let witness = combos
        .par_iter()
        .filter_map(|combo| {
            let args: Vec<Polynomial> = combo.iter().map(|&i| space.basis()[i].clone()).collect();
            let v = action.evaluate(&args).expect("validated");
            if v.is_zero() {
                None
            } else {
                Some((combo.clone(), args))
            }
        })
        .min_by(|a, b| a.0.cmp(&b.0));

    let norm_in = spec_in.norm();
    let norm_out = spec_out.norm();
    let norm_action = action.op_norm()?;
    assert_eq!(norm_action, norm_in + norm_out, "norm bookkeeping");

    Ok(CrossVanishReport {
        n,
        k_in,
        k_out,
        arity_in: spec_in.arity(),
        arity_out: spec_out.arity(),
        soundness_degree: soundness,
        test_degree,
        certifying: sample.is_none(),
        space: space.descriptor(),
        tuples_checked: tuples,
        pass: witness.is_none(),
        witness: witness.map(|(_, args)| args.iter().map(|p| p.to_string()).collect()),
        norm_in,
        norm_out,
        norm_action,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LeibnizWitness {
    pub factor_a: String,
    pub factor_b: String,
    pub rest: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

/// Search for a violation of the multi-derivation Leibniz rule
/// `Delta(ab, a_2,...) = a Delta(b, a_2,...) + Delta(a, a_2,...) b`
/// over products of test-space elements in the first slot.
/// Returns the first witness, or None when the rule holds on the sweep.
pub fn leibniz_multiderivation_witness(
    op: &SkewOp,
    space: &TestSpace,
) -> Result<Option<LeibnizWitness>> {
    let arity = op.arity();
    if arity < 1 {
        return Err(Error::InvalidParameter("need arity >= 1".into()));
    }
    if space.len() < arity - 1 {
        return Ok(None);
    }
    for combo in combinations(space.len(), arity - 1) {
        let rest: Vec<Polynomial> = combo.iter().map(|&i| space.basis()[i].clone()).collect();
        for ai in 0..space.len() {
            for bi in ai..space.len() {
                let a = &space.basis()[ai];
                let b = &space.basis()[bi];
                let mut args = Vec::with_capacity(arity);
                args.push(a * b);
                args.extend(rest.iter().cloned());
                let lhs = op.evaluate(&args)?;
                args[0] = b.clone();
                let term1 = a * &op.evaluate(&args)?;
                args[0] = a.clone();
                let term2 = &op.evaluate(&args)? * b;
                let rhs = &term1 + &term2;
                if lhs != rhs {
                    return Ok(Some(LeibnizWitness {
                        factor_a: a.to_string(),
                        factor_b: b.to_string(),
                        rest: rest.iter().map(|p| p.to_string()).collect(),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::wronskian::wronskian;

    fn p2(s: &str) -> Polynomial {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(jet_dimension(1, 3).unwrap(), 4);
        assert_eq!(jet_dimension(2, 1).unwrap(), 3);
        assert_eq!(jet_dimension(3, 2).unwrap(), 10);
        for k in 0..=4 {
            assert_eq!(jet_dimension(1, k).unwrap(), k as u64 + 1);
        }
    }

    #[test]
    fn box_two_variable_example() {
        // the homotopy 3-Lie algebra on span(1, x, y, xy)
        let spec = JetBracketSpec::new(2, 1).unwrap();
        assert_eq!(spec.arity(), 3);
        let b = |a: &str, b_: &str, c: &str| box_bracket(&spec, &[p2(a), p2(b_), p2(c)]).unwrap();
        assert_eq!(b("1", "x", "y"), p2("1"));
        assert_eq!(b("1", "x", "x*y"), p2("x"));
        assert_eq!(b("1", "y", "x*y"), p2("-y"));
        assert_eq!(b("x", "y", "x*y"), p2("-x*y"));
        // repeated argument
        assert!(b("x", "x", "y").is_zero());
        // arity mismatch
        assert!(box_bracket(&spec, &[p2("1"), p2("x")]).is_err());
    }

    #[test]
    fn box_reduces_to_wronskian_for_one_variable() {
        for k in 1..=4u32 {
            let spec = JetBracketSpec::new(1, k).unwrap();
            let n = spec.arity();
            let args: Vec<Polynomial> = (0..n as i64)
                .map(|e| Polynomial::monomial(1, vec![e + 1], crate::poly::ratio(1, e + 2)))
                .collect();
            assert_eq!(
                box_bracket(&spec, &args).unwrap(),
                wronskian(&args).unwrap(),
                "k = {k}"
            );
        }
        let spec = JetBracketSpec::new(1, 2).unwrap();
        let args = [
            parse_poly("1", 1).unwrap(),
            parse_poly("x", 1).unwrap(),
            parse_poly("x^2", 1).unwrap(),
        ];
        assert_eq!(
            box_bracket(&spec, &args).unwrap(),
            parse_poly("2", 1).unwrap()
        );
    }

    #[test]
    fn nambu_values() {
        assert_eq!(nambu_bracket(&[p2("x"), p2("y")]).unwrap(), p2("1"));
        assert_eq!(nambu_bracket(&[p2("x^2"), p2("y")]).unwrap(), p2("2x"));
        let f = parse_poly("x*y - z", 3).unwrap();
        let g = parse_poly("x", 3).unwrap();
        assert!(nambu_bracket(&[f.clone(), f, g]).unwrap().is_zero());
        // arity must match variable count
        assert!(nambu_bracket(&[p2("x")]).is_err());
    }

    #[test]
    fn nambu_is_a_multiderivation_but_box_is_not() {
        let space2 = TestSpace::monomials(2, 1);
        let nam = nambu_op(2);
        assert!(leibniz_multiderivation_witness(&nam, &space2)
            .unwrap()
            .is_none());
        // the one-variable k=1 Wronskian violates the Leibniz rule
        let spec = JetBracketSpec::new(1, 1).unwrap();
        let w = spec.as_skew_op();
        let space1 = TestSpace::monomials(1, 2);
        let witness = leibniz_multiderivation_witness(&w, &space1)
            .unwrap()
            .expect("Wronskian is not a multi-derivation");
        assert_ne!(witness.lhs, witness.rhs);
    }

    #[test]
    fn cross_vanishing_small_cases() {
        // classical Jacobi: n=1, k_in = k_out = 1
        let r = check_cross_vanishing(1, 1, 1, 0, 10_000, None).unwrap();
        assert!(r.pass && r.certifying);
        assert_eq!(r.soundness_degree, 2);
        assert_eq!(r.tuples_checked, 1); // C(3,3)

        // two-variable ternary case: 6 tuples at degree bound 2
        let r2 = check_cross_vanishing(2, 1, 1, 0, 10_000, None).unwrap();
        assert!(r2.pass);
        assert_eq!(r2.tuples_checked, 6); // C(6,5)
        assert_eq!(r2.norm_action, r2.norm_in + r2.norm_out);
    }

    #[test]
    fn cross_vanishing_budget_refusal() {
        match check_cross_vanishing(2, 1, 1, 0, 2, None) {
            Err(Error::BudgetExceeded { needed, budget }) => {
                assert_eq!(needed, 6);
                assert_eq!(budget, 2);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn jet_norms() {
        let spec = JetBracketSpec::new(2, 1).unwrap();
        assert_eq!(spec.norm(), 2); // |(0,0)| + |(1,0)| + |(0,1)|
        assert_eq!(spec.as_skew_op().op_norm().unwrap(), 2);
    }
}
