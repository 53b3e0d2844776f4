//! Skew-symmetric multilinear operators on the polynomial algebra.
//!
//! A `SkewOp` is an arity-k alternating k-linear map from polynomials to
//! polynomials, carried as an evaluator closure plus structural metadata:
//! an optional generalized-Wronskian row list, an optional norm (the sum of
//! derivative orders, additive under wedge and action), and a slot order
//! bound used for the finite-verification soundness contract.
//!
//! Soundness contract: when every slot of an operator is a differential
//! operator of order at most B (tracked by `slot_order_bound`), agreement on
//! all monomials of per-slot degree at most B implies equality on all
//! polynomials. Equality checks therefore sweep strictly increasing tuples of
//! a monomial `TestSpace`, which suffices by multilinearity and skewness.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::poly_det;
use crate::perm::{combinations, unshuffles};
use crate::poly::{MultiIndex, Polynomial};

type EvalFn = Arc<dyn Fn(&[Polynomial]) -> Polynomial + Send + Sync>;

/// Alternating multilinear operator with evaluation semantics.
#[derive(Clone)]
pub struct SkewOp {
    name: String,
    arity: usize,
    vars: usize,
    slot_order_bound: u32,
    wronskian_spec: Option<Vec<MultiIndex>>,
    norm: Option<u64>,
    eval: EvalFn,
}

impl fmt::Debug for SkewOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SkewOp({}, arity {}, {} vars, bound {})",
            self.name, self.arity, self.vars, self.slot_order_bound
        )
    }
}

impl SkewOp {
    pub fn from_fn<F>(
        name: impl Into<String>,
        arity: usize,
        vars: usize,
        slot_order_bound: u32,
        f: F,
    ) -> Self
    where
        F: Fn(&[Polynomial]) -> Polynomial + Send + Sync + 'static,
    {
        SkewOp {
            name: name.into(),
            arity,
            vars,
            slot_order_bound,
            wronskian_spec: None,
            norm: None,
            eval: Arc::new(f),
        }
    }

    /// The zero operator of a given arity.
    pub fn zero(arity: usize, vars: usize) -> Self {
        Self::from_fn("0", arity, vars, 0, move |_| Polynomial::zero(vars))
    }

    /// Arity-0 operator holding a constant polynomial (full inner products
    /// land here so the algebra stays closed).
    pub fn constant(vars: usize, value: Polynomial) -> Self {
        let name = format!("const({value})");
        Self::from_fn(name, 0, vars, 0, move |_| value.clone())
    }

    /// The single total derivative `D_sigma` as an arity-1 operator.
    pub fn derivative(sigma: MultiIndex) -> Self {
        let vars = sigma.len();
        let order = sigma.order();
        let name = if vars == 1 {
            format!("d[{}]", sigma.entries()[0])
        } else {
            format!("D{sigma}")
        };
        let spec = sigma.clone();
        SkewOp {
            name,
            arity: 1,
            vars,
            slot_order_bound: order,
            wronskian_spec: Some(vec![sigma]),
            norm: Some(order as u64),
            eval: Arc::new(move |args: &[Polynomial]| {
                args[0].apply_multiindex(&spec).expect("dimension checked")
            }),
        }
    }

    /// `d^i` on one-variable polynomials.
    pub fn partial_power(i: u32) -> Self {
        Self::derivative(MultiIndex::new(vec![i]))
    }

    /// The arity-1 identity operator.
    pub fn identity(vars: usize) -> Self {
        let mut op = Self::derivative(MultiIndex::zero(vars));
        op.name = "id".into();
        op
    }

    /// Determinant operator `det || D_{sigma_i}(a_j) ||` on the given rows.
    pub(crate) fn det_rows(name: impl Into<String>, vars: usize, rows: Vec<MultiIndex>) -> Self {
        let arity = rows.len();
        let bound = rows.iter().map(|s| s.order()).max().unwrap_or(0);
        let norm = rows.iter().map(|s| s.order() as u64).sum();
        let rows_for_eval = rows.clone();
        SkewOp {
            name: name.into(),
            arity,
            vars,
            slot_order_bound: bound,
            wronskian_spec: Some(rows),
            norm: Some(norm),
            eval: Arc::new(move |args: &[Polynomial]| {
                let matrix: Vec<Vec<Polynomial>> = rows_for_eval
                    .iter()
                    .map(|sigma| {
                        args.iter()
                            .map(|a| a.apply_multiindex(sigma).expect("dimension checked"))
                            .collect()
                    })
                    .collect();
                poly_det(&matrix)
            }),
        }
    }

    /// Generalized Wronskian `W^{i_1,...,i_N}` on one-variable polynomials.
    /// The index list must be strictly increasing.
    pub fn generalized_wronskian(indices: &[u32]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidParameter(
                "Wronskian needs at least one row".into(),
            ));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasingMultiindex {
                context: format!("{indices:?}"),
            });
        }
        let name = format!(
            "W[{}]",
            indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        let rows = indices.iter().map(|&i| MultiIndex::new(vec![i])).collect();
        Ok(Self::det_rows(name, 1, rows))
    }

    /// The classical Wronskian `W^{0,1,...,N-1}`.
    pub fn wronskian(n: usize) -> Self {
        let indices: Vec<u32> = (0..n as u32).collect();
        Self::generalized_wronskian(&indices).expect("increasing by construction")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn slot_order_bound(&self) -> u32 {
        self.slot_order_bound
    }

    pub fn wronskian_spec(&self) -> Option<&[MultiIndex]> {
        self.wronskian_spec.as_deref()
    }

    /// The Wronskian norm `|W^i| = |i|`; additive under wedge and action.
    pub fn op_norm(&self) -> Result<u64> {
        self.norm.ok_or(Error::MissingNorm)
    }

    /// Evaluate on exactly `arity` polynomials in the right variable count.
    pub fn evaluate(&self, args: &[Polynomial]) -> Result<Polynomial> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        for a in args {
            if a.vars() != self.vars {
                return Err(Error::DimensionMismatch {
                    expected: self.vars,
                    got: a.vars(),
                });
            }
        }
        Ok((self.eval)(args))
    }

    /// Inner product: bind the first `m` slots to fixed polynomials.
    pub fn inner_product(&self, bound: &[Polynomial]) -> Result<SkewOp> {
        if bound.len() > self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: bound.len(),
            });
        }
        for a in bound {
            if a.vars() != self.vars {
                return Err(Error::DimensionMismatch {
                    expected: self.vars,
                    got: a.vars(),
                });
            }
        }
        let rest = self.arity - bound.len();
        let name = format!(
            "inner({}; {})",
            self.name,
            bound
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        let inner = self.eval.clone();
        let fixed: Vec<Polynomial> = bound.to_vec();
        let vars = self.vars;
        let bound_order = self.slot_order_bound;
        Ok(SkewOp {
            name,
            arity: rest,
            vars,
            slot_order_bound: bound_order,
            wronskian_spec: None,
            norm: None,
            eval: Arc::new(move |args: &[Polynomial]| {
                let mut full = fixed.clone();
                full.extend_from_slice(args);
                (inner)(&full)
            }),
        })
    }

    fn check_same_algebra(&self, other: &SkewOp) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                got: other.vars,
            });
        }
        Ok(())
    }

    /// Exterior multiplication: sum over unshuffles of the product of the two
    /// evaluations. Graded commutative: `wedge(A,B) = (-1)^{kl} wedge(B,A)`.
    pub fn wedge(&self, other: &SkewOp) -> Result<SkewOp> {
        self.check_same_algebra(other)?;
        let k = self.arity;
        let l = other.arity;
        let vars = self.vars;
        let name = format!("wedge({},{})", self.name, other.name);
        let shuffles = unshuffles(k + l, k);
        let lhs = self.eval.clone();
        let rhs = other.eval.clone();
        let norm = match (self.norm, other.norm) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        // a wedge of Wronskian rows is again a row list (up to sign/vanishing)
        let wspec = match (&self.wronskian_spec, &other.wronskian_spec) {
            (Some(a), Some(b)) => {
                let mut rows = a.clone();
                rows.extend(b.iter().cloned());
                Some(rows)
            }
            _ => None,
        };
        Ok(SkewOp {
            name,
            arity: k + l,
            vars,
            slot_order_bound: self.slot_order_bound.max(other.slot_order_bound),
            wronskian_spec: wspec,
            norm,
            eval: Arc::new(move |args: &[Polynomial]| {
                let mut acc: Option<Polynomial> = None;
                for u in &shuffles {
                    let head: Vec<Polynomial> = u.head.iter().map(|&i| args[i].clone()).collect();
                    let tail: Vec<Polynomial> = u.tail.iter().map(|&i| args[i].clone()).collect();
                    let term = &(lhs)(&head) * &(rhs)(&tail);
                    acc = Some(match (acc, u.sign) {
                        (None, 1) => term,
                        (None, _) => -term,
                        (Some(a), 1) => a + term,
                        (Some(a), _) => a - term,
                    });
                }
                acc.unwrap_or_else(|| Polynomial::zero(vars))
            }),
        })
    }

    /// The action `self[inner]`: insert the inner bracket into the first slot,
    /// alternated over unshuffles of the inner arguments.
    pub fn action(&self, inner: &SkewOp) -> Result<SkewOp> {
        self.check_same_algebra(inner)?;
        let k = self.arity;
        let l = inner.arity;
        assert!(k >= 1, "outer operator needs a slot to insert into");
        let vars = self.vars;
        let name = format!("act({},{})", self.name, inner.name);
        let shuffles = unshuffles(k + l - 1, l);
        let outer_eval = self.eval.clone();
        let inner_eval = inner.eval.clone();
        let norm = match (self.norm, inner.norm) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(SkewOp {
            name,
            arity: k + l - 1,
            vars,
            slot_order_bound: self.slot_order_bound + inner.slot_order_bound,
            wronskian_spec: None,
            norm,
            eval: Arc::new(move |args: &[Polynomial]| {
                let mut acc: Option<Polynomial> = None;
                for u in &shuffles {
                    let head: Vec<Polynomial> = u.head.iter().map(|&i| args[i].clone()).collect();
                    let mut outer_args = Vec::with_capacity(k);
                    outer_args.push((inner_eval)(&head));
                    for &i in &u.tail {
                        outer_args.push(args[i].clone());
                    }
                    let term = (outer_eval)(&outer_args);
                    acc = Some(match (acc, u.sign) {
                        (None, 1) => term,
                        (None, _) => -term,
                        (Some(a), 1) => a + term,
                        (Some(a), _) => a - term,
                    });
                }
                acc.unwrap_or_else(|| Polynomial::zero(vars))
            }),
        })
    }

    /// Richardson-Nijenhuis bracket
    /// `[[A,B]] = A[B] - (-1)^{(k-1)(l-1)} B[A]`.
    pub fn rn_bracket(&self, other: &SkewOp) -> Result<SkewOp> {
        self.check_same_algebra(other)?;
        let k = self.arity;
        let l = other.arity;
        let name = format!("rn({},{})", self.name, other.name);
        let ab = self.action(other)?;
        let ba = other.action(self)?;
        let plus = ((k - 1) * (l - 1)) % 2 == 1; // minus (-1)^odd = plus
        let ab_eval = ab.eval.clone();
        let ba_eval = ba.eval.clone();
        let norm = ab.norm;
        Ok(SkewOp {
            name,
            arity: k + l - 1,
            vars: self.vars,
            slot_order_bound: ab.slot_order_bound,
            wronskian_spec: None,
            norm,
            eval: Arc::new(move |args: &[Polynomial]| {
                let first = (ab_eval)(args);
                let second = (ba_eval)(args);
                if plus {
                    first + second
                } else {
                    first - second
                }
            }),
        })
    }
}

/// Finite verification domain: an ordered list of spanning polynomials.
#[derive(Clone)]
pub struct TestSpace {
    vars: usize,
    degree: Option<u32>,
    basis: Vec<Polynomial>,
    label: String,
}

impl TestSpace {
    /// All monomials of total degree at most `degree` in `vars` variables.
    pub fn monomials(vars: usize, degree: u32) -> Self {
        TestSpace {
            vars,
            degree: Some(degree),
            basis: Polynomial::monomial_basis(vars, degree),
            label: format!("monomials(vars={vars}, deg<={degree})"),
        }
    }

    /// Custom spanning list.
    pub fn from_polys(vars: usize, basis: Vec<Polynomial>, label: impl Into<String>) -> Self {
        assert!(!basis.is_empty(), "test space must be nonempty");
        assert!(basis.iter().all(|p| p.vars() == vars));
        TestSpace {
            vars,
            degree: None,
            basis,
            label: label.into(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor {
            vars: self.vars,
            degree: self.degree,
            basis_size: self.basis.len(),
            label: self.label.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SpaceDescriptor {
    pub vars: usize,
    pub degree: Option<u32>,
    pub basis_size: usize,
    pub label: String,
}

/// First failing tuple of an equality sweep, in canonical printed form.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct EqualityWitness {
    pub indices: Vec<usize>,
    pub args: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct EqualityReport {
    pub equal: bool,
    /// True when the basis is too small to feed the arity, so the sweep is
    /// empty; never silently treated as a proof.
    pub vacuous: bool,
    pub tuples_checked: u64,
    pub witness: Option<EqualityWitness>,
}

/// Decide equality of two same-arity operators on every strictly increasing
/// tuple of test-space elements (sufficient by multilinearity and skewness).
/// Tuples are evaluated in parallel; the verdict and the lexicographically
/// first witness are deterministic regardless of schedule.
pub fn op_equal_on(a: &SkewOp, b: &SkewOp, space: &TestSpace) -> Result<EqualityReport> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            got: b.arity(),
        });
    }
    if a.vars() != space.vars() || b.vars() != space.vars() {
        return Err(Error::DimensionMismatch {
            expected: space.vars(),
            got: if a.vars() != space.vars() {
                a.vars()
            } else {
                b.vars()
            },
        });
    }
    let arity = a.arity();
    if space.len() < arity {
        return Ok(EqualityReport {
            equal: true,
            vacuous: true,
            tuples_checked: 0,
            witness: None,
        });
    }
    let combos = combinations(space.len(), arity);
    let tuples = combos.len() as u64;
    let witness = combos
        .par_iter()
        .filter_map(|combo| {
            let args: Vec<Polynomial> = combo.iter().map(|&i| space.basis()[i].clone()).collect();
            let lhs = a.evaluate(&args).expect("validated");
            let rhs = b.evaluate(&args).expect("validated");
            if lhs == rhs {
                None
            } else {
                Some((combo.clone(), args, lhs, rhs))
            }
        })
        .min_by(|x, y| x.0.cmp(&y.0));
    Ok(EqualityReport {
        equal: witness.is_none(),
        vacuous: false,
        tuples_checked: tuples,
        witness: witness.map(|(indices, args, lhs, rhs)| EqualityWitness {
            indices,
            args: args.iter().map(|p| p.to_string()).collect(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }),
    })
}

/// Equality against the zero operator.
pub fn op_is_zero_on(op: &SkewOp, space: &TestSpace) -> Result<EqualityReport> {
    op_equal_on(op, &SkewOp::zero(op.arity(), op.vars()), space)
}
