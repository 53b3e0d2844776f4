//! Jacobi-identity verifiers and the two cohomology differentials.
//!
//! Checks here are exact sweeps over finite test spaces. A pass is a proof
//! for the operator class recorded in the report (slot differential order up
//! to the soundness bound); the report always carries the space parameters so
//! the claim can be audited. Differentials demand a certificate: a prior
//! bracket-vanishing sweep whose scope travels with the certified operator.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{is_zero_matrix, mat_mul, rank_fraction_free, rat_rank, solve};
use crate::perm::{binomial, combinations, permutations_with_signs};
use crate::poly::{Monomial, Polynomial, Rat};
use crate::skewop::{op_is_zero_on, SkewOp, SpaceDescriptor, TestSpace};

/// How a pass verdict is sound: either the degree-bound contract for
/// differential operators, or exhaustion of a finite basis.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub enum Soundness {
    DegreeBound {
        slot_order_bound: u32,
        test_degree: u32,
        /// True when the test degree reaches the slot order bound, making
        /// agreement a proof for this operator class.
        certifying: bool,
    },
    FiniteBasis,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct JacobiWitness {
    pub indices: Vec<usize>,
    pub args: Vec<String>,
    pub value: String,
}

/// Outcome of one identity sweep.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct JacobiReport {
    pub identity: String,
    pub operator: String,
    pub space: SpaceDescriptor,
    pub soundness: Soundness,
    pub arity: usize,
    pub tuples_checked: u64,
    pub unshuffles_per_tuple: u64,
    /// Basis too small to feed the arity; flagged, never silent.
    pub vacuous: bool,
    pub pass: bool,
    pub witness: Option<JacobiWitness>,
}

impl JacobiReport {
    fn invariant_ok(&self) -> bool {
        self.pass == self.witness.is_none()
    }
}

fn soundness_for(op: &SkewOp, space: &TestSpace) -> Soundness {
    match space.degree() {
        Some(d) => Soundness::DegreeBound {
            slot_order_bound: op.slot_order_bound(),
            test_degree: d,
            certifying: d >= op.slot_order_bound(),
        },
        None => Soundness::FiniteBasis,
    }
}

fn sweep_zero(
    identity: &str,
    source_op_name: &str,
    op: &SkewOp,
    space: &TestSpace,
) -> Result<JacobiReport> {
    let arity = op.arity();
    let soundness = soundness_for(op, space);
    if space.len() < arity {
        return Ok(JacobiReport {
            identity: identity.into(),
            operator: source_op_name.into(),
            space: space.descriptor(),
            soundness,
            arity,
            tuples_checked: 0,
            unshuffles_per_tuple: 0,
            vacuous: true,
            pass: true,
            witness: None,
        });
    }
    let combos = combinations(space.len(), arity);
    let tuples = combos.len() as u64;
    let witness = combos
        .par_iter()
        .filter_map(|combo| {
            let args: Vec<Polynomial> = combo.iter().map(|&i| space.basis()[i].clone()).collect();
            let v = op.evaluate(&args).expect("validated");
            if v.is_zero() {
                None
            } else {
                Some((combo.clone(), args, v))
            }
        })
        .min_by(|a, b| a.0.cmp(&b.0));
    let report = JacobiReport {
        identity: identity.into(),
        operator: source_op_name.into(),
        space: space.descriptor(),
        soundness,
        arity,
        tuples_checked: tuples,
        unshuffles_per_tuple: 0,
        vacuous: false,
        pass: witness.is_none(),
        witness: witness.map(|(indices, args, v)| JacobiWitness {
            indices,
            args: args.iter().map(|p| p.to_string()).collect(),
            value: v.to_string(),
        }),
    };
    debug_assert!(report.invariant_ok());
    Ok(report)
}

/// Homotopy N-Jacobi identity: `Delta[Delta] = 0` on all strictly increasing
/// (2N-1)-tuples from the test space.
pub fn check_homotopy_jacobi(op: &SkewOp, space: &TestSpace) -> Result<JacobiReport> {
    let n = op.arity();
    let action = op.action(op)?;
    let mut report = sweep_zero("homotopy-jacobi", op.name(), &action, space)?;
    report.unshuffles_per_tuple = binomial((2 * n - 1) as u64, n as u64);
    Ok(report)
}

/// The (N, k, r)-Jacobi identity: `[[Delta_{a_1..a_r}, Delta_{b_1..b_k}]] = 0`
/// for all increasing a- and b-tuples from the test space, evaluated on all
/// increasing argument tuples.
pub fn check_nkr_jacobi(
    op: &SkewOp,
    k: usize,
    r: usize,
    space: &TestSpace,
) -> Result<JacobiReport> {
    let n = op.arity();
    if !(r <= k && k < n) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= r <= k < N, got (N,k,r) = ({n},{k},{r})"
        )));
    }
    let identity = format!("({n},{k},{r})-jacobi");
    let arity = (n - r) + (n - k) - 1;
    let soundness = {
        // the RN bracket of the two inner products has this slot bound
        let b = 2 * op.slot_order_bound();
        match space.degree() {
            Some(d) => Soundness::DegreeBound {
                slot_order_bound: b,
                test_degree: d,
                certifying: d >= b,
            },
            None => Soundness::FiniteBasis,
        }
    };
    if space.len() < arity {
        return Ok(JacobiReport {
            identity,
            operator: op.name().into(),
            space: space.descriptor(),
            soundness,
            arity,
            tuples_checked: 0,
            unshuffles_per_tuple: 0,
            vacuous: true,
            pass: true,
            witness: None,
        });
    }

    let a_tuples = combinations(space.len(), r);
    let b_tuples = combinations(space.len(), k);
    let arg_tuples = combinations(space.len(), arity);
    let mut tuples_checked = 0u64;
    let mut witness: Option<JacobiWitness> = None;

    'outer: for a_combo in &a_tuples {
        let a_args: Vec<Polynomial> = a_combo.iter().map(|&i| space.basis()[i].clone()).collect();
        let inner_a = op.inner_product(&a_args)?;
        for b_combo in &b_tuples {
            let b_args: Vec<Polynomial> =
                b_combo.iter().map(|&i| space.basis()[i].clone()).collect();
            let inner_b = op.inner_product(&b_args)?;
            let bracket = inner_a.rn_bracket(&inner_b)?;
            tuples_checked += arg_tuples.len() as u64;
            let found = arg_tuples
                .par_iter()
                .filter_map(|combo| {
                    let args: Vec<Polynomial> =
                        combo.iter().map(|&i| space.basis()[i].clone()).collect();
                    let v = bracket.evaluate(&args).expect("validated");
                    if v.is_zero() {
                        None
                    } else {
                        Some((combo.clone(), args, v))
                    }
                })
                .min_by(|x, y| x.0.cmp(&y.0));
            if let Some((indices, args, v)) = found {
                let mut all_args: Vec<String> = Vec::new();
                all_args.extend(a_args.iter().map(|p| format!("a={p}")));
                all_args.extend(b_args.iter().map(|p| format!("b={p}")));
                all_args.extend(args.iter().map(|p| p.to_string()));
                witness = Some(JacobiWitness {
                    indices,
                    args: all_args,
                    value: v.to_string(),
                });
                break 'outer;
            }
        }
    }
    Ok(JacobiReport {
        identity,
        operator: op.name().into(),
        space: space.descriptor(),
        soundness,
        arity,
        tuples_checked,
        unshuffles_per_tuple: 0,
        // the basis may also be too small for the a- or b-tuples
        vacuous: tuples_checked == 0,
        pass: witness.is_none(),
        witness,
    })
}

/// The full-permutation normalization of the Jacobi expression:
/// `1/(N!(N-1)!) sum_{sigma in S_{2N-1}} (-1)^sigma
///  Delta(Delta(a_sigma(1..N)), a_sigma(N+1..2N-1))`,
/// equal to `Delta[Delta]` on the same arguments.
pub fn full_permutation_value(op: &SkewOp, args: &[Polynomial]) -> Result<Polynomial> {
    let n = op.arity();
    let m = 2 * n - 1;
    if args.len() != m {
        return Err(Error::ArityMismatch {
            expected: m,
            got: args.len(),
        });
    }
    let vars = op.vars();
    let mut acc = Polynomial::zero(vars);
    for (perm, sign) in permutations_with_signs(m) {
        let head: Vec<Polynomial> = perm[..n].iter().map(|&i| args[i].clone()).collect();
        let inner = op.evaluate(&head)?;
        let mut outer_args = Vec::with_capacity(n);
        outer_args.push(inner);
        for &i in &perm[n..] {
            outer_args.push(args[i].clone());
        }
        let term = op.evaluate(&outer_args)?;
        acc = if sign == 1 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    let mut norm = Rat::one();
    for i in 1..=n as i64 {
        norm *= crate::poly::rat(i);
    }
    for i in 1..=(n as i64 - 1) {
        norm *= crate::poly::rat(i);
    }
    Ok(acc.scale(&norm.recip()))
}

/// Certificate that `[[Delta, Delta]] = 0` held on a recorded test space.
/// Required by the Hochschild differential; the scope travels with it.
#[derive(Clone)]
pub struct CertifiedRnSquareZero {
    op: SkewOp,
    space: SpaceDescriptor,
}

impl CertifiedRnSquareZero {
    pub fn certify(op: &SkewOp, space: &TestSpace) -> Result<Self> {
        if !op.arity().is_multiple_of(2) {
            return Err(Error::OddArity { arity: op.arity() });
        }
        let sq = op.rn_bracket(op)?;
        let r = op_is_zero_on(&sq, space)?;
        if !r.equal {
            return Err(Error::CertificationFailed {
                context: format!(
                    "[[{0},{0}]] != 0 on {1}: witness {2:?}",
                    op.name(),
                    space.descriptor().label,
                    r.witness
                ),
            });
        }
        Ok(CertifiedRnSquareZero {
            op: op.clone(),
            space: space.descriptor(),
        })
    }

    pub fn op(&self) -> &SkewOp {
        &self.op
    }

    pub fn scope(&self) -> &SpaceDescriptor {
        &self.space
    }
}

/// Hochschild differential `d_Delta = [[Delta, .]]` for a certified
/// even-arity Delta. Squares to zero by the graded Jacobi identity.
pub fn hochschild_differential(cert: &CertifiedRnSquareZero, target: &SkewOp) -> Result<SkewOp> {
    cert.op.rn_bracket(target)
}

/// Certificate that `Delta[Delta] = 0` held on a recorded test space.
/// Required by the Koszul differential.
#[derive(Clone)]
pub struct CertifiedActionSquareZero {
    op: SkewOp,
    space: SpaceDescriptor,
}

impl CertifiedActionSquareZero {
    pub fn certify(op: &SkewOp, space: &TestSpace) -> Result<Self> {
        let action = op.action(op)?;
        let r = op_is_zero_on(&action, space)?;
        if !r.equal {
            return Err(Error::CertificationFailed {
                context: format!(
                    "{0}[{0}] != 0 on {1}: witness {2:?}",
                    op.name(),
                    space.descriptor().label,
                    r.witness
                ),
            });
        }
        Ok(CertifiedActionSquareZero {
            op: op.clone(),
            space: space.descriptor(),
        })
    }

    pub fn op(&self) -> &SkewOp {
        &self.op
    }

    pub fn scope(&self) -> &SpaceDescriptor {
        &self.space
    }
}

/// Element of the exterior power of a finite span: a sparse map from strictly
/// increasing basis-index tuples to rational coefficients, over an explicit
/// ordered base of polynomials. Degrees 0 and 1 are allowed so differentials
/// stay inside the type.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorTensor {
    base: Vec<Polynomial>,
    degree: usize,
    components: BTreeMap<Vec<usize>, Rat>,
}

impl ExteriorTensor {
    pub fn zero(base: Vec<Polynomial>, degree: usize) -> Self {
        ExteriorTensor {
            base,
            degree,
            components: BTreeMap::new(),
        }
    }

    /// The basis tensor `b_{i_1} ^ ... ^ b_{i_r}` (indices strictly increasing).
    pub fn basis_tensor(base: Vec<Polynomial>, indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasingMultiindex {
                context: format!("{indices:?}"),
            });
        }
        if indices.iter().any(|&i| i >= base.len()) {
            return Err(Error::InvalidParameter(
                "tensor index beyond the base".into(),
            ));
        }
        let degree = indices.len();
        let mut t = Self::zero(base, degree);
        t.components.insert(indices, Rat::one());
        Ok(t)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &[Polynomial] {
        &self.base
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Rat)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Insert a (possibly unsorted) wedge term; sorts indices, absorbs the
    /// sign, annihilates duplicates.
    pub fn insert_term(&mut self, mut indices: Vec<usize>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        // insertion sort, counting swaps for the sign
        let mut swaps = 0usize;
        for i in 1..indices.len() {
            let mut j = i;
            while j > 0 && indices[j - 1] > indices[j] {
                indices.swap(j - 1, j);
                swaps += 1;
                j -= 1;
            }
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let signed = if swaps.is_multiple_of(2) {
            coeff
        } else {
            -coeff
        };
        match self.components.entry(indices) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(signed);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &signed;
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
            return Self::zero(self.base.clone(), self.degree);
        }
        ExteriorTensor {
            base: self.base.clone(),
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, v) in &other.components {
            out.insert_term(k.clone(), v.clone());
        }
        out
    }
}

impl std::fmt::Display for ExteriorTensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.components {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let wedge = idx
                .iter()
                .map(|i| format!("b{i}"))
                .collect::<Vec<_>>()
                .join("^");
            if idx.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{wedge}")?;
            }
        }
        Ok(())
    }
}

/// Coordinates of `target` in the span of `base`, or None when outside.
fn coordinates_in_span(base: &[Polynomial], target: &Polynomial) -> Option<Vec<Rat>> {
    // rows: union of monomials; columns: base elements
    let mut monomials: Vec<Monomial> = Vec::new();
    for p in base.iter().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            if !monomials.contains(m) {
                monomials.push(m.clone());
            }
        }
    }
    monomials.sort();
    let mat: Vec<Vec<Rat>> = monomials
        .iter()
        .map(|m| {
            base.iter()
                .map(|p| p.coeff(m.exponents()))
                .collect::<Vec<Rat>>()
        })
        .collect();
    let rhs: Vec<Rat> = monomials
        .iter()
        .map(|m| target.coeff(m.exponents()))
        .collect();
    solve(&mat, &rhs)
}

/// Koszul machinery over a fixed finite span. Holds the bracket values of all
/// increasing k-tuples of base elements, expressed in base coordinates; the
/// base is auto-extended (one step, reported) when the span is not closed.
pub struct KoszulContext {
    op: SkewOp,
    base: Vec<Polynomial>,
    /// coordinates (in `base`) of Delta on each increasing k-tuple
    images: BTreeMap<Vec<usize>, Vec<Rat>>,
    /// number of elements appended to close the images
    extension: usize,
    scope: SpaceDescriptor,
}

impl KoszulContext {
    /// Build the context. `auto_extend` appends bracket values that fall
    /// outside the span (the codomain is then the extended base); with it
    /// disabled a non-closed span is an error.
    pub fn new(
        cert: &CertifiedActionSquareZero,
        base: Vec<Polynomial>,
        auto_extend: bool,
    ) -> Result<Self> {
        let op = cert.op().clone();
        if base.is_empty() {
            return Err(Error::InvalidParameter("base must be nonempty".into()));
        }
        for b in &base {
            if b.vars() != op.vars() {
                return Err(Error::DimensionMismatch {
                    expected: op.vars(),
                    got: b.vars(),
                });
            }
        }
        // base must be linearly independent for coordinates to be canonical
        {
            let mut monos: Vec<Monomial> = Vec::new();
            for p in &base {
                for (m, _) in p.terms() {
                    if !monos.contains(m) {
                        monos.push(m.clone());
                    }
                }
            }
            monos.sort();
            let mat: Vec<Vec<Rat>> = monos
                .iter()
                .map(|m| base.iter().map(|p| p.coeff(m.exponents())).collect())
                .collect();
            if rat_rank(&mat) != base.len() {
                return Err(Error::InvalidParameter(
                    "base polynomials are linearly dependent".into(),
                ));
            }
        }
        let k = op.arity();
        let mut extended = base.clone();
        let mut images: BTreeMap<Vec<usize>, Vec<Rat>> = BTreeMap::new();
        for combo in combinations(base.len(), k) {
            let args: Vec<Polynomial> = combo.iter().map(|&i| base[i].clone()).collect();
            let value = op.evaluate(&args)?;
            let coords = match coordinates_in_span(&extended, &value) {
                Some(c) => c,
                None => {
                    if !auto_extend {
                        return Err(Error::NotClosed {
                            context: format!(
                                "{}({:?}) = {} is outside the span",
                                op.name(),
                                combo,
                                value
                            ),
                        });
                    }
                    extended.push(value.clone());
                    coordinates_in_span(&extended, &value).expect("value is in the extended span")
                }
            };
            images.insert(combo, coords);
        }
        // pad earlier coordinate vectors to the final extended length
        let len = extended.len();
        for coords in images.values_mut() {
            coords.resize(len, Rat::zero());
        }
        let extension = extended.len() - base.len();
        Ok(KoszulContext {
            op,
            base: extended,
            images,
            extension,
            scope: cert.scope().clone(),
        })
    }

    pub fn base(&self) -> &[Polynomial] {
        &self.base
    }

    /// Elements appended beyond the original base (0 when the span is closed).
    pub fn extension(&self) -> usize {
        self.extension
    }

    pub fn original_len(&self) -> usize {
        self.base.len() - self.extension
    }

    pub fn scope(&self) -> &SpaceDescriptor {
        &self.scope
    }

    pub fn op(&self) -> &SkewOp {
        &self.op
    }

    /// The Koszul differential on a tensor over the original base:
    /// zero for r < k, otherwise the signed unshuffle sum
    /// `sum (-1)^sigma Delta(a_sigma(1..k)) ^ a_sigma(k+1..r)`.
    pub fn differential(&self, tensor: &ExteriorTensor) -> Result<ExteriorTensor> {
        let k = self.op.arity();
        let r = tensor.degree();
        if r < k {
            return Ok(ExteriorTensor::zero(self.base.clone(), 0));
        }
        let out_degree = r - k + 1;
        let mut out = ExteriorTensor::zero(self.base.clone(), out_degree);
        for (indices, coeff) in tensor.components() {
            for u in crate::perm::unshuffles(r, k) {
                let head: Vec<usize> = u.head.iter().map(|&i| indices[i]).collect();
                let coords = self.images.get(&head).ok_or_else(|| Error::NotClosed {
                    context: format!("tuple {head:?} not tabulated (index beyond base?)"),
                })?;
                let tail: Vec<usize> = u.tail.iter().map(|&i| indices[i]).collect();
                for (bi, c) in coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(out_degree);
                    idx.push(bi);
                    idx.extend_from_slice(&tail);
                    let sign = if u.sign == 1 {
                        coeff.clone()
                    } else {
                        -coeff.clone()
                    };
                    out.insert_term(idx, sign * c);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of the differential from degree `r` (columns: increasing
    /// r-tuples of the ORIGINAL base) to degree `r-k+1` (rows: increasing
    /// tuples of the full base).
    pub fn matrix(&self, r: usize) -> Result<(Vec<Vec<Rat>>, usize, usize)> {
        let k = self.op.arity();
        let cols = combinations(self.original_len(), r);
        let out_degree = if r >= k { r - k + 1 } else { 0 };
        let rows = combinations(self.base.len(), out_degree);
        let row_index: BTreeMap<Vec<usize>, usize> = rows
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let mut mat = vec![vec![Rat::zero(); cols.len()]; rows.len()];
        for (ci, combo) in cols.iter().enumerate() {
            let tensor = ExteriorTensor::basis_tensor(self.base.clone(), combo.clone())?;
            let image = if r < k {
                ExteriorTensor::zero(self.base.clone(), 0)
            } else {
                self.differential(&tensor)?
            };
            for (idx, c) in image.components() {
                let ri = row_index[idx];
                mat[ri][ci] = c.clone();
            }
        }
        Ok((mat, rows.len(), cols.len()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyReport {
    pub degree: usize,
    pub dim_chains: usize,
    pub rank_out: usize,
    pub dim_kernel: usize,
    pub rank_in: usize,
    pub homology_dim: usize,
    /// Both elimination routes agreed on every rank.
    pub rank_cross_checked: bool,
    /// d o d on the assembled matrices is the zero matrix.
    pub complex_property_ok: bool,
    /// Degrees below 2 extend the classical exterior-algebra range.
    pub below_classical_range: bool,
    pub base_extended: usize,
}

/// Kernel/rank data of the Koszul differential at degree `r`:
/// incoming from degree `r+k-1`, outgoing into degree `r-k+1`.
pub fn koszul_homology_rank(ctx: &KoszulContext, r: usize) -> Result<HomologyReport> {
    let k = ctx.op().arity();
    let n0 = ctx.original_len();
    let dim_chains = binomial(n0 as u64, r as u64) as usize;
    let (out_mat, _, out_cols) = ctx.matrix(r)?;
    debug_assert_eq!(out_cols, dim_chains);
    let rank_out_ff = rank_fraction_free(&out_mat);
    let rank_out_plain = rat_rank(&out_mat);
    let (in_mat, _, _) = ctx.matrix(r + k - 1)?;
    let rank_in_ff = rank_fraction_free(&in_mat);
    let rank_in_plain = rat_rank(&in_mat);
    let rank_cross_checked = rank_out_ff == rank_out_plain && rank_in_ff == rank_in_plain;

    // the incoming image must lie inside chains over the original base for
    // the quotient to make sense; rows touching extension elements must be 0
    let rows_full = combinations(ctx.base().len(), r);
    if ctx.extension() > 0 {
        for (ri, row) in in_mat.iter().enumerate() {
            let touches_extension = rows_full[ri].iter().any(|&i| i >= n0);
            if touches_extension && row.iter().any(|v| !v.is_zero()) {
                return Err(Error::NotClosed {
                    context: "incoming image leaves the original span".into(),
                });
            }
        }
    }

    // d o d = 0: restrict the incoming matrix to original-base rows (the
    // lexicographic order is preserved under the restriction) and compose
    let restricted: Vec<Vec<Rat>> = in_mat
        .iter()
        .zip(rows_full.iter())
        .filter(|(_, tuple)| tuple.iter().all(|&i| i < n0))
        .map(|(row, _)| row.clone())
        .collect();
    let complex_property_ok = if out_mat.is_empty()
        || restricted.is_empty()
        || restricted[0].is_empty()
        || restricted.len() != out_cols
    {
        true
    } else {
        is_zero_matrix(&mat_mul(&out_mat, &restricted))
    };

    let dim_kernel = dim_chains - rank_out_ff;
    let homology_dim = dim_kernel.saturating_sub(rank_in_ff);
    Ok(HomologyReport {
        degree: r,
        dim_chains,
        rank_out: rank_out_ff,
        dim_kernel,
        rank_in: rank_in_ff,
        homology_dim,
        rank_cross_checked,
        complex_property_ok,
        below_classical_range: r < 2 || (r >= k && r - k + 1 < 2),
        base_extended: ctx.extension(),
    })
}
