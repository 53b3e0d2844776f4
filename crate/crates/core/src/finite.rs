//! Finite-dimensional structure-constant N-brackets on k^r.
//!
//! A `StructureTensor` stores the bracket values on strictly increasing basis
//! tuples; evaluation on arbitrary tuples sign-normalizes, so the bracket is
//! skew by construction. A polynomial embedding (basis vector -> variable)
//! turns tensors into `SkewOp`s so the homotopy checkers apply uniformly.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{rat, Polynomial, Rat};
use crate::seeded::SplitMix64;
use crate::skewop::{SkewOp, TestSpace};
use crate::wronskian::wronskian;

/// Structure constants of an N-linear skew bracket on a dimension-`dim` space.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensor {
    dim: usize,
    arity: usize,
    components: BTreeMap<Vec<usize>, Vec<Rat>>,
}

impl StructureTensor {
    pub fn new(dim: usize, arity: usize) -> Self {
        StructureTensor {
            dim,
            arity,
            components: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Set the bracket value on a strictly increasing basis tuple.
    pub fn set(&mut self, indices: Vec<usize>, value: Vec<Rat>) -> Result<()> {
        if indices.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: indices.len(),
            });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasingMultiindex {
                context: format!("{indices:?}"),
            });
        }
        if indices.iter().any(|&i| i >= self.dim) || value.len() != self.dim {
            return Err(Error::InvalidParameter(
                "index or value outside the space".into(),
            ));
        }
        if value.iter().all(|v| v.is_zero()) {
            self.components.remove(&indices);
        } else {
            self.components.insert(indices, value);
        }
        Ok(())
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<Rat>)> {
        self.components.iter()
    }

    /// Evaluate on any index tuple: sorts with sign, repeated indices give 0.
    pub fn evaluate(&self, indices: &[usize]) -> Result<Vec<Rat>> {
        if indices.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: indices.len(),
            });
        }
        let mut idx = indices.to_vec();
        let mut swaps = 0usize;
        for i in 1..idx.len() {
            let mut j = i;
            while j > 0 && idx[j - 1] > idx[j] {
                idx.swap(j - 1, j);
                swaps += 1;
                j -= 1;
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Ok(vec![Rat::zero(); self.dim]);
        }
        let value = match self.components.get(&idx) {
            None => vec![Rat::zero(); self.dim],
            Some(v) => v.clone(),
        };
        Ok(if swaps.is_multiple_of(2) {
            value
        } else {
            value.into_iter().map(|c| -c).collect()
        })
    }

    /// The bracket as a skew operator on polynomials in `dim` variables:
    /// basis vector e_i embeds as the variable x_{i+1}; evaluation extracts
    /// the linear part of each argument, so the operator is total and
    /// multilinear.
    pub fn as_skew_op(&self, name: impl Into<String>) -> SkewOp {
        let dim = self.dim;
        let tensor = self.clone();
        SkewOp::from_fn(name, self.arity, dim, 0, move |args| {
            let mut out = Polynomial::zero(dim);
            // multilinear expansion over the linear parts of the arguments
            fn expand(
                tensor: &StructureTensor,
                args: &[Polynomial],
                slot: usize,
                indices: &mut Vec<usize>,
                coeff: Rat,
                out: &mut Polynomial,
            ) {
                let dim = tensor.dim;
                if coeff.is_zero() {
                    return;
                }
                if slot == args.len() {
                    let value = tensor
                        .evaluate(indices)
                        .expect("arity matches by construction");
                    for (i, c) in value.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut exps = vec![0i64; dim];
                        exps[i] = 1;
                        let term = Polynomial::monomial(dim, exps, c * &coeff);
                        *out = &*out + &term;
                    }
                    return;
                }
                for i in 0..dim {
                    let mut exps = vec![0i64; dim];
                    exps[i] = 1;
                    let c = args[slot].coeff(&exps);
                    if c.is_zero() {
                        continue;
                    }
                    indices.push(i);
                    expand(tensor, args, slot + 1, indices, &coeff * &c, out);
                    indices.pop();
                }
            }
            let mut indices = Vec::new();
            expand(&tensor, args, 0, &mut indices, rat(1), &mut out);
            out
        })
    }

    /// The embedded basis `x_1, ..., x_r` as a test space.
    pub fn basis_space(&self) -> TestSpace {
        let basis: Vec<Polynomial> = (0..self.dim)
            .map(|i| Polynomial::variable(self.dim, i).expect("in range"))
            .collect();
        TestSpace::from_polys(self.dim, basis, format!("basis(k^{})", self.dim))
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            schema: TENSOR_SCHEMA.into(),
            r: self.dim,
            n: self.arity,
            entries: self
                .components
                .iter()
                .map(|(k, v)| TensorEntry {
                    indices: k.clone(),
                    value: v.iter().map(rat_to_string).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &TensorJson) -> Result<Self> {
        let mut t = StructureTensor::new(json.r, json.n);
        for e in &json.entries {
            let value = e
                .value
                .iter()
                .map(|s| rat_from_string(s))
                .collect::<Result<Vec<Rat>>>()?;
            t.set(e.indices.clone(), value)?;
        }
        Ok(t)
    }
}

pub const TENSOR_SCHEMA: &str = "nlie.tensor.v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorJson {
    pub schema: String,
    pub r: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub entries: Vec<TensorEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorEntry {
    pub indices: Vec<usize>,
    pub value: Vec<String>,
}

pub fn rat_to_string(r: &Rat) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_string(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<num_bigint::BigInt> {
        t.trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((a, b)) => {
            let den = parse_int(b)?;
            if den.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "zero denominator in `{s}`"
                )));
            }
            Ok(Rat::new(parse_int(a)?, den))
        }
    }
}

/// The cross-product algebra on k^{N+1}:
/// `[e_0,...,^e_j,...,e_N] = (-1)^j e_j`.
pub fn cross_product_algebra(arity: usize) -> StructureTensor {
    let dim = arity + 1;
    let mut t = StructureTensor::new(dim, arity);
    for omit in 0..dim {
        let indices: Vec<usize> = (0..dim).filter(|&i| i != omit).collect();
        let mut value = vec![Rat::zero(); dim];
        value[omit] = if omit % 2 == 0 { rat(1) } else { rat(-1) };
        t.set(indices, value).expect("valid by construction");
    }
    t
}

/// The algebra `[a_0,...,^a_j,...,a_N] = a_{N-j}` on k^{N+1}, whose
/// polynomial representation is the Wronskian on the monomials x^j/j!.
pub fn a2_algebra(arity: usize) -> StructureTensor {
    let dim = arity + 1;
    let mut t = StructureTensor::new(dim, arity);
    for omit in 0..dim {
        let indices: Vec<usize> = (0..dim).filter(|&i| i != omit).collect();
        let mut value = vec![Rat::zero(); dim];
        value[arity - omit] = rat(1);
        t.set(indices, value).expect("valid by construction");
    }
    t
}

#[derive(Debug, Clone, Serialize)]
pub struct RepCheckReport {
    pub arity: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Verify the Wronskian representation of the `a2` algebra: with
/// `a_j = x^j/j!`, the bracket omitting slot j returns `a_{N-j}`, exactly.
pub fn a2_wronskian_rep_check(arity: usize) -> Result<RepCheckReport> {
    if arity < 2 {
        return Err(Error::InvalidParameter("need N >= 2".into()));
    }
    let n = arity;
    let mut fact = vec![rat(1)];
    for i in 1..=n as i64 {
        let next = fact.last().unwrap() * rat(i);
        fact.push(next);
    }
    let basis: Vec<Polynomial> = (0..=n as i64)
        .map(|j| Polynomial::monomial(1, vec![j], fact[j as usize].clone().recip()))
        .collect();
    let mut failures = Vec::new();
    for omit in 0..=n {
        let args: Vec<Polynomial> = (0..=n)
            .filter(|&j| j != omit)
            .map(|j| basis[j].clone())
            .collect();
        let w = wronskian(&args)?;
        let expected = &basis[n - omit];
        if &w != expected {
            failures.push(format!("omit {omit}: W = {w}, expected {expected}"));
        }
    }
    Ok(RepCheckReport {
        arity,
        pass: failures.is_empty(),
        failures,
    })
}

/// The sl2 representation rho(e) = 1, rho(h) = -2x, rho(f) = -x^2 with the
/// Wronskian bracket: checks the three displayed relations exactly.
pub fn sl2_wronskian_rep_check() -> Result<RepCheckReport> {
    let e = Polynomial::one(1);
    let h = Polynomial::monomial(1, vec![1], rat(-2));
    let f = Polynomial::monomial(1, vec![2], rat(-1));
    let mut failures = Vec::new();
    // [h, e] = 2e
    let he = wronskian(&[h.clone(), e.clone()])?;
    if he != e.scale(&rat(2)) {
        failures.push(format!("W(rho h, rho e) = {he}, expected 2"));
    }
    // [h, f] = -2f
    let hf = wronskian(&[h.clone(), f.clone()])?;
    if hf != f.scale(&rat(-2)) {
        failures.push(format!("W(rho h, rho f) = {hf}, expected 2x^2"));
    }
    // [e, f] = h
    let ef = wronskian(&[e, f])?;
    if ef != h {
        failures.push(format!("W(rho e, rho f) = {ef}, expected -2x"));
    }
    Ok(RepCheckReport {
        arity: 2,
        pass: failures.is_empty(),
        failures,
    })
}

/// Seeded random skew bracket: uniform small rationals on every increasing
/// basis tuple. Deterministic per seed.
pub fn random_skew_bracket(dim: usize, arity: usize, seed: u64) -> StructureTensor {
    let mut t = StructureTensor::new(dim, arity);
    let mut rng = SplitMix64::new(seed);
    for combo in crate::perm::combinations(dim, arity) {
        let value: Vec<Rat> = (0..dim).map(|_| rng.next_rat(9, 4)).collect();
        t.set(combo, value).expect("valid by construction");
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::check_homotopy_jacobi;

    #[test]
    fn cross_product_is_so3_for_n_2() {
        let t = cross_product_algebra(2);
        assert_eq!(t.dim(), 3);
        // e_x x e_y = e_z, e_y x e_z = e_x, e_z x e_x = e_y
        assert_eq!(t.evaluate(&[0, 1]).unwrap(), vec![rat(0), rat(0), rat(1)]);
        assert_eq!(t.evaluate(&[1, 2]).unwrap(), vec![rat(1), rat(0), rat(0)]);
        assert_eq!(t.evaluate(&[2, 0]).unwrap(), vec![rat(0), rat(1), rat(0)]);
        // repeated arguments vanish
        assert!(t.evaluate(&[1, 1]).unwrap().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn cross_product_jacobi_by_dimension() {
        // dim 4 < 2*3 - 1 = 5 forces the homotopy Jacobi identity
        let t = cross_product_algebra(3);
        let op = t.as_skew_op("cross(3)");
        let space = t.basis_space();
        let r = check_homotopy_jacobi(&op, &space).unwrap();
        assert!(r.pass);
        assert!(r.vacuous, "dimension-forced pass is flagged vacuous");
    }

    #[test]
    fn a2_table_for_n_2() {
        let t = a2_algebra(2);
        // omit j=2: [a0,a1] = a_0; omit j=1: [a0,a2] = a_1; omit j=0: [a1,a2] = a_2
        assert_eq!(t.evaluate(&[0, 1]).unwrap(), vec![rat(1), rat(0), rat(0)]);
        assert_eq!(t.evaluate(&[0, 2]).unwrap(), vec![rat(0), rat(1), rat(0)]);
        assert_eq!(t.evaluate(&[1, 2]).unwrap(), vec![rat(0), rat(0), rat(1)]);
        // sign normalization on permuted input
        assert_eq!(t.evaluate(&[2, 1]).unwrap(), vec![rat(0), rat(0), rat(-1)]);
    }

    #[test]
    fn a2_jacobi_dimension_forced_for_n_4() {
        // dim 5 < 2*4 - 1 = 7: the pass is vacuous and flagged as such
        let t = a2_algebra(4);
        let op = t.as_skew_op("a2(4)");
        let r = check_homotopy_jacobi(&op, &t.basis_space()).unwrap();
        assert!(r.pass && r.vacuous);
    }

    #[test]
    fn a2_jacobi_direct_for_n_2() {
        // dim 3 = 2N-1: not dimension-forced, checked directly -- it holds
        let t = a2_algebra(2);
        let op = t.as_skew_op("a2(2)");
        let space = t.basis_space();
        let r = check_homotopy_jacobi(&op, &space).unwrap();
        assert!(!r.vacuous);
        assert!(r.pass, "witness: {:?}", r.witness);
    }

    #[test]
    fn a2_wronskian_representation() {
        for n in 2..=8 {
            let r = a2_wronskian_rep_check(n).unwrap();
            assert!(r.pass, "N = {n}: {:?}", r.failures);
        }
    }

    #[test]
    fn sl2_representation() {
        let r = sl2_wronskian_rep_check().unwrap();
        assert!(r.pass, "{:?}", r.failures);
    }

    #[test]
    fn random_bracket_deterministic_and_skew() {
        let a = random_skew_bracket(4, 3, 99);
        let b = random_skew_bracket(4, 3, 99);
        assert_eq!(a, b);
        let c = random_skew_bracket(4, 3, 100);
        assert_ne!(a, c);
        // sign under transposition
        let v = a.evaluate(&[0, 1, 2]).unwrap();
        let w = a.evaluate(&[1, 0, 2]).unwrap();
        assert_eq!(v, w.into_iter().map(|x| -x).collect::<Vec<_>>());
    }

    #[test]
    fn dimension_below_threshold_forces_jacobi() {
        // r = 4 < 2N-1 = 5 for N = 3: every bracket passes (vacuously)
        for seed in 0..5 {
            let t = random_skew_bracket(4, 3, seed);
            let op = t.as_skew_op(format!("random(4,3,{seed})"));
            let r = check_homotopy_jacobi(&op, &t.basis_space()).unwrap();
            assert!(r.pass);
        }
        // dim 1, arity > 1: no increasing tuple exists, bracket is zero
        let t = random_skew_bracket(1, 2, 0);
        assert_eq!(t.components().count(), 0);
    }

    #[test]
    fn threshold_dimension_admits_counterexamples() {
        // at r = 2N-1 the dimension argument no longer applies; search seeds
        let mut found = None;
        for seed in 0..50 {
            let t = random_skew_bracket(3, 2, seed);
            let op = t.as_skew_op(format!("random(3,2,{seed})"));
            let r = check_homotopy_jacobi(&op, &t.basis_space()).unwrap();
            if !r.pass {
                found = Some((seed, r));
                break;
            }
        }
        let (seed, report) = found.expect("a failing bracket exists at the threshold");
        assert!(!report.vacuous);
        assert_eq!(report.tuples_checked, 1);
        // keep the first found seed stable as a regression anchor
        assert_eq!(seed, 0, "seed 0 is the committed counterexample fixture");
    }

    #[test]
    fn tensor_json_roundtrip() {
        let t = random_skew_bracket(3, 2, 0);
        let json = t.to_json();
        let back = StructureTensor::from_json(&json).unwrap();
        assert_eq!(t, back);
        assert_eq!(json.schema, TENSOR_SCHEMA);
    }

    #[test]
    fn rational_string_forms() {
        assert_eq!(rat_to_string(&crate::poly::ratio(-3, 6)), "-1/2");
        assert_eq!(rat_from_string("-1/2").unwrap(), crate::poly::ratio(-1, 2));
        assert_eq!(rat_from_string("7").unwrap(), rat(7));
        assert!(rat_from_string("1/0").is_err());
        assert!(rat_from_string("x").is_err());
    }

    #[test]
    fn set_validation() {
        let mut t = StructureTensor::new(3, 2);
        assert!(t.set(vec![1, 0], vec![rat(1), rat(0), rat(0)]).is_err());
        assert!(t.set(vec![0, 1, 2], vec![rat(1); 3]).is_err());
        assert!(t.set(vec![0, 5], vec![rat(1); 3]).is_err());
        assert!(t.set(vec![0, 1], vec![rat(1); 3]).is_ok());
    }
}
