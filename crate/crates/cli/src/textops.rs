//! Text forms for differential operators: parse `w(z)*d^j` sums (operators
//! separated by `;`) and serialize coefficient polynomials by order.

use nlie_core::diffop::DiffOp;
use nlie_core::error::{Error, Result};
use nlie_core::poly::{parse_poly_with_names_laurent, MultiIndex, Polynomial};
use serde::Serialize;

/// Parse one operator expression such as `z^2*d^2 - d^1 + 3`.
///
/// The expression is read as a polynomial in the commuting symbols `z` and
/// `d` (negative powers of `z` allowed), then split by `d`-degree, which
/// matches the `coefficient * d^j` notation.
pub fn parse_diffop(text: &str) -> Result<DiffOp> {
    let two_var = parse_poly_with_names_laurent(text, &["z", "d"])?;
    let mut out = DiffOp::zero(1);
    for (mono, coeff) in two_var.terms() {
        let ez = mono.exponents()[0];
        let ed = mono.exponents()[1];
        if ed < 0 {
            return Err(Error::InvalidParameter(
                "negative powers of d are not operators".into(),
            ));
        }
        let c = Polynomial::monomial(1, vec![ez], coeff.clone());
        out = &out + &DiffOp::from_term(MultiIndex::new(vec![ed as u32]), c);
    }
    Ok(out)
}

/// Parse a `;`-separated list of operators.
pub fn parse_diffop_list(text: &str) -> Result<Vec<DiffOp>> {
    text.split(';').map(|s| parse_diffop(s.trim())).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffOpTerm {
    pub order: u32,
    pub coeff: String,
}

/// Coefficient polynomials listed by derivative order, highest first.
pub fn diffop_terms(op: &DiffOp) -> Vec<DiffOpTerm> {
    let mut terms: Vec<DiffOpTerm> = op
        .terms()
        .map(|(sigma, w)| DiffOpTerm {
            order: sigma.order(),
            coeff: w.to_string(),
        })
        .collect();
    terms.sort_by_key(|t| std::cmp::Reverse(t.order));
    terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlie_core::poly::parse_poly;

    #[test]
    fn parses_operator_sums() {
        let op = parse_diffop("z*d^1 + z^2").unwrap();
        assert_eq!(op.order(), Some(1));
        assert_eq!(
            op.coeff(&MultiIndex::new(vec![1])),
            parse_poly("x", 1).unwrap()
        );
        assert_eq!(
            op.coeff(&MultiIndex::new(vec![0])),
            parse_poly("x^2", 1).unwrap()
        );
        let list = parse_diffop_list("z*d^1; d^1; z^2*d^1").unwrap();
        assert_eq!(list.len(), 3);
    }

    #[test]
    fn laurent_coefficients_allowed() {
        let op = parse_diffop("z^-2*d^1").unwrap();
        assert_eq!(op.order(), Some(1));
        assert!(parse_diffop("d^-1").is_err());
    }
}
