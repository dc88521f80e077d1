use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::ExprError;
use crate::rational::RationalExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    NonZero,
}

/// A condition cutting out the domain of a chart, e.g. `z != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DomainConstraint {
    pub expression: RationalExpr,
    pub relation: Relation,
}

impl DomainConstraint {
    pub fn nonzero(expression: RationalExpr) -> Self {
        DomainConstraint {
            expression,
            relation: Relation::NonZero,
        }
    }

    pub fn holds_at(&self, point: &HashMap<String, BigRational>) -> Result<bool, ExprError> {
        let v = self.expression.eval(point)?;
        Ok(match self.relation {
            Relation::NonZero => !v.is_zero(),
        })
    }
}

impl fmt::Display for DomainConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relation {
            Relation::NonZero => write!(f, "{} != 0", self.expression),
        }
    }
}

/// Evaluates `e` at `point`, rejecting points outside the constrained domain.
pub fn evaluate(
    e: &RationalExpr,
    point: &HashMap<String, BigRational>,
    constraints: &[DomainConstraint],
) -> Result<BigRational, ExprError> {
    for c in constraints {
        if !c.holds_at(point)? {
            return Err(ExprError::ConstraintViolated(c.expression.to_string()));
        }
    }
    e.eval(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_expr;

    fn point(x: i64, y: i64, z: i64) -> HashMap<String, BigRational> {
        [("x", x), ("y", y), ("z", z)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), BigRational::from_integer(v.into())))
            .collect()
    }

    #[test]
    fn evaluates_inside_domain() {
        let vars = ["x", "y", "z"];
        let z_nonzero = [DomainConstraint::nonzero(RationalExpr::var("z"))];
        let e = parse_expr("4*y/z", &vars).unwrap();
        assert_eq!(
            evaluate(&e, &point(0, 1, 2), &z_nonzero).unwrap(),
            BigRational::from_integer(2.into())
        );
        let g = parse_expr("(1+16*y^2)/z^2", &vars).unwrap();
        assert_eq!(
            evaluate(&g, &point(0, 1, 2), &z_nonzero).unwrap(),
            BigRational::new(17.into(), 4.into())
        );
    }

    #[test]
    fn rejects_constraint_violation() {
        let z_nonzero = [DomainConstraint::nonzero(RationalExpr::var("z"))];
        let e = parse_expr("1/z", &["z"]).unwrap();
        let mut pt = HashMap::new();
        pt.insert("z".to_string(), BigRational::zero());
        assert_eq!(
            evaluate(&e, &pt, &z_nonzero),
            Err(ExprError::ConstraintViolated("z".into()))
        );
        assert!(matches!(evaluate(&e, &pt, &[]), Err(ExprError::PoleAtPoint(_))));
    }
}
