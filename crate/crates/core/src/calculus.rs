//! Brackets, exterior derivatives and Lie derivatives in a model basis.

use ppst_expr::RationalExpr;

use crate::error::GeometryError;
use crate::model::ManifoldModel;
use crate::tensor::vec::{self, Vector};
use crate::tensor::Tensor;

/// `X(f)` for a vector field `X` with components in the model basis.
pub fn directional(model: &ManifoldModel, x: &[RationalExpr], f: &RationalExpr) -> RationalExpr {
    if f.is_constant() {
        return RationalExpr::zero();
    }
    x.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| c * model.derive(a, f))
        .sum()
}

fn check_dim(model: &ManifoldModel, len: usize) -> Result<(), GeometryError> {
    if len == model.dim() {
        Ok(())
    } else {
        Err(GeometryError::MixedModels(format!(
            "field with {len} components on a {}-dimensional model",
            model.dim()
        )))
    }
}

/// `[X, Y]` with `[E_a, E_b]` taken from the model's bracket table.
pub fn lie_bracket(
    model: &ManifoldModel,
    x: &[RationalExpr],
    y: &[RationalExpr],
) -> Result<Vector, GeometryError> {
    check_dim(model, x.len())?;
    check_dim(model, y.len())?;
    let n = model.dim();
    let mut out: Vector = (0..n)
        .map(|c| directional(model, x, &y[c]) - directional(model, y, &x[c]))
        .collect();
    if !model.is_holonomic() {
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() || a == b {
                    continue;
                }
                let coeff = &x[a] * &y[b];
                let br = model.bracket(a, b);
                out = vec::add(&out, &vec::scale(&coeff, &br));
            }
        }
    }
    Ok(out)
}

fn require_antisymmetric(t: &Tensor) -> Result<(), GeometryError> {
    let n = t.dim();
    for i in 0..n {
        for j in 0..n {
            if !(t.get(&[i, j]) + t.get(&[j, i])).is_zero() {
                return Err(GeometryError::Shape(format!(
                    "2-form is not antisymmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Exterior derivative of a 1-form or 2-form.
///
/// For a 1-form: `2 d w(X,Y) = X w(Y) - Y w(X) - w([X,Y])`.
/// For a 2-form: `3 d w(X,Y,Z)` is the cyclic sum of `X w(Y,Z) - w([X,Y],Z)`.
pub fn exterior_derivative(model: &ManifoldModel, form: &Tensor) -> Result<Tensor, GeometryError> {
    check_dim(model, form.dim())?;
    let n = model.dim();
    match form.valence() {
        (0, 1) => {
            let half = RationalExpr::from_ratio(1, 2);
            Ok(Tensor::from_fn(n, 0, 2, |ix| {
                let (a, b) = (ix[0], ix[1]);
                if a == b {
                    return RationalExpr::zero();
                }
                let br = model.bracket(a, b);
                let t = model.derive(a, form.get(&[b])) - model.derive(b, form.get(&[a]))
                    - vec::pair(form, &br);
                &half * t
            }))
        }
        (0, 2) => {
            require_antisymmetric(form)?;
            let third = RationalExpr::from_ratio(1, 3);
            let two_form = |u: &[RationalExpr], c: usize| -> RationalExpr {
                (0..n).map(|a| &u[a] * form.get(&[a, c])).sum()
            };
            Ok(Tensor::from_fn(n, 0, 3, |ix| {
                let (a, b, c) = (ix[0], ix[1], ix[2]);
                if a == b || b == c || a == c {
                    return RationalExpr::zero();
                }
                let mut t = RationalExpr::zero();
                for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
                    t = t + model.derive(p, form.get(&[q, r])) - two_form(&model.bracket(p, q), r);
                }
                &third * t
            }))
        }
        (u, l) => Err(GeometryError::UnsupportedValence(u, l)),
    }
}

/// Lie derivative `L_X T` for `T` of valence (1,0), (1,1), (0,1) or (0,2).
pub fn lie_derivative(
    model: &ManifoldModel,
    t: &Tensor,
    x: &[RationalExpr],
) -> Result<Tensor, GeometryError> {
    check_dim(model, x.len())?;
    check_dim(model, t.dim())?;
    let n = model.dim();
    // [X, E_b] for every basis vector.
    let x_e: Vec<Vector> = (0..n)
        .map(|b| lie_bracket(model, x, &vec::basis(n, b)))
        .collect::<Result<_, _>>()?;
    match t.valence() {
        (1, 0) => Ok(Tensor::vector(lie_bracket(model, x, &t.to_vec())?)),
        (1, 1) => {
            let cols: Vec<Vector> = (0..n)
                .map(|b| {
                    let te = vec::apply(t, &vec::basis(n, b));
                    Ok(vec::sub(&lie_bracket(model, x, &te)?, &vec::apply(t, &x_e[b])))
                })
                .collect::<Result<_, GeometryError>>()?;
            Ok(Tensor::from_fn(n, 1, 1, |ix| cols[ix[1]][ix[0]].clone()))
        }
        (0, 1) => Ok(Tensor::from_fn(n, 0, 1, |ix| {
            let b = ix[0];
            directional(model, x, t.get(&[b])) - vec::pair(t, &x_e[b])
        })),
        (0, 2) => Ok(Tensor::from_fn(n, 0, 2, |ix| {
            let (b, c) = (ix[0], ix[1]);
            directional(model, x, t.get(&[b, c]))
                - vec::bilinear(t, &x_e[b], &vec::basis(n, c))
                - vec::bilinear(t, &vec::basis(n, b), &x_e[c])
        })),
        (u, l) => Err(GeometryError::UnsupportedValence(u, l)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ppst_expr::parse_expr;

    fn xyz() -> ManifoldModel {
        ManifoldModel::chart(vec!["x".into(), "y".into(), "z".into()], vec![]).unwrap()
    }

    fn p(s: &str) -> RationalExpr {
        parse_expr(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn coordinate_fields_commute() {
        let m = xyz();
        let b = lie_bracket(&m, &vec::basis(3, 0), &vec::basis(3, 1)).unwrap();
        assert!(vec::is_zero(&b));
    }

    #[test]
    fn bracket_of_example_chart_fields() {
        let m = xyz();
        let e1 = vec![p("4*y"), p("0"), p("z")];
        let e2 = vec![p("0"), p("1"), p("0")];
        assert_eq!(lie_bracket(&m, &e1, &e2).unwrap(), vec![p("-4"), p("0"), p("0")]);
    }

    #[test]
    fn d_of_exact_form_vanishes() {
        let m = xyz();
        let dx = Tensor::covector(vec![p("1"), p("0"), p("0")]);
        assert!(exterior_derivative(&m, &dx).unwrap().is_zero());
    }

    #[test]
    fn d_rejects_symmetric_two_form() {
        let m = xyz();
        let g = Tensor::from_fn(3, 0, 2, |_| RationalExpr::one());
        assert!(exterior_derivative(&m, &g).is_err());
        assert!(matches!(
            exterior_derivative(&m, &Tensor::zeros(3, 1, 1)),
            Err(GeometryError::UnsupportedValence(1, 1))
        ));
    }

    #[test]
    fn lie_derivative_of_function_coefficients() {
        let m = xyz();
        // L_{d_x} (y dx) = 0 and L_{y d_x} dx = dy.
        let form = Tensor::covector(vec![p("y"), p("0"), p("0")]);
        assert!(lie_derivative(&m, &form, &vec::basis(3, 0)).unwrap().is_zero());
        let dx = Tensor::covector(vec![p("1"), p("0"), p("0")]);
        let l = lie_derivative(&m, &dx, &[p("y"), p("0"), p("0")]).unwrap();
        assert_eq!(l.to_vec(), vec![p("0"), p("1"), p("0")]);
    }
}
